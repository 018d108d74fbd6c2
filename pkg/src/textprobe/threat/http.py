"""HTTP adapter for querying a remotely hosted classifier endpoint.

The endpoint receives ``POST {"input": rendered_prompt, "labels": [...]}``
and may answer either ``{"label": L, "confidence": c}`` or
``{"distribution": {label: p, ...}}``. Transport failures and malformed
bodies are retried with a fixed backoff; semantically invalid answers
(unknown label, impossible confidence) fail immediately.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import requests

from textprobe.errors import BackendError, ConfigError, ProtocolError
from textprobe.threat.budget import ThreatModel
from textprobe.threat.verdict import ThreatVerdict, argmax_label

AUTH_TOKEN_ENV = "TEXTPROBE_API_TOKEN"

DEFAULT_TEMPLATE = (
    "Classify the following text into exactly one of these labels: "
    "{labels}. Reply with the label and your confidence.\nText: {input}"
)


@dataclass(frozen=True)
class PromptProtocol:
    """How to talk to an endpoint: where, with which prompt, how patiently."""

    endpoint: str
    template: str = DEFAULT_TEMPLATE
    retry_limit: int = 3
    timeout: float = 30.0
    backoff: float = 1.0

    def __post_init__(self):
        if "{input}" not in self.template or "{labels}" not in self.template:
            raise ConfigError("template must contain {input} and {labels}")

    def render(self, text: str, labels: tuple[str, ...]) -> str:
        return self.template.replace("{labels}", ", ".join(labels)).replace(
            "{input}", text
        )


def _parse_response(data: dict, labels: tuple[str, ...]) -> ThreatVerdict:
    if "distribution" in data:
        dist = data["distribution"]
        if not isinstance(dist, dict) or not dist:
            raise ProtocolError("distribution must be a non-empty object")
        unknown = set(dist) - set(labels)
        if unknown:
            raise ProtocolError(f"labels outside the label set: {sorted(unknown)}")
        values = {}
        for label in labels:
            v = float(dist.get(label, 0.0))
            if v < 0:
                raise ProtocolError(f"negative mass for {label!r}")
            values[label] = v
        total = sum(values.values())
        if total <= 0:
            raise ProtocolError("distribution has no mass")
        confidence = {label: v / total for label, v in values.items()}
        return ThreatVerdict(argmax_label(confidence), confidence)
    label = data["label"]
    raw_conf = float(data["confidence"])
    if label not in labels:
        raise ProtocolError(f"label {label!r} outside the label set")
    if not 0.0 <= raw_conf <= 1.0:
        raise ProtocolError(f"confidence {raw_conf} outside [0, 1]")
    verdict = ThreatVerdict.from_top_label(label, raw_conf, labels)
    if verdict.label != label:
        raise ProtocolError(
            f"reported confidence {raw_conf} is below uniform; "
            f"argmax would be {verdict.label!r}"
        )
    return verdict


def http_classify(
    proto: PromptProtocol,
    text: str,
    labels: tuple[str, ...],
    session: requests.Session | None = None,
) -> ThreatVerdict:
    """Query the endpoint, retrying transport and parse failures."""
    body = {"input": proto.render(text, labels), "labels": list(labels)}
    headers = {}
    token = os.environ.get(AUTH_TOKEN_ENV)
    if token:
        headers["Authorization"] = f"Bearer {token}"
    post = (session or requests).post
    last_body: str | None = None
    attempts = proto.retry_limit + 1
    for attempt in range(attempts):
        if attempt:
            time.sleep(proto.backoff)
        try:
            response = post(
                proto.endpoint, json=body, headers=headers, timeout=proto.timeout
            )
            last_body = response.text
            response.raise_for_status()
            data = response.json()
            if not isinstance(data, dict):
                raise ValueError("response is not a JSON object")
            if "distribution" not in data and not (
                "label" in data and "confidence" in data
            ):
                raise KeyError("label/confidence")
        except ProtocolError:
            raise
        except (requests.RequestException, ValueError, KeyError, TypeError):
            continue
        return _parse_response(data, labels)
    raise BackendError(
        f"no usable response from {proto.endpoint} after {attempts} attempts",
        raw_body=last_body,
    )


class HttpThreatModel(ThreatModel):
    """Adapter binding a :class:`PromptProtocol` to a fixed label set."""

    def __init__(self, proto: PromptProtocol, label_set: tuple[str, ...]):
        if not label_set:
            raise ConfigError("label set must not be empty")
        self.proto = proto
        self.label_set = tuple(label_set)
        self._session = requests.Session()

    def classify(self, text: str) -> ThreatVerdict:
        return http_classify(self.proto, text, self.label_set, self._session)
