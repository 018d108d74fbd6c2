"""Black-box classifier adapters, query budgeting, and caching."""

from textprobe.threat.budget import CachingThreatModel, QueryLedger, ThreatModel
from textprobe.threat.http import (
    AUTH_TOKEN_ENV,
    DEFAULT_TEMPLATE,
    HttpThreatModel,
    PromptProtocol,
    http_classify,
)
from textprobe.threat.surrogate import (
    SurrogateSpec,
    SurrogateThreatModel,
    load_surrogate,
    surrogate_classify,
)
from textprobe.threat.verdict import ThreatVerdict, argmax_label

__all__ = [
    "AUTH_TOKEN_ENV",
    "CachingThreatModel",
    "DEFAULT_TEMPLATE",
    "HttpThreatModel",
    "PromptProtocol",
    "QueryLedger",
    "SurrogateSpec",
    "SurrogateThreatModel",
    "ThreatModel",
    "ThreatVerdict",
    "argmax_label",
    "http_classify",
    "load_surrogate",
    "surrogate_classify",
]
