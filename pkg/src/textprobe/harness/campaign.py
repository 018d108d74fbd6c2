"""Campaign orchestration: sample, search, persist, aggregate.

A campaign runs one search per sampled example, streams one JSON line per
result (ordered by example id regardless of worker count), and aggregates
per-repeat statistics plus their mean. Result lines exclude wall-clock
fields so identical configurations reproduce byte-identical files;
timings go to a sidecar file next to the results.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from textprobe.errors import ConfigError, TextProbeError
from textprobe.harness.dataset import (
    DatasetRecord,
    example_span,
    load_dataset,
    render_input,
)
from textprobe.lexicon import (
    EmbeddingTable,
    LexiconConfig,
    SynsetLexicon,
    build_transform_space,
    load_embeddings,
    load_stopwords,
    load_wordnet,
    prepare_input,
)
from textprobe.lexicon.stopwords import ENGLISH_STOPWORDS
from textprobe.lexicon.tokenizer import word_tokens
from textprobe.metrics import CampaignStats, change_rate, compute_stats, mean_stats
from textprobe.metrics.ngram import train_ngram
from textprobe.search import SearchConfig, run_search
from textprobe.search.nodes import Edit
from textprobe.threat import (
    HttpThreatModel,
    PromptProtocol,
    SurrogateThreatModel,
    ThreatModel,
    ThreatVerdict,
    load_surrogate,
)

ERROR = "error"


@dataclass
class CampaignConfig:
    dataset_path: str
    dataset_format: str = "jsonl"
    prompt: str = "{example}"
    label_set: tuple[str, ...] = ()
    threat_spec: str | None = None
    provider: str = "wordnet"
    search: SearchConfig = field(default_factory=SearchConfig)
    lexicon: LexiconConfig = field(default_factory=LexiconConfig)
    stopwords_path: str | None = None
    sample_size: int = 1000
    repeat: int = 3
    workers: int | None = None
    out_dir: str = "results"
    ppl_order: int = 3
    ppl_smoothing: float = 1.0


@dataclass
class ResultRecord:
    """One example's outcome, serializable and replayable."""

    example_id: str
    strategy: str
    status: str
    label: str
    original_text: str
    final_text: str
    edits: tuple[Edit, ...]
    original_verdict: ThreatVerdict | None
    final_verdict: ThreatVerdict | None
    queries_used: int
    wall_time: float
    change_rate: float
    ppl_original: float | None
    ppl_final: float | None
    error: str | None = None

    def to_dict(self, include_timing: bool = False) -> dict:
        def verdict_dict(v: ThreatVerdict | None):
            if v is None:
                return None
            return {"label": v.label, "confidence": dict(v.confidence)}

        record = {
            "example_id": self.example_id,
            "strategy": self.strategy,
            "status": self.status,
            "label": self.label,
            "original_text": self.original_text,
            "final_text": self.final_text,
            "edits": [e.to_list() for e in self.edits],
            "original_verdict": verdict_dict(self.original_verdict),
            "final_verdict": verdict_dict(self.final_verdict),
            "queries_used": self.queries_used,
            "change_rate": self.change_rate,
            "ppl_original": self.ppl_original,
            "ppl_final": self.ppl_final,
            "error": self.error,
        }
        if include_timing:
            record["wall_time"] = self.wall_time
        return record


@dataclass
class CampaignReport:
    out_dir: str
    repeats: list[CampaignStats]
    mean: dict
    sample_hashes: list[str]
    records: list[list[ResultRecord]]

    def to_dict(self) -> dict:
        return {
            "out_dir": self.out_dir,
            "repeats": [r.to_dict() for r in self.repeats],
            "mean": self.mean,
            "sample_hashes": self.sample_hashes,
        }


def build_threat(spec: str, label_set: tuple[str, ...]) -> ThreatModel:
    """Instantiate an adapter from ``surrogate:PATH`` or ``http:URL``."""
    kind, _, target = spec.partition(":")
    if kind == "surrogate" and target:
        return SurrogateThreatModel(load_surrogate(target))
    if kind == "http" and target:
        return HttpThreatModel(PromptProtocol(endpoint=target), label_set)
    raise ConfigError(f"unrecognized threat spec {spec!r}")


@dataclass
class _Resources:
    threat: ThreatModel
    lexicon: SynsetLexicon | None
    embeddings: EmbeddingTable | None
    stopwords: frozenset[str]


def _load_resources(cfg: CampaignConfig, threat: ThreatModel | None) -> _Resources:
    if threat is None:
        if cfg.threat_spec is None:
            raise ConfigError("campaign needs a threat adapter or spec")
        threat = build_threat(cfg.threat_spec, cfg.label_set)
    lexicon = None
    if cfg.lexicon.wordnet_dir and cfg.provider in ("wordnet", "random_word"):
        lexicon = load_wordnet(cfg.lexicon.wordnet_dir)
    elif cfg.provider in ("wordnet", "random_word"):
        raise ConfigError(f"provider {cfg.provider!r} needs a wordnet directory")
    embeddings = None
    if cfg.lexicon.embeddings_path:
        embeddings = load_embeddings(cfg.lexicon.embeddings_path)
    elif cfg.provider == "embedding":
        raise ConfigError("embedding provider needs an embeddings file")
    stopwords = (
        load_stopwords(cfg.stopwords_path)
        if cfg.stopwords_path
        else cfg.lexicon.stopword_list or ENGLISH_STOPWORDS
    )
    return _Resources(threat, lexicon, embeddings, stopwords)


def _error_record(record: DatasetRecord, cfg: CampaignConfig, message: str) -> ResultRecord:
    return ResultRecord(
        example_id=record.id,
        strategy=cfg.search.strategy,
        status=ERROR,
        label=record.label,
        original_text=record.text,
        final_text=record.text,
        edits=(),
        original_verdict=None,
        final_verdict=None,
        queries_used=0,
        wall_time=0.0,
        change_rate=0.0,
        ppl_original=None,
        ppl_final=None,
        error=message,
    )


def _run_example(
    cfg: CampaignConfig,
    res: _Resources,
    ppl_model,
    record: DatasetRecord,
    space_seed: str,
) -> ResultRecord:
    try:
        if cfg.label_set and record.label not in cfg.label_set:
            raise ConfigError(
                f"label {record.label!r} outside label set {cfg.label_set}"
            )
        rendered = render_input(cfg.prompt, record.text)
        span = example_span(cfg.prompt, record.text)
        inp = prepare_input(
            rendered,
            lexicon=res.lexicon,
            stopwords=res.stopwords,
            example_span=span,
            freeze_prompt=cfg.lexicon.freeze_prompt,
        )
        space = build_transform_space(
            inp,
            lexicon=res.lexicon,
            embeddings=res.embeddings,
            cfg=cfg.lexicon,
            provider=cfg.provider,
            seed=space_seed,
        )
        outcome = run_search(inp, res.threat, space, cfg.search, record.label)
        best = outcome.best_case
        ppl_original = ppl_model.perplexity(rendered) if ppl_model else None
        ppl_final = ppl_model.perplexity(best.text) if ppl_model else None
        return ResultRecord(
            example_id=record.id,
            strategy=cfg.search.strategy,
            status=outcome.status,
            label=record.label,
            original_text=rendered,
            final_text=best.text,
            edits=best.edits,
            original_verdict=outcome.original_verdict,
            final_verdict=best.verdict,
            queries_used=outcome.queries_used,
            wall_time=outcome.wall_time,
            change_rate=change_rate(best, inp),
            ppl_original=ppl_original,
            ppl_final=ppl_final,
        )
    except Exception as exc:  # record-level failures never abort the campaign
        return _error_record(record, cfg, f"{type(exc).__name__}: {exc}")


def _sample(
    records: Sequence[DatasetRecord], size: int, seed_key: str
) -> list[DatasetRecord]:
    if size > len(records):
        raise ConfigError(
            f"sample_size {size} exceeds dataset size {len(records)}"
        )
    rng = random.Random(seed_key)
    picked = rng.sample(list(records), size)
    return sorted(picked, key=lambda r: r.id)


def _sample_hash(sample: Sequence[DatasetRecord]) -> str:
    joined = "\n".join(r.id for r in sample)
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


def _dump_line(data: dict) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False)


def run_campaign(
    cfg: CampaignConfig, threat: ThreatModel | None = None
) -> CampaignReport:
    """Run the configured searches over a seeded sample, repeat times over.

    Record-level failures become status="error" records and never abort
    the campaign; missing resources abort before any search runs.
    """
    res = _load_resources(cfg, threat)
    records = load_dataset(cfg.dataset_path, cfg.dataset_format)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = cfg.workers or os.cpu_count() or 1
    repeats: list[CampaignStats] = []
    hashes: list[str] = []
    all_records: list[list[ResultRecord]] = []
    for rep in range(cfg.repeat):
        sample = _sample(records, cfg.sample_size, f"{cfg.search.seed}:sample:{rep}")
        hashes.append(_sample_hash(sample))
        rendered = [render_input(cfg.prompt, r.text) for r in sample]
        ppl_model = (
            train_ngram(
                [word_tokens(t) for t in rendered],
                order=cfg.ppl_order,
                smoothing=cfg.ppl_smoothing,
            )
            if rendered
            else None
        )
        seeds = [f"{cfg.search.seed}:{rep}:{r.id}" for r in sample]
        results_path = out_dir / f"results_r{rep}.jsonl"
        timings_path = out_dir / f"timings_r{rep}.jsonl"
        rep_records: list[ResultRecord] = []
        with open(results_path, "w", encoding="utf-8") as results_file, open(
            timings_path, "w", encoding="utf-8"
        ) as timings_file:
            if sample:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    for result in pool.map(
                        lambda pair: _run_example(cfg, res, ppl_model, *pair),
                        zip(sample, seeds),
                    ):
                        rep_records.append(result)
                        results_file.write(_dump_line(result.to_dict()) + "\n")
                        timings_file.write(
                            _dump_line(
                                {
                                    "example_id": result.example_id,
                                    "wall_time": result.wall_time,
                                }
                            )
                            + "\n"
                        )
        repeats.append(compute_stats(rep_records))
        all_records.append(rep_records)
    report = CampaignReport(
        out_dir=str(out_dir),
        repeats=repeats,
        mean=mean_stats(repeats),
        sample_hashes=hashes,
        records=all_records,
    )
    with open(out_dir / "report.json", "w", encoding="utf-8") as handle:
        json.dump(
            {"config": _config_echo(cfg), **report.to_dict()},
            handle,
            sort_keys=True,
            indent=2,
        )
        handle.write("\n")
    return report


def _config_echo(cfg: CampaignConfig) -> dict:
    return {
        "dataset_path": str(cfg.dataset_path),
        "dataset_format": cfg.dataset_format,
        "prompt": cfg.prompt,
        "label_set": list(cfg.label_set),
        "threat_spec": cfg.threat_spec,
        "provider": cfg.provider,
        "strategy": cfg.search.strategy,
        "max_query": cfg.search.max_query,
        "rho_max": cfg.search.rho_max,
        "seed": cfg.search.seed,
        "k1": cfg.lexicon.k1,
        "k2": cfg.search.k2,
        "sample_size": cfg.sample_size,
        "repeat": cfg.repeat,
    }


def compare_strategies(
    cfg: CampaignConfig,
    strategies: Sequence[str] | None = None,
    providers: Sequence[str] | None = None,
    threat: ThreatModel | None = None,
) -> list[tuple[str, CampaignReport]]:
    """Run each variant over the identical sample and collect one row each.

    Variants come from the strategy list, the provider list, or their
    product; fewer than two variants is a configuration error. The shared
    sample hash is recorded in ``ablation.json``.
    """
    from dataclasses import replace as dc_replace

    strategies = list(strategies) if strategies else [cfg.search.strategy]
    providers = list(providers) if providers else [cfg.provider]
    variants = [(s, p) for s in strategies for p in providers]
    if len(variants) < 2:
        raise ConfigError("ablation needs at least two variants")
    base_out = Path(cfg.out_dir)
    rows: list[tuple[str, CampaignReport]] = []
    for strategy, provider in variants:
        label = strategy if len(providers) == 1 else f"{strategy}+{provider}"
        sub_cfg = dc_replace(
            cfg,
            search=dc_replace(cfg.search, strategy=strategy),
            provider=provider,
            out_dir=str(base_out / label),
        )
        rows.append((label, run_campaign(sub_cfg, threat)))
    hashes = {tuple(report.sample_hashes) for _, report in rows}
    if len(hashes) != 1:
        raise TextProbeError("variants diverged on the shared sample")
    base_out.mkdir(parents=True, exist_ok=True)
    with open(base_out / "ablation.json", "w", encoding="utf-8") as handle:
        json.dump(
            {
                "sample_hashes": rows[0][1].sample_hashes,
                "rows": {
                    label: {"mean": rep.mean, "repeats": [s.to_dict() for s in rep.repeats]}
                    for label, rep in rows
                },
            },
            handle,
            sort_keys=True,
            indent=2,
        )
        handle.write("\n")
    return rows


def load_successful_cases(results_path: str | Path) -> list[tuple[str, str]]:
    """(final_text, true_label) pairs for every success in a results file."""
    cases = []
    with open(results_path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            data = json.loads(line)
            if data.get("status") == "success":
                cases.append((data["final_text"], data["label"]))
    return cases
