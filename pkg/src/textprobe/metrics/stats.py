"""Campaign evaluation indicators and transfer analysis.

All ratios are reported in percent. Success rate counts initially
misclassified (skipped) examples in the denominator; a conditional rate
over the non-skipped examples is reported alongside. Change rate,
perplexity, time, and query costs are averaged over successful cases
only; with no successes those come back as ``None`` and render as a dash.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from textprobe.errors import UndefinedMetric
from textprobe.lexicon.tokenizer import TokenizedInput
from textprobe.search.nodes import SearchNode
from textprobe.search.strategies import SKIPPED, SUCCESS
from textprobe.threat.budget import ThreatModel


def success_rate(n_suc: int, n: int) -> float:
    if n <= 0:
        raise UndefinedMetric("success rate over zero examples")
    return n_suc / n * 100.0


def change_rate(case: SearchNode, original: TokenizedInput) -> float:
    """Edited positions as a percentage of all original tokens."""
    if len(original) == 0:
        return 0.0
    return len(case.edits) / len(original) * 100.0


def efficiency_stats(
    outcomes: Iterable,
) -> tuple[float | None, float | None]:
    """Mean wall time and mean query count over successful outcomes."""
    times = []
    queries = []
    for outcome in outcomes:
        if outcome.status == SUCCESS:
            times.append(outcome.wall_time)
            queries.append(outcome.queries_used)
    if not times:
        return None, None
    return sum(times) / len(times), sum(queries) / len(queries)


def transfer_evaluate(
    cases: Sequence[tuple[str, str]], threat: ThreatModel
) -> float:
    """Percentage of (text, true_label) cases that also fool ``threat``."""
    if not cases:
        raise UndefinedMetric("transfer rate over zero cases")
    fooled = sum(
        1 for text, label in cases if threat.classify(text).label != label
    )
    return fooled / len(cases) * 100.0


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


@dataclass
class CampaignStats:
    """Aggregated indicators for one strategy over one sample."""

    n: int
    n_suc: int
    skipped: int
    by_status: dict[str, int] = field(default_factory=dict)
    s_rate: float = 0.0
    s_rate_conditional: float | None = None
    c_rate: float | None = None
    ppl: float | None = None
    t_o: float | None = None
    q_n: float | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "n_suc": self.n_suc,
            "skipped": self.skipped,
            "by_status": dict(sorted(self.by_status.items())),
            "s_rate": self.s_rate,
            "s_rate_conditional": self.s_rate_conditional,
            "c_rate": self.c_rate,
            "ppl": self.ppl,
            "t_o": self.t_o,
            "q_n": self.q_n,
        }


def compute_stats(records: Sequence) -> CampaignStats:
    """Fold per-example result records into one stats row.

    Records need ``status``, ``change_rate``, ``ppl_final``,
    ``wall_time`` and ``queries_used`` attributes.
    """
    n = len(records)
    if n == 0:
        return CampaignStats(n=0, n_suc=0, skipped=0)
    by_status: dict[str, int] = {}
    for r in records:
        by_status[r.status] = by_status.get(r.status, 0) + 1
    n_suc = by_status.get(SUCCESS, 0)
    skipped = by_status.get(SKIPPED, 0)
    successes = [r for r in records if r.status == SUCCESS]
    cond_n = n - skipped
    finite_ppl = [
        r.ppl_final for r in successes
        if r.ppl_final is not None and r.ppl_final != float("inf")
    ]
    return CampaignStats(
        n=n,
        n_suc=n_suc,
        skipped=skipped,
        by_status=by_status,
        s_rate=success_rate(n_suc, n),
        s_rate_conditional=(
            success_rate(n_suc, cond_n) if cond_n > 0 else None
        ),
        c_rate=_mean([r.change_rate for r in successes]),
        ppl=_mean(finite_ppl),
        t_o=_mean([r.wall_time for r in successes]),
        q_n=_mean([float(r.queries_used) for r in successes]),
    )


def mean_stats(rows: Sequence[CampaignStats]) -> dict:
    """Field-wise mean over repeat blocks; undefined fields stay undefined."""
    if not rows:
        return {}
    out: dict[str, float | None] = {}
    for key in ("s_rate", "s_rate_conditional", "c_rate", "ppl", "t_o", "q_n"):
        values = [getattr(r, key) for r in rows if getattr(r, key) is not None]
        out[key] = _mean(values)
    out["n"] = sum(r.n for r in rows) / len(rows)
    out["n_suc"] = sum(r.n_suc for r in rows) / len(rows)
    out["skipped"] = sum(r.skipped for r in rows) / len(rows)
    return out
