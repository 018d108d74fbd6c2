"""Search strategies over the substitution space.

``abfs`` keeps a global min-heap frontier: every dequeued node is
re-scored with the adaptive importance ranking, its positions are
expanded in importance order, and only children that strictly improve on
the best case seen so far enter the queue. ``bfs_plain`` is the same loop
without the adaptive history. The greedy variants commit to the first
position whose best child improves on the current node and throw the
siblings away, which is cheaper but can strand the search in a local
optimum the queue-based variants escape.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator

from textprobe.errors import BudgetExhausted, ConfigError
from textprobe.lexicon.tokenizer import TokenizedInput
from textprobe.lexicon.transform import TransformSpace
from textprobe.search.nodes import Edit, NodeQueue, SearchNode
from textprobe.search.wir import (
    SKIP,
    WirState,
    adaptive_adjust,
    ground_truth_deltas,
    record_delta,
    wir_scores,
)
from textprobe.threat.budget import CachingThreatModel, ThreatModel
from textprobe.threat.verdict import ThreatVerdict

STRATEGIES = ("abfs", "bfs_plain", "greedy", "greedy_plain")

SUCCESS = "success"
BUDGET_EXHAUSTED = "budget_exhausted"
QUEUE_EMPTY = "queue_empty"
SKIPPED = "skipped"


@dataclass(frozen=True)
class SearchConfig:
    strategy: str = "abfs"
    max_query: int = 3000
    rho_max: float = 0.10
    seed: int = 0
    k2: int = 5
    alpha: tuple[float, ...] = ()

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if not 0 < self.rho_max <= 1:
            raise ConfigError("rho_max must be in (0, 1]")
        if self.max_query < 1:
            raise ConfigError("max_query must be positive")

    @property
    def adaptive(self) -> bool:
        return self.strategy in ("abfs", "greedy")


@dataclass
class SearchOutcome:
    status: str
    best_case: SearchNode
    queries_used: int
    wall_time: float
    iterations: int
    original_verdict: ThreatVerdict | None = None


def _edits_ok(
    edits: tuple[Edit, ...], original: TokenizedInput, cfg: SearchConfig
) -> bool:
    if not edits:
        return True
    for edit in edits:
        tok = original.tokens[edit.position]
        if tok.is_stopword or tok.is_frozen:
            return False
    perturbable = original.perturbable_count
    if perturbable == 0:
        return False
    return len(edits) / perturbable <= cfg.rho_max


def constraint_check(
    candidate: SearchNode, original: TokenizedInput, cfg: SearchConfig
) -> bool:
    """True iff no edit touches a stop-word/frozen position and the edit
    count stays within ``rho_max`` of the perturbable token count."""
    return _edits_ok(candidate.edits, original, cfg)


def _child_edits(
    node: SearchNode, position: int, original: TokenizedInput, replacement: str
) -> tuple[Edit, ...]:
    kept = [e for e in node.edits if e.position != position]
    kept.append(Edit(position, original.tokens[position].surface, replacement))
    return tuple(sorted(kept, key=lambda e: e.position))


def expand(
    node: SearchNode,
    position: int,
    space: TransformSpace,
    threat: ThreatModel,
    y: str,
    cfg: SearchConfig,
    inp: TokenizedInput,
    counter: Iterator[int],
) -> tuple[list[SearchNode], bool]:
    """Score one child per candidate at ``position`` that passes constraints.

    Candidates failing the constraints are dropped without a query. On
    budget exhaustion the children scored so far are returned with the
    exhaustion flag set.
    """
    children: list[SearchNode] = []
    for candidate in space.per_position[position]:
        if candidate == node.surfaces[position]:
            continue
        edits = _child_edits(node, position, inp, candidate)
        if not _edits_ok(edits, inp, cfg):
            continue
        surfaces = (
            node.surfaces[:position] + (candidate,) + node.surfaces[position + 1:]
        )
        text = inp.render(surfaces)
        try:
            verdict = threat.classify(text)
        except BudgetExhausted:
            return children, True
        children.append(
            SearchNode(
                surfaces=surfaces,
                text=text,
                priority=verdict.score(y),
                edits=edits,
                seq=next(counter),
                verdict=verdict,
            )
        )
    return children, False


def _root_node(
    inp: TokenizedInput, threat: ThreatModel, y: str, counter: Iterator[int]
) -> SearchNode:
    text = inp.render(inp.surfaces)
    verdict = threat.classify(text)
    return SearchNode(
        surfaces=inp.surfaces,
        text=text,
        priority=verdict.score(y),
        edits=(),
        seq=next(counter),
        verdict=verdict,
    )


def _ranked_positions(
    scores: list[float], space: TransformSpace
) -> list[int]:
    """Perturbable positions with candidates, best score first, ties by index."""
    usable = [
        (i, s)
        for i, s in enumerate(scores)
        if s != SKIP and space.per_position[i]
    ]
    usable.sort(key=lambda item: (-item[1], item[0]))
    return [i for i, _ in usable]


def _scored_order(
    inp: TokenizedInput,
    cur: SearchNode,
    threat: ThreatModel,
    y: str,
    state: WirState,
    adaptive: bool,
    space: TransformSpace,
) -> list[int]:
    scores = wir_scores(inp, cur, threat, y)
    if adaptive:
        deltas = ground_truth_deltas(inp, cur, threat, y)
        for i, delta in enumerate(deltas):
            if delta is not None:
                record_delta(state, i, delta)
        scores = adaptive_adjust(scores, state)
    return _ranked_positions(scores, space)


def _pick_flip(children: list[SearchNode], y: str) -> SearchNode | None:
    flipped = [c for c in children if c.verdict.label != y]
    if not flipped:
        return None
    return min(flipped, key=lambda c: (c.priority, c.seq))


def abfs_search(
    inp: TokenizedInput,
    threat: ThreatModel,
    space: TransformSpace,
    cfg: SearchConfig,
    y: str,
) -> SearchOutcome:
    """Best-first search guided by (optionally adaptive) importance ranking.

    The original input seeds the queue; while budget remains and the queue
    is non-empty, the minimum-priority node is dequeued, re-ranked, and
    expanded position by position. Children strictly better than the
    current best case are enqueued; any child that flips the predicted
    label ends the search immediately. On budget exhaustion or an empty
    queue the best case found so far is returned regardless.
    """
    start = time.perf_counter()
    budgeted = CachingThreatModel(threat, cfg.max_query)
    counter = itertools.count()
    root = _root_node(inp, budgeted, y, counter)
    if root.verdict.label != y:
        return SearchOutcome(
            SKIPPED, root, budgeted.ledger.used,
            time.perf_counter() - start, 0, root.verdict,
        )
    queue = NodeQueue()
    queue.push(root)
    best = root
    state = WirState(k2=cfg.k2, alpha=cfg.alpha)
    iterations = 0
    status = None
    while status is None:
        if budgeted.remaining <= 0:
            status = BUDGET_EXHAUSTED
            break
        if not queue:
            status = QUEUE_EMPTY
            break
        cur = queue.pop()
        iterations += 1
        try:
            order = _scored_order(
                inp, cur, budgeted, y, state, cfg.adaptive, space
            )
        except BudgetExhausted:
            status = BUDGET_EXHAUSTED
            break
        for position in order:
            children, exhausted = expand(
                cur, position, space, budgeted, y, cfg, inp, counter
            )
            for child in children:
                if child.priority < best.priority:
                    queue.push(child)
            if queue and queue.peek().priority < best.priority:
                best = queue.peek()
            flip = _pick_flip(children, y)
            if flip is not None:
                best = flip
                status = SUCCESS
                break
            if exhausted:
                status = BUDGET_EXHAUSTED
                break
    return SearchOutcome(
        status, best, budgeted.ledger.used,
        time.perf_counter() - start, iterations, root.verdict,
    )


def greedy_search(
    inp: TokenizedInput,
    threat: ThreatModel,
    space: TransformSpace,
    cfg: SearchConfig,
    y: str,
) -> SearchOutcome:
    """Hill-climbing variant: commit to the best improving child, no queue.

    Positions are tried in importance order; at the first position whose
    best child strictly lowers the current priority the search commits and
    re-ranks from there, discarding all siblings. When no position offers
    an improvement the search stalls and reports the node it is stuck on.
    """
    start = time.perf_counter()
    budgeted = CachingThreatModel(threat, cfg.max_query)
    counter = itertools.count()
    root = _root_node(inp, budgeted, y, counter)
    if root.verdict.label != y:
        return SearchOutcome(
            SKIPPED, root, budgeted.ledger.used,
            time.perf_counter() - start, 0, root.verdict,
        )
    cur = root
    state = WirState(k2=cfg.k2, alpha=cfg.alpha)
    iterations = 0
    status = None
    while status is None:
        if budgeted.remaining <= 0:
            status = BUDGET_EXHAUSTED
            break
        iterations += 1
        try:
            order = _scored_order(
                inp, cur, budgeted, y, state, cfg.adaptive, space
            )
        except BudgetExhausted:
            status = BUDGET_EXHAUSTED
            break
        moved = False
        for position in order:
            children, exhausted = expand(
                cur, position, space, budgeted, y, cfg, inp, counter
            )
            flip = _pick_flip(children, y)
            if flip is not None:
                cur = flip
                status = SUCCESS
                break
            if children:
                best_child = min(children, key=lambda c: (c.priority, c.seq))
                if best_child.priority < cur.priority:
                    cur = best_child
                    moved = True
                    break
            if exhausted:
                status = BUDGET_EXHAUSTED
                break
        if status is None and not moved:
            status = QUEUE_EMPTY  # no improving move left anywhere
    return SearchOutcome(
        status, cur, budgeted.ledger.used,
        time.perf_counter() - start, iterations, root.verdict,
    )


def run_search(
    inp: TokenizedInput,
    threat: ThreatModel,
    space: TransformSpace,
    cfg: SearchConfig,
    y: str,
) -> SearchOutcome:
    """Dispatch on ``cfg.strategy``."""
    if cfg.strategy in ("abfs", "bfs_plain"):
        return abfs_search(inp, threat, space, cfg, y)
    return greedy_search(inp, threat, space, cfg, y)
