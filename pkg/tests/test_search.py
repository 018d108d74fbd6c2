"""Search strategies: constraints, expansion, the queue/greedy contrast."""

import itertools

import pytest

from stubs import TRAP_SCORES, TRAP_SPACE, CountingThreat, ScriptedBinaryThreat, trap_input
from textprobe.errors import ConfigError
from textprobe.lexicon import TransformSpace, prepare_input
from textprobe.search import (
    BUDGET_EXHAUSTED,
    QUEUE_EMPTY,
    SKIPPED,
    SUCCESS,
    Edit,
    SearchConfig,
    SearchNode,
    abfs_search,
    constraint_check,
    expand,
    greedy_search,
    run_search,
)
from textprobe.threat import (
    CachingThreatModel,
    SurrogateSpec,
    SurrogateThreatModel,
    ThreatVerdict,
)

def trap_cfg(strategy, **kwargs):
    kwargs.setdefault("rho_max", 1.0)
    return SearchConfig(strategy=strategy, **kwargs)


def _mini_node(inp, priority=0.9, edits=()):
    return SearchNode(
        surfaces=inp.surfaces,
        text=inp.render(inp.surfaces),
        priority=priority,
        edits=tuple(edits),
        seq=0,
        verdict=ThreatVerdict.from_confidences({"pos": priority, "neg": 1 - priority}),
    )


class TestConstraintCheck:
    def _input(self):
        # Ten perturbable words plus two stop words.
        text = "the alpha bravo charlie delta echo foxtrot golf hotel india juliet of"
        return prepare_input(text, stopwords=frozenset({"the", "of"}))

    def test_boundary_inclusive(self):
        inp = self._input()
        node = _mini_node(inp, edits=[Edit(1, "alpha", "x")])
        assert constraint_check(node, inp, SearchConfig(rho_max=0.10))

    def test_boundary_exceeded(self):
        inp = self._input()
        node = _mini_node(
            inp, edits=[Edit(1, "alpha", "x"), Edit(2, "bravo", "y")]
        )
        assert not constraint_check(node, inp, SearchConfig(rho_max=0.10))

    def test_stopword_edit_rejected(self):
        inp = self._input()
        node = _mini_node(inp, edits=[Edit(0, "the", "x")])
        assert not constraint_check(node, inp, SearchConfig(rho_max=1.0))

    def test_frozen_edit_rejected(self):
        text = "Classify: alpha bravo"
        inp = prepare_input(text, example_span=(10, len(text)))
        node = _mini_node(inp, edits=[Edit(0, "Classify", "x")])
        assert not constraint_check(node, inp, SearchConfig(rho_max=1.0))

    def test_no_edits_always_pass(self):
        inp = self._input()
        assert constraint_check(_mini_node(inp), inp, SearchConfig())


class TestExpand:
    def test_one_child_per_legal_candidate(self):
        inp = trap_input()
        backend = CountingThreat(ScriptedBinaryThreat(TRAP_SCORES))
        threat = CachingThreatModel(backend, 100)
        root = _mini_node(inp)
        children, exhausted = expand(
            root, 1, TRAP_SPACE, threat, "pos", trap_cfg("abfs"), inp,
            itertools.count(1),
        )
        assert not exhausted
        assert [c.text for c in children] == [
            "the film was great", "the picture was great",
        ]
        assert [c.priority for c in children] == [0.714, 0.85]
        assert backend.total_calls == 2

    def test_cached_candidate_costs_nothing(self):
        inp = trap_input()
        backend = CountingThreat(ScriptedBinaryThreat(TRAP_SCORES))
        threat = CachingThreatModel(backend, 100)
        threat.classify("the film was great")
        root = _mini_node(inp)
        expand(root, 1, TRAP_SPACE, threat, "pos", trap_cfg("abfs"), inp,
               itertools.count(1))
        assert backend.calls["the film was great"] == 1

    def test_empty_candidate_list(self):
        inp = trap_input()
        threat = CachingThreatModel(ScriptedBinaryThreat(TRAP_SCORES), 100)
        children, exhausted = expand(
            _mini_node(inp), 0, TRAP_SPACE, threat, "pos", trap_cfg("abfs"),
            inp, itertools.count(1),
        )
        assert children == [] and not exhausted

    def test_budget_exhaustion_returns_partial(self):
        inp = trap_input()
        threat = CachingThreatModel(ScriptedBinaryThreat(TRAP_SCORES), 1)
        children, exhausted = expand(
            _mini_node(inp), 1, TRAP_SPACE, threat, "pos", trap_cfg("abfs"),
            inp, itertools.count(1),
        )
        assert exhausted
        assert [c.text for c in children] == ["the film was great"]

    def test_constrained_candidates_not_queried(self):
        inp = trap_input()
        backend = CountingThreat(ScriptedBinaryThreat(TRAP_SCORES))
        threat = CachingThreatModel(backend, 100)
        root = _mini_node(inp, edits=(Edit(1, "movie", "film"),))
        # rho_max 0.5 over 2 perturbable tokens allows only one edit, so
        # adding an edit at the other position must be dropped pre-query.
        children, _ = expand(
            root, 3, TRAP_SPACE, threat, "pos", trap_cfg("abfs", rho_max=0.5),
            inp, itertools.count(1),
        )
        assert children == []
        assert backend.total_calls == 0


class TestTrapGraph:
    def test_greedy_stalls_at_exact_score(self):
        outcome = greedy_search(
            trap_input(), ScriptedBinaryThreat(TRAP_SCORES), TRAP_SPACE,
            trap_cfg("greedy_plain"), "pos",
        )
        assert outcome.status == QUEUE_EMPTY
        assert outcome.best_case.priority == 0.714
        assert outcome.best_case.text == "the film was great"

    def test_adaptive_greedy_stalls_identically(self):
        outcome = greedy_search(
            trap_input(), ScriptedBinaryThreat(TRAP_SCORES), TRAP_SPACE,
            trap_cfg("greedy"), "pos",
        )
        assert outcome.status == QUEUE_EMPTY
        assert outcome.best_case.priority == 0.714

    @pytest.mark.parametrize("strategy", ["abfs", "bfs_plain"])
    def test_queue_search_escapes_to_flip(self, strategy):
        outcome = abfs_search(
            trap_input(), ScriptedBinaryThreat(TRAP_SCORES), TRAP_SPACE,
            trap_cfg(strategy), "pos",
        )
        assert outcome.status == SUCCESS
        assert outcome.best_case.priority <= 0.497
        assert outcome.best_case.text == "the picture was fine"
        assert outcome.best_case.verdict.label == "neg"

    def test_rejected_sibling_not_revisited(self):
        backend = CountingThreat(ScriptedBinaryThreat(TRAP_SCORES))
        abfs_search(trap_input(), backend, TRAP_SPACE, trap_cfg("abfs"), "pos")
        # "the movie was fine" was scored once but never dequeued: its
        # own probes ("the was fine") must never have been queried.
        assert backend.calls["the movie was fine"] == 1
        assert "the was fine" not in backend.calls

    def test_no_backend_text_repeats(self):
        backend = CountingThreat(ScriptedBinaryThreat(TRAP_SCORES))
        outcome = abfs_search(
            trap_input(), backend, TRAP_SPACE, trap_cfg("abfs"), "pos"
        )
        assert all(count == 1 for count in backend.calls.values())
        assert outcome.queries_used == backend.total_calls


# ---------------------------------------------------------------------------
# Surrogate instances with a known single-substitution flip.
# ---------------------------------------------------------------------------


def _flip_instance():
    words = ["w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8", "w9"]
    weights = {(w, "pos"): 0.35 for w in words}
    # words[7] carries the most weight, so deletion probes rank its
    # position first and every strategy visits it before committing.
    weights[("w7", "pos")] = 0.6
    weights[("zap", "neg")] = 4.0
    for w in words:
        weights[(f"{w}x", "pos")] = 0.28
    spec = SurrogateSpec(("neg", "pos"), weights=weights)
    text = "the " + " ".join(words)
    inp = prepare_input(text, stopwords=frozenset({"the"}))
    lists = [()]
    for i, w in enumerate(words):
        cands = [f"{w}x"]
        if i == 7:
            cands.append("zap")
        lists.append(tuple(cands))
    space = TransformSpace(per_position=tuple(lists), provider="wordnet")
    return inp, SurrogateThreatModel(spec), space


def _enumerate_single_flips(inp, threat, space, y):
    flips = []
    for pos, cands in enumerate(space.per_position):
        for cand in cands:
            surfaces = list(inp.surfaces)
            surfaces[pos] = cand
            if threat.classify(inp.render(surfaces)).label != y:
                flips.append((pos, cand))
    return flips


class TestSingleSubstitutionCompleteness:
    def test_oracle_agrees_with_search(self):
        inp, threat, space = _flip_instance()
        flips = _enumerate_single_flips(inp, threat, space, "pos")
        assert flips == [(8, "zap")]  # position 8 = words[7] after the stop word
        budget = 1 + 10 + sum(len(c) for c in space.per_position)
        outcome = abfs_search(
            inp, threat, space, SearchConfig(max_query=budget), "pos"
        )
        assert outcome.status == SUCCESS
        assert len(outcome.best_case.edits) == 1
        edit = outcome.best_case.edits[0]
        assert (edit.position, edit.replacement) in flips

    def test_greedy_also_succeeds_here(self):
        # The flip word dominates every alternative at its position, so
        # even committing hill climbing finds it.
        inp, threat, space = _flip_instance()
        outcome = greedy_search(
            inp, threat, space, SearchConfig(strategy="greedy"), "pos"
        )
        assert outcome.status == SUCCESS


class TestOutcomeContracts:
    def test_skipped_when_original_misclassified(self):
        inp, threat, space = _flip_instance()
        outcome = run_search(inp, threat, space, SearchConfig(), "neg")
        assert outcome.status == SKIPPED
        assert outcome.queries_used == 1
        assert outcome.best_case.edits == ()

    def test_budget_exhausted_mid_wir(self):
        inp, threat, space = _flip_instance()
        outcome = abfs_search(
            inp, threat, space, SearchConfig(max_query=4), "pos"
        )
        assert outcome.status == BUDGET_EXHAUSTED
        assert outcome.queries_used <= 4
        assert outcome.best_case.edits == ()  # no child ever scored

    def test_emitted_case_satisfies_constraints(self):
        inp, threat, space = _flip_instance()
        for strategy in ("abfs", "bfs_plain", "greedy", "greedy_plain"):
            for budget in (2, 5, 30, 2000):
                outcome = run_search(
                    inp, threat, space,
                    SearchConfig(strategy=strategy, max_query=budget), "pos",
                )
                assert constraint_check(
                    outcome.best_case, inp, SearchConfig(rho_max=0.10)
                )

    def test_best_priority_never_above_root(self):
        inp, threat, space = _flip_instance()
        root_priority = threat.classify(inp.render(inp.surfaces)).score("pos")
        for strategy in ("abfs", "greedy_plain"):
            outcome = run_search(
                inp, threat, space,
                SearchConfig(strategy=strategy, max_query=50), "pos",
            )
            assert outcome.best_case.priority <= root_priority

    @pytest.mark.parametrize("strategy", ["abfs", "bfs_plain", "greedy", "greedy_plain"])
    def test_identical_config_identical_outcome(self, strategy):
        inp, threat, space = _flip_instance()
        cfg = SearchConfig(strategy=strategy, max_query=60)
        a = run_search(inp, threat, space, cfg, "pos")
        b = run_search(inp, threat, space, cfg, "pos")
        assert (a.status, a.best_case.text, a.best_case.priority) == (
            b.status, b.best_case.text, b.best_case.priority
        )
        assert a.queries_used == b.queries_used
        assert a.iterations == b.iterations

    def test_strategy_validation(self):
        with pytest.raises(ConfigError):
            SearchConfig(strategy="banana")
        with pytest.raises(ConfigError):
            SearchConfig(rho_max=0.0)
