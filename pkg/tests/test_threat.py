"""Verdict invariants, surrogate scoring, and the budget/cache ledger."""

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stubs import ConstantThreat, CountingThreat
from textprobe.errors import BudgetExhausted, ConfigError
from textprobe.threat import (
    CachingThreatModel,
    SurrogateSpec,
    SurrogateThreatModel,
    ThreatVerdict,
    surrogate_classify,
)


class TestVerdict:
    def test_label_must_be_argmax(self):
        with pytest.raises(ValueError):
            ThreatVerdict("a", {"a": 0.2, "b": 0.8})

    def test_sum_must_be_one(self):
        with pytest.raises(ValueError):
            ThreatVerdict("a", {"a": 0.6, "b": 0.6})

    def test_tie_breaks_lexicographically(self):
        v = ThreatVerdict.from_confidences({"b": 0.5, "a": 0.5})
        assert v.label == "a"

    def test_top_label_spreads_remainder(self):
        v = ThreatVerdict.from_top_label("Positive", 0.95, ("Positive", "Negative"))
        assert v.confidence == {"Positive": 0.95, "Negative": pytest.approx(0.05)}

    def test_score_for_unknown_label_is_zero(self):
        v = ThreatVerdict.from_confidences({"a": 1.0})
        assert v.score("zzz") == 0.0

    @given(
        st.dictionaries(
            st.sampled_from(["a", "b", "c", "d"]),
            st.floats(min_value=0.001, max_value=1.0),
            min_size=1,
        )
    )
    def test_normalized_maps_always_valid(self, raw):
        total = sum(raw.values())
        v = ThreatVerdict.from_confidences({k: x / total for k, x in raw.items()})
        assert abs(sum(v.confidence.values()) - 1.0) <= 1e-6
        assert v.label in raw


class TestSurrogate:
    def test_single_weight_closed_form(self):
        spec = SurrogateSpec(("neg", "pos"), weights={("good", "pos"): 2.0})
        v = surrogate_classify(spec, "a good day")
        expected = math.exp(2) / (math.exp(2) + 1)
        assert v.score("pos") == pytest.approx(expected, abs=1e-12)
        assert v.label == "pos"

    def test_no_weighted_words_is_uniform(self):
        spec = SurrogateSpec(("neg", "pos"))
        v = surrogate_classify(spec, "nothing scored here")
        assert v.confidence == {"neg": 0.5, "pos": 0.5}
        assert v.label == "neg"  # lexicographic tie-break

    def test_three_labels_uniform(self):
        spec = SurrogateSpec(("a", "b", "c"))
        v = surrogate_classify(spec, "x")
        for value in v.confidence.values():
            assert value == pytest.approx(1 / 3)

    def test_forced_sign(self):
        spec = SurrogateSpec(
            ("neg", "pos"),
            weights={("boost", "pos"): 1.0, ("dampen", "neg"): 1.0},
        )
        assert surrogate_classify(spec, "dampen").label == "neg"
        assert surrogate_classify(spec, "boost").label == "pos"

    def test_token_multiplicity_counts(self):
        spec = SurrogateSpec(("neg", "pos"), weights={("good", "pos"): 1.0})
        once = surrogate_classify(spec, "good").score("pos")
        twice = surrogate_classify(spec, "good good").score("pos")
        assert twice > once

    def test_fifty_token_fixture_matches_bruteforce(self):
        rng = random.Random(99)
        labels = ("alpha", "beta", "gamma")
        vocab = [f"w{i}" for i in range(30)]
        weights = {
            (w, l): rng.uniform(-1, 1) for w in vocab for l in labels
        }
        bias = {l: rng.uniform(-0.5, 0.5) for l in labels}
        spec = SurrogateSpec(labels, weights=weights, bias=bias, temperature=1.7)
        tokens = [rng.choice(vocab) for _ in range(50)]
        text = " ".join(tokens)
        # Independent recomputation, spreadsheet style.
        scores = {}
        for label in labels:
            s = bias[label]
            for tok in tokens:
                s = s + weights[(tok, label)]
            scores[label] = s / 1.7
        peak = max(scores.values())
        exps = {l: math.exp(s - peak) for l, s in scores.items()}
        norm = sum(exps.values())
        expected = {l: e / norm for l, e in exps.items()}
        got = surrogate_classify(spec, text)
        for label in labels:
            assert got.confidence[label] == pytest.approx(expected[label], abs=1e-9)

    @given(st.floats(min_value=-5, max_value=5))
    def test_uniform_bias_shift_invariance(self, shift):
        labels = ("neg", "pos")
        weights = {("boost", "pos"): 1.2, ("calm", "neg"): 0.4}
        base = SurrogateSpec(labels, weights=weights, bias={"neg": 0.1, "pos": -0.3})
        shifted = SurrogateSpec(
            labels,
            weights=weights,
            bias={"neg": 0.1 + shift, "pos": -0.3 + shift},
        )
        text = "boost calm boost"
        a = surrogate_classify(base, text)
        b = surrogate_classify(shifted, text)
        for label in labels:
            assert a.confidence[label] == pytest.approx(b.confidence[label], abs=1e-9)

    def test_spec_validation(self):
        with pytest.raises(ConfigError):
            SurrogateSpec(())
        with pytest.raises(ConfigError):
            SurrogateSpec(("a",), temperature=0.0)

    def test_json_round_trip(self, tmp_path):
        spec = SurrogateSpec(
            ("neg", "pos"),
            weights={("good", "pos"): 2.0, ("good", "neg"): -1.0},
            bias={"neg": 0.5},
            temperature=2.0,
        )
        restored = SurrogateSpec.from_dict(spec.to_dict())
        assert restored == spec


class TestBudgetAndCache:
    def _model(self, max_query=10):
        backend = CountingThreat(ConstantThreat("pos", ("neg", "pos")))
        return CachingThreatModel(backend, max_query=max_query), backend

    def test_cache_hit_repeats_verdict_without_backend_call(self):
        model, backend = self._model()
        first = model.classify("hello")
        second = model.classify("hello")
        assert first == second
        assert backend.calls["hello"] == 1
        assert model.ledger.used == 1
        assert model.ledger.cache_hits == 1

    def test_budget_raised_before_backend_call(self):
        model, backend = self._model(max_query=1)
        model.classify("one")
        with pytest.raises(BudgetExhausted):
            model.classify("two")
        assert backend.calls["two"] == 0
        assert model.ledger.used == 1

    def test_cache_hits_allowed_after_exhaustion(self):
        model, _ = self._model(max_query=1)
        model.classify("one")
        assert model.classify("one").label == "pos"

    def test_used_equals_distinct_backend_inputs(self):
        model, backend = self._model(max_query=100)
        rng = random.Random(3)
        texts = [f"text {rng.randrange(10)}" for _ in range(50)]
        for t in texts:
            model.classify(t)
        assert model.ledger.used == len(set(texts))
        assert backend.total_calls == model.ledger.used
        assert all(count == 1 for count in backend.calls.values())

    def test_budget_monotone_and_bounded(self):
        model, _ = self._model(max_query=5)
        seen = [model.ledger.used]
        for i in range(8):
            try:
                model.classify(f"t{i}")
            except BudgetExhausted:
                pass
            seen.append(model.ledger.used)
        assert seen == sorted(seen)
        assert model.ledger.used <= 5

    def test_max_query_validation(self):
        with pytest.raises(ConfigError):
            self._model(max_query=0)

    def test_surrogate_adapter_is_deterministic(self):
        spec = SurrogateSpec(("neg", "pos"), weights={("good", "pos"): 1.0})
        model = SurrogateThreatModel(spec)
        assert model.classify("good day") == model.classify("good day")
