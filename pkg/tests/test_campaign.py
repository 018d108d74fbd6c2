"""Campaign orchestration: determinism, replayability, aggregation."""

import json
from dataclasses import replace
from pathlib import Path

import pytest

from textprobe.errors import ConfigError
from textprobe.harness import (
    CampaignConfig,
    compare_strategies,
    load_successful_cases,
    run_campaign,
)
from textprobe.lexicon import LexiconConfig
from textprobe.search import SearchConfig
from textprobe.synthetic import synthetic_benchmark, write_benchmark
from textprobe.threat import SurrogateThreatModel, load_surrogate, surrogate_classify


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory) -> Path:
    directory = tmp_path_factory.mktemp("bench")
    write_benchmark(synthetic_benchmark(n_examples=20, seed=3), directory)
    return directory


def _config(bench_dir: Path, out: Path, **kwargs) -> CampaignConfig:
    search = kwargs.pop(
        "search",
        SearchConfig(strategy="abfs", max_query=300, rho_max=0.18, seed=11),
    )
    return CampaignConfig(
        dataset_path=str(bench_dir / "dataset.jsonl"),
        prompt="{example}",
        label_set=("neg", "pos"),
        threat_spec=f"surrogate:{bench_dir / 'surrogate.json'}",
        provider="wordnet",
        search=search,
        lexicon=LexiconConfig(k1=25, wordnet_dir=str(bench_dir / "wordnet")),
        sample_size=kwargs.pop("sample_size", 10),
        repeat=kwargs.pop("repeat", 1),
        workers=kwargs.pop("workers", 1),
        out_dir=str(out),
        **kwargs,
    )


class TestDeterminism:
    def test_worker_count_does_not_change_bytes(self, bench_dir, tmp_path):
        blobs = []
        for run, workers in enumerate([1, 8, 1, 8, 1, 8]):
            out = tmp_path / f"run{run}"
            run_campaign(_config(bench_dir, out, workers=workers, repeat=2))
            blobs.append(
                tuple(
                    (out / f"results_r{r}.jsonl").read_bytes() for r in range(2)
                )
            )
        assert len(set(blobs)) == 1

    def test_different_seed_changes_sample(self, bench_dir, tmp_path):
        a = run_campaign(_config(bench_dir, tmp_path / "a"))
        b = run_campaign(
            _config(
                bench_dir,
                tmp_path / "b",
                search=SearchConfig(strategy="abfs", max_query=300,
                                    rho_max=0.18, seed=12),
            )
        )
        assert a.sample_hashes != b.sample_hashes


@pytest.fixture(scope="module")
def report(bench_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("campaign")
    return run_campaign(_config(bench_dir, out, sample_size=20)), out


class TestResults:
    def test_results_ordered_by_id(self, report):
        _, out = report
        ids = [
            json.loads(line)["example_id"]
            for line in (out / "results_r0.jsonl").read_text().splitlines()
        ]
        assert ids == sorted(ids)
        assert len(ids) == 20

    def test_final_verdict_replays(self, report, bench_dir):
        rep, out = report
        spec = load_surrogate(bench_dir / "surrogate.json")
        for line in (out / "results_r0.jsonl").read_text().splitlines():
            data = json.loads(line)
            recorded = data["final_verdict"]
            fresh = surrogate_classify(spec, data["final_text"])
            assert fresh.label == recorded["label"]
            for label, value in recorded["confidence"].items():
                assert fresh.confidence[label] == pytest.approx(value, abs=1e-12)

    def test_success_records_flip_the_label(self, report):
        rep, out = report
        for line in (out / "results_r0.jsonl").read_text().splitlines():
            data = json.loads(line)
            if data["status"] == "success":
                assert data["final_verdict"]["label"] != data["label"]
                assert data["edits"]

    def test_no_timing_in_results_but_sidecar_has_it(self, report):
        _, out = report
        for line in (out / "results_r0.jsonl").read_text().splitlines():
            assert "wall_time" not in json.loads(line)
        timing_lines = (out / "timings_r0.jsonl").read_text().splitlines()
        assert all("wall_time" in json.loads(line) for line in timing_lines)
        assert len(timing_lines) == 20

    def test_report_json_written(self, report):
        rep, out = report
        data = json.loads((out / "report.json").read_text())
        assert data["mean"]["s_rate"] == pytest.approx(rep.mean["s_rate"])
        assert len(data["repeats"]) == 1


class TestAggregation:
    def test_repeat_blocks_and_mean(self, bench_dir, tmp_path):
        rep = run_campaign(_config(bench_dir, tmp_path / "r", repeat=3))
        assert len(rep.repeats) == 3
        assert len(rep.sample_hashes) == 3
        rates = [block.s_rate for block in rep.repeats]
        assert rep.mean["s_rate"] == pytest.approx(sum(rates) / 3)

    def test_empty_sample(self, bench_dir, tmp_path):
        rep = run_campaign(_config(bench_dir, tmp_path / "e", sample_size=0))
        assert rep.repeats[0].n == 0
        assert (tmp_path / "e" / "results_r0.jsonl").exists()

    def test_oversized_sample_rejected(self, bench_dir, tmp_path):
        with pytest.raises(ConfigError, match="sample_size"):
            run_campaign(_config(bench_dir, tmp_path / "x", sample_size=21))

    def test_label_outside_set_is_error_record(self, bench_dir, tmp_path):
        dataset = tmp_path / "odd.jsonl"
        dataset.write_text(
            '{"id": "1", "text": "anything here", "label": "mystery"}\n'
        )
        cfg = replace(
            _config(bench_dir, tmp_path / "err", sample_size=1),
            dataset_path=str(dataset),
        )
        rep = run_campaign(cfg)
        record = rep.records[0][0]
        assert record.status == "error"
        assert "mystery" in record.error

    def test_prompt_region_never_edited(self, bench_dir, tmp_path):
        prompt = "Classify the market sentiment: {example}"
        cfg = replace(
            _config(bench_dir, tmp_path / "prompted", sample_size=10),
            prompt=prompt,
        )
        rep = run_campaign(cfg)
        prefix = prompt.split("{example}")[0]
        boundary = len(prefix.encode("utf-8"))
        from textprobe.lexicon import tokenize

        for record in rep.records[0]:
            assert record.original_text.startswith(prefix)
            tokens = tokenize(record.original_text).tokens
            for edit in record.edits:
                assert tokens[edit.position].start >= boundary

    def test_initially_misclassified_is_skipped(self, bench_dir, tmp_path):
        bench = synthetic_benchmark(n_examples=2, seed=3)
        flipped = bench.records[0]
        wrong = "neg" if flipped.label == "pos" else "pos"
        dataset = tmp_path / "skew.jsonl"
        dataset.write_text(
            json.dumps({"id": "1", "text": flipped.text, "label": wrong}) + "\n"
        )
        cfg = replace(
            _config(bench_dir, tmp_path / "skip", sample_size=1),
            dataset_path=str(dataset),
        )
        rep = run_campaign(cfg)
        assert rep.records[0][0].status == "skipped"
        assert rep.repeats[0].skipped == 1


class TestAblation:
    def test_rows_share_identical_sample(self, bench_dir, tmp_path):
        cfg = _config(bench_dir, tmp_path / "ab")
        rows = compare_strategies(cfg, ["abfs", "bfs_plain", "greedy_plain"])
        assert [label for label, _ in rows] == ["abfs", "bfs_plain", "greedy_plain"]
        hashes = {tuple(rep.sample_hashes) for _, rep in rows}
        assert len(hashes) == 1
        data = json.loads((tmp_path / "ab" / "ablation.json").read_text())
        assert set(data["rows"]) == {"abfs", "bfs_plain", "greedy_plain"}

    def test_provider_matrix(self, bench_dir, tmp_path):
        import random

        from textprobe.lexicon import load_wordnet

        rng = random.Random(8)
        lexicon = load_wordnet(bench_dir / "wordnet")
        emb_path = tmp_path / "vectors.txt"
        with open(emb_path, "w") as handle:
            for word in lexicon.lemmas():
                vec = " ".join(f"{rng.uniform(-1, 1):.4f}" for _ in range(6))
                handle.write(f"{word} {vec}\n")
        cfg = _config(bench_dir, tmp_path / "prov", sample_size=4)
        cfg = replace(
            cfg, lexicon=replace(cfg.lexicon, embeddings_path=str(emb_path))
        )
        rows = compare_strategies(
            cfg,
            providers=["wordnet", "random_char", "random_word", "embedding"],
        )
        assert [label for label, _ in rows] == [
            "abfs+wordnet", "abfs+random_char",
            "abfs+random_word", "abfs+embedding",
        ]
        hashes = {tuple(rep.sample_hashes) for _, rep in rows}
        assert len(hashes) == 1

    def test_single_variant_rejected(self, bench_dir, tmp_path):
        with pytest.raises(ConfigError):
            compare_strategies(_config(bench_dir, tmp_path / "one"), ["abfs"])


class TestTransferCases:
    def test_successful_cases_round_trip(self, bench_dir, tmp_path):
        out = tmp_path / "t"
        rep = run_campaign(_config(bench_dir, out, sample_size=20))
        cases = load_successful_cases(out / "results_r0.jsonl")
        assert len(cases) == rep.repeats[0].n_suc
        spec = load_surrogate(bench_dir / "surrogate.json")
        model = SurrogateThreatModel(spec)
        for text, label in cases:
            assert model.classify(text).label != label
