"""Command-line interface.

Subcommands: ``run`` (one campaign), ``ablate`` (strategy/provider
matrix over the identical sample), ``transfer`` (re-evaluate successful
cases against another classifier), and ``report`` (render tables from a
results directory). Exit codes: 0 ok, 1 resource error, 2 config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from textprobe.errors import ConfigError, TextProbeError
from textprobe.harness.campaign import (
    CampaignConfig,
    build_threat,
    compare_strategies,
    load_successful_cases,
    run_campaign,
)
from textprobe.lexicon import LexiconConfig
from textprobe.lexicon.transform import PROVIDERS
from textprobe.metrics import transfer_evaluate
from textprobe.search import STRATEGIES, SearchConfig


def _fmt(value) -> str:
    if value is None:
        return "—"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


def _add_campaign_args(parser: argparse.ArgumentParser):
    parser.add_argument("--dataset", required=True, help="dataset file")
    parser.add_argument("--format", default="jsonl", choices=("jsonl", "csv"))
    parser.add_argument(
        "--prompt", default="{example}", help="prompt template with {example}"
    )
    parser.add_argument(
        "--labels", required=True, help="comma-separated label set"
    )
    parser.add_argument(
        "--threat", required=True, help="surrogate:spec.json or http:URL"
    )
    parser.add_argument("--provider", default="wordnet", choices=PROVIDERS)
    parser.add_argument("--strategy", default="abfs", choices=STRATEGIES)
    parser.add_argument("--k1", type=int, default=25)
    parser.add_argument("--k2", type=int, default=5)
    parser.add_argument("--rho-max", type=float, default=0.10)
    parser.add_argument("--max-queries", type=int, default=3000)
    parser.add_argument("--sample", type=int, default=1000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--wordnet", default=None, help="wordnet database directory")
    parser.add_argument("--embeddings", default=None, help="embedding text file")
    parser.add_argument("--stopwords", default=None, help="stop-word list file")
    parser.add_argument(
        "--perturb-prompt",
        action="store_true",
        help="allow edits inside the prompt region (frozen by default)",
    )


def _campaign_config(args) -> CampaignConfig:
    labels = tuple(l.strip() for l in args.labels.split(",") if l.strip())
    if not labels:
        raise ConfigError("--labels must name at least one label")
    return CampaignConfig(
        dataset_path=args.dataset,
        dataset_format=args.format,
        prompt=args.prompt,
        label_set=labels,
        threat_spec=args.threat,
        provider=args.provider,
        search=SearchConfig(
            strategy=args.strategy,
            max_query=args.max_queries,
            rho_max=args.rho_max,
            seed=args.seed,
            k2=args.k2,
        ),
        lexicon=LexiconConfig(
            k1=args.k1,
            wordnet_dir=args.wordnet,
            embeddings_path=args.embeddings,
            freeze_prompt=not args.perturb_prompt,
        ),
        stopwords_path=args.stopwords,
        sample_size=args.sample,
        repeat=args.repeat,
        workers=args.workers,
        out_dir=args.out,
    )


_COLUMNS = ("s_rate", "c_rate", "ppl", "t_o", "q_n")


def _print_stats_table(rows: list[tuple[str, dict]]):
    header = ["variant"] + list(_COLUMNS)
    widths = [max(len(header[0]), *(len(r[0]) for r in rows))] + [10] * len(_COLUMNS)
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for name, stats in rows:
        cells = [name.ljust(widths[0])]
        for key, width in zip(_COLUMNS, widths[1:]):
            cells.append(_fmt(stats.get(key)).ljust(width))
        print("  ".join(cells))


def _cmd_run(args) -> int:
    cfg = _campaign_config(args)
    report = run_campaign(cfg)
    _print_stats_table([("mean", report.mean)])
    print(f"results written to {report.out_dir}")
    return 0


def _cmd_ablate(args) -> int:
    cfg = _campaign_config(args)
    strategies = (
        [s.strip() for s in args.strategies.split(",") if s.strip()]
        if args.strategies
        else None
    )
    providers = (
        [p.strip() for p in args.providers.split(",") if p.strip()]
        if args.providers
        else None
    )
    rows = compare_strategies(cfg, strategies, providers)
    _print_stats_table([(label, rep.mean) for label, rep in rows])
    print(f"ablation written to {cfg.out_dir}/ablation.json")
    return 0


def _cmd_transfer(args) -> int:
    labels = tuple(l.strip() for l in args.labels.split(",") if l.strip())
    threat = build_threat(args.threat, labels)
    cases = load_successful_cases(args.cases)
    if not cases:
        print("no successful cases in input")
        return 0
    rate = transfer_evaluate(cases, threat)
    print(f"transferred {len(cases)} cases; transfer success rate {rate:.3f}%")
    return 0


def _cmd_report(args) -> int:
    report_path = Path(args.in_dir) / "report.json"
    ablation_path = Path(args.in_dir) / "ablation.json"
    rows: list[tuple[str, dict]] = []
    if ablation_path.is_file():
        with open(ablation_path, encoding="utf-8") as handle:
            data = json.load(handle)
        rows = [(label, row["mean"]) for label, row in sorted(data["rows"].items())]
    elif report_path.is_file():
        with open(report_path, encoding="utf-8") as handle:
            data = json.load(handle)
        rows = [("mean", data["mean"])]
        for i, block in enumerate(data.get("repeats", [])):
            rows.append((f"repeat {i}", block))
    else:
        raise TextProbeError(f"no report.json or ablation.json under {args.in_dir}")
    _print_stats_table(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write("variant," + ",".join(_COLUMNS) + "\n")
            for name, stats in rows:
                handle.write(
                    ",".join(
                        [name]
                        + [
                            "" if stats.get(k) is None else repr(stats.get(k))
                            for k in _COLUMNS
                        ]
                    )
                    + "\n"
                )
        print(f"plot data written to {args.csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textprobe",
        description="Robustness testing for black-box text classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one testing campaign")
    _add_campaign_args(run_p)
    run_p.set_defaults(func=_cmd_run)

    ablate_p = sub.add_parser("ablate", help="strategy/provider matrix")
    _add_campaign_args(ablate_p)
    ablate_p.add_argument("--strategies", default=None, help="comma-separated")
    ablate_p.add_argument("--providers", default=None, help="comma-separated")
    ablate_p.set_defaults(func=_cmd_ablate)

    transfer_p = sub.add_parser(
        "transfer", help="re-evaluate successful cases against another classifier"
    )
    transfer_p.add_argument("--cases", required=True, help="results JSONL file")
    transfer_p.add_argument("--threat", required=True)
    transfer_p.add_argument("--labels", required=True)
    transfer_p.set_defaults(func=_cmd_transfer)

    report_p = sub.add_parser("report", help="render tables from a results dir")
    report_p.add_argument("--in", dest="in_dir", required=True)
    report_p.add_argument("--csv", default=None, help="also emit plot data as CSV")
    report_p.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (TextProbeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
