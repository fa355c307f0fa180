"""Command-line front end; flags mirror TrainConfig one to one."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import HarnessError
from .train import TrainConfig, metrics_rows, train_eval, write_metrics


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biasharness",
        description="Fine-tune an encoder on a line-delimited bias dataset")
    parser.add_argument("--dataset", required=True, type=Path,
                        help="line-delimited export to train on")
    parser.add_argument("--learning-rate", type=float, default=5e-5)
    parser.add_argument("--batch-size", type=int, default=32)
    parser.add_argument("--max-epochs", type=int, default=15)
    parser.add_argument("--seeds", default="0,1,2",
                        help="comma-separated seed list")
    parser.add_argument("--encoder", default="bert-base-uncased",
                        help='checkpoint name/path, or "scratch"')
    parser.add_argument("--max-seq-len", type=int, default=256)
    parser.add_argument("--out", type=Path, default=Path("metrics.csv"),
                        help="where to write the metrics table")
    parser.add_argument("--audit-log", type=Path, default=None,
                        help="where to write the access audit "
                             "(default: '<out stem>.audit.csv')")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        seeds = tuple(int(part) for part in args.seeds.split(",") if part.strip())
    except SystemExit as err:
        return 2 if err.code else 0
    except ValueError:
        print("usage error: --seeds expects comma-separated integers",
              file=sys.stderr)
        return 2

    config = TrainConfig(
        dataset=args.dataset, learning_rate=args.learning_rate,
        batch_size=args.batch_size, max_epochs=args.max_epochs,
        seeds=seeds, encoder=args.encoder, max_seq_len=args.max_seq_len)
    try:
        config.validate()
    except ValueError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2

    try:
        report, audit = train_eval(config)
    except HarnessError as err:
        print(f"error[{type(err).__name__}]: {err}", file=sys.stderr)
        return 1

    write_metrics(report, args.out)
    audit_path = args.audit_log or args.out.with_suffix(".audit.csv")
    audit.write(audit_path)

    for run_ in report.runs:
        print(f"seed {run_.seed}: test accuracy {run_.test.accuracy:.4f}, "
              f"best epoch {run_.best_epoch}")
    print(f"mean micro-F1 {report.mean.micro_f1:.4f} over "
          f"{len(report.runs)} seed(s); wrote {args.out} and {audit_path}")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
