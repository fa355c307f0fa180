"""Command-line entry point.

Subcommands cover the pipeline stages:

    ingest   parse and validate a corpus, optionally rewrite it canonically
    stats    print per-target / per-event context statistics
    augment  build the full augmentation pool and export it
    split    compute the cross-validation plan
    build    assemble and export one fold's dataset
    all      build every fold of the plan

A JSON config file (``--config``) may supply any long flag by name; flags
given on the command line win. Exit codes: 0 success, 1 stage failure
(typed message on stderr), 2 usage problems.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .backtranslate import (
    BtPolicy,
    HttpProvider,
    IdentityProvider,
    RecordedProvider,
    TranslationCache,
    TranslationProvider,
)
from .errors import BiasctxError, UsageError
from .ingest import corpus_digest, corpus_summary, normalize_targets, parse_corpus
from .model import BiasKind, Corpus
from .records import ABTA, BANC, EBTA
from .split_task import (
    VALID_FRACTIONS,
    Task,
    TaskDataset,
    augmentation_pool,
    build_task_dataset,
    make_folds,
    target_balanced_test,
)
from .stats_export import emit_dataset, render_stats, report_stats
from .target_context import build_all_target_contexts

DEFAULTS = {
    "task": "inf-oth",
    "aug": "",
    "fraction": 0,
    "bt_policy": "none",
    "pivot": "es",
    "provider": "identity",
    "bt_cache_dir": None,
    "bt_fail_threshold": 0.0,
    "k": 10,
    "seed": 0,
    "fold": 0,
    "aliases": None,
    "targets": None,
    "balance_targets": None,
    "balance_tolerance": 0.1,
    "dedup": False,
    "separator": " ",
    "threads": 1,
    "top": 10,
    "format": "lines",
    "out": None,
}

# input paths are represented by the corpus digest; output locations and
# worker counts never affect emitted bytes, so they stay out of the manifest
VOLATILE_FLAGS = ("config", "out", "bt_cache_dir", "threads", "top")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biasctx",
        description="Deterministic context augmentation for bias-annotated news corpora.",
    )
    sub = parser.add_subparsers(dest="command")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file supplying flags by name")
        p.add_argument("--corpus", help="corpus directory of <event>_<source>.jsonl files")
        p.add_argument("--aliases", help="JSON file mapping raw target names to canonical ones")
        p.add_argument("--threads", type=int, help="parser worker threads")
        return p

    p = add("ingest", "parse and validate a corpus")
    p.add_argument("--out", help="directory for the canonical rewrite (optional)")

    p = add("stats", "print context statistics")
    p.add_argument("--top", type=int, help="number of targets to tabulate")
    p.add_argument("--targets", help="comma-separated canonical target filter")
    p.add_argument("--separator", help="string joining concatenated sentences")

    p = add("augment", "build the augmentation pool over the whole corpus")
    p.add_argument("--task", choices=[t.value for t in Task])
    p.add_argument("--aug", help="comma list from banc,abta,ebta")
    p.add_argument("--targets", help="comma-separated canonical target filter")
    p.add_argument("--separator", help="string joining concatenated sentences")
    p.add_argument("--dedup", action="store_true", default=None,
                   help="drop single-sentence pair records from the pool")
    p.add_argument("--format", choices=("lines", "tabular"))
    p.add_argument("--out", help="output directory")

    p = add("split", "compute the event-level cross-validation plan")
    p.add_argument("--k", type=int, help="number of folds")
    p.add_argument("--seed", help="shuffle seed")
    p.add_argument("--out", help="output directory (plan printed when omitted)")

    for name in ("build", "all"):
        p = add(name, "assemble and export fold datasets"
                if name == "all" else "assemble and export one fold's dataset")
        p.add_argument("--task", choices=[t.value for t in Task])
        p.add_argument("--aug", help="comma list from banc,abta,ebta")
        p.add_argument("--fraction", type=int, choices=VALID_FRACTIONS,
                       help="augmentation percentage")
        p.add_argument("--bt-policy", choices=["none"] + [b.value for b in BtPolicy])
        p.add_argument("--pivot", help="backtranslation pivot language")
        p.add_argument("--provider",
                       help="translation provider: identity, recorded:<file>, or http")
        p.add_argument("--bt-cache-dir", help="directory for the http translation cache")
        p.add_argument("--bt-fail-threshold", type=float,
                       help="tolerated backtranslation failure ratio")
        p.add_argument("--k", type=int, help="number of folds")
        p.add_argument("--seed", help="base seed for shuffling and sampling")
        if name == "build":
            p.add_argument("--fold", type=int, help="fold index to build")
        p.add_argument("--balance-targets",
                       help="comma list of targets to balance in the test split")
        p.add_argument("--balance-tolerance", type=float,
                       help="maximum deviation from a uniform target share")
        p.add_argument("--dedup", action="store_true", default=None,
                       help="drop single-sentence pair records from the pool")
        p.add_argument("--targets", help="comma-separated canonical target filter")
        p.add_argument("--separator", help="string joining concatenated sentences")
        p.add_argument("--format", choices=("lines", "tabular"))
        p.add_argument("--out", help="output directory")

    return parser


@dataclasses.dataclass
class RunConfig:
    """Merged view of defaults, config file, and command-line flags."""

    command: str
    values: dict

    def __getattr__(self, name: str):
        try:
            return self.values[name]
        except KeyError as exc:
            raise AttributeError(name) from exc

    def as_flags(self) -> dict:
        out = {}
        for key, value in sorted(self.values.items()):
            if value is None or key in VOLATILE_FLAGS:
                continue
            if isinstance(value, (set, frozenset)):
                value = sorted(value)
            out[key] = value
        return out

    def out_dir(self) -> Path:
        return Path(self.values.get("out") or "out")


def _merge_config(args: argparse.Namespace) -> RunConfig:
    file_values = {}
    if getattr(args, "config", None):
        try:
            file_values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}") from exc
        if not isinstance(file_values, dict):
            raise UsageError(f"config file {args.config} must hold a JSON object")

    values = dict(DEFAULTS)
    for key, val in file_values.items():
        values[key.replace("-", "_")] = val
    for key, val in vars(args).items():
        if key in ("command", "config") or val is None:
            continue
        values[key] = val
    return RunConfig(command=args.command, values=values)


def _csv_set(raw) -> set[str] | None:
    """Normalize a comma string (flag) or list (config file) to a set."""
    if raw is None or raw == "":
        return None
    if isinstance(raw, (list, tuple, set, frozenset)):
        parts = {str(p).strip() for p in raw if str(p).strip()}
    else:
        parts = {p.strip() for p in str(raw).split(",") if p.strip()}
    return parts or None


def _validated(cfg: RunConfig) -> RunConfig:
    v = cfg.values
    if not v.get("corpus"):
        raise UsageError("--corpus is required")
    if v["task"] not in [t.value for t in Task]:
        raise UsageError(f"unknown task {v['task']!r}")
    aug = _csv_set(v["aug"]) or set()
    canonical = {BANC.lower(): BANC, ABTA.lower(): ABTA, EBTA.lower(): EBTA}
    bad = [a for a in aug if a.lower() not in canonical]
    if bad:
        raise UsageError(f"unknown augmentations {sorted(bad)}; choose from banc,abta,ebta")
    v["aug"] = {canonical[a.lower()] for a in aug}
    if v["fraction"] not in VALID_FRACTIONS:
        raise UsageError(f"--fraction must be one of {VALID_FRACTIONS}")
    if v["bt_policy"] not in ["none"] + [b.value for b in BtPolicy]:
        raise UsageError(f"unknown backtranslation policy {v['bt_policy']!r}")
    if v["pivot"] == "en":
        raise UsageError("pivot language must differ from en")
    if v["k"] < 2:
        raise UsageError("--k must be at least 2")
    if not 0.0 <= v["bt_fail_threshold"] <= 1.0:
        raise UsageError("--bt-fail-threshold must lie in [0, 1]")
    if not 0.0 <= v["balance_tolerance"] <= 1.0:
        raise UsageError("--balance-tolerance must lie in [0, 1]")
    if v["threads"] < 1:
        raise UsageError("--threads must be at least 1")
    v["targets"] = _csv_set(v["targets"])
    v["balance_targets"] = _csv_set(v["balance_targets"])
    return cfg


def _load_corpus(cfg: RunConfig) -> Corpus:
    corpus = parse_corpus(cfg.corpus, threads=cfg.threads)
    if cfg.aliases:
        try:
            alias_map = json.loads(Path(cfg.aliases).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read alias map {cfg.aliases}: {exc}") from exc
        corpus = normalize_targets(corpus, alias_map)
    return corpus


def _make_provider(cfg: RunConfig) -> TranslationProvider:
    spec = str(cfg.provider)
    pairs = (("en", cfg.pivot), (cfg.pivot, "en"))
    if spec == "identity":
        return IdentityProvider(pairs=pairs)
    if spec.startswith("recorded:"):
        return RecordedProvider(spec.split(":", 1)[1])
    if spec == "http":
        cache = None
        if cfg.bt_cache_dir:
            cache = TranslationCache(Path(cfg.bt_cache_dir) / "translations.jsonl")
        return HttpProvider(pairs=pairs, cache=cache)
    raise UsageError(f"unknown provider {spec!r}; use identity, recorded:<file>, or http")


# --- stages -------------------------------------------------------------------

def _cmd_ingest(cfg: RunConfig) -> int:
    corpus = _load_corpus(cfg)
    summary = corpus_summary(corpus)
    print(f"events: {len(corpus.events)}  articles: {sum(n for _, n in summary.event_article_counts)}  "
          f"sentences: {summary.sentence_count}")
    for kind, count in summary.kind_counts.items():
        print(f"{kind} sentences: {count}")
    if cfg.values.get("out"):
        from .ingest import serialize_corpus
        written = serialize_corpus(corpus, cfg.out)
        print(f"rewrote {len(written)} articles under {cfg.out}")
    return 0


def _contexts(corpus: Corpus, cfg: RunConfig) -> list:
    contexts = []
    for kind in (BiasKind.INF, BiasKind.LEX):
        contexts.extend(build_all_target_contexts(
            corpus, kind, target_filter=cfg.targets, separator=cfg.separator))
    return contexts


def _cmd_stats(cfg: RunConfig) -> int:
    corpus = _load_corpus(cfg)
    report = report_stats(corpus, _contexts(corpus, cfg), top_n=cfg.top,
                          targets=cfg.targets)
    sys.stdout.write(render_stats(report))
    return 0


def _cmd_augment(cfg: RunConfig) -> int:
    corpus = _load_corpus(cfg)
    task = Task(cfg.task)
    pool = augmentation_pool(corpus, task, cfg.aug, cfg.separator, cfg.targets)
    if cfg.dedup:
        pool = [ex for ex in pool
                if not (ex.provenance == ABTA and len(ex.sentence_ids) == 1)]
    dataset = TaskDataset(task=task, fold=0, records=tuple(pool),
                          config={"stage": "augment", **cfg.as_flags()})
    ext = "jsonl" if cfg.format == "lines" else "csv"
    path = cfg.out_dir() / f"aug_{task.value}.{ext}"
    manifest = emit_dataset(dataset, path, cfg.format, corpus_digest(corpus))
    print(f"wrote {path} ({len(pool)} records), run {manifest.run_id}")
    return 0


def _cmd_split(cfg: RunConfig) -> int:
    corpus = _load_corpus(cfg)
    plan = make_folds(corpus, k=cfg.k, seed=cfg.seed)
    payload = {
        "k": plan.k, "seed": plan.seed,
        "folds": [{"train": list(f.train), "val": list(f.val), "test": list(f.test)}
                  for f in plan.folds],
    }
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if cfg.values.get("out"):
        out = Path(cfg.out) / "splits.json"
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)
    return 0


def _build_fold(corpus: Corpus, cfg: RunConfig, plan, fold: int, digest: str) -> Path:
    task = Task(cfg.task)
    policy = None if cfg.bt_policy == "none" else BtPolicy(cfg.bt_policy)
    provider = _make_provider(cfg) if policy else None
    dataset = build_task_dataset(
        corpus, plan, fold, task,
        aug=cfg.aug, fraction=cfg.fraction, bt=policy, seed=cfg.seed,
        provider=provider, pivot=cfg.pivot, separator=cfg.separator,
        dedup=bool(cfg.dedup), target_filter=cfg.targets,
        bt_fail_threshold=cfg.bt_fail_threshold, bt_workers=cfg.threads)
    dataset = dataclasses.replace(
        dataset, config={**cfg.as_flags(), **dataset.config})
    ext = "jsonl" if cfg.format == "lines" else "csv"
    path = cfg.out_dir() / f"{task.value}_fold{fold}.{ext}"
    manifest = emit_dataset(dataset, path, cfg.format, digest)
    print(f"wrote {path} ({len(dataset.records)} records), run {manifest.run_id}")
    return path


def _plan_for(corpus: Corpus, cfg: RunConfig, fold: int):
    plan = make_folds(corpus, k=cfg.k, seed=cfg.seed)
    if cfg.balance_targets:
        plan = target_balanced_test(corpus, plan, fold, cfg.balance_targets,
                                    tolerance=cfg.balance_tolerance)
    return plan


def _cmd_build(cfg: RunConfig) -> int:
    corpus = _load_corpus(cfg)
    fold = int(cfg.values.get("fold", 0))
    plan = _plan_for(corpus, cfg, fold)
    _build_fold(corpus, cfg, plan, fold, corpus_digest(corpus))
    return 0


def _cmd_all(cfg: RunConfig) -> int:
    corpus = _load_corpus(cfg)
    digest = corpus_digest(corpus)
    for fold in range(cfg.k):
        plan = _plan_for(corpus, cfg, fold)
        _build_fold(corpus, cfg, plan, fold, digest)
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "stats": _cmd_stats,
    "augment": _cmd_augment,
    "split": _cmd_split,
    "build": _cmd_build,
    "all": _cmd_all,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else int(exc.code or 0)
    if not args.command:
        parser.print_help()
        return 2
    try:
        cfg = _validated(_merge_config(args))
        return _COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BiasctxError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
