"""``pairlens`` command line: synth, ingest, pair, features, analyze, bins, rank, report, pipeline.

Every command reads and writes standard file names inside ``--out-dir``.
Settings come from flags, then the ``--config`` JSON file, then defaults.
All randomness derives from the root ``--seed`` through labeled sub-seeds.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import shutil
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from . import __version__
from .diagnostics import DEFAULT_WINDOWS_H, ld_bin_analysis, time_window_analysis, vvr_interval_analysis, write_rows_csv
from .ingest import (
    IngestError,
    ParseStats,
    filter_subreddits,
    join_posts_videos,
    parse_posts,
    parse_videos,
    post_to_json,
    read_joined,
    write_jsonl,
    write_subreddits_csv,
)
from .pairing import PairingConfig, build_exact_pairs, read_pairs, write_pairs
from .ranker import (
    DegenerateSplitError,
    RankerHyper,
    RankerTrainingError,
    SplitSpec,
    ablate_thresholds,
    build_phase_pairs,
    evaluate_external,
    ranking_dataset,
    read_results_csv,
    run_ranking_experiment,
    video_filter_ablation,
    write_model,
    write_results_csv,
)
from .stats.battery import BatteryConfig, read_reports, run_metric_battery, write_reports
from .synthgen import SynthConfig, generate_world, sub_seed
from .textmetrics.features import extract_features, load_external_scores, read_features_csv, write_features_csv
from .textmetrics.lexicons import LexiconError, load_lexicons
from .textmetrics.tokens import TextMetricError

log = logging.getLogger("pairlens")

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2
PHASES = ("exact", "similar", "inverse")


class CliError(Exception):
    def __init__(self, code: str, message: str, exit_code: int):
        super().__init__(message)
        self.code = code
        self.exit_code = exit_code


def config_error(message: str, code: str = "CONFIG_INVALID") -> CliError:
    return CliError(code, message, EXIT_CONFIG)


@dataclass
class RunConfig:
    seed: int = 0
    out_dir: str = "pairlens_out"
    lexicon_dir: str | None = None
    synth: SynthConfig = field(default_factory=SynthConfig)
    pairing: PairingConfig = field(default_factory=PairingConfig)
    split: SplitSpec = field(default_factory=SplitSpec)
    ranker: RankerHyper = field(default_factory=RankerHyper)
    battery: BatteryConfig = field(default_factory=BatteryConfig)
    min_posts: int = 1000
    top_k: int | None = 5000
    n_split_seeds: int = 5
    ranker_phases: tuple[str, ...] = ("similar", "inverse")
    ablation_grid: tuple[int, ...] = (50, 60, 70, 80, 90, 95)
    analysis_windows_h: tuple[float, ...] = DEFAULT_WINDOWS_H

    @property
    def out(self) -> Path:
        return Path(self.out_dir)


_SECTIONS = {"synth": SynthConfig, "pairing": PairingConfig, "split": SplitSpec, "ranker": RankerHyper, "battery": BatteryConfig}


def _build(cls, values: dict, where: str):
    names = {f.name for f in fields(cls)}
    unknown = set(values) - names
    if unknown:
        raise config_error(f"unknown keys in {where}: {sorted(unknown)}")
    values = {k: tuple(v) if isinstance(v, list) else v for k, v in values.items()}
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise config_error(f"{where}: {exc}") from exc


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise config_error(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise config_error(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise config_error("config must be a JSON object")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the JSON config and command-line flags (highest precedence)."""
    data = load_config(getattr(args, "config", None))
    top = {k: v for k, v in data.items() if k not in _SECTIONS}
    sections = {k: dict(data.get(k, {})) for k in _SECTIONS}

    flag_map = {
        "seed": ("", "seed"),
        "out_dir": ("", "out_dir"),
        "lexicon_dir": ("", "lexicon_dir"),
        "min_posts": ("", "min_posts"),
        "time_window": ("pairing", "time_window"),
        "vvr_max": ("pairing", "vvr_max"),
        "ld_pair_max": ("pairing", "ld_pair_max"),
        "ld_video_max": ("pairing", "ld_video_max"),
        "split": ("split", "strategy"),
        "margin": ("ranker", "margin"),
        "epochs": ("ranker", "epochs"),
    }
    for flag, (section, key) in flag_map.items():
        value = getattr(args, flag, None)
        if value is None:
            continue
        (top if not section else sections[section])[key] = value

    root = int(top.get("seed", 0))
    sections["synth"].setdefault("seed", root)
    sections["pairing"].setdefault("rng_seed", sub_seed(root, "pairing") % 2**31)
    sections["split"].setdefault("seed", sub_seed(root, "split") % 2**31)
    sections["ranker"].setdefault("seed", sub_seed(root, "ranker") % 2**31)
    built = {name: _build(cls, sections[name], name) for name, cls in _SECTIONS.items()}
    cfg = _build(RunConfig, top, "config")
    return replace(cfg, **built)


# -- io helpers ----------------------------------------------------------------

def _need(path: Path) -> Path:
    if not path.exists():
        raise CliError("INPUT_MISSING", f"required input not found: {path}", EXIT_CONFIG)
    return path


def _write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _posts(cfg: RunConfig):
    return read_joined(_need(cfg.out / "joined_posts.jsonl"))


def _phase_pairs(cfg: RunConfig, posts) -> dict:
    by_id = {p.post_id: p for p in posts}
    return {ph: read_pairs(_need(cfg.out / f"pairs_{ph}.jsonl"), by_id) for ph in PHASES}


def _features(cfg: RunConfig) -> dict:
    return read_features_csv(_need(cfg.out / "features.csv"))


# -- commands -------------------------------------------------------------------

def cmd_synth(cfg: RunConfig, args) -> dict:
    world = generate_world(cfg.synth, _lexicons(cfg))
    paths = world.write(cfg.out)
    return {"posts": len(world.posts), "videos": len(world.videos), **{k: str(v) for k, v in paths.items()}}


def cmd_ingest(cfg: RunConfig, args) -> dict:
    posts_path = Path(args.posts) if args.posts else cfg.out / "posts.jsonl"
    videos_path = Path(args.videos) if args.videos else cfg.out / "videos.jsonl"
    pstats, vstats = ParseStats(), ParseStats()
    try:
        # stdin first: an upstream `synth --stdout` has written videos.jsonl by the time it closes the pipe
        if str(posts_path) == "-":
            posts = list(parse_posts(sys.stdin, pstats))
        else:
            with open(_need(posts_path), encoding="utf-8") as fh:
                posts = list(parse_posts(fh, pstats))
        with open(_need(videos_path), encoding="utf-8") as fh:
            catalog = parse_videos(fh, vstats)
    except IngestError as exc:
        raise CliError("IO_ERROR", str(exc), EXIT_RUNTIME) from exc
    joined, rate = join_posts_videos(posts, catalog)
    n_users = None
    gt = cfg.out / "ground_truth.json"
    if gt.exists():
        with open(gt, encoding="utf-8") as fh:
            n_users = json.load(fh).get("subreddit_n_users")
    kept, summaries = filter_subreddits(joined, cfg.min_posts, cfg.top_k, n_users)
    cfg.out.mkdir(parents=True, exist_ok=True)
    write_jsonl(cfg.out / "joined_posts.jsonl", (post_to_json(p) for p in sorted(kept, key=lambda p: p.post_id)))
    write_subreddits_csv(cfg.out / "subreddits.csv", summaries)
    summary = {
        "posts": {k: v for k, v in asdict(pstats).items() if k != "errors"},
        "videos": {k: v for k, v in asdict(vstats).items() if k != "errors"},
        "join_rate": rate,
        "n_joined": len(joined),
        "n_kept": len(kept),
        "n_subreddits": len(summaries),
    }
    _write_json(cfg.out / "ingest_stats.json", summary)
    return summary


def cmd_pair(cfg: RunConfig, args) -> dict:
    posts = _posts(cfg)
    phases = build_phase_pairs(posts, cfg.pairing)
    for ph, pairs in phases.items():
        write_pairs(cfg.out / f"pairs_{ph}.jsonl", pairs)
    mixed = ranking_dataset(phases, cfg.pairing, PHASES)
    write_pairs(cfg.out / "pairs_mixed.jsonl", mixed)
    counts = {ph: len(v) for ph, v in phases.items()} | {"mixed": len(mixed)}
    _write_json(cfg.out / "pair_counts.json", counts)
    return counts


def _lexicons(cfg: RunConfig):
    try:
        return load_lexicons(cfg.lexicon_dir)
    except LexiconError as exc:
        raise CliError("LEXICON_MISSING", str(exc), EXIT_CONFIG) from exc


def cmd_features(cfg: RunConfig, args) -> dict:
    lex = _lexicons(cfg)
    posts = _posts(cfg)
    feats, failed = {}, 0
    for p in posts:
        try:
            feats[p.post_id] = extract_features(p.title, lex).as_dict()
        except TextMetricError:
            failed += 1
    extra: list[str] = []
    if getattr(args, "external_scores", None):
        try:
            ext = load_external_scores(_need(Path(args.external_scores)), feats.keys())
        except ValueError as exc:
            raise CliError("VALIDATION_FAILED", str(exc), EXIT_RUNTIME) from exc
        extra = sorted({k for row in ext.values() for k in row})
        feats = {pid: row | ext[pid] for pid, row in feats.items() if pid in ext}
    write_features_csv(cfg.out / "features.csv", feats, extra)
    return {"n_features": len(feats), "n_failed": failed, "extra_columns": extra}


def cmd_analyze(cfg: RunConfig, args) -> dict:
    posts = _posts(cfg)
    by_id = {p.post_id: p for p in posts}
    mixed = read_pairs(_need(cfg.out / "pairs_mixed.jsonl"), by_id)
    reports = run_metric_battery(mixed, _features(cfg), cfg.battery)
    write_reports(cfg.out / "stat_reports.json", reports)
    windows = [h * 3600 for h in cfg.analysis_windows_h]
    wide = replace(cfg.pairing, time_window=max(windows))
    write_rows_csv(cfg.out / "time_windows.csv", time_window_analysis(build_exact_pairs(posts, wide), windows))
    similar = read_pairs(_need(cfg.out / "pairs_similar.jsonl"), by_id)
    vvr = vvr_interval_analysis(similar)
    write_rows_csv(cfg.out / "vvr_intervals.csv", vvr.intervals)
    _write_json(cfg.out / "vvr_correlation.json", {"spearman": vvr.spearman, "p": vvr.spearman_p, "n": vvr.n})
    return {"n_pairs": len(mixed), "n_significant": sum(r.passes_bonferroni for r in reports)}


def cmd_bins(cfg: RunConfig, args) -> dict:
    posts = _posts(cfg)
    out = {}
    for mode in ("fixed", "quantile"):
        rows = ld_bin_analysis(posts, mode)
        write_rows_csv(cfg.out / f"ld_bins_{mode}.csv", rows)
        out[mode] = len(rows)
    return out


def cmd_rank(cfg: RunConfig, args) -> dict:
    posts = _posts(cfg)
    phases = _phase_pairs(cfg, posts)
    feats = _features(cfg)
    data = ranking_dataset(phases, cfg.pairing, cfg.ranker_phases)
    strategies = ("date", "post_id", "video_id") if getattr(args, "all_splits", False) else (cfg.split.strategy,)
    rows, model = [], None
    try:
        for strat in strategies:
            r, m = run_ranking_experiment(data, feats, replace(cfg.split, strategy=strat), cfg.ranker, cfg.n_split_seeds)
            rows += r
            model = model or m
        if getattr(args, "ablate", False):
            ab = ablate_thresholds(phases, feats, cfg.pairing, cfg.ablation_grid, cfg.split, cfg.ranker, cfg.ranker_phases)
            write_rows_csv(cfg.out / "ablation.csv", ab.rows)
            _write_json(cfg.out / "ablation_summary.json", {"correlation": ab.correlation, **video_filter_ablation(phases, feats, cfg.pairing, cfg.split, cfg.ranker, cfg.ranker_phases)})
    except DegenerateSplitError as exc:
        raise CliError("DEGENERATE_SPLIT", str(exc), EXIT_RUNTIME) from exc
    except RankerTrainingError as exc:
        raise CliError("TRAINING_FAILED", str(exc), EXIT_RUNTIME) from exc
    write_results_csv(cfg.out / "results.csv", rows)
    write_model(cfg.out / "model.json", model)
    out = {"n_pairs": len(data), "rows": len(rows)}
    if getattr(args, "predictions", None):
        ev = evaluate_external(data, _need(Path(args.predictions)))
        _write_json(cfg.out / "external_eval.json", asdict(ev))
        out["external"] = asdict(ev)
    return out


def _fmt(x, nd=3) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, float):
        return f"{x:.{nd}g}" if abs(x) < 1e-3 and x != 0 else f"{x:.{nd}f}"
    return str(x)


def render_report(cfg: RunConfig) -> str:
    lines = ["# pairlens report", ""]
    ingest = cfg.out / "ingest_stats.json"
    counts = cfg.out / "pair_counts.json"
    if ingest.exists() and counts.exists():
        s = json.loads(ingest.read_text())
        c = json.loads(counts.read_text())
        lines += [
            "## Dataset",
            "",
            "| posts kept | subreddits | join rate | exact | similar | inverse | mixed (filtered) |",
            "|---|---|---|---|---|---|---|",
            f"| {s['n_kept']} | {s['n_subreddits']} | {s['join_rate']:.3f} | {c['exact']} | {c['similar']} | {c['inverse']} | {c['mixed']} |",
            "",
        ]
    rep_path = cfg.out / "stat_reports.json"
    if rep_path.exists():
        reps = read_reports(rep_path)
        cont: dict[str, dict] = {}
        for r in reps:
            if r.family == "continuous":
                cont.setdefault(r.metric_name, {})[r.test] = r
        lines += ["## Continuous metrics (post1 = higher score)", "", "| metric | t | p (t) | W | p (W) | r_rb | conclusion |", "|---|---|---|---|---|---|---|"]
        for name, d in sorted(cont.items()):
            t, w = d.get("paired_t"), d.get("wilcoxon")
            lines.append(
                f"| {name} | {_fmt(t.statistic)} | {_fmt(t.p_value)} | {_fmt(w.statistic)} | {_fmt(w.p_value)} | {_fmt(w.effect_size)} | {t.conclusion} |"
            )
        lines += ["", "## Binary metrics", "", "| metric | mean post1 | mean post2 | risk diff | p (McNemar) | conclusion |", "|---|---|---|---|---|---|"]
        for r in sorted((r for r in reps if r.family == "binary"), key=lambda r: r.metric_name):
            lines.append(f"| {r.metric_name} | {_fmt(r.mean1)} | {_fmt(r.mean2)} | {_fmt(r.effect_size)} | {_fmt(r.p_value)} | {r.conclusion} |")
        lines.append("")
    res_path = cfg.out / "results.csv"
    if res_path.exists():
        rows = read_results_csv(res_path)
        methods = sorted({r.method for r in rows})
        lines += ["## Pairwise ranking accuracy (%)", "", "| split | phase | n test | " + " | ".join(methods) + " |", "|---|---|---|" + "---|" * len(methods)]
        table: dict[tuple, dict] = {}
        for r in rows:
            table.setdefault((r.split, r.phase), {"n": r.n_test})[r.method] = r.accuracy
        for (split, phase), d in sorted(table.items()):
            lines.append(f"| {split} | {phase} | {d['n']} | " + " | ".join(f"{100 * d[m]:.1f}" if m in d else "" for m in methods) + " |")
        lines.append("")
    return "\n".join(lines)


def cmd_report(cfg: RunConfig, args) -> dict:
    text = render_report(cfg)
    (cfg.out / "report.md").write_text(text, encoding="utf-8")
    return {"report": str(cfg.out / "report.md")}


def cmd_pipeline(cfg: RunConfig, args) -> dict:
    out = {}
    if not getattr(args, "posts", None):
        out["synth"] = cmd_synth(cfg, args)
    for name, fn in (("ingest", cmd_ingest), ("pair", cmd_pair), ("features", cmd_features), ("analyze", cmd_analyze), ("bins", cmd_bins), ("rank", cmd_rank), ("report", cmd_report)):
        out[name] = fn(cfg, args)
    return out


COMMANDS = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "pair": cmd_pair,
    "features": cmd_features,
    "analyze": cmd_analyze,
    "bins": cmd_bins,
    "rank": cmd_rank,
    "report": cmd_report,
    "pipeline": cmd_pipeline,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--seed", type=int)
    common.add_argument("--out-dir", dest="out_dir")
    common.add_argument("--lexicon-dir", dest="lexicon_dir", default=os.environ.get("PAIRLENS_LEXICON_DIR"))
    common.add_argument("--time-window", dest="time_window", type=float, help="seconds")
    common.add_argument("--vvr-max", dest="vvr_max", type=float)
    common.add_argument("--ld-pair-max", dest="ld_pair_max", type=int)
    common.add_argument("--ld-video-max", dest="ld_video_max", type=int)
    common.add_argument("--split", choices=("date", "post_id", "video_id"))
    common.add_argument("--margin", type=float)
    common.add_argument("--epochs", type=int)
    common.add_argument("--min-posts", dest="min_posts", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pairlens", description="Matched-pair analysis of post titles and engagement.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "synth":
            p.add_argument("--stdout", action="store_true", help="also stream posts.jsonl to stdout (summary goes to stderr)")
        if name in ("ingest", "pipeline"):
            p.add_argument("--posts", help="posts JSON-lines file ('-' for stdin)")
            p.add_argument("--videos", help="videos JSON-lines file")
        if name in ("features", "pipeline"):
            p.add_argument("--external-scores", dest="external_scores")
        if name in ("rank", "pipeline"):
            p.add_argument("--all-splits", dest="all_splits", action="store_true")
            p.add_argument("--ablate", action="store_true")
            p.add_argument("--predictions", help="predictions.csv with pair_id,winner")
    return parser


def _emit_error(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": {"code": code, "message": message}}, sort_keys=True) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        cfg.out.mkdir(parents=True, exist_ok=True)
        result = COMMANDS[args.command](cfg, args)
    except CliError as exc:
        _emit_error(exc.code, str(exc))
        return exc.exit_code
    except OSError as exc:
        _emit_error("IO_ERROR", str(exc))
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - surface anything unexpected as a runtime error
        _emit_error("RUNTIME_ERROR", f"{type(exc).__name__}: {exc}")
        return EXIT_RUNTIME
    summary = json.dumps({"command": args.command, "result": result}, sort_keys=True, default=str) + "\n"
    try:
        if getattr(args, "stdout", False):
            with open(cfg.out / "posts.jsonl", encoding="utf-8") as fh:
                shutil.copyfileobj(fh, sys.stdout)
            sys.stdout.flush()
            sys.stderr.write(summary)
        else:
            sys.stdout.write(summary)
    except BrokenPipeError:
        # downstream closed early; keep Python from complaining again at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        _emit_error("IO_ERROR", "output pipe closed")
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
