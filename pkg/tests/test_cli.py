import argparse
import hashlib
import json
import subprocess
import sys

import pytest

from pairlens.cli import CliError, build_parser, main, resolve_config

SMALL = {"synth": {"n_subreddits": 4, "posts_per_subreddit": 2500, "n_videos": 6000}, "n_split_seeds": 2, "min_posts": 1000}
ARTIFACTS = [
    "posts.jsonl", "videos.jsonl", "ground_truth.json", "joined_posts.jsonl", "subreddits.csv", "ingest_stats.json",
    "pairs_exact.jsonl", "pairs_similar.jsonl", "pairs_inverse.jsonl", "pairs_mixed.jsonl", "pair_counts.json",
    "features.csv", "stat_reports.json", "time_windows.csv", "vvr_intervals.csv", "vvr_correlation.json",
    "ld_bins_fixed.csv", "ld_bins_quantile.csv", "results.csv", "model.json", "report.md",
]


def run(*argv, stdin=None):
    return subprocess.run([sys.executable, "-m", "pairlens.cli", *argv], capture_output=True, text=True, input=stdin)


def digest(d):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(d.iterdir()) if p.is_file()}


@pytest.fixture(scope="module")
def config_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "run.json"
    path.write_text(json.dumps(SMALL))
    return path


def test_pipeline_smoke_and_determinism(tmp_path, config_file):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        r = run("pipeline", "--config", str(config_file), "--seed", "7", "--out-dir", str(out))
        assert r.returncode == 0, r.stderr
        assert json.loads(r.stdout)["command"] == "pipeline"
        outs.append(out)
    for f in ARTIFACTS:
        assert (outs[0] / f).exists(), f
    assert digest(outs[0]) == digest(outs[1])


def test_synth_piped_into_ingest(tmp_path, config_file):
    out = tmp_path / "o"
    synth = run("synth", "--config", str(config_file), "--seed", "7", "--out-dir", str(out), "--stdout")
    assert synth.returncode == 0, synth.stderr
    assert json.loads(synth.stderr.strip().splitlines()[-1])["command"] == "synth"
    assert len(synth.stdout.splitlines()) == 10_000
    ing = run("ingest", "--config", str(config_file), "--posts", "-", "--videos", str(out / "videos.jsonl"), "--out-dir", str(out), stdin=synth.stdout)
    assert ing.returncode == 0, ing.stderr
    stats = json.loads(ing.stdout)["result"]
    assert stats["n_kept"] > 0 and stats["join_rate"] > 0.98


def test_missing_lexicon_dir_exit_2(tmp_path):
    r = run("features", "--out-dir", str(tmp_path), "--lexicon-dir", str(tmp_path / "nope"))
    assert r.returncode == 2
    assert json.loads(r.stderr)["error"]["code"] == "LEXICON_MISSING"


def test_missing_input_and_bad_config(tmp_path):
    assert main(["pair", "--out-dir", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"pairing": {"no_such_knob": 1}}))
    r = run("pair", "--config", str(bad), "--out-dir", str(tmp_path))
    assert r.returncode == 2 and json.loads(r.stderr)["error"]["code"] == "CONFIG_INVALID"
    bad.write_text("{not json")
    assert main(["pair", "--config", str(bad), "--out-dir", str(tmp_path)]) == 2
    assert main(["no-such-command"]) == 2


def _args(*argv):
    return build_parser().parse_args(["pair", *argv])


def test_config_precedence(tmp_path):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"seed": 3, "pairing": {"time_window": 600, "vvr_max": 3}}))
    default = resolve_config(_args())
    assert default.pairing.time_window == 1800 and default.seed == 0
    from_file = resolve_config(_args("--config", str(cfg_path)))
    assert from_file.pairing.time_window == 600 and from_file.pairing.vvr_max == 3 and from_file.synth.seed == 3
    flagged = resolve_config(_args("--config", str(cfg_path), "--time-window", "60", "--seed", "9"))
    assert flagged.pairing.time_window == 60 and flagged.pairing.vvr_max == 3 and flagged.seed == 9
    # sub-seeds fan out from the root seed
    assert flagged.split.seed != flagged.ranker.seed
    assert resolve_config(_args("--seed", "9")).ranker.seed == flagged.ranker.seed


def test_invalid_values_are_config_errors():
    with pytest.raises(CliError) as exc:
        resolve_config(_args("--vvr-max", "0.5"))
    assert exc.value.exit_code == 2
    assert isinstance(build_parser(), argparse.ArgumentParser)
