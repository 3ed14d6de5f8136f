"""Planted title effects: battery recovery per seed and ranker accuracy per split.

    python3 scripts/planted_recovery.py --seeds 5
    python3 scripts/planted_recovery.py --seeds 1 --subreddits 64   # ~20k ranker pairs
"""

import argparse
import time

from pairlens.experiments import battery, planted_config, ranker_accuracy_by_split, run_world
from pairlens.ranker import baseline_random, baseline_time, baseline_video_views


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--subreddits", type=int, default=20)
    ap.add_argument("--posts-per-subreddit", type=int, default=2500)
    ap.add_argument("--words-weight", type=float, default=0.8)
    ap.add_argument("--sentiment-weight", type=float, default=0.6)
    args = ap.parse_args()

    weights = {"words": args.words_weight, "sentiment": args.sentiment_weight}
    for s in range(args.seeds):
        t0 = time.perf_counter()
        cfg = planted_config(s, n_subreddits=args.subreddits, posts_per_subreddit=args.posts_per_subreddit, title_effect_weights=weights)
        trial = run_world(cfg)
        print(f"seed {s}: {len(trial.posts)} posts, {len(trial.mixed)} mixed pairs, {len(trial.ranking)} ranker pairs")
        for r in battery(trial):
            if r.conclusion not in (None, "inconclusive") and r.test != "paired_t":
                eff = f"{r.effect_size:+.3f}" if r.effect_size is not None else "   n/a"
                print(f"  {r.metric_name:<22} {r.test:<9} {r.conclusion:<15} p={r.p_value:.1e} effect={eff}")
        accs = ranker_accuracy_by_split(trial)
        base = (baseline_random(trial.ranking, s), baseline_time(trial.ranking), baseline_video_views(trial.ranking))
        print("  ranker " + " ".join(f"{k}={v:.3f}" for k, v in accs.items()))
        print(f"  baselines (all pairs) random={base[0]:.3f} time={base[1]:.3f} video_views={base[2]:.3f}")
        print(f"  {time.perf_counter() - t0:.0f}s")


if __name__ == "__main__":
    main()
