"""Zero-effect worlds: how often does the metric battery pass Bonferroni by chance?

    python3 scripts/null_simulation.py --seeds 5 --subreddits 12
"""

import argparse

from pairlens.experiments import battery, null_config, null_pass_rate, random_baseline, run_world


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--subreddits", type=int, default=12)
    ap.add_argument("--posts-per-subreddit", type=int, default=2500)
    args = ap.parse_args()

    print(f"{'seed':>4} {'mixed':>7} {'passing':>8} {'rate':>6} {'random':>7}")
    for s in range(args.seeds):
        trial = run_world(null_config(s, n_subreddits=args.subreddits, posts_per_subreddit=args.posts_per_subreddit))
        reps = battery(trial)
        scored = [r for r in reps if r.family in ("continuous", "binary")]
        n_pass = sum(r.passes_bonferroni for r in scored)
        print(f"{s:>4} {len(trial.mixed):>7} {n_pass:>4}/{len(scored):<3} {null_pass_rate(reps):>6.3f} {random_baseline(trial, s):>7.3f}")
        for r in scored:
            if r.passes_bonferroni:
                print(f"     false positive: {r.metric_name} {r.test} p={r.p_value:.2e}")


if __name__ == "__main__":
    main()
