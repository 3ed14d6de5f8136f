"""Title-similarity threshold ablation and the title-vs-video replication filter.

    python3 scripts/ablation.py --subreddits 20
"""

import argparse

from pairlens.experiments import planted_config, run_world
from pairlens.pairing import PairingConfig
from pairlens.ranker import SplitSpec, ablate_thresholds, video_filter_ablation


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--subreddits", type=int, default=20)
    ap.add_argument("--split", default="date", choices=("date", "post_id", "video_id"))
    ap.add_argument("--grid", type=int, nargs="+", default=[50, 60, 70, 80, 90, 95])
    args = ap.parse_args()

    trial = run_world(planted_config(args.seed, n_subreddits=args.subreddits, posts_per_subreddit=2500))
    spec = SplitSpec(args.split, seed=args.seed)
    cfg = PairingConfig()
    ab = ablate_thresholds(trial.phases, trial.features, cfg, args.grid, spec)
    print(f"{'ld_pair_max':>11} {'accuracy':>9} {'train':>7} {'test':>6}")
    for r in ab.rows:
        print(f"{int(r.threshold):>11} {r.accuracy:>9.3f} {r.n_train:>7} {r.n_test:>6}")
    print(f"pearson(threshold, accuracy) = {ab.correlation}")
    vf = video_filter_ablation(trial.phases, trial.features, cfg, spec)
    print(f"ld_video <= 95 filter: with {vf['with_filter']:.3f}, without {vf['without_filter']:.3f}")


if __name__ == "__main__":
    main()
