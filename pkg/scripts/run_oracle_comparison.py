"""Per-user quality of the two-stage placement against exhaustive search.

For a batch of random user positions, solves both ways and reports the rate
ratio distribution.  Exhaustive search is only tractable for one to three
elements, so keep --antennas small.
"""

import argparse
import sys

import numpy as np

from pinchwave.baselines import exhaustive_search
from pinchwave.experiments import sample_user, trial_rng
from pinchwave.model import default_params
from pinchwave.placement import two_stage_optimize


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--antennas", type=int, default=2, choices=(1, 2, 3))
    ap.add_argument("--users", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--side-length", type=float, default=10.0)
    ap.add_argument("--plot", action="store_true", help="write oracle_ratios.png")
    args = ap.parse_args(argv)

    params = default_params(num_antennas=args.antennas,
                            region_side_m=args.side_length)
    ratios = np.empty(args.users)
    worst = (1.0, None)
    for t in range(args.users):
        user = sample_user(trial_rng(args.seed, t), params)
        two = two_stage_optimize(user, params).report.rate_bits
        _, oracle = exhaustive_search(user, params)
        ratios[t] = two / oracle.rate_bits
        if ratios[t] < worst[0]:
            worst = (ratios[t], user)
        if (t + 1) % 50 == 0:
            print(f"{t + 1}/{args.users} users", file=sys.stderr)

    print(f"rate ratio over {args.users} users, N={args.antennas}:")
    print(f"  median   {np.median(ratios):.6f}")
    print(f"  mean     {np.mean(ratios):.6f}")
    print(f"  10th pct {np.percentile(ratios, 10):.6f}")
    print(f"  min      {worst[0]:.6f} at user ({worst[1].x_m:.3f}, {worst[1].y_m:.3f})")

    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(ratios, bins=40)
        ax.set_xlabel("two-stage rate / exhaustive-search rate")
        ax.set_ylabel("users")
        fig.tight_layout()
        fig.savefig("oracle_ratios.png", dpi=150)
        print("wrote oracle_ratios.png", file=sys.stderr)


if __name__ == "__main__":
    main()
