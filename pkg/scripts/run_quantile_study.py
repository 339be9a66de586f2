"""Quantile accuracy study: MIAE and pMIAE per distribution and sample size.

    python3 scripts/run_quantile_study.py --sizes 1e4,1e5 --reps 20
"""

import argparse
import time
from dataclasses import dataclass, field

from hermsketch.evaluation import TEST_DISTRIBUTIONS, quantile_iae_study


@dataclass
class QuantileStudyConfig:
    sizes: list = field(default_factory=lambda: [10_000, 100_000])
    reps: int = 20
    order_n: int = 30
    seed: int = 0
    dists: list = field(default_factory=lambda: list(TEST_DISTRIBUTIONS))


def run(cfg: QuantileStudyConfig) -> None:
    print(f"{'dist':<12}{'n':>9}{'MIAE':>10}{'pMIAE':>10}{'sd':>10}{'secs':>8}")
    for name in cfg.dists:
        for n in cfg.sizes:
            start = time.perf_counter()
            r = quantile_iae_study(TEST_DISTRIBUTIONS[name], n, cfg.reps, cfg.order_n, cfg.seed)
            print(f"{name:<12}{n:>9}{r.miae:>10.4f}{r.pmiae:>10.4f}{r.std:>10.4f}"
                  f"{time.perf_counter() - start:>8.1f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1e4,1e5")
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--order", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dists", default=",".join(TEST_DISTRIBUTIONS))
    a = ap.parse_args()
    run(QuantileStudyConfig([int(float(s)) for s in a.sizes.split(",")], a.reps, a.order, a.seed,
                            a.dists.split(",")))
