"""Drifting-mean stream tracked by an exponentially weighted sketch.

Prints the median estimate against the true mean every ``--every`` steps,
then the success rate over several seeds.
"""

import argparse

import numpy as np

from hermsketch import UnivariateSketch
from hermsketch.evaluation import drifting_median_run


def trace(seed: int, n: int, drift: float, lam: float, order_n: int, every: int) -> None:
    rng = np.random.default_rng(seed)
    sketch = UnivariateSketch(order_n, standardize=True, lam=lam)
    print(f"{'step':>6}{'true mean':>11}{'median est':>12}")
    for i in range(1, n + 1):
        sketch.update(rng.normal(drift * i))
        if i % every == 0:
            print(f"{i:>6}{drift * i:>11.3f}{float(sketch.quantiles(0.5)):>12.3f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--drift", type=float, default=0.001)
    ap.add_argument("--lam", type=float, default=0.01)
    ap.add_argument("--order", type=int, default=10)
    ap.add_argument("--every", type=int, default=100)
    ap.add_argument("--seeds", type=int, default=20)
    a = ap.parse_args()
    trace(0, a.n, a.drift, a.lam, a.order, a.every)
    hits = 0
    for seed in range(a.seeds):
        est, truth = drifting_median_run(seed, a.n, a.drift, a.lam, a.order)
        hits += abs(est - truth) < 0.25
    print(f"{hits}/{a.seeds} runs end within 0.25 of the true mean")
