"""Online mean / standard deviation used to standardize observations."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional

import numpy as np


@dataclass
class RunningMoments:
    """Running first and second moments of a scalar stream.

    ``lam=None`` keeps cumulative (Welford) state in ``count``, ``mean``,
    ``m2``. A ``lam`` in (0, 1] keeps exponentially weighted state in
    ``ew_mean`` and ``ew_var`` instead; ``count`` is still tracked.
    """

    lam: Optional[float] = None
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    ew_mean: float = 0.0
    ew_var: float = 0.0

    def __post_init__(self):
        if self.lam is not None and not 0.0 < self.lam <= 1.0:
            raise ValueError(f"lambda must be in (0, 1], got {self.lam}")

    @property
    def exponential(self) -> bool:
        return self.lam is not None

    def update(self, x: float) -> "RunningMoments":
        x = float(x)
        if not math.isfinite(x):
            raise ValueError("observation must be finite")
        self.count += 1
        if self.lam is None:
            delta = x - self.mean
            self.mean += delta / self.count
            self.m2 += delta * (x - self.mean)
        elif self.count == 1:
            self.ew_mean = x
            self.ew_var = 0.0
        else:
            delta = x - self.ew_mean
            self.ew_mean = (1.0 - self.lam) * self.ew_mean + self.lam * x
            self.ew_var = (1.0 - self.lam) * self.ew_var + self.lam * delta * delta
        return self

    def update_batch(self, xs) -> "RunningMoments":
        """Fold a whole batch in (cumulative mode only)."""
        if self.lam is not None:
            raise ValueError("batch moment updates need cumulative mode")
        xs = np.asarray(xs, dtype=float)
        if xs.size == 0:
            return self
        if not np.all(np.isfinite(xs)):
            raise ValueError("observations must be finite")
        mean = float(xs.mean())
        batch = RunningMoments(
            count=int(xs.size), mean=mean, m2=float(np.sum((xs - mean) ** 2))
        )
        merged = merge_moments([self, batch])
        self.count, self.mean, self.m2 = merged.count, merged.mean, merged.m2
        return self

    @property
    def location(self) -> float:
        return self.ew_mean if self.lam is not None else self.mean

    @property
    def variance(self) -> float:
        if self.lam is not None:
            return self.ew_var
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def scale(self) -> float:
        """Standard deviation used for standardization; 1 while undefined."""
        if self.count < 2:
            return 1.0
        s = self.std
        return s if s > 0.0 else 1.0

    def copy(self) -> "RunningMoments":
        return replace(self)


def merge_moments(states: Iterable[RunningMoments]) -> RunningMoments:
    """Combine cumulative moment states from disjoint shards.

    Folds pairwise left to right with the parallel-variance update; the
    result matches a single pass over the concatenated data.
    """
    states = list(states)
    if not states:
        raise ValueError("need at least one moment state")
    if any(s.lam is not None for s in states):
        raise ValueError("exponentially weighted moments cannot be merged")
    count, mean, m2 = states[0].count, states[0].mean, states[0].m2
    for s in states[1:]:
        if s.count == 0:
            continue
        if count == 0:
            count, mean, m2 = s.count, s.mean, s.m2
            continue
        total = count + s.count
        delta = s.mean - mean
        mean = mean + delta * (s.count / total)
        m2 = m2 + s.m2 + delta * delta * (count * s.count / total)
        count = total
    return RunningMoments(count=count, mean=mean, m2=m2)
