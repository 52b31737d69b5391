"""Convex combinations of truncated cubical sets."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..finprob import FiniteProbability, as_fraction
from .cset import TruncatedCubicalSet, smash_cubical


@dataclass(frozen=True)
class ProbCubicalSet:
    weights: tuple[Fraction, ...]
    sets: tuple[TruncatedCubicalSet, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        w = tuple(as_fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "sets", tuple(self.sets))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(w))))
        if not (len(w) == len(self.sets) == len(self.labels)):
            raise ValueError("weights, sets and labels must have the same length")
        if any(x < 0 for x in w) or sum(w) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")

    def __len__(self):
        return len(self.weights)

    def forget(self) -> FiniteProbability:
        return FiniteProbability(self.labels, self.weights)


def prob_cubical_ops(a: ProbCubicalSet, b: ProbCubicalSet) -> ProbCubicalSet:
    """Bilinear smash: terms (i, j) row-major, weight a_i b_j, set K_i smash K'_j."""
    weights, sets, labels = [], [], []
    for (wa, ka, la), (wb, kb, lb) in itertools.product(
            zip(a.weights, a.sets, a.labels), zip(b.weights, b.sets, b.labels)):
        weights.append(wa * wb)
        sets.append(smash_cubical(ka, kb))
        labels.append(f"{la}|{lb}")
    return ProbCubicalSet(tuple(weights), tuple(sets), tuple(labels))
