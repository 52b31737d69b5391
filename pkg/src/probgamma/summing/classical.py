"""Summing functors into probabilistic pointed sets, in closed form.

Such a functor on X is determined by one probability lambda_x per non-base
point.  On a pointed subset A it returns 2^k terms (k = #A - 1), one per
binary pattern: bit 0 at coordinate x picks the old basepoint (weight
lambda_x), bit 1 promotes x to basepoint (weight 1 - lambda_x).  Patterns
run with the smallest point as the most significant bit, which agrees with
the row-major term order of iterated coproducts.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import NotSubset
from ..finprob import as_fraction
from ..probcat import PointedSet, ProbPointedSet, coproduct_object, zero_object


def pointed_subset(x: PointedSet, a: Iterable[int]) -> frozenset[int]:
    """Validate a subset of X; the basepoint is added if absent."""
    a = frozenset(int(v) for v in a)
    bad = sorted(v for v in a if not 0 <= v < x.size)
    if bad:
        raise NotSubset(f"points {bad} are not in a pointed set of size {x.size}", points=bad)
    return a | {x.basepoint}


def subsets(x: PointedSet) -> list[frozenset[int]]:
    """All pointed subsets, ordered by binary code over the non-base points."""
    pts = x.nonbase()
    out = []
    for code in range(1 << len(pts)):
        out.append(frozenset([x.basepoint] + [p for k, p in enumerate(pts) if code >> k & 1]))
    return out


def term_label(assignment: Iterable[tuple[int, int]]) -> str:
    return "|".join(f"x{p}:{b}" for p, b in sorted(assignment)) or "*"


def canonical_label(label: str) -> str:
    """Sort the per-point tokens of a label; drops the zero-object marker."""
    tokens = sorted(t for t in label.split("|") if t != "*")
    return "|".join(tokens) or "*"


@dataclass(frozen=True)
class ClassicalSummingFunctor:
    base_set: PointedSet
    lam: tuple[Fraction, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lam = tuple(as_fraction(v) for v in self.lam)
        if len(lam) != self.base_set.reduced_size:
            raise ValueError(f"need {self.base_set.reduced_size} parameters, got {len(lam)}")
        if any(not 0 <= v <= 1 for v in lam):
            raise ValueError("parameters must lie in [0, 1]")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "_index", {p: k for k, p in enumerate(self.base_set.nonbase())})

    def weight(self, point: int) -> Fraction:
        return self.lam[self._index[point]]

    def lambda_of(self, a: Iterable[int]) -> Fraction:
        """Product of lambda_x over the non-base points of A."""
        out = Fraction(1)
        for p in pointed_subset(self.base_set, a) - {self.base_set.basepoint}:
            out *= self.weight(p)
        return out

    def evaluate(self, a: Iterable[int]) -> ProbPointedSet:
        return classical_evaluate(self, a)

    def table(self) -> dict[frozenset[int], ProbPointedSet]:
        return {a: classical_evaluate(self, a) for a in subsets(self.base_set)}


def classical_evaluate(phi: ClassicalSummingFunctor, a: Iterable[int]) -> ProbPointedSet:
    a = pointed_subset(phi.base_set, a)
    pts = sorted(a - {phi.base_set.basepoint})
    k = len(pts)
    if k == 0:
        return zero_object()
    weights, sets, labels = [], [], []
    for bits in itertools.product((0, 1), repeat=k):
        w = Fraction(1)
        for p, b in zip(pts, bits):
            w *= phi.weight(p) if b == 0 else 1 - phi.weight(p)
        weights.append(w)
        # a single two-point term keeps its chosen basepoint; wedges are based at 0
        sets.append(PointedSet(2, bits[0]) if k == 1 else PointedSet(k + 1, 0))
        labels.append(term_label(zip(pts, bits)))
    return ProbPointedSet(tuple(weights), tuple(sets), tuple(labels))


def marginal(obj: ProbPointedSet, point: int) -> tuple[Fraction, Fraction]:
    """Total weight of the patterns with bit 0 and bit 1 at the given point."""
    out = [Fraction(0), Fraction(0)]
    for w, label in zip(obj.weights, obj.labels):
        for tok in label.split("|"):
            p, _, b = tok.partition(":")
            if p == f"x{point}":
                out[int(b)] += w
    return out[0], out[1]


def _signature(obj: ProbPointedSet):
    """Canonical label -> (weight, set size); None on duplicate labels."""
    out = {}
    for w, x, label in zip(obj.weights, obj.sets, obj.labels):
        key = canonical_label(label)
        if key in out:
            return None
        out[key] = (w, x.size)
    return out


def same_up_to_reindexing(p: ProbPointedSet, q: ProbPointedSet) -> bool:
    """Equal weights on matching labels, with isomorphic pointed sets."""
    sp, sq = _signature(p), _signature(q)
    return sp is not None and sp == sq


@dataclass(frozen=True)
class SummingReport:
    passed: bool
    pairs_checked: int
    failures: tuple[dict, ...]

    def to_json(self) -> dict:
        return {"pass": self.passed, "pairs_checked": self.pairs_checked, "failures": list(self.failures)}


def _fmt(a: frozenset[int]) -> list[int]:
    return sorted(a)


def verify_summing(table: Mapping[frozenset[int], ProbPointedSet], x: PointedSet) -> SummingReport:
    """Check the zero condition and the coproduct condition on every disjoint pair."""
    failures = []
    subs = subsets(x)
    missing = [s for s in subs if s not in table]
    if missing:
        return SummingReport(False, 0, tuple({"subset": _fmt(s), "reason": "missing"} for s in missing))
    star = frozenset([x.basepoint])
    z = table[star]
    if len(z) != 1 or z.sets[0].size != 1:
        failures.append({"subset": _fmt(star), "reason": "basepoint is not sent to the zero object"})
    checked = 0
    for i, a in enumerate(subs):
        for b in subs[i + 1:]:
            if a & b != star:
                continue
            checked += 1
            expect = coproduct_object(table[a], table[b])
            if not same_up_to_reindexing(table[a | b], expect):
                failures.append({"pair": [_fmt(a), _fmt(b)], "union": _fmt(a | b),
                                 "reason": "union is not the coproduct"})
    return SummingReport(not failures, checked, tuple(failures))
