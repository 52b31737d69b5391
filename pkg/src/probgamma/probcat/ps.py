"""Probabilistic pointed sets: convex combinations of pointed sets.

A morphism carries a stochastic matrix on the weights together with, for
every pair (target term j, source term i), a finite family of pointed maps
X_i -> Y_j whose weights add up to the matrix entry S[j][i].
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..errors import EmptyFamily, Mismatch, TargetMismatch
from ..finprob import (
    FiniteProbability,
    StochasticMorphism,
    as_fraction,
    copair_matrix,
    injections as fp_injections,
    matmul,
    validate,
)
from .pointed import (
    POINT,
    PointedMap,
    PointedSet,
    compose_maps,
    constant_map,
    identity_map,
    smash,
    wedge,
    wedge_copair,
    wedge_inclusions,
)

Family = tuple[tuple[PointedMap, Fraction], ...]


@dataclass(frozen=True)
class ProbPointedSet:
    weights: tuple[Fraction, ...]
    sets: tuple[PointedSet, ...]
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

    @classmethod
    def from_terms(cls, terms: Iterable[tuple], labels: Sequence[str] = ()) -> "ProbPointedSet":
        terms = list(terms)
        return cls(tuple(w for w, _ in terms), tuple(s for _, s in terms), tuple(labels))

    @property
    def terms(self) -> list[tuple[Fraction, PointedSet]]:
        return list(zip(self.weights, self.sets))

    def __len__(self) -> int:
        return len(self.weights)


def zero_object() -> ProbPointedSet:
    return ProbPointedSet((Fraction(1),), (POINT,), ("*",))


def forget(obj: ProbPointedSet) -> FiniteProbability:
    return FiniteProbability(obj.labels, obj.weights)


def embed_fp(p: FiniteProbability) -> ProbPointedSet:
    return ProbPointedSet(p.probs, (POINT,) * len(p), p.labels)


def canonical_family(entries: Iterable[tuple[PointedMap, Fraction]]) -> Family:
    """Merge repeated maps, drop zero weights, sort by map."""
    acc: dict[PointedMap, Fraction] = defaultdict(Fraction)
    for f, w in entries:
        acc[f] += w
    return tuple(sorted(((f, w) for f, w in acc.items() if w), key=lambda e: e[0]))


@dataclass(frozen=True, eq=False)
class ProbMorphism:
    source: ProbPointedSet
    target: ProbPointedSet
    stoch: StochasticMorphism
    families: Mapping[tuple[int, int], Family]

    def __post_init__(self):
        fams = {}
        for key, entries in self.families.items():
            fam = canonical_family(entries)
            if fam:
                fams[(int(key[0]), int(key[1]))] = fam
        object.__setattr__(self, "families", dict(sorted(fams.items())))
        if self.stoch.shape != (len(self.target), len(self.source)):
            raise ValueError("stochastic matrix shape does not match the terms")
        for (j, i), fam in self.families.items():
            for f, w in fam:
                if f.source != self.source.sets[i] or f.target != self.target.sets[j]:
                    raise Mismatch(f"map in family ({j},{i}) has the wrong endpoints", slot=f"{j},{i}")
                if w < 0:
                    raise ValueError(f"negative weight in family ({j},{i})")

    def family(self, j: int, i: int) -> Family:
        return self.families.get((j, i), ())

    def weight_sums_ok(self) -> bool:
        m = self.stoch.matrix
        return all(
            sum((w for _, w in self.family(j, i)), Fraction(0)) == m[j][i]
            for j in range(len(self.target)) for i in range(len(self.source))
        )

    def check(self) -> "ProbMorphism":
        """Verify the weight-sum invariant and that the matrix is a valid FP morphism."""
        validate(self.stoch.matrix, self.stoch.source, self.stoch.target)
        for j in range(len(self.target)):
            for i in range(len(self.source)):
                s = sum((w for _, w in self.family(j, i)), Fraction(0))
                if s != self.stoch.matrix[j][i]:
                    raise Mismatch(f"family ({j},{i}) weighs {s}, matrix entry is "
                                   f"{self.stoch.matrix[j][i]}", slot=f"{j},{i}")
        return self

    def __eq__(self, other):
        if not isinstance(other, ProbMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.stoch.matrix == other.stoch.matrix and self.families == other.families)

    def __hash__(self):
        return hash((self.source, self.target, self.stoch.matrix, tuple(self.families.items())))


def make_morphism(source: ProbPointedSet, target: ProbPointedSet, matrix,
                  families: Mapping[tuple[int, int], Iterable]) -> ProbMorphism:
    """Checked constructor."""
    stoch = StochasticMorphism(forget(source), forget(target), matrix)
    return ProbMorphism(source, target, stoch, {k: tuple(v) for k, v in families.items()}).check()


def forget_morphism(phi: ProbMorphism) -> StochasticMorphism:
    return phi.stoch


def identity_prob(obj: ProbPointedSet) -> ProbMorphism:
    n = len(obj)
    matrix = tuple(tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n))
    fams = {(i, i): ((identity_map(obj.sets[i]), Fraction(1)),) for i in range(n)}
    return ProbMorphism(obj, obj, StochasticMorphism(forget(obj), forget(obj), matrix), fams)


def deterministic(f: PointedMap) -> ProbMorphism:
    """A single pointed map with probability one, between one-term objects."""
    src = ProbPointedSet((Fraction(1),), (f.source,))
    tgt = ProbPointedSet((Fraction(1),), (f.target,))
    return make_morphism(src, tgt, [[1]], {(0, 0): [(f, Fraction(1))]})


def compose_prob(phi2: ProbMorphism, phi1: ProbMorphism) -> ProbMorphism:
    """phi2 after phi1."""
    if phi1.target != phi2.source:
        raise Mismatch("target of the first morphism is not the source of the second")
    n_k, n_j, n_i = len(phi2.target), len(phi1.target), len(phi1.source)
    fams = {}
    for k in range(n_k):
        for i in range(n_i):
            entries = []
            for j in range(n_j):
                for g, w2 in phi2.family(k, j):
                    for f, w1 in phi1.family(j, i):
                        entries.append((compose_maps(g, f), w2 * w1))
            fams[(k, i)] = tuple(entries)
    matrix = matmul(phi2.stoch.matrix, phi1.stoch.matrix)
    stoch = StochasticMorphism(phi1.stoch.source, phi2.stoch.target, matrix)
    return ProbMorphism(phi1.source, phi2.target, stoch, fams)


@dataclass(frozen=True)
class PSCoproduct:
    obj: ProbPointedSet
    inj1: ProbMorphism
    inj2: ProbMorphism


def coproduct_object(a: ProbPointedSet, b: ProbPointedSet) -> ProbPointedSet:
    weights, sets, labels = [], [], []
    for (wa, xa, la), (wb, xb, lb) in itertools.product(
            zip(a.weights, a.sets, a.labels), zip(b.weights, b.sets, b.labels)):
        weights.append(wa * wb)
        sets.append(wedge(xa, xb))
        labels.append(f"{la}|{lb}")
    return ProbPointedSet(tuple(weights), tuple(sets), tuple(labels))


def coproduct_ps(a: ProbPointedSet, b: ProbPointedSet) -> PSCoproduct:
    """Terms (i,j) in row-major order with weight a_i b_j and set X_i v X'_j."""
    obj = coproduct_object(a, b)
    s1, s2 = fp_injections(forget(a), forget(b))
    m = len(b)
    fam1, fam2 = {}, {}
    for i, j in itertools.product(range(len(a)), range(m)):
        inc1, inc2 = wedge_inclusions(a.sets[i], b.sets[j])
        fam1[(i * m + j, i)] = ((inc1, b.weights[j]),)
        fam2[(i * m + j, j)] = ((inc2, a.weights[i]),)
    inj1 = ProbMorphism(a, obj, s1, fam1)
    inj2 = ProbMorphism(b, obj, s2, fam2)
    return PSCoproduct(obj, inj1, inj2)


def copair_ps(phi: ProbMorphism, phi2: ProbMorphism) -> ProbMorphism:
    """The morphism out of coproduct_ps(phi.source, phi2.source).

    Where the target weight sigma_k is positive, the family over
    (k,(a,a')) consists of the wedge maps f v g with weight
    mu nu / sigma_k.  Where sigma_k = 0 the weight is mu/M + nu/N, with N and
    M the sizes of the families of phi and phi2 at that slot.  An empty
    family with zero matrix entry is padded by the constant map at weight 0
    so that the second branch still has something to pair with.
    """
    if phi.target != phi2.target:
        raise TargetMismatch("copair needs morphisms with the same target")
    a_obj, b_obj, tgt = phi.source, phi2.source, phi.target
    obj = coproduct_object(a_obj, b_obj)
    sigma = tgt.weights
    m = len(b_obj)
    fams = {}
    for k in range(len(tgt)):
        for a, a2 in itertools.product(range(len(a_obj)), range(m)):
            fam1 = _padded(phi, k, a)
            fam2 = _padded(phi2, k, a2)
            entries = []
            n1, n2 = len(fam1), len(fam2)
            for (f, mu), (g, nu) in itertools.product(fam1, fam2):
                w = mu * nu / sigma[k] if sigma[k] else mu / n2 + nu / n1
                entries.append((wedge_copair(f, g), w))
            fams[(k, a * m + a2)] = tuple(entries)
    stoch = StochasticMorphism(forget(obj), forget(tgt), copair_matrix(phi.stoch, phi2.stoch))
    return ProbMorphism(obj, tgt, stoch, fams)


def _padded(phi: ProbMorphism, k: int, a: int) -> Family:
    fam = phi.family(k, a)
    if fam:
        return fam
    if phi.stoch.matrix[k][a] > 0:
        raise EmptyFamily(f"family ({k},{a}) is empty but its matrix entry is positive", slot=f"{k},{a}")
    return ((constant_map(phi.source.sets[a], phi.target.sets[k]), Fraction(0)),)


def copair_weight_table(phi: ProbMorphism, phi2: ProbMorphism, k: int, a: int, a2: int):
    """The raw (f, g, weight) triples at one slot, before canonicalization."""
    sigma = phi.target.weights[k]
    fam1, fam2 = _padded(phi, k, a), _padded(phi2, k, a2)
    out = []
    for (f, mu), (g, nu) in itertools.product(fam1, fam2):
        w = mu * nu / sigma if sigma else mu / len(fam2) + nu / len(fam1)
        out.append((f, g, w))
    return out


def reaggregate(phi: ProbMorphism, phi2: ProbMorphism, k: int, a: int) -> dict[PointedMap, Fraction]:
    """Weight each map f of phi's (k,a) family receives back from the copair.

    Sums, over the source terms a' of phi2 and over phi2's family there, the
    copair weight of f v g times the injection weight lambda'_{a'}.  The
    universal property says the result is exactly phi's family.
    """
    lam2 = phi2.source.weights
    acc: dict[PointedMap, Fraction] = defaultdict(Fraction)
    for a2 in range(len(phi2.source)):
        for f, _g, w in copair_weight_table(phi, phi2, k, a, a2):
            acc[f] += w * lam2[a2]
    return {f: w for f, w in acc.items() if w}


def smash_ps(a: ProbPointedSet, b: ProbPointedSet) -> ProbPointedSet:
    weights, sets, labels = [], [], []
    for (wa, xa, la), (wb, xb, lb) in itertools.product(
            zip(a.weights, a.sets, a.labels), zip(b.weights, b.sets, b.labels)):
        weights.append(wa * wb)
        sets.append(smash(xa, xb))
        labels.append(f"{la}|{lb}")
    return ProbPointedSet(tuple(weights), tuple(sets), tuple(labels))


def to_zero(obj: ProbPointedSet) -> ProbMorphism:
    z = zero_object()
    fams = {(0, i): ((constant_map(x, POINT), Fraction(1)),) for i, x in enumerate(obj.sets)}
    return make_morphism(obj, z, [[1] * len(obj)], fams)


def from_zero(obj: ProbPointedSet) -> ProbMorphism:
    z = zero_object()
    fams = {(j, 0): ((constant_map(POINT, y), w),) for j, (w, y) in enumerate(obj.terms)}
    return make_morphism(z, obj, [[w] for w in obj.weights], fams)
