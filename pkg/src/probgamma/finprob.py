"""Finite probability spaces with stochastic-matrix morphisms.

Everything here is exact: probabilities and matrix entries are
``fractions.Fraction``.  Matrices are stored as tuples of rows with shape
(#target x #source), so column ``x`` of a morphism is the distribution of
the image of source point ``x``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    ColumnNotStochastic,
    InvalidProbability,
    MeasureNotPreserved,
    NegativeEntry,
    SourceTargetMismatch,
    TargetMismatch,
)

Matrix = tuple[tuple[Fraction, ...], ...]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings. Floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if any(c in x for c in ".eE"):
            raise ValueError(f"not a rational literal: {x!r}")
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class FiniteProbability:
    labels: tuple[str, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        labels = tuple(str(l) for l in self.labels)
        probs = tuple(as_fraction(p) for p in self.probs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)
        if len(labels) != len(probs):
            raise InvalidProbability("labels and probs differ in length",
                                     labels=len(labels), probs=len(probs))
        if not labels:
            raise InvalidProbability("empty probability space")
        if len(set(labels)) != len(labels):
            raise InvalidProbability("labels are not distinct")
        for i, p in enumerate(probs):
            if p < 0:
                raise InvalidProbability("negative probability", index=i)
        if sum(probs) != 1:
            raise InvalidProbability("probabilities do not sum to 1", total=str(sum(probs)))

    @classmethod
    def from_probs(cls, probs: Iterable, labels: Sequence[str] | None = None) -> "FiniteProbability":
        probs = tuple(as_fraction(p) for p in probs)
        if labels is None:
            labels = tuple(str(i) for i in range(len(probs)))
        return cls(tuple(labels), probs)

    @classmethod
    def uniform(cls, n: int) -> "FiniteProbability":
        return cls.from_probs([Fraction(1, n)] * n)

    def __len__(self) -> int:
        return len(self.probs)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.probs) if p)


def point() -> FiniteProbability:
    """The zero object: a single point of mass 1."""
    return FiniteProbability(("*",), (Fraction(1),))


def _matvec(m: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols)
        for row in a
    )


def _as_matrix(rows) -> Matrix:
    return tuple(tuple(as_fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class StochasticMorphism:
    """A morphism (X,P) -> (Y,Q) of FP.

    The constructor only checks shapes.  Use :func:`validate` to obtain a
    morphism whose three defining properties have been verified; the copair
    produced by :func:`coproduct_morphisms` is the one place that builds an
    unchecked matrix on purpose (its columns need not sum to one).
    """

    source: FiniteProbability
    target: FiniteProbability
    matrix: Matrix

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != len(self.target) or any(len(r) != len(self.source) for r in m):
            raise ValueError(
                f"matrix shape must be ({len(self.target)} x {len(self.source)})")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.target), len(self.source)

    def column(self, x: int) -> tuple[Fraction, ...]:
        return tuple(row[x] for row in self.matrix)

    @property
    def is_column_stochastic(self) -> bool:
        return all(sum(self.column(x)) == 1 for x in range(len(self.source))) and all(
            e >= 0 for row in self.matrix for e in row)

    @property
    def preserves_measure(self) -> bool:
        return _matvec(self.matrix, self.source.probs) == self.target.probs


def validate(matrix, source: FiniteProbability, target: FiniteProbability) -> StochasticMorphism:
    """Checked constructor for FP morphisms.

    Raises the error for the first violated property, scanning row-major for
    negative entries, then columns, then target rows.
    """
    m = _as_matrix(matrix)
    if len(m) != len(target) or any(len(r) != len(source) for r in m):
        raise ValueError(f"matrix shape must be ({len(target)} x {len(source)})")
    for y, row in enumerate(m):
        for x, e in enumerate(row):
            if e < 0:
                raise NegativeEntry(f"entry ({y},{x}) is negative", row=y, col=x, value=str(e))
    for x in range(len(source)):
        s = sum((row[x] for row in m), Fraction(0))
        if s != 1:
            raise ColumnNotStochastic(f"column {x} sums to {s}", col=x, sum=str(s))
    image = _matvec(m, source.probs)
    for y, (got, want) in enumerate(zip(image, target.probs)):
        if got != want:
            raise MeasureNotPreserved(f"row {y}: S P gives {got}, target has {want}",
                                      row=y, got=str(got), expected=str(want))
    return StochasticMorphism(source, target, m)


def identity(p: FiniteProbability) -> StochasticMorphism:
    n = len(p)
    return StochasticMorphism(p, p, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))


def compose(s2: StochasticMorphism, s1: StochasticMorphism) -> StochasticMorphism:
    """s2 after s1."""
    if s1.target != s2.source:
        raise SourceTargetMismatch("target of the first morphism is not the source of the second")
    return StochasticMorphism(s1.source, s2.target, matmul(s2.matrix, s1.matrix))


def target_morphism(p: FiniteProbability, q: FiniteProbability) -> StochasticMorphism:
    """Every column equal to q; the only morphism out of the zero object when p is a point."""
    return StochasticMorphism(p, q, tuple(tuple(qb for _ in p.probs) for qb in q.probs))


def to_point(p: FiniteProbability) -> StochasticMorphism:
    return target_morphism(p, point())


def from_point(q: FiniteProbability) -> StochasticMorphism:
    return target_morphism(point(), q)


def coproduct_objects(p: FiniteProbability, p2: FiniteProbability) -> FiniteProbability:
    """Independent product, labels "a|b" in row-major order."""
    labels = tuple(f"{a}|{b}" for a, b in itertools.product(p.labels, p2.labels))
    probs = tuple(x * y for x, y in itertools.product(p.probs, p2.probs))
    return FiniteProbability(labels, probs)


def marginals(pp: FiniteProbability, n: int, m: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Row and column marginals of a row-major n*m product distribution."""
    grid = [pp.probs[i * m:(i + 1) * m] for i in range(n)]
    return tuple(sum(r) for r in grid), tuple(sum(c) for c in zip(*grid))


def injections(p: FiniteProbability, p2: FiniteProbability) -> tuple[StochasticMorphism, StochasticMorphism]:
    """The two structure maps into coproduct_objects(p, p2).

    inj1 sends a to (a, b') with probability p2[b']; inj2 symmetrically.
    """
    pp = coproduct_objects(p, p2)
    n, m = len(p), len(p2)
    zero = Fraction(0)
    inj1 = tuple(
        tuple(p2.probs[b2] if a == b else zero for a in range(n))
        for b, b2 in itertools.product(range(n), range(m))
    )
    inj2 = tuple(
        tuple(p.probs[b] if a2 == b2 else zero for a2 in range(m))
        for b, b2 in itertools.product(range(n), range(m))
    )
    return validate(inj1, p, pp), validate(inj2, p2, pp)


def copair_matrix(s: StochasticMorphism, s2: StochasticMorphism) -> Matrix:
    """Entry (k,(a,a')) is S[k,a] S'[k,a'] / sigma_k, or S[k,a] + S'[k,a'] where sigma_k = 0."""
    sigma = s.target.probs
    rows = []
    for k, sk in enumerate(sigma):
        row = []
        for a, a2 in itertools.product(range(len(s.source)), range(len(s2.source))):
            x, y = s.matrix[k][a], s2.matrix[k][a2]
            row.append(x * y / sk if sk else x + y)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class Coproduct:
    obj: FiniteProbability
    inj1: StochasticMorphism
    inj2: StochasticMorphism
    copair: StochasticMorphism


def coproduct_morphisms(s: StochasticMorphism, s2: StochasticMorphism) -> Coproduct:
    """Injections and copair for two morphisms sharing their target.

    The copair commutes with both injections and transports the product
    measure to the common target, but it is not column-stochastic in
    general; see ``Coproduct.copair.is_column_stochastic``.
    """
    if s.target != s2.target:
        raise TargetMismatch("copair needs morphisms with the same target")
    inj1, inj2 = injections(s.source, s2.source)
    cp = StochasticMorphism(inj1.target, s.target, copair_matrix(s, s2))
    return Coproduct(inj1.target, inj1, inj2, cp)


def copair_search(s: StochasticMorphism, s2: StochasticMorphism, denominator: int,
                  max_entry: Fraction = Fraction(1), stochastic: bool = True) -> list[Matrix]:
    """Every matrix on the grid {k/denominator} in [0, max_entry] making both triangles commute.

    Brute force, meant for #X, #X', #Y <= 2.  With ``stochastic`` only
    column-stochastic solutions are kept.  Rows are solved independently,
    since the commuting identities never couple rows.
    """
    if s.target != s2.target:
        raise TargetMismatch("copair needs morphisms with the same target")
    lam, lam2 = s.source.probs, s2.source.probs
    n, m = len(lam), len(lam2)
    grid = [Fraction(k, denominator) for k in range(int(max_entry * denominator) + 1)]
    row_options = []
    for k in range(len(s.target)):
        opts = []
        for row in itertools.product(grid, repeat=n * m):
            ok = all(sum(row[a * m + b] * lam2[b] for b in range(m)) == s.matrix[k][a] for a in range(n))
            ok = ok and all(sum(row[a * m + b] * lam[a] for a in range(n)) == s2.matrix[k][b] for b in range(m))
            if ok:
                opts.append(row)
        row_options.append(opts)
    out = []
    for rows in itertools.product(*row_options):
        if stochastic and any(sum(r[c] for r in rows) != 1 for c in range(n * m)):
            continue
        out.append(tuple(rows))
    return out
