"""Seeded generators of exact random instances.

All functions take a ``random.Random`` so that a seed fixes every draw.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .finprob import FiniteProbability, StochasticMorphism, validate


def composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniform random split of ``total`` into ``parts`` nonnegative integers."""
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0, *cuts, total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def random_distribution(rng: random.Random, n: int, max_den: int = 12,
                        zero_prob: float = 0.0) -> list[Fraction]:
    """Probability vector with denominator at most ``max_den``.

    With ``zero_prob`` > 0 some coordinates are forced to zero (never all).
    """
    forced = [rng.random() < zero_prob for _ in range(n)]
    if all(forced):
        forced[rng.randrange(n)] = False
    free = [i for i in range(n) if not forced[i]]
    den = rng.randint(1, max_den)
    counts = composition(rng, den, len(free))
    out = [Fraction(0)] * n
    for i, c in zip(free, counts):
        out[i] = Fraction(c, den)
    return out


def random_probability(rng: random.Random, n: int, max_den: int = 12,
                       zero_prob: float = 0.0, prefix: str = "") -> FiniteProbability:
    probs = random_distribution(rng, n, max_den, zero_prob)
    return FiniteProbability(tuple(f"{prefix}{i}" for i in range(n)), tuple(probs))


def _coupling(rng: random.Random, p: Sequence[Fraction], q: Sequence[Fraction]) -> list[list[Fraction]]:
    """A random joint law with marginals p (columns) and q (rows).

    Mixes a north-west-corner coupling under random orderings with the
    independent coupling, using a random rational weight.
    """
    n, m = len(p), len(q)
    xs = list(range(n))
    ys = list(range(m))
    rng.shuffle(xs)
    rng.shuffle(ys)
    nw = [[Fraction(0)] * n for _ in range(m)]
    rp = {x: p[x] for x in xs}
    rq = {y: q[y] for y in ys}
    i = j = 0
    while i < n and j < m:
        x, y = xs[i], ys[j]
        t = min(rp[x], rq[y])
        nw[y][x] += t
        rp[x] -= t
        rq[y] -= t
        if rp[x] == 0:
            i += 1
        if rq[y] == 0:
            j += 1
    w = Fraction(rng.randint(0, 4), 4)
    return [[w * nw[y][x] + (1 - w) * p[x] * q[y] for x in range(n)] for y in range(m)]


def random_morphism_between(rng: random.Random, p: FiniteProbability, q: FiniteProbability,
                            max_den: int = 12) -> StochasticMorphism:
    """A validated morphism p -> q.

    Columns over the support of p come from a coupling; columns where p
    vanishes are arbitrary random distributions.
    """
    joint = _coupling(rng, p.probs, q.probs)
    cols = []
    for x, px in enumerate(p.probs):
        if px:
            cols.append([joint[y][x] / px for y in range(len(q))])
        else:
            cols.append(random_distribution(rng, len(q), max_den))
    matrix = [[cols[x][y] for x in range(len(p))] for y in range(len(q))]
    return validate(matrix, p, q)


def random_morphism_from(rng: random.Random, p: FiniteProbability, m: int, max_den: int = 12,
                         zero_rows: Sequence[int] = (), prefix: str = "y") -> StochasticMorphism:
    """Random stochastic columns out of p; the target is whatever S p is.

    Rows listed in ``zero_rows`` are kept at zero on every column.
    """
    allowed = [y for y in range(m) if y not in set(zero_rows)]
    cols = []
    for _ in range(len(p)):
        d = random_distribution(rng, len(allowed), max_den)
        col = [Fraction(0)] * m
        for y, v in zip(allowed, d):
            col[y] = v
        cols.append(col)
    matrix = [[cols[x][y] for x in range(len(p))] for y in range(m)]
    image = [sum(matrix[y][x] * p.probs[x] for x in range(len(p))) for y in range(m)]
    q = FiniteProbability(tuple(f"{prefix}{y}" for y in range(m)), tuple(image))
    return validate(matrix, p, q)


def random_rational(rng: random.Random, max_den: int = 12, lo: Fraction = Fraction(0),
                    hi: Fraction = Fraction(1)) -> Fraction:
    den = rng.randint(1, max_den)
    lo_k = -(-lo.numerator * den // lo.denominator)
    hi_k = hi.numerator * den // hi.denominator
    return Fraction(rng.randint(lo_k, hi_k), den)


def permutation_matrix(perm: Sequence[int]) -> list[list[Fraction]]:
    """Matrix sending source point x to target point perm[x]."""
    n = len(perm)
    return [[Fraction(int(perm[x] == y)) for x in range(n)] for y in range(n)]


def random_pointed_map(rng: random.Random, x, y):
    from .probcat import PointedMap

    table = [y.basepoint if v == x.basepoint else rng.randrange(y.size) for v in range(x.size)]
    return PointedMap(x, y, tuple(table))


def random_ps_object(rng: random.Random, n: int, max_size: int = 3, zero_prob: float = 0.0):
    from .probcat import PointedSet, ProbPointedSet

    w = random_distribution(rng, n, zero_prob=zero_prob)
    sets = []
    for _ in range(n):
        size = rng.randint(1, max_size)
        sets.append(PointedSet(size, rng.randrange(size)))
    return ProbPointedSet(tuple(w), tuple(sets))


def random_ps_family(rng: random.Random, x, y, mass: Fraction, max_len: int = 2):
    """Up to ``max_len`` random pointed maps whose weights add up to ``mass``."""
    if not mass:
        return ()
    k = rng.randint(1, max_len)
    den = rng.randint(1, 4)
    parts = [Fraction(c + 1, den + k) for c in composition(rng, den, k)]
    return tuple((random_pointed_map(rng, x, y), mass * p) for p in parts)


def random_ps_morphism(rng: random.Random, source, m: int, zero_rows: Sequence[int] = (),
                       max_size: int = 3):
    """A checked morphism out of ``source`` with ``m`` target terms.

    The target weights are the image of the source weights.  Rows in
    ``zero_rows`` get zero target weight; source terms of weight zero may
    still send mass there, which exercises the degenerate copair branch.
    """
    from .probcat import PointedSet, ProbPointedSet, make_morphism

    n = len(source)
    p = FiniteProbability(source.labels, source.weights)
    s = random_morphism_from(rng, p, m, zero_rows=zero_rows)
    cols = [list(s.column(x)) for x in range(n)]
    for x in range(n):
        if not source.weights[x]:
            cols[x] = random_distribution(rng, m)
    matrix = [[cols[x][y] for x in range(n)] for y in range(m)]
    sets = []
    for _ in range(m):
        size = rng.randint(1, max_size)
        sets.append(PointedSet(size, rng.randrange(size)))
    target = ProbPointedSet(s.target.probs, tuple(sets))
    fams = {(j, i): random_ps_family(rng, source.sets[i], target.sets[j], matrix[j][i])
            for j in range(m) for i in range(n)}
    return make_morphism(source, target, matrix, fams)


def random_ps_morphism_between(rng: random.Random, source, target):
    """A checked morphism with prescribed source and target objects."""
    from .probcat import make_morphism

    p = FiniteProbability(source.labels, source.weights)
    q = FiniteProbability(target.labels, target.weights)
    s = random_morphism_between(rng, p, q)
    fams = {(j, i): random_ps_family(rng, source.sets[i], target.sets[j], s.matrix[j][i])
            for j in range(len(target)) for i in range(len(source))}
    return make_morphism(source, target, s.matrix, fams)
