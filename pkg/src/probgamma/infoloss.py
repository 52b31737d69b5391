"""Entropy, relative entropy and information-loss functionals.

Natural logarithms throughout, with 0 log 0 = 0.  Losses are target value
minus source value, so a morphism that merges points has negative loss
under the Shannon difference.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import LabelMismatch, NonpositiveEuler, UndefinedInvariant
from .finprob import FiniteProbability, StochasticMorphism, compose, to_point, validate
from .sampling import (
    permutation_matrix,
    random_distribution,
    random_morphism_between,
    random_morphism_from,
    random_probability,
    random_rational,
)


def shannon(p: FiniteProbability | Sequence) -> float:
    probs = p.probs if isinstance(p, FiniteProbability) else p
    return -math.fsum(float(x) * math.log(x) for x in probs if x > 0)


def binary_entropy(lam) -> float:
    return shannon([Fraction(lam), 1 - Fraction(lam)])


def kl(p: FiniteProbability, q: FiniteProbability) -> float:
    """Relative entropy of p with respect to q; infinite off the support of q."""
    if p.labels != q.labels:
        raise LabelMismatch("relative entropy needs the same label set")
    total = []
    for a, b in zip(p.probs, q.probs):
        if a == 0:
            continue
        if b == 0:
            return math.inf
        total.append(float(a) * math.log(a / b))
    return max(0.0, math.fsum(total))


def loss_fp(s: StochasticMorphism, scale: float = 1.0) -> float:
    return scale * (shannon(s.target) - shannon(s.source))


# invariant families on pointed and cubical sets

KINDS = ("linear", "multiplicative", "log-semigroup", "exponential", "reduced-euler")


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class InvariantFamily:
    """A function rho(N) of the reduced size N of a pointed set.

    linear: kappa N.  multiplicative: completely multiplicative with the
    given values on primes.  log-semigroup: kappa log sigma(N) where sigma
    is multiplicative with values ``primes`` (identity when empty).
    exponential: lam ** N.  reduced-euler: N on pointed sets and the reduced
    Euler characteristic on cubical sets.
    """

    kind: str
    kappa: float = 1.0
    lam: float = 2.0
    primes: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown invariant kind {self.kind!r}")
        if self.kind == "exponential" and not self.lam > 0:
            raise ValueError("exponential base must be positive")
        if any(v <= 0 for v in self.primes.values()):
            raise ValueError("values on primes must be positive")

    def _mult(self, n: int) -> float:
        if n < 1:
            raise UndefinedInvariant(f"{self.kind} is not defined at N={n}", N=n)
        out = 1.0
        for p, e in factorize(n).items():
            out *= self.primes.get(p, float(p)) ** e
        return out

    def __call__(self, n: int) -> float:
        if self.kind in ("linear", "reduced-euler"):
            return self.kappa * n
        if self.kind == "exponential":
            return self.lam ** n
        if self.kind == "multiplicative":
            return self._mult(n)
        return self.kappa * math.log(self._mult(n))


def invariant_eval(fam: InvariantFamily, x) -> float:
    from .cubical import TruncatedCubicalSet, reduced_euler
    from .probcat import PointedSet

    if isinstance(x, PointedSet):
        return fam(x.reduced_size)
    if isinstance(x, TruncatedCubicalSet):
        if fam.kind != "reduced-euler":
            raise UndefinedInvariant(f"{fam.kind} is only defined on pointed sets")
        return fam.kappa * reduced_euler(x)
    raise UndefinedInvariant(f"no invariant for {type(x).__name__}")


def extensive_value(obj, base: InvariantFamily, kappa: float = 1.0) -> float:
    """kappa H(weights) + sum_i w_i rho(X_i) for a convex combination of objects."""
    weights = list(obj.weights)
    sets = getattr(obj, "sets", None) or getattr(obj, "objs")
    return kappa * shannon(weights) + math.fsum(
        float(w) * invariant_eval(base, x) for w, x in zip(weights, sets) if w)


def loss_pc(phi, base: InvariantFamily, kappa: float = 1.0) -> float:
    return extensive_value(phi.target, base, kappa) - extensive_value(phi.source, base, kappa)


def log_euler(k) -> float:
    from .cubical import reduced_euler

    chi = reduced_euler(k)
    if chi <= 0:
        raise NonpositiveEuler(f"reduced Euler characteristic is {chi}", chi=chi)
    return math.log(chi)


def loss_logchi(k, k2) -> float:
    return log_euler(k2) - log_euler(k)


@dataclass(frozen=True)
class LossFunctional:
    kind: str = "shannon-difference"
    scale: float = 1.0
    base_invariant: InvariantFamily | None = None
    object_value: Callable[[FiniteProbability], float] | None = None
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("shannon-difference", "pc-extensive", "log-euler", "custom-invariant"):
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if not math.isfinite(self.scale):
            raise ValueError("scale must be finite")
        if self.kind == "custom-invariant" and self.object_value is None:
            raise ValueError("custom-invariant needs an object_value")
        if self.kind == "pc-extensive" and self.base_invariant is None:
            raise ValueError("pc-extensive needs a base invariant")

    def value(self, obj) -> float:
        if self.kind == "shannon-difference":
            return self.scale * shannon(obj)
        if self.kind == "custom-invariant":
            return self.scale * self.object_value(obj)
        if self.kind == "pc-extensive":
            return extensive_value(obj, self.base_invariant, self.scale)
        return self.scale * log_euler(obj)

    def __call__(self, morphism) -> float:
        if self.kind == "log-euler":
            src, tgt = morphism
            return self.value(tgt) - self.value(src)
        return self.value(morphism.target) - self.value(morphism.source)


def shannon_difference(scale: float = 1.0) -> LossFunctional:
    return LossFunctional("shannon-difference", scale, name="shannon-difference")


def entropy_squared_difference() -> LossFunctional:
    """A functional that is additive on composites but not extensive."""
    return LossFunctional("custom-invariant", 1.0, object_value=lambda p: shannon(p) ** 2,
                          name="entropy-squared-difference")


# building blocks for the axioms

def weighted_disjoint_union(p: FiniteProbability, p2: FiniteProbability, lam: Fraction) -> FiniteProbability:
    """lam p on one copy of X next to (1-lam) p2 on a copy of X'.  Not the coproduct."""
    labels = tuple(f"0:{l}" for l in p.labels) + tuple(f"1:{l}" for l in p2.labels)
    probs = tuple(lam * x for x in p.probs) + tuple((1 - lam) * x for x in p2.probs)
    return FiniteProbability(labels, probs)


def convex_sum(s: StochasticMorphism, s2: StochasticMorphism, lam: Fraction) -> StochasticMorphism:
    """The morphism [S | S'] out of the weighted disjoint union into the shared target."""
    if s.target != s2.target:
        raise ValueError("convex sum needs a shared target")
    src = weighted_disjoint_union(s.source, s2.source, lam)
    matrix = [list(r1) + list(r2) for r1, r2 in zip(s.matrix, s2.matrix)]
    return validate(matrix, src, s.target)


def mixture(lam: Fraction, s: StochasticMorphism, s2: StochasticMorphism) -> StochasticMorphism:
    """A morphism from lam P + (1-lam) P' to lam Q + (1-lam) Q' on the same sets.

    Column x is the average of the columns of S and S' weighted by the
    mass each source assigns to x, so the measures are transported
    exactly.  When the sources coincide this is the plain matrix mixture.
    """
    n, m = len(s.source), len(s.target)
    if len(s2.source) != n or len(s2.target) != m:
        raise ValueError("mixture needs morphisms between the same sets")
    src = FiniteProbability(s.source.labels, tuple(lam * a + (1 - lam) * b
                                                   for a, b in zip(s.source.probs, s2.source.probs)))
    tgt = FiniteProbability(s.target.labels, tuple(lam * a + (1 - lam) * b
                                                   for a, b in zip(s.target.probs, s2.target.probs)))
    cols = []
    for x in range(n):
        wa, wb = lam * s.source.probs[x], (1 - lam) * s2.source.probs[x]
        if wa + wb:
            cols.append([(wa * s.matrix[y][x] + wb * s2.matrix[y][x]) / (wa + wb) for y in range(m)])
        else:
            cols.append([lam * s.matrix[y][x] + (1 - lam) * s2.matrix[y][x] for y in range(m)])
    return validate([[cols[x][y] for x in range(n)] for y in range(m)], src, tgt)


def _split_support(rng: random.Random, n: int) -> list[list[int]]:
    idx = list(range(n))
    rng.shuffle(idx)
    cut = rng.randint(1, n - 1)
    return [sorted(idx[:cut]), sorted(idx[cut:])]


def _supported(rng: random.Random, n: int, support: Sequence[int], prefix: str) -> FiniteProbability:
    d = random_distribution(rng, len(support))
    probs = [Fraction(0)] * n
    for i, v in zip(support, d):
        probs[i] = v
    return FiniteProbability(tuple(f"{prefix}{i}" for i in range(n)), tuple(probs))


@dataclass
class AxiomReport:
    axiom: str
    max_residual: float
    instances: int
    passed: bool

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "max_residual": self.max_residual,
                "instances": self.instances, "pass": self.passed}


AXIOMS = ("isomorphism", "compose", "combine", "coproduct",
          "mixed-source-weights", "mixed-target-weights", "mixed-both")


def _axiom_residuals(loss: LossFunctional, rng: random.Random) -> dict[str, float]:
    """One random instance of every axiom; returns the absolute residuals."""
    from .finprob import coproduct_morphisms, from_point

    r = {}
    n = rng.randint(1, 4)
    p = random_probability(rng, n, zero_prob=0.2, prefix="x")
    perm = list(range(n))
    rng.shuffle(perm)
    q_perm = FiniteProbability(tuple(f"x{i}" for i in range(n)),
                               tuple(p.probs[perm.index(i)] for i in range(n)))
    iso = validate(permutation_matrix(perm), p, q_perm)
    r["isomorphism"] = abs(loss(iso))

    s1 = random_morphism_from(rng, p, rng.randint(1, 4), prefix="y")
    s2 = random_morphism_from(rng, s1.target, rng.randint(1, 4), prefix="z")
    r["compose"] = abs(loss(compose(s2, s1)) - loss(s1) - loss(s2))

    lam = random_rational(rng)
    q = random_probability(rng, rng.randint(1, 4), zero_prob=0.2, prefix="y")
    pa = random_probability(rng, rng.randint(1, 4), zero_prob=0.2, prefix="a")
    pb = random_probability(rng, rng.randint(1, 4), zero_prob=0.2, prefix="b")
    sa, sb = random_morphism_between(rng, pa, q), random_morphism_between(rng, pb, q)
    split = to_point(FiniteProbability(("0", "1"), (lam, 1 - lam)))
    r["combine"] = abs(loss(convex_sum(sa, sb, lam)) - float(lam) * loss(sa)
                       - float(1 - lam) * loss(sb) - loss(split))

    cp = coproduct_morphisms(sa, sb)
    r["coproduct"] = abs(loss(cp.copair) - loss(sa) - loss(sb) + loss(from_point(q)))

    # mixtures on common sets need disjoint supports for the identities to hold
    lam = random_rational(rng, lo=Fraction(0), hi=Fraction(1))
    nx, ny = rng.randint(2, 4), rng.randint(2, 4)
    xs, ys = _split_support(rng, nx), _split_support(rng, ny)
    p1, p2 = _supported(rng, nx, xs[0], "x"), _supported(rng, nx, xs[1], "x")
    qq = random_probability(rng, ny, prefix="y")
    t1, t2 = random_morphism_between(rng, p1, qq), random_morphism_between(rng, p2, qq)
    split = to_point(FiniteProbability(("0", "1"), (lam, 1 - lam)))
    r["mixed-source-weights"] = abs(loss(mixture(lam, t1, t2)) - float(lam) * loss(t1)
                                    - float(1 - lam) * loss(t2) - loss(split))

    q1, q2 = _supported(rng, ny, ys[0], "y"), _supported(rng, ny, ys[1], "y")
    u1, u2 = random_morphism_between(rng, p1, q1), random_morphism_between(rng, p1, q2)
    r["mixed-target-weights"] = abs(loss(mixture(lam, u1, u2)) - float(lam) * loss(u1)
                                    - float(1 - lam) * loss(u2) + loss(split))

    v1, v2 = random_morphism_between(rng, p1, q1), random_morphism_between(rng, p2, q2)
    r["mixed-both"] = abs(loss(mixture(lam, v1, v2)) - float(lam) * loss(v1) - float(1 - lam) * loss(v2))
    return r


def axiom_suite(loss: LossFunctional, instances: int = 500, seed: int = 0,
                tol: float = 1e-12) -> list[AxiomReport]:
    """Run every axiom on ``instances`` seeded random instances.

    Each report carries the worst absolute residual; an axiom passes when
    that residual is below ``tol``.
    """
    if loss.kind not in ("shannon-difference", "custom-invariant"):
        raise ValueError("the axiom suite runs on functionals of finite probabilities")
    rng = random.Random(seed)
    worst = {a: 0.0 for a in AXIOMS}
    for _ in range(instances):
        for a, v in _axiom_residuals(loss, rng).items():
            worst[a] = max(worst[a], v)
    return [AxiomReport(a, worst[a], instances, worst[a] < tol) for a in AXIOMS]
