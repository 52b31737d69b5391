"""Formal convex combinations over an arbitrary category.

``CategoryInterface`` is the minimal description of a category with a zero
object and binary sums.  ``WreathCategory`` builds from it the category
whose objects are finite convex combinations of objects and whose
morphisms are a stochastic matrix plus weighted families of morphisms,
using the same formulas as the concrete pointed-set version in
:mod:`probgamma.probcat.ps` but written only against the interface.
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping

from ..errors import EmptyFamily, InterfaceViolation, Mismatch, TargetMismatch
from ..finprob import FiniteProbability, StochasticMorphism, copair_matrix, injections, matmul, validate
from . import pointed as pt


class CategoryInterface(ABC):
    """A category with zero object and binary sums, described by its operations."""

    name = "category"

    @abstractmethod
    def source(self, f): ...

    @abstractmethod
    def target(self, f): ...

    @abstractmethod
    def compose(self, g, f):
        """g after f."""

    @abstractmethod
    def identity(self, a): ...

    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def sum(self, a, b): ...

    @abstractmethod
    def inj1(self, a, b): ...

    @abstractmethod
    def inj2(self, a, b): ...

    @abstractmethod
    def copair(self, f, g):
        """The map out of sum(source f, source g) restricting to f and g."""

    def objects(self) -> list:
        """A finite fragment of objects used for probes and enumeration."""
        raise NotImplementedError(f"{self.name} does not enumerate objects")

    def hom(self, a, b) -> list:
        raise NotImplementedError(f"{self.name} does not enumerate hom-sets")

    def to_zero(self, a):
        (f,) = self.hom(a, self.zero())
        return f

    def from_zero(self, a):
        (f,) = self.hom(self.zero(), a)
        return f

    def zero_map(self, a, b):
        return self.compose(self.from_zero(b), self.to_zero(a))

    def sum_maps(self, f, g):
        """f + g from sum(sources) to sum(targets)."""
        a, b = self.target(f), self.target(g)
        return self.copair(self.compose(self.inj1(a, b), f), self.compose(self.inj2(a, b), g))

    def isomorphisms(self, a, b) -> list:
        back = self.hom(b, a)
        out = []
        for f in self.hom(a, b):
            for g in back:
                if self.compose(g, f) == self.identity(a) and self.compose(f, g) == self.identity(b):
                    out.append(f)
                    break
        return out

    def sort_key(self, f) -> Any:
        return repr(f)


class PointedSetCategory(CategoryInterface):
    """Skeletal finite pointed sets (basepoint 0) up to ``max_size`` points."""

    name = "pointed-sets"

    def __init__(self, max_size: int = 3):
        self.max_size = max_size

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def compose(self, g, f):
        return pt.compose_maps(g, f)

    def identity(self, a):
        return pt.identity_map(a)

    def zero(self):
        return pt.POINT

    def sum(self, a, b):
        return pt.wedge(a, b)

    def inj1(self, a, b):
        return pt.wedge_inclusions(a, b)[0]

    def inj2(self, a, b):
        return pt.wedge_inclusions(a, b)[1]

    def copair(self, f, g):
        return pt.wedge_copair(f, g)

    def objects(self):
        return [pt.PointedSet(n, 0) for n in range(1, self.max_size + 1)]

    def hom(self, a, b):
        return list(pt.all_pointed_maps(a, b))

    def to_zero(self, a):
        return pt.constant_map(a, pt.POINT)

    def from_zero(self, a):
        return pt.constant_map(pt.POINT, a)

    def isomorphisms(self, a, b):
        if a.size != b.size:
            return []
        return [f for f in self.hom(a, b) if f.is_bijective]

    def sort_key(self, f):
        return f


class TrivialCategory(CategoryInterface):
    """One object "0" with only its identity "id"."""

    name = "trivial"

    def source(self, f):
        return "0"

    def target(self, f):
        return "0"

    def compose(self, g, f):
        return "id"

    def identity(self, a):
        return "id"

    def zero(self):
        return "0"

    def sum(self, a, b):
        return "0"

    def inj1(self, a, b):
        return "id"

    def inj2(self, a, b):
        return "id"

    def copair(self, f, g):
        return "id"

    def objects(self):
        return ["0"]

    def hom(self, a, b):
        return ["id"]


def check_interface(c: CategoryInterface, max_objects: int = 3, max_maps: int = 40) -> None:
    """Probe identity, associativity, zero-object and sum identities on a fragment.

    Raises InterfaceViolation naming the first failing probe.
    """
    objs = c.objects()[:max_objects]
    z = c.zero()
    for a in objs:
        if len(c.hom(a, z)) != 1 or len(c.hom(z, a)) != 1:
            raise InterfaceViolation("zero object is not initial and terminal", object=repr(a))
    for a, b in itertools.product(objs, repeat=2):
        for f in c.hom(a, b)[:max_maps]:
            if c.compose(f, c.identity(a)) != f or c.compose(c.identity(b), f) != f:
                raise InterfaceViolation("identity law fails", map=repr(f))
    for a, b, d, e in itertools.product(objs, repeat=4):
        for f in c.hom(a, b)[:6]:
            for g in c.hom(b, d)[:6]:
                for h in c.hom(d, e)[:6]:
                    if c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f):
                        raise InterfaceViolation("composition is not associative", maps=repr((f, g, h)))
    for a, b, d in itertools.product(objs, repeat=3):
        i1, i2 = c.inj1(a, b), c.inj2(a, b)
        for f in c.hom(a, d)[:8]:
            for g in c.hom(b, d)[:8]:
                u = c.copair(f, g)
                if c.compose(u, i1) != f or c.compose(u, i2) != g:
                    raise InterfaceViolation("copair does not restrict along the injections",
                                             maps=repr((f, g)))


@dataclass(frozen=True)
class PCObject:
    weights: tuple[Fraction, ...]
    objs: tuple[Hashable, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.objs):
            raise ValueError("weights and objects differ in length")
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")

    def __len__(self):
        return len(self.weights)

    def probability(self) -> FiniteProbability:
        return FiniteProbability.from_probs(self.weights)


@dataclass(frozen=True, eq=False)
class PCMorphism:
    source: PCObject
    target: PCObject
    matrix: tuple[tuple[Fraction, ...], ...]
    families: Mapping[tuple[int, int], tuple]

    def family(self, j, i):
        return self.families.get((j, i), ())

    def __eq__(self, other):
        return (isinstance(other, PCMorphism) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix
                and self.families == other.families)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix, tuple(self.families.items())))


class WreathCategory(CategoryInterface):
    """Convex combinations of objects of ``base``."""

    name = "wreath"

    def __init__(self, base: CategoryInterface):
        self.base = base

    def _canon(self, entries: Iterable) -> tuple:
        acc = defaultdict(Fraction)
        for f, w in entries:
            acc[f] += w
        return tuple(sorted(((f, w) for f, w in acc.items() if w), key=lambda e: self.base.sort_key(e[0])))

    def morphism(self, source: PCObject, target: PCObject, matrix, families) -> PCMorphism:
        fams = {}
        for key, entries in families.items():
            fam = self._canon(entries)
            if fam:
                fams[key] = fam
        matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
        return PCMorphism(source, target, matrix, dict(sorted(fams.items())))

    def check_morphism(self, phi: PCMorphism) -> PCMorphism:
        validate(phi.matrix, phi.source.probability(), phi.target.probability())
        b = self.base
        for j in range(len(phi.target)):
            for i in range(len(phi.source)):
                fam = phi.family(j, i)
                if sum((w for _, w in fam), Fraction(0)) != phi.matrix[j][i]:
                    raise Mismatch(f"family ({j},{i}) does not sum to the matrix entry")
                for f, _ in fam:
                    if b.source(f) != phi.source.objs[i] or b.target(f) != phi.target.objs[j]:
                        raise Mismatch(f"map in family ({j},{i}) has the wrong endpoints")
        return phi

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def identity(self, a: PCObject) -> PCMorphism:
        n = len(a)
        matrix = [[int(i == j) for i in range(n)] for j in range(n)]
        return self.morphism(a, a, matrix, {(i, i): [(self.base.identity(a.objs[i]), Fraction(1))]
                                            for i in range(n)})

    def compose(self, g: PCMorphism, f: PCMorphism) -> PCMorphism:
        if f.target != g.source:
            raise Mismatch("morphisms are not composable")
        fams = {}
        for k in range(len(g.target)):
            for i in range(len(f.source)):
                fams[(k, i)] = [(self.base.compose(h, e), w2 * w1)
                                for j in range(len(f.target))
                                for h, w2 in g.family(k, j)
                                for e, w1 in f.family(j, i)]
        return self.morphism(f.source, g.target, matmul(g.matrix, f.matrix), fams)

    def zero(self) -> PCObject:
        return PCObject((Fraction(1),), (self.base.zero(),))

    def sum(self, a: PCObject, b: PCObject) -> PCObject:
        pairs = list(itertools.product(range(len(a)), range(len(b))))
        return PCObject(tuple(a.weights[i] * b.weights[j] for i, j in pairs),
                        tuple(self.base.sum(a.objs[i], b.objs[j]) for i, j in pairs))

    def _inj(self, a: PCObject, b: PCObject, first: bool) -> PCMorphism:
        s1, s2 = injections(a.probability(), b.probability())
        m = len(b)
        fams = {}
        for i, j in itertools.product(range(len(a)), range(m)):
            if first:
                fams[(i * m + j, i)] = [(self.base.inj1(a.objs[i], b.objs[j]), b.weights[j])]
            else:
                fams[(i * m + j, j)] = [(self.base.inj2(a.objs[i], b.objs[j]), a.weights[i])]
        return self.morphism(a if first else b, self.sum(a, b), (s1 if first else s2).matrix, fams)

    def inj1(self, a, b):
        return self._inj(a, b, True)

    def inj2(self, a, b):
        return self._inj(a, b, False)

    def _padded(self, phi: PCMorphism, k: int, a: int):
        fam = phi.family(k, a)
        if fam:
            return fam
        if phi.matrix[k][a] > 0:
            raise EmptyFamily(f"family ({k},{a}) is empty but its matrix entry is positive")
        return ((self.base.zero_map(phi.source.objs[a], phi.target.objs[k]), Fraction(0)),)

    def copair(self, f: PCMorphism, g: PCMorphism) -> PCMorphism:
        if f.target != g.target:
            raise TargetMismatch("copair needs morphisms with the same target")
        tgt = f.target
        src = self.sum(f.source, g.source)
        m = len(g.source)
        fams = {}
        for k, sigma in enumerate(tgt.weights):
            for a, a2 in itertools.product(range(len(f.source)), range(m)):
                fam1, fam2 = self._padded(f, k, a), self._padded(g, k, a2)
                fams[(k, a * m + a2)] = [
                    (self.base.copair(x, y), mu * nu / sigma if sigma else mu / len(fam2) + nu / len(fam1))
                    for (x, mu), (y, nu) in itertools.product(fam1, fam2)
                ]
        sf = StochasticMorphism(f.source.probability(), tgt.probability(), f.matrix)
        sg = StochasticMorphism(g.source.probability(), tgt.probability(), g.matrix)
        return self.morphism(src, tgt, copair_matrix(sf, sg), fams)

    def to_zero(self, a: PCObject) -> PCMorphism:
        z = self.zero()
        return self.morphism(a, z, [[1] * len(a)],
                             {(0, i): [(self.base.to_zero(x), Fraction(1))] for i, x in enumerate(a.objs)})

    def from_zero(self, a: PCObject) -> PCMorphism:
        z = self.zero()
        return self.morphism(z, a, [[w] for w in a.weights],
                             {(j, 0): [(self.base.from_zero(x), w)] for j, (w, x) in enumerate(zip(a.weights, a.objs))})


def wreath_pc(base: CategoryInterface, probe: bool = True) -> WreathCategory:
    """Build the convex-combination category over ``base``.

    With ``probe`` the base interface is first checked on its enumerated
    fragment (when it has one).
    """
    if probe:
        try:
            base.objects()
        except NotImplementedError:
            pass
        else:
            check_interface(base)
    return WreathCategory(base)


# conversions used to compare with the concrete implementation

def pc_object_from_ps(obj) -> PCObject:
    return PCObject(tuple(obj.weights), tuple(obj.sets))


def pc_morphism_from_ps(phi) -> PCMorphism:
    return PCMorphism(pc_object_from_ps(phi.source), pc_object_from_ps(phi.target),
                      phi.stoch.matrix, dict(phi.families))


def pc_morphism_from_fp(s: StochasticMorphism) -> PCMorphism:
    """An FP morphism as a morphism of the wreath over the trivial category."""
    src = PCObject(s.source.probs, ("0",) * len(s.source))
    tgt = PCObject(s.target.probs, ("0",) * len(s.target))
    fams = {(j, i): (("id", e),) for j, row in enumerate(s.matrix) for i, e in enumerate(row) if e}
    return PCMorphism(src, tgt, s.matrix, fams)
