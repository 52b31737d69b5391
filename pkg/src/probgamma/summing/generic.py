"""Brute-force categories of summing functors over a finite category with sums.

A summing functor on X is fixed by its values on the two-point subsets
{*, a}; every other subset goes to the iterated sum of those values, taken
in increasing point order.  Morphisms are natural isomorphisms, which are
again fixed pointwise, so a morphism is a tuple of isomorphisms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..cubical import DEFAULT_BOUND, FiniteCategorySpec, FunctorSpec
from ..errors import ExplosionGuard, InvalidCategory
from ..finprob import as_fraction
from ..probcat import CategoryInterface, PCObject, PointedMap, PointedSet, PointedSetCategory, WreathCategory
from .classical import subsets


@dataclass
class SummingCategory:
    base: CategoryInterface
    x: PointedSet
    assignments: list[tuple]
    morphisms: dict[str, tuple[int, int, tuple]]
    spec: FiniteCategorySpec
    _lookup: dict = field(default_factory=dict, repr=False)

    @property
    def points(self) -> list[int]:
        return self.x.nonbase()

    def object_id(self, assignment: tuple) -> str:
        return self._lookup["obj"][assignment]

    def morphism_id(self, s: int, t: int, comps: tuple) -> str:
        return self._lookup["mor"][(s, t, comps)]

    def value(self, assignment: tuple, a) -> object:
        """The functor's value on a pointed subset."""
        index = dict(zip(self.points, assignment))
        out = None
        for p in sorted(set(a) - {self.x.basepoint}):
            out = index[p] if out is None else self.base.sum(out, index[p])
        return self.base.zero() if out is None else out

    def table(self, k: int) -> dict[frozenset[int], object]:
        return {a: self.value(self.assignments[k], a) for a in subsets(self.x)}


def generic_summing_enumerate(c: CategoryInterface, x: PointedSet, bound: int = DEFAULT_BOUND,
                              objects: Sequence | None = None) -> SummingCategory:
    objs = list(c.objects() if objects is None else objects)
    n = x.reduced_size
    if len(objs) ** n > bound:
        raise ExplosionGuard(f"{len(objs)}^{n} summing functors exceed the bound {bound}",
                             projected=len(objs) ** n, bound=bound)
    assignments = list(itertools.product(objs, repeat=n))
    obj_ids = {a: f"F{k}" for k, a in enumerate(assignments)}
    iso_cache: dict = {}

    def isos(a, b):
        if (a, b) not in iso_cache:
            iso_cache[(a, b)] = list(c.isomorphisms(a, b))
        return iso_cache[(a, b)]

    morphisms: dict[str, tuple[int, int, tuple]] = {}
    mor_ids: dict[tuple, str] = {}
    for s, src in enumerate(assignments):
        for t, tgt in enumerate(assignments):
            choices = [isos(p, q) for p, q in zip(src, tgt)]
            for k, comps in enumerate(itertools.product(*choices)):
                name = f"F{s}>F{t}#{k}"
                morphisms[name] = (s, t, comps)
                mor_ids[(s, t, comps)] = name
                if len(morphisms) > bound:
                    raise ExplosionGuard(f"more than {bound} natural isomorphisms", bound=bound)
    source = {m: f"F{s}" for m, (s, _, _) in morphisms.items()}
    target = {m: f"F{t}" for m, (_, t, _) in morphisms.items()}
    identity = {}
    for s, a in enumerate(assignments):
        key = (s, s, tuple(c.identity(o) for o in a))
        if key not in mor_ids:
            raise InvalidCategory("an identity is missing from the isomorphisms", object=f"F{s}")
        identity[f"F{s}"] = mor_ids[key]
    by_source: dict[int, list[str]] = {}
    for m, (s, _, _) in morphisms.items():
        by_source.setdefault(s, []).append(m)
    compose = {}
    for f, (s, t, fc) in morphisms.items():
        for g in by_source.get(t, []):
            _, u, gc = morphisms[g]
            key = (s, u, tuple(c.compose(gi, fi) for gi, fi in zip(gc, fc)))
            if key not in mor_ids:
                raise InvalidCategory("isomorphisms are not closed under composition", pair=[g, f])
            compose[(g, f)] = mor_ids[key]
    base_obj = obj_ids.get(tuple(c.zero() for _ in range(n)))
    spec = FiniteCategorySpec(tuple(obj_ids[a] for a in assignments), tuple(morphisms), source, target,
                              identity, compose, base_obj)
    return SummingCategory(c, x, assignments, morphisms, spec, {"obj": obj_ids, "mor": mor_ids})


class PSFragment(CategoryInterface):
    """Two-term probabilistic pointed sets lambda (2-point, base *) + (1-lambda) (2-point, base a).

    Objects come from a finite grid of lambda values; sums and the rest of
    the structure are those of the convex-combination category over pointed
    sets, so iterated sums leave the grid but stay computable.
    """

    name = "ps-fragment"

    def __init__(self, grid: Sequence):
        self.grid = tuple(as_fraction(v) for v in grid)
        self.wreath = WreathCategory(PointedSetCategory(max_size=1 << 8))

    @staticmethod
    def coin(lam) -> PCObject:
        lam = as_fraction(lam)
        return PCObject((lam, 1 - lam), (PointedSet(2, 0), PointedSet(2, 1)))

    def objects(self):
        return [self.coin(v) for v in self.grid]

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def compose(self, g, f):
        return self.wreath.compose(g, f)

    def identity(self, a):
        return self.wreath.identity(a)

    def zero(self):
        return self.wreath.zero()

    def sum(self, a, b):
        return self.wreath.sum(a, b)

    def inj1(self, a, b):
        return self.wreath.inj1(a, b)

    def inj2(self, a, b):
        return self.wreath.inj2(a, b)

    def copair(self, f, g):
        return self.wreath.copair(f, g)

    def isomorphisms(self, a: PCObject, b: PCObject):
        """Weight-preserving term permutations carrying each set bijectively."""
        if len(a) != len(b):
            return []
        out = []
        for perm in itertools.permutations(range(len(a))):
            if any(a.weights[i] != b.weights[perm[i]] or a.objs[i].size != b.objs[perm[i]].size
                   for i in range(len(a))):
                continue
            matrix = [[int(perm[i] == j) for i in range(len(a))] for j in range(len(b))]
            fams = {(perm[i], i): [(_rebase(a.objs[i], b.objs[perm[i]]), Fraction(1))]
                    for i in range(len(a))}
            out.append(self.wreath.morphism(a, b, matrix, fams))
        return out


def _rebase(x: PointedSet, y: PointedSet) -> PointedMap:
    """The bijection fixing the order of the non-base points."""
    table = [0] * x.size
    table[x.basepoint] = y.basepoint
    for p, q in zip(x.nonbase(), y.nonbase()):
        table[p] = q
    return PointedMap(x, y, tuple(table))


def pushforward(sx: SummingCategory, sy: SummingCategory, f: PointedMap) -> FunctorSpec:
    """The functor between summing categories induced by a pointed map X -> Y."""
    if sx.base is not sy.base:
        raise ValueError("both summing categories must be built over the same category")
    if f.source != sx.x or f.target != sy.x:
        raise ValueError("map endpoints do not match the summing categories")
    c = sx.base
    pre = {q: [p for p in sx.points if f(p) == q] for q in sy.points}
    pos = {p: k for k, p in enumerate(sx.points)}

    def push_obj(assign):
        return tuple(sx.value(assign, [sx.x.basepoint] + pre[q]) for q in sy.points)

    def push_mor(comps):
        out = []
        for q in sy.points:
            m = None
            for p in pre[q]:
                m = comps[pos[p]] if m is None else c.sum_maps(m, comps[pos[p]])
            out.append(c.identity(c.zero()) if m is None else m)
        return tuple(out)

    on_obj, images = {}, {}
    for k, a in enumerate(sx.assignments):
        img = push_obj(a)
        try:
            on_obj[f"F{k}"] = sy.object_id(img)
        except KeyError:
            raise ValueError("the pushed-forward functor leaves the enumerated fragment") from None
        images[k] = sy.assignments.index(img)
    on_mor = {}
    for name, (s, t, comps) in sx.morphisms.items():
        on_mor[name] = sy.morphism_id(images[s], images[t], push_mor(comps))
    return FunctorSpec(sx.spec, sy.spec, on_obj, on_mor)
