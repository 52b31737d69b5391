"""Cubical nerves of finite categories.

A level-n cell is a functor from the n-cube poset to the category.  Such a
functor is stored as (objects at the 2^n vertices, morphisms on the
n 2^(n-1) edges), edges ordered by direction and then by the bitmask of
their lower vertex.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..errors import ExplosionGuard, InvalidCategory
from .cset import TruncatedCubicalSet, from_cells

DEFAULT_BOUND = 10 ** 6


@dataclass(frozen=True)
class FiniteCategorySpec:
    objects: tuple[str, ...]
    morphisms: tuple[str, ...]
    source: Mapping[str, str]
    target: Mapping[str, str]
    identity: Mapping[str, str]
    compose: Mapping[tuple[str, str], str]  # (g, f) -> g o f
    basepoint: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(self.morphisms))
        object.__setattr__(self, "_hom", self._build_hom())

    def _build_hom(self):
        hom: dict[tuple[str, str], list[str]] = {(a, b): [] for a in self.objects for b in self.objects}
        for f in self.morphisms:
            hom[(self.source[f], self.target[f])].append(f)
        return {k: tuple(v) for k, v in hom.items()}

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom[(a, b)]

    @property
    def base_object(self) -> str:
        return self.basepoint if self.basepoint is not None else self.objects[0]

    def validate(self) -> "FiniteCategorySpec":
        objs, mors = set(self.objects), set(self.morphisms)
        if len(objs) != len(self.objects) or len(mors) != len(self.morphisms):
            raise InvalidCategory("duplicate identifiers")
        if self.basepoint is not None and self.basepoint not in objs:
            raise InvalidCategory("basepoint is not an object")
        for f in self.morphisms:
            if self.source.get(f) not in objs or self.target.get(f) not in objs:
                raise InvalidCategory(f"morphism {f} has unknown endpoints", morphism=f)
        for a in self.objects:
            e = self.identity.get(a)
            if e not in mors or self.source[e] != a or self.target[e] != a:
                raise InvalidCategory(f"bad identity for {a}", object=a)
        for f in self.morphisms:
            for g in (m for m in self.morphisms if self.source[m] == self.target[f]):
                h = self.compose.get((g, f))
                if h not in mors or self.source[h] != self.source[f] or self.target[h] != self.target[g]:
                    raise InvalidCategory(f"composite {g} o {f} missing or ill-typed", pair=[g, f])
            if self.compose[(f, self.identity[self.source[f]])] != f or \
                    self.compose[(self.identity[self.target[f]], f)] != f:
                raise InvalidCategory(f"identity law fails at {f}", morphism=f)
        for f in self.morphisms:
            for g in (m for m in self.morphisms if self.source[m] == self.target[f]):
                for h in (m for m in self.morphisms if self.source[m] == self.target[g]):
                    if self.compose[(h, self.compose[(g, f)])] != self.compose[(self.compose[(h, g)], f)]:
                        raise InvalidCategory("composition is not associative", triple=[h, g, f])
        return self


def one_object_group(order: int) -> FiniteCategorySpec:
    """The cyclic group of the given order as a one-object category."""
    mors = tuple("e" if k == 0 else f"g{k}" for k in range(order))
    comp = {(mors[a], mors[b]): mors[(a + b) % order] for a in range(order) for b in range(order)}
    return FiniteCategorySpec(("*",), mors, {m: "*" for m in mors}, {m: "*" for m in mors},
                              {"*": "e"}, comp)


def discrete_category(n: int) -> FiniteCategorySpec:
    objs = tuple(f"x{k}" for k in range(n))
    mors = tuple(f"id_{o}" for o in objs)
    return FiniteCategorySpec(objs, mors, dict(zip(mors, objs)), dict(zip(mors, objs)),
                              dict(zip(objs, mors)), {(m, m): m for m in mors})


def trivial_category() -> FiniteCategorySpec:
    return FiniteCategorySpec(("0",), ("id",), {"id": "0"}, {"id": "0"}, {"0": "id"}, {("id", "id"): "id"})


def edges(n: int) -> list[tuple[int, int]]:
    """Edges (lower vertex, direction) of I^n in canonical order."""
    return [(v, d) for d in range(1, n + 1) for v in range(1 << n) if not v >> (d - 1) & 1]


@dataclass(frozen=True, order=True)
class CubeFunctor:
    objs: tuple[str, ...]
    mors: tuple[str, ...]


def _restrict(cat: FiniteCategorySpec, cell: CubeFunctor, n: int, g: Sequence[int], m: int) -> CubeFunctor:
    """Precompose a level-n cell with the monotone vertex map g: I^m -> I^n."""
    eidx = {e: k for k, e in enumerate(edges(n))}
    objs = tuple(cell.objs[g[w]] for w in range(1 << m))
    mors = []
    for w, d in edges(m):
        lo, hi = g[w], g[w | (1 << (d - 1))]
        v, f = lo, cat.identity[cell.objs[lo]]
        for bit in range(n):
            if (hi >> bit) & 1 and not (v >> bit) & 1:
                f = cat.compose[(cell.mors[eidx[(v, bit + 1)]], f)]
                v |= 1 << bit
        mors.append(f)
    return CubeFunctor(objs, tuple(mors))


def _extend(cat: FiniteCategorySpec, bottom: CubeFunctor, top: CubeFunctor, n: int):
    """All level-n cells with the given faces at x_n = 0 and x_n = 1."""
    k = n - 1
    low_edges = edges(k)
    eidx = {e: i for i, e in enumerate(low_edges)}
    verts = range(1 << k)
    choice: list[str] = []

    def rec(u: int):
        if u == len(verts):
            yield tuple(choice)
            return
        for h in cat.hom(bottom.objs[u], top.objs[u]):
            ok = True
            for d in range(1, k + 1):
                if (u >> (d - 1)) & 1:
                    w = u ^ (1 << (d - 1))
                    e = eidx[(w, d)]
                    if cat.compose[(h, bottom.mors[e])] != cat.compose[(top.mors[e], choice[w])]:
                        ok = False
                        break
            if ok:
                choice.append(h)
                yield from rec(u + 1)
                choice.pop()

    for vertical in rec(0):
        objs = bottom.objs + top.objs
        mors = []
        for v, d in edges(n):
            if d == n:
                mors.append(vertical[v])
            elif v >> k & 1:
                mors.append(top.mors[eidx[(v ^ (1 << k), d)]])
            else:
                mors.append(bottom.mors[eidx[(v, d)]])
        yield CubeFunctor(objs, tuple(mors))


def nerve_levels(cat: FiniteCategorySpec, n_max: int, bound: int = DEFAULT_BOUND) -> list[list[CubeFunctor]]:
    levels = [[CubeFunctor((o,), ()) for o in cat.objects]]
    if n_max >= 1:
        levels.append(sorted(CubeFunctor((cat.source[f], cat.target[f]), (f,)) for f in cat.morphisms))
    for n in range(2, n_max + 1):
        prev = levels[-1]
        projected = len(prev) ** 2 * len(cat.morphisms) ** (1 << (n - 1))
        if projected > bound:
            raise ExplosionGuard(f"level {n} would examine {projected} candidates (bound {bound})",
                                 level=n, projected=projected, bound=bound)
        cells = []
        for b, t in itertools.product(prev, repeat=2):
            cells.extend(_extend(cat, b, t, n))
        levels.append(sorted(cells))
    return levels


def _base_cell(cat: FiniteCategorySpec, n: int) -> CubeFunctor:
    o = cat.base_object
    return CubeFunctor((o,) * (1 << n), (cat.identity[o],) * (n << (n - 1) if n else 0))


def cubical_nerve(cat: FiniteCategorySpec, n_max: int, bound: int = DEFAULT_BOUND) -> TruncatedCubicalSet:
    levels = nerve_levels(cat, n_max, bound)
    base = [_base_cell(cat, n) for n in range(n_max + 1)]
    return from_cells(levels, lambda c, n, g, m: _restrict(cat, c, n, g, m), base,
                      label=lambda c: "|".join(c.mors) if c.mors else c.objs[0])


def brute_force_level_size(cat: FiniteCategorySpec, n: int) -> int:
    """Count functors I^n -> C by trying every assignment of morphisms to edges."""
    if n == 0:
        return len(cat.objects)
    es = edges(n)
    count = 0
    for assign in itertools.product(cat.morphisms, repeat=len(es)):
        objs: dict[int, str] = {}
        ok = True
        for (v, d), f in zip(es, assign):
            hi = v | (1 << (d - 1))
            for vert, o in ((v, cat.source[f]), (hi, cat.target[f])):
                if objs.setdefault(vert, o) != o:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        emap = dict(zip(es, assign))
        for v, d in es:
            for d2 in range(d + 1, n + 1):
                if (v >> (d2 - 1)) & 1:
                    continue
                v1, v2 = v | (1 << (d - 1)), v | (1 << (d2 - 1))
                a = cat.compose[(emap[(v1, d2)], emap[(v, d)])]
                b = cat.compose[(emap[(v2, d)], emap[(v, d2)])]
                if a != b:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


@dataclass(frozen=True)
class FunctorSpec:
    source: FiniteCategorySpec
    target: FiniteCategorySpec
    on_objects: Mapping[str, str]
    on_morphisms: Mapping[str, str]


def nerve_map(fun: FunctorSpec, n_max: int, bound: int = DEFAULT_BOUND):
    """Level tables of the induced map between nerves, with the two nerves."""
    src_levels = nerve_levels(fun.source, n_max, bound)
    tgt_levels = nerve_levels(fun.target, n_max, bound)
    tables = []
    for n in range(n_max + 1):
        idx = {c: i for i, c in enumerate(tgt_levels[n])}
        tables.append(tuple(idx[CubeFunctor(tuple(fun.on_objects[o] for o in c.objs),
                                            tuple(fun.on_morphisms[f] for f in c.mors))]
                            for c in src_levels[n]))
    return tables, cubical_nerve(fun.source, n_max, bound), cubical_nerve(fun.target, n_max, bound)


def commutes_with_structure(tables, k: TruncatedCubicalSet, k2: TruncatedCubicalSet) -> bool:
    for (n, i, a), t in k.face.items():
        if any(tables[n - 1][t[x]] != k2.face[(n, i, a)][tables[n][x]] for x in range(k.sizes[n])):
            return False
    for store, store2 in ((k.degen, k2.degen), (k.conn, k2.conn)):
        for (n, i), t in store.items():
            if any(tables[n][t[x]] != store2[(n, i)][tables[n - 1][x]] for x in range(k.sizes[n - 1])):
                return False
    return True
