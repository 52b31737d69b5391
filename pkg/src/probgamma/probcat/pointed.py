"""Finite pointed sets and pointed maps.

A pointed set is determined up to isomorphism by its size and the index
of its basepoint.  Wedges and smashes use a fixed layout: the basepoint
comes first, then the non-base points of the left factor, then those of
the right factor (row-major pairs for smashes).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class PointedSet:
    size: int
    basepoint: int = 0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a pointed set has at least its basepoint")
        if not 0 <= self.basepoint < self.size:
            raise ValueError(f"basepoint {self.basepoint} out of range for size {self.size}")

    @property
    def reduced_size(self) -> int:
        return self.size - 1

    def nonbase(self) -> list[int]:
        return [i for i in range(self.size) if i != self.basepoint]


POINT = PointedSet(1, 0)


@dataclass(frozen=True, order=True)
class PointedMap:
    source: PointedSet
    target: PointedSet
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(t) for t in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.source.size:
            raise ValueError("table length must equal the source size")
        if any(not 0 <= t < self.target.size for t in table):
            raise ValueError("table entry out of range")
        if table[self.source.basepoint] != self.target.basepoint:
            raise ValueError("pointed maps send basepoint to basepoint")

    def __call__(self, x: int) -> int:
        return self.table[x]

    @property
    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.table)) == self.source.size


def identity_map(x: PointedSet) -> PointedMap:
    return PointedMap(x, x, tuple(range(x.size)))


def constant_map(x: PointedSet, y: PointedSet) -> PointedMap:
    """The zero morphism: everything to the basepoint."""
    return PointedMap(x, y, (y.basepoint,) * x.size)


def compose_maps(g: PointedMap, f: PointedMap) -> PointedMap:
    if f.target != g.source:
        raise ValueError("maps are not composable")
    return PointedMap(f.source, g.target, tuple(g.table[i] for i in f.table))


def _wedge_index(x: PointedSet, y: PointedSet):
    """Positions of x's and y's points inside the wedge layout."""
    ix, k = {x.basepoint: 0}, 1
    for i in x.nonbase():
        ix[i] = k
        k += 1
    iy = {y.basepoint: 0}
    for j in y.nonbase():
        iy[j] = k
        k += 1
    return ix, iy


def wedge(x: PointedSet, y: PointedSet) -> PointedSet:
    return PointedSet(x.size + y.size - 1, 0)


def wedge_inclusions(x: PointedSet, y: PointedSet) -> tuple[PointedMap, PointedMap]:
    w = wedge(x, y)
    ix, iy = _wedge_index(x, y)
    return (PointedMap(x, w, tuple(ix[i] for i in range(x.size))),
            PointedMap(y, w, tuple(iy[j] for j in range(y.size))))


def wedge_copair(f: PointedMap, g: PointedMap) -> PointedMap:
    """f v g on the wedge of the sources."""
    if f.target != g.target:
        raise ValueError("copair needs a common target")
    x, y = f.source, g.source
    ix, iy = _wedge_index(x, y)
    table = [f.target.basepoint] * wedge(x, y).size
    for i in range(x.size):
        table[ix[i]] = f.table[i]
    for j in range(y.size):
        table[iy[j]] = g.table[j]
    return PointedMap(wedge(x, y), f.target, tuple(table))


def wedge_maps(f: PointedMap, g: PointedMap) -> PointedMap:
    """f v g from wedge(sources) to wedge(targets)."""
    i1, i2 = wedge_inclusions(f.target, g.target)
    return wedge_copair(compose_maps(i1, f), compose_maps(i2, g))


def smash(x: PointedSet, y: PointedSet) -> PointedSet:
    return PointedSet(x.reduced_size * y.reduced_size + 1, 0)


def _smash_index(x: PointedSet, y: PointedSet):
    idx = {}
    k = 1
    for i in x.nonbase():
        for j in y.nonbase():
            idx[(i, j)] = k
            k += 1
    return idx


def smash_point(x: PointedSet, y: PointedSet, i: int, j: int) -> int:
    if i == x.basepoint or j == y.basepoint:
        return 0
    return _smash_index(x, y)[(i, j)]


def smash_maps(f: PointedMap, g: PointedMap) -> PointedMap:
    src = smash(f.source, g.source)
    tgt = smash(f.target, g.target)
    table = [0] * src.size
    sidx = _smash_index(f.source, g.source)
    for (i, j), k in sidx.items():
        table[k] = smash_point(f.target, g.target, f.table[i], g.table[j])
    return PointedMap(src, tgt, tuple(table))


def all_pointed_maps(x: PointedSet, y: PointedSet):
    """Every pointed map x -> y, in lexicographic table order."""
    free = x.nonbase()
    for choice in itertools.product(range(y.size), repeat=len(free)):
        table = [y.basepoint] * x.size
        for i, c in zip(free, choice):
            table[i] = c
        yield PointedMap(x, y, tuple(table))
