"""Truncated pointed cubical sets with connections, stored as index tables.

Structure maps act contravariantly.  For a cell x at level n:

    face[(n, i, a)]  : level n   -> level n-1   (1 <= i <= n)
    degen[(n, i)]    : level n-1 -> level n     (1 <= i <= n)
    conn[(n, i)]     : level n-1 -> level n     (1 <= i <= n-1)

so ``face[(n,i,a)]`` is K applied to the geometric face I^(n-1) -> I^n.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from ..errors import NotSubset, RelationViolated
from .cube import RelationInstance, relation_instances, vertex_map


class TruncationWarning(UserWarning):
    """Euler characteristic computed below a dimension where cells may still appear."""


Table = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class TruncatedCubicalSet:
    top_dim: int
    sizes: tuple[int, ...]
    base: tuple[int, ...]
    face: Mapping[tuple[int, int, int], Table]
    degen: Mapping[tuple[int, int], Table]
    conn: Mapping[tuple[int, int], Table]
    dim_bound: int | None = None
    labels: tuple[tuple[str, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.top_dim
        if len(self.sizes) != n + 1 or len(self.base) != n + 1:
            raise ValueError("sizes and base need one entry per level 0..top_dim")
        for lvl, (s, b) in enumerate(zip(self.sizes, self.base)):
            if not 0 <= b < s:
                raise ValueError(f"basepoint out of range at level {lvl}")
        for k in range(1, n + 1):
            for i in range(1, k + 1):
                for a in (0, 1):
                    self._check(self.face, (k, i, a), self.sizes[k], self.sizes[k - 1])
                self._check(self.degen, (k, i), self.sizes[k - 1], self.sizes[k])
            for i in range(1, k):
                self._check(self.conn, (k, i), self.sizes[k - 1], self.sizes[k])

    @staticmethod
    def _check(tables, key, length, bound):
        t = tables.get(key)
        if t is None:
            raise ValueError(f"missing structure map {key}")
        if len(t) != length or any(not 0 <= v < bound for v in t):
            raise ValueError(f"structure map {key} has the wrong shape or range")

    @property
    def complete(self) -> bool:
        """True when every cell above top_dim is known to be degenerate."""
        return self.dim_bound is not None and self.dim_bound <= self.top_dim

    def __eq__(self, other):
        if not isinstance(other, TruncatedCubicalSet):
            return NotImplemented
        return (self.top_dim == other.top_dim and self.sizes == other.sizes and self.base == other.base
                and dict(self.face) == dict(other.face) and dict(self.degen) == dict(other.degen)
                and dict(self.conn) == dict(other.conn))

    def __hash__(self):
        return hash((self.top_dim, self.sizes, self.base))

    def gen_table(self, gen, dom: int) -> np.ndarray:
        """K applied to a generating map with geometric domain I^dom."""
        kind, i = gen[0], gen[1]
        if kind == "d":
            return np.asarray(self.face[(dom + 1, i, gen[2])], dtype=np.int64)
        if kind == "s":
            return np.asarray(self.degen[(dom, i)], dtype=np.int64)
        return np.asarray(self.conn[(dom, i)], dtype=np.int64)

    def word_table(self, word, dom: int, cod: int) -> np.ndarray:
        """K of the composite word: cells at level cod -> cells at level dom."""
        from .cube import codomain

        dims = [dom]
        for gen in reversed(word):
            dims.append(codomain(gen, dims[-1]))
        arr = np.arange(self.sizes[cod], dtype=np.int64)
        # apply K(f1) first, K(fk) last
        for gen, gdom in zip(word, reversed(dims[:-1])):
            arr = self.gen_table(gen, gdom)[arr]
        return arr


def _relation_cache():
    cache: dict[int, list[RelationInstance]] = {}

    def get(n: int) -> list[RelationInstance]:
        if n not in cache:
            cache[n] = relation_instances(n)
        return cache[n]

    return get


_relations = _relation_cache()


def validate_cubical(k: TruncatedCubicalSet) -> TruncatedCubicalSet:
    """Check every relation instance and the basepoint chain; return k unchanged."""
    for n in range(1, k.top_dim + 1):
        for key, t in k.face.items():
            if key[0] == n and t[k.base[n]] != k.base[n - 1]:
                raise RelationViolated("face does not fix the basepoint", relation="basepoint",
                                       level=n, indices=list(key))
        for tables in (k.degen, k.conn):
            for key, t in tables.items():
                if key[0] == n and t[k.base[n - 1]] != k.base[n]:
                    raise RelationViolated("degeneracy does not fix the basepoint",
                                           relation="basepoint", level=n, indices=list(key))
    for rel in _relations(k.top_dim):
        lhs = k.word_table(rel.lhs, rel.dom, rel.cod)
        rhs = k.word_table(rel.rhs, rel.dom, rel.cod)
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            raise RelationViolated(
                f"relation {rel.name} fails on cell {int(bad[0])} of level {rel.cod}",
                relation=rel.name, cell=int(bad[0]), level=rel.cod,
                indices=dict(zip("ijab", rel.params)))
    return k


def degenerate_mask(k: TruncatedCubicalSet, n: int) -> np.ndarray:
    mask = np.zeros(k.sizes[n], dtype=bool)
    if n == 0:
        return mask
    for i in range(1, n + 1):
        mask[np.asarray(k.degen[(n, i)], dtype=np.int64)] = True
    for i in range(1, n):
        mask[np.asarray(k.conn[(n, i)], dtype=np.int64)] = True
    return mask


def nondegenerate_count(k: TruncatedCubicalSet) -> list[int]:
    return [int((~degenerate_mask(k, n)).sum()) for n in range(k.top_dim + 1)]


@dataclass(frozen=True)
class EulerReport:
    chi: int
    reduced: int
    truncated: bool
    counts: tuple[int, ...]


def euler_report(k: TruncatedCubicalSet) -> EulerReport:
    counts = nondegenerate_count(k)
    chi = sum((-1) ** n * c for n, c in enumerate(counts))
    return EulerReport(chi, chi - 1, not k.complete, tuple(counts))


def reduced_euler(k: TruncatedCubicalSet) -> int:
    rep = euler_report(k)
    if rep.truncated:
        warnings.warn(f"reduced Euler characteristic truncated at dimension {k.top_dim}",
                      TruncationWarning, stacklevel=2)
    return rep.reduced


# builders

def from_cells(levels: Sequence[Sequence[Hashable]],
               precompose: Callable[[Hashable, int, tuple[int, ...], int], Hashable],
               base: Sequence[Hashable], dim_bound: int | None = None,
               label: Callable[[Hashable], str] | None = None) -> TruncatedCubicalSet:
    """Tables for a presheaf given by explicit cells.

    ``precompose(cell, n, g, m)`` returns the level-m cell obtained by
    restricting a level-n cell along the vertex map g: I^m -> I^n.
    """
    top = len(levels) - 1
    index = [{c: idx for idx, c in enumerate(lvl)} for lvl in levels]
    face, degen, conn = {}, {}, {}
    for n in range(1, top + 1):
        for i in range(1, n + 1):
            for a in (0, 1):
                g = vertex_map(("d", i, a), n - 1)
                face[(n, i, a)] = tuple(index[n - 1][precompose(c, n, g, n - 1)] for c in levels[n])
            g = vertex_map(("s", i), n)
            degen[(n, i)] = tuple(index[n][precompose(c, n - 1, g, n)] for c in levels[n - 1])
        for i in range(1, n):
            g = vertex_map(("g", i), n)
            conn[(n, i)] = tuple(index[n][precompose(c, n - 1, g, n)] for c in levels[n - 1])
    labels = tuple(tuple(label(c) for c in lvl) for lvl in levels) if label else None
    return TruncatedCubicalSet(top, tuple(len(l) for l in levels), tuple(index[n][b] for n, b in enumerate(base)),
                               face, degen, conn, dim_bound, labels)


def discrete(size: int, base: int = 0, top_dim: int = 2) -> TruncatedCubicalSet:
    """A pointed set viewed as a cubical set with only degenerate higher cells."""
    ident = tuple(range(size))
    face = {(n, i, a): ident for n in range(1, top_dim + 1) for i in range(1, n + 1) for a in (0, 1)}
    degen = {(n, i): ident for n in range(1, top_dim + 1) for i in range(1, n + 1)}
    conn = {(n, i): ident for n in range(2, top_dim + 1) for i in range(1, n)}
    return TruncatedCubicalSet(top_dim, (size,) * (top_dim + 1), (base,) * (top_dim + 1),
                               face, degen, conn, dim_bound=0)


def _closure(seeds: dict[int, set], step: Callable[[Hashable, int], list[tuple[Hashable, int]]],
             top: int) -> dict[int, set]:
    cells = {n: set(seeds.get(n, ())) for n in range(top + 1)}
    frontier = [(c, n) for n, cs in cells.items() for c in cs]
    while frontier:
        c, n = frontier.pop()
        for d, m in step(c, n):
            if m <= top and d not in cells[m]:
                cells[m].add(d)
                frontier.append((d, m))
    return cells


def _cube_step(c: tuple[int, ...], n: int):
    out = []
    for i in range(1, n + 1):
        for a in (0, 1):
            g = vertex_map(("d", i, a), n - 1)
            out.append((tuple(c[w] for w in g), n - 1))
    for i in range(1, n + 2):
        g = vertex_map(("s", i), n + 1)
        out.append((tuple(c[w] for w in g), n + 1))
    for i in range(1, n + 1):
        g = vertex_map(("g", i), n + 1)
        out.append((tuple(c[w] for w in g), n + 1))
    return out


def standard_cube(m: int, top_dim: int) -> TruncatedCubicalSet:
    """The representable cube: level-n cells are the maps I^n -> I^m, pointed at the origin."""
    top = max(m, top_dim)
    cells = _closure({m: {tuple(range(1 << m))}}, _cube_step, top)
    levels = [sorted(cells[n]) for n in range(top_dim + 1)]
    base = [(0,) * (1 << n) for n in range(top_dim + 1)]
    return from_cells(levels, lambda c, n, g, k: tuple(c[w] for w in g), base, dim_bound=m,
                      label=lambda c: ",".join(map(str, c)))


# subcomplexes, quotients, smash

Subcomplex = dict[int, frozenset]


def _step_tables(k: TruncatedCubicalSet):
    def step(x, n):
        out = []
        if n >= 1:
            for i in range(1, n + 1):
                for a in (0, 1):
                    out.append((k.face[(n, i, a)][x], n - 1))
        if n + 1 <= k.top_dim:
            for i in range(1, n + 2):
                out.append((k.degen[(n + 1, i)][x], n + 1))
            for i in range(1, n + 1):
                out.append((k.conn[(n + 1, i)][x], n + 1))
        return out

    return step


def generated_subcomplex(k: TruncatedCubicalSet, cells: Mapping[int, Sequence[int]],
                         with_base: bool = True) -> Subcomplex:
    """Smallest set of cells containing ``cells`` and closed under all structure maps."""
    seeds = {n: set(cs) for n, cs in cells.items()}
    if with_base:
        seeds.setdefault(0, set()).add(k.base[0])
    closed = _closure(seeds, _step_tables(k), k.top_dim)
    return {n: frozenset(v) for n, v in closed.items()}


def is_subcomplex(k: TruncatedCubicalSet, sub: Mapping[int, frozenset]) -> bool:
    step = _step_tables(k)
    return all(d in sub[m] for n, cs in sub.items() for c in cs for d, m in step(c, n))


def restrict(k: TruncatedCubicalSet, sub: Mapping[int, frozenset]) -> TruncatedCubicalSet:
    """The subcomplex as a cubical set in its own right (must contain the basepoints)."""
    if not is_subcomplex(k, sub) or any(k.base[n] not in sub[n] for n in range(k.top_dim + 1)):
        raise NotSubset("not a pointed subcomplex")
    order = [sorted(sub[n]) for n in range(k.top_dim + 1)]
    pos = [{c: i for i, c in enumerate(o)} for o in order]
    face = {key: tuple(pos[key[0] - 1][t[c]] for c in order[key[0]]) for key, t in k.face.items()}
    degen = {key: tuple(pos[key[0]][t[c]] for c in order[key[0] - 1]) for key, t in k.degen.items()}
    conn = {key: tuple(pos[key[0]][t[c]] for c in order[key[0] - 1]) for key, t in k.conn.items()}
    return TruncatedCubicalSet(k.top_dim, tuple(len(o) for o in order),
                               tuple(pos[n][k.base[n]] for n in range(k.top_dim + 1)),
                               face, degen, conn, k.dim_bound)


def quotient(k: TruncatedCubicalSet, sub: Mapping[int, frozenset]) -> TruncatedCubicalSet:
    """Collapse a subcomplex to a single basepoint chain (index 0 at each level)."""
    if not is_subcomplex(k, sub):
        raise NotSubset("cells do not form a subcomplex")
    if not sub.get(0):
        raise NotSubset("the collapsed subcomplex must contain a vertex")
    keep = [[c for c in range(k.sizes[n]) if c not in sub[n]] for n in range(k.top_dim + 1)]
    pos = [{c: i + 1 for i, c in enumerate(kp)} for kp in keep]

    def image(n, c):
        return pos[n].get(c, 0)

    face = {key: (0,) + tuple(image(key[0] - 1, t[c]) for c in keep[key[0]]) for key, t in k.face.items()}
    degen = {key: (0,) + tuple(image(key[0], t[c]) for c in keep[key[0] - 1]) for key, t in k.degen.items()}
    conn = {key: (0,) + tuple(image(key[0], t[c]) for c in keep[key[0] - 1]) for key, t in k.conn.items()}
    return TruncatedCubicalSet(k.top_dim, tuple(len(kp) + 1 for kp in keep), (0,) * (k.top_dim + 1),
                               face, degen, conn, k.dim_bound)


def boundary(k: TruncatedCubicalSet, n: int) -> Subcomplex:
    """Subcomplex generated by all faces of all level-n cells."""
    seeds = {n - 1: {k.face[(n, i, a)][c] for c in range(k.sizes[n]) for i in range(1, n + 1) for a in (0, 1)}}
    return generated_subcomplex(k, seeds, with_base=False)


def sphere(n: int, top_dim: int | None = None) -> TruncatedCubicalSet:
    """The n-cube with its boundary collapsed to the basepoint."""
    top = n if top_dim is None else top_dim
    cube = standard_cube(n, max(top, n))
    q = quotient(cube, boundary(cube, n))
    return truncate(q, top)


def circle(top_dim: int = 1) -> TruncatedCubicalSet:
    return sphere(1, top_dim)


def truncate(k: TruncatedCubicalSet, top: int) -> TruncatedCubicalSet:
    if top > k.top_dim:
        raise ValueError("cannot truncate above the current top dimension")
    face = {key: t for key, t in k.face.items() if key[0] <= top}
    degen = {key: t for key, t in k.degen.items() if key[0] <= top}
    conn = {key: t for key, t in k.conn.items() if key[0] <= top}
    labels = k.labels[: top + 1] if k.labels else None
    return TruncatedCubicalSet(top, k.sizes[: top + 1], k.base[: top + 1], face, degen, conn, k.dim_bound, labels)


def smash_cubical(k: TruncatedCubicalSet, k2: TruncatedCubicalSet) -> TruncatedCubicalSet:
    """Levelwise product with every cell that touches a basepoint collapsed.

    Layout per level: basepoint at 0, then pairs of non-base cells in
    row-major order.  Truncated at the smaller top dimension.
    """
    top = min(k.top_dim, k2.top_dim)
    nb1 = [[c for c in range(k.sizes[n]) if c != k.base[n]] for n in range(top + 1)]
    nb2 = [[c for c in range(k2.sizes[n]) if c != k2.base[n]] for n in range(top + 1)]
    pos = []
    for n in range(top + 1):
        pos.append({(x, y): idx + 1 for idx, (x, y) in enumerate(itertools.product(nb1[n], nb2[n]))})

    def table(t1, t2, src, dst):
        out = [0]
        for x, y in itertools.product(nb1[src], nb2[src]):
            out.append(pos[dst].get((t1[x], t2[y]), 0))
        return tuple(out)

    face = {(n, i, a): table(k.face[(n, i, a)], k2.face[(n, i, a)], n, n - 1)
            for n in range(1, top + 1) for i in range(1, n + 1) for a in (0, 1)}
    degen = {(n, i): table(k.degen[(n, i)], k2.degen[(n, i)], n - 1, n)
             for n in range(1, top + 1) for i in range(1, n + 1)}
    conn = {(n, i): table(k.conn[(n, i)], k2.conn[(n, i)], n - 1, n)
            for n in range(2, top + 1) for i in range(1, n)}
    bound = 0 if k.dim_bound == 0 and k2.dim_bound == 0 else None
    return TruncatedCubicalSet(top, tuple(len(p) + 1 for p in pos), (0,) * (top + 1), face, degen, conn, bound)
