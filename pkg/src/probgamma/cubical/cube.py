"""The cube category with connections, acting on vertices.

A point of {0,1}^n is stored as a bitmask, coordinate i (1-based) being
bit i-1.  The generating maps are

    face  ("d", i, a): I^n -> I^(n+1), insert the constant a at position i
    degen ("s", i):    I^n -> I^(n-1), drop coordinate i
    conn  ("g", i):    I^n -> I^(n-1), replace t_i, t_(i+1) by max(t_i, t_(i+1))

Every morphism of the category sends each output coordinate to a constant
or to a max of input coordinates, so it is determined by what it does on
vertices; that makes vertex tables a complete invariant for deciding
relations.

A word (f1, f2, ..., fk) denotes the composite f1 o f2 o ... o fk.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

Gen = tuple


def _mask(k: int) -> int:
    return (1 << k) - 1


def insert_bit(w: int, i: int, a: int) -> int:
    return (w & _mask(i - 1)) | (a << (i - 1)) | ((w >> (i - 1)) << i)


def delete_bit(w: int, i: int) -> int:
    return (w & _mask(i - 1)) | ((w >> i) << (i - 1))


def max_bits(w: int, i: int) -> int:
    b = ((w >> (i - 1)) | (w >> i)) & 1
    return (w & _mask(i - 1)) | (b << (i - 1)) | ((w >> (i + 1)) << i)


def codomain(gen: Gen, n: int) -> int | None:
    """Codomain dimension of ``gen`` on I^n, or None if the index is out of range."""
    kind, i = gen[0], gen[1]
    if kind == "d":
        return n + 1 if 1 <= i <= n + 1 and gen[2] in (0, 1) else None
    if kind == "s":
        return n - 1 if 1 <= i <= n else None
    if kind == "g":
        return n - 1 if 1 <= i <= n - 1 else None
    raise ValueError(f"unknown generator {gen!r}")


def apply_gen(gen: Gen, w: int) -> int:
    kind, i = gen[0], gen[1]
    if kind == "d":
        return insert_bit(w, i, gen[2])
    if kind == "s":
        return delete_bit(w, i)
    return max_bits(w, i)


def vertex_map(gen: Gen, n: int) -> tuple[int, ...]:
    """Images of all 2^n vertices of the domain."""
    return tuple(apply_gen(gen, w) for w in range(1 << n))


def word_dims(word: Sequence[Gen], dom: int) -> list[int] | None:
    """Dimensions d_k, ..., d_0 met while applying the word right to left.

    Returns the list [dom, ..., codomain] or None if some index is invalid.
    """
    dims = [dom]
    for gen in reversed(word):
        nxt = codomain(gen, dims[-1])
        if nxt is None or nxt < 0:
            return None
        dims.append(nxt)
    return dims


def word_vertex_map(word: Sequence[Gen], dom: int) -> tuple[int, ...]:
    out = []
    for w in range(1 << dom):
        for gen in reversed(word):
            w = apply_gen(gen, w)
        out.append(w)
    return tuple(out)


@dataclass(frozen=True)
class RelationInstance:
    name: str
    params: tuple
    lhs: tuple
    rhs: tuple
    dom: int
    cod: int
    top: int

    def holds_geometrically(self) -> bool:
        return word_vertex_map(self.lhs, self.dom) == word_vertex_map(self.rhs, self.dom)


def _schemas(i: int, j: int, a: int, b: int) -> Iterator[tuple[str, tuple, tuple]]:
    d, s, g = (lambda k, c: ("d", k, c)), (lambda k: ("s", k)), (lambda k: ("g", k))
    if i < j:
        yield "face-face", (d(j, b), d(i, a)), (d(i, a), d(j - 1, b))
        yield "degen-degen", (s(i), s(j)), (s(j - 1), s(i))
        yield "face-degen-lt", (d(i, a), s(j - 1)), (s(j), d(i, a))
        yield "degen-conn-lt", (s(j), g(i)), (g(i), s(j + 1))
        yield "conn-face-lt", (g(j), d(i, a)), (d(i, a), g(j - 1))
    if i == j:
        yield "degen-face-eq", (s(j), d(j, a)), ()
        yield "degen-conn-eq", (s(i), g(i)), (s(i), s(i + 1))
    if i > j:
        yield "face-degen-gt", (d(i - 1, a), s(j)), (s(j), d(i, a))
        yield "degen-conn-gt", (s(j), g(i)), (g(i - 1), s(j))
    if i >= j:
        yield "conn-conn", (g(j), g(i + 1)), (g(i), g(j))
    if i in (j, j + 1):
        if a == 0:
            yield "conn-face-unit", (g(j), d(i, 0)), ()
        else:
            yield "conn-face-one", (g(j), d(i, 1)), (d(j, 1), s(j))
    if i > j + 1:
        yield "conn-face-gt", (g(j), d(i, a)), (d(i - 1, a), g(j))


def relation_instances(max_dim: int) -> list[RelationInstance]:
    """Every instance of the defining relations living in dimensions <= max_dim.

    Relations that do not involve a letter (a or b) are emitted once.
    """
    seen = set()
    out = []
    rng = range(1, max_dim + 3)
    for dom in range(0, max_dim + 1):
        for i, j, a, b in itertools.product(rng, rng, (0, 1), (0, 1)):
            for name, lhs, rhs in _schemas(i, j, a, b):
                key = (name, lhs, rhs, dom)
                if key in seen:
                    continue
                dl, dr = word_dims(lhs, dom), word_dims(rhs, dom)
                if dl is None or dr is None or dl[-1] != dr[-1]:
                    continue
                top = max(dl + dr)
                if top > max_dim:
                    continue
                seen.add(key)
                out.append(RelationInstance(name, (i, j, a, b), lhs, rhs, dom, dl[-1], top))
    return out
