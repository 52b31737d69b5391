"""Geometry of the classical summing-functor category: cubes with flipped vertices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..finprob import as_fraction
from ..probcat import PointedSet
from .descriptor import KIND_CLASSICAL, RealizationDescriptor

HALF = Fraction(1, 2)


def flip_vertices(z: Sequence) -> list[tuple[Fraction, ...]]:
    """All (t_1..t_n) with t_i in {z_i, 1 - z_i}, pattern order, repeats kept."""
    z = [as_fraction(v) for v in z]
    return [tuple(v if b == 0 else 1 - v for v, b in zip(z, bits))
            for bits in itertools.product((0, 1), repeat=len(z))]


def collapsed_edges(z: Sequence) -> list[int]:
    """Coordinates (1-based) whose two vertex values coincide."""
    return [i + 1 for i, v in enumerate(z) if as_fraction(v) == HALF]


def sample_cube(z: Sequence) -> dict:
    verts = flip_vertices(z)
    distinct = sorted(set(verts))
    return {"Z": [as_fraction(v) for v in z], "vertices": distinct, "patterns": len(verts),
            "collapsed": collapsed_edges(z)}


@dataclass(frozen=True)
class NerveDescriptor:
    """Level-n cells: a point Lambda of the N-cube together with the polytope
    whose 2^n vertices flip the first n coordinates of Lambda."""

    size: int
    n: int

    @property
    def N(self) -> int:
        return self.size - 1

    def sample(self, lam: Sequence) -> dict:
        lam = [as_fraction(v) for v in lam]
        if len(lam) != self.N:
            raise ValueError(f"expected {self.N} parameters, got {len(lam)}")
        if any(not 0 <= v <= 1 for v in lam):
            raise ValueError("parameters must lie in [0, 1]")
        head = lam[:self.n]
        verts = flip_vertices(head)
        return {"Lambda": lam, "n": self.n, "vertices": sorted(set(verts)),
                "basepoint": tuple(head), "patterns": len(verts),
                "degenerate": len(set(verts)) < len(verts)}

    def to_json(self) -> dict:
        return {"kind": "classical-nerve", "N": self.N, "n": self.n,
                "cells": "pairs (Lambda in |I^N|, polytope with 2^n vertices)",
                "vertex_rule": "t_i in {lambda_i, 1 - lambda_i}",
                "basepoint_rule": "(lambda_1, ..., lambda_n)"}


def classical_nerve_descriptor(x: PointedSet, n: int) -> NerveDescriptor:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > x.reduced_size:
        raise ValueError(f"level {n} exceeds the {x.reduced_size} available coordinates")
    return NerveDescriptor(x.size, n)


def classical_realization_descriptor(x: PointedSet) -> RealizationDescriptor:
    n = x.reduced_size
    return RealizationDescriptor(
        KIND_CLASSICAL, n,
        {"vertex_map": "Z -> {(t_1..t_N) : t_i in {z_i, 1 - z_i}}", "range": "Z in [0,1]^N"},
        sampler=sample_cube)


def bowtie(zs: Sequence) -> list[dict]:
    """Segments [z, 1 - z] for a one-point X, as plotting data."""
    out = []
    for z in zs:
        z = as_fraction(z)
        out.append({"z": z, "endpoints": (z, 1 - z), "low": min(z, 1 - z), "high": max(z, 1 - z)})
    return out


def bowtie_crossings(samples: Sequence[dict]) -> list[Fraction]:
    """Parameters where the two endpoint curves meet or swap order."""
    out = []
    prev = None
    for s in samples:
        a, b = s["endpoints"]
        sign = (a > b) - (a < b)
        if sign == 0:
            out.append(s["z"])
        elif prev is not None and prev[0] != 0 and sign != prev[0]:
            # linear endpoints: the crossing lies where z = 1 - z
            out.append(HALF)
        prev = (sign, s["z"])
    return sorted(set(out))
