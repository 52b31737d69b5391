"""Probabilistic Gamma-space evaluation: nerves term by term, weights unchanged."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

from ..cubical import ProbCubicalSet, TruncatedCubicalSet, nerve_map
from ..errors import MissingTermNerve
from ..finprob import StochasticMorphism
from ..probcat import PointedSet, ProbMorphism, ProbPointedSet
from .generic import SummingCategory, pushforward

NerveSource = Union[Mapping, Callable[[PointedSet], TruncatedCubicalSet]]


def _lookup(nerves: NerveSource, x: PointedSet, label: str) -> TruncatedCubicalSet:
    if callable(nerves) and not isinstance(nerves, Mapping):
        try:
            return nerves(x)
        except KeyError:
            raise MissingTermNerve(f"no nerve for term {label}", term=label) from None
    for key in (x, label, x.size):
        if key in nerves:
            return nerves[key]
    raise MissingTermNerve(f"no nerve for term {label}", term=label)


def prob_gamma_eval(obj: ProbPointedSet, nerves: NerveSource) -> ProbCubicalSet:
    """Replace each term X_i by its nerve, keeping weight and label.

    ``nerves`` is keyed by pointed set, by term label or by size, or is a
    callable on pointed sets.
    """
    sets = tuple(_lookup(nerves, x, label) for x, label in zip(obj.sets, obj.labels))
    return ProbCubicalSet(obj.weights, sets, obj.labels)


CellMap = tuple[tuple[int, ...], ...]


def compose_cell_maps(second: CellMap, first: CellMap) -> CellMap:
    return tuple(tuple(t2[v] for v in t1) for t2, t1 in zip(second, first))


@dataclass(frozen=True)
class ProbCubicalMap:
    stoch: StochasticMorphism
    families: Mapping[tuple[int, int], tuple[tuple[CellMap, object], ...]]


def prob_gamma_map(phi: ProbMorphism, build: Callable[[PointedSet], SummingCategory],
                   n_max: int = 1) -> ProbCubicalMap:
    """Send every weighted pointed map of phi to the induced map of nerves.

    ``build`` returns the summing category of a pointed set; it is called
    once per distinct set.
    """
    cache: dict[PointedSet, SummingCategory] = {}

    def cat(x):
        if x not in cache:
            cache[x] = build(x)
        return cache[x]

    fams = {}
    for key, fam in phi.families.items():
        entries = []
        for f, w in fam:
            tables, _, _ = nerve_map(pushforward(cat(f.source), cat(f.target), f), n_max)
            entries.append((tuple(tables), w))
        fams[key] = tuple(entries)
    return ProbCubicalMap(phi.stoch, fams)
