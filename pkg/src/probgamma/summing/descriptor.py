"""Closed-form descriptors of realized summing-functor categories."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

KIND_CLASSICAL = "classical-cube"
KIND_QUANTUM = "quantum-annulus"
KIND_GAPPED = "gapped-torus"


@dataclass(frozen=True)
class Stratum:
    j: int
    stabilizer: str
    base_set: str

    def to_json(self) -> dict:
        return {"j": self.j, "stabilizer": self.stabilizer, "base_set": self.base_set}


def stabilizer_label(n: int, j: int) -> str:
    """Label for j coordinates with full unitary stabilizer and n-j with a torus."""
    factors = ["U(2)"] * j + ["(U(1)×U(1))"] * (n - j)
    return " ⊗ ".join(factors)


def unitary_strata(n: int, where: str = "") -> tuple[Stratum, ...]:
    suffix = f" in {where}" if where else ""
    return tuple(Stratum(j, stabilizer_label(n, j), f"α-sequences with {j} coordinates = 1/2{suffix}")
                 for j in range(n + 1))


@dataclass(frozen=True)
class RealizationDescriptor:
    kind: str
    N: int
    parameters: dict
    strata: tuple[Stratum, ...] = ()
    sampler: Callable[[Sequence], dict] | None = field(default=None, compare=False, repr=False)
    classifier: Callable[[Sequence], int] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in (KIND_CLASSICAL, KIND_QUANTUM, KIND_GAPPED):
            raise ValueError(f"unknown descriptor kind {self.kind!r}")
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        if self.strata and [s.j for s in self.strata] != list(range(self.N + 1)):
            raise ValueError("strata must be indexed 0..N")

    def sample(self, z: Sequence) -> dict:
        if self.sampler is None:
            raise ValueError(f"{self.kind} descriptor has no sampler")
        if len(z) != self.N:
            raise ValueError(f"expected {self.N} parameters, got {len(z)}")
        return self.sampler(z)

    def stratum_of(self, alpha: Sequence) -> int:
        if self.classifier is None:
            raise ValueError(f"{self.kind} descriptor has no strata")
        return self.classifier(alpha)

    def to_json(self, samples: Sequence[Sequence] = ()) -> dict[str, Any]:
        out = {"kind": self.kind, "N": self.N, "parameters": self.parameters,
               "strata": [s.to_json() for s in self.strata]}
        if samples:
            out["samples"] = [self.sample(z) for z in samples]
        return out
