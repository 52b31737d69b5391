"""Gapped Hamiltonians, Gibbs states, the (beta, Delta) locus and localization words.

Threshold.  The locus constant is c(t) = 4t/(1+t)^2 with t = exp(-beta Delta),
and the alpha-interval is nonempty iff c <= 1/4, i.e. 16t <= (1+t)^2, i.e.
t <= 7 - 4 sqrt 3 (the smaller root of t^2 - 14t + 1; its partner is
7 + 4 sqrt 3 = 1/(7 - 4 sqrt 3)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, GapViolated, IllFormedWord, InfeasibleLocus, NoZeroGroundState, NotHermitian
from .quantum import TOL, DensityMatrix, QuantumChannel, to_array, validate_density
from .summing.descriptor import KIND_GAPPED, RealizationDescriptor, unitary_strata

T_STAR = 7 - 4 * math.sqrt(3)
BETA_DELTA_STAR = math.log(7 + 4 * math.sqrt(3))
LOCUS_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class GappedHamiltonian:
    entries: np.ndarray
    gap: float
    spectrum: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def validate_gapped(h, gap: float, tol: float = TOL) -> GappedHamiltonian:
    """Check Spec(H) lies in {0} together with [gap, infinity), with 0 attained."""
    if gap <= 0:
        raise ValueError("the gap must be positive")
    a = to_array(h)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("a Hamiltonian must be square", shape=list(a.shape))
    defect = float(np.max(np.abs(a - a.conj().T)))
    if defect >= tol:
        raise NotHermitian(f"Hermitian defect {defect:.3e}", defect=defect)
    a = (a + a.conj().T) / 2
    spec = np.linalg.eigvalsh(a)
    if abs(spec[0]) > tol:
        raise NoZeroGroundState(f"lowest eigenvalue is {spec[0]:.12g}, not 0", eigenvalue=float(spec[0]))
    for e in spec[1:]:
        if abs(e) > tol and e < gap - tol:
            raise GapViolated(f"eigenvalue {e:.12g} lies inside the gap (0, {gap})",
                              eigenvalue=float(e), gap=gap)
    return GappedHamiltonian(a, float(gap), spec)


def _as_gapped(h, gap: float | None) -> GappedHamiltonian:
    if isinstance(h, GappedHamiltonian):
        return h
    if gap is None:
        raise ValueError("a gap is required for a raw matrix")
    return validate_gapped(h, gap)


def gibbs(h: GappedHamiltonian, beta: float) -> DensityMatrix:
    """exp(-beta H) / Tr exp(-beta H) through the eigendecomposition."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    vals, vecs = np.linalg.eigh(h.entries)
    w = np.exp(-beta * (vals - vals[0]))
    rho = (vecs * (w / w.sum())) @ vecs.conj().T
    return validate_density(rho)


def hamiltonian_from_gibbs(rho, beta: float) -> np.ndarray:
    """-(1/beta) log(rho / lambda_max): the Hamiltonian with ground energy 0."""
    r = to_array(rho)
    vals, vecs = np.linalg.eigh((r + r.conj().T) / 2)
    if vals[0] <= 0:
        raise ValueError("a Gibbs state has full rank")
    logs = -np.log(vals / vals[-1]) / beta
    return (vecs * logs) @ vecs.conj().T


# the locus ------------------------------------------------------------------

def locus_constant(t):
    """4t/(1+t)^2; exact when t is a Fraction."""
    return 4 * t / (1 + t) ** 2


def spectral_radius_sq(alpha, t):
    """alpha(1-alpha) - t/(1+t)^2, the |theta|^2 at which the coin matrix has
    spectrum {1/(1+t), t/(1+t)}."""
    return alpha * (1 - alpha) - t / (1 + t) ** 2


@dataclass(frozen=True)
class GapLocus:
    beta: float
    delta: float
    t: float
    c: float
    feasible: bool
    interval: tuple[float, float] | None

    def radius_sq(self, alpha: float) -> float:
        return alpha * (1 - alpha) - self.c

    def contains(self, alpha: float, tol: float = LOCUS_EPS) -> bool:
        return self.interval is not None and self.interval[0] - tol <= alpha <= self.interval[1] + tol

    def to_json(self) -> dict:
        return {"beta": self.beta, "delta": self.delta, "t": self.t, "c": self.c,
                "feasible": self.feasible,
                "alpha_interval": list(self.interval) if self.interval else [],
                "radius_sq_at_half": self.radius_sq(0.5) if self.feasible else None}


def gap_locus(beta: float, delta: float) -> GapLocus:
    if beta <= 0 or delta <= 0:
        raise ValueError("beta and delta must be positive")
    t = math.exp(-beta * delta)
    c = locus_constant(t)
    disc = 1 - 4 * c
    if disc < -LOCUS_EPS:
        return GapLocus(beta, delta, t, c, False, None)
    # inside the eps band the two roots are the same point 1/2
    r = math.sqrt(disc) if disc > LOCUS_EPS else 0.0
    return GapLocus(beta, delta, t, c, True, ((1 - r) / 2, (1 + r) / 2))


def feasible_exact(t: Fraction) -> bool:
    return locus_constant(Fraction(t)) <= Fraction(1, 4)


# coproducts and gap-preserving channels -----------------------------------------

def kronecker_sum(h1, h2) -> np.ndarray:
    a, b = to_array(h1), to_array(h2)
    return np.kron(a, np.eye(b.shape[0])) + np.kron(np.eye(a.shape[0]), b)


def kronecker_sum_gap(h1: GappedHamiltonian, h2: GappedHamiltonian) -> GappedHamiltonian:
    if h1.gap != h2.gap:
        raise ValueError("both Hamiltonians must carry the same gap")
    return validate_gapped(kronecker_sum(h1.entries, h2.entries), h1.gap)


def is_gap_preserving(ch: QuantumChannel, h, h2, beta: float, gap: float | None = None,
                      tol: float = TOL) -> bool:
    """Does the channel carry the Gibbs state of H to that of H'?"""
    g1, g2 = _as_gapped(h, gap), _as_gapped(h2, gap)
    out = ch.apply(gibbs(g1, beta).entries)
    return float(np.max(np.abs(out - gibbs(g2, beta).entries))) < tol


# localization words ----------------------------------------------------------------

@dataclass(frozen=True)
class ObjectRef:
    name: str
    gapped: bool = True


@dataclass(frozen=True)
class MorphismRef:
    name: str
    source: ObjectRef
    target: ObjectRef
    gap_preserving: bool = False


@dataclass(frozen=True)
class Letter:
    ref: str
    inverse: bool = False

    def __str__(self):
        return f"{self.ref}^-1" if self.inverse else self.ref


@dataclass(frozen=True)
class LocalizationWord:
    """A path of morphisms and formal inverses, read left to right."""

    letters: tuple[Letter, ...]
    registry: Mapping[str, MorphismRef] = field(compare=False, hash=False)
    at: ObjectRef | None = None

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        self.endpoints()

    def _ends(self, letter: Letter) -> tuple[ObjectRef, ObjectRef]:
        if letter.ref not in self.registry:
            raise IllFormedWord(f"unknown morphism {letter.ref}", letter=letter.ref)
        m = self.registry[letter.ref]
        if letter.inverse:
            if not (m.gap_preserving and m.source.gapped and m.target.gapped):
                raise IllFormedWord(f"{m.name} is not gap preserving and cannot be inverted", letter=m.name)
            return m.target, m.source
        return m.source, m.target

    def endpoints(self) -> tuple[ObjectRef, ObjectRef]:
        if not self.letters:
            if self.at is None:
                raise IllFormedWord("an empty word needs an object")
            return self.at, self.at
        ends = [self._ends(x) for x in self.letters]
        for k in range(len(ends) - 1):
            if ends[k][1] != ends[k + 1][0]:
                raise IllFormedWord(f"letters {k} and {k + 1} do not compose", position=k)
        return ends[0][0], ends[-1][1]

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(map(str, self.letters)) or f"id_{self.at.name}"


def word(letters: Sequence, registry: Mapping[str, MorphismRef], at: ObjectRef | None = None) -> LocalizationWord:
    """Letters given as names, with a trailing '^-1' for formal inverses."""
    out = []
    for x in letters:
        if isinstance(x, Letter):
            out.append(x)
        elif x.endswith("^-1"):
            out.append(Letter(x[:-3], True))
        else:
            out.append(Letter(x))
    return LocalizationWord(tuple(out), registry, at)


def reduce_word(w: LocalizationWord) -> LocalizationWord:
    """Rewrite to a fixpoint: cancel f f^-1 and f^-1 f, otherwise compose
    adjacent forward letters.  No other identifications are made."""
    reg = dict(w.registry)
    letters = list(w.letters)
    start, _ = w.endpoints()
    changed = True
    while changed:
        changed = False
        for k in range(len(letters) - 1):
            x, y = letters[k], letters[k + 1]
            if x.ref == y.ref and x.inverse != y.inverse:
                del letters[k:k + 2]
                changed = True
                break
        if changed:
            continue
        for k in range(len(letters) - 1):
            x, y = letters[k], letters[k + 1]
            if not x.inverse and not y.inverse:
                f, g = reg[x.ref], reg[y.ref]
                name = f"{g.name}∘{f.name}"
                reg.setdefault(name, MorphismRef(name, f.source, g.target, f.gap_preserving and g.gap_preserving))
                letters[k:k + 2] = [Letter(name)]
                changed = True
                break
    return LocalizationWord(tuple(letters), reg, None if letters else start)


# realization -------------------------------------------------------------------------

def gapped_realization_descriptor(n: int, beta: float, delta: float) -> RealizationDescriptor:
    locus = gap_locus(beta, delta)
    if not locus.feasible:
        raise InfeasibleLocus(f"no alpha satisfies the locus at beta*delta = {beta * delta:.12g}",
                              t=locus.t, c=locus.c)
    a, b = locus.interval

    def classify(alpha):
        return sum(1 for x in alpha if abs(float(x) - 0.5) <= LOCUS_EPS)

    def sample(alpha):
        coords = []
        for x in alpha:
            x = float(x)
            coords.append({"alpha": x, "inside": locus.contains(x),
                           "radius_sq": locus.radius_sq(x) if locus.contains(x) else None})
        return {"alpha": [float(x) for x in alpha], "coordinates": coords, "stratum": classify(alpha)}

    return RealizationDescriptor(
        KIND_GAPPED, n,
        {"beta": beta, "delta": delta, "t": locus.t, "c": locus.c, "alpha_interval": [a, b],
         "cube": f"[a,b]^{n}", "radius_sq": "alpha(1-alpha) - c", "radius_sq_at_half": locus.radius_sq(0.5)},
        unitary_strata(n, "[a,b]"), sampler=sample, classifier=classify)
