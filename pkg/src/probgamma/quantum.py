"""Density matrices, quantum channels and their coproducts, quantum summing functors.

Index conventions.  A channel from dimension ``din`` to ``dout`` is stored
as its transfer tensor ``T[i, j, a, b]`` with

    rho_out[i, j] = sum_{a,b} T[i, j, a, b] rho_in[a, b].

The Choi matrix is the reshuffle ``J[i*din + a, j*din + b] = T[i, j, a, b]``;
complete positivity is then J >= 0, and trace preservation is
sum_i J[i*din + a, i*din + b] = delta_ab.  A Kraus operator A (dout x din)
contributes A[i, a] conj(A[j, b]) to T.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    AnnulusViolated,
    DimensionMismatch,
    MeasureNotPreserved,
    NotCP,
    NotHermitian,
    NotPSD,
    NotTP,
    NotUnitary,
    TargetMismatch,
    TraceNotOne,
    ZeroVector,
)
from .finprob import as_fraction
from .probcat import POINT, PointedMap, PointedSet, wedge, wedge_copair, wedge_inclusions
from .summing.descriptor import KIND_QUANTUM, RealizationDescriptor, unitary_strata

TOL = 1e-9


# exact complex numbers ----------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, tuple) and len(v) == 2:
            return cls(*v)
        if isinstance(v, (float, complex)):
            raise TypeError("inexact value")
        return cls(as_fraction(v))

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


def _exact(values) -> list[GaussianRational] | None:
    try:
        return [GaussianRational.coerce(v) for v in values]
    except (TypeError, ValueError):
        return None


def exact_kron(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def to_array(m) -> np.ndarray:
    if isinstance(m, np.ndarray):
        return m.astype(complex)
    return np.array([[complex(x) for x in row] for row in m], dtype=complex)


# density matrices ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    eigenvalues: np.ndarray
    hermitization: float = 0.0

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def validate_density(m, tol: float = TOL) -> DensityMatrix:
    a = to_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("a density matrix must be square", shape=list(a.shape))
    defect = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if defect >= tol:
        raise NotHermitian(f"Hermitian defect {defect:.3e}", defect=defect)
    h = (a + a.conj().T) / 2
    eigs = np.linalg.eigvalsh(h)
    if eigs[0] < -tol:
        raise NotPSD(f"minimum eigenvalue {eigs[0]:.6g}", min_eigenvalue=float(eigs[0]))
    tr = float(np.trace(h).real)
    if abs(tr - 1) > tol:
        raise TraceNotOne(f"trace {tr:.12g}", trace=tr)
    return DensityMatrix(h, eigs, defect)


def is_density(m, tol: float = TOL) -> bool:
    try:
        validate_density(m, tol)
    except (NotHermitian, NotPSD, TraceNotOne):
        return False
    return True


# channels --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuantumChannel:
    din: int
    dout: int
    transfer: np.ndarray
    kraus: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        t = np.asarray(self.transfer, dtype=complex)
        if t.shape != (self.dout, self.dout, self.din, self.din):
            raise DimensionMismatch("transfer tensor has the wrong shape", shape=list(t.shape))
        object.__setattr__(self, "transfer", t)

    @property
    def superop(self) -> np.ndarray:
        return self.transfer.reshape(self.dout ** 2, self.din ** 2)

    @property
    def choi(self) -> np.ndarray:
        return choi_from_transfer(self.transfer)

    def apply(self, rho) -> np.ndarray:
        r = to_array(rho)
        if r.shape != (self.din, self.din):
            raise DimensionMismatch("input has the wrong dimension", expected=self.din, got=r.shape[0])
        return np.einsum("ijab,ab->ij", self.transfer, r)

    def choi_eigenvalues(self) -> np.ndarray:
        j = self.choi
        return np.linalg.eigvalsh((j + j.conj().T) / 2)

    def is_cp(self, tol: float = TOL) -> bool:
        return bool(self.choi_eigenvalues()[0] >= -tol)

    def tp_defect(self) -> float:
        partial = np.einsum("iiab->ab", self.transfer)
        return float(np.max(np.abs(partial - np.eye(self.din))))

    def is_tp(self, tol: float = TOL) -> bool:
        return self.tp_defect() <= tol

    def check(self, tol: float = TOL) -> "QuantumChannel":
        ev = self.choi_eigenvalues()
        if ev[0] < -tol:
            raise NotCP(f"Choi matrix has eigenvalue {ev[0]:.6g}", min_eigenvalue=float(ev[0]))
        if not self.is_tp(tol):
            raise NotTP(f"trace defect {self.tp_defect():.3e}", defect=self.tp_defect())
        return self


def choi_from_transfer(t: np.ndarray) -> np.ndarray:
    dout, _, din, _ = t.shape
    return t.transpose(0, 2, 1, 3).reshape(dout * din, dout * din)


def transfer_from_choi(j: np.ndarray, din: int, dout: int) -> np.ndarray:
    j = to_array(j)
    if j.shape != (dout * din, dout * din):
        raise DimensionMismatch("Choi matrix has the wrong shape", shape=list(j.shape))
    return j.reshape(dout, din, dout, din).transpose(0, 2, 1, 3)


def from_transfer(t, din: int | None = None, dout: int | None = None) -> QuantumChannel:
    t = np.asarray(t, dtype=complex)
    return QuantumChannel(t.shape[2] if din is None else din, t.shape[0] if dout is None else dout, t)


def from_kraus(ops: Iterable) -> QuantumChannel:
    ops = [to_array(a) for a in ops]
    if not ops:
        raise DimensionMismatch("need at least one Kraus operator")
    dout, din = ops[0].shape
    if any(a.shape != (dout, din) for a in ops):
        raise DimensionMismatch("Kraus operators differ in shape")
    t = sum(np.einsum("ia,jb->ijab", a, a.conj()) for a in ops)
    return QuantumChannel(din, dout, t, tuple(ops))


def from_choi(j, din: int, dout: int) -> QuantumChannel:
    return QuantumChannel(din, dout, transfer_from_choi(j, din, dout))


def kraus_from_choi(ch: QuantumChannel, tol: float = TOL) -> tuple[np.ndarray, ...]:
    j = ch.choi
    vals, vecs = np.linalg.eigh((j + j.conj().T) / 2)
    if vals[0] < -tol:
        raise NotCP(f"Choi matrix has eigenvalue {vals[0]:.6g}", min_eigenvalue=float(vals[0]))
    ops = [np.sqrt(v) * vecs[:, k].reshape(ch.dout, ch.din) for k, v in enumerate(vals) if v > tol]
    return tuple(ops) or (np.zeros((ch.dout, ch.din), dtype=complex),)


def channel_roundtrip(data, din: int | None = None, dout: int | None = None,
                      tol: float = TOL) -> QuantumChannel:
    """Build a checked channel from Kraus operators or from a Choi matrix.

    Either way the result carries Kraus operators whose channel reproduces
    the transfer tensor within ``tol``.
    """
    if isinstance(data, QuantumChannel):
        ch = data
    elif isinstance(data, (list, tuple)) and data and np.ndim(to_array(data[0])) == 2 and din is None:
        ch = from_kraus(data)
    else:
        if din is None or dout is None:
            raise DimensionMismatch("a Choi matrix needs explicit dimensions")
        ch = from_choi(data, din, dout)
    ch.check(tol)
    ops = kraus_from_choi(ch, tol)
    back = from_kraus(ops)
    err = float(np.max(np.abs(back.transfer - ch.transfer)))
    if err > tol:
        raise NotCP(f"round trip error {err:.3e}", error=err)
    return QuantumChannel(ch.din, ch.dout, ch.transfer, ops)


def compose_channels(second: QuantumChannel, first: QuantumChannel) -> QuantumChannel:
    if first.dout != second.din:
        raise DimensionMismatch("channels are not composable")
    sup = second.superop @ first.superop
    return QuantumChannel(first.din, second.dout, sup.reshape(second.dout, second.dout, first.din, first.din))


def identity_channel(d: int) -> QuantumChannel:
    return from_kraus([np.eye(d)])


def transpose_map(d: int) -> QuantumChannel:
    t = np.zeros((d, d, d, d), dtype=complex)
    for i, j in itertools.product(range(d), repeat=2):
        t[i, j, j, i] = 1
    return QuantumChannel(d, d, t)


def fq_morphism(ch: QuantumChannel, rho_x, rho_y, tol: float = TOL) -> QuantumChannel:
    """A checked morphism of finite quantum probabilities: CPTP and rho_x -> rho_y."""
    ch.check(tol)
    err = float(np.max(np.abs(ch.apply(rho_x) - to_array(rho_y))))
    if err > tol:
        raise MeasureNotPreserved(f"channel misses the target state by {err:.3e}", error=err)
    return ch


# quantum probabilistic objects -----------------------------------------------

@dataclass(frozen=True, eq=False)
class QCObject:
    """Pairs (C_a, C_b) of objects with a density matrix weighting them."""

    pairs: tuple[tuple[tuple[Hashable, Hashable], ...], ...]
    rho: np.ndarray
    exact: tuple | None = field(default=None, repr=False)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        r = to_array(self.rho)
        n = r.shape[0]
        if len(self.pairs) != n or any(len(row) != n for row in self.pairs):
            raise DimensionMismatch("pairs array does not match the density matrix", dim=n)
        validate_density(r)
        object.__setattr__(self, "rho", r)

    @classmethod
    def from_objects(cls, objs: Sequence, rho, exact=None, labels=()) -> "QCObject":
        pairs = tuple(tuple((a, b) for b in objs) for a in objs)
        return cls(pairs, rho, exact, tuple(labels))

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def objects(self) -> tuple:
        """The row objects C_a, read off the diagonal."""
        return tuple(self.pairs[a][a][0] for a in range(self.dim))


def qc_zero() -> QCObject:
    return QCObject.from_objects((POINT,), [[1]], exact=((GaussianRational(1),),))


@dataclass(frozen=True, eq=False)
class QCMorphism:
    source: QCObject
    target: QCObject
    channel: QuantumChannel
    maps: Mapping[tuple[int, int], PointedMap]  # (target index, source index) -> C_i -> C~_u


@dataclass(frozen=True, eq=False)
class QCCoproduct:
    obj: QCObject
    inj1: QCMorphism
    inj2: QCMorphism


def _append_state(din: int, rho2: np.ndarray, first: bool) -> np.ndarray:
    """Transfer tensor of rho -> rho (x) rho2 (first) or rho -> rho2 (x) rho."""
    d2 = rho2.shape[0]
    dout = din * d2
    t = np.zeros((dout, dout, din, din), dtype=complex)
    for i, j in itertools.product(range(din), repeat=2):
        for a, b in itertools.product(range(d2), repeat=2):
            if first:
                t[i * d2 + a, j * d2 + b, i, j] = rho2[a, b]
            else:
                t[a * din + i, b * din + j, i, j] = rho2[a, b]
    return t


def qc_coproduct(x: QCObject, y: QCObject) -> QCCoproduct:
    """Componentwise wedges with the Kronecker product state, row-major (i, a)."""
    ox, oy = x.objects(), y.objects()
    objs = tuple(wedge(p, q) for p in ox for q in oy)
    exact = exact_kron(x.exact, y.exact) if x.exact is not None and y.exact is not None else None
    obj = QCObject.from_objects(objs, np.kron(x.rho, y.rho), tuple(map(tuple, exact)) if exact else None)
    m = y.dim
    maps1, maps2 = {}, {}
    for i, a in itertools.product(range(x.dim), range(m)):
        inc1, inc2 = wedge_inclusions(ox[i], oy[a])
        maps1[(i * m + a, i)] = inc1
        maps2[(i * m + a, a)] = inc2
    inj1 = QCMorphism(x, obj, QuantumChannel(x.dim, obj.dim, _append_state(x.dim, y.rho, True)), maps1)
    inj2 = QCMorphism(y, obj, QuantumChannel(y.dim, obj.dim, _append_state(y.dim, x.rho, False)), maps2)
    return QCCoproduct(obj, inj1, inj2)


def copair_transfer(t1: np.ndarray, t2: np.ndarray, rho_t: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Transfer tensor out of the Kronecker coproduct.

    Entry (u,s),((i,a),(j,b)) is T1[u,s,i,j] T2[u,s,a,b] / rho_t[u,s] where
    the target entry is nonzero, and T1[u,s,i,j] delta_ab + T2[u,s,a,b] delta_ij
    where it vanishes.  Not CPTP in general; it is assembled unchecked.
    """
    k, _, n1, _ = t1.shape
    n2 = t2.shape[2]
    out = np.zeros((k, k, n1 * n2, n1 * n2), dtype=complex)
    e1, e2 = np.eye(n1), np.eye(n2)
    for u, s in itertools.product(range(k), repeat=2):
        r = rho_t[u, s]
        if abs(r) > tol:
            block = np.einsum("ij,ab->iajb", t1[u, s], t2[u, s]) / r
        else:
            block = np.einsum("ij,ab->iajb", t1[u, s], e2) + np.einsum("ab,ij->iajb", t2[u, s], e1)
        out[u, s] = block.reshape(n1 * n2, n1 * n2)
    return out


def qc_copair(f: QCMorphism, g: QCMorphism) -> QCMorphism:
    if f.target is not g.target and not (np.array_equal(f.target.rho, g.target.rho)
                                         and f.target.pairs == g.target.pairs):
        raise TargetMismatch("copair needs morphisms with the same target")
    tgt = f.target
    src = qc_coproduct(f.source, g.source).obj
    t = copair_transfer(f.channel.transfer, g.channel.transfer, tgt.rho)
    m = g.source.dim
    maps = {}
    for u in range(tgt.dim):
        for i, a in itertools.product(range(f.source.dim), range(m)):
            if (u, i) in f.maps and (u, a) in g.maps:
                maps[(u, i * m + a)] = wedge_copair(f.maps[(u, i)], g.maps[(u, a)])
    return QCMorphism(src, tgt, QuantumChannel(src.dim, tgt.dim, t), maps)


def copair_residual(f: QCMorphism, g: QCMorphism) -> float:
    """Largest deviation of copair(f,g) composed with the injections from f and g."""
    cp = qc_coproduct(f.source, g.source)
    h = qc_copair(f, g)
    r1 = compose_channels(h.channel, cp.inj1.channel).transfer - f.channel.transfer
    r2 = compose_channels(h.channel, cp.inj2.channel).transfer - g.channel.transfer
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


# quantum summing functors -----------------------------------------------------

def annulus_bounds(alpha) -> tuple[float, float, str]:
    """Stated inner and outer squared radii for theta, and the region shape."""
    outer = alpha * (1 - alpha)
    inner = outer - Fraction(1, 4) if isinstance(outer, Fraction) else outer - 0.25
    return inner, outer, "disk" if outer <= Fraction(1, 4) else "annulus"


def coin_density(alpha, theta):
    """The 2x2 matrix [[alpha, theta], [conj theta, 1 - alpha]]."""
    ex = _exact([alpha, theta])
    if ex is not None:
        a, t = ex
        return [[a, t], [t.conjugate(), 1 - a]]
    a, t = float(complex(alpha).real), complex(theta)
    return [[complex(a), t], [t.conjugate(), complex(1 - a)]]


@dataclass(frozen=True, eq=False)
class QuantumSummingFunctor:
    base_set: PointedSet
    alpha: tuple
    theta: tuple
    tol: float = 1e-12

    def __post_init__(self):
        n = self.base_set.reduced_size
        if len(self.alpha) != n or len(self.theta) != n:
            raise DimensionMismatch(f"need {n} values of alpha and theta")
        alpha = tuple(_coerce_real(a) for a in self.alpha)
        theta = tuple(_coerce_complex(t) for t in self.theta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "theta", theta)
        for k, (a, t) in enumerate(zip(alpha, theta)):
            if not 0 <= a <= 1:
                raise ValueError(f"alpha at coordinate {k + 1} is outside [0, 1]")
            inner, outer, _ = annulus_bounds(a)
            m = t.abs2() if isinstance(t, GaussianRational) else abs(t) ** 2
            slack = 0 if isinstance(t, GaussianRational) and isinstance(a, Fraction) else self.tol
            if m > outer + slack or m < inner - slack:
                raise AnnulusViolated(f"|theta|^2 = {float(m):.6g} outside [{float(inner):.6g}, {float(outer):.6g}]",
                                      coordinate=k + 1, point=self.base_set.nonbase()[k])

    @property
    def is_exact(self) -> bool:
        return all(isinstance(a, Fraction) for a in self.alpha) and \
            all(isinstance(t, GaussianRational) for t in self.theta)

    def coin(self, point: int):
        k = self.base_set.nonbase().index(point)
        return coin_density(self.alpha[k], self.theta[k])

    def evaluate(self, a: Iterable[int]) -> QCObject:
        from .summing.classical import pointed_subset, term_label

        a = pointed_subset(self.base_set, a)
        pts = sorted(a - {self.base_set.basepoint})
        k = len(pts)
        if k == 0:
            return qc_zero()
        mats = [self.coin(p) for p in pts]
        rho = mats[0]
        for m in mats[1:]:
            rho = exact_kron(rho, m)
        objs, labels = [], []
        for bits in itertools.product((0, 1), repeat=k):
            objs.append(PointedSet(2, bits[0]) if k == 1 else PointedSet(k + 1, 0))
            labels.append(term_label(zip(pts, bits)))
        exact = tuple(tuple(row) for row in rho) if self.is_exact else None
        return QCObject.from_objects(tuple(objs), to_array(rho), exact, labels)


def _coerce_real(v):
    if isinstance(v, float):
        return v
    return as_fraction(v)


def _coerce_complex(v):
    if isinstance(v, (float, complex)):
        return complex(v)
    return GaussianRational.coerce(v)


def is_unitary(u, tol: float = TOL) -> bool:
    u = to_array(u)
    return u.shape[0] == u.shape[1] and float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol


def local_unitary_act(us: Sequence, alpha: Sequence, theta: Sequence, tol: float = TOL):
    """Conjugate each coin matrix by its unitary and read back (alpha, theta)."""
    if not (len(us) == len(alpha) == len(theta)):
        raise DimensionMismatch("one unitary per coordinate is required")
    a2, t2 = [], []
    for k, (u, a, t) in enumerate(zip(us, alpha, theta)):
        u = to_array(u)
        if u.shape != (2, 2) or not is_unitary(u, tol):
            raise NotUnitary(f"matrix at coordinate {k + 1} is not a 2x2 unitary", coordinate=k + 1)
        rho = to_array(coin_density(a, t))
        r = u @ rho @ u.conj().T
        a2.append(float(r[0, 0].real))
        t2.append(complex(r[0, 1]))
    return a2, t2


def _stratum(alpha: Sequence) -> int:
    """Number of coordinates equal to 1/2."""
    return sum(1 for a in alpha if _coerce_real(a) == Fraction(1, 2))


def _annulus_samples(alpha: Sequence) -> dict:
    out = []
    for a in alpha:
        a = _coerce_real(a)
        inner, outer, shape = annulus_bounds(a)
        out.append({"alpha": a, "inner_sq": inner, "outer_sq": outer, "shape": shape})
    return {"alpha": list(alpha), "coordinates": out, "stratum": _stratum(alpha)}


def quantum_strata_descriptor(n: int) -> RealizationDescriptor:
    if n < 1:
        raise ValueError("N must be at least 1")
    return RealizationDescriptor(
        KIND_QUANTUM, n,
        {"ambient": "union over Z in |I^N| and k of I_Z^k x A_k",
         "theta_constraint": "alpha(1-alpha) - 1/4 <= |theta|^2 <= alpha(1-alpha)",
         "region": "disk whenever alpha(1-alpha) <= 1/4, which holds on all of [0,1]"},
        unitary_strata(n), sampler=_annulus_samples, classifier=_stratum)


# decoherence subcategory ---------------------------------------------------------

def _vector(z: Sequence):
    ex = _exact(z)
    vals = ex if ex is not None else [complex(v) for v in z]
    if all((v.abs2() if ex is not None else abs(v)) == 0 for v in vals):
        raise ZeroVector("projective coordinates cannot all vanish")
    return vals, ex is not None


def observation_probabilities(z: Sequence) -> list:
    vals, exact = _vector(z)
    if exact:
        sq = [v.abs2() for v in vals]
    else:
        sq = [abs(v) ** 2 for v in vals]
    total = sum(sq)
    return [s / total for s in sq]


def segre(z: Sequence, z2: Sequence) -> list:
    a, _ = _vector(z)
    b, _ = _vector(z2)
    return [x * y for x in a for y in b]


def segre_coproduct(x: tuple[Sequence, Sequence], y: tuple[Sequence, Sequence]):
    """((C_i), z) and ((C'_j), z') to ((C_i v C'_j), Segre(z, z')), row-major."""
    (cx, zx), (cy, zy) = x, y
    if len(cx) != len(zx) or len(cy) != len(zy):
        raise DimensionMismatch("one coordinate per object is required")
    objs = tuple(wedge(p, q) for p in cx for q in cy)
    return objs, segre(zx, zy)


def projectively_equal(z: Sequence, w: Sequence, tol: float = TOL) -> bool:
    if len(z) != len(w):
        return False
    a = np.array([complex(v) for v in z])
    b = np.array([complex(v) for v in w])
    return float(np.max(np.abs(np.outer(a, b) - np.outer(b, a)))) <= tol
