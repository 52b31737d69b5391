import cmath
import itertools
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from probgamma.errors import (
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
from probgamma.probcat import POINT, PointedSet
from probgamma.quantum import (
    GaussianRational,
    QCMorphism,
    QCObject,
    QuantumSummingFunctor,
    annulus_bounds,
    channel_roundtrip,
    choi_from_transfer,
    coin_density,
    compose_channels,
    copair_residual,
    copair_transfer,
    fq_morphism,
    from_choi,
    from_kraus,
    identity_channel,
    local_unitary_act,
    observation_probabilities,
    projectively_equal,
    qc_copair,
    qc_coproduct,
    qc_zero,
    quantum_strata_descriptor,
    segre,
    segre_coproduct,
    transfer_from_choi,
    transpose_map,
    validate_density,
)
from probgamma.summing import ClassicalSummingFunctor

TOL = 1e-9
PURE = [[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]]
HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
DEPHASE = [np.diag([1, 0]), np.diag([0, 1])]


class TestGaussianRational:

    def test_arithmetic(self):
        z = GaussianRational(F(1, 2), F(1, 3))
        assert z * z.conjugate() == GaussianRational(z.abs2())
        assert z.abs2() == F(13, 36)
        assert z - z == 0 and 1 - z == GaussianRational(F(1, 2), F(-1, 3))
        assert str(z) == "1/2+1/3i"

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            GaussianRational.coerce(0.5)


class TestDensity:

    def test_maximally_mixed(self):
        d = validate_density([[F(1, 2), 0], [0, F(1, 2)]])
        assert np.allclose(d.eigenvalues, [0.5, 0.5], atol=TOL)

    def test_pure(self):
        assert np.allclose(validate_density(PURE).eigenvalues, [0, 1], atol=TOL)

    def test_not_psd(self):
        with pytest.raises(NotPSD) as ei:
            validate_density([[F(3, 4), F(1, 2)], [F(1, 2), F(1, 4)]])
        assert ei.value.detail["min_eigenvalue"] < 0

    def test_not_hermitian_and_trace(self):
        with pytest.raises(NotHermitian):
            validate_density([[F(1, 2), 1j], [0, F(1, 2)]])
        with pytest.raises(TraceNotOne):
            validate_density([[1, 0], [0, 1]])
        with pytest.raises(DimensionMismatch):
            validate_density([[1, 0]])


class TestChannels:

    def test_identity_choi(self):
        ch = channel_roundtrip([np.eye(2)])
        expect = np.zeros((4, 4))
        for a, b in itertools.product(range(2), repeat=2):
            expect[a * 2 + a, b * 2 + b] = 1
        assert np.allclose(ch.choi, expect)
        assert ch.is_cp() and ch.is_tp()

    def test_choi_reshuffle_convention(self):
        t = np.arange(2 * 2 * 3 * 3, dtype=complex).reshape(2, 2, 3, 3)
        j = choi_from_transfer(t)
        assert j[1 * 3 + 2, 0 * 3 + 1] == t[1, 0, 2, 1]
        assert np.array_equal(transfer_from_choi(j, 3, 2), t)

    def test_dephasing(self):
        ch = channel_roundtrip(DEPHASE)
        assert np.allclose(sorted(ch.choi_eigenvalues()), [0, 0, 1, 1], atol=TOL)
        assert np.allclose(ch.apply(PURE), np.diag([0.5, 0.5]), atol=TOL)

    def test_transpose_is_not_cp(self):
        t = transpose_map(2)
        assert t.is_tp() and not t.is_cp()
        assert min(t.choi_eigenvalues()) == pytest.approx(-1, abs=TOL)
        with pytest.raises(NotCP):
            channel_roundtrip(t.choi, din=2, dout=2)

    def test_not_tp(self):
        with pytest.raises(NotTP):
            channel_roundtrip([2 * np.eye(2)])

    def test_from_choi_needs_dims(self):
        with pytest.raises(DimensionMismatch):
            channel_roundtrip(np.eye(4))
        with pytest.raises(DimensionMismatch):
            from_kraus([np.eye(2), np.eye(3)])

    def test_fq_morphism(self):
        ch = channel_roundtrip(DEPHASE)
        fq_morphism(ch, PURE, np.diag([0.5, 0.5]))
        with pytest.raises(MeasureNotPreserved):
            fq_morphism(ch, PURE, PURE)

    def test_compose(self):
        ch = compose_channels(channel_roundtrip(DEPHASE), identity_channel(2))
        assert np.allclose(ch.transfer, channel_roundtrip(DEPHASE).transfer)
        with pytest.raises(DimensionMismatch):
            compose_channels(identity_channel(3), identity_channel(2))


def random_kraus(rng, din, dout, count):
    ops = [rng.normal(size=(dout, din)) + 1j * rng.normal(size=(dout, din)) for _ in range(count)]
    s = sum(a.conj().T @ a for a in ops)
    vals, vecs = np.linalg.eigh(s)
    inv_sqrt = vecs @ np.diag(vals ** -0.5) @ vecs.conj().T
    return [a @ inv_sqrt for a in ops]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_kraus_choi_roundtrip(seed):
    rng = np.random.default_rng(seed)
    din, dout = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    ops = random_kraus(rng, din, dout, math.ceil(din / dout) + int(rng.integers(0, 3)))
    ch = channel_roundtrip(ops)
    assert ch.is_cp() and ch.is_tp()
    back = channel_roundtrip(ch.choi, din=din, dout=dout)
    assert np.max(np.abs(back.transfer - ch.transfer)) < TOL
    assert np.max(np.abs(from_kraus(back.kraus).transfer - ch.transfer)) < TOL


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_perturbing_choi_flips_cp(seed):
    rng = np.random.default_rng(seed)
    ch = channel_roundtrip(random_kraus(rng, 2, 2, 2))
    j = ch.choi
    vals, vecs = np.linalg.eigh(j)
    v = vecs[:, 0]
    bad = j - (vals[0] + 1e-6) * np.outer(v, v.conj())
    assert not from_choi(bad, 2, 2).is_cp()
    assert from_choi(j, 2, 2).is_cp()


class TestQCObjects:

    def test_zero_is_unit(self):
        x = QCObject.from_objects((PointedSet(2), PointedSet(3)), np.diag([0.25, 0.75]))
        c = qc_coproduct(qc_zero(), x)
        assert np.allclose(c.obj.rho, x.rho)
        assert [o.size for o in c.obj.objects()] == [2, 3]

    def test_pure_kron(self):
        x = QCObject.from_objects((POINT, PointedSet(2)), PURE, exact=tuple(map(tuple, PURE)))
        c = qc_coproduct(x, x)
        assert all(v == F(1, 4) for row in c.obj.exact for v in row)
        assert abs(np.trace(c.obj.rho) - 1) < 1e-12

    def test_pairs_must_match(self):
        with pytest.raises(DimensionMismatch):
            QCObject(((("a", "a"),),), np.diag([0.5, 0.5]))
        with pytest.raises(NotPSD):
            QCObject.from_objects((POINT, POINT), [[1, 1], [1, 0]])

    def test_injection_appends_state(self):
        x = QCObject.from_objects((POINT, POINT), PURE)
        y = QCObject.from_objects((POINT, POINT), np.diag([0.25, 0.75]))
        c = qc_coproduct(x, y)
        assert np.allclose(c.inj1.channel.apply(x.rho), c.obj.rho)
        assert np.allclose(c.inj2.channel.apply(y.rho), c.obj.rho)

    def test_copair_nonzero_branch(self):
        tgt = QCObject.from_objects((POINT, POINT), PURE)
        f = QCMorphism(tgt, tgt, identity_channel(2), {})
        assert copair_residual(f, f) < TOL

    def test_copair_zero_branch(self):
        tgt = QCObject.from_objects((POINT, POINT), np.diag([0.5, 0.5]))
        f = QCMorphism(tgt, tgt, channel_roundtrip(DEPHASE), {})
        t1 = t2 = f.channel.transfer
        t = copair_transfer(t1, t2, tgt.rho)
        # off-diagonal target entries vanish, so those blocks are sums of two deltas
        e = np.eye(2)
        expect = np.einsum("ij,ab->iajb", t1[0, 1], e) + np.einsum("ab,ij->iajb", t2[0, 1], e)
        assert np.allclose(t[0, 1], expect.reshape(4, 4))
        # the second channel sends the source state to something with zero there
        assert abs(np.einsum("ab,ab->", t2[0, 1], tgt.rho)) < TOL
        assert copair_residual(f, f) < TOL

    def test_copair_target_mismatch(self):
        a = QCObject.from_objects((POINT, POINT), PURE)
        b = QCObject.from_objects((POINT, POINT), np.diag([0.5, 0.5]))
        with pytest.raises(TargetMismatch):
            qc_copair(QCMorphism(a, a, identity_channel(2), {}), QCMorphism(b, b, identity_channel(2), {}))


class TestSumming:

    def test_decoherent_diagonal_is_classical(self):
        x = PointedSet(3)
        q = QuantumSummingFunctor(x, ("1/3", "1/4"), (0, 0))
        obj = q.evaluate([1, 2])
        diag = [obj.exact[k][k] for k in range(4)]
        assert diag == list(ClassicalSummingFunctor(x, ("1/3", "1/4")).evaluate([1, 2]).weights)
        assert all(obj.exact[i][j] == 0 for i in range(4) for j in range(4) if i != j)

    def test_pure_coordinates(self):
        q = QuantumSummingFunctor(PointedSet(3), ("1/2", "1/2"), ("1/2", "1/2"))
        assert np.allclose(validate_density(q.evaluate([1]).rho).eigenvalues, [0, 1], atol=TOL)
        assert np.allclose(validate_density(q.evaluate([1, 2]).rho).eigenvalues, [0, 0, 0, 1], atol=TOL)

    def test_annulus_violated(self):
        with pytest.raises(AnnulusViolated) as ei:
            QuantumSummingFunctor(PointedSet(2), ("1/2",), ("3/5",))
        assert ei.value.detail["coordinate"] == 1

    def test_exact_boundary_accepted(self):
        q = QuantumSummingFunctor(PointedSet(2), ("1/3",), (GaussianRational(F(1, 3), F(1, 3)),))
        assert q.is_exact
        assert np.allclose(validate_density(q.evaluate([1]).rho).eigenvalues, [0, 1], atol=TOL)
        with pytest.raises(AnnulusViolated):
            QuantumSummingFunctor(PointedSet(2), ("1/3",), (GaussianRational(F(1, 3), F(1, 3) + F(1, 100)),))

    def test_basepoint_goes_to_zero(self):
        q = QuantumSummingFunctor(PointedSet(2), ("1/3",), (0,))
        assert q.evaluate([0]).objects() == (POINT,)

    def test_inner_bound_never_binds(self):
        for k in range(101):
            inner, outer, shape = annulus_bounds(F(k, 100))
            assert inner <= 0 and shape == "disk"

    def test_coin_density(self):
        m = coin_density(F(1, 3), GaussianRational(F(1, 5), F(1, 7)))
        assert m[1][0] == GaussianRational(F(1, 5), F(-1, 7)) and m[1][1] == F(2, 3)


class TestUnitaries:

    def test_identity(self):
        a, t = local_unitary_act([np.eye(2)], [F(1, 3)], [F(1, 5)])
        assert a[0] == pytest.approx(1 / 3) and t[0] == pytest.approx(0.2)

    def test_hadamard(self):
        a, t = local_unitary_act([HADAMARD], [F(3, 4)], [0])
        assert a[0] == pytest.approx(0.5, abs=TOL) and t[0] == pytest.approx(0.25, abs=TOL)

    def test_phase(self):
        phi = 0.7
        a, t = local_unitary_act([np.diag([1, cmath.exp(1j * phi)])], [F(1, 3)], [F(1, 5)])
        assert a[0] == pytest.approx(1 / 3, abs=TOL)
        assert t[0] == pytest.approx(cmath.exp(-1j * phi) * 0.2, abs=TOL)

    def test_not_unitary(self):
        with pytest.raises(NotUnitary):
            local_unitary_act([np.diag([1, 2])], [F(1, 3)], [0])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_spectrum_invariant_under_local_unitaries(seed):
    rng = np.random.default_rng(seed)
    alpha = float(rng.uniform())
    r = math.sqrt(alpha * (1 - alpha)) * float(rng.uniform())
    theta = r * cmath.exp(1j * float(rng.uniform(0, 2 * math.pi)))
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    u, _ = np.linalg.qr(z)
    a2, t2 = local_unitary_act([u], [alpha], [theta])
    before = np.linalg.eigvalsh(np.array(coin_density(alpha, theta)))
    after = np.linalg.eigvalsh(np.array(coin_density(a2[0], t2[0])))
    assert np.max(np.abs(before - after)) < TOL
    assert abs(t2[0]) ** 2 <= a2[0] * (1 - a2[0]) + TOL


class TestStrata:

    def test_one_coordinate(self):
        d = quantum_strata_descriptor(1)
        assert [(s.j, s.stabilizer) for s in d.strata] == [(0, "(U(1)×U(1))"), (1, "U(2)")]

    def test_two_coordinates(self):
        d = quantum_strata_descriptor(2)
        assert d.strata[1].stabilizer == "U(2) ⊗ (U(1)×U(1))"
        assert d.stratum_of(["1/2", "1/3"]) == 1
        assert d.to_json(samples=[["1/2", "1/3"]])["samples"][0]["stratum"] == 1

    def test_needs_a_coordinate(self):
        with pytest.raises(ValueError):
            quantum_strata_descriptor(0)


class TestSegre:

    def test_embedded_copy(self):
        assert projectively_equal(segre([1, 0], [2, 3]), [2, 3, 0, 0])

    def test_uniform(self):
        assert segre([1, 1], [1, 1]) == [1, 1, 1, 1]
        assert observation_probabilities(segre([1, 1], [1, 1])) == [F(1, 4)] * 4

    def test_factorization(self):
        z = segre([1, 2], [1, 3])
        assert [v.abs2() for v in z] == [1, 9, 4, 36]
        px, py = observation_probabilities([1, 2]), observation_probabilities([1, 3])
        assert observation_probabilities(z) == [a * b for a in px for b in py]

    def test_objects_are_wedges(self):
        objs, z = segre_coproduct(((PointedSet(2), POINT), (1, 0)), ((PointedSet(3),), (1,)))
        assert [o.size for o in objs] == [4, 3] and z == [1, 0]

    def test_zero_vector(self):
        with pytest.raises(ZeroVector):
            segre([0, 0], [1])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=3).filter(any),
       st.lists(st.integers(-5, 5), min_size=1, max_size=3).filter(any))
def test_segre_probabilities_factor(z, w):
    px, py = observation_probabilities(z), observation_probabilities(w)
    assert observation_probabilities(segre(z, w)) == [a * b for a in px for b in py]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_coproduct_trace(seed):
    rng = random.Random(seed)

    def obj():
        n = rng.randint(1, 3)
        m = np.array([[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)] for _ in range(n)])
        rho = m @ m.conj().T
        return QCObject.from_objects(tuple(PointedSet(rng.randint(1, 3)) for _ in range(n)), rho / np.trace(rho))

    c = qc_coproduct(obj(), obj())
    assert abs(np.trace(c.obj.rho) - 1) < 1e-12
