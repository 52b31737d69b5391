import math
import random
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from probgamma.cubical import (
    discrete,
    generated_subcomplex,
    reduced_euler,
    restrict,
    smash_cubical,
    standard_cube,
    sphere,
)
from probgamma.errors import LabelMismatch, NonpositiveEuler, UndefinedInvariant
from probgamma.finprob import (
    FiniteProbability,
    coproduct_morphisms,
    from_point,
    identity,
    to_point,
    validate,
)
from probgamma.infoloss import (
    AXIOMS,
    InvariantFamily,
    LossFunctional,
    axiom_suite,
    convex_sum,
    entropy_squared_difference,
    invariant_eval,
    kl,
    loss_fp,
    loss_logchi,
    loss_pc,
    mixture,
    shannon,
    shannon_difference,
    weighted_disjoint_union,
)
from probgamma.probcat import (
    PointedSet,
    ProbPointedSet,
    embed_fp,
    smash,
    to_zero,
    wedge,
)
from probgamma.probcat.ps import ProbMorphism
from probgamma.sampling import random_morphism_from, random_probability

LN2 = math.log(2)
TOL = 1e-12


def fp(*probs):
    return FiniteProbability.from_probs([F(p) for p in probs])


HALF = fp("1/2", "1/2")


class TestShannon:

    def test_values(self):
        assert shannon(fp(1)) == 0
        assert shannon(HALF) == pytest.approx(LN2, abs=TOL)
        assert shannon(fp("1/2", "1/4", "1/4")) == pytest.approx(1.5 * LN2, abs=TOL)

    def test_zero_terms_ignored(self):
        assert shannon(fp("1/2", 0, "1/2")) == pytest.approx(LN2, abs=TOL)


class TestKL:

    def test_values(self):
        assert kl(HALF, HALF) == 0
        assert kl(HALF, fp("1/4", "3/4")) == pytest.approx(0.5 * math.log(4 / 3), abs=TOL)
        assert kl(fp(1, 0), fp(0, 1)) == math.inf

    def test_label_mismatch(self):
        with pytest.raises(LabelMismatch):
            kl(HALF, fp("1/3", "1/3", "1/3"))


class TestLossFP:

    def test_identity_and_merge(self):
        assert loss_fp(identity(HALF)) == 0
        assert loss_fp(to_point(HALF)) == pytest.approx(-LN2, abs=TOL)
        assert loss_fp(to_point(HALF), scale=3.0) == pytest.approx(-3 * LN2, abs=TOL)

    def test_copair_of_identities(self):
        s = identity(HALF)
        cp = coproduct_morphisms(s, s)
        got = loss_fp(cp.copair)
        assert got == pytest.approx(-LN2, abs=TOL)
        assert got == pytest.approx(loss_fp(s) + loss_fp(s) - loss_fp(from_point(HALF)), abs=TOL)

    def test_combine_instance(self):
        lam = F(1, 2)
        hat = to_point(HALF)
        lhs = loss_fp(convex_sum(hat, hat, lam))
        assert lhs == pytest.approx(-math.log(4), abs=TOL)
        assert lhs == pytest.approx(float(lam) * loss_fp(hat) + float(1 - lam) * loss_fp(hat) + loss_fp(hat),
                                    abs=TOL)

    def test_shared_source_flips_sign(self):
        lam = F(1, 2)
        u1 = validate([[1, 1], [0, 0]], HALF, fp(1, 0))
        u2 = validate([[0, 0], [1, 1]], HALF, fp(0, 1))
        split = loss_fp(to_point(HALF))
        got = loss_fp(mixture(lam, u1, u2))
        avg = float(lam) * loss_fp(u1) + float(1 - lam) * loss_fp(u2)
        assert got == pytest.approx(avg - split, abs=TOL)
        assert abs(got - (avg + split)) > 1

    def test_weighted_union_is_not_coproduct(self):
        u = weighted_disjoint_union(fp("1/3", "2/3"), HALF, F(1, 4))
        assert u.probs == (F(1, 12), F(1, 6), F(3, 8), F(3, 8))


class TestInvariants:

    def test_linear(self):
        assert invariant_eval(InvariantFamily("linear", kappa=2.0), PointedSet(4)) == 6

    def test_exponential_on_wedge(self):
        fam = InvariantFamily("exponential", lam=2.0)
        a, b = PointedSet(3), PointedSet(4)
        assert invariant_eval(fam, wedge(a, b)) == 2 ** 5
        assert invariant_eval(fam, wedge(a, b)) == invariant_eval(fam, a) * invariant_eval(fam, b)

    def test_log_semigroup_on_smash(self):
        fam = InvariantFamily("log-semigroup")
        a, b = PointedSet(3), PointedSet(4)
        assert invariant_eval(fam, smash(a, b)) == pytest.approx(math.log(6), abs=TOL)
        assert invariant_eval(fam, smash(a, b)) == pytest.approx(
            invariant_eval(fam, a) + invariant_eval(fam, b), abs=TOL)

    def test_multiplicative_primes(self):
        fam = InvariantFamily("multiplicative", primes={2: 5.0})
        assert fam(12) == 5.0 * 5.0 * 3.0
        with pytest.raises(UndefinedInvariant):
            fam(0)

    def test_parameter_ranges(self):
        with pytest.raises(ValueError):
            InvariantFamily("exponential", lam=0.0)
        with pytest.raises(ValueError):
            InvariantFamily("multiplicative", primes={2: -1.0})
        with pytest.raises(ValueError):
            InvariantFamily("quadratic")

    def test_cubical_needs_reduced_euler(self):
        k = discrete(3)
        assert invariant_eval(InvariantFamily("reduced-euler"), k) == 2
        with pytest.raises(UndefinedInvariant):
            invariant_eval(InvariantFamily("linear"), k)


class TestLossPC:

    def test_to_zero(self):
        src = ProbPointedSet((F(1, 2), F(1, 2)), (PointedSet(2), PointedSet(2)))
        got = loss_pc(to_zero(src), InvariantFamily("reduced-euler"))
        assert got == pytest.approx(-(LN2 + 1), abs=TOL)

    def test_embedded_fp_matches_loss_fp(self):
        rng = random.Random(3)
        for _ in range(50):
            s = random_morphism_from(rng, random_probability(rng, rng.randint(1, 4)), rng.randint(1, 4))
            src, tgt = embed_fp(s.source), embed_fp(s.target)
            phi = ProbMorphism(src, tgt, s, {})
            assert loss_pc(phi, InvariantFamily("linear", kappa=7.0)) == pytest.approx(loss_fp(s), abs=TOL)


class TestLogEuler:

    def test_discrete(self):
        assert loss_logchi(discrete(4), discrete(4)) == 0
        assert loss_logchi(discrete(3), discrete(4)) == pytest.approx(math.log(1.5), abs=TOL)

    def test_smash_is_additive(self):
        a, b = discrete(3), discrete(4)
        loss = LossFunctional("log-euler")
        pt = discrete(2)
        assert loss((pt, smash_cubical(a, b))) == pytest.approx(loss((pt, a)) + loss((pt, b)), abs=TOL)

    def test_nonpositive(self):
        with pytest.raises(NonpositiveEuler):
            loss_logchi(discrete(1), discrete(3))
        with pytest.raises(NonpositiveEuler):
            loss_logchi(discrete(3), sphere(1))


class TestAxiomSuite:

    def test_shannon_passes(self):
        reports = axiom_suite(shannon_difference(), instances=200, seed=11)
        assert [r.axiom for r in reports] == list(AXIOMS)
        assert all(r.passed for r in reports), [r.to_json() for r in reports if not r.passed]

    def test_scaled_shannon_passes(self):
        assert all(r.passed for r in axiom_suite(shannon_difference(2.5), instances=50, seed=2))

    def test_squared_entropy_fails_combine(self):
        reports = {r.axiom: r for r in axiom_suite(entropy_squared_difference(), instances=50, seed=0)}
        assert not reports["combine"].passed
        assert reports["isomorphism"].passed and reports["compose"].passed

    def test_report_json(self):
        r = axiom_suite(shannon_difference(), instances=3)[0]
        assert set(r.to_json()) == {"axiom", "max_residual", "instances", "pass"}

    def test_rejects_non_fp_functionals(self):
        with pytest.raises(ValueError):
            axiom_suite(LossFunctional("log-euler"), instances=1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_kl_nonnegative(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    p, q = random_probability(rng, n, zero_prob=0.3), random_probability(rng, n, zero_prob=0.3)
    assert kl(p, q) >= 0 and kl(p, p) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.data())
def test_linear_inclusion_exclusion_on_pointed_subsets(n, data):
    fam = InvariantFamily("linear", kappa=3.0)
    a = {0} | set(data.draw(st.sets(st.integers(1, n - 1))))
    b = {0} | set(data.draw(st.sets(st.integers(1, n - 1))))

    def value(s):
        return invariant_eval(fam, PointedSet(len(s)))

    assert value(a | b) + value(a & b) == value(a) + value(b)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_reduced_euler_inclusion_exclusion(seed):
    rng = random.Random(seed)
    cube = standard_cube(2, 2)

    def random_sub():
        seeds = {n: rng.sample(range(cube.sizes[n]), rng.randint(0, 2)) for n in range(3)}
        return generated_subcomplex(cube, seeds)

    a, b = random_sub(), random_sub()
    union = {n: a[n] | b[n] for n in a}
    inter = {n: a[n] & b[n] for n in a}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        chi = [reduced_euler(restrict(cube, s)) for s in (union, inter, a, b)]
    assert chi[0] + chi[1] == chi[2] + chi[3]
