import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from probgamma.errors import (
    ColumnNotStochastic,
    InvalidProbability,
    MeasureNotPreserved,
    NegativeEntry,
    SourceTargetMismatch,
    TargetMismatch,
)
from probgamma.finprob import (
    FiniteProbability,
    StochasticMorphism,
    as_fraction,
    compose,
    copair_search,
    coproduct_morphisms,
    coproduct_objects,
    from_point,
    identity,
    injections,
    marginals,
    point,
    target_morphism,
    to_point,
    validate,
)
from probgamma.sampling import random_morphism_between, random_morphism_from, random_probability


def fp(*probs):
    return FiniteProbability.from_probs([F(p) for p in probs])


HALF = fp("1/2", "1/2")


class TestObjects:

    def test_rejects_bad_vectors(self):
        with pytest.raises(InvalidProbability):
            fp("1/2", "1/3")
        with pytest.raises(InvalidProbability):
            fp("3/2", "-1/2")
        with pytest.raises(InvalidProbability):
            FiniteProbability(("a", "a"), (F(1, 2), F(1, 2)))

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            as_fraction(0.5)
        with pytest.raises(ValueError):
            as_fraction("0.5")

    def test_support(self):
        assert fp("1/2", 0, "1/2").support == (0, 2)


class TestValidate:

    def test_identity_case(self):
        s = validate([[1, 0], [0, 1]], HALF, HALF)
        assert s.is_column_stochastic and s.preserves_measure

    def test_unique_map_to_point(self):
        validate([[1, 1]], fp("1/3", "2/3"), point())

    def test_measure_not_preserved(self):
        with pytest.raises(MeasureNotPreserved) as ei:
            validate([["1/2", "1/2"], ["1/2", "1/2"]], HALF, fp("1/3", "2/3"))
        assert ei.value.detail["row"] == 0

    def test_negative_entry_reports_first_index(self):
        with pytest.raises(NegativeEntry) as ei:
            validate([[1, 2], [0, -1]], HALF, HALF)
        assert (ei.value.detail["row"], ei.value.detail["col"]) == (1, 1)

    def test_column_not_stochastic(self):
        with pytest.raises(ColumnNotStochastic) as ei:
            validate([[1, "1/2"], [0, "1/4"]], HALF, HALF)
        assert ei.value.detail["col"] == 1

    def test_shape(self):
        with pytest.raises(ValueError):
            validate([[1, 0]], HALF, HALF)

    def test_perturbed_point_map_rejected(self):
        with pytest.raises(ColumnNotStochastic):
            validate([[1, "1/2"]], HALF, point())


class TestComposition:

    def test_identity_is_unit(self):
        rng = random.Random(0)
        p = random_probability(rng, 3)
        s = random_morphism_from(rng, p, 2)
        assert compose(identity(s.target), s).matrix == s.matrix
        assert compose(s, identity(p)).matrix == s.matrix

    def test_mismatch(self):
        s = identity(HALF)
        with pytest.raises(SourceTargetMismatch):
            compose(s, identity(fp("1/3", "2/3")))

    def test_point_map_absorbs(self):
        rng = random.Random(1)
        p = random_probability(rng, 3)
        s = random_morphism_from(rng, p, 4)
        assert compose(to_point(s.target), s).matrix == to_point(p).matrix

    def test_target_morphism_absorbs_on_the_right(self):
        rng = random.Random(2)
        p, q = random_probability(rng, 2), random_probability(rng, 3)
        s = random_morphism_from(rng, random_probability(rng, 4, prefix="w"), 2, prefix="")
        s = random_morphism_between(rng, s.source, p)
        qhat = target_morphism(p, q)
        assert compose(qhat, s).matrix == target_morphism(s.source, q).matrix


class TestTargetMorphism:

    def test_from_point(self):
        assert from_point(fp("1/3", "2/3")).matrix == ((F(1, 3),), (F(2, 3),))

    def test_columns_equal_target(self):
        m = target_morphism(HALF, fp("1/3", "2/3"))
        assert m.matrix == ((F(1, 3), F(1, 3)), (F(2, 3), F(2, 3)))
        assert m.preserves_measure

    def test_to_point_is_all_ones(self):
        assert to_point(fp("1/4", "1/4", "1/2")).matrix == ((1, 1, 1),)


class TestCoproduct:

    def test_objects(self):
        assert coproduct_objects(point(), fp("1/3", "2/3")).probs == (F(1, 3), F(2, 3))
        assert coproduct_objects(HALF, HALF).probs == (F(1, 4),) * 4
        pp = coproduct_objects(fp("1/3", "2/3"), fp("1/4", "3/4"))
        assert pp.probs == (F(1, 12), F(1, 4), F(1, 6), F(1, 2))
        assert pp.labels == ("0|0", "0|1", "1|0", "1|1")

    def test_copair_positive_branch(self):
        s = validate([["1/2"], ["1/2"]], point(), HALF)
        cp = coproduct_morphisms(s, s)
        assert cp.copair.matrix == ((F(1, 2),), (F(1, 2),))

    def test_copair_zero_branch(self):
        y = fp(1, 0)
        s = validate([[1], [0]], point(), y)
        cp = coproduct_morphisms(s, s)
        assert cp.copair.matrix == ((F(1),), (F(0),))
        assert cp.copair.is_column_stochastic

    def test_zero_branch_can_break_stochasticity(self):
        # a source term of mass zero may still send mass to a zero-weight row
        x = fp(1, 0)
        y = fp(1, 0)
        s = validate([[1, 0], [0, 1]], x, y)
        cp = coproduct_morphisms(s, s)
        assert compose(cp.copair, cp.inj1).matrix == s.matrix
        assert not cp.copair.is_column_stochastic

    def test_identity_copair_matches_grid_search(self):
        s = identity(HALF)
        cp = coproduct_morphisms(s, s)
        assert cp.copair.matrix == ((2, 0, 0, 0), (0, 0, 0, 2))
        assert cp.copair.preserves_measure and not cp.copair.is_column_stochastic
        # the commuting triangles alone pin the matrix down on this grid
        assert copair_search(s, s, 2, max_entry=F(2), stochastic=False) == [cp.copair.matrix]
        assert copair_search(s, s, 2, max_entry=F(2)) == []

    def test_target_mismatch(self):
        with pytest.raises(TargetMismatch):
            coproduct_morphisms(identity(HALF), identity(fp("1/3", "2/3")))


probs = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.integers(0, 12), min_size=n, max_size=n).filter(any).map(
        lambda xs: FiniteProbability.from_probs([F(x, sum(xs)) for x in xs])))


@settings(max_examples=60, deadline=None)
@given(probs, probs)
def test_marginals_recover_factors(p, q):
    assert marginals(coproduct_objects(p, q), len(p), len(q)) == (p.probs, q.probs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_universal_property_and_transport(seed):
    rng = random.Random(seed)
    p = random_probability(rng, rng.randint(1, 4), zero_prob=0.3)
    m = rng.randint(1, 4)
    s = random_morphism_from(rng, p, m, zero_rows=[0] if m > 1 and seed % 3 == 0 else [])
    s2 = random_morphism_between(rng, random_probability(rng, rng.randint(1, 4), zero_prob=0.3), s.target)
    cp = coproduct_morphisms(s, s2)
    assert compose(cp.copair, cp.inj1).matrix == s.matrix
    assert compose(cp.copair, cp.inj2).matrix == s2.matrix
    assert cp.copair.preserves_measure


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_composition_associative(seed):
    rng = random.Random(seed)
    p = random_probability(rng, rng.randint(1, 4))
    a = random_morphism_from(rng, p, rng.randint(1, 4), prefix="b")
    b = random_morphism_from(rng, a.target, rng.randint(1, 4), prefix="c")
    c = random_morphism_from(rng, b.target, rng.randint(1, 4), prefix="d")
    assert compose(c, compose(b, a)).matrix == compose(compose(c, b), a).matrix
    validate(compose(c, compose(b, a)).matrix, p, c.target)


def test_injections_validate():
    i1, i2 = injections(fp("1/3", "2/3"), HALF)
    assert isinstance(i1, StochasticMorphism) and i1.is_column_stochastic and i2.preserves_measure
    assert i1.matrix[1] == (F(1, 2), 0)
