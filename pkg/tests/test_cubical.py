import json
import random
import warnings
from dataclasses import replace
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from probgamma.cubical import (
    FunctorSpec,
    ProbCubicalSet,
    TruncationWarning,
    brute_force_level_size,
    circle,
    commutes_with_structure,
    cubical_nerve,
    degenerate_mask,
    discrete,
    discrete_category,
    euler_report,
    export_complex,
    import_complex,
    nerve_map,
    nondegenerate_count,
    one_object_group,
    prob_cubical_ops,
    reduced_euler,
    relation_instances,
    smash_cubical,
    sphere,
    standard_cube,
    trivial_category,
    validate_cubical,
)
from probgamma.errors import ExplosionGuard, InvalidCategory, ParseError, RelationViolated


def quiet_euler(k):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return reduced_euler(k)


class TestRelations:

    def test_every_instance_holds_on_the_cube(self):
        rels = relation_instances(3)
        assert rels
        assert all(r.holds_geometrically() for r in rels)

    def test_model_objects_validate(self):
        for k in (standard_cube(2, 2), standard_cube(1, 3), discrete(4), circle(2), sphere(2)):
            validate_cubical(k)

    def test_swapped_faces_rejected(self):
        k = standard_cube(2, 2)
        f1, f2 = list(k.face[(2, 1, 0)]), list(k.face[(2, 2, 0)])
        cell = next(c for c in range(k.sizes[2]) if f1[c] != f2[c])
        f1[cell], f2[cell] = f2[cell], f1[cell]
        face = dict(k.face)
        face[(2, 1, 0)], face[(2, 2, 0)] = tuple(f1), tuple(f2)
        with pytest.raises(RelationViolated) as ei:
            validate_cubical(replace(k, face=face))
        assert ei.value.detail["relation"]

    def test_basepoint_must_be_fixed(self):
        k = discrete(3)
        face = dict(k.face)
        face[(1, 1, 0)] = (1, 1, 2)
        with pytest.raises(RelationViolated):
            validate_cubical(replace(k, face=face))

    def test_table_shape_checked(self):
        k = discrete(3)
        with pytest.raises(ValueError):
            replace(k, degen={**k.degen, (1, 1): (0, 1)})


class TestNerve:

    def test_trivial(self):
        k = cubical_nerve(trivial_category(), 2)
        assert k.sizes == (1, 1, 1)
        assert nondegenerate_count(k) == [1, 0, 0]
        assert quiet_euler(k) == 0

    def test_discrete_two_objects(self):
        k = cubical_nerve(discrete_category(2), 2)
        assert k.sizes == (2, 2, 2)
        assert nondegenerate_count(k) == [2, 0, 0]
        assert quiet_euler(k) == 1

    def test_z2(self):
        k = validate_cubical(cubical_nerve(one_object_group(2), 2))
        assert k.sizes == (1, 2, 8)
        assert [brute_force_level_size(one_object_group(2), n) for n in range(3)] == [1, 2, 8]
        with pytest.warns(TruncationWarning):
            assert reduced_euler(k) == 3

    def test_brute_force_agrees_on_z3(self):
        cat = one_object_group(3)
        k = cubical_nerve(cat, 2)
        assert list(k.sizes) == [brute_force_level_size(cat, n) for n in range(3)]

    def test_explosion_guard(self):
        with pytest.raises(ExplosionGuard) as ei:
            cubical_nerve(one_object_group(5), 3, bound=1000)
        assert ei.value.detail["level"] == 3

    def test_invalid_category(self):
        cat = one_object_group(2)
        bad = replace(cat, compose={**cat.compose, ("g1", "e"): "e"})
        with pytest.raises(InvalidCategory):
            bad.validate()
        cat.validate()

    def test_functor_induces_nerve_map(self):
        fun = FunctorSpec(one_object_group(4), one_object_group(2), {"*": "*"},
                          {"e": "e", "g1": "g1", "g2": "e", "g3": "g1"})
        tables, k, k2 = nerve_map(fun, 2)
        assert commutes_with_structure(tables, k, k2)

    def test_broken_map_detected(self):
        fun = FunctorSpec(one_object_group(2), one_object_group(2), {"*": "*"}, {"e": "e", "g1": "g1"})
        tables, k, k2 = nerve_map(fun, 2)
        broken = [list(t) for t in tables]
        broken[1] = [broken[1][1], broken[1][0]]
        assert not commutes_with_structure(broken, k, k2)


class TestEuler:

    def test_discrete(self):
        assert reduced_euler(discrete(4)) == 3
        assert euler_report(discrete(4)).counts == (4, 0, 0)

    def test_circle(self):
        rep = euler_report(circle())
        assert (rep.chi, rep.reduced) == (0, -1)

    def test_spheres(self):
        assert reduced_euler(sphere(2)) == 1
        assert reduced_euler(standard_cube(2, 2)) == 0

    def test_truncation_warning(self):
        k = cubical_nerve(one_object_group(2), 1)
        with pytest.warns(TruncationWarning):
            reduced_euler(k)
        assert euler_report(k).truncated

    def test_degeneracy_images_are_degenerate(self):
        k = cubical_nerve(one_object_group(3), 2)
        mask = degenerate_mask(k, 2)
        for i in (1, 2):
            assert mask[list(k.degen[(2, i)])].all()
        assert mask[list(k.conn[(2, 1)])].all()
        assert not degenerate_mask(k, 0).any()

    def test_degeneracy_then_face_is_identity(self):
        k = cubical_nerve(one_object_group(3), 2)
        for i in (1, 2):
            for a in (0, 1):
                for x in range(k.sizes[1]):
                    assert k.face[(2, i, a)][k.degen[(2, i)][x]] == x


class TestSmash:

    def test_discrete_sizes_multiply(self):
        s = validate_cubical(smash_cubical(discrete(3), discrete(4)))
        assert s.sizes[0] == 7 and reduced_euler(s) == 6

    def test_unit(self):
        k = cubical_nerve(one_object_group(2), 2)
        s = smash_cubical(k, discrete(2))
        assert s.sizes == k.sizes
        validate_cubical(s)

    def test_zero_absorbs(self):
        s = smash_cubical(discrete(1), sphere(2))
        assert s.sizes == (1, 1, 1)

    def test_nerves_validate(self):
        validate_cubical(smash_cubical(cubical_nerve(one_object_group(2), 2), sphere(1, 2)))

    def test_probabilistic(self):
        a = ProbCubicalSet((F(1, 2), F(1, 2)), (discrete(3), discrete(2)))
        b = ProbCubicalSet((F(1, 3), F(2, 3)), (discrete(4), discrete(2)))
        c = prob_cubical_ops(a, b)
        assert c.weights == (F(1, 6), F(1, 3), F(1, 6), F(1, 3))
        assert [k.sizes[0] - 1 for k in c.sets] == [6, 2, 3, 1]
        assert c.labels == ("0|0", "0|1", "1|0", "1|1")

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            ProbCubicalSet((F(1, 2), F(1, 3)), (discrete(2), discrete(2)))


class TestExport:

    @pytest.mark.parametrize("cat", [trivial_category(), discrete_category(2), one_object_group(2)])
    def test_roundtrip(self, cat):
        k = cubical_nerve(cat, 2)
        data = json.loads(json.dumps(export_complex(k)))
        assert import_complex(data) == k
        assert data["levels"][0]["base"] == k.base[0]

    def test_bad_format(self):
        with pytest.raises(ParseError):
            import_complex({"format": "other"})
        data = export_complex(discrete(2))
        del data["faces"]
        with pytest.raises(ParseError):
            import_complex(data)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6))
def test_reduced_euler_multiplies_on_discrete_smash(n, m):
    a, b = discrete(n), discrete(m)
    assert reduced_euler(smash_cubical(a, b)) == reduced_euler(a) * reduced_euler(b)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_degenerate_detection_idempotent(seed):
    rng = random.Random(seed)
    k = rng.choice([standard_cube(2, 2), sphere(2), cubical_nerve(one_object_group(2), 2)])
    m1 = degenerate_mask(k, 2)
    assert (m1 == degenerate_mask(k, 2)).all()
    x = rng.randrange(k.sizes[1])
    assert m1[k.degen[(2, rng.choice((1, 2)))][x]]
