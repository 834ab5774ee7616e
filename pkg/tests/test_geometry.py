import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conerank.geometry import (
    GeometryError,
    dual_cone,
    ImproperConeError,
    NoInteriorError,
    PolyhedralCone,
    WeightBounds,
    cone_from_config,
    cone_from_weight_bounds,
    leq_cone,
    lt_cone,
    weight_polytope_vertices,
)
from conerank.rationals import dot

from helpers import random_pointed_cone


class TestDualCone:
    def test_orthant_self_dual(self):
        c = PolyhedralCone.orthant(2)
        assert c.dual().same_cone(c)
        c3 = PolyhedralCone.orthant(3)
        assert c3.dual().same_cone(c3)

    def test_halfspace_dual_is_ray(self):
        h = PolyhedralCone.halfspace((1, 1))
        d = h.dual()
        assert d.rays == ((1, 1),)
        assert d.pointed

    def test_rays_and_normals_swap(self):
        c = PolyhedralCone.from_rays([(2, 1), (1, 3)])
        d = dual_cone(c)
        assert d.rays == c.facet_normals
        assert d.facet_normals == c.rays
        assert dual_cone(d).same_cone(c)

    def test_panel_weight_cone(self):
        # dual generated by (0.7, 0.3) and (0.8, 0.2); the primal rays solve
        # 0.7 z1 + 0.3 z2 = 0 and 0.8 z1 + 0.2 z2 = 0 with the opposite
        # normal nonnegative on each
        c = PolyhedralCone.from_dual_rays([("0.7", "0.3"), ("0.8", "0.2")])
        assert set(c.facet_normals) == {(7, 3), (4, 1)}
        assert set(c.rays) == {(3, -7), (-1, 4)}
        for r in c.rays:
            assert dot((7, 3), r) >= 0 and dot((4, 1), r) >= 0

    def test_double_dual_reproduces_cone(self):
        rng = random.Random(5)
        for d in (2, 3, 4):
            for _ in range(8):
                c = random_pointed_cone(rng, d)
                assert c.dual().dual().same_cone(c)

    def test_double_dual_nonpointed(self):
        c = PolyhedralCone.from_rays([(1, 0, 0), (-1, 0, 0), (0, 1, 0)])
        assert c.dual().dual().same_cone(c)

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            PolyhedralCone.from_rays([(1, 0), (0, 1, 1)])

    def test_nesting_reverses_under_duality(self):
        rng = random.Random(9)
        for _ in range(12):
            d = rng.choice((2, 3))
            small = random_pointed_cone(rng, d)
            extra = tuple(rng.randint(-3, 3) for _ in range(d))
            if not any(extra):
                continue
            big = PolyhedralCone.from_rays(list(small.rays) + [extra], dim=d)
            # C subset D  =>  dual(D) subset dual(C), via generator membership
            assert all(big.contains(r) for r in small.rays)
            assert all(small.dual().contains(n) for n in big.facet_normals)


class TestConeFlags:
    def test_pointed_and_full(self):
        orth = PolyhedralCone.orthant(3)
        assert orth.pointed and orth.full_dimensional
        half = PolyhedralCone.halfspace((0, 1))
        assert not half.pointed and half.full_dimensional
        ray = PolyhedralCone.from_rays([(1, 1)])
        assert ray.pointed and not ray.full_dimensional

    def test_trivial_cones_representable_but_rejected_for_ranking(self):
        zero = PolyhedralCone.from_rays([], dim=2)
        assert not zero.proper
        with pytest.raises(ImproperConeError):
            zero.require_ranking_usable()
        space = zero.dual()
        assert not space.proper
        assert space.same_cone(PolyhedralCone.from_rays([(1, 0), (-1, 0), (0, 1), (0, -1)]))


class TestOrder:
    def test_componentwise(self):
        orth = PolyhedralCone.orthant(2)
        assert leq_cone(orth, (0, 0), (1, 1))
        assert not leq_cone(orth, (1, 0), (0, 1))
        assert not leq_cone(orth, (0, 1), (1, 0))

    def test_compensation_under_weight_bound_cone(self):
        cone = cone_from_weight_bounds(WeightBounds(["0.7", "0"], ["0.8", "1"]))
        # 0.7*(-1) + 0.3*4 = 0.5 >= 0 and 0.8*(-1) + 0.2*4 = 0 >= 0
        assert leq_cone(cone, (0, 0), (-1, 4))
        assert not leq_cone(PolyhedralCone.orthant(2), (0, 0), (-1, 4))

    def test_strict_needs_interior(self):
        ray = PolyhedralCone.from_rays([(1, 1)])
        with pytest.raises(NoInteriorError):
            lt_cone(ray, (0, 0), (1, 1))

    def test_strict_orthant(self):
        orth = PolyhedralCone.orthant(2)
        assert lt_cone(orth, (0, 0), (1, 1))
        assert not lt_cone(orth, (0, 0), (1, 0))

    @settings(max_examples=60, derandomize=True)
    @given(st.data())
    def test_order_contract(self, data):
        rng = random.Random(data.draw(st.integers(0, 10**6)))
        d = rng.choice((2, 3))
        cone = random_pointed_cone(rng, d)
        pts = [tuple(rng.randint(-6, 6) for _ in range(d)) for _ in range(3)]
        x, y, z = pts
        assert leq_cone(cone, x, x)  # reflexive
        if leq_cone(cone, x, y) and leq_cone(cone, y, z):
            assert leq_cone(cone, x, z)  # transitive
        if leq_cone(cone, x, y):
            shift = tuple(rng.randint(-4, 4) for _ in range(d))
            assert leq_cone(
                cone,
                tuple(a + s for a, s in zip(x, shift)),
                tuple(b + s for b, s in zip(y, shift)),
            )
            s = rng.randint(0, 4)
            assert leq_cone(
                cone, tuple(s * a for a in x), tuple(s * b for b in y)
            )


class TestWeightBounds:
    def test_panel_example(self):
        cone = cone_from_weight_bounds(WeightBounds(["0.7", "0"], ["0.8", "1"]))
        assert set(cone.facet_normals) == {(7, 3), (4, 1)}

    def test_unconstrained_gives_orthant(self):
        for d in (2, 3, 4):
            cone = cone_from_weight_bounds(WeightBounds([0] * d, [1] * d))
            assert cone.same_cone(PolyhedralCone.orthant(d))

    def test_d3_box_vertices(self):
        # w in the simplex with 0.2 <= w_i <= 0.5: the vertices are the six
        # permutations of (1/5, 3/10, 1/2), derived by hand: a vertex pins
        # two coordinates at bounds and the free one picks up the remainder
        verts = weight_polytope_vertices(
            WeightBounds(["0.2"] * 3, ["0.5"] * 3)
        )
        f = Fraction
        expected = set()
        import itertools

        for p in itertools.permutations((f(1, 5), f(3, 10), f(1, 2))):
            expected.add(p)
        assert set(verts) == expected
        # exact certificate: every vertex is feasible with >= d-1 active bounds
        for v in verts:
            assert sum(v) == 1
            active = sum(1 for c in v if c in (f(1, 5), f(1, 2)))
            assert active >= 2

    def test_infeasible(self):
        with pytest.raises(ImproperConeError):
            WeightBounds(["0.6", "0.6"], ["0.8", "0.8"])  # sum of mins > 1
        with pytest.raises(ImproperConeError):
            WeightBounds([0, 0], ["0.3", "0.3"])  # sum of maxs < 1
        with pytest.raises(ImproperConeError):
            WeightBounds(["0.5", "0.2"], ["0.4", "0.8"])  # min > max

    def test_pinned_weight_gives_halfspace(self):
        cone = cone_from_weight_bounds(WeightBounds(["0.5", "0.5"], ["0.5", "0.5"]))
        assert cone.same_cone(PolyhedralCone.halfspace((1, 1)))


class TestConfig:
    def test_three_forms(self):
        by_rays = cone_from_config({"rays": [[1, 0], [0, 1]]})
        by_dual = cone_from_config({"dual_rays": [[1, 0], [0, 1]]})
        by_wb = cone_from_config({"weight_bounds": {"min": [0, 0], "max": [1, 1]}})
        assert by_rays.same_cone(by_dual)
        assert by_rays.same_cone(by_wb)

    def test_exactly_one_key(self):
        with pytest.raises(GeometryError):
            cone_from_config({"rays": [[1, 0]], "dual_rays": [[1, 0]]})
        with pytest.raises(GeometryError):
            cone_from_config({})
