import cmath
import json
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from zetalink.curves import (
    CurveSpec,
    PrecondViolation,
    cremona_map,
    galois_conjugate_curve,
    stratum_representative,
    verify_hat,
)
from zetalink.cyclotomic import (
    CycloNumber,
    RootOfUnity,
    classify_root_of_unity,
    enumerate_strata,
    half_plane_class,
    stratum_realizable,
    zeta,
)
from zetalink.errors import ZetalinkError
from zetalink.holonomy import (
    BranchAmbiguity,
    BranchTrack,
    PathThroughCurve,
    TriangleCycle,
    embed_complex,
    lift_endpoint_check,
    linking_exact,
    linking_numeric,
    unordered_linking,
)
from zetalink.mpoly import LineForm, MPoly

from oracles import cyclo_to_complex

COORD_LINES = (LineForm(1, 0, 0), LineForm(0, 1, 0), LineForm(0, 0, 1))


def standard_conic() -> CurveSpec:
    """Restrictions (y+z)^2, (x+z)^2, (x-y)^2 on the coordinate triangle."""
    f = MPoly.zero(2)
    for e, c in [
        ((2, 0, 0), 1),
        ((0, 2, 0), 1),
        ((0, 0, 2), 1),
        ((1, 1, 0), -2),
        ((1, 0, 1), 2),
        ((0, 1, 1), 2),
    ]:
        f = f + MPoly.monomial(e, c)
    return CurveSpec(family="hat", d=2, main=f, lines=COORD_LINES, conductor=2)


def standard_cubic() -> CurveSpec:
    """Restrictions (y+z)^3, (x+z)^3, (x + zeta3*y)^3 on the coordinate triangle."""
    w = zeta(3, 1)
    three = CycloNumber.from_rational(3, 3)
    f = MPoly.zero(3)
    for e, c in [
        ((3, 0, 0), 1),
        ((0, 3, 0), 1),
        ((0, 0, 3), 1),
        ((0, 2, 1), 3),
        ((0, 1, 2), 3),
        ((2, 0, 1), 3),
        ((1, 0, 2), 3),
    ]:
        f = f + MPoly.monomial(e, c)
    f = f + MPoly.monomial((2, 1, 0), w * three)
    f = f + MPoly.monomial((1, 2, 0), w * w * three)
    return CurveSpec(family="hat", d=3, main=f, lines=COORD_LINES, conductor=3)


def realizable_representatives(max_d):
    for d in range(2, max_d + 1):
        for root in enumerate_strata(d):
            if stratum_realizable(d, root):
                yield d, root


# ---------------------------------------------------------------------------
# the cycle object
# ---------------------------------------------------------------------------


class TestTriangleCycle:
    def test_coordinate_triangle_gives_standard_trajectory(self):
        cycle = TriangleCycle.from_lines(COORD_LINES)
        expected = ((0, 1, 0), (0, 0, 1), (1, 0, 0))
        for vertex, ints in zip(cycle.vertices, expected):
            assert tuple(c.as_rational() for c in vertex) == ints
        assert cycle.base_index == 0

    def test_vertices_must_sit_on_their_lines(self):
        good = TriangleCycle.from_lines(COORD_LINES)
        scrambled = (good.vertices[1], good.vertices[0], good.vertices[2])
        with pytest.raises(PrecondViolation):
            TriangleCycle(lines=COORD_LINES, vertices=scrambled)

    def test_concurrent_lines_rejected(self):
        lines = (LineForm(1, 0, 0), LineForm(0, 1, 0), LineForm(1, 1, 0))
        with pytest.raises(PrecondViolation):
            TriangleCycle.from_lines(lines)

    def test_base_index_validated(self):
        with pytest.raises(PrecondViolation):
            TriangleCycle.from_lines(COORD_LINES, base_index=3)

    def test_json_dump(self):
        cycle = TriangleCycle.from_lines(COORD_LINES, base_index=2)
        blob = json.dumps(cycle.to_json())
        assert '"base_index": 2' in blob


# ---------------------------------------------------------------------------
# exact route
# ---------------------------------------------------------------------------


class TestExactLinking:
    def test_standard_cubic_links_to_zeta3(self):
        assert linking_exact(standard_cubic()) == RootOfUnity(3, 1)

    def test_standard_cubic_lift_endpoints(self):
        c = standard_cubic()
        one = CycloNumber.from_rational(1)
        nil = CycloNumber.from_rational(0)
        assert lift_endpoint_check(c, 1) == (nil, nil, one, one)
        assert lift_endpoint_check(c, 2) == (one, nil, nil, one)
        end = lift_endpoint_check(c, 3)
        assert end[:3] == (nil, one, nil)
        assert end[3] == zeta(3, 1)

    def test_lift_segment_argument_checked(self):
        with pytest.raises(PrecondViolation):
            lift_endpoint_check(standard_conic(), 0)

    def test_conic_with_tangent_triangle_links_to_minus_one(self):
        assert linking_exact(standard_conic()) == RootOfUnity(2, 1)

    def test_conic_recovered_through_degree_two_transforms(self):
        # push the conic to its degree-4 partner and back; the invariant
        # of the roundtrip curve is still -1
        quartic = cremona_map(standard_conic())
        back = cremona_map(quartic)
        assert back.d == 2
        assert linking_exact(back) == RootOfUnity(2, 1)

    def test_reverse_orientation_inverts(self):
        c = standard_cubic()
        assert linking_exact(c, reverse=True) == RootOfUnity(3, 2)

    def test_unordered_pair_folds_orientation(self):
        pair = unordered_linking(standard_cubic())
        assert pair == frozenset({RootOfUnity(3, 1), RootOfUnity(3, 2)})
        assert unordered_linking(standard_conic()) == frozenset({RootOfUnity(2, 1)})

    @pytest.mark.parametrize("d,root", list(realizable_representatives(5)))
    def test_class_agrees_with_certificate_label(self, d, root):
        c = stratum_representative(d, root)
        cert = verify_hat(c)
        oriented = linking_exact(c, cert)
        assert half_plane_class(oriented, d) == cert.label.zeta == root

    def test_representative_orientations_frozen(self):
        assert linking_exact(stratum_representative(2, RootOfUnity(2, 1))) == RootOfUnity(2, 1)
        assert linking_exact(stratum_representative(3, RootOfUnity(3, 1))) == RootOfUnity(3, 2)
        assert linking_exact(stratum_representative(4, RootOfUnity(4, 1))) == RootOfUnity(4, 3)

    def test_lift_ratios_multiply_to_the_invariant(self):
        c = stratum_representative(4, RootOfUnity(4, 1))
        product = CycloNumber.from_rational(1)
        for segment in (1, 2, 3):
            product = product * lift_endpoint_check(c, segment)[3]
        assert classify_root_of_unity(product) == linking_exact(c)

    def test_conjugating_coefficients_inverts_holonomy(self):
        c = stratum_representative(5, RootOfUnity(5, 1))
        oriented = linking_exact(c)
        mirrored = galois_conjugate_curve(c, -1)
        assert linking_exact(mirrored) == oriented.inverse()

    def test_field_automorphism_powers_holonomy(self):
        c = stratum_representative(5, RootOfUnity(5, 1))
        oriented = linking_exact(c)
        moved = galois_conjugate_curve(c, 7)
        expected = RootOfUnity(oriented.order, 7 * oriented.exponent)
        assert linking_exact(moved) == expected


# ---------------------------------------------------------------------------
# numeric route (independent of the exact one; they must agree)
# ---------------------------------------------------------------------------


def eval_main_numeric(c: CurveSpec, point) -> complex:
    x, y, z = point
    total = 0j
    for (i, j, k), coeff in c.main.terms.items():
        total += cyclo_to_complex(coeff) * x**i * y**j * z**k
    return total


class TestNumericLinking:
    def test_conic_estimate_is_minus_one(self):
        value, _ = linking_numeric(standard_conic())
        assert abs(value - (-1.0)) < 1e-8

    def test_cubic_estimate_is_primitive_third_root(self):
        value, _ = linking_numeric(standard_cubic())
        assert abs(value - cmath.exp(2j * cmath.pi / 3)) < 1e-8

    @pytest.mark.parametrize("d,root", list(realizable_representatives(4)))
    def test_agrees_with_exact_route(self, d, root):
        c = stratum_representative(d, root)
        oriented = linking_exact(c)
        value, _ = linking_numeric(c)
        target = cmath.exp(2j * cmath.pi * oriented.exponent / oriented.order)
        assert abs(value - target) < 1e-8

    def test_agrees_with_exact_route_degree_six(self):
        c = stratum_representative(6, RootOfUnity(6, 1))
        oriented = linking_exact(c)
        value, _ = linking_numeric(c)
        target = cmath.exp(2j * cmath.pi * oriented.exponent / oriented.order)
        assert abs(value - target) < 1e-8

    def test_track_satisfies_cover_equation(self):
        c = standard_cubic()
        _, track = linking_numeric(c)
        assert track.degree == 3
        assert len(track.branches) == len(track.samples)
        scale = max(abs(eval_main_numeric(c, p)) for _, p, _ in track.samples)
        for _, position, t in track.samples:
            assert abs(t**3 - eval_main_numeric(c, position)) < 1e-8 * scale

    def test_track_branch_jumps_stay_under_margin(self):
        c = stratum_representative(6, RootOfUnity(6, 1))
        _, track = linking_numeric(c)
        margin = math.sin(math.pi / 6)
        pairs = zip(track.samples, track.samples[1:])
        for (_, _, t0), (_, _, t1) in pairs:
            assert abs(t1 - t0) < margin * max(abs(t0), abs(t1)) + 1e-12

    def test_track_json_dump(self):
        _, track = linking_numeric(standard_conic(), steps=8)
        blob = json.loads(json.dumps(track.to_json()))
        assert blob["degree"] == 2
        assert len(blob["samples"]) == len(blob["branches"])
        assert {"s", "position", "t"} <= set(blob["samples"][0])

    def test_estimate_stable_under_refinement(self):
        c = standard_cubic()
        coarse, _ = linking_numeric(c, steps=64)
        fine, _ = linking_numeric(c, steps=128)
        assert abs(coarse - fine) < 1e-10

    def test_bisection_heals_coarse_sampling(self):
        c = stratum_representative(6, RootOfUnity(6, 1))
        coarse, _ = linking_numeric(c, steps=4)
        fine, _ = linking_numeric(c, steps=64)
        assert abs(coarse - fine) < 1e-10

    def test_depth_cap_reports_ambiguity(self):
        c = stratum_representative(6, RootOfUnity(6, 1))
        with pytest.raises(BranchAmbiguity):
            linking_numeric(c, steps=4, max_depth=0)

    def test_detour_side_is_irrelevant(self):
        value_up, _ = linking_numeric(standard_conic(), bulge=0.5)
        value_down, _ = linking_numeric(standard_conic(), bulge=-0.5)
        assert abs(value_up - value_down) < 1e-10

    def test_ten_random_path_perturbations(self):
        c = stratum_representative(5, RootOfUnity(5, 1))
        base, _ = linking_numeric(c)
        rng = random.Random(7)
        for _ in range(10):
            bulge = rng.uniform(0.2, 1.2) * rng.choice([1, -1])
            warp = rng.uniform(-0.4, 0.4)
            value, _ = linking_numeric(c, bulge=bulge, warp=warp)
            assert abs(value - base) < 1e-8

    @settings(max_examples=15, deadline=None)
    @given(
        bulge=st.floats(min_value=0.15, max_value=1.5),
        flip=st.booleans(),
        warp=st.floats(min_value=-0.4, max_value=0.4),
    )
    def test_any_reasonable_detour_finds_minus_one(self, bulge, flip, warp):
        value, _ = linking_numeric(
            standard_conic(), bulge=-bulge if flip else bulge, warp=warp
        )
        assert abs(value - (-1.0)) < 1e-8

    def test_reverse_traversal_gives_inverse(self):
        forward, _ = linking_numeric(standard_cubic())
        backward, _ = linking_numeric(standard_cubic(), reverse=True)
        assert abs(forward * backward - 1.0) < 1e-10

    def test_base_vertex_choice_is_immaterial(self):
        c = standard_cubic()
        reference, _ = linking_numeric(c)
        for base_index in (1, 2):
            cycle = TriangleCycle.from_lines(c.lines, base_index=base_index)
            value, _ = linking_numeric(c, cycle=cycle)
            assert abs(value - reference) < 1e-10

    def test_straight_path_through_tangency_is_refused(self):
        # the third tangency of the standard conic sits at [1:1:0], exactly
        # on the real chord between [1:0:0] and [0:1:0]
        with pytest.raises(PathThroughCurve):
            linking_numeric(standard_conic(), bulge=0.0)

    def test_only_triangle_curves_accepted(self):
        quartic = cremona_map(standard_conic())
        with pytest.raises(PrecondViolation):
            linking_numeric(quartic)
        with pytest.raises(PrecondViolation):
            linking_exact(quartic)

    def test_step_floor_enforced(self):
        with pytest.raises(PrecondViolation):
            linking_numeric(standard_conic(), steps=2)

    def test_cycle_must_match_curve_lines(self):
        other = TriangleCycle.from_lines(
            (LineForm(1, 0, 0), LineForm(0, 1, 0), LineForm(1, 1, 1))
        )
        with pytest.raises(PrecondViolation):
            linking_numeric(standard_conic(), cycle=other)


class TestEmbedding:
    def test_matches_independent_evaluation(self):
        samples = [
            zeta(3, 1),
            zeta(8, 3) + zeta(8, 5),
            CycloNumber.from_rational(-7, 12),
            zeta(5, 2) * zeta(5, 4),
        ]
        for value in samples:
            assert abs(embed_complex(value) - cyclo_to_complex(value)) < 1e-12

    def test_rational_values_are_real(self):
        assert embed_complex(CycloNumber.from_rational(3, 6)) == pytest.approx(3.0)
