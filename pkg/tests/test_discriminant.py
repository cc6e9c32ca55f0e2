import math

import pytest

from envlines import (
    assess_creativity,
    build_creator,
    compare_methods,
    discriminant_at,
    find_gauss_singular_points,
    parse_expression,
    sample_discriminant,
)

P = parse_expression

SQRT2 = math.sqrt(2.0)
KPI = [k * math.pi for k in range(-3, 4)]


def line_residual(line, x, y):
    return abs(x * line.nu[0] + y * line.nu[1] - line.offset)


class TestDiscriminantAt:
    def test_sine_tangent_whole_line_at_pi(self, sine_tangent):
        sl = discriminant_at(sine_tangent, math.pi)
        assert sl.kind == "whole_line"
        assert sl.line.nu[0] == pytest.approx(1.0 / SQRT2, abs=1e-12)
        assert sl.line.nu[1] == pytest.approx(1.0 / SQRT2, abs=1e-12)
        assert sl.line.offset == pytest.approx(math.pi / SQRT2, abs=1e-12)
        # the line Y = -X + pi
        assert line_residual(sl.line, 0.0, math.pi) <= 1e-9
        assert line_residual(sl.line, 1.0, math.pi - 1.0) <= 1e-9

    def test_sine_tangent_whole_line_at_zero(self, sine_tangent):
        sl = discriminant_at(sine_tangent, 0.0)
        assert sl.kind == "whole_line"
        # the line Y = X
        assert line_residual(sl.line, 0.0, 0.0) <= 1e-12
        assert line_residual(sl.line, 3.0, 3.0) <= 1e-12

    def test_parallel_shift_is_empty(self, parallel_shift):
        for t in (-0.9, 0.0, 0.62):
            assert discriminant_at(parallel_shift, t).kind == "empty"

    def test_regular_point_slice(self, sine_tangent):
        sl = discriminant_at(sine_tangent, math.pi / 2)
        assert sl.kind == "point"
        assert sl.point[0] == pytest.approx(math.pi / 2, abs=1e-9)
        assert sl.point[1] == pytest.approx(1.0, abs=1e-9)


class TestSampleDiscriminant:
    def test_sine_tangent_pollution(self, sine_tangent):
        disc = sample_discriminant(sine_tangent, 1001)
        assert len(disc.polluted_lines) == 7
        for (t, line), k in zip(disc.polluted_lines, range(-3, 4)):
            assert abs(t - k * math.pi) <= 1e-9
            if k % 2 == 0:  # Y = X - 2 k' pi with k = 2 k'
                assert line_residual(line, 0.0, -k * math.pi) <= 1e-9
                assert line_residual(line, 1.0, 1.0 - k * math.pi) <= 1e-9
            else:  # Y = -X + k pi
                assert line_residual(line, 0.0, k * math.pi) <= 1e-9
                assert line_residual(line, 1.0, k * math.pi - 1.0) <= 1e-9

    def test_sine_tangent_cloud_traces_sine(self, sine_tangent):
        disc = sample_discriminant(sine_tangent, 1001)
        assert len(disc.point_cloud) >= 1000
        for x, y in disc.point_cloud:
            assert abs(y - math.sin(x)) <= 1e-9

    def test_clairaut_pure_point_cloud(self, clairaut_parabola):
        disc = sample_discriminant(clairaut_parabola, 401)
        assert disc.polluted_lines == ()
        for x, y in disc.point_cloud:
            assert abs(y - (-x * x / 4.0)) <= 1e-9

    def test_still_family_all_whole_line(self, still_family):
        disc = sample_discriminant(still_family, 101)
        assert all(sl.kind == "whole_line" for sl in disc.slices)
        assert disc.point_cloud == ()

    def test_slices_ordered(self, sine_tangent):
        disc = sample_discriminant(sine_tangent, 101)
        ts = [sl.t for sl in disc.slices]
        assert ts == sorted(ts)


class TestCompareMethods:
    def test_sine_tangent_widespread_fails_at_singular_parameters(self, sine_tangent):
        report = assess_creativity(sine_tangent, 1001)
        creator = build_creator(sine_tangent, report)
        cmp = compare_methods(sine_tangent, creator, 1001)
        assert not cmp.widespread_ok
        assert len(cmp.failure_ts) == 7
        for t, expected in zip(cmp.failure_ts, KPI):
            assert abs(t - expected) <= 1e-9
        assert "fails" in cmp.narrative

    def test_clairaut_widespread_works(self, clairaut_parabola):
        report = assess_creativity(clairaut_parabola, 1001)
        creator = build_creator(clairaut_parabola, report)
        cmp = compare_methods(clairaut_parabola, creator, 1001)
        assert cmp.widespread_ok
        assert cmp.failure_ts == ()
        assert "non-singular" in cmp.narrative

    def test_quadratic_angle_fails_only_at_zero(self, quadratic_angle):
        report = assess_creativity(quadratic_angle, 1001)
        creator = build_creator(quadratic_angle, report)
        cmp = compare_methods(quadratic_angle, creator, 1001)
        assert not cmp.widespread_ok
        assert len(cmp.failure_ts) == 1 and abs(cmp.failure_ts[0]) <= 1e-9
        # the exact parametrization still gives the correct envelope there
        from envlines import envelope_point
        assert envelope_point(quadratic_angle, creator, 0.0).point == (0.0, 0.0)


class TestInvariants:
    def test_envelope_contained_in_discriminant(self, sine_tangent):
        report = assess_creativity(sine_tangent, 1001)
        creator = build_creator(sine_tangent, report)
        disc = sample_discriminant(sine_tangent, 1001)
        from envlines import envelope_point
        for sl in disc.slices:
            if sl.kind != "point":
                continue
            expected = envelope_point(sine_tangent, creator, sl.t).point
            assert abs(sl.point[0] - expected[0]) <= 1e-9
            assert abs(sl.point[1] - expected[1]) <= 1e-9

    def test_failure_locus_equals_singular_locus(self, sine_tangent):
        report = assess_creativity(sine_tangent, 1001)
        creator = build_creator(sine_tangent, report)
        failures = compare_methods(sine_tangent, creator, 1001).failure_ts
        singulars = [p.t for p in find_gauss_singular_points(sine_tangent, 1001)]
        assert len(failures) == len(singulars)
        for a, b in zip(failures, singulars):
            assert abs(a - b) <= 1e-10
