import math

import numpy as np
import pytest

from ptwell import (
    ComplexRegion,
    ContourError,
    ConvergenceError,
    InvalidModelError,
    ScanConfig,
    WellParameters,
    breaking_search,
    compute_spectrum,
    locate_complex_zero,
    winding_count,
)


class TestComplexRegion:
    @pytest.mark.parametrize(
        "bounds",
        [
            (-1.0, 2.0, -0.5, 0.5),  # touches the origin's artificial zero
            (0.0, 2.0, -0.5, 0.5),
            (2.0, 1.0, -0.5, 0.5),  # unordered
            (1.0, 2.0, 0.1, 0.5),  # does not straddle the real axis
        ],
    )
    def test_invalid_rectangles_rejected(self, bounds):
        with pytest.raises(InvalidModelError):
            ComplexRegion(*bounds)


class TestWindingCount:
    def test_bare_well_single_root(self, bare_box):
        zc = winding_count(bare_box, ComplexRegion(1.0, 2.0, -0.5, 0.5))
        assert zc.winding == 1
        assert zc.boundary_min_modulus > 1e-12

    def test_bare_well_empty_window(self, bare_box):
        zc = winding_count(bare_box, ComplexRegion(1.8, 3.0, -0.5, 0.5))
        assert zc.winding == 0

    def test_figure6_strip_equals_real_count(self, fig6):
        # reality certification: every zero in the strip is accounted for by
        # the (resolution-limited) real spectrum, including the tight pairs
        rep = compute_spectrum(fig6, ScanConfig(kappa_max=40.0, kappa_min=0.5))
        zc = winding_count(fig6, ComplexRegion(0.5, 40.0, -0.5, 0.5))
        assert zc.winding == len(rep.levels)

    def test_tile_additivity(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            p = WellParameters(rng.uniform(0.2, 0.8), rng.uniform(0, 8), rng.uniform(-15, 15))
            cut = rng.uniform(3.0, 6.0)
            whole = winding_count(p, ComplexRegion(0.7, 9.3, -0.6, 0.6)).winding
            left = winding_count(p, ComplexRegion(0.7, cut, -0.6, 0.6)).winding
            right = winding_count(p, ComplexRegion(cut, 9.3, -0.6, 0.6)).winding
            assert whole == left + right

    def test_contour_through_root_dilates_and_recovers(self, bare_box):
        # right edge exactly on the root at pi: the 1% dilation pulls it in
        zc = winding_count(bare_box, ComplexRegion(1.0, math.pi, -0.5, 0.5))
        assert zc.winding == 2
        assert zc.region.re_max > math.pi

    def test_sample_budget_error(self, fig6):
        with pytest.raises(ContourError):
            winding_count(fig6, ComplexRegion(0.5, 40.0, -0.5, 0.5), max_samples=64)


class TestLocateComplexZero:
    def test_converges_to_half_pi(self, bare_box):
        z = locate_complex_zero(bare_box, 1.5 + 0.1j)
        assert z == pytest.approx(math.pi / 2 + 0j, abs=1e-10)

    def test_converges_to_pi(self, bare_box):
        z = locate_complex_zero(bare_box, 3.0 - 0.2j)
        assert z == pytest.approx(math.pi + 0j, abs=1e-10)

    def test_conjugate_seeds_give_conjugate_zeros(self):
        p = WellParameters(0.4, 1.0, 12.0)
        seed = 7.5 + 0.7j
        z_up = locate_complex_zero(p, seed)
        z_dn = locate_complex_zero(p, seed.conjugate())
        assert z_dn == z_up.conjugate()
        assert z_up.imag == pytest.approx(0.6283320172506411, rel=1e-9)

    def test_escape_from_region_raises(self, bare_box):
        region = ComplexRegion(6.9, 7.1, -0.05, 0.05)  # no zero inside or near
        with pytest.raises(ConvergenceError):
            locate_complex_zero(bare_box, 7.0 + 0.04j, region=region)


class TestBreakingSearch:
    def test_bare_well_no_breaking(self, bare_box):
        rep = breaking_search(bare_box, 10.0)
        assert rep.off_axis == ()
        assert rep.winding_total == rep.real_root_count == 6

    def test_figure1_no_breaking(self, fig1):
        rep = breaking_search(fig1, 15.0)
        assert rep.off_axis == ()
        assert rep.winding_total == rep.real_root_count == 9

    def test_figure6_no_certifiable_breaking(self, fig6):
        rep = breaking_search(fig6, 40.0)
        assert rep.off_axis == ()
        assert rep.winding_total == rep.real_root_count == 24

    def test_synthetic_breaking_certified_in_conjugate_pairs(self):
        # strong imaginary coupling with a weak real part pushes two level
        # pairs off the axis; zeros frozen from an independent Newton hunt
        p = WellParameters(0.4, 1.0, 12.0)
        rep = breaking_search(p, 15.0, strip_height=1.5)
        assert rep.real_root_count == 5
        assert rep.winding_total == 9
        assert len(rep.off_axis) == 4
        ups = [z for z in rep.off_axis if z.imag > 0]
        downs = [z for z in rep.off_axis if z.imag < 0]
        assert sorted((z.conjugate() for z in downs), key=lambda z: z.real) == sorted(
            ups, key=lambda z: z.real
        )
        res = sorted(z.real for z in ups)
        assert res[0] == pytest.approx(4.621780149027402, rel=1e-8)
        assert res[1] == pytest.approx(7.575303987732091, rel=1e-8)
        # consistency: winding = real + 2 * (conjugate pair count)
        assert rep.winding_total == rep.real_root_count + len(rep.off_axis)

    def test_thin_strip_excludes_distant_pairs(self):
        # the same zeros sit above |Im| = 0.5, so the default strip is clean
        p = WellParameters(0.4, 1.0, 12.0)
        rep = breaking_search(p, 15.0, strip_height=0.5)
        assert rep.off_axis == ()
        assert rep.winding_total == rep.real_root_count == 5

    def test_invalid_arguments_rejected(self, bare_box):
        with pytest.raises(InvalidModelError):
            breaking_search(bare_box, 0.5)
        with pytest.raises(InvalidModelError):
            breaking_search(bare_box, 10.0, strip_height=0.0)

    def test_census_consistency_on_random_parameters(self):
        # global invariant: every zero in the strip is either a reported real
        # root or a certified off-axis zero (conjugate-paired)
        rng = np.random.default_rng(1234)
        for _ in range(8):
            a = float(rng.uniform(0.1, 0.9))
            omega = float(10.0 ** rng.uniform(-1.0, 2.0))
            eta = float(rng.uniform(-60.0, 60.0))
            p = WellParameters(a, omega, eta)
            rep = breaking_search(p, 18.0, strip_height=1.0)
            assert rep.winding_total == rep.real_root_count + len(rep.off_axis)
            assert len(rep.off_axis) % 2 == 0
