import numpy as np
import pytest
from scipy import integrate

from chebshock import edges as ed
from chebshock import spectral as sp

FACTORS = ed.build_concentration_factors()


class TestConcentrationFactors:
    def test_twelve_factors(self):
        assert len(FACTORS) == 12
        fams = {f.family for f in FACTORS}
        assert fams == set(ed.FactorFamily)
        assert {f.lanczos_order for f in FACTORS} == {0, 1, 2, 3}

    def test_trig_value_against_quadrature_oracle(self):
        si_pi, _ = integrate.quad(lambda t: np.sin(t) / t, 0.0, np.pi)
        assert abs(si_pi - 1.85194) < 1e-5
        trig0 = next(
            f for f in FACTORS
            if f.family is ed.FactorFamily.TRIGONOMETRIC and f.lanczos_order == 0
        )
        got = trig0.values(np.array([0.5]))[0]
        assert abs(got - np.pi * np.sin(np.pi / 2) / si_pi) < 1e-10
        assert abs(got - 1.6964) < 5e-4

    def test_poly_order1_lanczos1_vanishes_at_one(self):
        poly1 = next(
            f for f in FACTORS
            if f.family is ed.FactorFamily.POLYNOMIAL and f.lanczos_order == 1
        )
        assert abs(poly1.values(np.array([1.0]))[0]) < 1e-12

    def test_finite_on_unit_interval_and_vanishing_at_zero(self):
        eta = np.linspace(1e-9, 1.0, 2001)
        for f in FACTORS:
            vals = f.values(eta)
            assert np.all(np.isfinite(vals))
            if f.family is not ed.FactorFamily.TRIGONOMETRIC:
                assert abs(f.values(np.array([1e-9]))[0]) < 1e-6

    def test_calibration_tophat_peaks(self, tophat_modal60):
        # admissibility surrogate: every factor reproduces the unit jump
        # height within 15% on the N=60 tophat series
        absc = ed.default_abscissae(60)
        for f in FACTORS:
            j = ed.jump_approx(tophat_modal60, f, absc)
            assert 0.85 < j.max() < 1.15, f.label
            assert -1.15 < j.min() < -0.85, f.label


class TestJumpApprox:
    def test_constant_is_zero(self):
        modal = np.zeros(21)
        modal[0] = 1.0
        j = ed.jump_approx(modal, FACTORS[0], np.linspace(-0.9, 0.9, 50))
        assert np.abs(j).max() < 1e-14

    def test_tophat_extrema_locations_and_heights(self, grid60, tophat_modal60):
        absc = ed.default_abscissae(60)
        trig0 = FACTORS[0]
        j = ed.jump_approx(tophat_modal60, trig0, absc)
        x_up, x_dn = absc[np.argmax(j)], absc[np.argmin(j)]
        assert abs(x_up - (-0.7)) <= grid60.spacing_at(-0.7)
        assert abs(x_dn - (-0.2)) <= grid60.spacing_at(-0.2)
        assert abs(j.max() - 1.0) < 0.15 and abs(j.min() + 1.0) < 0.15

    def test_endpoints_zero_by_default(self):
        modal = np.zeros(13)
        modal[3] = 1.0
        j = ed.jump_approx(modal, FACTORS[0], np.array([-1.0, 0.3, 1.0]))
        assert j[0] == 0.0 and j[2] == 0.0

    def test_endpoint_reject_mode(self):
        with pytest.raises(ValueError):
            ed.jump_approx(np.ones(5), FACTORS[0], [1.0], endpoint_mode="reject")

    def test_outside_domain_rejected(self):
        with pytest.raises(ValueError):
            ed.jump_approx(np.ones(5), FACTORS[0], [1.5])

    def test_ramp_log_decay_bound(self):
        # smooth ramp: peak jump response must decay at least like log N / N
        absc = {n: ed.default_abscissae(n) for n in (20, 40, 80)}
        peaks = {}
        for n in (20, 40, 80):
            g = sp.build_grid(n)
            modal = sp.analyze(g.nodes, sp.build_operators(g))
            j = ed.jump_approx(modal, FACTORS[0], absc[n])
            peaks[n] = np.abs(j).max()
        const = peaks[20] * 20 / np.log(20)
        for n in (40, 80):
            assert peaks[n] <= const * np.log(n) / n


class TestMinmod:
    def test_all_positive_takes_min(self):
        assert np.allclose(ed.minmod_combine([[2.0, 3.0], [1.0, 4.0]]), [1.0, 3.0])

    def test_mixed_signs_zero(self):
        assert np.allclose(ed.minmod_combine([[2.0], [-1.0]]), [0.0])

    def test_single_negative_row(self):
        assert np.allclose(ed.minmod_combine([[-3.0, -1.0]]), [-3.0, -1.0])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ed.minmod_combine(np.empty((0, 4)))

    def test_sign_consistency_random_rows(self):
        rng = np.random.default_rng(7)
        rows = rng.normal(size=(6, 200))
        mm = ed.minmod_combine(rows)
        pos = np.all(rows > 0, axis=0)
        neg = np.all(rows < 0, axis=0)
        assert np.all(mm[~(pos | neg)] == 0.0)
        assert np.all(mm[pos] > 0) and np.all(mm[neg] < 0)

    def test_profile_bounded_by_rows(self, tophat_modal60):
        prof = ed.minmod_profile(tophat_modal60)
        agree_pos = np.all(prof.jump_approxs > 0, axis=0)
        agree_neg = np.all(prof.jump_approxs < 0, axis=0)
        agree = agree_pos | agree_neg
        least = np.abs(prof.jump_approxs).min(axis=0)
        assert np.all(np.abs(prof.minmod[agree]) <= least[agree] + 1e-15)
        assert np.all(prof.minmod[~agree] == 0.0)


class TestFindPeaks:
    def test_tophat_dominant_pair(self, grid60, tophat_modal60):
        # the two discontinuities dominate the candidate list; a residual
        # sidelobe (~14% of the maximum) may also clear the threshold and
        # is discarded later by reject_spurious
        prof = ed.minmod_profile(tophat_modal60)
        thr = ed.resolve_thresholds(ed.DetectionConfig(), 1.0)
        cands = ed.find_peaks(prof, grid60, thr)
        assert len(cands) >= 2
        dominant = sorted(cands, key=lambda c: -abs(c.height))[:2]
        up, dn = sorted(dominant, key=lambda c: c.location)
        assert abs(up.location - (-0.7)) <= grid60.spacing_at(-0.7)
        assert abs(dn.location - (-0.2)) <= grid60.spacing_at(-0.2)
        assert up.height > 0 > dn.height
        for c in cands:
            if c not in dominant:
                assert abs(c.height) < 0.2 * abs(up.height)

    def test_zero_profile_empty(self, grid60):
        absc = ed.default_abscissae(60)
        prof = ed.MinmodProfile(absc, np.zeros((1, len(absc))), np.zeros(len(absc)))
        thr = ed.resolve_thresholds(ed.DetectionConfig(), 1.0)
        assert ed.find_peaks(prof, grid60, thr) == []


class TestClassify:
    def test_gaussian_slope(self, grid60):
        nod = np.exp(-((grid60.nodes + 0.45) ** 2) / (2 * 0.15**2))
        field = sp.SpectralField.from_nodal(grid60, nod)
        fit, smooth = ed.classify_smoothness(field.modal)
        assert smooth
        assert abs(fit.slope - (-0.04)) <= 0.015

    def test_sin6_slope(self, grid60):
        field = sp.SpectralField.from_nodal(grid60, np.sin(6 * grid60.nodes))
        fit, smooth = ed.classify_smoothness(field.modal)
        assert smooth
        assert abs(fit.slope - (-0.03)) <= 0.015

    def test_tophat_flat_slope(self, tophat_field60):
        fit, smooth = ed.classify_smoothness(tophat_field60.modal)
        assert not smooth
        assert abs(fit.slope) <= 0.005

    def test_degenerate_zero_field(self):
        fit, smooth = ed.classify_smoothness(np.zeros(61))
        assert smooth and fit.degenerate

    def test_sweep_too_short(self):
        with pytest.raises(ValueError):
            ed.classify_smoothness(np.ones(13))

    def test_slope_fit_invariants(self, grid60):
        field = sp.SpectralField.from_nodal(grid60, np.exp(grid60.nodes))
        fit, _ = ed.classify_smoothness(field.modal)
        assert np.all(np.diff(fit.sampled_orders) > 0)
        assert np.all(fit.peak_heights > 0)

    def test_gaussian_heights_nearly_monotone(self, grid60):
        nod = np.exp(-((grid60.nodes + 0.45) ** 2) / (2 * 0.15**2))
        field = sp.SpectralField.from_nodal(grid60, nod)
        fit, _ = ed.classify_smoothness(field.modal)
        h = fit.peak_heights
        assert np.all(h[1:] <= 1.05 * h[:-1])


def _profile_with(minmod, absc):
    return ed.MinmodProfile(absc, minmod[None, :], minmod)


class TestSmoothMinmod:
    def test_constant_preserved(self, grid60):
        absc = ed.default_abscissae(60)
        prof = _profile_with(np.full(len(absc), 0.7), absc)
        out = ed.smooth_minmod(prof, 0.1, grid60)
        assert np.abs(out - 0.7).max() < 1e-12

    def test_center_outside_rejected(self, grid60):
        absc = ed.default_abscissae(60)
        prof = _profile_with(np.zeros(len(absc)), absc)
        with pytest.raises(ValueError):
            ed.smooth_minmod(prof, 1.5, grid60)

    def test_narrow_spike_suppressed(self, grid60):
        # triangle of half-width 0.005, far narrower than omega ~ 0.026
        absc = ed.default_abscissae(60)
        spike = np.clip(1.0 - np.abs(absc - 0.0) / 0.005, 0.0, None)
        out = ed.smooth_minmod(_profile_with(spike, absc), 0.0, grid60)
        # analytic: area/(sqrt(2 pi) omega) = 0.005/0.0656 ~ 0.076
        assert out.max() < 0.3

    def test_broad_plateau_survives(self, grid60):
        omega = 0.5 * grid60.spacing_at(0.0)
        width = 10 * omega
        absc = ed.default_abscissae(60)
        plateau = (np.abs(absc) < width / 2).astype(float)
        out = ed.smooth_minmod(_profile_with(plateau, absc), 0.0, grid60)
        assert out.max() > 0.9


class TestRejectSpurious:
    def _tophat_report(self, grid60, tophat_modal60, scale=1.0, floor_scale=1.0):
        prof = ed.minmod_profile(tophat_modal60 * scale)
        thr = ed.resolve_thresholds(ed.DetectionConfig(), scale * floor_scale)
        cands = ed.find_peaks(prof, grid60, thr)
        return prof, cands, ed.reject_spurious(prof, cands, grid60, thr)

    def test_tophat_both_confirmed(self, grid60, tophat_modal60):
        _, cands, report = self._tophat_report(grid60, tophat_modal60)
        assert report.label is ed.Label.DISCONTINUOUS
        assert len(report.edges) == 2
        locs = sorted(e.location for e in report.edges)
        assert abs(locs[0] - (-0.7)) <= grid60.spacing_at(-0.7)
        assert abs(locs[1] - (-0.2)) <= grid60.spacing_at(-0.2)
        signs = [e.sign for e in sorted(report.edges, key=lambda e: e.location)]
        assert signs == [1, -1]

    def test_empty_candidates_rejected(self, grid60, tophat_modal60):
        prof = ed.minmod_profile(tophat_modal60)
        thr = ed.resolve_thresholds(ed.DetectionConfig(), 1.0)
        with pytest.raises(ValueError):
            ed.reject_spurious(prof, [], grid60, thr)

    def test_negation_equivariance(self, grid60, tophat_modal60):
        prof_p = ed.minmod_profile(tophat_modal60)
        prof_n = ed.minmod_profile(-tophat_modal60)
        assert np.abs(prof_p.minmod + prof_n.minmod).max() < 1e-12
        thr = ed.resolve_thresholds(ed.DetectionConfig(), 1.0)
        rep_p = ed.reject_spurious(
            prof_p, ed.find_peaks(prof_p, grid60, thr), grid60, thr
        )
        rep_n = ed.reject_spurious(
            prof_n, ed.find_peaks(prof_n, grid60, thr), grid60, thr
        )
        locs_p = sorted(e.location for e in rep_p.edges)
        locs_n = sorted(e.location for e in rep_n.edges)
        assert np.allclose(locs_p, locs_n, atol=1e-12)
        sign_p = {round(e.location, 9): e.sign for e in rep_p.edges}
        sign_n = {round(e.location, 9): e.sign for e in rep_n.edges}
        assert all(sign_p[k] == -sign_n[k] for k in sign_p)

    def test_rejection_idempotent_on_confirmed_edge(self, grid60, tophat_modal60):
        prof, cands, report = self._tophat_report(grid60, tophat_modal60)
        cand = max(cands, key=lambda c: abs(c.height))
        smoothed = ed.smooth_minmod(prof, cand.location, grid60)
        prof2 = _profile_with(smoothed, prof.abscissae)
        thr = ed.resolve_thresholds(ed.DetectionConfig(), 1.0)
        cands2 = ed.find_peaks(prof2, grid60, thr)
        near = [c for c in cands2 if abs(c.location - cand.location) <= 2 * grid60.spacing_at(cand.location)]
        assert near
        rep2 = ed.reject_spurious(prof2, near, grid60, thr)
        assert rep2.label is ed.Label.DISCONTINUOUS

    def test_scale_invariance_of_locations(self, grid60, tophat_modal60):
        _, _, base = self._tophat_report(grid60, tophat_modal60)
        _, _, scaled = self._tophat_report(grid60, tophat_modal60, scale=50.0)
        locs_a = sorted(e.location for e in base.edges)
        locs_b = sorted(e.location for e in scaled.edges)
        assert len(locs_a) == len(locs_b)
        for a, b in zip(locs_a, locs_b):
            assert abs(a - b) <= grid60.spacing_at(a)


class TestEdgeReport:
    def test_smooth_with_edges_invalid(self):
        with pytest.raises(ValueError):
            ed.EdgeReport(ed.Label.SMOOTH, (ed.Edge(0.0, 1.0, 1),), (), None, {})

    def test_discontinuous_needs_edges(self):
        with pytest.raises(ValueError):
            ed.EdgeReport(ed.Label.DISCONTINUOUS, (), (), None, {})

    def test_edge_location_bounds(self):
        with pytest.raises(ValueError):
            ed.EdgeReport(
                ed.Label.DISCONTINUOUS, (ed.Edge(1.5, 1.0, 1),), (), None, {}
            )

    def test_serialization_shape(self, grid60, tophat_modal60):
        prof = ed.minmod_profile(tophat_modal60)
        thr = ed.resolve_thresholds(ed.DetectionConfig(), 1.0)
        rep = ed.reject_spurious(prof, ed.find_peaks(prof, grid60, thr), grid60, thr)
        doc = rep.as_dict()
        assert doc["label"] == "Discontinuous"
        assert {"location", "height", "sign"} <= set(doc["edges"][0])
        assert {"rel_frac", "abs_floor", "slope_threshold", "width_factor"} <= set(
            doc["thresholds"]
        )
