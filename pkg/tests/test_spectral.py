"""Spectrum bands, gap certificates, and removability verdicts."""

import math

import numpy as np
import pytest

import fsalab as F
from fsalab import GapCert, Hit
from fsalab.spectral import BOTH, DOWN, INCONCLUSIVE, OBSTRUCTED, UP

from conftest import random_selfadjoint_path


def scalar_path(values):
    nodes = np.asarray(values, dtype=np.complex128).reshape(-1, 1, 1)
    return F.make_path(1, len(values) - 1, nodes)


def scalar_line_path(m, scale=1.0):
    s = np.arange(m + 1) / m
    return scalar_path(scale * (2 * s - 1))


def avoided_crossing_unscaled(m, gamma=0.3):
    s = np.arange(m + 1) / m
    nodes = np.zeros((m + 1, 2, 2), dtype=np.complex128)
    nodes[:, 0, 0] = 2 * s - 1
    nodes[:, 1, 1] = 1 - 2 * s
    nodes[:, 0, 1] = gamma
    nodes[:, 1, 0] = gamma
    return F.make_path(2, m, nodes)


class TestSpectrumBands:
    def test_constant_two_points(self):
        x = F.constant_path(np.diag([-0.4, 0.3]), m=2)
        report = F.spectrum_bands(x, merge_tol=0.01)
        assert len(report.bands) == 2
        (lo1, hi1), (lo2, hi2) = report.bands
        assert lo1 == pytest.approx(-0.4, abs=1e-9) and hi1 == pytest.approx(-0.4, abs=1e-9)
        assert lo2 == pytest.approx(0.3, abs=1e-9) and hi2 == pytest.approx(0.3, abs=1e-9)

    def test_scalar_line_single_band(self):
        report = F.spectrum_bands(scalar_line_path(4))
        assert len(report.bands) == 1
        lo, hi = report.bands[0]
        assert lo == pytest.approx(-1.0, abs=1e-9) and hi == pytest.approx(1.0, abs=1e-9)

    def test_avoided_crossing_two_bands(self):
        x = avoided_crossing_unscaled(m=64)
        report = F.spectrum_bands(x)
        assert len(report.bands) == 2
        edge = math.sqrt(1.09)
        curves = F.eig_curves(x)
        # node eigenvalue extremes match the closed form +-sqrt((2s-1)^2+0.09)
        assert curves.lam[:, 1].min() == pytest.approx(0.3, abs=1e-8)
        assert curves.lam[:, 1].max() == pytest.approx(edge, abs=1e-8)
        assert curves.lam[:, 0].max() == pytest.approx(-0.3, abs=1e-8)
        assert curves.lam[:, 0].min() == pytest.approx(-edge, abs=1e-8)
        # certified band edges are sound (outside the true band, by at most
        # one segment's inflation)
        (lo1, hi1), (lo2, hi2) = report.bands
        assert lo2 <= 0.3 <= lo2 + 3.0 / 64 and hi2 >= edge
        assert hi1 >= -0.3 - 1e-12 and lo1 <= -edge

    def test_levels_populated(self):
        x = F.constant_path(np.diag([-0.4, 0.3]), m=1)
        report = F.spectrum_bands(x, levels=[0.0, 0.3])
        assert isinstance(report.per_level[0.0], GapCert)
        assert isinstance(report.per_level[0.3], Hit)


class TestLevelGap:
    def test_constant_gap_at_zero(self):
        x = F.constant_path(np.diag([-0.4, 0.3]), m=2)
        cert = F.level_gap(x, 0.0)
        assert isinstance(cert, GapCert)
        assert cert.radius == pytest.approx(0.3, abs=1e-9)

    def test_scalar_line_hit(self):
        hit = F.level_gap(scalar_line_path(4), 0.0)
        assert isinstance(hit, Hit)

    def test_avoided_crossing_gap(self):
        m = 256
        cert = F.level_gap(avoided_crossing_unscaled(m), 0.0)
        assert isinstance(cert, GapCert)
        # enclosure inflation near the band minimum costs O(1/m) of the
        # closed-form 0.3 gap radius
        assert 0.3 - 3.0 / m <= cert.radius <= 0.3


class TestCheckRemovability:
    def test_scalar_line_obstructed(self):
        curves = F.eig_curves(scalar_line_path(8))
        (feas,) = F.check_removability(curves, 0.0, 0.3)
        assert feas.verdict == OBSTRUCTED
        w = feas.witness
        assert w.s_minus == 0.0 and w.lam_minus == pytest.approx(-1.0)
        assert w.s_plus == 1.0 and w.lam_plus == pytest.approx(1.0)

    def test_obstruction_brute_force(self, rng):
        # every perturbation below the budget keeps a sign change of f - t
        curves = F.eig_curves(scalar_line_path(64))
        (feas,) = F.check_removability(curves, 0.0, 0.3)
        assert feas.verdict == OBSTRUCTED
        f = curves.lam[:, 0]
        noise = rng.uniform(-0.3 * 0.999, 0.3 * 0.999, size=(300, f.size))
        perturbed = f[None, :] + noise
        signs = np.sign(perturbed)
        has_change = ((signs[:, :-1] * signs[:, 1:]) <= 0).any(axis=1)
        assert has_change.all()

    def test_constant_above_is_up_only(self):
        curves = F.eig_curves(scalar_path([0.5, 0.5]))
        (feas,) = F.check_removability(curves, 0.0, 0.1)
        assert feas.verdict == UP

    def test_crossing_diag_split(self):
        s = np.arange(9) / 8
        nodes = np.zeros((9, 2, 2), dtype=np.complex128)
        nodes[:, 0, 0] = 2 * s - 1
        nodes[:, 1, 1] = 1 - 2 * s
        curves = F.eig_curves(F.make_path(2, 8, nodes))
        low, high = F.check_removability(curves, 0.0, 0.2)
        assert low.verdict == DOWN and high.verdict == UP

    def test_narrow_curve_is_both(self):
        curves = F.eig_curves(scalar_path([0.01, -0.01, 0.0]))
        (feas,) = F.check_removability(curves, 0.0, 0.5)
        assert feas.verdict == BOTH

    def test_inconclusive_on_coarse_grid(self):
        # single coarse segment: the lower curve's enclosure [-0.4, 0.2]
        # straddles the level but its node values (both -0.1) witness nothing
        x = F.make_path(
            2, 1, [np.array([[0.2, 0.3], [0.3, 0.2]]), np.array([[0.2, -0.3], [-0.3, 0.2]])]
        )
        curves = F.eig_curves(x)
        feas = F.check_removability(curves, 0.05, 0.04)
        assert feas[0].verdict == INCONCLUSIVE
        # refining the grid resolves the verdict (the hidden midpoint value 0.2
        # becomes a node witness)
        fine = F.refine(x, 8)
        feas_fine = F.check_removability(F.eig_curves(fine), 0.05, 0.04)
        assert feas_fine[0].verdict == OBSTRUCTED

    def test_rejects_nonpositive_budget(self):
        curves = F.eig_curves(scalar_path([0.0, 1.0]))
        with pytest.raises(ValueError):
            F.check_removability(curves, 0.0, 0.0)


class TestInvariants:
    def test_gap_obstruction_exclusivity(self, rng):
        # wherever a curve is obstructed at a vanishing budget, the level is a Hit
        for _ in range(30):
            x = random_selfadjoint_path(rng, int(rng.integers(1, 4)), 6)
            curves = F.eig_curves(x)
            t = float(rng.uniform(-0.5, 0.5))
            feas = F.check_removability(curves, t, 1e-12)
            if any(f.verdict == OBSTRUCTED for f in feas):
                assert isinstance(F.level_gap(curves, t), Hit)

    def test_monotone_feasibility(self, rng):
        for _ in range(30):
            x = random_selfadjoint_path(rng, int(rng.integers(2, 5)), 6)
            curves = F.eig_curves(x)
            t = float(rng.uniform(-0.5, 0.5))
            delta = float(rng.uniform(0.05, 0.5))
            feas = F.check_removability(curves, t, delta)
            downs = [f.verdict in (DOWN, BOTH) for f in feas]
            ups = [f.verdict in (UP, BOTH) for f in feas]
            for k in range(len(downs) - 1):
                if downs[k + 1]:
                    assert downs[k]
                if ups[k]:
                    assert ups[k + 1]


class TestSerialization:
    def test_spectrum_report_json_shape(self):
        import json

        x = F.constant_path(np.diag([-0.4, 0.3]), m=2)
        report = F.spectrum_bands(x, levels=[0.0, 0.3])
        data = json.loads(json.dumps(report.to_dict()))
        assert all(len(band) == 2 for band in data["bands"])
        kinds = {entry["kind"] for entry in data["per_level"].values()}
        assert kinds == {"gap", "hit"}
