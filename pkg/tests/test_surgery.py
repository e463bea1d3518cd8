"""Surgery planning, clipping, reassembly, and level removal."""

import numpy as np
import pytest

import fsalab as F
from fsalab import CertificationError, GapCert, ObstructionError
from fsalab.jacobi import jacobi_eigh_batch
from fsalab.spectral import DOWN, UP
from fsalab.surgery import SurgeryPlan, SurgeryResult

from conftest import random_selfadjoint_path


def scalar_path(values):
    nodes = np.asarray(values, dtype=np.complex128).reshape(-1, 1, 1)
    return F.make_path(1, len(values) - 1, nodes)


def crossing_diag_path(m):
    s = np.arange(m + 1) / m
    nodes = np.zeros((m + 1, 2, 2), dtype=np.complex128)
    nodes[:, 0, 0] = 2 * s - 1
    nodes[:, 1, 1] = 1 - 2 * s
    return F.make_path(2, m, nodes)


class TestPlanSurgery:
    def test_crossing_diag_plan(self):
        curves = F.eig_curves(crossing_diag_path(8))
        plan = F.plan_surgery(curves, 0.0, 0.2)
        assert plan.k_star == 1
        assert plan.directions == (DOWN, UP)
        assert plan.eta == pytest.approx(0.05, abs=1e-9)
        assert all(e == pytest.approx(0.05, abs=1e-9) for e in plan.excursions)

    def test_already_gapped_constant(self):
        curves = F.eig_curves(F.constant_path(np.diag([0.5, 0.7]), m=2))
        plan = F.plan_surgery(curves, 0.0, 0.1)
        assert plan.k_star == 0
        assert plan.directions == (UP, UP)
        assert plan.eta == pytest.approx(0.025, abs=1e-12)
        assert plan.excursions == (0.0, 0.0)

    def test_scalar_line_obstruction(self):
        s = np.arange(9) / 8
        curves = F.eig_curves(scalar_path(2 * s - 1))
        with pytest.raises(ObstructionError) as err:
            F.plan_surgery(curves, 0.0, 0.3)
        cert = err.value.certificate
        assert cert.lam_minus == pytest.approx(-1.0) and cert.lam_plus == pytest.approx(1.0)


class TestClipCurves:
    def test_down_clip_values(self):
        x = scalar_path([-1.0, -0.5, 0.0, -0.5, -1.0])
        curves = F.eig_curves(x)
        plan = SurgeryPlan(
            level=0.0, delta=0.2, k_star=1, directions=(DOWN,), eta=0.05, excursions=(0.05,)
        )
        mu = F.clip_curves(curves, plan)
        assert np.allclose(mu[:, 0], [-1.0, -0.5, -0.05, -0.5, -1.0], atol=1e-15)

    def test_up_clip_noop(self):
        curves = F.eig_curves(scalar_path([0.5, 0.5, 0.5]))
        plan = SurgeryPlan(
            level=0.0, delta=0.2, k_star=0, directions=(UP,), eta=0.05, excursions=(0.0,)
        )
        mu = F.clip_curves(curves, plan)
        assert np.array_equal(mu, curves.lam)

    def test_degenerate_node_split(self):
        x = F.constant_path(np.zeros((2, 2)), m=1)
        curves = F.eig_curves(x)
        plan = SurgeryPlan(
            level=0.0,
            delta=0.2,
            k_star=1,
            directions=(DOWN, UP),
            eta=0.05,
            excursions=(0.05, 0.05),
        )
        mu = F.clip_curves(curves, plan)
        assert np.allclose(mu[:, 0], -0.05) and np.allclose(mu[:, 1], 0.05)
        assert np.all(np.diff(mu, axis=1) >= 0)


class TestReassemble:
    def test_identity_when_unclipped(self, rng):
        x = random_selfadjoint_path(rng, 3, 4)
        curves = F.eig_curves(x)
        y = F.reassemble(x, curves, curves.lam)
        assert y is x

    def test_hadamard_frame_shift(self):
        x = F.constant_path(np.array([[0.0, 1.0], [1.0, 0.0]]), m=1)
        curves = F.eig_curves(x)
        mu = np.tile([-1.0, 1.5], (2, 1))
        y = F.reassemble(x, curves, mu)
        expected = 1.25 * np.array([[0, 1], [1, 0]]) + 0.25 * np.eye(2)
        assert np.abs(y.nodes - expected[None]).max() <= 1e-12
        assert F.sup_norm(F.sub(y, x)).node_max == pytest.approx(0.5, abs=1e-12)

    def test_clip_node_in_eigenbasis(self):
        x = F.constant_path(np.zeros((2, 2)), m=1)
        curves = F.eig_curves(x)
        mu = np.tile([-0.05, 0.05], (2, 1))
        y = F.reassemble(x, curves, mu)
        lam = jacobi_eigh_batch(y.nodes, want_vectors=False)[0]
        assert np.allclose(lam, [-0.05, 0.05], atol=1e-14)


class TestRemoveLevel:
    def test_crossing_diag_removal(self):
        # the clip splits the exact crossing at s = 1/2; the bisector basis
        # there routes the path around the level, so the true gap is
        # eta/sqrt(2) and the certified one eta(1 - sqrt(2)/2) with eta = 0.05
        x = crossing_diag_path(64)
        res = F.remove_level(x, 0.0, 0.2)
        assert isinstance(res, SurgeryResult) and res.clipped
        assert res.gap.radius == pytest.approx(0.05 * (1 - 2**-0.5), abs=1e-6)
        assert res.moved <= 0.05 + 1e-9
        # independent oracle: dense oversampling of y never meets the level
        fine = F.refine(res.y, 16)
        lam = jacobi_eigh_batch(fine.nodes, want_vectors=False)[0]
        assert np.abs(lam).min() >= 0.05 / 2**0.5 - 1e-9
        assert np.abs(lam).min() > res.gap.radius  # certificate is conservative

    def test_idempotent_on_gapped_input(self):
        x = F.constant_path(np.diag([0.5, 0.7]), m=2)
        res = F.remove_level(x, 0.0, 0.1)
        assert res.y is x and not res.clipped and res.moved == 0.0
        assert res.gap.radius == pytest.approx(0.5, abs=1e-9)

    def test_scalar_line_obstructed(self):
        s = np.arange(65) / 64
        x = scalar_path(2 * s - 1)
        for delta in (0.1, 0.5, 0.99):
            with pytest.raises(ObstructionError):
                F.remove_level(x, 0.0, delta)

    def test_coarse_grid_certification_failure(self):
        # m = 1 crossing: node gap opens but one segment's enclosure swallows it
        x = crossing_diag_path(1)
        with pytest.raises(CertificationError):
            F.remove_level(x, 0.0, 0.2)


class TestInvariants:
    def _random_level_case(self, rng):
        n = int(rng.integers(1, 5))
        x = random_selfadjoint_path(rng, n, int(rng.integers(4, 10)), scale=0.3)
        t = float(rng.uniform(-0.6, 0.6))
        delta = float(rng.uniform(0.1, 0.6))
        return x, t, delta

    def test_budget_and_gap_soundness(self, rng):
        successes = 0
        for _ in range(120):
            x, t, delta = self._random_level_case(rng)
            try:
                res = F.remove_level(x, t, delta)
            except (ObstructionError, CertificationError, F.InconclusiveGridError):
                continue
            successes += 1
            assert F.sup_norm(F.sub(res.y, x)).value < delta
            gap = F.level_gap(F.eig_curves(res.y), t)
            assert isinstance(gap, GapCert) and gap.radius > 0
            mu = jacobi_eigh_batch(res.y.nodes, want_vectors=False)[0]
            assert np.all(np.diff(mu, axis=1) >= 0)
        assert successes >= 10  # the ensemble must actually exercise surgery

    def test_basis_independence_at_degeneracy(self, rng):
        # randomizing the eigenbasis inside the degenerate eigenspace at the
        # crossing node must not move the certified quantities: the split
        # basis is re-derived from the eigenspace and the neighbour frames
        x = crossing_diag_path(8)
        curves = F.eig_curves(x)
        j_cross = 4  # s = 1/2, lambda_1 = lambda_2 = 0
        assert curves.lam[j_cross, 0] == curves.lam[j_cross, 1] == 0.0

        theta = float(rng.uniform(0.2, 1.3))
        rot = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]],
            dtype=complex,
        )
        frames2 = curves.frames.copy()
        frames2[j_cross] = frames2[j_cross] @ rot
        curves2 = F.make_curves(x, curves.lam, frames2)

        t, delta = 0.0, 0.2
        res1 = F.remove_level(x, t, delta, curves=curves)
        res2 = F.remove_level(x, t, delta, curves=curves2)
        norm1 = F.sup_norm(F.sub(res1.y, x)).node_max
        norm2 = F.sup_norm(F.sub(res2.y, x)).node_max
        assert abs(norm1 - norm2) <= 1e-10
        assert abs(res1.gap.radius - res2.gap.radius) <= 1e-10
        # the canonical split basis makes the output independent of the input basis
        assert np.abs(res1.y.nodes - res2.y.nodes).max() <= 1e-12
