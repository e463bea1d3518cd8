"""Clip-based level surgery: push sorted curves off a level within a budget.

The perturbation edits eigenvalues in the path's own nodewise eigenframes, so
by unitary invariance the perturbation norm at a node is exactly the largest
curve excursion there.  That gives the sharp budget accounting the sequential
removal loop needs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import MatPath
from .eig import EigCurves, eig_curves, make_curves
from .errors import CertificationError, InconclusiveGridError, ObstructionError
from .jacobi import opnorm_hermitian_batch
from .spectral import BOTH, DOWN, GapCert, Hit, OBSTRUCTED, UP, check_removability, level_gap


@dataclass(frozen=True)
class SurgeryPlan:
    """Directions, clip margin, and excursion bounds for one level removal.

    Curves 1..k_star are pushed down (clipped at t - eta), the rest up.
    Each excursion is the exact node-value displacement the clip will cause;
    all are strictly below the budget by construction.
    """

    level: float
    delta: float
    k_star: int              # number of down-curves
    directions: tuple        # per curve: "down" | "up"
    eta: float
    excursions: tuple        # per curve: max |mu_k - lam_k| over nodes

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "delta": self.delta,
            "k_star": self.k_star,
            "directions": list(self.directions),
            "eta": self.eta,
            "excursions": list(self.excursions),
        }


@dataclass(frozen=True)
class SurgeryResult:
    y: MatPath
    curves: EigCurves
    gap: GapCert
    plan: SurgeryPlan
    moved: float     # certified ||y - x||
    clipped: bool    # False when y is x unchanged


def plan_surgery(curves: EigCurves, t: float, delta: float) -> SurgeryPlan:
    """Choose directions and margin, or fail with the blocking certificate."""
    feas = check_removability(curves, t, delta)
    for f in feas:
        if f.verdict == OBSTRUCTED:
            raise ObstructionError(f.witness)
    for f in feas:
        if f.verdict not in (DOWN, UP, BOTH):
            raise InconclusiveGridError(
                f"curve {f.curve} at level {t}: neither feasible nor node-witnessed "
                f"obstructed at budget {delta}; refine the grid"
            )
    down_idx = [f.curve for f in feas if f.verdict in (DOWN, BOTH)]
    k_star = max(down_idx) if down_idx else 0
    # monotone split: everything at or below the last down-feasible curve is
    # itself down-feasible because per-curve sups/infs are ascending in k
    slacks = []
    directions = []
    for f in feas:
        if f.curve <= k_star:
            directions.append(DOWN)
            slacks.append((t + delta) - f.sup)
        else:
            directions.append(UP)
            slacks.append(f.inf - (t - delta))
    eta = min(delta / 4.0, 0.5 * min(slacks))
    if eta <= 0.0:
        raise InconclusiveGridError(
            f"degenerate clip margin at level {t}; refine the grid"
        )
    excursions = []
    for k, direction in enumerate(directions):
        lam_k = curves.lam[:, k]
        if direction == DOWN:
            exc = max(0.0, float(lam_k.max()) - (t - eta))
        else:
            exc = max(0.0, (t + eta) - float(lam_k.min()))
        excursions.append(exc)
    plan = SurgeryPlan(
        level=t,
        delta=delta,
        k_star=k_star,
        directions=tuple(directions),
        eta=eta,
        excursions=tuple(excursions),
    )
    if max(excursions) >= delta:
        raise CertificationError(
            f"planned excursion {max(excursions)} reaches budget {delta} at level {t}"
        )
    return plan


def clip_curves(curves: EigCurves, plan: SurgeryPlan) -> np.ndarray:
    """Apply the plan to the curve values; returns mu of shape (m+1, n).

    mu_k = min(lam_k, t - eta) for down-curves, max(lam_k, t + eta) for
    up-curves; ascending order at every node is preserved because down-values
    stay below t - eta < t + eta below the up-values.
    """
    mu = curves.lam.copy()
    t, eta, ks = plan.level, plan.eta, plan.k_star
    mu[:, :ks] = np.minimum(mu[:, :ks], t - eta)
    mu[:, ks:] = np.maximum(mu[:, ks:], t + eta)
    return mu


# clusters tighter than DEGENERACY_TOL * scale count as exact degeneracies
DEGENERACY_TOL = 1e-12


def _split_coupled_frames(curves: EigCurves, mu: np.ndarray) -> np.ndarray:
    """Eigenframes with the free basis at split degeneracies re-aligned.

    When the clip sends two *equal* eigenvalues to opposite sides of the
    level, any orthonormal basis of that eigenspace is an eigenbasis of x,
    but the sorted frames swap branches across the crossing and the
    interpolated path would dive back through the level.  Choosing the
    bisector of the incoming and outgoing branch vectors (a 45-degree basis)
    turns the exact crossing into an avoided one; the choice depends only on
    the eigenspace and the neighbour frames, not on the basis the solver
    happened to return.
    """
    lam, frames = curves.lam, curves.frames
    n_nodes, n = lam.shape
    tol = DEGENERACY_TOL * (1.0 + np.abs(lam).max(initial=0.0))
    out = frames
    for j in range(1, n_nodes - 1):
        for i in range(n - 1):
            if abs(lam[j, i + 1] - lam[j, i]) > tol or mu[j, i + 1] == mu[j, i]:
                continue
            u1 = frames[j][:, i]
            u2 = frames[j][:, i + 1]
            proj = np.outer(u1, u1.conj()) + np.outer(u2, u2.conj())
            w = None
            for probe in (
                frames[j - 1][:, i] + frames[j + 1][:, i],
                frames[j - 1][:, i],
                u1,
            ):
                cand = proj @ probe
                norm = np.linalg.norm(cand)
                if norm > 1e-8:
                    w = cand / norm
                    break
            w2 = None
            for probe in (frames[j - 1][:, i + 1], u2, u1):
                cand = proj @ probe
                cand = cand - (w.conj() @ cand) * w
                norm = np.linalg.norm(cand)
                if norm > 1e-8:
                    w2 = cand / norm
                    break
            if out is frames:
                out = frames.copy()
            out[j][:, i] = w
            out[j][:, i + 1] = w2
    return out


def reassemble(x: MatPath, curves: EigCurves, mu: np.ndarray) -> MatPath:
    """Rebuild the path with curve values mu in x's nodewise eigenframes.

    If mu equals the original curve values bit for bit, x itself is returned
    so that no-op surgeries are exact.
    """
    if np.array_equal(mu, curves.lam):
        return x
    return _assemble_path(curves, mu, _split_coupled_frames(curves, mu))


def _assemble_path(curves: EigCurves, mu: np.ndarray, frames: np.ndarray) -> MatPath:
    nodes = np.einsum("jik,jk,jlk->jil", frames, mu.astype(np.float64), frames.conj())
    nodes = (nodes + nodes.conj().transpose(0, 2, 1)) / 2.0
    return algebra._raw_path(nodes)


def remove_level(
    x: MatPath,
    t: float,
    delta: float,
    gap_floor: float = 0.0,
    curves: EigCurves | None = None,
) -> SurgeryResult:
    """Produce y self-adjoint with ||y - x|| < delta and a certified gap at t.

    Raises ObstructionError when no such y exists (sound witness), and
    CertificationError when the enclosures on this grid are too coarse to
    certify the gap that the clip creates.
    """
    if delta <= 0:
        raise ValueError("budget delta must be positive")
    if curves is None:
        curves = eig_curves(x)
    plan = plan_surgery(curves, t, delta)
    if max(plan.excursions) == 0.0:
        gap = level_gap(curves, t)
        if isinstance(gap, Hit) or gap.radius <= gap_floor:
            raise CertificationError(
                f"level {t} is clear of node values but enclosures still cover it; "
                "refine the grid (increase m)"
            )
        return SurgeryResult(y=x, curves=curves, gap=gap, plan=plan, moved=0.0, clipped=False)
    mu = clip_curves(curves, plan)
    frames = _split_coupled_frames(curves, mu)
    y = _assemble_path(curves, mu, frames)
    ycurves = make_curves(y, mu, frames)
    gap = level_gap(ycurves, t)
    if isinstance(gap, Hit) or gap.radius <= gap_floor:
        raise CertificationError(
            f"clip opened a node gap of {plan.eta} at level {t} but segment "
            "enclosures swallow it; refine the grid (increase m)"
        )
    moved = float(opnorm_hermitian_batch(y.nodes - x.nodes).max())
    moved += algebra.NORM_GUARD * (1.0 + moved)
    if moved >= delta:
        raise CertificationError(
            f"certified perturbation {moved} reached the budget {delta} at level {t}"
        )
    return SurgeryResult(y=y, curves=ycurves, gap=gap, plan=plan, moved=moved, clipped=True)
