"""Continuous functional calculus for self-adjoint paths.

f(y) is computed nodewise as U f(Lambda) U*.  For piecewise functions this is
legitimate only when every discontinuity keeps a certified positive distance
from the spectrum; the check runs against the segment enclosures, so it
covers the whole interpolant, not just the grid nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import MatPath
from .eig import EigCurves, eig_curves
from .errors import DomainViolationError, ShapeError
from .jacobi import opnorm_batch


@dataclass(frozen=True)
class PiecewiseFn:
    """Real function given by affine pieces on closed intervals.

    pieces are (lo, hi, slope, intercept), sorted and non-overlapping except
    possibly at shared endpoints.  Every piece boundary is treated as a
    potential discontinuity and must keep clear of the spectrum.
    """

    pieces: tuple

    def __post_init__(self):
        prev_hi = -np.inf
        for lo, hi, _, _ in self.pieces:
            if lo > hi or lo < prev_hi:
                raise ShapeError("pieces must be sorted and non-overlapping")
            prev_hi = hi

    @classmethod
    def constant_on(cls, interval, value: float) -> "PiecewiseFn":
        lo, hi = interval
        return cls(pieces=((lo, hi, 0.0, value),))

    @classmethod
    def step(cls, intervals, values) -> "PiecewiseFn":
        return cls(pieces=tuple((lo, hi, 0.0, v) for (lo, hi), v in zip(intervals, values)))

    @classmethod
    def indicator(cls, interval, support) -> "PiecewiseFn":
        """Characteristic function of ``interval`` on a clopen cover of support."""
        lo, hi = interval
        a, b = support
        return cls(pieces=((a, lo, 0.0, 0.0), (lo, hi, 0.0, 1.0), (hi, b, 0.0, 0.0)))

    def boundary_points(self) -> np.ndarray:
        pts = []
        for lo, hi, _, _ in self.pieces:
            pts.extend((lo, hi))
        return np.unique(np.asarray(pts, dtype=np.float64))

    def __call__(self, values: np.ndarray) -> np.ndarray:
        """Strict-membership evaluation; ties are excluded by the domain guard."""
        values = np.asarray(values, dtype=np.float64)
        out = np.full(values.shape, np.nan)
        for lo, hi, a, b in self.pieces:
            mask = (values >= lo) & (values <= hi) & np.isnan(out)
            out[mask] = a * values[mask] + b
        if np.isnan(out).any():
            raise DomainViolationError("an eigenvalue escapes every piece of the function")
        return out


def _as_curves(y) -> EigCurves:
    return y if isinstance(y, EigCurves) else eig_curves(y)


def domain_guard(curves: EigCurves, fn: PiecewiseFn) -> float:
    """Certified distance from the spectrum to the nearest piece boundary."""
    pts = fn.boundary_points()
    dist = np.maximum(
        curves.enc_lo[None, :, :] - pts[:, None, None],
        pts[:, None, None] - curves.enc_hi[None, :, :],
    )
    return float(dist.min())


def apply_fn(y, fn: PiecewiseFn) -> MatPath:
    """f(y) nodewise; requires the discontinuity guard to be positive."""
    curves = _as_curves(y)
    guard = domain_guard(curves, fn)
    if guard <= 0.0:
        raise DomainViolationError(
            f"a function boundary point meets the certified spectrum (margin {guard:.3e})"
        )
    vals = fn(curves.lam)
    u = curves.frames
    nodes = np.einsum("jik,jk,jlk->jil", u, vals, u.conj())
    nodes = (nodes + nodes.conj().transpose(0, 2, 1)) / 2.0
    return algebra._raw_path(nodes)


def spectral_projection(y, interval, min_margin: float = 0.0) -> MatPath:
    """chi_F(y) for a closed interval F certifiably clear of the spectrum.

    Nodewise the eigenvalues of the result are exactly 0 or 1 before
    rounding; the boundary guard makes membership ties impossible.
    """
    curves = _as_curves(y)
    lo, hi = float(interval[0]), float(interval[1])
    if lo > hi:
        raise ShapeError(f"empty interval [{lo}, {hi}]")
    pts = np.array([lo, hi])
    dist = np.maximum(
        curves.enc_lo[None, :, :] - pts[:, None, None],
        pts[:, None, None] - curves.enc_hi[None, :, :],
    ).min()
    if dist <= max(min_margin, 0.0):
        raise DomainViolationError(
            f"interval endpoint within {dist:.3e} of the certified spectrum "
            f"(required margin {min_margin:.3e})"
        )
    inside = (curves.lam >= lo) & (curves.lam <= hi)
    u = curves.frames
    nodes = np.einsum("jik,jk,jlk->jil", u, inside.astype(np.float64), u.conj())
    nodes = (nodes + nodes.conj().transpose(0, 2, 1)) / 2.0
    return algebra._raw_path(nodes)


def projection_continuity(p: MatPath) -> float:
    """Largest node-to-node jump of a projection path (diagnostic only)."""
    if p.m < 1:
        return 0.0
    return float(opnorm_batch(p.nodes[1:] - p.nodes[:-1]).max())


@dataclass(frozen=True)
class ResolutionReport:
    """Worst-case projection algebra defects over all nodes."""

    max_idempotency: float      # max ||p^2 - p||
    max_selfadjointness: float  # max ||p - p*||
    max_cross: float            # max over i != j of ||p_i p_j||
    sum_defect: float           # || sum p_i - I ||

    def to_dict(self) -> dict:
        return {
            "max_idempotency": self.max_idempotency,
            "max_selfadjointness": self.max_selfadjointness,
            "max_cross": self.max_cross,
            "sum_defect": self.sum_defect,
        }


def resolution_check(projections) -> ResolutionReport:
    """Measure how far a family of projection paths is from a resolution of identity."""
    projections = list(projections)
    if not projections:
        raise ShapeError("no projections given")
    m, n = projections[0].m, projections[0].n
    for p in projections:
        if p.m != m or p.n != n:
            raise ShapeError("projections live on different grids")
    eye = np.eye(n)
    max_idem = 0.0
    max_sa = 0.0
    max_cross = 0.0
    total = np.zeros((m + 1, n, n), dtype=np.complex128)
    nonzero = []
    for p in projections:
        total += p.nodes
        if np.abs(p.nodes).max() == 0.0:
            continue  # exact zero projection: contributes nothing anywhere
        nonzero.append(p)
        sq = np.einsum("jik,jkl->jil", p.nodes, p.nodes)
        max_idem = max(max_idem, float(opnorm_batch(sq - p.nodes).max()))
        max_sa = max(
            max_sa, float(opnorm_batch(p.nodes - p.nodes.conj().transpose(0, 2, 1)).max())
        )
    for i, p in enumerate(nonzero):
        for q in nonzero[i + 1 :]:
            prod = np.einsum("jik,jkl->jil", p.nodes, q.nodes)
            max_cross = max(max_cross, float(opnorm_batch(prod).max()))
            prod = np.einsum("jik,jkl->jil", q.nodes, p.nodes)
            max_cross = max(max_cross, float(opnorm_batch(prod).max()))
    sum_defect = float(opnorm_batch(total - eye[None]).max())
    return ResolutionReport(
        max_idempotency=max_idem,
        max_selfadjointness=max_sa,
        max_cross=max_cross,
        sum_defect=sum_defect,
    )
