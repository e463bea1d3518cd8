"""Sorted eigenvalue curves along a path and rigorous segment enclosures.

Curves are matched by sorted index, not eigenvector continuation: the k-th
ascending eigenvalue is a continuous, Weyl-stable function of the node, which
is exactly what the gap and obstruction logic downstream needs.  Degeneracies
only permute an orthonormal basis inside an eigenspace; downstream operations
must not depend on that choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import MatPath
from .errors import NonHermitianError, ShapeError
from .jacobi import (
    eigh_single,
    hermiticity_defect,
    jacobi_eigh_batch,
    opnorm_hermitian_batch,
)

# outward cushion on segment enclosures, scaled per segment; absorbs solver
# rounding (~1e-14 * scale) so that containment survives floating point
ENCLOSURE_PAD = 1e-12


@dataclass(frozen=True)
class EigCurves:
    """Nodewise eigendecompositions of a self-adjoint path.

    lam[j, k] is the k-th ascending eigenvalue at node j, frames[j] the
    corresponding unitary with x(s_j) = U_j diag(lam_j) U_j*.  seg_var[j] is
    the operator norm of x(s_{j+1}) - x(s_j); by Weyl's inequality each curve
    moves by at most seg_var[j] across segment j.  enc_lo/enc_hi are the
    precomputed per-segment enclosures (see segment_enclosure).
    """

    path: MatPath
    lam: np.ndarray      # (m+1, n) float64, ascending in k at each node
    frames: np.ndarray   # (m+1, n, n) complex128
    seg_var: np.ndarray  # (m,) float64
    enc_lo: np.ndarray   # (m, n) float64
    enc_hi: np.ndarray   # (m, n) float64

    @property
    def n(self) -> int:
        return self.path.n

    @property
    def m(self) -> int:
        return self.path.m

    def curve_sup(self) -> np.ndarray:
        """Certified per-curve sup over all of [0, 1]; shape (n,)."""
        return self.enc_hi.max(axis=0)

    def curve_inf(self) -> np.ndarray:
        return self.enc_lo.min(axis=0)


def eig_hermitian(h, tol: float = 1e-12):
    """Eigendecomposition of one Hermitian matrix.

    Returns (lam ascending, U with orthonormal columns).  Deterministic:
    identical input bits give identical output bits.
    """
    return eigh_single(h, tol=tol)


def _enclosures(lam: np.ndarray, seg_var: np.ndarray):
    """Per-curve, per-segment intervals containing the interpolant's eigenvalues.

    On segment j the interpolant moves from x(s_j) to x(s_{j+1}) along a line,
    so by Weyl lam_k(x(s)) stays within distance theta * L_j of lam_k(s_j) and
    (1 - theta) * L_j of lam_k(s_{j+1}).  Intersecting the two cones over all
    theta gives hull(endpoints) inflated by r = max(0, (L_j - |dlam|) / 2).
    """
    a = lam[:-1, :]
    b = lam[1:, :]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    radius = np.maximum(0.0, (seg_var[:, None] - (hi - lo)) / 2.0)
    # one pad per segment (shared by all curves, keeping per-curve sups and
    # infs monotone in k), covering solver rounding in lam and seg_var
    pad = ENCLOSURE_PAD * (
        1.0 + np.abs(lam).max(initial=0.0) + seg_var[:, None]
    )
    return lo - radius - pad, hi + radius + pad


def make_curves(path: MatPath, lam: np.ndarray, frames: np.ndarray) -> EigCurves:
    """Assemble EigCurves from known nodewise decompositions of ``path``."""
    if lam.shape != (path.m + 1, path.n):
        raise ShapeError(f"lam shape {lam.shape} != {(path.m + 1, path.n)}")
    diffs = path.nodes[1:] - path.nodes[:-1]
    seg_var = opnorm_hermitian_batch(diffs) if path.m >= 1 else np.zeros(0)
    enc_lo, enc_hi = _enclosures(lam, seg_var)
    return EigCurves(
        path=path, lam=lam, frames=frames, seg_var=seg_var, enc_lo=enc_lo, enc_hi=enc_hi
    )


def eig_curves(x: MatPath, tol: float = 1e-12) -> EigCurves:
    """Decompose every node of a self-adjoint path; curves sorted ascending."""
    scale = 1.0 + np.abs(x.nodes).max()
    defect = hermiticity_defect(x.nodes).max()
    if defect > tol * scale:
        raise NonHermitianError(
            f"path is not self-adjoint within tolerance (defect {defect:.3e})"
        )
    lam, frames = jacobi_eigh_batch(x.nodes, want_vectors=True)
    return make_curves(x, lam, frames)


def segment_enclosure(curves: EigCurves, j: int, k: int):
    """Interval certified to contain lam_k(x(s)) for s in segment j."""
    if not (0 <= j < curves.m and 0 <= k < curves.n):
        raise ShapeError(f"segment {j} / curve {k} out of range")
    return float(curves.enc_lo[j, k]), float(curves.enc_hi[j, k])
