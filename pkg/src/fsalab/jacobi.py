"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

Operates on whole batches at once: every matrix in the batch runs the same
fixed (p, q) rotation schedule, so the result for a given matrix depends only
on its own input bits.  Converged matrices are frozen (identity rotations),
which makes the batched output bit-identical to running each matrix alone.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, NonHermitianError, ShapeError

# Stopping rule: off-diagonal Frobenius mass <= OFF_TOL * ||H||_F, at most
# MAX_SWEEPS cyclic sweeps.  Dimension is capped; this is a small-matrix tool.
OFF_TOL = 1e-14
MAX_SWEEPS = 100
MAX_DIM = 64


def _as_batch(mats) -> np.ndarray:
    a = np.asarray(mats, dtype=np.complex128)
    if a.ndim == 2:
        a = a[None, :, :]
    if a.ndim != 3 or a.shape[-1] != a.shape[-2]:
        raise ShapeError(f"expected square matrices, got shape {a.shape}")
    return a


def _offdiag_mass_sq(a: np.ndarray) -> np.ndarray:
    # summed directly over off-diagonal entries; subtracting the diagonal
    # mass from the total cancels catastrophically near convergence
    off = a.copy()
    idx = np.arange(a.shape[-1])
    off[:, idx, idx] = 0.0
    return np.einsum("bij,bij->b", off, off.conj()).real


def hermiticity_defect(mats) -> np.ndarray:
    """Max-entry distance of each matrix from its adjoint."""
    a = _as_batch(mats)
    return np.abs(a - a.conj().transpose(0, 2, 1)).max(axis=(1, 2))


def jacobi_eigh_batch(mats, want_vectors: bool = True):
    """Eigendecompose a batch of Hermitian matrices.

    Returns (lam, vecs) with lam of shape (B, n) ascending per matrix and
    vecs of shape (B, n, n) with orthonormal eigenvector columns, or
    (lam, None) when want_vectors is False.  The caller is responsible for
    hermiticity checks; the input is symmetrized exactly before iterating.
    """
    a = _as_batch(mats)
    nb, n, _ = a.shape
    if n > MAX_DIM:
        raise ShapeError(f"matrix dimension {n} exceeds supported maximum {MAX_DIM}")
    a = (a + a.conj().transpose(0, 2, 1)) / 2.0
    frob = np.sqrt(np.einsum("bij,bij->b", a, a.conj()).real)
    thresh_sq = (OFF_TOL * frob) ** 2

    vecs = None
    if want_vectors:
        vecs = np.zeros((nb, n, n), dtype=np.complex128)
        vecs[:, np.arange(n), np.arange(n)] = 1.0

    if n > 1:
        converged = _offdiag_mass_sq(a) <= thresh_sq
        for _ in range(MAX_SWEEPS):
            if converged.all():
                break
            active = ~converged
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate_pair(a, vecs, p, q, active)
            # keep the iterates exactly Hermitian; dust accumulates otherwise
            a = (a + a.conj().transpose(0, 2, 1)) / 2.0
            converged = _offdiag_mass_sq(a) <= thresh_sq
        else:
            raise ConvergenceError(
                f"Jacobi sweep limit {MAX_SWEEPS} reached "
                f"(worst off-mass {np.sqrt(_offdiag_mass_sq(a).max()):.3e})"
            )

    lam_raw = np.einsum("bii->bi", a).real.copy()
    order = np.argsort(lam_raw, axis=1, kind="stable")
    lam = np.take_along_axis(lam_raw, order, axis=1)
    if want_vectors:
        vecs = np.take_along_axis(vecs, order[:, None, :], axis=2)
    return lam, vecs


def _rotate_pair(a, vecs, p, q, active) -> None:
    """Apply one batched Jacobi rotation zeroing the (p, q) entries."""
    apq = a[:, p, q]
    az = np.abs(apq)
    rot = active & (az > 0.0)
    if not rot.any():
        return
    safe = np.where(az > 0.0, az, 1.0)
    w = np.where(rot, apq / safe, 1.0)  # phase of the eliminated entry
    app = a[:, p, p].real
    aqq = a[:, q, q].real
    with np.errstate(over="ignore"):
        tau = (aqq - app) / (2.0 * safe)
        t = -np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    c = np.where(rot, c, 1.0)
    s = np.where(rot, s, 0.0)
    w = np.where(rot, w, 1.0)
    wc = w.conj()

    # unitary J: identity except J[p,p]=c, J[p,q]=-s, J[q,p]=conj(w) s, J[q,q]=conj(w) c
    colp = a[:, :, p].copy()
    colq = a[:, :, q]
    a[:, :, p] = colp * c[:, None] + colq * (wc * s)[:, None]
    a[:, :, q] = colp * (-s)[:, None] + colq * (wc * c)[:, None]
    rowp = a[:, p, :].copy()
    rowq = a[:, q, :]
    a[:, p, :] = rowp * c[:, None] + rowq * (w * s)[:, None]
    a[:, q, :] = rowp * (-s)[:, None] + rowq * (w * c)[:, None]
    a[:, p, q] = np.where(rot, 0.0, a[:, p, q])
    a[:, q, p] = np.where(rot, 0.0, a[:, q, p])

    if vecs is not None:
        vp = vecs[:, :, p].copy()
        vq = vecs[:, :, q]
        vecs[:, :, p] = vp * c[:, None] + vq * (wc * s)[:, None]
        vecs[:, :, q] = vp * (-s)[:, None] + vq * (wc * c)[:, None]


def eigh_single(h, tol: float = 1e-12):
    """Decompose one Hermitian matrix; rejects inputs asymmetric beyond tol."""
    a = _as_batch(h)
    if a.shape[0] != 1:
        raise ShapeError("eigh_single expects a single matrix")
    scale = 1.0 + np.abs(a[0]).max()
    if hermiticity_defect(a)[0] > tol * scale:
        raise NonHermitianError(
            f"input is not Hermitian within tolerance {tol:g} (defect "
            f"{hermiticity_defect(a)[0]:.3e}, scale {scale:.3e})"
        )
    lam, vecs = jacobi_eigh_batch(a, want_vectors=True)
    return lam[0], vecs[0]


def eigvalsh_batch(mats) -> np.ndarray:
    lam, _ = jacobi_eigh_batch(mats, want_vectors=False)
    return lam


def opnorm_hermitian_batch(mats) -> np.ndarray:
    """Operator norms (max |eigenvalue|) of a batch of Hermitian matrices."""
    lam = eigvalsh_batch(mats)
    return np.abs(lam).max(axis=1)


def opnorm(mat) -> float:
    """Operator norm of one matrix; general case via the largest singular value."""
    a = _as_batch(mat)[0]
    if np.array_equal(a, a.conj().T):
        return float(opnorm_hermitian_batch(a[None])[0])
    gram = a.conj().T @ a
    lam = eigvalsh_batch(gram[None])[0]
    return float(np.sqrt(max(lam[-1], 0.0)))


def opnorm_batch(mats) -> np.ndarray:
    """Operator norms of a batch of arbitrary square matrices."""
    a = _as_batch(mats)
    herm = np.abs(a - a.conj().transpose(0, 2, 1)).max(axis=(1, 2)) == 0.0
    out = np.empty(a.shape[0])
    if herm.any():
        out[herm] = opnorm_hermitian_batch(a[herm])
    rest = ~herm
    if rest.any():
        g = np.einsum("bki,bkj->bij", a[rest].conj(), a[rest])
        lam = eigvalsh_batch(g)
        out[rest] = np.sqrt(np.maximum(lam[:, -1], 0.0))
    return out
