"""Elements of C([0,1], M_n(C)) as piecewise-linear matrix paths.

A path is stored by its values on the uniform grid s_j = j/m and interpolated
affinely on each segment.  Self-adjoint elements are symmetrized exactly at
construction, so stored nodes satisfy H == H* bit for bit.  A diagonal pair
(a, a) is represented by the single path a: every norm and spectral quantity
of the pair equals that of one copy.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .jacobi import opnorm_batch

# warn when a loaded node is this far from Hermitian (it is symmetrized anyway)
HERMITIAN_WARN_TOL = 1e-6

# absolute/relative cushion added to certified norm values; covers eigensolver
# rounding (~1e-14 * scale) with two orders to spare
NORM_GUARD = 1e-12


@dataclass(frozen=True)
class MatPath:
    """A matrix-valued path: nodes[j] is the value at s_j = j/m."""

    n: int
    m: int
    nodes: np.ndarray  # (m+1, n, n) complex128, write-locked

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ShapeError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.nodes.shape != (self.m + 1, self.n, self.n):
            raise ShapeError(
                f"nodes shape {self.nodes.shape} != {(self.m + 1, self.n, self.n)}"
            )

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m

    def is_selfadjoint(self) -> bool:
        return np.array_equal(self.nodes, self.nodes.conj().transpose(0, 2, 1))

    def at(self, s: float) -> np.ndarray:
        """Value of the affine interpolant at s in [0, 1]."""
        if not 0.0 <= s <= 1.0:
            raise ValueError(f"parameter {s} outside [0, 1]")
        j = min(int(np.floor(s * self.m)), self.m - 1)
        theta = s * self.m - j
        return self.nodes[j] + theta * (self.nodes[j + 1] - self.nodes[j])


@dataclass(frozen=True)
class CertifiedBound:
    """A rigorous upper bound for a path sup-norm.

    ``node_max`` is the exact maximum over grid nodes; ``value`` adds the
    floating-point cushion ``inflation``.  Because each segment is affine and
    norms are convex, the true sup over [0,1] is attained at a node, so
    node_max <= sup-norm <= value.
    """

    value: float
    node_max: float
    inflation: float


def _lock(nodes: np.ndarray) -> np.ndarray:
    nodes = np.ascontiguousarray(nodes, dtype=np.complex128)
    nodes.flags.writeable = False
    return nodes


def _raw_path(nodes: np.ndarray) -> MatPath:
    """Wrap node values as-is (no symmetrization); internal constructor."""
    nodes = _lock(nodes)
    return MatPath(n=nodes.shape[1], m=nodes.shape[0] - 1, nodes=nodes)


def make_path(n: int, m: int, node_matrices) -> MatPath:
    """Build a self-adjoint path from m+1 matrices, symmetrizing each node."""
    if m < 1:
        raise ShapeError("need at least one segment (m >= 1)")
    nodes = np.asarray(node_matrices, dtype=np.complex128)
    if nodes.shape != (m + 1, n, n):
        raise ShapeError(f"expected {m + 1} matrices of shape ({n}, {n}), got {nodes.shape}")
    sym = (nodes + nodes.conj().transpose(0, 2, 1)) / 2.0
    return _raw_path(sym)


def constant_path(matrix, m: int = 1) -> MatPath:
    h = np.asarray(matrix, dtype=np.complex128)
    return make_path(h.shape[0], m, np.broadcast_to(h, (m + 1, *h.shape)))


def _check_same_shape(x: MatPath, y: MatPath) -> None:
    if x.n != y.n or x.m != y.m:
        raise ShapeError(f"shape mismatch: ({x.n},{x.m}) vs ({y.n},{y.m})")


def add(x: MatPath, y: MatPath) -> MatPath:
    _check_same_shape(x, y)
    return _raw_path(x.nodes + y.nodes)


def sub(x: MatPath, y: MatPath) -> MatPath:
    _check_same_shape(x, y)
    return _raw_path(x.nodes - y.nodes)


def scalar_mul(c: complex, x: MatPath) -> MatPath:
    return _raw_path(c * x.nodes)


def mul(x: MatPath, y: MatPath) -> MatPath:
    """Pointwise product; not symmetrized (x*y is self-adjoint only if they commute)."""
    _check_same_shape(x, y)
    return _raw_path(np.einsum("jik,jkl->jil", x.nodes, y.nodes))


def adjoint(x: MatPath) -> MatPath:
    return _raw_path(x.nodes.conj().transpose(0, 2, 1))


def shift(x: MatPath, t: float) -> MatPath:
    """x - t * identity."""
    nodes = x.nodes.copy()
    idx = np.arange(x.n)
    nodes[:, idx, idx] -= t
    return _raw_path(nodes)


def identity_path(n: int, m: int = 1) -> MatPath:
    return constant_path(np.eye(n), m)


def sup_norm(x: MatPath) -> CertifiedBound:
    """Certified sup over [0,1] of the pointwise operator norm.

    The interpolant is affine on each segment and norms are convex, so the
    sup equals the node maximum exactly; ``value`` only adds a cushion for
    eigensolver rounding in the node norms themselves.
    """
    node_max = float(opnorm_batch(x.nodes).max())
    inflation = NORM_GUARD * (1.0 + node_max)
    return CertifiedBound(value=node_max + inflation, node_max=node_max, inflation=inflation)


def refine(x: MatPath, factor: int) -> MatPath:
    """Resample on a factor-times finer grid (same interpolant)."""
    if factor < 1:
        raise ValueError("refinement factor must be >= 1")
    m2 = x.m * factor
    j = np.arange(m2 + 1)
    base = np.minimum(j // factor, x.m - 1)
    theta = (j - base * factor) / factor
    lo = x.nodes[base]
    hi = x.nodes[base + 1]
    return _raw_path(lo + theta[:, None, None] * (hi - lo))


# ---------------------------------------------------------------------------
# element files: {"n": int, "m": int, "nodes": [[[[re, im], ...] ...] ...]}

def path_to_dict(x: MatPath) -> dict:
    nodes = np.stack([x.nodes.real, x.nodes.imag], axis=-1)
    return {"n": x.n, "m": x.m, "nodes": nodes.tolist()}


def path_from_dict(data: dict, warn_tol: float = HERMITIAN_WARN_TOL) -> MatPath:
    try:
        n = int(data["n"])
        m = int(data["m"])
        raw = np.asarray(data["nodes"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"malformed element data: {exc}") from exc
    if raw.shape != (m + 1, n, n, 2):
        raise ShapeError(f"element nodes shape {raw.shape} != {(m + 1, n, n, 2)}")
    nodes = raw[..., 0] + 1j * raw[..., 1]
    defect = np.abs(nodes - nodes.conj().transpose(0, 2, 1)).max(axis=(1, 2))
    scale = 1.0 + np.abs(nodes).max()
    if (defect > warn_tol * scale).any():
        worst = int(defect.argmax())
        warnings.warn(
            f"element node {worst} deviates from Hermitian by {defect[worst]:.3e}; "
            "symmetrizing",
            stacklevel=2,
        )
    return make_path(n, m, nodes)


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False)


def element_digest(x: MatPath) -> str:
    payload = canonical_json(path_to_dict(x)).encode("utf-8")
    return "sha256:" + hashlib.sha256(payload).hexdigest()


def save_element(x: MatPath, fp) -> None:
    fp.write(canonical_json(path_to_dict(x)))


def load_element(fp, warn_tol: float = HERMITIAN_WARN_TOL) -> MatPath:
    return path_from_dict(json.load(fp), warn_tol=warn_tol)
