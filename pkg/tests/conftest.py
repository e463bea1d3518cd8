"""Shared helpers: independent oracles and random generators for the tests."""

import math

import numpy as np
import pytest

from fsalab import MatPath, make_path


def char_poly_eigs(h) -> np.ndarray:
    """Closed-form characteristic-polynomial roots for Hermitian n <= 3.

    Independent oracle: quadratic formula for n = 2 and the trigonometric
    cubic for n = 3; shares nothing with the Jacobi iteration.
    """
    h = np.asarray(h, dtype=np.complex128)
    n = h.shape[0]
    if n == 1:
        return np.array([h[0, 0].real])
    if n == 2:
        tr = (h[0, 0] + h[1, 1]).real
        det = (h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]).real
        root = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
        return np.array([(tr - root) / 2.0, (tr + root) / 2.0])
    if n == 3:
        q = np.trace(h).real / 3.0
        a = h - q * np.eye(3)
        p = math.sqrt(max(float((np.abs(a) ** 2).sum()) / 6.0, 0.0))
        if p == 0.0:
            return np.array([q, q, q])
        bm = a / p
        det = (
            bm[0, 0] * (bm[1, 1] * bm[2, 2] - bm[1, 2] * bm[2, 1])
            - bm[0, 1] * (bm[1, 0] * bm[2, 2] - bm[1, 2] * bm[2, 0])
            + bm[0, 2] * (bm[1, 0] * bm[2, 1] - bm[1, 1] * bm[2, 0])
        ).real
        phi = math.acos(min(1.0, max(-1.0, det / 2.0))) / 3.0
        lam1 = q + 2.0 * p * math.cos(phi)
        lam3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
        return np.sort([lam1, 3.0 * q - lam1 - lam3, lam3])
    raise ValueError("oracle covers n <= 3 only")


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (g + g.conj().T) / 2.0


def random_selfadjoint_path(
    rng: np.random.Generator, n: int, m: int, scale: float = 0.4
) -> MatPath:
    nodes = np.stack([random_hermitian(rng, n, scale) for _ in range(m + 1)])
    return make_path(n, m, nodes)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
