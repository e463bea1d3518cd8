"""Element generators: a fixed named registry plus seeded random paths."""

from __future__ import annotations

import re

import numpy as np

from .algebra import MatPath, make_path, scalar_mul, sup_norm

RANDOM_TARGET_NORM = 0.9

_CONSTANT_DIAG = re.compile(r"constant-diag\(([^)]*)\)$")
_AVOIDED = re.compile(r"avoided-crossing(?:\(([^)]*)\))?$")


def scalar_line(m: int) -> MatPath:
    """The commutative counterexample: f(s) = 0.99 (2s - 1)."""
    s = np.arange(m + 1) / m
    nodes = (0.99 * (2.0 * s - 1.0)).reshape(m + 1, 1, 1)
    return make_path(1, m, nodes)


def avoided_crossing(gamma: float, m: int) -> MatPath:
    """Crossing diagonals 2s-1 and 1-2s coupled by gamma, scaled by 0.9."""
    s = np.arange(m + 1) / m
    nodes = np.zeros((m + 1, 2, 2), dtype=np.complex128)
    nodes[:, 0, 0] = 2.0 * s - 1.0
    nodes[:, 1, 1] = 1.0 - 2.0 * s
    nodes[:, 0, 1] = gamma
    nodes[:, 1, 0] = gamma
    return make_path(2, m, 0.9 * nodes)


def constant_diag(values, m: int) -> MatPath:
    vals = np.asarray(values, dtype=np.float64)
    nodes = np.zeros((m + 1, vals.size, vals.size), dtype=np.complex128)
    idx = np.arange(vals.size)
    nodes[:, idx, idx] = vals
    return make_path(vals.size, m, nodes)


def random_trig(n: int, m: int, q: int, seed: int) -> MatPath:
    """Trigonometric-polynomial Hermitian path rescaled to sup-norm <= 0.9.

    H(s) = sum over harmonics q' <= q of A_q' cos(2 pi q' s) + B_q' sin(2 pi q' s)
    with A, B independent random Hermitian coefficient matrices.
    """
    rng = np.random.default_rng(np.uint64(seed))
    s = np.arange(m + 1) / m
    nodes = np.zeros((m + 1, n, n), dtype=np.complex128)

    def herm() -> np.ndarray:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return (g + g.conj().T) / 2.0

    for harmonic in range(q + 1):
        a = herm()
        nodes += np.cos(2.0 * np.pi * harmonic * s)[:, None, None] * a
        if harmonic > 0:
            b = herm()
            nodes += np.sin(2.0 * np.pi * harmonic * s)[:, None, None] * b
    path = make_path(n, m, nodes)
    bound = sup_norm(path)
    if bound.node_max > 0.0:
        path = scalar_mul(RANDOM_TARGET_NORM / bound.value, path)
    return path


def named_instance(name: str, m: int) -> MatPath:
    """Look up a registry instance by name, e.g. 'avoided-crossing(0.3)'."""
    if name == "scalar-line":
        return scalar_line(m)
    match = _AVOIDED.match(name)
    if match:
        gamma = float(match.group(1)) if match.group(1) else 0.3
        return avoided_crossing(gamma, m)
    match = _CONSTANT_DIAG.match(name)
    if match:
        values = [float(v) for v in match.group(1).split(",") if v.strip()]
        if not values:
            raise ValueError("constant-diag needs at least one value")
        return constant_diag(values, m)
    raise ValueError(
        f"unknown instance {name!r}; expected scalar-line, "
        "avoided-crossing(gamma), constant-diag(v1,...), or random"
    )
