"""Approximate spectrum, gap certificates, and removability of a level.

A gap certificate is sound because the open interval it names intersects no
segment enclosure, and the enclosures cover the spectrum of the interpolant.
An obstruction certificate is sound against *all* perturbations below the
budget: if a sorted curve takes node values on both sides of the level by at
least delta, Weyl's inequality pins the perturbed curve strictly below the
level at one node and strictly above at the other, and continuity forces a
crossing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eig import EigCurves, eig_curves

MERGE_TOL_DEFAULT = 1e-9

DOWN = "down"
UP = "up"
BOTH = "both"
OBSTRUCTED = "obstructed"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GapCert:
    """(level - radius, level + radius) intersects no enclosure; radius > 0."""

    level: float
    radius: float

    def to_dict(self) -> dict:
        return {"kind": "gap", "level": self.level, "radius": self.radius}


@dataclass(frozen=True)
class Hit:
    """An enclosure meeting the level; names the witnessing curve/segment."""

    level: float
    curve: int    # 1-based
    segment: int  # 0-based
    lo: float
    hi: float

    def to_dict(self) -> dict:
        return {
            "kind": "hit",
            "level": self.level,
            "curve": self.curve,
            "segment": self.segment,
            "enclosure": [self.lo, self.hi],
        }


@dataclass(frozen=True)
class ObstructionCert:
    """Node witnesses proving level t cannot be avoided within budget delta.

    lam_minus = lam_k(s_minus) <= t - delta and lam_plus = lam_k(s_plus)
    >= t + delta hold on exact stored node values.
    """

    level: float
    delta: float
    curve: int  # 1-based
    j_minus: int
    j_plus: int
    s_minus: float
    s_plus: float
    lam_minus: float
    lam_plus: float

    def to_dict(self) -> dict:
        return {
            "kind": "obstruction",
            "level": self.level,
            "delta": self.delta,
            "curve": self.curve,
            "j_minus": self.j_minus,
            "j_plus": self.j_plus,
            "s_minus": self.s_minus,
            "s_plus": self.s_plus,
            "lambda_minus": self.lam_minus,
            "lambda_plus": self.lam_plus,
        }


@dataclass(frozen=True)
class CurveFeasibility:
    curve: int  # 1-based
    verdict: str  # DOWN | UP | BOTH | OBSTRUCTED | INCONCLUSIVE
    sup: float
    inf: float
    witness: ObstructionCert | None = None


@dataclass(frozen=True)
class SpectrumReport:
    bands: tuple  # ((lo, hi), ...) sorted, disjoint
    per_level: dict  # level -> GapCert | Hit

    def to_dict(self) -> dict:
        return {
            "bands": [[lo, hi] for lo, hi in self.bands],
            "per_level": {repr(t): c.to_dict() for t, c in self.per_level.items()},
        }


def _as_curves(x) -> EigCurves:
    return x if isinstance(x, EigCurves) else eig_curves(x)


def spectrum_bands(x, merge_tol: float = MERGE_TOL_DEFAULT, levels=()) -> SpectrumReport:
    """Union of all segment enclosures, merged into sorted disjoint bands."""
    curves = _as_curves(x)
    lo = curves.enc_lo.ravel()
    hi = curves.enc_hi.ravel()
    order = np.argsort(lo, kind="stable")
    bands = []
    for a, b in zip(lo[order], hi[order]):
        if bands and a <= bands[-1][1] + merge_tol:
            bands[-1][1] = max(bands[-1][1], b)
        else:
            bands.append([a, b])
    per_level = {float(t): level_gap(curves, float(t)) for t in levels}
    return SpectrumReport(bands=tuple((a, b) for a, b in bands), per_level=per_level)


def level_gap(x, t: float):
    """Largest gap radius certifiable from enclosures, or the blocking Hit."""
    curves = _as_curves(x)
    dist = np.maximum(curves.enc_lo - t, t - curves.enc_hi)
    j, k = np.unravel_index(int(dist.argmin()), dist.shape)
    g = float(dist[j, k])
    if g <= 0.0:
        return Hit(
            level=t,
            curve=int(k) + 1,
            segment=int(j),
            lo=float(curves.enc_lo[j, k]),
            hi=float(curves.enc_hi[j, k]),
        )
    return GapCert(level=t, radius=g)


def check_removability(curves: EigCurves, t: float, delta: float) -> list[CurveFeasibility]:
    """Classify each sorted curve against level t at budget delta.

    down: the whole certified curve lies below t + delta, so clipping it
    under the level costs less than delta.  up: symmetric.  obstructed: node
    values witness the curve on both sides of the level by at least delta,
    which no perturbation below delta can undo.  Anything else is
    inconclusive: refine the grid.
    """
    if delta <= 0:
        raise ValueError("budget delta must be positive")
    curves = _as_curves(curves)
    sups = curves.curve_sup()
    infs = curves.curve_inf()
    grid = curves.path.grid
    out = []
    for k in range(curves.n):
        lam_k = curves.lam[:, k]
        down = bool(sups[k] < t + delta)
        up = bool(infs[k] > t - delta)
        if down and up:
            verdict, witness = BOTH, None
        elif down:
            verdict, witness = DOWN, None
        elif up:
            verdict, witness = UP, None
        else:
            j_minus = int(lam_k.argmin())
            j_plus = int(lam_k.argmax())
            if lam_k[j_minus] <= t - delta and lam_k[j_plus] >= t + delta:
                verdict = OBSTRUCTED
                witness = ObstructionCert(
                    level=t,
                    delta=delta,
                    curve=k + 1,
                    j_minus=j_minus,
                    j_plus=j_plus,
                    s_minus=float(grid[j_minus]),
                    s_plus=float(grid[j_plus]),
                    lam_minus=float(lam_k[j_minus]),
                    lam_plus=float(lam_k[j_plus]),
                )
            else:
                verdict, witness = INCONCLUSIVE, None
        out.append(
            CurveFeasibility(
                curve=k + 1,
                verdict=verdict,
                sup=float(sups[k]),
                inf=float(infs[k]),
                witness=witness,
            )
        )
    return out
