"""Finite-spectrum approximation driver and independent report verifier.

Given self-adjoint x with certified ||x|| < 1 and a tolerance eps, the driver
removes every point of a uniform partition of [-1, 1] from the spectrum of a
working copy within a geometric budget schedule, then rounds the cleaned
element to the partition values through spectral projections.  Every claimed
inequality lands in the report and is recomputable by ``verify_report`` from
the element and the report alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import algebra
from .algebra import MatPath, element_digest, path_from_dict, path_to_dict, sub, sup_norm
from .calculus import (
    projection_continuity,
    resolution_check,
    spectral_projection,
)
from .eig import eig_curves
from .errors import (
    CertificationError,
    DigestMismatchError,
    NormTooLargeError,
    ObstructionError,
    VerificationError,
)
from .jacobi import eigvalsh_batch
from .spectral import GapCert, Hit, level_gap
from .surgery import remove_level

REPORT_SCHEMA = "fsa-report/1"
OBSTRUCTION_SCHEMA = "fsa-obstruction/1"

CLUSTER_TOL = 1e-6
RESOLUTION_TOL = 1e-8

# multiplicative slack certifying strict inequalities under rounding
STRICT_GUARD = 1e-6


def make_partition(eps: float) -> np.ndarray:
    """Uniform levels -1 = t_1 < ... < t_n = 1 with mesh 2/(n-1) < eps/2, minimal n."""
    if eps <= 0:
        raise ValueError(f"tolerance must be positive, got {eps}")
    segs = max(1, math.floor(4.0 / eps))
    while 2.0 / segs >= eps / 2.0:
        segs += 1
    return -1.0 + 2.0 * np.arange(segs + 1) / segs


def budget_schedule(eps: float, i: int, current_gaps=()) -> float:
    """Budget for removing the i-th level (1-based).

    eps_1 = eps/4; afterwards eps_i = min(eps / 2^(i+1), half the smallest
    currently certified gap radius), which keeps every earlier level out of
    the spectrum: moving the element by less than half a gap cannot close it.
    """
    if i < 1:
        raise ValueError("level index is 1-based")
    if i == 1:
        return eps / 4.0
    cap = eps / 2.0 ** (i + 1)
    gaps = list(current_gaps)
    if gaps:
        return min(cap, 0.5 * min(gaps))
    return cap


@dataclass(frozen=True)
class LevelTrace:
    t: float
    budget: float
    moved: float
    gap: float
    clipped: bool
    plan: dict | None = None  # surgery plan for levels that actually clipped

    def to_dict(self) -> dict:
        out = {
            "t": self.t,
            "budget": self.budget,
            "moved": self.moved,
            "gap": self.gap,
            "clipped": self.clipped,
        }
        if self.plan is not None:
            out["plan"] = self.plan
        return out


@dataclass(frozen=True)
class ApproximantReport:
    """Successful run: approximant, certificates, and the full error chain."""

    input_digest: str
    n: int
    m: int
    eps: float
    partition: np.ndarray
    budgets: list
    levels: list  # LevelTrace
    final_gaps: list
    d: float
    intervals: list  # (lo, hi) pairs, one per partition cell
    interval_values: list
    error_chain: dict
    spectrum_size: int
    spectrum_values: list
    resolution: dict
    projection_continuity: float
    y_final: MatPath
    approximant: MatPath
    projections: list | None  # aligned with intervals; None when elided
    created_utc: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def to_dict(self) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "created_utc": self.created_utc,
            "input_digest": self.input_digest,
            "n": self.n,
            "m": self.m,
            "eps": self.eps,
            "partition": list(map(float, self.partition)),
            "mesh": float(self.partition[1] - self.partition[0]),
            "budgets": list(map(float, self.budgets)),
            "levels": [tr.to_dict() for tr in self.levels],
            "final_gaps": list(map(float, self.final_gaps)),
            "d": self.d,
            "intervals": [[float(a), float(b)] for a, b in self.intervals],
            "interval_values": list(map(float, self.interval_values)),
            "error_chain": self.error_chain,
            "spectrum_size": self.spectrum_size,
            "spectrum_values": list(map(float, self.spectrum_values)),
            "resolution": self.resolution,
            "projection_continuity": self.projection_continuity,
            "y_final": path_to_dict(self.y_final),
            "approximant": path_to_dict(self.approximant),
        }
        if self.projections is not None:
            out["projections"] = self.projections
        return out


@dataclass(frozen=True)
class ObstructionReport:
    """Failed run: the first level whose removal is provably impossible."""

    input_digest: str
    n: int
    m: int
    eps: float
    partition: np.ndarray
    budgets: list
    levels: list
    failed_index: int  # 1-based position in the partition
    failed_level: float
    budget: float
    certificate: dict
    moved_before_failure: float
    y_at_failure: MatPath
    created_utc: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def to_dict(self) -> dict:
        return {
            "schema": OBSTRUCTION_SCHEMA,
            "created_utc": self.created_utc,
            "input_digest": self.input_digest,
            "n": self.n,
            "m": self.m,
            "eps": self.eps,
            "partition": list(map(float, self.partition)),
            "budgets": list(map(float, self.budgets)),
            "levels": [tr.to_dict() for tr in self.levels],
            "failed_index": self.failed_index,
            "failed_level": self.failed_level,
            "budget": self.budget,
            "certificate": self.certificate,
            "moved_before_failure": self.moved_before_failure,
            "y_at_failure": path_to_dict(self.y_at_failure),
        }


def eigenvalue_clusters(values: np.ndarray, tol: float = CLUSTER_TOL) -> np.ndarray:
    """Representatives (means) of the tol-separated clusters of a value set."""
    v = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if v.size == 0:
        return v
    cuts = np.where(np.diff(v) > tol)[0]
    starts = np.concatenate(([0], cuts + 1))
    ends = np.concatenate((cuts + 1, [v.size]))
    return np.array([v[a:b].mean() for a, b in zip(starts, ends)])


def finite_spectrum_approximate(
    x: MatPath,
    eps: float,
    keep_projections: bool = True,
    eig_tol: float = 1e-12,
):
    """Run the full construction; returns ApproximantReport or ObstructionReport."""
    if not x.is_selfadjoint():
        raise NormTooLargeError("input path is not self-adjoint")
    bound = sup_norm(x)
    if not bound.value < 1.0:
        raise NormTooLargeError(
            f"certified sup-norm {bound.value} is not below 1"
        )
    if eps <= 0:
        raise ValueError(f"tolerance must be positive, got {eps}")
    digest = element_digest(x)
    ts = make_partition(eps)
    mesh = float(ts[1] - ts[0])

    y = x
    ycurves = eig_curves(x, tol=eig_tol)
    budgets: list[float] = []
    trace: list[LevelTrace] = []
    for i, t in enumerate(map(float, ts), start=1):
        prior = []
        for t_prev in ts[: i - 1]:
            g = level_gap(ycurves, float(t_prev))
            if isinstance(g, Hit):
                raise CertificationError(
                    f"certified gap at level {t_prev} was lost after later surgery; "
                    "refine the grid (increase m)"
                )
            prior.append(g.radius)
        eps_i = budget_schedule(eps, i, prior)
        budgets.append(eps_i)
        try:
            res = remove_level(y, t, eps_i, curves=ycurves)
        except ObstructionError as exc:
            return ObstructionReport(
                input_digest=digest,
                n=x.n,
                m=x.m,
                eps=eps,
                partition=ts,
                budgets=budgets,
                levels=trace,
                failed_index=i,
                failed_level=t,
                budget=eps_i,
                certificate=exc.certificate.to_dict(),
                moved_before_failure=float(sup_norm(sub(x, y)).value),
                y_at_failure=y,
            )
        y, ycurves = res.y, res.curves
        trace.append(
            LevelTrace(
                t=t,
                budget=eps_i,
                moved=res.moved,
                gap=res.gap.radius,
                clipped=res.clipped,
                plan=res.plan.to_dict() if res.clipped else None,
            )
        )

    return _assemble(x, y, eps, ts, mesh, budgets, trace, digest, eig_tol, keep_projections)


def _assemble(x, y, eps, ts, mesh, budgets, trace, digest, eig_tol, keep_projections):
    """Certify the cleaned element and round it to the partition values."""
    fcurves = eig_curves(y, tol=eig_tol)
    radii = []
    for t in map(float, ts):
        g = level_gap(fcurves, t)
        if isinstance(g, Hit):
            raise CertificationError(
                f"final enclosures cover level {t}; refine the grid (increase m)"
            )
        radii.append(g.radius)
    d = min(eps / 4.0 * (1.0 - STRICT_GUARD), 0.5 * min(radii))

    if (fcurves.enc_hi < ts[0]).any() or (fcurves.enc_lo > ts[-1]).any():
        raise CertificationError(
            "spectrum of the cleaned element escapes [-1, 1]; refine the grid"
        )
    intervals = [(float(ts[i]) + d / 2.0, float(ts[i + 1]) - d / 2.0) for i in range(len(ts) - 1)]
    values = [float(t) for t in ts[:-1]]

    # each enclosure must land inside a single cell interval
    mid = (fcurves.enc_lo + fcurves.enc_hi) / 2.0
    cell = np.clip(((mid - ts[0]) / mesh).astype(int), 0, len(intervals) - 1)
    f_lo = np.array([iv[0] for iv in intervals])[cell]
    f_hi = np.array([iv[1] for iv in intervals])[cell]
    if (fcurves.enc_lo < f_lo).any() or (fcurves.enc_hi > f_hi).any():
        raise CertificationError(
            "an enclosure straddles a cell boundary; refine the grid (increase m)"
        )

    projections = [
        spectral_projection(fcurves, iv, min_margin=d / 2.0) for iv in intervals
    ]
    b_nodes = np.zeros_like(y.nodes)
    for t_val, p in zip(values, projections):
        b_nodes = b_nodes + t_val * p.nodes
    b = algebra._raw_path(b_nodes)

    resolution = resolution_check(projections)
    worst = max(
        resolution.max_idempotency,
        resolution.max_selfadjointness,
        resolution.max_cross,
        resolution.sum_defect,
    )
    if worst > RESOLUTION_TOL:
        raise CertificationError(
            f"projection family defect {worst:.3e} exceeds {RESOLUTION_TOL}"
        )
    continuity = max(
        (projection_continuity(p) for p in projections if np.abs(p.nodes).max() > 0),
        default=0.0,
    )

    budget_sum = float(sum(budgets))
    x_to_y = float(sup_norm(sub(x, y)).value)
    y_to_b = mesh - d / 2.0
    y_to_b_actual = float(sup_norm(sub(y, b)).value)
    x_to_b = float(sup_norm(sub(x, b)).value)
    total = x_to_y + y_to_b
    chain_ok = (
        budget_sum < eps / 2.0
        and x_to_y <= budget_sum
        and y_to_b < eps / 2.0
        and y_to_b_actual <= y_to_b
        and total < eps
        and x_to_b < eps
    )
    if not chain_ok:
        raise CertificationError(
            "error chain failed to certify: "
            f"sum(eps_i)={budget_sum}, ||x-y||={x_to_y}, ||y-b||<={y_to_b} "
            f"(actual {y_to_b_actual}), total={total}, ||x-b||={x_to_b}, eps={eps}"
        )

    reps = eigenvalue_clusters(eigvalsh_batch(b.nodes))
    spectrum_values = sorted(
        {min(values, key=lambda t: abs(t - r)) for r in reps}
    )
    if len(reps) > len(ts) or any(
        min(abs(r - t) for t in values) > CLUSTER_TOL for r in reps
    ):
        raise CertificationError(
            "approximant spectrum does not collapse onto the partition values"
        )

    proj_payload = None
    if keep_projections:
        proj_payload = []
        for iv, t_val, p in zip(intervals, values, projections):
            entry = {"interval": [iv[0], iv[1]], "value": t_val}
            if np.abs(p.nodes).max() == 0.0:
                entry["zero"] = True
            else:
                entry["nodes"] = path_to_dict(p)["nodes"]
            proj_payload.append(entry)

    return ApproximantReport(
        input_digest=digest,
        n=x.n,
        m=x.m,
        eps=eps,
        partition=ts,
        budgets=budgets,
        levels=trace,
        final_gaps=radii,
        d=d,
        intervals=intervals,
        interval_values=values,
        error_chain={
            "budget_sum": budget_sum,
            "x_to_y": x_to_y,
            "y_to_b": y_to_b,
            "x_to_b": x_to_b,
            "total_bound": total,
            "eps": eps,
        },
        spectrum_size=int(len(reps)),
        spectrum_values=spectrum_values,
        resolution=resolution.to_dict(),
        projection_continuity=continuity,
        y_final=y,
        approximant=b,
        projections=proj_payload,
    )


# ---------------------------------------------------------------------------
# independent verification

def _close(a: float, b: float, rel: float = 1e-9, abs_tol: float = 1e-12) -> bool:
    return abs(a - b) <= abs_tol + rel * max(abs(a), abs(b))


def _require(cond: bool, check: str, detail: str) -> None:
    if not cond:
        raise VerificationError(check, detail)


def verify_report(x: MatPath, report: dict) -> list[str]:
    """Recompute every certified quantity of a report from x and the report.

    Returns the list of check names performed; raises VerificationError
    naming the first violated inequality, or DigestMismatchError when the
    report belongs to a different element.
    """
    schema = report.get("schema")
    if schema == REPORT_SCHEMA:
        return _verify_approximant(x, report)
    if schema == OBSTRUCTION_SCHEMA:
        return _verify_obstruction(x, report)
    raise VerificationError("schema", f"unknown report schema {schema!r}")


def _check_digest(x: MatPath, report: dict) -> None:
    if report.get("input_digest") != element_digest(x):
        raise DigestMismatchError(
            "report digest does not match the supplied element"
        )


def _verify_partition(eps: float, stored) -> np.ndarray:
    ts = make_partition(eps)
    _require(
        len(stored) == len(ts) and np.allclose(stored, ts, rtol=0, atol=1e-12),
        "partition",
        "stored partition does not match the one the tolerance dictates",
    )
    return ts


def _verify_approximant(x: MatPath, report: dict) -> list[str]:
    done = ["schema"]
    _check_digest(x, report)
    done.append("digest")

    _require(
        report.get("n") == x.n and report.get("m") == x.m,
        "element-shape",
        "report n/m do not match the element",
    )
    done.append("element-shape")

    eps = float(report["eps"])
    ts = _verify_partition(eps, report["partition"])
    mesh = float(ts[1] - ts[0])
    _require(_close(report["mesh"], mesh), "partition", "stored mesh mismatch")
    done.append("partition")

    budgets = [float(b) for b in report["budgets"]]
    _require(
        len(budgets) == len(ts) and _close(budgets[0], eps / 4.0),
        "budget-schedule",
        "first budget must be eps/4",
    )
    for i, b in enumerate(budgets[1:], start=2):
        _require(
            0.0 < b <= eps / 2.0 ** (i + 1) * (1 + 1e-12),
            "budget-schedule",
            f"budget {i} exceeds its geometric cap",
        )
    done.append("budget-schedule")

    budget_sum = float(report["error_chain"]["budget_sum"])
    _require(
        _close(sum(budgets), budget_sum) and budget_sum < eps / 2.0,
        "budget-sum",
        "budgets do not sum below eps/2 as recorded",
    )
    done.append("budget-sum")

    y = path_from_dict(report["y_final"])
    b = path_from_dict(report["approximant"])
    _require(
        y.n == x.n and y.m == x.m and b.n == x.n and b.m == x.m,
        "element-shape",
        "embedded paths do not match the element grid",
    )

    x_to_y = float(sup_norm(sub(x, y)).value)
    _require(
        _close(x_to_y, float(report["error_chain"]["x_to_y"])) and x_to_y <= budget_sum,
        "x-y-distance",
        f"recomputed ||x - y|| = {x_to_y} vs recorded "
        f"{report['error_chain']['x_to_y']} (must also stay within {budget_sum})",
    )
    done.append("x-y-distance")

    fcurves = eig_curves(y)
    stored_gaps = [float(g) for g in report["final_gaps"]]
    _require(len(stored_gaps) == len(ts), "final-gaps", "one gap per level required")
    radii = []
    for t, g_stored in zip(map(float, ts), stored_gaps):
        g = level_gap(fcurves, t)
        _require(
            isinstance(g, GapCert) and g.radius > 0 and _close(g.radius, g_stored),
            "final-gaps",
            f"gap at level {t}: recomputed "
            f"{g.radius if isinstance(g, GapCert) else 'hit'} vs recorded {g_stored}",
        )
        radii.append(g.radius)
    done.append("final-gaps")

    d = float(report["d"])
    d_expect = min(eps / 4.0 * (1.0 - STRICT_GUARD), 0.5 * min(radii))
    _require(
        d > 0 and _close(d, d_expect),
        "d-choice",
        f"recorded d = {d} vs recomputed {d_expect}",
    )
    done.append("d-choice")

    intervals = [(float(a), float(bb)) for a, bb in report["intervals"]]
    _require(
        len(intervals) == len(ts) - 1
        and len(report["interval_values"]) == len(ts) - 1
        and all(
            _close(iv[0], float(ts[i]) + d / 2.0) and _close(iv[1], float(ts[i + 1]) - d / 2.0)
            for i, iv in enumerate(intervals)
        )
        and all(
            _close(v, float(t)) for v, t in zip(report["interval_values"], ts[:-1])
        ),
        "intervals",
        "cell intervals are not [t_i + d/2, t_{i+1} - d/2] with value t_i",
    )
    done.append("intervals")

    _require(
        not (fcurves.enc_hi < ts[0]).any() and not (fcurves.enc_lo > ts[-1]).any(),
        "coverage",
        "spectrum of y escapes the partition range",
    )
    mid = (fcurves.enc_lo + fcurves.enc_hi) / 2.0
    cell = np.clip(((mid - ts[0]) / mesh).astype(int), 0, len(intervals) - 1)
    f_lo = np.array([iv[0] for iv in intervals])[cell]
    f_hi = np.array([iv[1] for iv in intervals])[cell]
    _require(
        not (fcurves.enc_lo < f_lo).any() and not (fcurves.enc_hi > f_hi).any(),
        "coverage",
        "an enclosure of y is not contained in a single cell interval",
    )
    done.append("coverage")

    y_to_b = float(report["error_chain"]["y_to_b"])
    _require(
        _close(y_to_b, mesh - d / 2.0) and y_to_b < eps / 2.0,
        "y-b-distance",
        f"recorded ||y - b|| bound {y_to_b} vs recomputed {mesh - d / 2.0}",
    )
    y_to_b_actual = float(sup_norm(sub(y, b)).value)
    _require(
        y_to_b_actual <= y_to_b * (1 + 1e-9) + 1e-12,
        "y-b-distance",
        f"actual ||y - b|| = {y_to_b_actual} exceeds the recorded bound {y_to_b}",
    )
    done.append("y-b-distance")

    x_to_b = float(sup_norm(sub(x, b)).value)
    total = float(report["error_chain"]["total_bound"])
    _require(
        _close(float(report["error_chain"]["eps"]), eps)
        and _close(total, x_to_y + y_to_b)
        and total < eps
        and _close(x_to_b, float(report["error_chain"]["x_to_b"]))
        and x_to_b < eps,
        "error-chain",
        f"||x - b|| = {x_to_b}, chained bound {total}, eps = {eps}",
    )
    done.append("error-chain")

    reps = eigenvalue_clusters(eigvalsh_batch(b.nodes))
    values = [float(t) for t in ts[:-1]]
    _require(
        len(reps) <= len(ts)
        and report["spectrum_size"] == len(reps)
        and all(min(abs(r - t) for t in values) <= CLUSTER_TOL for r in reps),
        "spectrum",
        f"{len(reps)} clusters (recorded {report['spectrum_size']}); "
        "all must sit on partition values",
    )
    stored_vals = [float(v) for v in report["spectrum_values"]]
    matched = sorted({min(values, key=lambda t: abs(t - r)) for r in reps})
    _require(
        len(stored_vals) == len(matched)
        and all(_close(a, bb) for a, bb in zip(stored_vals, matched)),
        "spectrum",
        "recorded spectrum values do not match the recomputed clusters",
    )
    done.append("spectrum")

    _require(b.is_selfadjoint(), "b-selfadjoint", "approximant is not self-adjoint")
    done.append("b-selfadjoint")

    if "projections" in report:
        _verify_projections(report, fcurves, d, intervals, values, b)
        done.append("projections")
    return done


def _verify_projections(report, fcurves, d, intervals, values, b) -> None:
    entries = report["projections"]
    _require(
        len(entries) == len(intervals),
        "projections",
        "one projection entry per cell interval required",
    )
    paths = []
    for entry, iv, t_val in zip(entries, intervals, values):
        _require(
            _close(entry["value"], t_val)
            and _close(entry["interval"][0], iv[0])
            and _close(entry["interval"][1], iv[1]),
            "projections",
            "projection entry interval/value mismatch",
        )
        p = spectral_projection(fcurves, iv, min_margin=d / 2.0)
        if entry.get("zero"):
            _require(
                np.abs(p.nodes).max() == 0.0,
                "projections",
                f"cell {iv} marked zero but carries spectrum",
            )
        else:
            stored = path_from_dict({"n": b.n, "m": b.m, "nodes": entry["nodes"]})
            _require(
                np.abs(stored.nodes - p.nodes).max() <= 1e-9,
                "projections",
                f"stored projection for cell {iv} does not match recomputation",
            )
        paths.append(p)
    res = resolution_check(paths)
    worst = max(
        res.max_idempotency, res.max_selfadjointness, res.max_cross, res.sum_defect
    )
    _require(
        worst <= RESOLUTION_TOL,
        "projections",
        f"projection family defect {worst:.3e}",
    )
    b_nodes = np.zeros_like(b.nodes)
    for t_val, p in zip(values, paths):
        b_nodes = b_nodes + t_val * p.nodes
    _require(
        float(np.abs(b_nodes - b.nodes).max()) <= 1e-9,
        "projections",
        "approximant does not match the projection combination",
    )


def _verify_obstruction(x: MatPath, report: dict) -> list[str]:
    done = ["schema"]
    _check_digest(x, report)
    done.append("digest")

    _require(
        report.get("n") == x.n and report.get("m") == x.m,
        "element-shape",
        "report n/m do not match the element",
    )
    done.append("element-shape")

    eps = float(report["eps"])
    ts = _verify_partition(eps, report["partition"])
    done.append("partition")

    idx = report["failed_index"]
    _require(
        isinstance(idx, int)
        and 1 <= idx <= len(ts)
        and _close(float(report["failed_level"]), float(ts[idx - 1])),
        "obstruction-level",
        "failed level is not the recorded partition point",
    )
    done.append("obstruction-level")

    budget = float(report["budget"])
    budgets = [float(bb) for bb in report["budgets"]]
    cap = eps / 4.0 if idx == 1 else eps / 2.0 ** (idx + 1)
    caps_ok = all(
        0.0 < bb <= (eps / 4.0 if i == 1 else eps / 2.0 ** (i + 1)) * (1 + 1e-12)
        for i, bb in enumerate(budgets, start=1)
    )
    _require(
        0.0 < budget <= cap * (1 + 1e-12)
        and len(budgets) == idx
        and _close(budgets[-1], budget)
        and caps_ok,
        "obstruction-budget",
        f"budget {budget} inconsistent with the schedule cap {cap}",
    )
    done.append("obstruction-budget")

    cert = report["certificate"]
    y = path_from_dict(report["y_at_failure"])
    _require(
        y.n == x.n and y.m == x.m,
        "element-shape",
        "y_at_failure does not match the element grid",
    )
    t = float(cert["level"])
    delta = float(cert["delta"])
    k = int(cert["curve"])
    j_minus = int(cert["j_minus"])
    j_plus = int(cert["j_plus"])
    _require(
        _close(t, float(report["failed_level"]))
        and _close(delta, budget)
        and 1 <= k <= x.n
        and 0 <= j_minus <= x.m
        and 0 <= j_plus <= x.m
        and _close(float(cert["s_minus"]), j_minus / x.m)
        and _close(float(cert["s_plus"]), j_plus / x.m),
        "obstruction-witness",
        "certificate indices/level inconsistent with the report",
    )
    lam = eigvalsh_batch(y.nodes[[j_minus, j_plus]])
    lo = float(lam[0, k - 1])
    hi = float(lam[1, k - 1])
    slack = 1e-9 * (1.0 + abs(t) + abs(lo) + abs(hi))
    _require(
        _close(lo, float(cert["lambda_minus"]), rel=1e-7, abs_tol=1e-9)
        and _close(hi, float(cert["lambda_plus"]), rel=1e-7, abs_tol=1e-9)
        and lo <= t - delta + slack
        and hi >= t + delta - slack,
        "obstruction-witness",
        f"witness values lam({j_minus}) = {lo}, lam({j_plus}) = {hi} do not pin "
        f"level {t} at budget {delta}",
    )
    done.append("obstruction-witness")

    moved = float(report["moved_before_failure"])
    actual = float(sup_norm(sub(x, y)).value)
    spent = sum(budgets[:-1])
    _require(
        _close(actual, moved) and moved <= spent + 1e-12,
        "obstruction-moved",
        f"||x - y_at_failure|| = {actual} vs recorded {moved} (spent budget {spent})",
    )
    done.append("obstruction-moved")
    return done
