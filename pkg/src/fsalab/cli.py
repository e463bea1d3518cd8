"""Command-line front end: gen | approx | verify | bands.

Exit codes: 0 ok, 2 precondition violated, 3 obstruction certified,
4 certification failed (grid too coarse), 5 verification failed,
6 digest mismatch, 1 unexpected error.

FSA_THREADS caps the numeric backend's thread pools (0 or unset = auto);
it must be applied before numpy loads, so the heavy imports happen inside
main() after the environment is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_PRECONDITION = 2
EXIT_OBSTRUCTION = 3
EXIT_CERTIFICATION = 4
EXIT_VERIFY = 5
EXIT_DIGEST = 6


def _apply_thread_cap() -> None:
    raw = os.environ.get("FSA_THREADS", "").strip()
    if not raw:
        return
    try:
        cap = int(raw)
    except ValueError:
        return
    if cap > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(cap))


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fsa-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fp:
            fp.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsa",
        description="Finite-spectrum approximation of Hermitian matrix paths with "
        "machine-checkable certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate an element JSON file")
    p_gen.add_argument(
        "spec",
        help="scalar-line | avoided-crossing(gamma) | constant-diag(v1,...) | random",
    )
    p_gen.add_argument("--n", type=int, default=2, help="matrix dimension (random only)")
    p_gen.add_argument("--m", type=int, default=256, help="number of grid segments")
    p_gen.add_argument("--q", type=int, default=2, help="harmonics (random only)")
    p_gen.add_argument("--seed", type=int, default=0, help="RNG seed (random only)")
    p_gen.add_argument("--out", required=True, help="output element file")

    p_approx = sub.add_parser("approx", help="run the approximation pipeline")
    p_approx.add_argument("element", help="element JSON file")
    p_approx.add_argument("--eps", type=float, required=True, help="tolerance in (0, 2)")
    p_approx.add_argument("--out", required=True, help="output report file")
    p_approx.add_argument(
        "--no-matrices", action="store_true", help="omit projection matrices from the report"
    )
    p_approx.add_argument("--tol-eig", type=float, default=1e-12)
    p_approx.add_argument("--plot", default=None, help="also render a summary figure here")

    p_verify = sub.add_parser("verify", help="independently recheck a report")
    p_verify.add_argument("element", help="element JSON file")
    p_verify.add_argument("report", help="report JSON file")

    p_bands = sub.add_parser("bands", help="export eigenvalue curves as CSV (and a figure)")
    p_bands.add_argument("element", help="element JSON file")
    p_bands.add_argument("--out", required=True, help="output CSV file")
    p_bands.add_argument("--tol-eig", type=float, default=1e-12)
    p_bands.add_argument("--merge-tol", type=float, default=1e-9, help="band merge tolerance for the figure")
    p_bands.add_argument(
        "--no-plot", action="store_true", help="skip the PNG next to the CSV"
    )
    return parser


def _load_element(path: str):
    from . import algebra

    with open(path) as fp:
        return algebra.load_element(fp)


def cmd_gen(args) -> int:
    from . import algebra, instances

    if args.m < 1:
        print("gen: need m >= 1", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.spec == "random":
        if args.n < 1 or args.q < 0 or args.seed < 0:
            print("gen: need n >= 1, q >= 0, seed >= 0", file=sys.stderr)
            return EXIT_PRECONDITION
        path = instances.random_trig(args.n, args.m, args.q, args.seed)
    else:
        try:
            path = instances.named_instance(args.spec, args.m)
        except ValueError as exc:
            print(f"gen: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
    _atomic_write(args.out, algebra.canonical_json(algebra.path_to_dict(path)))
    print(f"wrote {args.out} (n={path.n}, m={path.m})")
    return EXIT_OK


def cmd_approx(args) -> int:
    from . import algebra, errors, pipeline

    if not 0.0 < args.eps < 2.0:
        print(f"approx: eps must lie in (0, 2), got {args.eps}", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        x = _load_element(args.element)
    except (OSError, json.JSONDecodeError, errors.ShapeError) as exc:
        print(f"approx: cannot read element: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        report = pipeline.finite_spectrum_approximate(
            x,
            args.eps,
            keep_projections=not args.no_matrices,
            eig_tol=args.tol_eig,
        )
    except errors.NormTooLargeError as exc:
        print(f"approx: precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (errors.CertificationError, errors.InconclusiveGridError) as exc:
        print(f"approx: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION

    payload = report.to_dict()
    _atomic_write(args.out, algebra.canonical_json(payload))
    if args.plot:
        from . import plots

        plots.render_report(x, payload, args.plot)
    if isinstance(report, pipeline.ObstructionReport):
        cert = report.certificate
        print(
            f"obstructed at level {report.failed_level:.6g} "
            f"(budget {report.budget:.3g}): curve {cert['curve']} is pinned at "
            f"{cert['lambda_minus']:.6g} and {cert['lambda_plus']:.6g}; "
            f"report written to {args.out}"
        )
        return EXIT_OBSTRUCTION
    chain = report.error_chain
    print(
        f"success: ||x - b|| <= {chain['x_to_b']:.6g} < eps = {args.eps}; "
        f"spectrum size {report.spectrum_size}; report written to {args.out}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import errors, pipeline

    try:
        x = _load_element(args.element)
        with open(args.report) as fp:
            report = json.load(fp)
    except (OSError, json.JSONDecodeError, errors.ShapeError) as exc:
        print(f"verify: cannot read inputs: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    try:
        checks = pipeline.verify_report(x, report)
    except errors.DigestMismatchError as exc:
        print(f"verify: digest mismatch: {exc}", file=sys.stderr)
        return EXIT_DIGEST
    except errors.VerificationError as exc:
        print(f"verify: FAIL [{exc.check}] {exc.detail}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"verify: OK ({len(checks)} checks: {', '.join(checks)})")
    return EXIT_OK


def cmd_bands(args) -> int:
    from . import errors
    from .eig import eig_curves

    try:
        x = _load_element(args.element)
    except (OSError, json.JSONDecodeError, errors.ShapeError) as exc:
        print(f"bands: cannot read element: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    curves = eig_curves(x, tol=args.tol_eig)
    header = "s," + ",".join(f"lambda_{k + 1}" for k in range(x.n))
    rows = [header]
    for s, lam in zip(x.grid, curves.lam):
        rows.append(",".join(f"{v:.17g}" for v in (s, *lam)))
    _atomic_write(args.out, "\n".join(rows) + "\n")
    print(f"wrote {args.out}")
    if not args.no_plot:
        from . import plots

        fig_path = os.path.splitext(args.out)[0] + ".png"
        plots.render_curves(
            x, fig_path, title=os.path.basename(args.element), merge_tol=args.merge_tol
        )
        print(f"wrote {fig_path}")
    return EXIT_OK


def main(argv=None) -> int:
    _apply_thread_cap()
    args = build_parser().parse_args(argv)
    handler = {
        "gen": cmd_gen,
        "approx": cmd_approx,
        "verify": cmd_verify,
        "bands": cmd_bands,
    }[args.command]
    try:
        return handler(args)
    except Exception as exc:  # anticipated failures return codes above
        print(f"fsa {args.command}: unexpected error: {exc}", file=sys.stderr)
        return EXIT_OTHER


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
