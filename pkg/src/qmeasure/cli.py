"""Command-line interface.

Subcommands::

    measure --states FILE [--which qd|qc|qq|all] [--format text|csv|json]
    sweep-overlap --steps N [--format csv|json]
    cap --theta0 RAD --method analytic|quadrature|montecarlo
        [--ntheta N --nphi N | --samples N --seed S] [--format text|csv|json]
    experiment NAME [--seed S] [--format csv|json] [--dim D --trials T --steps N]
    props --trials N --seed S [--format text|csv|json]

Results go to stdout, diagnostics (dedup notices, timings, check summaries)
to stderr. Exit codes: 0 success, 1 check failure, 2 usage error, 3 input
validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import experiments as E
from . import measures as M
from .entropy import von_neumann_entropy
from .errors import QMeasureError, StateSetParseError, StateValidationError
from .hilbert import PureState

log = logging.getLogger("qmeasure")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID_INPUT = 3

# hand-authored files get this much slack on the squared norm
DOCUMENT_NORM_TOL = 1e-6


def parse_state_set(document: str) -> M.StateSet:
    """Parse and validate a state-set JSON document.

    The document is an object ``{"dim": d, "states": [...], "labels": [...]}``
    where each state is a list of ``d`` amplitudes written as ``[re, im]``.
    States whose squared norm is off by more than ``DOCUMENT_NORM_TOL`` are
    rejected; smaller deviations are rescaled to unit norm with a notice on
    the diagnostics log.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise StateSetParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise StateSetParseError("top level must be an object")
    for key in ("dim", "states"):
        if key not in doc:
            raise StateSetParseError(f"missing key {key!r}")
    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise StateSetParseError(f"'dim' must be a positive integer, got {dim!r}")
    raw_states = doc["states"]
    if not isinstance(raw_states, list) or not raw_states:
        raise StateSetParseError("'states' must be a nonempty list")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise StateSetParseError("'labels' must be a list of strings")
        if len(labels) != len(raw_states):
            raise StateSetParseError(f"{len(labels)} labels for {len(raw_states)} states")

    states = []
    for i, amps in enumerate(raw_states):
        if not isinstance(amps, list) or len(amps) != dim:
            raise StateValidationError(f"expected {dim} amplitudes", i)
        vec = np.empty(dim, dtype=complex)
        for j, a in enumerate(amps):
            if (
                not isinstance(a, list)
                or len(a) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in a)
                or not all(math.isfinite(x) for x in a)
            ):
                raise StateValidationError(
                    f"amplitude {j} must be a [re, im] pair of finite numbers", i
                )
            vec[j] = complex(a[0], a[1])
        norm2 = float(np.vdot(vec, vec).real)
        if abs(norm2 - 1.0) > DOCUMENT_NORM_TOL:
            raise StateValidationError(f"squared norm is {norm2!r}, expected 1", i)
        if norm2 != 1.0:
            log.debug("state %d: squared norm %r rescaled to 1", i, norm2)
            vec = vec / math.sqrt(norm2)
        states.append(PureState(vec))
    u = M.StateSet(tuple(states), tuple(labels) if labels is not None else None)

    def name(k):
        return labels[k] if labels else str(k)

    for dropped, kept in u.merged:
        log.warning("dedup: state %s is the same ray as state %s; dropped", name(dropped), name(kept))
    return u


def _fmt_cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def rows_to_csv(rows: Sequence[dict[str, Any]]) -> str:
    """Header plus one line per row; floats in shortest round-trip form."""
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(rows[0].keys())
    w = csv.writer(buf)
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt_cell(r[k]) for k in fields])
    return buf.getvalue()


def to_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _json_rows(rows):
    return [{k: E._num(v) for k, v in r.items()} for r in rows]


def _emit(out, payload: dict[str, Any], fmt: str, text_lines: list[str] | None = None):
    if fmt == "json":
        out.write(to_json(payload))
    elif fmt == "csv":
        out.write(rows_to_csv(payload["rows"]))
    else:
        out.write("\n".join(text_lines or []) + "\n")


def _cmd_measure(args, out) -> int:
    try:
        with open(args.states, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        log.error("cannot read %s: %s", args.states, exc)
        return EXIT_INVALID_INPUT
    u = parse_state_set(text)
    which = args.which
    s = M.quantized_entropy(u)
    row: dict[str, Any] = {"n_states": len(u), "dim": u.dim}
    lines = [f"states = {len(u)} (dim {u.dim})"]
    if which in ("qd", "all"):
        row["mu_d"] = M.counting_measure(u)
        lines.append(f"mu_d = {row['mu_d']:.0f}")
    if which in ("qc", "all"):
        if u.dim == 2:
            row["mu_c"] = M.solid_angle_measure(u)
            lines.append(f"mu_c = {row['mu_c']:.5f} sr")
        else:
            log.warning("mu_c is only defined for qubit rays; skipped for dim %d", u.dim)
    if which in ("qq", "all"):
        row["mu_q"] = 2.0**s
        lines.append(f"mu_q = {row['mu_q']:.5f}")
    row["S"] = s
    lines.append(f"S = {s:.6f}")
    _emit(out, {"rows": _json_rows([row])}, args.format, lines)
    return EXIT_OK


def _cmd_sweep(args, out) -> int:
    res = E.run_overlap_sweep(args.steps)
    log.info("overlap-sweep: %d rows in %d ms", len(res.rows), res.runtime_ms)
    _emit(out, res.to_dict() if args.format == "json" else {"rows": res.rows}, args.format)
    return EXIT_OK if res.passed else EXIT_CHECK_FAILED


def _cmd_cap(args, out) -> int:
    if args.method == "analytic":
        params = {}
    elif args.method == "quadrature":
        params = {"n_theta": args.ntheta, "n_phi": args.nphi}
    else:
        params = {"n_samples": args.samples, "seed": args.seed}
    rho = M.cap_mixture(args.theta0, args.method, **params)
    lam = rho.spectrum.eigenvalues
    s = von_neumann_entropy(rho)
    cap = M.SphericalCap(args.theta0)
    row = {
        "theta0": args.theta0,
        "method": args.method,
        "lambda_1": float(lam[0]),
        "lambda_2": float(lam[1]),
        "S": s,
        "mu_q": 2.0**s,
        "mu_c": M.solid_angle_measure(cap),
    }
    lines = [
        f"theta0 = {args.theta0!r} ({args.method})",
        f"eigenvalues = {lam[0]:.6f}, {lam[1]:.6f}",
        f"S = {s:.6f}",
        f"mu_q = {row['mu_q']:.5f}",
        f"mu_c = {row['mu_c']:.5f} sr",
    ]
    _emit(out, {"parameters": params, "rows": _json_rows([row])}, args.format, lines)
    return EXIT_OK


def _report_checks(res: E.ExperimentResult):
    for c in res.checks:
        level = logging.INFO if c.passed else logging.WARNING
        status = "PASS" if c.passed else "FAIL"
        log.log(level, "%s %s: observed=%r expected=%r tol=%r", status, c.description, c.observed, c.expected, c.tolerance)
        if not c.passed and c.replay:
            log.error("replay: %s", c.replay)
    log.info("%s: %d checks, %s, %d ms", res.name, len(res.checks), "all pass" if res.passed else "FAILURES", res.runtime_ms)


def _cmd_experiment(args, out) -> int:
    name = args.name
    if name == "context-additivity":
        res = E.run_context_additivity(args.dim, args.trials, args.seed)
    elif name == "property-suite":
        res = E.run_property_suite(args.trials, args.seed)
    elif name == "overlap-sweep":
        res = E.run_overlap_sweep(args.steps)
    else:
        res = E.EXPERIMENTS[name]()
    _report_checks(res)
    _emit(out, res.to_dict() if args.format == "json" else {"rows": res.rows}, args.format)
    return EXIT_OK if res.passed else EXIT_CHECK_FAILED


def _cmd_props(args, out) -> int:
    res = E.run_property_suite(args.trials, args.seed)
    _report_checks(res)
    if args.format == "text":
        lines = [
            f"{'PASS' if c.passed else 'FAIL'}  {c.description}  observed={c.observed!r} tol={c.tolerance!r}"
            for c in res.checks
        ]
        lines.append(f"{sum(c.passed for c in res.checks)}/{len(res.checks)} checks passed")
        _emit(out, {}, "text", lines)
    else:
        _emit(out, res.to_dict() if args.format == "json" else {"rows": res.rows}, args.format)
    return EXIT_OK if res.passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmeasure", description="Entropy-based quantized state-counting measure and classical baselines."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="measures of a state set read from a JSON file")
    p.add_argument("--states", required=True, metavar="FILE")
    p.add_argument("--which", choices=["qd", "qc", "qq", "all"], default="all")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("sweep-overlap", help="pair entropy and measure against transition probability")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("cap", help="uniform mixture over a Bloch-sphere cap")
    p.add_argument("--theta0", type=float, required=True, metavar="RAD", help="opening angle in radians")
    p.add_argument("--method", choices=list(M.CAP_METHODS), default="analytic")
    p.add_argument("--ntheta", type=int, default=512)
    p.add_argument("--nphi", type=int, default=512)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=M.DEFAULT_SEED)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=_cmd_cap)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", choices=sorted(E.EXPERIMENTS))
    p.add_argument("--seed", type=int, default=M.DEFAULT_SEED)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--dim", type=int, default=4, help="context-additivity only")
    p.add_argument("--trials", type=int, default=None, help="context-additivity / property-suite")
    p.add_argument("--steps", type=int, default=101, help="overlap-sweep only")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("props", help="randomized property suite; exit 0 iff all checks pass")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=M.DEFAULT_SEED)
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.set_defaults(func=_cmd_props)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "trials", 0) is None:
        args.trials = 50 if args.name == "context-additivity" else 1000

    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(level)
    log.propagate = False

    try:
        return args.func(args, out)
    except (ValueError, QMeasureError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
