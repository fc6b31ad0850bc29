"""Command-line interface ``bdm``.

Exit codes: 0 success, 1 a check or tolerance failed, 2 invalid specification.
``BDM_THREADS`` caps the number of worker threads used by sweeps.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import lemmas, verify
from .batch import compute_expansion, compute_residue, emit_csv, emit_json, table_rows
from .exceptions import BDMError, SpecError
from .fitting import default_template, fit_expansion
from .oracle import quad_double
from .problem import load_spec
from .resolvent import BoundaryModel
from .smoothing import smoothed_norm
from .traces import (
    HomogeneousComponent,
    PART_G,
    PART_Q,
    boundary_fiber,
    example_closed_forms,
    example_traces,
    laguerre_sgo,
    logcoef_direct,
    mu_trace,
    sweep,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_SPEC = 2

#: Tolerances of the worked example report.
ORACLE_TOL = 1e-9
LOG_TOL = 1e-3
NO_LOG_TOL = 1e-4


def _g(x: float) -> str:
    return format(x, ".17g")


def _c(z) -> str:
    z = complex(z)
    return _g(z.real) if z.imag == 0 else f"{_g(z.real)}{'+' if z.imag >= 0 else '-'}{_g(abs(z.imag))}j"


# -- verify --------------------------------------------------------------------


def cmd_verify(args) -> int:
    lemmas.set_fault_injection(args.inject_fault)
    try:
        suites = [args.suite] if args.suite else list(verify.SUITES)
        ok = True
        for suite in suites:
            for res in verify.run(suite):
                print(json.dumps(verify.as_dict(res)))
                ok &= res.passed
        print(json.dumps({"summary": "pass" if ok else "fail", "suites": suites}))
        return EXIT_OK if ok else EXIT_FAIL
    finally:
        lemmas.set_fault_injection(False)


# -- worked example ------------------------------------------------------------


def _example_oracles(rng) -> float:
    worst = 0.0
    for _ in range(3):
        c = float(rng.uniform(0.5, 2.0))
        s = float(rng.uniform(0.3, 3.0))
        k = float(rng.uniform(0.3, 3.0))
        want = example_closed_forms(c, s, k)

        def gg1(x, z):
            return c / ((s + 1j * x) * (s - 1j * z)) * (-1 / (2 * k * (k + 1j * z) * (k - 1j * x)))

        got = quad_double(gg1, breakpoints=(-k, -s, s, k))
        worst = max(worst, abs(got - want["gg1"]) / abs(want["gg1"]))
        engine = example_traces(c, s, k)
        for key in ("gg1", "gq"):
            worst = max(worst, abs(complex(engine[key]) - want[key]) / abs(want[key]))
    return worst


def example_fits(count: int = 60, workers: int | None = None) -> dict:
    """Fitted expansions of the two traces of the worked example with ``g`` normalised to ``tr_n g = 1/[xi']``."""
    model = BoundaryModel(1.0, [0.0], [[1.0]], 1.0)
    table = {(0, 0): lambda xp: 1 / float(smoothed_norm(xp))}

    def g_of(xp):
        return laguerre_sgo(table, xp)

    mus = np.geomspace(10 ** 1.5, 10 ** 3.5, count)
    template = default_template(-2, 1)
    out = {}
    for name, part in (("gq", PART_Q), ("gg1", PART_G)):
        fiber = boundary_fiber(model, 1, g_of, part)
        values = sweep(lambda m, f=fiber: mu_trace(f, 1, m, radial=True), mus, workers)
        out[name] = fit_expansion((mus, values), template)
    out["direct"] = logcoef_direct(HomogeneousComponent(-1, lambda w: 1.0))
    return out


def cmd_example31(args) -> int:
    t0 = time.perf_counter()
    print("tr_n(g o g1) = -c/(2 kappa (sigma+kappa)^2)")
    print("tr_n(g o q_+) = c/(2 kappa (sigma+kappa) sigma)")
    delta = _example_oracles(np.random.default_rng(args.seed))
    print(f"oracle_delta {_g(delta)} (tolerance {ORACLE_TOL:g})")
    fits = example_fits(args.count)
    direct = fits["direct"]
    log_gq = fits["gq"].log_coefficient(-2)
    rel = abs(log_gq - direct) / abs(direct)
    print(f"gq_log_coefficient_mu^-2 {_c(log_gq)} direct {_c(direct)} relative_error {_g(rel)}")
    g = fits["gg1"]
    e_lead, lead = g.leading_power_coefficient()
    ratio = abs(g.log_coefficient(-2)) / abs(lead)
    print(f"gg1_log_coefficient_mu^-2 {_c(g.log_coefficient(-2))} "
          f"leading_power_mu^{e_lead} {_c(lead)} ratio {_g(ratio)}")
    ok = delta <= ORACLE_TOL and rel <= LOG_TOL and ratio <= NO_LOG_TOL
    print(f"result {'pass' if ok else 'fail'} ({time.perf_counter() - t0:.1f} s)")
    return EXIT_OK if ok else EXIT_FAIL


# -- expansion and residue -----------------------------------------------------


def cmd_expansion(args) -> int:
    spec = load_spec(args.spec)
    fit = compute_expansion(spec)
    rows = table_rows(fit)
    text = emit_csv(rows) if args.format == "csv" else emit_json(rows, fit)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_residue(args) -> int:
    spec = load_spec(args.spec)
    report = compute_residue(spec, cross_check=args.cross_check)
    print(f"residue_density {_c(report['density'])}")
    if not args.cross_check:
        return EXIT_OK
    print(f"residue_log_route {_c(report['log_route'])}")
    print(f"relative_difference {_g(report['relative_difference'])}")
    ok = report["relative_difference"] <= LOG_TOL
    print(f"result {'pass' if ok else 'fail'}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--suite", choices=verify.SUITES, help="run one suite only")
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb the constant tables (the suites must then fail)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example31", help="worked example with one Laguerre term")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=60, help="number of mu samples per fit")
    p.set_defaults(func=cmd_example31)

    p = sub.add_parser("expansion", help="fit the trace expansion of a specification")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("residue", help="noncommutative residue of a specification")
    p.add_argument("--spec", required=True)
    p.add_argument("--cross-check", action="store_true",
                   help="also compute twice the fitted log coefficient in lambda")
    p.set_defaults(func=cmd_residue)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except BDMError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
