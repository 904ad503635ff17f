"""Command-line front end: machine-readable access to every pipeline.

Single solves emit JSON run records, scans emit CSV (one row per schedule
point), and `verify` runs the whole property battery.  Exit codes: 0 success,
2 invalid input, 3 a verification check failed.  Complex numbers are encoded
as [re, im] pairs; output is deterministic for identical inputs.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .analysis import (
    KRule,
    LimitSchedule,
    number_limit_scan,
    photon_statistics,
    squeezed_limit_scan,
    time_evolve,
)
from .binomial import BinomialParams, binomial_amplitudes, ladder_residual
from .fock import fidelity, number_operator
from .oracle import compare
from .solver import GBSParams, build_operator, constraint_roots, eigenstate_sum, solve
from .verification import run_all, tolerance_override

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFICATION = 3


def _cnum(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _cvec(v) -> list[list[float]]:
    return [_cnum(z) for z in np.asarray(v)]


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _record(command: str, params: dict, results: dict, diagnostics: dict) -> str:
    return json.dumps(
        {
            "command": command,
            "tool_version": __version__,
            "params": params,
            "results": results,
            "diagnostics": diagnostics,
        },
        indent=2,
    )


def _csv(rows: list[tuple[float, float, float]]) -> str:
    lines = ["m_or_eta,fidelity,residual"]
    for key, fid, res in rows:
        lines.append(f"{_f17(key)},{_f17(fid)},{_f17(res)}")
    return "\n".join(lines) + "\n"


def cmd_binomial(args) -> int:
    p = BinomialParams(eta=args.eta, m=args.m)
    amps = binomial_amplitudes(p)
    stats = photon_statistics(amps)
    residual = ladder_residual(p) if 0.0 < args.eta < 1.0 else None
    payload = _record(
        "binomial",
        {"eta": args.eta, "m": args.m},
        {
            "amplitudes": _cvec(amps),
            "distribution": [float(x) for x in stats.distribution],
            "photon_statistics": {
                "mean": stats.mean,
                "variance": stats.variance,
                "mandel_q": stats.mandel_q,
            },
        },
        {"ladder_residual": residual},
    )
    _write(payload, args.out)
    return EXIT_OK


def cmd_gbs(args) -> int:
    p = GBSParams(
        mu=complex(args.mu_re, args.mu_im),
        nu=complex(args.nu_re, args.nu_im),
        eta=args.eta,
        m=args.m,
    )
    if args.k is not None and not 0 <= args.k <= args.m:
        raise ValueError(f"eigenstate index {args.k} outside 0..{args.m}")
    sol = solve(p, root_policy=args.root)
    report = compare(p, sol)
    scale = tolerance_override()
    pair_bound = 1e-9 * (1.0 + float(np.abs(sol.eigenvalues).max())) * scale
    residual_bound = 1e-10 * float(np.linalg.norm(build_operator(p))) * scale
    ok = report.max_residual <= residual_bound
    if not report.multiplicity_collapse:
        ok = ok and report.max_pair_error <= pair_bound
    results = {
        "delta_roots": [_cnum(r) for r in constraint_roots(p)],
        "delta": _cnum(sol.delta_root),
        "zeta": {"r": sol.zeta.r, "theta": sol.zeta.theta},
        "coefficients": {
            "a_plus": _cnum(sol.triple.a_plus),
            "a_minus": _cnum(sol.triple.a_minus),
            "a_zero": _cnum(sol.triple.a_zero),
        },
        "kind": sol.kind.value,
        "eigenvalues": _cvec(sol.eigenvalues),
    }
    if args.k is not None:
        if args.k >= len(sol.eigenstates):
            raise ValueError(
                f"the {sol.kind.value} branch carries only "
                f"{len(sol.eigenstates)} eigenstate(s); k = {args.k} unavailable"
            )
        results["eigenstate_k"] = args.k
        results["eigenstate"] = _cvec(sol.eigenstates[args.k])
    payload = _record(
        "gbs",
        {
            "mu": _cnum(p.mu),
            "nu": _cnum(p.nu),
            "eta": p.eta,
            "m": p.m,
            "root_policy": args.root,
        },
        results,
        {
            "oracle": {
                "max_pair_error": report.max_pair_error,
                "max_residual": report.max_residual,
                "multiplicity_collapse": report.multiplicity_collapse,
                "pair_error_bound": pair_bound,
                "residual_bound": residual_bound,
            },
            "tolerance_scale": scale,
        },
    )
    _write(payload, args.out)
    if not ok:
        print("oracle comparison exceeded tolerance", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"could not parse comma-separated numbers from {text!r}") from exc


def _parse_ints(text: str) -> list[int]:
    return [int(round(x)) for x in _parse_floats(text)]


def cmd_limit(args) -> int:
    if args.mode == "number":
        if args.m is None or args.k is None or args.etas is None:
            raise ValueError("number mode needs --m, --k and --etas")
        etas = _parse_floats(args.etas)
        mu = complex(args.mu_re, args.mu_im)
        nu = complex(args.nu_re, args.nu_im)
        scan = number_limit_scan(mu, nu, args.m, args.k, etas)
        n_op = number_operator(args.m)
        rows = []
        for eta, fid in scan:
            state = solve(GBSParams(mu=mu, nu=nu, eta=eta, m=args.m)).eigenstates[args.k]
            residual = float(np.linalg.norm(n_op @ state - args.k * state))
            rows.append((eta, fid, residual))
        params = {
            "mode": "number",
            "mu": _cnum(mu),
            "nu": _cnum(nu),
            "m": args.m,
            "k": args.k,
            "etas": etas,
        }
    elif args.mode == "squeezed":
        if args.alpha is None or args.m_values is None:
            raise ValueError("squeezed mode needs --alpha and --m-values")
        mu = complex(args.mu_re, args.mu_im)
        nu = complex(args.nu_re, args.nu_im)
        schedule = LimitSchedule(
            alpha=args.alpha,
            m_values=tuple(_parse_ints(args.m_values)),
            k_rule=KRule(args.rule, args.offset),
        )
        rows = [(float(m), fid, res) for m, res, fid in squeezed_limit_scan(mu, nu, schedule)]
        params = {
            "mode": "squeezed",
            "mu": _cnum(mu),
            "nu": _cnum(nu),
            "alpha": args.alpha,
            "m_values": list(schedule.m_values),
            "rule": args.rule,
            "offset": args.offset,
        }
    else:  # coherent: the nu = 0 top-offset family
        if args.alpha is None or args.m_values is None:
            raise ValueError("coherent mode needs --alpha and --m-values")
        mu = complex(math.cos(args.phi), math.sin(args.phi))
        schedule = LimitSchedule(
            alpha=args.alpha,
            m_values=tuple(_parse_ints(args.m_values)),
            k_rule=KRule("top-offset", args.offset),
        )
        rows = [(float(m), fid, res) for m, res, fid in squeezed_limit_scan(mu, 0.0, schedule)]
        params = {
            "mode": "coherent",
            "phi": args.phi,
            "alpha": args.alpha,
            "m_values": list(schedule.m_values),
            "offset": args.offset,
        }
    if args.format == "csv":
        _write(_csv(rows), args.out)
    else:
        payload = _record(
            "limit",
            params,
            {"rows": [{"m_or_eta": a, "fidelity": b, "residual": c} for a, b, c in rows]},
            {},
        )
        _write(payload, args.out)
    return EXIT_OK


def cmd_evolve(args) -> int:
    p0 = GBSParams(mu=complex(math.cos(args.phi), math.sin(args.phi)), nu=0.0, eta=args.eta, m=args.m)
    if not 0 <= args.k <= args.m:
        raise ValueError(f"eigenstate index {args.k} outside 0..{args.m}")
    state = eigenstate_sum(p0, args.k)
    evolved = time_evolve(state, omega=args.omega, t=args.t)
    shifted = args.phi + args.omega * args.t
    p1 = GBSParams(mu=complex(math.cos(shifted), math.sin(shifted)), nu=0.0, eta=args.eta, m=args.m)
    fid = fidelity(evolved, eigenstate_sum(p1, args.k))
    payload = _record(
        "evolve",
        {
            "eta": args.eta,
            "m": args.m,
            "k": args.k,
            "phi": args.phi,
            "omega": args.omega,
            "t": args.t,
        },
        {
            "evolved_amplitudes": _cvec(evolved),
            "fidelity_vs_phase_shifted_rebuild": fid,
        },
        {},
    )
    _write(payload, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_all(
        spectrum_draws=args.spectrum_draws,
        degenerate_draws=args.degenerate_draws,
        disentangle_draws=args.disentangle_draws,
        seed=args.seed,
    )
    if args.format == "json":
        payload = _record(
            "verify",
            {
                "spectrum_draws": args.spectrum_draws,
                "degenerate_draws": args.degenerate_draws,
                "disentangle_draws": args.disentangle_draws,
                "seed": args.seed,
                "tolerance_scale": tolerance_override(),
            },
            {
                "checks": [
                    {
                        "name": r.name,
                        "passed": r.passed,
                        "observed": r.observed,
                        "threshold": r.threshold,
                        "detail": r.detail,
                    }
                    for r in results
                ],
                "all_passed": all(r.passed for r in results),
            },
            {},
        )
        _write(payload, args.out)
    else:
        lines = []
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{status}  {r.name:40s} {r.observed:.3e} <= {r.threshold:.3e}")
            if r.detail:
                lines.append(f"      {r.detail}")
        n_pass = sum(r.passed for r in results)
        lines.append(f"{n_pass}/{len(results)} checks passed")
        _write("\n".join(lines), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFICATION


def _add_complex_flags(sp, mu_default=(1.0, 0.0), nu_default=(0.0, 0.0)):
    sp.add_argument("--mu-re", type=float, default=mu_default[0])
    sp.add_argument("--mu-im", type=float, default=mu_default[1])
    sp.add_argument("--nu-re", type=float, default=nu_default[0])
    sp.add_argument("--nu-im", type=float, default=nu_default[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbstates",
        description="Generalized binomial states: closed-form solutions with built-in verification",
    )
    parser.add_argument("--version", action="version", version=f"gbstates {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_bin = sub.add_parser("binomial", help="binomial state amplitudes and statistics")
    p_bin.add_argument("--eta", type=float, required=True, help="probability in [0, 1]")
    p_bin.add_argument("--m", type=int, required=True, help="photon cap")
    p_bin.add_argument("--format", choices=["json"], default="json")
    p_bin.add_argument("--out", default="-")
    p_bin.set_defaults(func=cmd_binomial)

    p_gbs = sub.add_parser("gbs", help="solve the generalized eigenvalue problem")
    _add_complex_flags(p_gbs)
    p_gbs.add_argument("--eta", type=float, required=True, help="probability in (0, 1)")
    p_gbs.add_argument("--m", type=int, required=True, help="photon cap")
    p_gbs.add_argument("--root", choices=["principal", "secondary"], default="principal")
    p_gbs.add_argument("--k", type=int, default=None, help="also emit eigenstate k")
    p_gbs.add_argument("--format", choices=["json"], default="json")
    p_gbs.add_argument("--out", default="-")
    p_gbs.set_defaults(func=cmd_gbs)

    p_lim = sub.add_parser("limit", help="number/squeezed/coherent limit scans")
    p_lim.add_argument("--mode", choices=["number", "squeezed", "coherent"], required=True)
    _add_complex_flags(p_lim)
    p_lim.add_argument("--m", type=int, default=None, help="photon cap (number mode)")
    p_lim.add_argument("--k", type=int, default=None, help="eigenstate index (number mode)")
    p_lim.add_argument("--etas", default=None, help="comma-separated eta schedule (number mode)")
    p_lim.add_argument("--alpha", type=float, default=None, help="fixed sqrt(eta m)")
    p_lim.add_argument("--m-values", default=None, help="comma-separated ascending m schedule")
    p_lim.add_argument("--rule", choices=["center", "top-offset", "bottom"], default="center")
    p_lim.add_argument("--offset", type=int, default=0)
    p_lim.add_argument("--phi", type=float, default=0.0, help="mu phase (coherent mode)")
    p_lim.add_argument("--format", choices=["csv", "json"], default="csv")
    p_lim.add_argument("--out", default="-")
    p_lim.set_defaults(func=cmd_limit)

    p_ev = sub.add_parser("evolve", help="free time evolution of a nu = 0 eigenstate")
    p_ev.add_argument("--eta", type=float, required=True)
    p_ev.add_argument("--m", type=int, required=True)
    p_ev.add_argument("--k", type=int, required=True)
    p_ev.add_argument("--phi", type=float, default=0.0, help="mu phase at t = 0")
    p_ev.add_argument("--omega", type=float, required=True)
    p_ev.add_argument("--t", type=float, required=True)
    p_ev.add_argument("--format", choices=["json"], default="json")
    p_ev.add_argument("--out", default="-")
    p_ev.set_defaults(func=cmd_evolve)

    p_ver = sub.add_parser("verify", help="run the full property battery")
    p_ver.add_argument("--spectrum-draws", type=int, default=200)
    p_ver.add_argument("--degenerate-draws", type=int, default=50)
    p_ver.add_argument("--disentangle-draws", type=int, default=50)
    p_ver.add_argument("--seed", type=int, default=20240615)
    p_ver.add_argument("--format", choices=["text", "json"], default="text")
    p_ver.add_argument("--out", default="-")
    p_ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
