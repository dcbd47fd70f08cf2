"""Command-line entry point: ``rsharmonics <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 verification precision flag,
64 usage error, 65 numeric domain violation.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .harmonics import HarmonicSpec, sup_norm
from .quadrature import matrix_element_quadrature
from .rudin_shapiro import autocorr_growth_exponent, generate, max_offpeak
from .semiclassical import MonomialSymbol, clifford_limit, convergence_study, matrix_element
from .suites import exit_status, run_suite

EX_USAGE = 64
EX_DATAERR = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_data(path: Path, text: str, args, argv) -> None:
    path.write_text(text, encoding="utf-8")
    _write_manifest([path], args, argv)


def _write_manifest(paths, args, argv) -> None:
    params = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "command_line": list(argv),
        "parameters": params,
        "branch": params.get("branch", "P"),
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": {str(p): hashlib.sha256(Path(p).read_bytes()).hexdigest() for p in paths},
    }
    first = Path(paths[0])
    first.with_name(first.name + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit_json(obj, out: str | None, args, argv) -> None:
    text = json.dumps(obj) + "\n"
    if out:
        _write_data(Path(out), text, args, argv)
    else:
        sys.stdout.write(text)


def _jobs(args) -> int:
    return args.jobs or os.cpu_count() or 1


# --- commands ----------------------------------------------------------------


def cmd_rs_gen(args, argv) -> int:
    _emit_json(generate(args.n, args.branch).tolist(), args.out, args, argv)
    return 0


def cmd_rs_autocorr(args, argv) -> int:
    if args.dyadic:
        lengths = []
        n = args.nmin
        while n <= args.nmax:
            lengths.append(n)
            n *= 2
    else:
        lengths = list(range(args.nmin, args.nmax + 1, args.step or args.nmin))
    slope, _ = autocorr_growth_exponent(lengths, args.branch)
    rows = [(n, max_offpeak(generate(n, args.branch)), fmt(slope)) for n in lengths]
    _write_data(Path(args.csv), _csv_text(["n", "beta_max_abs_corr", "fitted_slope"], rows), args, argv)
    return 0


def _supnorm_row(task):
    N, k, branch = task
    value, p = sup_norm(HarmonicSpec(N, k, branch))
    return N, k, value, p.rho, p.phi % (2.0 * math.pi)


def cmd_supnorm(args, argv) -> int:
    N = args.N
    ks = [args.k] if args.k is not None else sorted({0, N // 2, N})
    for k in ks:
        HarmonicSpec(N, k, args.branch)
    tasks = [(N, k, args.branch) for k in ks]
    jobs = min(_jobs(args), len(tasks))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            rows = list(pool.map(_supnorm_row, tasks))
    else:
        rows = [_supnorm_row(t) for t in tasks]
    out = [(n, k, fmt(v), fmt(r), fmt(ph)) for n, k, v, r, ph in rows]
    _write_data(Path(args.csv), _csv_text(["N", "k", "sup", "rho_argmax", "phi_argmax"], out), args, argv)
    return 0


def cmd_matelem(args, argv) -> int:
    s = MonomialSymbol.parse(args.symbol)
    rep = matrix_element(args.N, args.k, s, args.branch)
    payload = rep.to_json()
    if args.oracle:
        q = matrix_element_quadrature(args.N, args.k, s, branch=args.branch)
        payload["closed_sum_value"] = payload["value"]
        payload["value"] = [q.real, q.imag]
        payload["method"] = "quadrature"
    payload["symbol"] = s.format()
    _emit_json(payload, args.out, args, argv)
    return 0


def cmd_limit(args, argv) -> int:
    s = MonomialSymbol.parse(args.symbol)
    v = clifford_limit(s)
    _emit_json({"symbol": s.format(), "value": [v.real, v.imag]}, args.out, args, argv)
    return 0


def cmd_converge(args, argv) -> int:
    s = MonomialSymbol.parse(args.symbol)
    if args.nmin < 1 or args.nmax < args.nmin:
        raise ValueError("need 1 <= nmin <= nmax")
    Ns = []
    n = args.nmin
    while n <= args.nmax:
        Ns.append(n)
        n *= 2
    study = convergence_study(s, Ns, args.k_policy, args.branch, jobs=_jobs(args))
    rows = [(r.N, fmt(r.value.real), fmt(r.value.imag), fmt(r.deviation)) for r in study.rows]
    csv_path = Path(args.csv)
    csv_path.write_text(_csv_text(["N", "re", "im", "abs_deviation"], rows), encoding="utf-8")
    fit = study.fit_json()
    outputs = [csv_path]
    if args.json:
        Path(args.json).write_text(json.dumps(fit) + "\n", encoding="utf-8")
        outputs.append(Path(args.json))
    else:
        sys.stdout.write(json.dumps(fit) + "\n")
    _write_manifest(outputs, args, argv)
    return 0


def cmd_verify(args, argv) -> int:
    results = run_suite(args.suite, args.tol)
    for r in results:
        print(r.line(), flush=True)
    return exit_status(results)


# --- parser ------------------------------------------------------------------


def _add_branch(p):
    p.add_argument("--branch", choices=["P", "Q"], default="P")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rsharmonics", description="Rudin-Shapiro spherical harmonics on S^3.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    rs = sub.add_parser("rs", help="Rudin-Shapiro sequences")
    rs_sub = rs.add_subparsers(dest="rs_command", required=True)
    p = rs_sub.add_parser("gen", help="print a sequence as a JSON array")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    _add_branch(p)
    p.set_defaults(func=cmd_rs_gen)

    p = rs_sub.add_parser("autocorr", help="peak autocorrelation growth")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--nmin", type=int, default=64)
    p.add_argument("--dyadic", action="store_true", help="powers of two from nmin to nmax")
    p.add_argument("--step", type=int, help="length step when not dyadic (default nmin)")
    p.add_argument("--csv", required=True)
    _add_branch(p)
    p.set_defaults(func=cmd_rs_autocorr)

    h = sub.add_parser("harmonic", help="basis functions P_{N,k}")
    h_sub = h.add_subparsers(dest="harmonic_command", required=True)
    p = h_sub.add_parser("supnorm", help="sup-norm scan")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--csv", required=True)
    p.add_argument("--jobs", type=int)
    _add_branch(p)
    p.set_defaults(func=cmd_supnorm)

    p = sub.add_parser("matelem", help="matrix element report")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--symbol", required=True, help="g=<gamma>,b1=<beta1>,b2=<beta2>,a=<a>,x1=<b1>,x2=<b2>")
    p.add_argument("--oracle", action="store_true", help="evaluate by quadrature (N <= 64)")
    p.add_argument("--out")
    _add_branch(p)
    p.set_defaults(func=cmd_matelem)

    p = sub.add_parser("limit", help="Clifford-torus limit of a symbol")
    p.add_argument("--symbol", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("converge", help="dyadic convergence study")
    p.add_argument("--symbol", required=True)
    p.add_argument("--nmin", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--k-policy", choices=["zero", "middle", "last"], default="zero")
    p.add_argument("--csv", required=True)
    p.add_argument("--json", help="write the fit here instead of stdout")
    p.add_argument("--jobs", type=int)
    _add_branch(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("verify", help="run an acceptance suite")
    p.add_argument("--suite", choices=["exact", "oracle", "decay", "bounded"], required=True)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, argv)
    except (ValueError, ArithmeticError) as exc:
        print(f"rsharmonics: {exc}", file=sys.stderr)
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
