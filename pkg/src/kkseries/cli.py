"""Command line front end.

Subcommands: single-point evaluation of the Kummer kernel (``eval-m``)
and of the full coefficient series (``eval-kk``), multi-route comparison
(``compare``), convergence-strip reports (``region``), golden-vector
regression (``verify``), and CSV parameter sweeps (``sweep``).

Exit codes: 0 for a clean result, 2 when any result carries flags or a
cross-check fails, 1 for parse errors and violated preconditions.  All
output is deterministic for a fixed invocation: values print with 17
significant digits, CSV uses LF line endings and a fixed column order.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .dirichlet import kk_via_dirichlet
from .errors import DomainError, GoldenFormatError, RegionError
from .goldens import check_vector, load_goldens
from .kernels import kummer_m_integral, kummer_m_series
from .master import kk_case_A, kk_case_B, kk_case_C, kk_case_D, kk_master
from .quadrature import EvalReport, QuadSpec
from .series import CoeffFn, KKParams, convergence_region, kk_direct, parse_coeff_spec

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FLAGGED = 2

_KK_METHODS = (
    "direct",
    "dirichlet",
    "cahen",
    "master",
    "case-a",
    "case-b",
    "case-c",
    "case-d",
)
_SWEEP_VARS = ("a", "b", "alpha", "beta", "zeta", "z_re", "z_im")


class CLIParseError(ValueError):
    """A command line could not be parsed into a valid RunConfig."""


def parse_complex(text: str) -> complex:
    """Parse '<re>', '<im>i', or '<re>[+|-]<im>i'.

    Decimal parsing is locale independent (float() is always C-locale);
    'j' is accepted as an alternative imaginary suffix.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise CLIParseError("empty complex literal")
    if s[-1] in "iIjJ":
        body = s[:-1]
        cut = 0
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                cut = k
                break
        if cut:
            re_s, im_s = body[:cut], body[cut:]
        else:
            re_s, im_s = "0", body
        if im_s in ("", "+", "-"):
            im_s += "1"
        try:
            return complex(float(re_s), float(im_s))
        except ValueError as exc:
            raise CLIParseError(
                f"bad complex literal {text!r}; expected '<re>[+|-]<im>i'"
            ) from exc
    try:
        return complex(float(s), 0.0)
    except ValueError as exc:
        raise CLIParseError(
            f"bad complex literal {text!r}; expected '<re>[+|-]<im>i'"
        ) from exc


@dataclass(frozen=True)
class SweepSpec:
    """Evenly spaced scan of one parameter, endpoints included."""

    var: str
    start: float
    stop: float
    steps: int

    def __post_init__(self) -> None:
        if self.var not in _SWEEP_VARS:
            raise CLIParseError(
                f"sweep variable must be one of {', '.join(_SWEEP_VARS)}"
            )
        if self.steps < 2:
            raise CLIParseError("sweep requires steps >= 2")
        if not self.start < self.stop:
            raise CLIParseError("sweep requires from < to")

    def values(self) -> list[float]:
        h = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * h for i in range(self.steps)]


@dataclass(frozen=True)
class RunConfig:
    """Everything one invocation needs, already validated."""

    command: str
    params: Optional[KKParams] = None
    kappa_spec: str = ""
    z: complex = 0j
    method: str = ""
    sweep: Optional[SweepSpec] = None
    tolerances: QuadSpec = field(default_factory=QuadSpec)
    output: str = "text"
    goldens_path: Optional[str] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CLIParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kkseries", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tols(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--rel-tol", type=float, default=None, metavar="X")
        sp.add_argument("--abs-tol", type=float, default=None, metavar="X")

    def add_kk_params(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--a", type=float, required=True)
        sp.add_argument("--b", type=float, required=True)
        sp.add_argument("--alpha", type=float, required=True)
        sp.add_argument("--beta", type=float, required=True)
        sp.add_argument("--zeta", type=float, required=True)
        sp.add_argument("--kappa", required=True, metavar="FAMILY[:ARGS]")
        sp.add_argument("--z", required=True, metavar="RE[+IMi]")
        add_tols(sp)

    em = sub.add_parser("eval-m", help="evaluate the Kummer kernel M(a, b, z)")
    em.add_argument("--a", type=float, required=True)
    em.add_argument("--b", type=float, required=True)
    em.add_argument("--z", required=True, metavar="RE[+IMi]")
    em.add_argument("--method", choices=("series", "integral"), default="series")
    add_tols(em)

    ek = sub.add_parser("eval-kk", help="evaluate the coefficient series")
    add_kk_params(ek)
    ek.add_argument("--method", choices=_KK_METHODS, default="direct")

    cp = sub.add_parser("compare", help="run all applicable routes and cross-check")
    add_kk_params(cp)

    rg = sub.add_parser("region", help="print the convergence strips")
    rg.add_argument("--kappa", required=True, metavar="FAMILY[:ARGS]")
    rg.add_argument("--zeta", type=float, required=True)

    vf = sub.add_parser("verify", help="check a golden-vector file")
    vf.add_argument("--goldens", required=True, metavar="PATH")

    sw = sub.add_parser("sweep", help="scan one parameter, emit CSV")
    add_kk_params(sw)
    sw.add_argument("--method", choices=_KK_METHODS, default="direct")
    sw.add_argument("--var", choices=_SWEEP_VARS, required=True)
    sw.add_argument("--from", dest="sweep_from", type=float, required=True)
    sw.add_argument("--to", dest="sweep_to", type=float, required=True)
    sw.add_argument("--steps", type=int, required=True)
    sw.add_argument("--output", choices=("text", "csv"), default="csv")

    return parser


def _quad_from_ns(ns: argparse.Namespace) -> QuadSpec:
    overrides = {}
    if getattr(ns, "rel_tol", None) is not None:
        overrides["rel_tol"] = ns.rel_tol
    if getattr(ns, "abs_tol", None) is not None:
        overrides["abs_tol"] = ns.abs_tol
    return QuadSpec(**overrides)


def config_from_argv(argv: list[str]) -> RunConfig:
    """Parse flags into a validated RunConfig; CLIParseError on failure."""
    ns = build_parser().parse_args(argv)
    cmd = ns.command
    if cmd == "eval-m":
        return RunConfig(
            command=cmd,
            params=KKParams(ns.a, ns.b, 0.0, 0.0, 0.0),
            z=parse_complex(ns.z),
            method=ns.method,
            tolerances=_quad_from_ns(ns),
        )
    if cmd in ("eval-kk", "compare", "sweep"):
        params = KKParams(ns.a, ns.b, ns.alpha, ns.beta, ns.zeta)
        parse_coeff_spec(ns.kappa)  # fail fast on a bad family
        sweep = None
        output = "text"
        if cmd == "sweep":
            sweep = SweepSpec(ns.var, ns.sweep_from, ns.sweep_to, ns.steps)
            output = ns.output
        return RunConfig(
            command=cmd,
            params=params,
            kappa_spec=ns.kappa,
            z=parse_complex(ns.z),
            method=getattr(ns, "method", ""),
            sweep=sweep,
            tolerances=_quad_from_ns(ns),
            output=output,
        )
    if cmd == "region":
        parse_coeff_spec(ns.kappa)
        return RunConfig(
            command=cmd,
            params=KKParams(1.0, 2.0, 0.0, 0.0, ns.zeta),
            kappa_spec=ns.kappa,
        )
    if cmd == "verify":
        return RunConfig(command=cmd, goldens_path=ns.goldens)
    raise CLIParseError(f"unknown command {cmd!r}")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_flags(flags: tuple[str, ...]) -> str:
    return ";".join(flags) if flags else "-"


def _run_kk_route(
    method: str, p: KKParams, kappa: CoeffFn, z: complex, spec: QuadSpec
) -> EvalReport:
    if method == "direct":
        return kk_direct(p, kappa, z, tol=spec.rel_tol)
    if method == "dirichlet":
        return kk_via_dirichlet(p, kappa, z, quad=spec, inner="direct")
    if method == "cahen":
        return kk_via_dirichlet(p, kappa, z, quad=spec, inner="cahen")
    if method == "master":
        return kk_master(p, kappa, z, quad=spec)
    cases = {
        "case-a": kk_case_A,
        "case-b": kk_case_B,
        "case-c": kk_case_C,
        "case-d": kk_case_D,
    }
    if method in cases:
        return cases[method](p, kappa, z, quad=spec)
    raise CLIParseError(f"unknown method {method!r}")


def _render_report(route: str, rep: EvalReport) -> str:
    return "\n".join(
        [
            f"route = {route}",
            f"value_re = {_fmt(rep.value.real)}",
            f"value_im = {_fmt(rep.value.imag)}",
            f"err_estimate = {_fmt(rep.err_estimate)}",
            f"evaluations = {rep.evaluations}",
            f"flags = {_fmt_flags(rep.flags)}",
        ]
    )


def cmd_eval(config: RunConfig) -> tuple[int, str]:
    p = config.params
    assert p is not None
    if config.command == "eval-m":
        if config.method == "series":
            rep = kummer_m_series(p.a, p.b, config.z, tol=config.tolerances.rel_tol)
        else:
            rep = kummer_m_integral(p.a, p.b, config.z, config.tolerances)
        route = config.method
    else:
        kappa = parse_coeff_spec(config.kappa_spec)
        rep = _run_kk_route(config.method, p, kappa, config.z, config.tolerances)
        route = config.method
    return (EXIT_OK if rep.clean else EXIT_FLAGGED), _render_report(route, rep)


def cmd_compare(config: RunConfig) -> tuple[int, str]:
    """All applicable routes side by side with pairwise residuals.

    A pair agrees when |vi - vj| <= 10 (ei + ej) + 1e-12 scale; route
    preconditions failing mid-table leave the finished rows in place.
    """
    p = config.params
    assert p is not None
    kappa = parse_coeff_spec(config.kappa_spec)
    spec = config.tolerances
    methods = ["direct", "dirichlet", "cahen"]
    if p.alpha > 0.0:
        methods.append("master")
    lines = ["route value_re value_im err_estimate flags"]
    results: dict[str, EvalReport] = {}
    for method in methods:
        try:
            rep = _run_kk_route(method, p, kappa, config.z, spec)
        except (DomainError, ArithmeticError) as exc:
            lines.append(f"error: route {method}: {exc}")
            return EXIT_ERROR, "\n".join(lines)
        results[method] = rep
        lines.append(
            f"{method} {_fmt(rep.value.real)} {_fmt(rep.value.imag)}"
            f" {_fmt(rep.err_estimate)} {_fmt_flags(rep.flags)}"
        )
    lines.append("pair rel_diff budget verdict")
    names = list(results)
    all_ok = all(rep.clean for rep in results.values())
    for i, ni in enumerate(names):
        for nj in names[i + 1 :]:
            ri, rj = results[ni], results[nj]
            scale = max(1.0, abs(ri.value), abs(rj.value))
            gap = abs(ri.value - rj.value)
            budget = 10.0 * (ri.err_estimate + rj.err_estimate) + 1e-12 * scale
            ok = gap <= budget
            all_ok = all_ok and ok
            lines.append(
                f"{ni}/{nj} {gap / scale:.3e} {budget / scale:.3e}"
                f" {'ok' if ok else 'DISAGREE'}"
            )
    return (EXIT_OK if all_ok else EXIT_FLAGGED), "\n".join(lines)


def cmd_region(config: RunConfig) -> tuple[int, str]:
    p = config.params
    assert p is not None
    kappa = parse_coeff_spec(config.kappa_spec)
    zeta = p.zeta
    try:
        rp = convergence_region(kappa, zeta, "R_prime")
        rr = convergence_region(kappa, zeta, "R")
    except RegionError as exc:
        return EXIT_ERROR, f"empty region: {exc}"

    def strip_text(lo: float, hi: float) -> str:
        if zeta == 0.0:
            # the strip constrains zeta*Re(z) = 0 only: all or nothing
            return "all Re(z)" if lo < 0.0 < hi else "empty"
        x0, x1 = lo / zeta, hi / zeta
        if x0 > x1:
            x0, x1 = x1, x0
        return f"({_fmt(x0)}, {_fmt(x1)})"

    lines = [
        f"family = {config.kappa_spec}",
        f"zeta = {_fmt(zeta)}",
        f"root_limit = {_fmt(kappa.root_limit)}",
        f"R_prime: Re(z) in {strip_text(rp.strip_lo, rp.strip_hi)}",
        f"R: Re(z) in {strip_text(rr.strip_lo, rr.strip_hi)}",
    ]
    return EXIT_OK, "\n".join(lines)


def cmd_verify(config: RunConfig) -> tuple[int, str]:
    assert config.goldens_path is not None
    try:
        vectors = load_goldens(config.goldens_path)
    except OSError as exc:
        return EXIT_ERROR, f"error: cannot read goldens file: {exc}"
    except GoldenFormatError as exc:
        return EXIT_ERROR, f"error: malformed goldens file: {exc}"
    lines = []
    n_pass = 0
    for i, vec in enumerate(vectors):
        try:
            ok, _, detail = check_vector(vec)
        except GoldenFormatError as exc:
            return EXIT_ERROR, f"error: malformed goldens file: vector {i}: {exc}"
        except (DomainError, ArithmeticError) as exc:
            lines.append(f"FAIL [{i:03d}] {vec.function}: evaluation error: {exc}")
            continue
        if ok:
            n_pass += 1
            lines.append(f"PASS [{i:03d}] {vec.function}: {detail}")
        else:
            lines.append(f"FAIL [{i:03d}] {vec.function}: {detail}")
    lines.append(f"{n_pass}/{len(vectors)} vectors passed")
    return (EXIT_OK if n_pass == len(vectors) else EXIT_FLAGGED), "\n".join(lines)


def cmd_sweep(config: RunConfig) -> tuple[int, str]:
    """Scan one parameter; rows come out in sweep order regardless of
    evaluation order, and a failing point becomes a nan row rather than
    aborting the scan."""
    p = config.params
    sweep = config.sweep
    assert p is not None and sweep is not None
    kappa = parse_coeff_spec(config.kappa_spec)
    spec = config.tolerances
    nan = float("nan")

    def point(v: float) -> tuple[float, float, float, float, str]:
        try:
            p2, z2 = p, config.z
            if sweep.var == "z_re":
                z2 = complex(v, config.z.imag)
            elif sweep.var == "z_im":
                z2 = complex(config.z.real, v)
            else:
                p2 = replace(p, **{sweep.var: v})
            rep = _run_kk_route(config.method, p2, kappa, z2, spec)
        except (DomainError, ArithmeticError) as exc:
            return v, nan, nan, nan, f"error_{type(exc).__name__}"
        return v, rep.value.real, rep.value.imag, rep.err_estimate, _fmt_flags(rep.flags)

    values = sweep.values()
    with ThreadPoolExecutor(max_workers=min(8, len(values))) as pool:
        rows = list(pool.map(point, values))

    sep = "," if config.output == "csv" else " "
    lines = [sep.join(("sweep_var", "value_re", "value_im", "err_estimate", "route", "flags"))]
    clean = True
    for v, re_v, im_v, err, flags in rows:
        clean = clean and flags == "-"
        lines.append(
            sep.join((_fmt(v), _fmt(re_v), _fmt(im_v), _fmt(err), config.method, flags))
        )
    return (EXIT_OK if clean else EXIT_FLAGGED), "\n".join(lines)


_DISPATCH: dict[str, Callable[[RunConfig], tuple[int, str]]] = {
    "eval-m": cmd_eval,
    "eval-kk": cmd_eval,
    "compare": cmd_compare,
    "region": cmd_region,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def run(argv: list[str]) -> tuple[int, str]:
    """Parse and execute one invocation; (exit status, output text)."""
    try:
        config = config_from_argv(argv)
    except (CLIParseError, DomainError) as exc:
        return EXIT_ERROR, f"error: {exc}"
    try:
        return _DISPATCH[config.command](config)
    except (DomainError, ArithmeticError, GoldenFormatError) as exc:
        return EXIT_ERROR, f"error: {exc}"


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        status, text = run(argv)
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    stream = sys.stderr if status == EXIT_ERROR else sys.stdout
    print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
