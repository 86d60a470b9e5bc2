"""Golden-vector generation: grids, consistency gate, emission.

Every vector is computed twice, once at ``digits + 10`` decimal places
and once at ``digits + 20``; the two runs must agree to within
10**(2 - digits) relative or generation aborts.  Series vectors carry an
additional certified truncation tail that must land below
10**(-digits - 2) relative to the sum, otherwise the point is skipped
and logged rather than emitted.

All numeric payloads are decimal strings.  Input strings are parsed
fresh inside each working-precision context so both runs see the same
decimal, not a shared binary rounding.
"""

from __future__ import annotations

import json
import math
import os
from typing import Callable, Iterable, Optional

import mpmath as mp

from .hp import (
    OracleTailError,
    beta_hp,
    digamma_hp,
    dirichlet_sum_hp,
    dm_da_hp,
    dm_db_hp,
    kk_sum_hp,
    kummer_hp,
    lgamma_hp,
)

SCHEMA_KEYS = ("function", "inputs", "value_re", "value_im", "digits", "tol")

# Declared tolerances for the float64 consumer, by function tag prefix.
# Kernel tags sit close to machine accuracy; composite sums allow for
# accumulation; the specialized integral routes get the loose budgets
# their acceptance thresholds use.
TOLS = {
    "ln_gamma": "1e-13",
    "digamma": "1e-13",
    "beta": "1e-13",
    "kummer_m": "1e-12",
    "dm_da": "1e-11",
    "dm_db": "1e-11",
    "kk_direct": "1e-10",
    "dirichlet_direct": "1e-10",
    "kk_case_C": "1e-4",
    "kk_case_D": "1e-5",
}


class OracleGateError(RuntimeError):
    """Regenerating at higher precision moved a value too much."""


def _gate(compute: Callable[[], mp.mpc], digits: int, label: str) -> mp.mpc:
    """Run compute() at two precisions and require agreement.

    Returns the higher-precision value.  compute() must parse its own
    inputs from decimal strings at the current precision.
    """
    with mp.workdps(digits + 10):
        first = compute()
    with mp.workdps(digits + 20):
        second = compute()
        scale = max(abs(second), mp.mpf(10) ** (-digits))
        drift = abs(first - second) / scale
        if drift >= mp.mpf(10) ** (2 - digits):
            raise OracleGateError(
                f"{label}: regeneration moved the value by {mp.nstr(drift, 3)} relative"
            )
    return second


def _record(function: str, inputs: dict, value: mp.mpc, digits: int) -> dict:
    tol = TOLS[function.rsplit("_geometric", 1)[0].rsplit("_expdecay", 1)[0]]
    with mp.workdps(digits + 10):
        value_re = mp.nstr(mp.re(value), digits)
        value_im = mp.nstr(mp.im(value), digits)
    return {
        "function": function,
        "inputs": dict(inputs),
        "value_re": value_re,
        "value_im": value_im,
        "digits": digits,
        "tol": tol,
    }


# --- scalar kernel grids ------------------------------------------------

LN_GAMMA_X = ("0.25", "0.5", "1", "1.5", "2.5", "3.7", "10.25")
DIGAMMA_X = ("0.3", "0.5", "1", "2.5", "4.2", "9.5")
BETA_AB = (("1", "1.5"), ("0.5", "0.7"), ("2.3", "2"), ("1.7", "3.25"))
KUMMER_ABZ = (
    ("1", "2", "1", "0"),
    ("1", "2", "-1", "0"),
    ("1", "2", "2", "0"),
    ("0.5", "1.2", "0.5", "0"),
    ("0.5", "1.5", "-3", "0"),
    ("2.3", "4.3", "-2", "0"),
    ("3", "4.5", "1.5", "0"),
    ("1", "2.5", "0", "0.5"),
    ("0.7", "1.9", "-1", "0.3"),
    ("2", "3.5", "-0.5", "0"),
)
DM_ABZ = (
    ("1", "2", "0.5", "0"),
    ("1", "2", "-0.5", "0"),
    ("0.7", "1.9", "0.25", "0"),
    ("2", "3.5", "-1", "0"),
    ("1", "2.5", "0", "0.5"),
    ("1.3", "2.8", "0.75", "0"),
)


def gen_kernels(digits: int = 30) -> list[dict]:
    """Reference vectors for the scalar kernels on the module grids."""
    out: list[dict] = []

    for x in LN_GAMMA_X:
        v = _gate(lambda x=x: mp.mpc(lgamma_hp(mp.mpf(x))), digits, f"ln_gamma({x})")
        out.append(_record("ln_gamma", {"x": x}, v, digits))

    for x in DIGAMMA_X:
        v = _gate(lambda x=x: mp.mpc(digamma_hp(mp.mpf(x))), digits, f"digamma({x})")
        out.append(_record("digamma", {"x": x}, v, digits))

    for a, b in BETA_AB:
        v = _gate(
            lambda a=a, b=b: mp.mpc(beta_hp(mp.mpf(a), mp.mpf(b))),
            digits,
            f"beta({a},{b})",
        )
        out.append(_record("beta", {"a": a, "b": b}, v, digits))

    for fn, name, grid in (
        (kummer_hp, "kummer_m", KUMMER_ABZ),
        (dm_da_hp, "dm_da", DM_ABZ),
        (dm_db_hp, "dm_db", DM_ABZ),
    ):
        for a, b, zr, zi in grid:
            v = _gate(
                lambda fn=fn, a=a, b=b, zr=zr, zi=zi: fn(
                    mp.mpf(a), mp.mpf(b), mp.mpc(mp.mpf(zr), mp.mpf(zi))
                ),
                digits,
                f"{name}({a},{b},{zr}+{zi}i)",
            )
            out.append(_record(name, {"a": a, "b": b, "z_re": zr, "z_im": zi}, v, digits))

    return out


# --- series grids -------------------------------------------------------

# (a, b, alpha, beta, zeta, family, parameter, kappa0, z_re); the -1.5
# point sits outside the direct-summation strip on purpose.
KK_GRID = (
    ("1", "2.5", "0.25", "0.5", "1", "geometric", "0.5", "1", "-0.1"),
    ("1", "2.5", "0.25", "0.5", "1", "geometric", "0.5", "1", "-0.25"),
    ("1", "2.5", "0.25", "0.5", "1", "geometric", "0.5", "1", "-0.4"),
    ("1", "2.5", "0.25", "0.5", "1", "geometric", "0.5", "0", "-0.25"),
    ("0.8", "2", "0.3", "0.3", "0.5", "geometric", "0.5", "1", "-0.25"),
    ("0.8", "2", "0.3", "0.3", "0.5", "geometric", "0.5", "1", "-0.5"),
    ("1", "2.5", "0.25", "0.5", "1", "geometric", "0.5", "1", "-1.5"),
    ("1", "2.5", "0.25", "0.5", "1", "expdecay", "1", "0", "-0.2"),
    ("1", "2.5", "0.25", "0.5", "1", "expdecay", "1", "0", "-0.35"),
)

# (z_re, t) over the first KK_GRID parameter set; the +0.25 point sits
# outside the one-sided Cahen strip on purpose.
DIRICHLET_GRID = (
    ("-0.1", "0.25"),
    ("-0.1", "0.5"),
    ("-0.1", "0.75"),
    ("-0.25", "0.125"),
    ("-0.25", "0.25"),
    ("-0.25", "0.5"),
    ("-0.25", "0.75"),
    ("-0.25", "0.875"),
    ("-0.4", "0.5"),
    ("0.25", "0.5"),
)

# (a, b, beta, w, z_re) with alpha = zeta = 0 implied
CASE_C_GRID = (
    ("1", "2.5", "0.5", "0.5", "-0.2"),
    ("1", "2.5", "0.5", "0.25", "-0.3"),
    ("1.2", "2.2", "0.7", "0.5", "-0.25"),
)

# (a, b, zeta, w, z_re) with alpha = beta = 0 implied
CASE_D_GRID = (
    ("1", "2", "1", "0.5", "-0.3"),
    ("1", "2", "1", "0.5", "-0.2"),
    ("1.5", "2.7", "0.8", "0.25", "-0.25"),
)

_REGION_MARGIN = 1e-9


def _family_bits(family: str, param: str):
    """Coefficient callable factory and root limit for one family.

    The callable is rebuilt inside each precision context; only the
    decimal parameter string crosses contexts.
    """
    if family == "geometric":

        def make():
            w = mp.mpf(param)
            return (lambda n: w**n), w

    elif family == "expdecay":

        def make():
            c = mp.mpf(param)
            return (lambda n: mp.exp(-c * n)), mp.exp(-c)

    else:
        raise ValueError(f"unknown family {family!r}")
    return make


def _in_r_prime(zeta: float, z_re: float, root_limit: float) -> bool:
    return abs(zeta * z_re) < -math.log(root_limit) - _REGION_MARGIN


def _in_r(zeta: float, z_re: float, root_limit: float) -> bool:
    return math.log(root_limit) + _REGION_MARGIN < zeta * z_re < -_REGION_MARGIN


def _gate_series(
    compute: Callable[[], tuple],
    digits: int,
    label: str,
    log: list[str],
) -> Optional[mp.mpc]:
    """Gate a (value, tail) computation and certify the tail target.

    Returns None (after logging) when the tail certificate misses the
    10**(-digits-2) relative target; gate failures still raise.
    """
    try:
        with mp.workdps(digits + 10):
            first, _ = compute()
        with mp.workdps(digits + 20):
            second, tail = compute()
            target = mp.mpf(10) ** (-digits - 2) * abs(second)
            if not tail < target:
                log.append(
                    f"skip {label}: tail {mp.nstr(tail, 3)} above target {mp.nstr(target, 3)}"
                )
                return None
            scale = max(abs(second), mp.mpf(10) ** (-digits))
            drift = abs(first - second) / scale
            if drift >= mp.mpf(10) ** (2 - digits):
                raise OracleGateError(
                    f"{label}: regeneration moved the value by {mp.nstr(drift, 3)} relative"
                )
            log.append(f"emit {label}: tail {mp.nstr(tail, 3)} below target")
    except OracleTailError as exc:
        log.append(f"skip {label}: {exc}")
        return None
    return second


def gen_series(digits: int = 30) -> tuple[list[dict], list[str]]:
    """Reference vectors for the composite sums, with a generation log.

    Grid points outside the strip a consumer route insists on are
    skipped up front and logged, never emitted.
    """
    out: list[dict] = []
    log: list[str] = []

    for a, b, al, be, ze, family, param, kappa0, zr in KK_GRID:
        tag = f"kk_direct_{family}"
        pkey = "w" if family == "geometric" else "c"
        inputs = {
            "a": a, "b": b, "alpha": al, "beta": be, "zeta": ze,
            pkey: param, "kappa0": kappa0, "z_re": zr, "z_im": "0",
        }
        label = f"{tag}({a},{b},{al},{be},{ze};{pkey}={param},k0={kappa0};z={zr})"
        make = _family_bits(family, param)
        with mp.workdps(digits + 20):
            _, limit = make()
            root_limit = float(limit)
        if not _in_r_prime(float(ze), float(zr), root_limit):
            log.append(f"skip {label}: z outside the direct-summation strip")
            continue

        def compute(a=a, b=b, al=al, be=be, ze=ze, kappa0=kappa0, zr=zr, make=make):
            kappa, limit = make()
            p = (mp.mpf(a), mp.mpf(b), mp.mpf(al), mp.mpf(be), mp.mpf(ze))
            rel = mp.mpf(10) ** (-(digits + 6))
            return kk_sum_hp(p, kappa, limit, mp.mpf(kappa0), mp.mpc(mp.mpf(zr)), rel)

        v = _gate_series(compute, digits, label, log)
        if v is not None:
            out.append(_record(tag, inputs, v, digits))

    a, b, al, be, ze, family, param, kappa0 = KK_GRID[0][:8]
    make = _family_bits(family, param)
    for zr, t in DIRICHLET_GRID:
        tag = f"dirichlet_direct_{family}"
        inputs = {
            "a": a, "b": b, "alpha": al, "beta": be, "zeta": ze,
            "w": param, "kappa0": kappa0, "z_re": zr, "z_im": "0", "t": t,
        }
        label = f"{tag}(z={zr},t={t})"
        if not _in_r(float(ze), float(zr), float(param)):
            log.append(f"skip {label}: z outside the Cahen strip")
            continue

        def compute(a=a, b=b, al=al, be=be, ze=ze, kappa0=kappa0, zr=zr, t=t, make=make):
            kappa, limit = make()
            p = (mp.mpf(a), mp.mpf(b), mp.mpf(al), mp.mpf(be), mp.mpf(ze))
            rel = mp.mpf(10) ** (-(digits + 6))
            return dirichlet_sum_hp(
                p, kappa, limit, mp.mpf(kappa0), mp.mpc(mp.mpf(zr)), mp.mpf(t), rel
            )

        v = _gate_series(compute, digits, label, log)
        if v is not None:
            out.append(_record(tag, inputs, v, digits))

    for a, b, be, w, zr in CASE_C_GRID:
        tag = "kk_case_C_geometric"
        inputs = {"a": a, "b": b, "beta": be, "w": w, "z_re": zr, "z_im": "0"}
        label = f"{tag}({a},{b},{be};w={w};z={zr})"
        make = _family_bits("geometric", w)

        def compute(a=a, b=b, be=be, zr=zr, make=make):
            kappa, limit = make()
            p = (mp.mpf(a), mp.mpf(b), mp.mpf(0), mp.mpf(be), mp.mpf(0))
            rel = mp.mpf(10) ** (-(digits + 6))
            return kk_sum_hp(p, kappa, limit, mp.mpf(0), mp.mpc(mp.mpf(zr)), rel)

        v = _gate_series(compute, digits, label, log)
        if v is not None:
            out.append(_record(tag, inputs, v, digits))

    for a, b, ze, w, zr in CASE_D_GRID:
        tag = "kk_case_D_geometric"
        inputs = {"a": a, "b": b, "zeta": ze, "w": w, "z_re": zr, "z_im": "0"}
        label = f"{tag}({a},{b},{ze};w={w};z={zr})"
        if not _in_r(float(ze), float(zr), float(w)):
            log.append(f"skip {label}: z outside the Cahen strip")
            continue
        make = _family_bits("geometric", w)

        def compute(a=a, b=b, ze=ze, zr=zr, make=make):
            kappa, limit = make()
            p = (mp.mpf(a), mp.mpf(b), mp.mpf(0), mp.mpf(0), mp.mpf(ze))
            rel = mp.mpf(10) ** (-(digits + 6))
            return kk_sum_hp(p, kappa, limit, mp.mpf(0), mp.mpc(mp.mpf(zr)), rel)

        v = _gate_series(compute, digits, label, log)
        if v is not None:
            out.append(_record(tag, inputs, v, digits))

    return out, log


def write_goldens(path: str, records: Iterable[dict]) -> None:
    """Emit records as a JSON array, UTF-8, LF, trailing newline."""
    records = list(records)
    for rec in records:
        missing = [k for k in SCHEMA_KEYS if k not in rec]
        if missing:
            raise ValueError(f"record for {rec.get('function')!r} missing {missing}")
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(records, fh, indent=1)
        fh.write("\n")
