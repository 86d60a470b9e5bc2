"""Scalar special-function kernels.

Everything here is binary64 and positive-domain only: log-gamma and
digamma accept x > 0 and there is no reflection branch.  Ratios of Gamma
values are always assembled in log space and exponentiated once.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DivergenceError, DomainError
from .quadrature import EvalReport, QuadSpec, integrate_unit

_EPS = 2.220446049250313e-16
_LN_SQRT_2PI = 0.9189385332046727

# Lanczos rational approximation, g = 7, nine coefficients.  Relative
# accuracy a few ulp for x >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# Asymptotic digamma coefficients of x^{-2k}: -B_{2k}/(2k).
_DIGAMMA_ASY = (
    -8.333333333333333e-2,    # -1/12
    8.333333333333333e-3,     # +1/120
    -3.968253968253968e-3,    # -1/252
    4.166666666666667e-3,     # +1/240
    -7.575757575757576e-3,    # -1/132
    2.1092796092796094e-2,    # +691/32760
    -8.333333333333333e-2,    # -1/12
)
_DIGAMMA_SHIFT = 10.0


def ln_gamma(x: float) -> float:
    """log Gamma(x) for real x > 0."""
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    shift = 0.0
    if x < 0.5:
        # One recurrence step instead of reflection keeps the contract
        # positive-domain only.
        shift = -math.log(x)
        x = x + 1.0
    xm1 = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, 9):
        acc += _LANCZOS_C[i] / (xm1 + i)
    t = xm1 + _LANCZOS_G + 0.5
    return _LN_SQRT_2PI + (xm1 + 0.5) * math.log(t) - t + math.log(acc) + shift


def digamma(x: float) -> float:
    """psi(x) for real x > 0, by recurrence into the asymptotic range."""
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    acc = 0.0
    while x < _DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    r = 1.0 / (x * x)
    poly = 0.0
    for c in reversed(_DIGAMMA_ASY):
        poly = (poly + c) * r
    return acc + math.log(x) - 0.5 / x + poly


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n for integer n >= 0; overflow is an error."""
    if n < 0 or n != int(n):
        raise DomainError(f"pochhammer requires integer n >= 0, got {n!r}")
    acc = 1.0
    for k in range(int(n)):
        acc *= x + k
        if math.isinf(acc):
            raise OverflowError(f"pochhammer({x!r}, {n!r}) overflows binary64")
    return acc


def beta(p: float, q: float) -> float:
    """Euler Beta B(p, q) for p, q > 0, via log-gamma."""
    if not (p > 0.0 and q > 0.0):
        raise DomainError(f"beta requires p, q > 0, got ({p!r}, {q!r})")
    return math.exp(ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q))


def _require_not_nonpositive_int(b: float, where: str) -> None:
    if b <= 0.0 and abs(b - round(b)) < 1e-12:
        raise DomainError(f"{where} must not be a non-positive integer, got {b!r}")


def kummer_m_series(
    a: float,
    b: float,
    z: complex,
    *,
    tol: float = 1e-14,
    term_cap: int = 10_000,
) -> EvalReport:
    """Kummer's M(a, b, z) by direct Taylor summation.

    Terminates once a certified geometric bound on the remaining tail
    falls below tol * |partial sum|; hitting term_cap flags the result
    instead of raising.  err_estimate includes the rounding floor
    eps * sum|terms|, which captures cancellation for Re(z) << 0.
    """
    _require_not_nonpositive_int(b, "kummer_m_series: b")
    z = complex(z)
    term = 1.0 + 0.0j
    acc = term
    abs_acc = 1.0
    az = abs(z)
    n = 0
    tail = 0.0
    flags: tuple[str, ...] = ()
    while True:
        if n >= term_cap:
            flags = ("term_cap",)
            tail = abs(term)
            break
        term = term * (a + n) / ((b + n) * (n + 1)) * z
        n += 1
        if term == 0.0:
            break  # polynomial case: a hit a non-positive integer
        if not (math.isfinite(term.real) and math.isfinite(term.imag)):
            raise OverflowError(f"kummer_m_series term overflowed at n={n}")
        acc += term
        abs_acc += abs(term)
        if a + n > 0.0 and b + n > 0.0:
            # (a+m)/(b+m) is monotone toward 1 for m >= n, so this ratio
            # majorises every later term ratio: the tail is geometric.
            ratio = az * max((a + n) / (b + n), 1.0) / (n + 1)
            if ratio < 0.75:
                tail = abs(term) * ratio / (1.0 - ratio)
                if tail <= tol * abs(acc):
                    break
    err = tail + 2.0 * _EPS * abs_acc
    return EvalReport(value=acc, err_estimate=err, evaluations=n, flags=flags)


def kummer_m_integral(a: float, b: float, z: complex, spec: QuadSpec) -> EvalReport:
    """M(a, b, z) through its Euler integral; needs b > a > 0."""
    if not (b > a > 0.0):
        raise DomainError(f"kummer_m_integral requires b > a > 0, got a={a!r}, b={b!r}")
    z = complex(z)
    am1 = a - 1.0
    bam1 = b - a - 1.0

    def f(t: float, tc: float) -> complex:
        return cmath.exp(z * t) * (t ** am1) * (tc ** bam1)

    quad = integrate_unit(f, spec, endpoint_aware=True)
    pref = math.exp(ln_gamma(b) - ln_gamma(a) - ln_gamma(b - a))
    value = pref * quad.value
    err = pref * quad.err_estimate + _EPS * abs(value)
    return EvalReport(value=value, err_estimate=err, evaluations=quad.evaluations, flags=quad.flags)


@dataclass(frozen=True)
class KdFSpec:
    """Parameter lists of a Kampe de Feriet double series.

    ``joint_upper``/``joint_lower`` are weighted by m+n, the x rows by m,
    the y rows by n.  Lower-row entries sit in denominators and must not
    be non-positive integers.
    """

    joint_upper: tuple[float, ...]
    joint_lower: tuple[float, ...]
    x_upper: tuple[float, ...]
    x_lower: tuple[float, ...]
    y_upper: tuple[float, ...]
    y_lower: tuple[float, ...]

    def __post_init__(self) -> None:
        for name in ("joint_lower", "x_lower", "y_lower"):
            for entry in getattr(self, name):
                _require_not_nonpositive_int(entry, f"KdFSpec.{name} entry")


def _prod_at(params: Sequence[float], j: int) -> float:
    acc = 1.0
    for p in params:
        acc *= p + j
    return acc


def kdf_eval(
    spec: KdFSpec,
    x: complex,
    y: complex,
    *,
    tol: float = 1e-13,
    block_cap: int = 600,
) -> EvalReport:
    """Sum a Kampe de Feriet double series by anti-diagonal blocks.

    Terms are built by multiplicative recurrences only, so zeros entering
    through upper-row parameters propagate exactly.  Stops after three
    consecutive blocks below tol * |accumulated|; block magnitudes still
    non-decreasing at block_cap raise DivergenceError.
    """
    x = complex(x)
    y = complex(y)
    # diag[m] = term(m, k-m) for the current anti-diagonal k.
    diag = [1.0 + 0.0j]
    acc = 1.0 + 0.0j
    abs_acc = 1.0
    # y-direction factors S(n) = prod(y_upper+n)/prod(y_lower+n) * y/(n+1),
    # extended as diagonals grow.
    s_fac: list[complex] = []
    block_mags = [1.0]
    small_streak = 0
    evals = 1
    flags: tuple[str, ...] = ()
    for k in range(1, block_cap + 1):
        j = k - 1
        r_fac = _prod_at(spec.joint_upper, j) / _prod_at(spec.joint_lower, j)
        s_fac.append(_prod_at(spec.y_upper, j) / _prod_at(spec.y_lower, j) * y / k)
        q_fac = _prod_at(spec.x_upper, j) / _prod_at(spec.x_lower, j) * x / k
        new = [0.0 + 0.0j] * (k + 1)
        for m in range(k):
            new[m] = diag[m] * r_fac * s_fac[j - m]
        new[k] = diag[j] * r_fac * q_fac
        diag = new
        block = sum(diag)
        acc += block
        mag = sum(abs(t) for t in diag)
        abs_acc += mag
        evals += k + 1
        block_mags.append(abs(block))
        if not (math.isfinite(block.real) and math.isfinite(block.imag)):
            raise DivergenceError("Kampe de Feriet block overflowed; series diverges")
        if abs(block) <= tol * abs(acc):
            small_streak += 1
            if small_streak >= 3:
                break
        else:
            small_streak = 0
    else:
        recent = block_mags[-6:]
        if all(b2 >= b1 for b1, b2 in zip(recent, recent[1:])):
            raise DivergenceError(
                "Kampe de Feriet blocks non-decreasing at block cap; series diverges"
            )
        flags = ("block_cap",)
    err = max(block_mags[-1], _EPS * abs_acc) + 2.0 * _EPS * abs_acc
    return EvalReport(value=acc, err_estimate=err, evaluations=evals, flags=flags)


def _dm_spec_da(a: float, b: float) -> KdFSpec:
    return KdFSpec(
        joint_upper=(a + 1.0,),
        joint_lower=(2.0, b + 1.0),
        x_upper=(1.0,),
        x_lower=(),
        y_upper=(1.0, a),
        y_lower=(a + 1.0,),
    )


def _dm_spec_db(a: float, b: float) -> KdFSpec:
    return KdFSpec(
        joint_upper=(a + 1.0,),
        joint_lower=(2.0, b + 1.0),
        x_upper=(1.0,),
        x_lower=(),
        y_upper=(1.0, b),
        y_lower=(b + 1.0,),
    )


def dm_da(a: float, b: float, z: complex, *, tol: float = 1e-13) -> EvalReport:
    """dM/da as (z/b) times a Kampe de Feriet double series at (z, z)."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"dm_da requires a, b > 0, got ({a!r}, {b!r})")
    z = complex(z)
    if z == 0.0:
        return EvalReport(value=0.0 + 0.0j, err_estimate=0.0, evaluations=0)
    inner = kdf_eval(_dm_spec_da(a, b), z, z, tol=tol)
    pref = z / b
    return EvalReport(
        value=pref * inner.value,
        err_estimate=abs(pref) * inner.err_estimate,
        evaluations=inner.evaluations,
        flags=inner.flags,
    )


def dm_db(a: float, b: float, z: complex, *, tol: float = 1e-13) -> EvalReport:
    """dM/db as (-a z/b^2) times a Kampe de Feriet double series at (z, z)."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"dm_db requires a, b > 0, got ({a!r}, {b!r})")
    z = complex(z)
    if z == 0.0:
        return EvalReport(value=0.0 + 0.0j, err_estimate=0.0, evaluations=0)
    inner = kdf_eval(_dm_spec_db(a, b), z, z, tol=tol)
    pref = -a * z / (b * b)
    return EvalReport(
        value=pref * inner.value,
        err_estimate=abs(pref) * inner.err_estimate,
        evaluations=inner.evaluations,
        flags=inner.flags,
    )
