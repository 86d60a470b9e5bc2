"""Direct evaluation of Kapteyn-Kummer type series.

A series here is sum_{n>=0} kappa_n M(a+alpha*n, b+beta*n, z(1+zeta*n))
for a coefficient sequence kappa with geometric-type decay.  This module
owns the parameter bundle, the coefficient-function type with its built-in
families, the convergence strips, term-by-term summation with a certified
geometric tail bound, and the closed a-priori bound on the modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, RegionError
from .kernels import kummer_m_series
from .quadrature import EvalReport

_EPS = 2.220446049250313e-16
# Open-strip margin: membership within this distance of a strip boundary
# is rejected, identities there are numerically meaningless.
_EDGE = 1e-12


@dataclass(frozen=True)
class KKParams:
    """Parameter bundle (a, b, alpha, beta, zeta) of the series."""

    a: float
    b: float
    alpha: float
    beta: float
    zeta: float

    def __post_init__(self) -> None:
        if not (self.b > self.a > 0.0):
            raise DomainError(f"require b > a > 0, got a={self.a!r}, b={self.b!r}")
        if not (self.beta >= self.alpha >= 0.0):
            raise DomainError(
                f"require beta >= alpha >= 0, got alpha={self.alpha!r}, beta={self.beta!r}"
            )


@dataclass(frozen=True)
class CoeffFn:
    """Coefficient sequence kappa as a C1 function of a real variable.

    ``eval(n)`` for integer n >= 1 is the sequence value kappa_n; between
    integers it is the C1 interpolation the integral routes integrate
    against.  ``kappa0`` carries the n = 0 value separately (conventionally
    0, and then the lead terms of the integral routes vanish).
    ``root_limit`` is the exact limit of |kappa_n|^(1/n), declared rather
    than estimated; it must be < 1 for any convergence strip to be
    non-empty, and exactly 1 is representable so that the empty-region
    error paths stay reachable.
    """

    eval: Callable[[float], float]
    deriv: Callable[[float], float]
    root_limit: float
    kappa0: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.root_limit <= 1.0) or not math.isfinite(self.root_limit):
            raise DomainError(f"root_limit must lie in [0, 1], got {self.root_limit!r}")


def geometric_family(w: float, kappa0: float = 0.0) -> CoeffFn:
    """kappa_n = w**n with 0 < w <= 1; root limit is w."""
    if not (0.0 < w <= 1.0):
        raise DomainError(f"geometric family requires 0 < w <= 1, got {w!r}")
    lw = math.log(w)
    return CoeffFn(
        eval=lambda u: w**u,
        deriv=lambda u: (w**u) * lw,
        root_limit=w,
        kappa0=kappa0,
    )


def expdecay_family(c: float, kappa0: float = 0.0) -> CoeffFn:
    """kappa_n = exp(-c n) with c >= 0; root limit is exp(-c)."""
    if not (c >= 0.0) or not math.isfinite(c):
        raise DomainError(f"expdecay family requires c >= 0, got {c!r}")
    return CoeffFn(
        eval=lambda u: math.exp(-c * u),
        deriv=lambda u: -c * math.exp(-c * u),
        root_limit=math.exp(-c),
        kappa0=kappa0,
    )


def polygeom_family(w: float, p: float) -> CoeffFn:
    """kappa_n = n**p w**n (so kappa0 = 0); root limit is w.

    p >= 0; for 0 < p < 1 the derivative is unbounded at the origin, so
    deriv(0) is refused there (the function is still C1 on (0, inf) and
    nothing integrates through the origin's value).
    """
    if not (0.0 < w <= 1.0):
        raise DomainError(f"polygeom family requires 0 < w <= 1, got {w!r}")
    if not (p >= 0.0) or not math.isfinite(p):
        raise DomainError(f"polygeom family requires p >= 0, got {p!r}")
    lw = math.log(w)

    def _eval(u: float) -> float:
        if u == 0.0:
            return 1.0 if p == 0.0 else 0.0
        return u**p * w**u

    def _deriv(u: float) -> float:
        if u == 0.0:
            if p == 0.0:
                return lw
            if p == 1.0:
                return 1.0
            if p > 1.0:
                return 0.0
            raise DomainError("polygeom derivative is unbounded at u = 0 for 0 < p < 1")
        return w**u * u ** (p - 1.0) * (p + u * lw)

    return CoeffFn(eval=_eval, deriv=_deriv, root_limit=w, kappa0=0.0)


def _bump(u: float) -> float:
    if u <= 0.0 or u >= 0.5:
        return 0.0
    g = 4.0 * u - 1.0
    d = 1.0 - g * g
    return math.exp(1.0 - 1.0 / d)


def _bump_deriv(u: float) -> float:
    if u <= 0.0 or u >= 0.5:
        return 0.0
    g = 4.0 * u - 1.0
    d = 1.0 - g * g
    return _bump(u) * (-8.0 * g) / (d * d)


def delta_family(kappa0: float = 1.0) -> CoeffFn:
    """The sequence (kappa0, 0, 0, ...).

    The C1 extension is a smooth bump supported in [0, 1/2], so it
    vanishes identically at and beyond u = 1 and contributes nothing to
    any counting sum; the series reduces to the n = 0 term.
    """
    return CoeffFn(eval=_bump, deriv=_bump_deriv, root_limit=0.0, kappa0=kappa0)


def parse_coeff_spec(text: str) -> CoeffFn:
    """Parse the coefficient mini-language shared with the CLI.

    Forms: ``geometric:<w>``, ``expdecay:<c>``, ``polygeom:<w>,<p>``,
    ``delta``, ``zero``.
    """
    name, _, arg = text.strip().partition(":")
    name = name.strip()
    try:
        if name == "geometric":
            return geometric_family(float(arg))
        if name == "expdecay":
            return expdecay_family(float(arg))
        if name == "polygeom":
            w_str, _, p_str = arg.partition(",")
            if not p_str:
                raise DomainError("polygeom takes two arguments: polygeom:<w>,<p>")
            return polygeom_family(float(w_str), float(p_str))
        if name == "delta":
            if arg:
                raise DomainError("delta takes no arguments")
            return delta_family()
        if name == "zero":
            if arg:
                raise DomainError("zero takes no arguments")
            return CoeffFn(
                eval=lambda u: 0.0, deriv=lambda u: 0.0, root_limit=0.0, kappa0=0.0
            )
    except ValueError as exc:
        raise DomainError(f"bad coefficient spec {text!r}: {exc}") from exc
    raise DomainError(f"unknown coefficient family {name!r}")


@dataclass(frozen=True)
class ConvergenceRegion:
    """A strip {z : strip_lo < zeta*Re(z) < strip_hi} in the z-plane.

    kind "R_prime" is the symmetric strip |zeta*Re(z)| < -log(root
    limit) where the series converges absolutely; kind "R" is its
    left open half (zeta*Re(z) < 0) on which the integral routes live.
    Bounds may be infinite when the root limit is 0.
    """

    strip_lo: float
    strip_hi: float
    kind: str
    zeta: float

    def __post_init__(self) -> None:
        if not self.strip_lo < self.strip_hi:
            raise DomainError("strip_lo must be below strip_hi")

    def contains(self, z: complex) -> bool:
        """Open-strip membership; points within 1e-12 of a boundary fail."""
        x = self.zeta * complex(z).real
        return self.strip_lo + _EDGE < x < self.strip_hi - _EDGE


def convergence_region(kappa: CoeffFn, zeta: float, kind: str) -> ConvergenceRegion:
    if kind not in ("R_prime", "R"):
        raise DomainError(f"region kind must be 'R_prime' or 'R', got {kind!r}")
    lim = kappa.root_limit
    if lim >= 1.0:
        raise RegionError(f"every region is empty: root limit {lim!r} is not below 1")
    log_lim = math.log(lim) if lim > 0.0 else -math.inf
    if kind == "R_prime":
        return ConvergenceRegion(strip_lo=log_lim, strip_hi=-log_lim, kind=kind, zeta=zeta)
    return ConvergenceRegion(strip_lo=log_lim, strip_hi=0.0, kind=kind, zeta=zeta)


def _coeff(kappa: CoeffFn, n: int) -> float:
    return kappa.kappa0 if n == 0 else kappa.eval(float(n))


def _tail_majorant(kappa: CoeffFn, n: int, q: float, qn: float) -> float | None:
    """Certified bound on sum_{m>n} |kappa(m)| q^m, given qn = q**n.

    Anchored at the first tail term, with the geometric ratio taken as
    the worst of the next few explicit coefficient ratios and the
    declared root limit.  Sound whenever the coefficient decay ratio does
    not increase past n, which holds for every built-in family.  Returns
    None while no certificate is available yet.
    """
    vals = [abs(kappa.eval(float(m))) for m in range(n + 1, n + 5)]
    if all(v == 0.0 for v in vals):
        # Finitely supported coefficients (root limit 0): the tail is
        # empty.  With a positive root limit a vanishing window proves
        # nothing, so keep summing.
        return 0.0 if kappa.root_limit == 0.0 else None
    if any(lo == 0.0 and hi != 0.0 for lo, hi in zip(vals, vals[1:])):
        return None  # a gap breaks the geometric chain
    ratios = [hi / lo for lo, hi in zip(vals, vals[1:]) if lo > 0.0]
    rho = q * max(max(ratios, default=0.0), kappa.root_limit)
    if rho >= 1.0:
        return None
    return vals[0] * qn * q / (1.0 - rho)


def kk_direct(p: KKParams, kappa: CoeffFn, z: complex, tol: float = 1e-12) -> EvalReport:
    """Sum the series term by term inside its absolute-convergence strip.

    Stops once the a-priori per-term bound |kappa_n M_n| <=
    |kappa_n| e^{|Re z|} e^{|zeta Re z| n} gives a geometric tail below
    tol relative to the partial sum.  ``evaluations`` reports the
    truncation index N (the last summed n).
    """
    if not (tol > 0.0):
        raise DomainError("tol must be positive")
    region = convergence_region(kappa, p.zeta, "R_prime")
    z = complex(z)
    if not region.contains(z):
        raise RegionError(
            f"z={z!r} lies outside the absolute-convergence strip "
            f"({region.strip_lo!r}, {region.strip_hi!r}) in zeta*Re(z)"
        )
    q = math.exp(abs(p.zeta * z.real))
    envelope = math.exp(abs(z.real))

    acc = 0.0 + 0.0j
    abs_acc = 0.0
    inner_err = 0.0
    flags: set[str] = set()
    tail_err = math.inf
    n = 0
    qn = 1.0
    cap = 10_000
    while True:
        c = _coeff(kappa, n)
        if c != 0.0:
            m = kummer_m_series(
                p.a + p.alpha * n, p.b + p.beta * n, z * (1.0 + p.zeta * n), tol=tol
            )
            acc += c * m.value
            abs_acc += abs(c) * abs(m.value)
            inner_err += abs(c) * m.err_estimate
            flags.update(m.flags)
        tail = _tail_majorant(kappa, n, q, qn)
        if tail is not None:
            tail_err = envelope * tail
            if tail_err <= tol * abs(acc) or tail_err == 0.0:
                break
        if n + 1 >= cap:
            flags.add("term_cap")
            if tail is None:
                tail_err = envelope * abs(kappa.eval(float(n))) * qn
            break
        n += 1
        qn *= q

    err = tail_err + inner_err + 2.0 * _EPS * abs_acc
    return EvalReport(value=acc, err_estimate=err, evaluations=n, flags=tuple(sorted(flags)))


def kk_bound(p: KKParams, kappa: CoeffFn, z: complex) -> float:
    """Closed a-priori bound e^{|Re z|} * sum |kappa_n| e^{|zeta Re z| n}."""
    region = convergence_region(kappa, p.zeta, "R_prime")
    z = complex(z)
    if not region.contains(z):
        raise RegionError(
            f"z={z!r} lies outside the absolute-convergence strip; the bound diverges"
        )
    q = math.exp(abs(p.zeta * z.real))
    acc = abs(kappa.kappa0)
    qn = 1.0
    n = 0
    while True:
        tail = _tail_majorant(kappa, n, q, qn)
        if tail is not None and (tail == 0.0 or tail <= 1e-14 * acc):
            acc += tail  # fold the certified remainder in, keeping the bound valid
            break
        if n >= 100_000:
            raise DomainError("bound summation failed to converge; root_limit suspect")
        n += 1
        qn *= q
        acc += abs(kappa.eval(float(n))) * qn
    return math.exp(abs(z.real)) * acc
