"""The Dirichlet series attached to a Kapteyn-Kummer series.

Termwise the attached series carries exponentials e^{-p_t n} whose phase
p_t mixes the unit-interval variable t with z; summing it directly and
reconstructing it from its counting function via the classical
Laplace-type (Cahen) integral gives two independent routes, and pushing
either through the Euler integral over t rebuilds the original series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DivergenceError, DomainError, RegionError
from .kernels import digamma, ln_gamma
from .quadrature import EvalReport, QuadSpec, integrate_semiinf_unitwise, integrate_unit
from .series import CoeffFn, KKParams, convergence_region

_EPS = 2.220446049250313e-16


def _xlogx(x: float) -> float:
    return 0.0 if x == 0.0 else x * math.log(x)


def growth_constant(p: KKParams) -> float:
    """Exponential growth rate of the Gamma-ratio weight W(u).

    W(u) ~ const * u^mu * e^{C u} by Stirling; this returns C =
    beta log beta - (beta-alpha) log(beta-alpha) - alpha log alpha, with
    0 log 0 = 0.  Equivalently -log sup_t t^alpha (1-t)^(beta-alpha).
    """
    return _xlogx(p.beta) - _xlogx(p.beta - p.alpha) - _xlogx(p.alpha)


@dataclass(frozen=True)
class PtValue:
    """The Dirichlet phase p_t at one t, with its Cahen margin."""

    value: complex
    real_part: float
    growth_margin: float


def _pt_parts(p: KKParams, z: complex, t: float, tc: float) -> PtValue:
    # tc = 1-t is passed separately so endpoint precision survives.
    lt = math.log(t)
    ltc = math.log(tc)
    value = -p.alpha * lt - (p.beta - p.alpha) * ltc - z * p.zeta * t
    real_part = -p.alpha * lt - (p.beta - p.alpha) * ltc - p.zeta * z.real * t
    return PtValue(value=value, real_part=real_part, growth_margin=real_part - growth_constant(p))


def pt(p: KKParams, z: complex, t: float) -> PtValue:
    """Phase p_t = -alpha log t - (beta-alpha) log(1-t) - z zeta t."""
    if not 0.0 < t < 1.0:
        raise DomainError(f"pt requires 0 < t < 1, got {t!r}")
    return _pt_parts(p, complex(z), t, 1.0 - t)


def _w_log(p: KKParams, u: float) -> float:
    return (
        ln_gamma(p.b + p.beta * u)
        - ln_gamma(p.b - p.a + (p.beta - p.alpha) * u)
        - ln_gamma(p.a + p.alpha * u)
    )


def _w_psi(p: KKParams, u: float) -> float:
    # logarithmic derivative of the weight W at u
    return (
        p.beta * digamma(p.b + p.beta * u)
        - (p.beta - p.alpha) * digamma(p.b - p.a + (p.beta - p.alpha) * u)
        - p.alpha * digamma(p.a + p.alpha * u)
    )


class CountingAccumulator:
    """Prefix values of the counting function A(s) of the Dirichlet series.

    A(s) sums the weighted coefficients kappa(n) W(n) for 1 <= n <= [s].
    The primary route integrates the condensed derivative form
    kappa W + {u} (kappa W)' over each unit interval, which telescopes to
    exactly the weighted coefficient at the right endpoint; the plain
    weighted sum is kept as the cross-check route.  Unit-interval results
    are cached, so repeated queries at growing s cost one quadrature per
    new integer.
    """

    def __init__(
        self,
        p: KKParams,
        kappa: CoeffFn,
        spec: Optional[QuadSpec] = None,
        method: str = "integral",
        weighted: bool = True,
    ) -> None:
        if method not in ("integral", "sum"):
            raise DomainError(f"method must be 'integral' or 'sum', got {method!r}")
        self._p = p
        self._kappa = kappa
        self._spec = spec if spec is not None else QuadSpec()
        self._method = method
        self._weighted = weighted
        self._prefix = [0.0]
        self._err = 0.0
        self._evals = 0
        self.flags: set[str] = set()

    def _panel_integrand(self, base: float) -> Callable[[float], float]:
        p, kappa = self._p, self._kappa
        if not self._weighted:

            def f_plain(tau: float) -> float:
                u = base + tau
                return kappa.eval(u) + tau * kappa.deriv(u)

            return f_plain

        def f(tau: float) -> float:
            u = base + tau
            w = math.exp(_w_log(p, u))
            kw = kappa.eval(u) * w
            kw_prime = kappa.deriv(u) * w + kappa.eval(u) * w * _w_psi(p, u)
            return kw + tau * kw_prime

        return f

    def _extend(self, m: int) -> None:
        while len(self._prefix) <= m:
            k = len(self._prefix) - 1
            if self._method == "integral":
                panel = integrate_unit(self._panel_integrand(float(k)), self._spec)
                self._prefix.append(self._prefix[-1] + panel.value.real)
                self._err += panel.err_estimate
                self._evals += panel.evaluations
                self.flags.update(panel.flags)
            else:
                n = k + 1
                inc = self._kappa.eval(float(n))
                if self._weighted:
                    inc *= math.exp(_w_log(self._p, float(n)))
                self._prefix.append(self._prefix[-1] + inc)
                self._evals += 1

    def value_at(self, s: float) -> float:
        if not (s >= 0.0) or not math.isfinite(s):
            raise DomainError(f"counting function requires finite s >= 0, got {s!r}")
        m = int(math.floor(s))
        self._extend(m)
        return self._prefix[m]

    @property
    def err_estimate(self) -> float:
        return self._err

    @property
    def evaluations(self) -> int:
        return self._evals


def counting_sum(
    p: KKParams,
    kappa: CoeffFn,
    s: float,
    spec: Optional[QuadSpec] = None,
    method: str = "integral",
) -> float:
    """Counting function A(s) = sum_{n=1}^{[s]} kappa(n) W(n).

    ``method`` selects the condensed-derivative integral route (primary)
    or the plain weighted sum (cross-check); the two agree to quadrature
    accuracy by the per-interval telescoping identity.
    """
    return CountingAccumulator(p, kappa, spec, method).value_at(s)


def _dirichlet_direct_at(
    p: KKParams,
    kappa: CoeffFn,
    z: complex,
    t: float,
    tc: float,
    tol: float,
    w_cache: list,
) -> EvalReport:
    phase = _pt_parts(p, z, t, tc)
    # log of the asymptotic term ratio: root_limit * e^{-margin}
    if kappa.root_limit > 0.0:
        asy_logratio = math.log(kappa.root_limit) - phase.growth_margin
    else:
        asy_logratio = -math.inf

    def w_log_at(n: int) -> float:
        while len(w_cache) <= n:
            w_cache.append(_w_log(p, float(len(w_cache))))
        return w_cache[n]

    acc = 0.0 + 0.0j
    abs_acc = 0.0
    # log magnitudes of recent terms; None marks a structural zero coefficient.
    logmags: list[Optional[float]] = []
    tail = math.inf
    flags: tuple[str, ...] = ()
    n = 0
    cap = 10_000
    while True:
        c = kappa.kappa0 if n == 0 else kappa.eval(float(n))
        if c != 0.0:
            expo = w_log_at(n) - phase.value * n
            term = c * cmath.exp(expo)
            acc += term
            abs_acc += abs(term)
            # kept in log space so underflowed terms still certify the stop
            logmags.append(math.log(abs(c)) + expo.real)
        else:
            logmags.append(None)
        if n >= 4:
            recent = logmags[-4:]
            if all(m is None for m in recent):
                if kappa.root_limit == 0.0:
                    tail = 0.0
                    break
            elif all(m is not None for m in recent):
                rho_log = max(max(hi - lo for lo, hi in zip(recent, recent[1:])), asy_logratio)
                if rho_log < 0.0:
                    last = recent[-1]
                    tail = math.exp(min(last + rho_log, 700.0)) / -math.expm1(rho_log)
                    if tail <= tol * abs(acc):
                        break
        if n + 1 >= cap:
            flags = ("term_cap",)
            break
        n += 1

    err = tail + 2.0 * _EPS * abs_acc
    return EvalReport(value=acc, err_estimate=err, evaluations=n + 1, flags=flags)


def dirichlet_direct(
    p: KKParams, kappa: CoeffFn, z: complex, t: float, tol: float = 1e-12
) -> EvalReport:
    """Sum the attached Dirichlet series termwise at one t.

    Terms are kappa_n W(n) e^{-p_t n}, assembled in log space.  The stop
    uses a geometric majorant from the observed term ratios and the
    asymptotic ratio root_limit * e^{-growth margin}; the report carries
    the term count in ``evaluations``.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"dirichlet_direct requires 0 < t < 1, got {t!r}")
    if not (tol > 0.0):
        raise DomainError("tol must be positive")
    z = complex(z)
    if not convergence_region(kappa, p.zeta, "R").contains(z):
        raise RegionError(f"z={z!r} lies outside the Cahen strip (zeta*Re(z) in (log L, 0))")
    return _dirichlet_direct_at(p, kappa, z, t, 1.0 - t, tol, [])


def _dirichlet_cahen_at(
    p: KKParams,
    kappa: CoeffFn,
    z: complex,
    t: float,
    tc: float,
    quad: QuadSpec,
    counting: CountingAccumulator,
) -> EvalReport:
    phase = _pt_parts(p, z, t, tc)
    if not phase.growth_margin > 0.0:
        raise DivergenceError(
            f"Cahen integral diverges at t={t!r}: growth margin {phase.growth_margin!r} <= 0"
        )
    lead = kappa.kappa0 * math.exp(_w_log(p, 0.0))
    pv = phase.value

    def integrand(s: float) -> complex:
        return cmath.exp(-pv * s) * counting.value_at(s)

    quad_out = integrate_semiinf_unitwise(integrand, phase.growth_margin, quad)
    value = lead + pv * quad_out.value
    err = (
        abs(pv) * quad_out.err_estimate
        + abs(pv) * counting.err_estimate / phase.real_part
        + _EPS * (abs(lead) + abs(value))
    )
    return EvalReport(
        value=value,
        err_estimate=err,
        evaluations=quad_out.evaluations,
        flags=tuple(sorted(set(quad_out.flags) | counting.flags)),
    )


def dirichlet_cahen(
    p: KKParams, kappa: CoeffFn, z: complex, t: float, quad: Optional[QuadSpec] = None
) -> EvalReport:
    """Rebuild the Dirichlet series from its counting function.

    Lead constant kappa0 W(0) plus p_t times the Laplace transform of
    A(s) at p_t, integrated panelwise with the growth margin as the
    certified decay rate.  Requires a positive margin.
    """
    if not 0.0 < t < 1.0:
        raise DomainError(f"dirichlet_cahen requires 0 < t < 1, got {t!r}")
    z = complex(z)
    if not convergence_region(kappa, p.zeta, "R").contains(z):
        raise RegionError(f"z={z!r} lies outside the Cahen strip (zeta*Re(z) in (log L, 0))")
    spec = quad if quad is not None else QuadSpec()
    counting = CountingAccumulator(p, kappa, spec)
    return _dirichlet_cahen_at(p, kappa, z, t, 1.0 - t, spec, counting)


def kk_via_dirichlet(
    p: KKParams,
    kappa: CoeffFn,
    z: complex,
    quad: Optional[QuadSpec] = None,
    inner: str = "direct",
) -> EvalReport:
    """Series value through the Euler-integral route.

    Integrates e^{zt} t^{a-1} (1-t)^{b-a-1} D(t) over (0, 1) with the
    Dirichlet factor D(t) computed per quadrature node by the chosen
    inner route ('direct' or 'cahen'); no interpolation between nodes.
    Any flagged inner node flags the whole result.
    """
    if inner not in ("direct", "cahen"):
        raise DomainError(f"inner must be 'direct' or 'cahen', got {inner!r}")
    z = complex(z)
    if not convergence_region(kappa, p.zeta, "R").contains(z):
        raise RegionError(f"z={z!r} lies outside the Cahen strip (zeta*Re(z) in (log L, 0))")
    spec = quad if quad is not None else QuadSpec()
    am1 = p.a - 1.0
    bam1 = p.b - p.a - 1.0
    inner_flags: set[str] = set()
    max_inner_err = 0.0
    w_cache: list = []
    counting = CountingAccumulator(p, kappa, spec) if inner == "cahen" else None

    def f(t: float, tc: float) -> complex:
        nonlocal max_inner_err
        if inner == "direct":
            d = _dirichlet_direct_at(p, kappa, z, t, tc, spec.rel_tol, w_cache)
        else:
            d = _dirichlet_cahen_at(p, kappa, z, t, tc, spec, counting)
        inner_flags.update(d.flags)
        max_inner_err = max(max_inner_err, d.err_estimate)
        return cmath.exp(z * t) * (t**am1) * (tc**bam1) * d.value

    out = integrate_unit(f, spec, endpoint_aware=True)
    # The inner errors enter the t-integral against the Euler weight, so
    # their worst case scales by the Beta mass times the envelope of e^{zt}.
    weight_mass = math.exp(
        ln_gamma(p.a) + ln_gamma(p.b - p.a) - ln_gamma(p.b) + max(z.real, 0.0)
    )
    err = out.err_estimate + max_inner_err * weight_mass
    return EvalReport(
        value=out.value,
        err_estimate=err,
        evaluations=out.evaluations,
        flags=tuple(sorted(set(out.flags) | inner_flags)),
    )
