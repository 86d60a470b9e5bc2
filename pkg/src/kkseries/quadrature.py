"""Adaptive quadrature on the unit interval and on the half line.

The unit-interval rule is tanh-sinh (double exponential): nodes cluster
toward the endpoints fast enough to absorb integrable algebraic and
logarithmic endpoint singularities, and the endpoints themselves are never
touched.  The half-line rule integrates unit panels [n, n+1] with the same
rule and stops once a geometric majorant of the untouched tail is below
tolerance, so its integrand must eventually decay at a known exponential
rate, or a caller-supplied analytic tail must take over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DomainError, IntegrandError

_HALF_PI = math.pi / 2.0
_EPS = 2.220446049250313e-16

# |u| beyond which both t(u) and 1-t(u) underflow at binary64; nodes past
# this point cannot contribute at any level.
_U_MAX = 6.56


@dataclass(frozen=True)
class QuadSpec:
    """Accuracy and budget knobs for the quadrature routines."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-15
    max_depth: int = 10
    unit_interval_cap: int = 2000
    tail_tol: float = 1e-10

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0 and self.tail_tol > 0.0):
            raise DomainError("rel_tol, abs_tol and tail_tol must be positive")
        if not 1 <= self.max_depth <= 30:
            raise DomainError("max_depth must lie in 1..30")
        if not 1 <= self.unit_interval_cap <= 100_000:
            raise DomainError("unit_interval_cap must lie in 1..100000")


@dataclass(frozen=True)
class EvalReport:
    """Value of a numerical evaluation plus error and effort bookkeeping.

    ``err_estimate`` is a conservative absolute estimate.  ``flags`` is
    empty exactly when every requested tolerance was met; a non-empty
    tuple marks a completed-but-degraded result (truncation, depth or
    panel budget exhausted).
    """

    value: complex
    err_estimate: float
    evaluations: int
    flags: tuple[str, ...] = ()

    @property
    def clean(self) -> bool:
        return not self.flags


def _node(u: float) -> tuple[float, float, float]:
    """Abscissa pair (t, 1-t) and weight of the tanh-sinh map at u.

    t = 1/(1 + exp(-pi*sinh(u))) keeps full relative precision in
    whichever of t, 1-t is small.  Returns weight 0.0 once the map has
    underflowed and the node can no longer contribute.
    """
    v = _HALF_PI * math.sinh(u)
    if abs(v) > 350.0:
        return 0.0, 0.0, 0.0
    ev = math.exp(-2.0 * v)
    t = 1.0 / (1.0 + ev)
    tc = ev / (1.0 + ev)
    ch = math.cosh(v)
    # dt/du: the pi/2 from the sinh map times the 1/2 interval shrink.
    w = 0.5 * _HALF_PI * math.cosh(u) / (ch * ch)
    return t, tc, w


def integrate_unit(
    f: Callable,
    spec: QuadSpec,
    *,
    endpoint_aware: bool = False,
) -> EvalReport:
    """Integrate f over the open interval (0, 1).

    ``f`` is called as f(t); with ``endpoint_aware`` it is called as
    f(t, 1-t) so that integrands carrying (1-t)^q weights keep relative
    precision near t=1.  Integrable endpoint singularities are fine; the
    integrand is never evaluated at 0 or 1.  A non-finite value at an
    interior node raises IntegrandError.  The returned err_estimate is
    the last inter-level difference (plus a rounding floor).
    """

    evals = 0
    abs_sum = 0.0  # sum of |w*f| for the rounding floor

    def phi(u: float):
        nonlocal evals, abs_sum
        t, tc, w = _node(u)
        if w == 0.0 or t == 0.0 or tc == 0.0:
            return None
        val = f(t, tc) if endpoint_aware else f(t)
        evals += 1
        val = complex(val)
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise IntegrandError(f"non-finite integrand value at t={t!r}")
        contrib = w * val
        abs_sum += abs(contrib)
        return contrib

    # Level 0: step h=1, nodes at all integers within reach.
    h = 1.0
    total = phi(0.0)
    if total is None:
        raise IntegrandError("tanh-sinh centre node unavailable")
    for sign in (1.0, -1.0):
        small = 0
        k = 1
        while k * h <= _U_MAX:
            c = phi(sign * k * h)
            if c is None:
                break
            total += c
            small = small + 1 if abs(c) <= _EPS * abs_sum else 0
            if small >= 2:
                break
            k += 1
    best = h * total
    err = abs(best)

    flags: tuple[str, ...] = ()
    for _ in range(1, spec.max_depth + 1):
        h *= 0.5
        # Refinement adds the odd multiples of the new step.
        for sign in (1.0, -1.0):
            small = 0
            k = 1
            while k * h <= _U_MAX:
                c = phi(sign * k * h)
                if c is None:
                    break
                total += c
                small = small + 1 if abs(c) <= _EPS * abs_sum else 0
                if small >= 2:
                    break
                k += 2
        current = h * total
        err = abs(current - best)
        best = current
        if err <= max(spec.abs_tol, spec.rel_tol * abs(best)):
            break
    else:
        flags = ("max_depth",)

    err_estimate = max(err, _EPS * h * abs_sum)
    return EvalReport(value=best, err_estimate=err_estimate, evaluations=evals, flags=flags)


def integrate_semiinf_unitwise(
    f: Callable,
    decay_rate: Optional[float],
    spec: QuadSpec,
    *,
    tail_completion: Optional[Callable] = None,
) -> EvalReport:
    """Integrate f over (0, inf) as a sum of unit panels [n, n+1].

    ``decay_rate`` r > 0 asserts |f(s)| <= C e^{-r s} eventually; the rule
    stops once |last panel| / (1 - e^{-r}) is below tolerance for two
    consecutive panels.  Alternatively ``tail_completion(n)`` may return
    (tail_value, tail_err) for the remaining integral over [n, inf) once
    the caller can certify it analytically (then decay_rate may be None).
    err_estimate combines per-panel estimates with the tail bound.
    """

    if decay_rate is None:
        if tail_completion is None:
            raise DomainError("decay_rate must be positive when no tail completion is given")
        geom = None
    else:
        if not (decay_rate > 0.0):
            raise DomainError("decay_rate must be positive")
        geom = 1.0 / (1.0 - math.exp(-decay_rate))

    acc = 0.0 + 0.0j
    err_acc = 0.0
    evals = 0
    flags: set[str] = set()
    small_streak = 0
    tail_err = 0.0

    n = 0
    while n < spec.unit_interval_cap:
        base = float(n)
        panel = integrate_unit(lambda tau: f(base + tau), spec)
        evals += panel.evaluations
        acc += panel.value
        err_acc += panel.err_estimate
        flags.update(panel.flags)
        n += 1

        if tail_completion is not None:
            done = tail_completion(n)
            if done is not None:
                tail_value, tail_err = done
                acc += complex(tail_value)
                err_acc += tail_err
                break

        if geom is not None:
            bound = abs(panel.value) * geom
            if bound <= max(spec.tail_tol * abs(acc), spec.abs_tol):
                small_streak += 1
                if small_streak >= 2:
                    tail_err = bound
                    break
            else:
                small_streak = 0
    else:
        flags.add("panel_cap")
        if geom is not None:
            tail_err = abs(acc) * spec.tail_tol  # best available guess at cap

    return EvalReport(
        value=acc,
        err_estimate=err_acc + tail_err,
        evaluations=evals,
        flags=tuple(sorted(flags)),
    )
