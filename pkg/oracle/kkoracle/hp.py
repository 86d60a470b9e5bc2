"""Arbitrary-precision reference implementations.

Everything here is brute force on purpose: Taylor sums, harmonic-increment
double sums, and certified partial sums of the series definitions.  No
quadrature, no acceleration, no reuse of the float64 package.  Values are
only trusted after the caller re-runs them at higher precision and checks
agreement (see vectors._gate).

All routines run at whatever mp.mp.dps is current; callers pick precision
with mp.workdps and must parse decimal inputs inside that context.
"""

from __future__ import annotations

from typing import Callable, Tuple

import mpmath as mp


class OracleTailError(ArithmeticError):
    """A partial sum could not be driven below its certified tail target."""


def lgamma_hp(x) -> mp.mpf:
    return mp.loggamma(x)


def digamma_hp(x) -> mp.mpf:
    return mp.digamma(x)


def beta_hp(a, b) -> mp.mpf:
    return mp.beta(a, b)


def kummer_hp(a, b, z) -> mp.mpc:
    """Confluent hypergeometric M(a, b, z) by direct Taylor summation.

    Stops once terms are negligible and the index is safely past the growth
    hump |z|, where the term ratio |z|/k has dropped below 1/2 and the tail
    is bounded by the last term.
    """
    eps = mp.mpf(10) ** (-(mp.mp.dps + 5))
    term = mp.mpc(1)
    acc = mp.mpc(1)
    k = 0
    hump = 2 * abs(z) + 10
    while True:
        term = term * (a + k) / (b + k) * z / (k + 1)
        acc += term
        k += 1
        if k > hump and abs(term) < eps * abs(acc):
            return acc
        if k > 200000:
            raise OracleTailError("Kummer Taylor sum did not settle")


def dm_da_hp(a, b, z) -> mp.mpc:
    """dM/da by the double sum over term index and harmonic increments.

    d/da of the Pochhammer coefficient multiplies it by sum_{j<k} 1/(a+j),
    so the derivative is a double sum; the inner sums are accumulated
    incrementally, one anti-diagonal per outer step.
    """
    eps = mp.mpf(10) ** (-(mp.mp.dps + 5))
    coeff = mp.mpc(1)
    harm = mp.mpf(0)
    acc = mp.mpc(0)
    k = 0
    hump = 2 * abs(z) + 10
    while True:
        coeff = coeff * (a + k) / (b + k) * z / (k + 1)
        harm = harm + 1 / (a + k)
        k += 1
        t = coeff * harm
        acc += t
        if k > hump and abs(t) < eps * (abs(acc) + eps):
            return acc
        if k > 200000:
            raise OracleTailError("dM/da double sum did not settle")


def dm_db_hp(a, b, z) -> mp.mpc:
    """dM/db, same scheme as dm_da_hp with the sign flipped."""
    eps = mp.mpf(10) ** (-(mp.mp.dps + 5))
    coeff = mp.mpc(1)
    harm = mp.mpf(0)
    acc = mp.mpc(0)
    k = 0
    hump = 2 * abs(z) + 10
    while True:
        coeff = coeff * (a + k) / (b + k) * z / (k + 1)
        harm = harm + 1 / (b + k)
        k += 1
        t = -coeff * harm
        acc += t
        if k > hump and abs(t) < eps * (abs(acc) + eps):
            return acc
        if k > 200000:
            raise OracleTailError("dM/db double sum did not settle")


def gamma_weight_hp(p, n) -> mp.mpf:
    """W(n) = Gamma(b+beta n) / (Gamma(b-a+(beta-alpha)n) Gamma(a+alpha n))."""
    a, b, al, be, _ = p
    return mp.exp(
        mp.loggamma(b + be * n)
        - mp.loggamma(b - a + (be - al) * n)
        - mp.loggamma(a + al * n)
    )


def phase_hp(p, z, t) -> mp.mpc:
    """Exponent p_t = -alpha log t - (beta-alpha) log(1-t) - z zeta t."""
    _, _, al, be, ze = p
    return -al * mp.log(t) - (be - al) * mp.log(1 - t) - z * ze * t


def kk_sum_hp(
    p,
    kappa: Callable[[int], mp.mpf],
    root_limit,
    kappa0,
    z,
    rel_tail,
) -> Tuple[mp.mpc, mp.mpf]:
    """Partial sum of kappa0 M(a,b,z) + sum kappa(n) M(a+an, b+bn, z(1+zn)).

    The tail certificate uses |M| <= 1, which holds for real nonpositive
    argument with b > a > 0; the argument stays real nonpositive only when
    z is real nonpositive and zeta >= 0, so anything else is rejected.
    Returns (value, certified tail bound).
    """
    a, b, al, be, ze = p
    if mp.im(z) != 0 or mp.re(z) > 0 or ze < 0:
        raise ValueError("tail bound needs real z <= 0 and zeta >= 0")
    L = mp.mpf(root_limit)
    if not 0 < L < 1:
        raise ValueError("root limit must sit in (0, 1)")
    acc = kappa0 * kummer_hp(a, b, z)
    n = 1
    while True:
        acc += kappa(n) * kummer_hp(a + al * n, b + be * n, z * (1 + ze * n))
        tail = L ** (n + 1) / (1 - L)
        if tail < rel_tail * abs(acc):
            return acc, tail
        n += 1
        if n > 5000:
            raise OracleTailError("series tail target unreachable")


def dirichlet_sum_hp(
    p,
    kappa: Callable[[int], mp.mpf],
    root_limit,
    kappa0,
    z,
    t,
    rel_tail,
) -> Tuple[mp.mpc, mp.mpf]:
    """Partial sum of kappa0 W(0) + sum kappa(n) W(n) exp(-p_t n).

    Certified by the running ratio rho_n = L exp(-Re p_t) W(n+1)/W(n);
    once rho_n < 1 the tail is at most |term_n| rho_n / (1 - rho_n) up to
    the slow drift of the weight ratio, so the bound carries a factor 2.
    """
    L = mp.mpf(root_limit)
    if not 0 < L < 1:
        raise ValueError("root limit must sit in (0, 1)")
    pt = phase_hp(p, z, t)
    damp = mp.exp(-pt)
    damp_mag = abs(damp)
    acc = kappa0 * gamma_weight_hp(p, 0)
    w_cur = gamma_weight_hp(p, 1)
    n = 1
    while True:
        term = kappa(n) * w_cur * damp ** n
        acc += term
        w_next = gamma_weight_hp(p, n + 1)
        rho = L * damp_mag * w_next / w_cur
        if rho < 1:
            tail = 2 * abs(term) * rho / (1 - rho)
            if tail < rel_tail * abs(acc):
                return acc, tail
        w_cur = w_next
        n += 1
        if n > 5000:
            raise OracleTailError("Dirichlet tail target unreachable")
