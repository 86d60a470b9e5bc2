"""Master-integral route for Kapteyn-Kummer series.

The series value is a lead term minus a semi-infinite integral of the
counting function A(s) against bracket(s), where bracket(s) is the
s-derivative of Phi(s) = Gamma0(s) M*(s) split into its chain-rule
blocks: the z-slot derivative contributes zeta*z*Gamma1*M_shift, and the
parameter slots contribute M*(beta dGamma0/db + alpha dGamma0/da) +
Gamma0(beta dM*/db + alpha dM*/da).  Since A jumps by kappa(n) W(n) at
each integer and W Gamma0 = 1, Abel summation of -int A Phi' recovers
the direct series termwise, which is what the route-equality tests check
from the other side.

The minus sign in front of the integral comes from the phase convention:
the t-integral kernel decays as e^{-p_t s} with p_t = -(z zeta t +
alpha log t + (beta-alpha) log(1-t)), so d/ds pulls out -p_t and the
integration by parts in s flips it onto the bracket.

Large negative arguments are routed through the reflection
M(a,b,w) = e^w M(b-a,b,-w), which turns the alternating series into a
positive-term one; the parameter derivatives transform alongside as
dM/da -> -e^w dM/da' and dM/db -> e^w (dM/da' + dM/db').
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .dirichlet import CountingAccumulator, growth_constant, pt
from .errors import ConsistencyError, DomainError, RegionError
from .kernels import digamma, dm_da, dm_db, kummer_m_series, ln_gamma
from .quadrature import EvalReport, QuadSpec, integrate_semiinf_unitwise, integrate_unit
from .series import CoeffFn, KKParams, convergence_region

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class MasterBlocks:
    """Building blocks of bracket(s) at one (p, z, s)."""

    gamma0: float
    gamma1: float
    dgamma0_da: float
    dgamma0_db: float
    mstar: complex
    mshift: complex
    dmstar_da: complex
    dmstar_db: complex


def gamma_rho(p: KKParams, s: float, rho: int) -> float:
    """Gamma(b-a+(beta-alpha)s) Gamma(a+alpha s+rho) / Gamma(b+beta s+rho)."""
    if rho not in (0, 1):
        raise DomainError(f"rho must be 0 or 1, got {rho!r}")
    if not (s >= 0.0 and math.isfinite(s)):
        raise DomainError(f"gamma_rho requires finite s >= 0, got {s!r}")
    return math.exp(
        ln_gamma(p.b - p.a + (p.beta - p.alpha) * s)
        + ln_gamma(p.a + p.alpha * s + rho)
        - ln_gamma(p.b + p.beta * s + rho)
    )


def dgamma0(p: KKParams, s: float) -> tuple[float, float]:
    """Parameter derivatives of Gamma0(s) in closed digamma form."""
    g0 = gamma_rho(p, s, 0)
    psi_a = digamma(p.a + p.alpha * s)
    psi_gap = digamma(p.b - p.a + (p.beta - p.alpha) * s)
    psi_b = digamma(p.b + p.beta * s)
    return g0 * (psi_a - psi_gap), g0 * (psi_gap - psi_b)


def _m_value(a2: float, b2: float, w: complex, tol: float = 1e-14) -> EvalReport:
    # reflect to a positive-term series when the real part is very negative
    if w.real >= -1.0:
        return kummer_m_series(a2, b2, w, tol=tol)
    r = kummer_m_series(b2 - a2, b2, -w, tol=tol)
    scale = cmath.exp(w)
    return EvalReport(
        value=scale * r.value,
        err_estimate=abs(scale) * r.err_estimate,
        evaluations=r.evaluations,
        flags=r.flags,
    )


def _dm_pair(a2: float, b2: float, w: complex) -> tuple[EvalReport, EvalReport]:
    """(dM/da, dM/db) at (a2, b2, w), reflected for stability when needed."""
    if w.real >= -1.0:
        return dm_da(a2, b2, w), dm_db(a2, b2, w)
    da_r = dm_da(b2 - a2, b2, -w)
    db_r = dm_db(b2 - a2, b2, -w)
    scale = cmath.exp(w)
    mag = abs(scale)
    flags = tuple(sorted(set(da_r.flags) | set(db_r.flags)))
    da_out = EvalReport(
        value=-scale * da_r.value,
        err_estimate=mag * da_r.err_estimate,
        evaluations=da_r.evaluations,
        flags=da_r.flags,
    )
    db_out = EvalReport(
        value=scale * (da_r.value + db_r.value),
        err_estimate=mag * (da_r.err_estimate + db_r.err_estimate),
        evaluations=da_r.evaluations + db_r.evaluations,
        flags=flags,
    )
    return da_out, db_out


def master_blocks(p: KKParams, z: complex, s: float) -> MasterBlocks:
    """All eight bracket blocks at one s."""
    if not (s >= 0.0 and math.isfinite(s)):
        raise DomainError(f"master_blocks requires finite s >= 0, got {s!r}")
    z = complex(z)
    a2 = p.a + p.alpha * s
    b2 = p.b + p.beta * s
    w = z * (1.0 + p.zeta * s)
    dga, dgb = dgamma0(p, s)
    da_r, db_r = _dm_pair(a2, b2, w)
    return MasterBlocks(
        gamma0=gamma_rho(p, s, 0),
        gamma1=gamma_rho(p, s, 1),
        dgamma0_da=dga,
        dgamma0_db=dgb,
        mstar=_m_value(a2, b2, w).value,
        mshift=_m_value(a2 + 1.0, b2 + 1.0, w).value,
        dmstar_da=da_r.value,
        dmstar_db=db_r.value,
    )


def j_closed_form(p: KKParams, z: complex, s: float, rho: int) -> tuple[complex, float]:
    """Closed form Gamma_rho(s) M(a+alpha s+rho, b+beta s+rho, z(1+zeta s))."""
    g = gamma_rho(p, s, rho)
    m = _m_value(p.a + p.alpha * s + rho, p.b + p.beta * s + rho, complex(z) * (1.0 + p.zeta * s))
    return g * m.value, g * m.err_estimate + _EPS * abs(g * m.value)


def _check_agreement(
    got: complex, got_err: float, ref: complex, ref_err: float, what: str
) -> None:
    gap = abs(got - ref)
    budget = 10.0 * (got_err + ref_err) + 1e-13 * max(1.0, abs(ref))
    if gap > budget:
        raise ConsistencyError(
            f"internal-consistency error in {what}: routes differ by {gap:.3e}, "
            f"combined estimate allows {budget:.3e}"
        )


def j_integral(
    p: KKParams, z: complex, s: float, rho: int, quad: Optional[QuadSpec] = None
) -> EvalReport:
    """Auxiliary Euler integral at shifted parameters, cross-checked.

    Integrates e^{z(1+zeta s)t} t^{a+alpha s-1+rho} (1-t)^{b-a+(beta-alpha)s-1}
    over (0,1) and checks the result against the closed Kummer form; the
    two must agree within ten times the combined error estimates.
    """
    if rho not in (0, 1):
        raise DomainError(f"rho must be 0 or 1, got {rho!r}")
    if not (s >= 0.0 and math.isfinite(s)):
        raise DomainError(f"j_integral requires finite s >= 0, got {s!r}")
    z = complex(z)
    spec = quad if quad is not None else QuadSpec()
    zfac = z * (1.0 + p.zeta * s)
    ea = p.a + p.alpha * s - 1.0 + rho
    eb = p.b - p.a + (p.beta - p.alpha) * s - 1.0

    def f(t: float, tc: float) -> complex:
        return cmath.exp(zfac * t) * (t**ea) * (tc**eb)

    out = integrate_unit(f, spec, endpoint_aware=True)
    closed, closed_err = j_closed_form(p, z, s, rho)
    _check_agreement(out.value, out.err_estimate, closed, closed_err, "j_integral")
    return out


def _bracket_master(p: KKParams, z: complex) -> Callable[[float], complex]:
    zz = p.zeta * z

    def bracket(s: float) -> complex:
        blk = master_blocks(p, z, s)
        return (
            zz * blk.gamma1 * blk.mshift
            + blk.mstar * (p.beta * blk.dgamma0_db + p.alpha * blk.dgamma0_da)
            + blk.gamma0 * (p.beta * blk.dmstar_db + p.alpha * blk.dmstar_da)
        )

    return bracket


def _min_growth_margin(p: KKParams, z: complex, ngrid: int = 64) -> float:
    return min(pt(p, z, j / ngrid).growth_margin for j in range(1, ngrid))


def _abel_remainder(
    counting: CountingAccumulator,
    kappa: CoeffFn,
    phi_at: Callable[[float], tuple[complex, float]],
    term_at: Callable[[int, float], tuple[complex, float]],
    n: int,
) -> tuple[complex, float]:
    """Exact remaining integral of A(s) phi'(s) over [n, inf).

    A is constant between integers and jumps where the series has terms,
    so the remaining integral telescopes to -A(n) phi(n) minus the sum of
    jump * phi values; each summand is one remaining series term.
    """
    a_n = counting.value_at(float(n))
    phi_v, phi_e = phi_at(float(n))
    acc = -a_n * phi_v
    err = abs(a_n) * phi_e + counting.err_estimate * abs(phi_v)
    scale = abs(acc)
    logmags: list[Optional[float]] = []
    m = n + 1
    cap = n + 4000
    while True:
        c = kappa.eval(float(m))
        if c != 0.0:
            tv, te = term_at(m, c)
            acc -= tv
            err += te
            scale = max(scale, abs(tv))
            logmags.append(math.log(abs(tv)) if abs(tv) > 0.0 else None)
        else:
            logmags.append(None)
        if len(logmags) >= 4:
            recent = logmags[-4:]
            if all(lm is None for lm in recent):
                if kappa.root_limit == 0.0:
                    break
            elif all(lm is not None for lm in recent):
                rho_log = max(hi - lo for lo, hi in zip(recent, recent[1:]))
                if kappa.root_limit > 0.0:
                    rho_log = max(rho_log, math.log(kappa.root_limit))
                if rho_log < 0.0:
                    tail = math.exp(min(recent[-1] + rho_log, 700.0)) / -math.expm1(rho_log)
                    if tail <= 1e-15 * max(scale, abs(acc)):
                        err += tail
                        break
        if m >= cap:
            last = logmags[-1] if logmags else None
            err += 100.0 * math.exp(last) if last is not None else max(scale, 1.0)
            break
        m += 1
    return acc, err


def _kk_engine(
    p: KKParams,
    kappa: CoeffFn,
    spec: QuadSpec,
    bracket_at: Callable[[float], complex],
    lead: complex,
    lead_err: float,
    counting: CountingAccumulator,
    decay_rate: Optional[float],
    phi_at: Optional[Callable[[float], tuple[complex, float]]] = None,
    term_at: Optional[Callable[[int, float], tuple[complex, float]]] = None,
    min_panels: int = 12,
) -> EvalReport:
    max_bracket = 0.0

    def f(s: float) -> complex:
        nonlocal max_bracket
        br = bracket_at(s)
        mag = abs(br)
        if mag > max_bracket:
            max_bracket = mag
        return counting.value_at(s) * br

    completion = None
    if decay_rate is None:

        def completion(panels_done: int):
            if panels_done < min_panels:
                return None
            return _abel_remainder(counting, kappa, phi_at, term_at, panels_done)

    out = integrate_semiinf_unitwise(f, decay_rate, spec, tail_completion=completion)
    value = lead - out.value
    err = (
        lead_err
        + out.err_estimate
        + counting.err_estimate * (1.0 + max_bracket) * 20.0
        + _EPS * (abs(lead) + abs(out.value))
    )
    flags = set(out.flags) | counting.flags
    return EvalReport(
        value=value, err_estimate=err, evaluations=out.evaluations, flags=tuple(sorted(flags))
    )


def kk_master(
    p: KKParams, kappa: CoeffFn, z: complex, quad: Optional[QuadSpec] = None
) -> EvalReport:
    """Series value by the master semi-infinite integral.

    Requires beta >= alpha > 0 and z inside the Cahen strip; the alpha=0
    reductions have their own formulas (kk_case_A etc.) and are refused
    here rather than taken as a silent limit.  The s-decay rate is the
    halved minimum growth margin over the unit t-grid, which the phase
    analysis guarantees is positive inside the strip.
    """
    if not p.alpha > 0.0:
        raise DomainError("kk_master requires alpha > 0; use kk_case_A for the alpha = 0 form")
    z = complex(z)
    if not convergence_region(kappa, p.zeta, "R").contains(z):
        raise RegionError(f"z={z!r} lies outside the Cahen strip (zeta*Re(z) in (log L, 0))")
    spec = quad if quad is not None else QuadSpec()
    lead_r = _m_value(p.a, p.b, z)
    lead = kappa.kappa0 * lead_r.value
    lead_err = abs(kappa.kappa0) * lead_r.err_estimate
    counting = CountingAccumulator(p, kappa, spec)
    decay = 0.5 * _min_growth_margin(p, z)
    return _kk_engine(
        p, kappa, spec, _bracket_master(p, z), lead, lead_err, counting, decay
    )


def _require_case(cond: bool, what: str) -> None:
    if not cond:
        raise DomainError(what)


def _weighted_phi(p: KKParams, mstar_at: Callable[[float], EvalReport]):
    def phi_at(s: float) -> tuple[complex, float]:
        g = gamma_rho(p, s, 0)
        m = mstar_at(s)
        return g * m.value, g * m.err_estimate + _EPS * abs(g * m.value)

    return phi_at


def _series_term(mstar_at: Callable[[float], EvalReport]):
    def term_at(m: int, c: float) -> tuple[complex, float]:
        r = mstar_at(float(m))
        return c * r.value, abs(c) * r.err_estimate

    return term_at


def kk_case_A(
    p: KKParams, kappa: CoeffFn, z: complex, quad: Optional[QuadSpec] = None
) -> EvalReport:
    """Specialized route for alpha = 0 (beta free, zeta free).

    The bracket loses its alpha-terms; the counting weight keeps the
    Gamma ratio.  The integrand decays only algebraically here, so the
    far tail is completed by the exact jump identity after a fixed head
    of quadrature panels.
    """
    _require_case(p.alpha == 0.0, "kk_case_A requires alpha = 0")
    _require_case(kappa.kappa0 == 0.0, "section-III cases assume a vanishing kappa0")
    z = complex(z)
    if p.zeta != 0.0 and not convergence_region(kappa, p.zeta, "R").contains(z):
        raise RegionError(f"z={z!r} lies outside the Cahen strip (zeta*Re(z) in (log L, 0))")
    spec = quad if quad is not None else QuadSpec()
    zz = p.zeta * z

    def mstar_at(s: float) -> EvalReport:
        return _m_value(p.a, p.b + p.beta * s, z * (1.0 + p.zeta * s))

    def bracket(s: float) -> complex:
        b2 = p.b + p.beta * s
        w = z * (1.0 + p.zeta * s)
        _, dgb = dgamma0(p, s)
        _, db_r = _dm_pair(p.a, b2, w)
        out = p.beta * (mstar_at(s).value * dgb + gamma_rho(p, s, 0) * db_r.value)
        if zz != 0.0:
            out += zz * gamma_rho(p, s, 1) * _m_value(p.a + 1.0, b2 + 1.0, w).value
        return out

    counting = CountingAccumulator(p, kappa, spec)
    return _kk_engine(
        p,
        kappa,
        spec,
        bracket,
        0.0,
        0.0,
        counting,
        None,
        phi_at=_weighted_phi(p, mstar_at),
        term_at=_series_term(mstar_at),
    )


def kk_case_B(
    p: KKParams, kappa: CoeffFn, z: complex, quad: Optional[QuadSpec] = None
) -> EvalReport:
    """Specialized route for zeta = 0 (Neumann-type parameter shifts only).

    The zeta z Gamma1 term drops and every M value sits at the fixed
    argument z.  No strip gate applies (zeta = 0 empties it); validated
    empirically for Re(z) < 0.
    """
    _require_case(p.zeta == 0.0, "kk_case_B requires zeta = 0")
    _require_case(kappa.kappa0 == 0.0, "section-III cases assume a vanishing kappa0")
    z = complex(z)
    spec = quad if quad is not None else QuadSpec()

    def mstar_at(s: float) -> EvalReport:
        return _m_value(p.a + p.alpha * s, p.b + p.beta * s, z)

    def bracket(s: float) -> complex:
        a2 = p.a + p.alpha * s
        b2 = p.b + p.beta * s
        dga, dgb = dgamma0(p, s)
        da_r, db_r = _dm_pair(a2, b2, z)
        m = mstar_at(s).value
        g0 = gamma_rho(p, s, 0)
        return m * (p.beta * dgb + p.alpha * dga) + g0 * (
            p.beta * db_r.value + p.alpha * da_r.value
        )

    counting = CountingAccumulator(p, kappa, spec)
    return _kk_engine(
        p,
        kappa,
        spec,
        bracket,
        0.0,
        0.0,
        counting,
        None,
        phi_at=_weighted_phi(p, mstar_at),
        term_at=_series_term(mstar_at),
    )


def kk_case_C(
    p: KKParams, kappa: CoeffFn, z: complex, quad: Optional[QuadSpec] = None
) -> EvalReport:
    """Specialized route for alpha = zeta = 0 (shifts in b only)."""
    _require_case(p.alpha == 0.0 and p.zeta == 0.0, "kk_case_C requires alpha = zeta = 0")
    _require_case(kappa.kappa0 == 0.0, "section-III cases assume a vanishing kappa0")
    z = complex(z)
    spec = quad if quad is not None else QuadSpec()

    def mstar_at(s: float) -> EvalReport:
        return _m_value(p.a, p.b + p.beta * s, z)

    def bracket(s: float) -> complex:
        _, dgb = dgamma0(p, s)
        _, db_r = _dm_pair(p.a, p.b + p.beta * s, z)
        return p.beta * (mstar_at(s).value * dgb + gamma_rho(p, s, 0) * db_r.value)

    counting = CountingAccumulator(p, kappa, spec)
    return _kk_engine(
        p,
        kappa,
        spec,
        bracket,
        0.0,
        0.0,
        counting,
        None,
        phi_at=_weighted_phi(p, mstar_at),
        term_at=_series_term(mstar_at),
    )


def kk_case_D(
    p: KKParams, kappa: CoeffFn, z: complex, quad: Optional[QuadSpec] = None
) -> EvalReport:
    """Specialized route for alpha = beta = 0 (argument dilation only).

    The Gamma ratio is constant and cancels, leaving the plain
    coefficient counting function against (a/b) zeta z M(a+1, b+1,
    z(1+zeta s)); the overall minus of the engine gives the displayed
    -(a zeta z / b) prefactor.
    """
    _require_case(p.alpha == 0.0 and p.beta == 0.0, "kk_case_D requires alpha = beta = 0")
    _require_case(kappa.kappa0 == 0.0, "section-III cases assume a vanishing kappa0")
    z = complex(z)
    if p.zeta != 0.0 and not convergence_region(kappa, p.zeta, "R").contains(z):
        raise RegionError(f"z={z!r} lies outside the Cahen strip (zeta*Re(z) in (log L, 0))")
    spec = quad if quad is not None else QuadSpec()
    zz = p.zeta * z
    ab = p.a / p.b

    def phi_at(s: float) -> tuple[complex, float]:
        r = _m_value(p.a, p.b, z * (1.0 + p.zeta * s))
        return r.value, r.err_estimate

    def term_at(m: int, c: float) -> tuple[complex, float]:
        r = _m_value(p.a, p.b, z * (1.0 + p.zeta * m))
        return c * r.value, abs(c) * r.err_estimate

    def bracket(s: float) -> complex:
        return ab * zz * _m_value(p.a + 1.0, p.b + 1.0, z * (1.0 + p.zeta * s)).value

    counting = CountingAccumulator(p, kappa, spec, weighted=False)
    return _kk_engine(
        p,
        kappa,
        spec,
        bracket,
        0.0,
        0.0,
        counting,
        None,
        phi_at=phi_at,
        term_at=term_at,
    )
