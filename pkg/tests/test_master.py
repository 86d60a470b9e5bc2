"""Tests for the master-integral route and its section-III reductions."""

import cmath
import math

import pytest

from kkseries.dirichlet import CountingAccumulator
from kkseries.errors import ConsistencyError, DomainError, RegionError
from kkseries.kernels import beta as beta_fn
from kkseries.kernels import kummer_m_series
from kkseries.master import (
    _bracket_master,
    _check_agreement,
    _dm_pair,
    _m_value,
    dgamma0,
    gamma_rho,
    j_closed_form,
    j_integral,
    kk_case_A,
    kk_case_B,
    kk_case_C,
    kk_case_D,
    kk_master,
    master_blocks,
)
from kkseries.quadrature import QuadSpec, integrate_unit
from kkseries.series import CoeffFn, KKParams, geometric_family, delta_family, kk_direct
from oracles import (
    ref_dm_da,
    ref_dm_db,
    ref_kk_sum,
    ref_kummer_m,
    ref_lgamma,
    richardson_derivative,
)

P_MAIN = KKParams(a=1.0, b=2.5, alpha=0.25, beta=0.5, zeta=1.0)

ZERO_KAPPA = CoeffFn(eval=lambda u: 0.0, deriv=lambda u: 0.0, root_limit=0.0, kappa0=0.0)


def close(got, ref, tol):
    return abs(got - ref) <= tol * max(1.0, abs(ref))


def p_with(p, a=None, b=None):
    return KKParams(
        a=p.a if a is None else a,
        b=p.b if b is None else b,
        alpha=p.alpha,
        beta=p.beta,
        zeta=p.zeta,
    )


# ------------------------------------------------------------- Gamma blocks


def test_gamma_rho_unit_case():
    p = KKParams(a=1.0, b=2.0, alpha=0.25, beta=0.5, zeta=1.0)
    assert abs(gamma_rho(p, 0.0, 0) - 1.0) <= 1e-14


def test_gamma_rho_is_beta_at_origin():
    assert close(gamma_rho(P_MAIN, 0.0, 0), beta_fn(P_MAIN.a, P_MAIN.b - P_MAIN.a), 1e-13)


def test_gamma_rho_oracle():
    # Gamma(b-a+(beta-alpha)s) Gamma(a+alpha s+rho) / Gamma(b+beta s+rho)
    ref = math.exp(ref_lgamma(2.0) + ref_lgamma(2.5) - ref_lgamma(4.5))
    assert close(gamma_rho(P_MAIN, 2.0, 1), ref, 1e-12)


def test_gamma_rho_positive_on_grid():
    for s in (0.0, 0.5, 3.0, 10.0):
        for rho in (0, 1):
            assert gamma_rho(P_MAIN, s, rho) > 0.0


def test_gamma_rho_gates():
    with pytest.raises(DomainError):
        gamma_rho(P_MAIN, 1.0, 2)
    with pytest.raises(DomainError):
        gamma_rho(P_MAIN, -0.5, 0)


def test_dgamma0_symmetric_zero():
    p = KKParams(a=1.0, b=2.0, alpha=0.3, beta=0.3, zeta=1.0)
    dga, _ = dgamma0(p, 0.0)
    assert dga == 0.0


def test_dgamma0_db_known_value():
    p = KKParams(a=1.0, b=2.0, alpha=0.25, beta=0.5, zeta=1.0)
    _, dgb = dgamma0(p, 0.0)
    assert close(dgb, -1.0, 1e-12)


def test_dgamma0_matches_richardson():
    s = 1.3
    dga, dgb = dgamma0(P_MAIN, s)
    fd_a = richardson_derivative(lambda a2: gamma_rho(p_with(P_MAIN, a=a2), s, 0), P_MAIN.a)
    fd_b = richardson_derivative(lambda b2: gamma_rho(p_with(P_MAIN, b=b2), s, 0), P_MAIN.b)
    assert close(dga, fd_a.real, 1e-7)
    assert close(dgb, fd_b.real, 1e-7)


# ------------------------------------------------------- stable M and dM


def test_m_value_reflected_matches_oracle():
    for w in (-5.0, complex(-12.0, 0.5)):
        got = _m_value(1.0, 2.5, complex(w))
        ref = ref_kummer_m(1.0, 2.5, complex(w))
        assert abs(got.value - ref) <= 1e-12 * abs(ref)
        assert abs(got.value - ref) <= 10.0 * got.err_estimate + 1e-15


def test_dm_pair_reflected_matches_oracle():
    for w in (-5.0, -9.0):
        da, db = _dm_pair(1.2, 2.7, complex(w))
        assert close(da.value, ref_dm_da(1.2, 2.7, complex(w)), 1e-9)
        assert close(db.value, ref_dm_db(1.2, 2.7, complex(w)), 1e-9)


# ---------------------------------------------------------------- j integral


def test_j_integral_at_origin_is_weighted_kummer():
    z = -0.4
    out = j_integral(P_MAIN, z, 0.0, 0)
    ref = beta_fn(P_MAIN.a, P_MAIN.b - P_MAIN.a) * kummer_m_series(P_MAIN.a, P_MAIN.b, z).value
    assert close(out.value, ref, 1e-10)


def test_j_integral_at_zero_argument_is_gamma():
    for s in (0.5, 2.0):
        for rho in (0, 1):
            out = j_integral(P_MAIN, 0.0, s, rho)
            assert close(out.value, gamma_rho(P_MAIN, s, rho), 1e-11)


def test_j_integral_matches_closed_form():
    out = j_integral(P_MAIN, -0.25, 1.7, 1)
    closed, _ = j_closed_form(P_MAIN, -0.25, 1.7, 1)
    assert close(out.value, closed, 1e-9)


def test_j_integral_gates():
    with pytest.raises(DomainError):
        j_integral(P_MAIN, -0.25, 1.0, 3)
    with pytest.raises(DomainError):
        j_integral(P_MAIN, -0.25, -1.0, 0)


def test_consistency_check_raises_on_gap():
    with pytest.raises(ConsistencyError):
        _check_agreement(1.0, 1e-12, 1.001, 1e-12, "unit test")
    _check_agreement(1.0, 1e-4, 1.0001, 1e-12, "unit test")


# ------------------------------------------------------------- master blocks


def test_master_blocks_trivial_point():
    blk = master_blocks(P_MAIN, 0.0, 0.0)
    assert blk.mstar == 1.0
    assert blk.mshift == 1.0
    assert blk.dmstar_da == 0.0
    assert blk.dmstar_db == 0.0


def test_master_blocks_mstar_at_origin():
    blk = master_blocks(P_MAIN, -0.25, 0.0)
    assert blk.mstar == kummer_m_series(P_MAIN.a, P_MAIN.b, -0.25).value


def test_master_blocks_positive_gammas():
    for s in (0.0, 0.7, 2.4, 9.0):
        blk = master_blocks(P_MAIN, -0.25, s)
        assert blk.gamma0 > 0.0
        assert blk.gamma1 > 0.0


def test_master_blocks_dmstar_da_richardson():
    s = 0.8
    blk = master_blocks(P_MAIN, -0.25, s)
    a2 = P_MAIN.a + P_MAIN.alpha * s
    b2 = P_MAIN.b + P_MAIN.beta * s
    w = -0.25 * (1.0 + P_MAIN.zeta * s)
    fd = richardson_derivative(lambda x: kummer_m_series(x, b2, w).value, a2)
    assert close(blk.dmstar_da, fd, 1e-6)


def test_bracket_decomposition_matches_product_rule():
    s = 0.8
    z = -0.25
    blk = master_blocks(P_MAIN, z, s)

    def product(a2, b2):
        p2 = p_with(P_MAIN, a=a2, b=b2)
        w = z * (1.0 + P_MAIN.zeta * s)
        return gamma_rho(p2, s, 0) * kummer_m_series(
            a2 + P_MAIN.alpha * s, b2 + P_MAIN.beta * s, w
        ).value

    fd = P_MAIN.alpha * richardson_derivative(
        lambda a2: product(a2, P_MAIN.b), P_MAIN.a
    ) + P_MAIN.beta * richardson_derivative(lambda b2: product(P_MAIN.a, b2), P_MAIN.b)
    combo = blk.mstar * (
        P_MAIN.alpha * blk.dgamma0_da + P_MAIN.beta * blk.dgamma0_db
    ) + blk.gamma0 * (P_MAIN.alpha * blk.dmstar_da + P_MAIN.beta * blk.dmstar_db)
    assert close(combo, fd, 1e-6)


# ------------------------------------------------------------- sign audit


def test_sign_audit_bracket_is_phase_weighted_integral():
    # bracket(s) must equal -Integral of euler-weight * p_t e^{-p_t s} dt,
    # which pins both the sign and the phase chain
    z = -0.25
    bracket = _bracket_master(P_MAIN, z)
    a, b, al, be, ze = P_MAIN.a, P_MAIN.b, P_MAIN.alpha, P_MAIN.beta, P_MAIN.zeta

    def inner(s0):
        def f(t, tc):
            pv = -al * math.log(t) - (be - al) * math.log(tc) - z * ze * t
            weight = cmath.exp(z * t) * t ** (a - 1.0) * tc ** (b - a - 1.0)
            return weight * pv * cmath.exp(-pv * s0)

        return integrate_unit(f, QuadSpec(), endpoint_aware=True)

    for s0 in (1.5, 2.5):
        got = bracket(s0)
        ref = -inner(s0).value
        assert close(got, ref, 1e-8), s0


def test_sign_audit_iterated_panel():
    # one unit s-panel of the master integrand versus the fully iterated
    # double quadrature at a desk-scale point
    z = -0.25
    kappa = geometric_family(0.5)
    spec = QuadSpec()
    counting = CountingAccumulator(P_MAIN, kappa, spec)
    bracket = _bracket_master(P_MAIN, z)
    a, b, al, be, ze = P_MAIN.a, P_MAIN.b, P_MAIN.alpha, P_MAIN.beta, P_MAIN.zeta

    via_blocks = integrate_unit(lambda u: counting.value_at(1.0 + u) * bracket(1.0 + u), spec)

    def iterated(u):
        s0 = 1.0 + u

        def f(t, tc):
            pv = -al * math.log(t) - (be - al) * math.log(tc) - z * ze * t
            weight = cmath.exp(z * t) * t ** (a - 1.0) * tc ** (b - a - 1.0)
            return weight * pv * cmath.exp(-pv * s0)

        return -counting.value_at(s0) * integrate_unit(f, spec, endpoint_aware=True).value

    via_iterated = integrate_unit(iterated, spec)
    assert close(via_blocks.value, via_iterated.value, 1e-8)


# ------------------------------------------------------------------- routes


def test_kk_master_zero_coefficients():
    out = kk_master(P_MAIN, ZERO_KAPPA, -0.25)
    assert out.value == 0.0


def test_kk_master_lead_term_only():
    kappa = delta_family(kappa0=1.0)
    ref = kummer_m_series(P_MAIN.a, P_MAIN.b, -0.25).value
    out = kk_master(P_MAIN, kappa, -0.25)
    assert close(out.value, ref, 1e-9)


def test_kk_master_matches_kk_direct():
    kappa = geometric_family(0.5)
    ref = kk_direct(P_MAIN, kappa, -0.25, tol=1e-13)
    out = kk_master(P_MAIN, kappa, -0.25)
    assert close(out.value, ref.value, 1e-4)
    assert out.clean


def test_kk_master_gates():
    kappa = geometric_family(0.5)
    p0 = KKParams(a=1.0, b=2.5, alpha=0.0, beta=0.5, zeta=1.0)
    with pytest.raises(DomainError):
        kk_master(p0, kappa, -0.25)
    with pytest.raises(RegionError):
        kk_master(P_MAIN, kappa, 0.3)


def test_case_a_matches_kk_direct():
    p = KKParams(a=1.0, b=2.5, alpha=0.0, beta=0.5, zeta=1.0)
    kappa = geometric_family(0.5)
    ref = kk_direct(p, kappa, -0.25, tol=1e-13)
    out = kk_case_A(p, kappa, -0.25)
    assert close(out.value, ref.value, 1e-4)


def test_case_b_matches_kk_direct_at_zero_zeta():
    p = KKParams(a=1.0, b=2.5, alpha=0.25, beta=0.5, zeta=0.0)
    kappa = geometric_family(0.5)
    ref = kk_direct(p, kappa, -0.3, tol=1e-13)
    out = kk_case_B(p, kappa, -0.3)
    assert close(out.value, ref.value, 1e-4)


def test_case_c_example_against_series_oracle():
    p = KKParams(a=1.0, b=2.5, alpha=0.0, beta=0.5, zeta=0.0)
    kappa = geometric_family(1.0 / 3.0)
    coeffs = [0.0] + [(1.0 / 3.0) ** n for n in range(1, 120)]
    ref = ref_kk_sum(coeffs, p.a, p.b, p.alpha, p.beta, p.zeta, -0.2)
    out = kk_case_C(p, kappa, -0.2)
    assert close(out.value, ref, 1e-4)


def test_case_c_equals_case_b_at_alpha_zero():
    p = KKParams(a=1.0, b=2.5, alpha=0.0, beta=0.5, zeta=0.0)
    kappa = geometric_family(0.4)
    via_b = kk_case_B(p, kappa, -0.3)
    via_c = kk_case_C(p, kappa, -0.3)
    assert close(via_c.value, via_b.value, 1e-10)


def test_case_d_zero_coefficients():
    p = KKParams(a=1.0, b=2.0, alpha=0.0, beta=0.0, zeta=1.0)
    out = kk_case_D(p, ZERO_KAPPA, -0.3)
    assert out.value == 0.0


def test_case_d_example_against_series_oracle():
    p = KKParams(a=1.0, b=2.0, alpha=0.0, beta=0.0, zeta=1.0)
    kappa = geometric_family(0.5)
    coeffs = [0.0] + [0.5**n for n in range(1, 200)]
    ref = ref_kk_sum(coeffs, p.a, p.b, p.alpha, p.beta, p.zeta, -0.3)
    out = kk_case_D(p, kappa, -0.3)
    assert close(out.value, ref, 1e-5)


def test_case_gates():
    kappa = geometric_family(0.5)
    with pytest.raises(DomainError):
        kk_case_A(P_MAIN, kappa, -0.25)  # alpha nonzero
    with pytest.raises(DomainError):
        kk_case_B(P_MAIN, kappa, -0.25)  # zeta nonzero
    with pytest.raises(DomainError):
        kk_case_D(KKParams(1.0, 2.0, 0.0, 0.5, 1.0), kappa, -0.25)  # beta nonzero
    p_a = KKParams(a=1.0, b=2.5, alpha=0.0, beta=0.5, zeta=1.0)
    with pytest.raises(DomainError):
        kk_case_A(p_a, geometric_family(0.5, kappa0=1.0), -0.25)  # kappa0 nonzero
    with pytest.raises(RegionError):
        kk_case_A(p_a, kappa, 0.4)
