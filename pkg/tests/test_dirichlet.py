"""Tests for the attached Dirichlet series and its Cahen reconstruction."""

import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kkseries.dirichlet import (
    CountingAccumulator,
    _dirichlet_cahen_at,
    counting_sum,
    dirichlet_cahen,
    dirichlet_direct,
    growth_constant,
    kk_via_dirichlet,
    pt,
)
from kkseries.errors import DivergenceError, DomainError, RegionError
from kkseries.kernels import kummer_m_series
from kkseries.quadrature import QuadSpec, integrate_semiinf_unitwise
from kkseries.series import (
    CoeffFn,
    KKParams,
    delta_family,
    expdecay_family,
    geometric_family,
    kk_direct,
    polygeom_family,
)
from oracles import ref_dirichlet_sum, ref_gamma_weight

P_MAIN = KKParams(a=1.0, b=2.5, alpha=0.25, beta=0.5, zeta=1.0)
P_SLOW = KKParams(a=0.8, b=2.0, alpha=0.3, beta=0.3, zeta=0.5)
P_SCHLO = KKParams(a=1.0, b=2.0, alpha=0.0, beta=0.0, zeta=1.0)


def close(got, ref, tol):
    return abs(got - ref) <= tol * max(1.0, abs(ref))


# ---------------------------------------------------------------- phase p_t


def test_pt_substitution_value():
    p = KKParams(a=1.0, b=2.5, alpha=1.0, beta=2.0, zeta=1.0)
    out = pt(p, -1.0, 0.5)
    expect = 2.0 * math.log(2.0) + 0.5
    assert abs(out.value - expect) <= 1e-14
    assert abs(out.value.imag) == 0.0
    assert abs(out.real_part - expect) <= 1e-14


def test_pt_schlomilch_is_linear_in_t():
    for t in (0.1, 0.37, 0.9):
        out = pt(P_SCHLO, -1.0, t)
        assert abs(out.value - t) <= 1e-14
        assert abs(out.growth_margin - t) <= 1e-14


def test_pt_domain_gate():
    for t in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError):
            pt(P_MAIN, -0.25, t)


def test_pt_positive_inside_left_halfplane():
    cw = growth_constant(P_MAIN)
    for t in (0.05, 0.3, 0.5, 0.7, 0.95):
        for z in (-0.25, -0.1 + 0.4j, -1.0 - 0.2j):
            out = pt(P_MAIN, z, t)
            assert out.real_part > 0.0
            assert out.growth_margin > 0.0
            assert abs(out.growth_margin - (out.real_part - cw)) <= 1e-14


def test_growth_constant_closed_values():
    assert abs(growth_constant(P_MAIN) - 0.5 * math.log(2.0)) <= 1e-15
    assert growth_constant(P_SLOW) == 0.0
    assert growth_constant(P_SCHLO) == 0.0
    p0b = KKParams(a=1.0, b=2.0, alpha=0.0, beta=0.5, zeta=1.0)
    assert abs(growth_constant(p0b)) <= 1e-15


def test_growth_constant_is_sup_exponent():
    # e^{-C} = sup over t of t^alpha (1-t)^(beta-alpha), attained at alpha/beta
    p = P_MAIN
    cap = math.exp(-growth_constant(p))
    tstar = p.alpha / p.beta
    prof = lambda t: t**p.alpha * (1.0 - t) ** (p.beta - p.alpha)
    assert abs(prof(tstar) - cap) <= 1e-15
    for t in (0.1, 0.3, 0.6, 0.9):
        assert prof(t) <= cap + 1e-15


@settings(max_examples=60, deadline=None)
@given(
    t=st.floats(min_value=0.01, max_value=0.99),
    zr=st.floats(min_value=-2.0, max_value=2.0),
    zi=st.floats(min_value=-2.0, max_value=2.0),
)
def test_pt_affine_in_z(t, zr, zi):
    z = complex(zr, zi)
    base = pt(P_MAIN, 0.0, t).value
    assert abs(pt(P_MAIN, z, t).value - (base - z * P_MAIN.zeta * t)) <= 1e-14


# ---------------------------------------------------------- counting function


def test_counting_below_one_is_zero():
    kappa = geometric_family(0.5)
    for s in (0.0, 0.3, 0.999):
        assert counting_sum(P_MAIN, kappa, s) == 0.0


def test_counting_rejects_bad_args():
    kappa = geometric_family(0.5)
    with pytest.raises(DomainError):
        counting_sum(P_MAIN, kappa, -0.1)
    with pytest.raises(DomainError):
        counting_sum(P_MAIN, kappa, 2.0, method="simpson")


def test_counting_constant_weight():
    # alpha = beta = 0 with unit coefficients: integrand is exactly W = 1
    kappa = geometric_family(1.0)
    got = counting_sum(P_SCHLO, kappa, 2.7)
    assert abs(got - 2.0) <= 1e-12


def test_counting_matches_weighted_sum_oracle():
    kappa = geometric_family(0.5)
    ref = sum(
        0.5**n * ref_gamma_weight(P_MAIN.a, P_MAIN.b, P_MAIN.alpha, P_MAIN.beta, n)
        for n in range(1, 6)
    )
    got = counting_sum(P_MAIN, kappa, 5.5)
    assert close(got, ref, 1e-10)


def test_counting_integral_equals_sum_path():
    families = [
        geometric_family(0.7),
        expdecay_family(0.9),
        polygeom_family(0.6, 2.0),
        delta_family(),
    ]
    for p in (P_MAIN, P_SLOW, P_SCHLO):
        for kappa in families:
            for s in (0.5, 1.5, 3.2, 7.9):
                via_integral = counting_sum(p, kappa, s, method="integral")
                via_sum = counting_sum(p, kappa, s, method="sum")
                assert close(via_integral, via_sum, 1e-10), (p, s)


def test_counting_accumulator_caches():
    acc = CountingAccumulator(P_MAIN, geometric_family(0.5))
    v3 = acc.value_at(3.9)
    evals = acc.evaluations
    v1 = acc.value_at(1.5)
    assert acc.evaluations == evals
    assert v1 == counting_sum(P_MAIN, geometric_family(0.5), 1.5)
    acc.value_at(5.2)
    assert acc.evaluations > evals
    assert acc.value_at(3.2) == v3


# ------------------------------------------------------------- direct route


def test_direct_lead_term_only():
    kappa = delta_family(kappa0=1.0)
    w0 = ref_gamma_weight(P_MAIN.a, P_MAIN.b, P_MAIN.alpha, P_MAIN.beta, 0)
    for t in (0.2, 0.7):
        out = dirichlet_direct(P_MAIN, kappa, -0.3, t)
        assert close(out.value, w0, 1e-12)
        assert out.clean
    scaled = dirichlet_direct(P_MAIN, delta_family(kappa0=2.25), -0.3, 0.2)
    assert close(scaled.value, 2.25 * w0, 1e-12)


def test_direct_geometric_closed_form():
    p = KKParams(a=1.0, b=2.0, alpha=0.0, beta=0.0, zeta=1.0)
    kappa = geometric_family(0.5, kappa0=1.0)
    out = dirichlet_direct(p, kappa, -0.5, 0.4)
    expect = 1.0 / (1.0 - 0.5 * math.exp(-0.2))
    assert close(out.value, expect, 1e-12)
    assert out.evaluations < 100


def test_direct_oracle_value():
    kappa = geometric_family(0.5, kappa0=1.0)
    phase = pt(P_MAIN, -0.25, 0.4)
    ref = ref_dirichlet_sum(
        [0.5**n for n in range(200)],
        P_MAIN.a,
        P_MAIN.b,
        P_MAIN.alpha,
        P_MAIN.beta,
        phase.value,
    )
    out = dirichlet_direct(P_MAIN, kappa, -0.25, 0.4)
    assert close(out.value, ref, 1e-10)
    assert out.err_estimate <= 1e-8 * max(1.0, abs(out.value))


def test_direct_err_estimate_honest():
    kappa = geometric_family(0.5, kappa0=1.0)
    for t in (0.1, 0.4, 0.85):
        loose = dirichlet_direct(P_MAIN, kappa, -0.25, t, tol=1e-4)
        tight = dirichlet_direct(P_MAIN, kappa, -0.25, t, tol=1e-13)
        assert abs(loose.value - tight.value) <= 10.0 * loose.err_estimate + 1e-14


def test_direct_region_gate():
    kappa = geometric_family(0.5)
    with pytest.raises(RegionError):
        dirichlet_direct(P_MAIN, kappa, 0.25, 0.4)
    with pytest.raises(RegionError):
        dirichlet_direct(P_MAIN, kappa, -0.8, 0.4)  # below log(1/2)


def test_direct_argument_gates():
    kappa = geometric_family(0.5)
    for t in (0.0, 1.0):
        with pytest.raises(DomainError):
            dirichlet_direct(P_MAIN, kappa, -0.25, t)
    with pytest.raises(DomainError):
        dirichlet_direct(P_MAIN, kappa, -0.25, 0.4, tol=0.0)


# -------------------------------------------------------------- Cahen route


def test_cahen_toy_identity():
    # no Gamma-weights: sum of 0.5^n e^{-n} recovered from its step function
    prefix = lambda s: 1.0 - 0.5 ** math.floor(s)
    out = integrate_semiinf_unitwise(
        lambda s: math.exp(-s) * prefix(s), 1.0, QuadSpec()
    )
    q = 0.5 * math.exp(-1.0)
    expect = q / (1.0 - q)
    assert close(out.value, expect, 1e-10)
    assert abs(out.value - 0.225399) <= 1e-6


def test_cahen_lead_only():
    kappa = delta_family(kappa0=1.0)
    w0 = ref_gamma_weight(P_MAIN.a, P_MAIN.b, P_MAIN.alpha, P_MAIN.beta, 0)
    out = dirichlet_cahen(P_MAIN, kappa, -0.3, 0.5)
    assert close(out.value, w0, 1e-12)


def test_cahen_matches_direct():
    kappa = geometric_family(0.5, kappa0=1.0)
    for z in (-0.25, -0.1):
        for t in (0.2, 0.4, 0.6, 0.8):
            d = dirichlet_direct(P_MAIN, kappa, z, t, tol=1e-13)
            c = dirichlet_cahen(P_MAIN, kappa, z, t)
            assert close(c.value, d.value, 1e-6), (z, t)


def test_cahen_region_gate():
    kappa = geometric_family(0.5, kappa0=1.0)
    with pytest.raises(RegionError):
        dirichlet_cahen(P_MAIN, kappa, 0.25, 0.4)
    for t in (0.0, 1.0):
        with pytest.raises(DomainError):
            dirichlet_cahen(P_MAIN, kappa, -0.25, t)


def test_cahen_divergence_gate():
    # the strip gate screens nonpositive margins, so drive the internal
    # evaluator directly with z outside the strip
    kappa = geometric_family(0.5, kappa0=1.0)
    spec = QuadSpec()
    counting = CountingAccumulator(P_MAIN, kappa, spec)
    assert pt(P_MAIN, 2.0, 0.5).growth_margin < 0.0
    with pytest.raises(DivergenceError):
        _dirichlet_cahen_at(P_MAIN, kappa, 2.0, 0.5, 0.5, spec, counting)


def test_cahen_flag_propagation():
    kappa = geometric_family(0.5, kappa0=1.0)
    out = dirichlet_cahen(P_MAIN, kappa, -0.25, 0.4, QuadSpec(unit_interval_cap=2))
    assert "panel_cap" in out.flags
    assert not out.clean


def test_lead_constant_linearity():
    def scaled(eps):
        return CoeffFn(
            eval=lambda u: eps * 0.5**u,
            deriv=lambda u: eps * 0.5**u * math.log(0.5),
            root_limit=0.5,
            kappa0=1.0,
        )

    # the implementation's own n=0 term, so only the scaled part remains;
    # the inner tolerance must be far below eps since the division by eps
    # amplifies any truncation residual
    lead = dirichlet_direct(P_MAIN, delta_family(kappa0=1.0), -0.25, 0.4, tol=1e-15)
    rates = []
    for eps in (1e-2, 1e-3):
        out = dirichlet_direct(P_MAIN, scaled(eps), -0.25, 0.4, tol=1e-15)
        rates.append((out.value - lead.value) / eps)
    assert abs(rates[0] - rates[1]) <= 1e-10 * max(1.0, abs(rates[0]))


# ------------------------------------------------------- Euler reconstruction


def test_kk_via_dirichlet_single_term_recovers_kummer():
    kappa = delta_family(kappa0=1.0)
    ref = kummer_m_series(P_MAIN.a, P_MAIN.b, -0.3)
    out = kk_via_dirichlet(P_MAIN, kappa, -0.3)
    assert close(out.value, ref.value, 1e-10)


def test_kk_via_dirichlet_inner_direct_matches_kk_direct():
    kappa = geometric_family(0.5, kappa0=1.0)
    ref = kk_direct(P_MAIN, kappa, -0.25, tol=1e-13)
    out = kk_via_dirichlet(P_MAIN, kappa, -0.25, inner="direct")
    assert close(out.value, ref.value, 1e-8)
    assert out.clean


def test_kk_via_dirichlet_inner_cahen_matches_kk_direct():
    kappa = geometric_family(0.5, kappa0=1.0)
    ref = kk_direct(P_MAIN, kappa, -0.25, tol=1e-13)
    out = kk_via_dirichlet(P_MAIN, kappa, -0.25, inner="cahen")
    assert close(out.value, ref.value, 1e-5)


def test_kk_via_dirichlet_gates():
    kappa = geometric_family(0.5, kappa0=1.0)
    with pytest.raises(RegionError):
        kk_via_dirichlet(P_MAIN, kappa, 0.3)
    with pytest.raises(DomainError):
        kk_via_dirichlet(P_MAIN, kappa, -0.25, inner="midpoint")
