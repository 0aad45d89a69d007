import math

import numpy as np
import pytest

from qtm import (DomainError, ModelParams, SingularDenominatorError, UndefinedContrastError,
                 UnsupportedStatisticsError)
from qtm import analytic_local as al
from qtm.analytic_local import CurrentDirection


def nb(x):
    return 1.0 / math.expm1(x)


def coth(x):
    return 1.0 / math.tanh(x)


def test_single_current_vanishes_at_equal_temperatures():
    for el in (1, -1):
        p = ModelParams(t_left=0.7, t_right=0.7, eps_left=el, eps_right=el)
        assert al.current_single(p) == 0.0


def test_single_current_cold_right_bath():
    p = ModelParams(gamma_left=0.01, gamma_right=0.02, t_left=1.0, t_right=0.0)
    n = nb(1.0)
    expected = 2 * 0.01 * 0.02 * n / (0.01 * (1 + 2 * n) + 0.02)
    assert al.current_single(p) == pytest.approx(expected, rel=1e-14)


def test_hybrid_current_at_equal_temperature_is_zero():
    # the (eps_R - eps_L) n_L n_R term exactly cancels n_L - n_R
    p = ModelParams(t_left=0.8, t_right=0.8, eps_left=1, eps_right=-1)
    j = al.current_single(p)
    scale = 2 * p.omega * p.gamma_left * p.gamma_right * p.n_left / (p.gamma_left + p.gamma_right)
    assert abs(j) < 1e-14 * scale


def test_swap_reverses_current_for_equal_bath_statistics(fig2):
    jf = al.current_two(fig2, CurrentDirection.FORWARD)
    js = al.current_two(fig2.swapped(), CurrentDirection.FORWARD)
    assert al.current_two(fig2, CurrentDirection.SWAPPED) == js
    assert jf > 0 > js


def test_singular_denominator_is_flagged():
    # bosonic subsystems fed by fermionic baths: 1 - 2 n_F hits zero at T -> infinity
    p = ModelParams(eps_left=-1, eps_right=-1, eps_sub=1, t_left=1e12, t_right=1e12)
    with pytest.raises(SingularDenominatorError):
        al.current_single(p)


def test_alpha_equal_statistics():
    p = ModelParams(eps_left=-1, eps_right=-1, eps_sub=-1, t_left=3.0, t_right=0.2)
    x = p.gamma_left * p.gamma_right / (4 * p.g ** 2)
    assert al.scaling_alpha(p) == pytest.approx(1 / (1 + x), rel=1e-15)


def test_alpha_strong_coupling_limit():
    assert al.scaling_alpha(ModelParams(g=1e4)) == pytest.approx(1.0, abs=1e-10)


def test_alpha_bosonic_qubits_example():
    p = ModelParams(g=0.01, gamma_left=0.02, gamma_right=0.02, t_left=1.0, t_right=0.5)
    assert al.scaling_alpha(p) == pytest.approx(1 / (1 + coth(0.5) * coth(1.0)), rel=1e-14)


def test_alpha_zero_coupling():
    p = ModelParams(g=0.0)
    with pytest.raises(DomainError):
        al.scaling_alpha(p)
    assert al.scaling_alpha(p, allow_limit=True) == 0.0


def test_two_site_current_is_alpha_times_single(fig2):
    assert al.current_two(fig2) == al.scaling_alpha(fig2) * al.current_single(fig2)
    assert al.current_two(fig2.replace(g=1e-9)) < 1e-12


def test_chain_current():
    p = ModelParams(g=0.03, t_left=2.0, t_right=0.1)
    assert al.current_chain(p, 2) == pytest.approx(al.current_two(p), rel=1e-14)
    assert al.current_chain(p, 5) == al.current_chain(p, 2)
    assert al.current_chain(p, 1) == al.current_single(p)
    with pytest.raises(UnsupportedStatisticsError):
        al.current_chain(p.replace(eps_left=-1), 3)
    with pytest.raises(DomainError):
        al.current_chain(p, 0)


def test_contrast_zero_for_symmetric_coupling():
    p = ModelParams(gamma_left=0.02, gamma_right=0.02, t_left=3.0, t_right=0.1)
    assert al.contrast(p, "two").contrast == pytest.approx(0.0, abs=1e-14)


def test_contrast_large_bias_limit():
    p = ModelParams(gamma_left=0.01, gamma_right=0.02, t_left=1e6, t_right=0.0)
    assert al.contrast(p, "single").contrast == pytest.approx(1 / 3, rel=1e-5)


def test_contrast_hybrid_differs_from_single():
    p = ModelParams(eps_left=1, eps_right=-1, eps_sub=-1, g=0.01, t_left=1.0, t_right=0.3)
    res = al.contrast(p, "two")
    assert res.a_coeff != res.b_coeff
    assert abs(res.contrast - al.contrast(p, "single").contrast) > 1e-3


def test_contrast_coefficients_reassemble_two_site_contrast():
    p = ModelParams(eps_left=1, eps_right=-1, g=0.005, t_left=1.3, t_right=0.2)
    assert al.contrast_two_from_single(p) == pytest.approx(al.contrast(p, "two").contrast,
                                                           rel=1e-12)


def test_contrast_undefined_at_equal_temperatures():
    with pytest.raises(UndefinedContrastError):
        al.contrast(ModelParams(t_left=0.5, t_right=0.5))


def test_contrast_bosonic_qubits_closed_form():
    p = ModelParams(gamma_left=0.01, gamma_right=0.02, t_left=1.0, t_right=0.5)
    expected = (1 / 3) * abs(coth(0.5) - coth(1.0)) / (coth(0.5) + coth(1.0))
    assert al.contrast_bosonic_qubits(p) == pytest.approx(expected, rel=1e-14)
    assert al.contrast(p, "single").contrast == pytest.approx(expected, rel=1e-12)
    assert al.contrast(p, "two").contrast == pytest.approx(expected, rel=1e-12)
    assert al.contrast_bosonic_qubits(p.replace(gamma_left=0.02)) == 0.0
    assert al.contrast_bosonic_qubits(p.replace(t_left=0.5)) == 0.0
    with pytest.raises(UnsupportedStatisticsError):
        al.contrast_bosonic_qubits(p.replace(eps_sub=1))


def test_conductance_vanishes_at_both_ends():
    p = ModelParams()
    peak = al.conductance_single(p, 0.52)
    assert al.conductance_single(p, 1e-3) < 1e-100
    assert al.conductance_single(p, 1e5) < 1e-4 * peak
    with pytest.raises(DomainError):
        al.conductance_single(p, 0.0)


@pytest.mark.parametrize("el, er, ea", [(a, b, c) for a in (1, -1) for b in (1, -1) for c in (1, -1)])
def test_conductance_matches_finite_difference(el, er, ea):
    p = ModelParams(eps_left=el, eps_right=er, eps_sub=ea, g=0.02)
    t, d = 0.7, 1e-6
    fd = (al.current_single(p.replace(t_left=t + d, t_right=t - d))) / (2 * d)
    assert al.conductance_single(p, t) == pytest.approx(fd, rel=1e-6)
    fd2 = (al.current_two(p.replace(t_left=t + d, t_right=t - d))) / (2 * d)
    assert al.conductance_two(p, t) == pytest.approx(fd2, rel=1e-6)


def test_conductance_csch_form_for_bosonic_qubits():
    p = ModelParams()
    for t in (0.1, 0.5, 2.0):
        assert al.conductance_single(p, t) == pytest.approx(al.conductance_single_csch(p, t),
                                                            rel=1e-13)


def test_conductance_single_maximum_near_estimate():
    from scipy.optimize import minimize_scalar

    p = ModelParams()
    res = minimize_scalar(lambda t: -al.conductance_single(p, t), bracket=(0.3, 0.5, 0.8),
                          method="golden", tol=1e-10)
    estimate = 4 / math.sinh(2) * 0.01 * 0.02 / 0.03
    assert -res.fun == pytest.approx(estimate, rel=5e-3)
    assert estimate == pytest.approx(7.35e-3, rel=1e-3)


def test_conductance_two_bounded_and_weak_limit():
    p = ModelParams()
    for t in np.geomspace(0.02, 50, 30):
        assert al.conductance_two(p, t) <= al.conductance_single(p, t)
    strong = p.replace(g=10.0)
    assert al.conductance_two(strong, 0.5) == pytest.approx(al.conductance_single(strong, 0.5),
                                                            rel=1e-5)


def test_ndtc_threshold_value():
    p = ModelParams(gamma_left=0.01, gamma_right=0.02, g=0.01)
    expected = 1 / math.log(1 + 2 * 0.01 * math.sqrt(50) / math.sqrt(0.03 * 1.5))
    assert al.ndtc_threshold(p) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(1.958, abs=1e-3)


def test_ndtc_threshold_grows_with_coupling():
    p = ModelParams()
    values = [al.ndtc_threshold(p.replace(g=g)) for g in (0.01, 0.1, 1.0, 10.0)]
    assert values == sorted(values) and values[-1] > 100


@pytest.mark.parametrize("t_left, sign", [(1.0, 1), (1.5, 1), (3.0, -1)])
def test_differential_current_sign_around_threshold(t_left, sign):
    p = ModelParams(t_right=1e-9, t_left=t_left)
    d = al.differential_current(p, t_left - 1e-9, 1e-4)
    assert math.copysign(1, d) == sign


def test_differential_current_mean_fixed_matches_conductance():
    p = ModelParams(t_left=0.6, t_right=0.6)
    d = al.differential_current(p, 0.0, 1e-5, mode="mean_fixed")
    assert d == pytest.approx(al.conductance_two(p, 0.6), rel=1e-6)
    with pytest.raises(ValueError):
        al.differential_current(p, 0.0, 1e-5, mode="nope")


def test_alpha_decreases_with_bias_beyond_threshold():
    p = ModelParams(t_right=0.0)
    t_star = al.ndtc_threshold(p)
    a = [al.scaling_alpha(p.replace(t_left=t)) for t in (t_star * 1.1, t_star * 1.2)]
    assert a[1] < a[0]


def test_alpha_limits():
    p = ModelParams(g=0.01, gamma_left=0.02, gamma_right=0.02, t_left=1.0, t_right=0.0)
    a0, a1, a2 = al.alpha_limits(p)
    assert a0 == pytest.approx(0.5, rel=1e-15)
    assert a1 == pytest.approx(1 / (1 + coth(0.5)), rel=1e-14)
    assert a2 == pytest.approx(1 / (1 + math.tanh(0.5)), rel=1e-14)
    cold = al.alpha_limits(p.replace(t_left=1e-3))
    assert cold[0] == pytest.approx(cold[1]) == pytest.approx(cold[2])
    hot = al.alpha_limits(p.replace(t_left=1e8))
    assert hot[1] < 1e-7


def test_alpha_limits_agree_with_general_alpha():
    base = ModelParams(t_left=0.9, t_right=0.0, g=0.004)
    cases = {0: dict(eps_left=1, eps_sub=1), 1: dict(eps_left=1, eps_sub=-1),
             2: dict(eps_left=-1, eps_sub=1)}
    for idx, kw in cases.items():
        p = base.replace(**kw)
        assert al.alpha_limits(p)[idx] == pytest.approx(al.scaling_alpha(p), rel=1e-13)


def test_coherence_from_current():
    p = ModelParams(g=0.25, omega=1.0)
    assert al.coherence_from_current(0.0, p) == 0
    assert al.coherence_from_current(4 * 0.25, p) == pytest.approx(1j)
    with pytest.raises(DomainError):
        al.coherence_from_current(1.0, p.replace(g=0.0))
