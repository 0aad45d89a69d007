"""Closed-form observables of the local (weak inter-site coupling) master equation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .errors import (DomainError, SingularDenominatorError,
                     UndefinedContrastError, UnsupportedStatisticsError)
from .model import ModelParams, coth_half, csch, occupation, tanh_half

# |denominator| below this fraction of gamma_L + gamma_R is treated as divergent
_DENOMINATOR_RTOL = 1e-12


class CurrentDirection(enum.Enum):
    FORWARD = "forward"
    SWAPPED = "swapped"


def _oriented(params: ModelParams, direction: CurrentDirection) -> ModelParams:
    direction = CurrentDirection(direction)
    return params if direction is CurrentDirection.FORWARD else params.swapped()


def _require_bosonic_qubits(params: ModelParams, what: str) -> None:
    if not params.bosonic_qubits:
        raise UnsupportedStatisticsError(
            f"{what} is only defined for bosonic baths and qubit subsystems "
            f"(eps_left=eps_right=+1, eps_sub=-1)")


def _bracket(eps_bath: int, eps_sub: int, n: float) -> float:
    return 1.0 + (eps_bath - eps_sub) * n


def current_single(params: ModelParams,
                   direction: CurrentDirection = CurrentDirection.FORWARD) -> float:
    """Steady heat current through a single central system.

    Positive when heat flows from the left bath to the right bath.  The
    coupling ``g`` plays no role.
    """
    p = _oriented(params, direction)
    n_l, n_r = p.n_left, p.n_right
    gl, gr, w = p.gamma_left, p.gamma_right, p.omega
    numerator = 2.0 * w * gl * gr * ((n_l - n_r) + (p.eps_right - p.eps_left) * n_l * n_r)
    denominator = gl * _bracket(p.eps_left, p.eps_sub, n_l) + gr * _bracket(p.eps_right, p.eps_sub, n_r)
    if abs(denominator) < _DENOMINATOR_RTOL * (gl + gr):
        raise SingularDenominatorError(
            f"single-site current denominator vanishes ({denominator:.3e}); "
            "the subsystem occupation diverges at these temperatures")
    return numerator / denominator


def _coupling_ratio(params: ModelParams) -> float:
    if params.g == 0:
        raise DomainError("g = 0: the scaling factor alpha is 0/0; the limit alpha -> 0 "
                          "means no current passes between the subsystems")
    return params.gamma_left * params.gamma_right / (4.0 * params.g ** 2)


def scaling_alpha(params: ModelParams,
                  direction: CurrentDirection = CurrentDirection.FORWARD,
                  allow_limit: bool = False) -> float:
    """Ratio alpha = J^(2) / J^(1), always in (0, 1].

    With ``allow_limit`` the g -> 0 limit is returned as 0.0 instead of
    raising.
    """
    p = _oriented(params, direction)
    if p.g == 0 and allow_limit:
        return 0.0
    x = _coupling_ratio(p)
    # group the bath factors so that swapping L and R is exact in floating point
    brackets = _bracket(p.eps_left, p.eps_sub, p.n_left) * _bracket(p.eps_right, p.eps_sub, p.n_right)
    return 1.0 / (1.0 + x * brackets)


def current_two(params: ModelParams,
                direction: CurrentDirection = CurrentDirection.FORWARD) -> float:
    """Steady heat current through two coupled subsystems, J^(2) = alpha J^(1)."""
    return scaling_alpha(params, direction) * current_single(params, direction)


def current_chain(params: ModelParams, n_sites: int,
                  direction: CurrentDirection = CurrentDirection.FORWARD) -> float:
    """Heat current through an N-qubit XX chain with bosonic boundary baths.

    Written in the chain form 4g^2 / (4g^2 + g1 gN coth coth) times the
    single-qubit current; for N >= 2 it does not depend on N.
    """
    _require_bosonic_qubits(params, "the chain current")
    if int(n_sites) != n_sites or n_sites < 1:
        raise DomainError(f"n_sites must be a positive integer, got {n_sites}")
    if n_sites == 1:
        return current_single(params, direction)
    p = _oriented(params, direction)
    if p.g == 0:
        raise DomainError("g = 0: the chain is disconnected")
    four_g2 = 4.0 * p.g ** 2
    cc = coth_half(p.omega, p.t_left) * coth_half(p.omega, p.t_right)
    prefactor = four_g2 / (four_g2 + p.gamma_left * p.gamma_right * cc)
    n_l, n_r = p.n_left, p.n_right
    j1 = (2.0 * p.omega * p.gamma_left * p.gamma_right * (n_l - n_r)
          / (p.gamma_left * (1 + 2 * n_l) + p.gamma_right * (1 + 2 * n_r)))
    return prefactor * j1


@dataclass(frozen=True)
class ContrastResult:
    contrast: float
    j_forward: float
    j_swapped: float
    a_coeff: float | None = None
    b_coeff: float | None = None


def contrast_coefficients(params: ModelParams) -> tuple[float, float]:
    """The pair (A, B) with J^(2)-> = J^(1)-> / B and J^(2)<- = J^(1)<- / A."""
    x = _coupling_ratio(params)
    w, tl, tr = params.omega, params.t_left, params.t_right
    el, er, ea = params.eps_left, params.eps_right, params.eps_sub

    def n(eps, t):
        return occupation(eps, w, t)

    a = 1.0 + x * (_bracket(el, ea, n(el, tr)) * _bracket(er, ea, n(er, tl)))
    b = 1.0 + x * (_bracket(el, ea, n(el, tl)) * _bracket(er, ea, n(er, tr)))
    return a, b


def contrast_from_currents(j_forward: float, j_swapped: float) -> float:
    """|(J-> + J<-) / (J-> - J<-)|."""
    if j_forward == j_swapped:
        raise UndefinedContrastError("forward and swapped currents coincide (T_L = T_R?)")
    return abs((j_forward + j_swapped) / (j_forward - j_swapped))


def contrast(params: ModelParams, current_op: str = "two", n_sites: int | None = None) -> ContrastResult:
    """Rectification contrast for the single, two-site or chain machine."""
    if params.t_left == params.t_right:
        raise UndefinedContrastError("contrast is undefined at T_L = T_R (both currents vanish)")
    ops: dict[str, Callable[..., float]] = {
        "single": current_single,
        "two": current_two,
        "chain": lambda p, d: current_chain(p, n_sites, d),
    }
    if current_op not in ops:
        raise ValueError(f"current_op must be one of {sorted(ops)}, got {current_op!r}")
    if current_op == "chain" and n_sites is None:
        raise ValueError("n_sites is required for the chain contrast")
    op = ops[current_op]
    jf = op(params, CurrentDirection.FORWARD)
    js = op(params, CurrentDirection.SWAPPED)
    a = b = None
    if params.g > 0:
        a, b = contrast_coefficients(params)
    return ContrastResult(contrast_from_currents(jf, js), jf, js, a, b)


def contrast_two_from_single(params: ModelParams) -> float:
    """Two-site contrast assembled from single-site currents and (A, B)."""
    a, b = contrast_coefficients(params)
    jf = current_single(params, CurrentDirection.FORWARD)
    js = current_single(params, CurrentDirection.SWAPPED)
    den = a * jf - b * js
    if den == 0:
        raise UndefinedContrastError("A J-> = B J<-")
    return abs((a * jf + b * js) / den)


def contrast_bosonic_qubits(params: ModelParams) -> float:
    """Closed-form contrast for bosonic baths and a qubit bridge."""
    _require_bosonic_qubits(params, "the bosonic-bath contrast formula")
    gl, gr = params.gamma_left, params.gamma_right
    cl = coth_half(params.omega, params.t_left)
    cr = coth_half(params.omega, params.t_right)
    return abs((gl - gr) / (gl + gr)) * abs((cr - cl) / (cr + cl))


def _check_temperature(temperature: float) -> None:
    if not temperature > 0:
        raise DomainError(f"conductance needs T > 0, got {temperature}")


def conductance_single(params: ModelParams, temperature: float) -> float:
    """Linear conductance dJ^(1)/dDeltaT at T_L = T_R = T.

    kappa = 2 w^2 gL gR nL na nR e^{w/T} / ((gL nL + gR nR) T^2), valid for
    every combination of statistics.
    """
    _check_temperature(temperature)
    w, t = params.omega, temperature
    y = w / t
    if y > 700.0:
        return 0.0
    n_l = occupation(params.eps_left, w, t)
    n_r = occupation(params.eps_right, w, t)
    n_a = occupation(params.eps_sub, w, t)
    gl, gr = params.gamma_left, params.gamma_right
    # n_l n_r e^y / (gl n_l + gr n_r) rewritten to stay finite as n -> 0
    weight = (n_l * n_r) / (gl * n_l + gr * n_r)
    return 2.0 * w * w * gl * gr * weight * n_a * math.exp(y) / (t * t)


def conductance_single_csch(params: ModelParams, temperature: float) -> float:
    """w^2 gL gR csch(w/T) / ((gL + gR) T^2); bosonic baths, qubit bridge."""
    _require_bosonic_qubits(params, "the csch conductance")
    _check_temperature(temperature)
    w, t = params.omega, temperature
    gl, gr = params.gamma_left, params.gamma_right
    return w * w * gl * gr * csch(w / t) / ((gl + gr) * t * t)


def alpha_at(params: ModelParams, temperature: float) -> float:
    """Scaling factor alpha evaluated at T_L = T_R = T."""
    return scaling_alpha(params.replace(t_left=temperature, t_right=temperature))


def conductance_two(params: ModelParams, temperature: float) -> float:
    """kappa^(2)(T) = alpha(T) kappa^(1)(T)."""
    _check_temperature(temperature)
    return alpha_at(params, temperature) * conductance_single(params, temperature)


def conductance_two_peak_estimate(params: ModelParams) -> float:
    """Closed-form estimate of max_T kappa^(2) for bosonic baths, qubit bridge."""
    _require_bosonic_qubits(params, "the conductance peak estimate")
    x = _coupling_ratio(params)
    gl, gr = params.gamma_left, params.gamma_right
    kappa1_max = 4.0 * csch(2.0) * gl * gr / (gl + gr)
    return kappa1_max / (1.0 + x / math.tanh(1.0) ** 2)


def ndtc_threshold(params: ModelParams) -> float:
    """Hot-bath temperature above which dJ^(2)/dT_L < 0 with T_R -> 0."""
    _require_bosonic_qubits(params, "the NDTC threshold")
    if params.g == 0:
        raise DomainError("g = 0: no current, no threshold")
    gl, gr, g = params.gamma_left, params.gamma_right, params.g
    x = gl * gr / (4 * g * g)
    arg = 2.0 * gl * math.sqrt(gr / (4 * g * g)) / math.sqrt((gr + gl) * (1 + x))
    return params.omega / math.log1p(arg)


def differential_current(params: ModelParams, delta_t: float, step: float,
                         mode: str = "right_fixed") -> float:
    """Central finite difference of J^(2) with respect to the bias DeltaT.

    ``mode='right_fixed'`` holds T_R at ``params.t_right`` and sets
    T_L = T_R + DeltaT; ``mode='mean_fixed'`` holds (T_L + T_R)/2.
    """
    if not step > 0:
        raise DomainError("step must be positive")
    if mode == "right_fixed":
        def at(dt):
            return current_two(params.replace(t_left=params.t_right + dt))
    elif mode == "mean_fixed":
        mean = 0.5 * (params.t_left + params.t_right)

        def at(dt):
            return current_two(params.replace(t_left=mean + dt / 2, t_right=mean - dt / 2))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return (at(delta_t + step) - at(delta_t - step)) / (2 * step)


def alpha_limits(params: ModelParams) -> tuple[float, float, float]:
    """(alpha_0, alpha_1, alpha_2) for a cold bath at T_R = 0.

    alpha_0 applies when eps_L = eps_a, alpha_1 when eps_L - eps_a = 2 and
    alpha_2 when eps_L - eps_a = -2.  Only T_L enters.
    """
    x = _coupling_ratio(params)
    a0 = 1.0 / (1.0 + x)
    a1 = 1.0 / (1.0 + x * coth_half(params.omega, params.t_left))
    a2 = 1.0 / (1.0 + x * tanh_half(params.omega, params.t_left))
    return a0, a1, a2


def coherence_from_current(j: float, params: ModelParams) -> complex:
    """Steady two-site coherence <s1 s2^dag - s1^dag s2>/2 = i J / (4 g w)."""
    if params.g == 0:
        raise DomainError("g = 0: coherence-current relation is undefined")
    return 1j * j / (4.0 * params.g * params.omega)
