"""Closed forms of the global (strong inter-site coupling) master equation.

Restricted to two resonant qubits between bosonic baths.  The coupled pair
behaves as two independent transport channels at the normal-mode
frequencies w +- g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .analytic_local import CurrentDirection, _oriented, contrast_from_currents
from .errors import DomainError, NoPeakSplitError, UndefinedContrastError, UnsupportedStatisticsError
from .model import ModelParams, coth_half, csch, occupation, BOSON


@dataclass(frozen=True)
class EigenmodePair:
    omega_plus: float
    omega_minus: float

    @classmethod
    def of(cls, params: ModelParams) -> "EigenmodePair":
        if params.g >= params.omega:
            raise DomainError(f"g = {params.g} >= omega = {params.omega}: the lower mode "
                              "frequency omega - g is not positive")
        return cls(params.omega + params.g, params.omega - params.g)

    def __iter__(self):
        yield self.omega_minus
        yield self.omega_plus


def _require_global_regime(params: ModelParams) -> EigenmodePair:
    if not params.bosonic_qubits:
        raise UnsupportedStatisticsError(
            "global-approach closed forms need bosonic baths and qubit subsystems")
    return EigenmodePair.of(params)


def current_mode(params: ModelParams, mode_freq: float,
                 direction: CurrentDirection = CurrentDirection.FORWARD) -> float:
    """Heat current carried by one normal mode of frequency ``mode_freq``."""
    _require_global_regime(params)
    if not mode_freq > 0:
        raise DomainError(f"mode frequency must be positive, got {mode_freq}")
    p = _oriented(params, direction)
    n_l = occupation(BOSON, mode_freq, p.t_left)
    n_r = occupation(BOSON, mode_freq, p.t_right)
    gl, gr = p.gamma_left, p.gamma_right
    den = gl * coth_half(mode_freq, p.t_left) + gr * coth_half(mode_freq, p.t_right)
    return gl * gr * mode_freq * (n_l - n_r) / den


def current_global(params: ModelParams,
                   direction: CurrentDirection = CurrentDirection.FORWARD) -> float:
    modes = _require_global_regime(params)
    return sum(current_mode(params, w, direction) for w in modes)


def contrast_global(params: ModelParams) -> float:
    """Global-approach contrast for a cold bath at exactly zero temperature.

    Each mode contributes with weight A = w n / ((gR/gL + c)(gL/gR + c)),
    where n and c = coth(w/2T_L) are evaluated at the hot temperature.
    """
    modes = _require_global_regime(params)
    if params.t_right != 0:
        raise DomainError("contrast_global is the T_R = 0 closed form; "
                          "use contrast_global_swap for finite T_R")
    if params.t_left == 0:
        raise UndefinedContrastError("both baths at T = 0: no current in either direction")
    gl, gr, t = params.gamma_left, params.gamma_right, params.t_left
    num = den = 0.0
    for w in modes:
        c = coth_half(w, t)
        weight = w * occupation(BOSON, w, t) / ((gr / gl + c) * (gl / gr + c))
        num += weight * (c - 1.0)
        den += weight * (c + 1.0)
    if den == 0:
        raise UndefinedContrastError("hot bath too cold: both mode currents underflow")
    return abs((gl - gr) / (gl + gr)) * num / den


def contrast_global_swap(params: ModelParams) -> float:
    """|(J-> + J<-)/(J-> - J<-)| of the global current for arbitrary T_R."""
    _require_global_regime(params)
    if params.t_left == params.t_right:
        raise UndefinedContrastError("contrast is undefined at T_L = T_R")
    return contrast_from_currents(current_global(params, CurrentDirection.FORWARD),
                                  current_global(params, CurrentDirection.SWAPPED))


def conductance_mode(params: ModelParams, mode_freq: float, temperature: float) -> float:
    """Linear conductance of a single normal mode."""
    if not temperature > 0:
        raise DomainError(f"conductance needs T > 0, got {temperature}")
    gl, gr, t = params.gamma_left, params.gamma_right, temperature
    return gl * gr / (gl + gr) * mode_freq ** 2 * csch(mode_freq / t) / (2.0 * t * t)


def conductance_global(params: ModelParams, temperature: float) -> float:
    modes = _require_global_regime(params)
    return sum(conductance_mode(params, w, temperature) for w in modes)


def appf_root(lo: float = 1.0, hi: float = 3.0, xtol: float = 1e-15) -> float:
    """Root x* of x coth(x) = 2, the scaled location w/T of a single-mode peak."""
    return optimize.bisect(lambda x: 2.0 / x - 1.0 / math.tanh(x), lo, hi, xtol=xtol)


def mode_fwhm(mode_freq: float) -> float:
    """Full width at half maximum, in temperature, of one mode's conductance peak."""
    def shape(t):
        return mode_freq ** 2 * csch(mode_freq / t) / (t * t)

    t_peak = mode_freq / appf_root()
    half = 0.5 * shape(t_peak)
    lo = optimize.brentq(lambda t: shape(t) - half, 1e-3 * t_peak, t_peak, xtol=1e-14)
    hi = optimize.brentq(lambda t: shape(t) - half, t_peak, 1e3 * t_peak, xtol=1e-14)
    return hi - lo


@dataclass(frozen=True)
class PeakReport:
    t_minus: float
    t_plus: float
    approx_minus: float
    approx_plus: float
    x_star: float
    n_maxima: int
    fwhm_minus: float
    fwhm_plus: float


def local_maxima(params: ModelParams, points: int = 256) -> list[float]:
    """Locations of every local maximum of the global conductance in T.

    A log-spaced grid over [1e-2 w_-, 1e2 w_+] brackets the maxima and each
    bracket is refined by golden-section search.
    """
    modes = _require_global_regime(params)
    grid = np.geomspace(1e-2 * modes.omega_minus, 1e2 * modes.omega_plus, points)
    values = np.array([conductance_global(params, t) for t in grid])
    found = []
    for i in range(1, points - 1):
        if values[i] > values[i - 1] and values[i] >= values[i + 1]:
            res = optimize.minimize_scalar(
                lambda lt: -conductance_global(params, math.exp(lt)),
                bracket=(math.log(grid[i - 1]), math.log(grid[i]), math.log(grid[i + 1])),
                method="golden", tol=1e-12)
            found.append(math.exp(res.x))
    return found


def conductance_peaks(params: ModelParams) -> PeakReport:
    """Both maxima of the split conductance, measured and predicted.

    The predicted location of each peak is w_-+ / x*, treating the two
    modes as independent.  Raises NoPeakSplitError when the curve has a
    single maximum.
    """
    modes = _require_global_regime(params)
    maxima = local_maxima(params)
    if len(maxima) < 2:
        raise NoPeakSplitError(
            f"global conductance has {len(maxima)} local maximum; g = {params.g} too small to split")
    x_star = appf_root()
    return PeakReport(
        t_minus=maxima[0], t_plus=maxima[-1],
        approx_minus=modes.omega_minus / x_star, approx_plus=modes.omega_plus / x_star,
        x_star=x_star, n_maxima=len(maxima),
        fwhm_minus=mode_fwhm(modes.omega_minus), fwhm_plus=mode_fwhm(modes.omega_plus))
