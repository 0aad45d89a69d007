"""Closed equations of motion for the two-site occupations and hopping coherence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError
from ..model import ModelParams, rates


@dataclass(frozen=True)
class Moments:
    n1: float
    n2: float
    hop: complex  # <s1 s2^dag>

    def current(self, params: ModelParams) -> float:
        """Heat current from the left-site occupation balance."""
        r = rates(params)
        kappa = r.gamma_minus_left - params.eps_sub * r.gamma_plus_left
        return 2.0 * params.omega * (r.gamma_plus_left - kappa * self.n1)


def _decay_rates(params: ModelParams) -> tuple[float, float, float, float]:
    r = rates(params)
    ea = params.eps_sub
    k_l = r.gamma_minus_left - ea * r.gamma_plus_left
    k_r = r.gamma_minus_right - ea * r.gamma_plus_right
    return k_l, k_r, r.gamma_plus_left, r.gamma_plus_right


def moments_closed_form(params: ModelParams) -> Moments:
    """Stationary solution of the moment equations in closed form."""
    k_l, k_r, gp_l, gp_r = _decay_rates(params)
    r = rates(params)
    g2 = 4.0 * params.g ** 2
    k = k_l + k_r
    den = (g2 + k_l * k_r) * k
    n1 = (g2 * (gp_l + gp_r) + gp_l * k_r * k) / den
    n2 = (g2 * (gp_l + gp_r) + gp_r * k_l * k) / den
    hop = 2j * params.g * (r.gamma_plus_left * r.gamma_minus_right
                           - r.gamma_minus_left * r.gamma_plus_right) / den
    return Moments(n1, n2, hop)


def moment_derivative(params: ModelParams, y: np.ndarray) -> np.ndarray:
    """Time derivative of y = (n1, n2, Re<s1 s2^dag>, Im<s1 s2^dag>)."""
    k_l, k_r, gp_l, gp_r = _decay_rates(params)
    g = params.g
    n1, n2, re, im = y
    half = 0.5 * (k_l + k_r)
    return np.array([
        -k_l * n1 + gp_l - 2 * g * im,
        -k_r * n2 + gp_r + 2 * g * im,
        -half * re,
        g * (n1 - n2) - half * im,
    ])


def integrate_moments(params: ModelParams, dt: float | None = None, tol: float = 1e-12,
                      max_steps: int = 50_000_000) -> Moments:
    """Classical RK4 from zero moments until the largest derivative is below ``tol``."""
    k_l, k_r, _, _ = _decay_rates(params)
    fastest = max(k_l, k_r, 2 * params.g, 1e-300)
    if dt is None:
        dt = 0.5 / fastest
    y = np.zeros(4)
    f = lambda state: moment_derivative(params, state)  # noqa: E731
    for _ in range(max_steps):
        d = f(y)
        if np.abs(d).max() < tol:
            return Moments(y[0], y[1], complex(y[2], y[3]))
        k1 = d
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    raise ConvergenceError(f"moment integration did not settle within {max_steps} steps")


def moment_ode_steady(params: ModelParams, method: str = "closed") -> Moments:
    """Steady moments via ``closed`` form or ``rk4`` integration."""
    if method == "closed":
        return moments_closed_form(params)
    if method == "rk4":
        return integrate_moments(params)
    raise ValueError(f"method must be 'closed' or 'rk4', got {method!r}")
