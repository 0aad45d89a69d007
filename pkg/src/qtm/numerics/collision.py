"""Stroboscopic collision model: fresh thermal ancillas, one collision per time step tau.

Each step the system meets one ancilla per attached bath (a truncated
oscillator for a bosonic bath, a qubit for a fermionic one).  Everything
evolves for a time tau under H_S + H_int + sum_k w b_k^dag b_k +
sqrt(gamma_k / tau) (s b_k^dag + s^dag b_k); the ancillas are then traced
out and discarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from ..errors import DomainError, NumericalError
from ..model import BOSON, ModelParams
from .hilbert import QUBIT, TAIL_TOLERANCE, HilbertSpec
from .liouvillian import SIDES, unvec, vec
from .states import DensityMatrix

UNITARITY_TOL = 1e-10


def ancilla_dim(params: ModelParams, side: str) -> int:
    eps = params.eps_left if side == "left" else params.eps_right
    if eps != BOSON:
        return 2
    t = params.t_left if side == "left" else params.t_right
    if t == 0:
        return 3
    # one level above the tail rule: a collision can add an excitation
    return max(3, math.ceil(-math.log(TAIL_TOLERANCE) * t / params.omega) + 1)


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def _ancilla_gibbs(dim: int, omega: float, temperature: float) -> np.ndarray:
    levels = np.arange(dim)
    if temperature == 0:
        p = (levels == 0).astype(float)
    else:
        p = np.exp(-levels * omega / temperature)
    return p / p.sum()


@dataclass(frozen=True, eq=False)
class CollisionChannel:
    """System channel of one collision and the ancilla energy it absorbs."""

    tau: float
    dim: int
    channel: np.ndarray            # d^2 x d^2, column-stacked
    ancilla_gain: dict             # side -> (operator G, initial mean excitation)
    omega: float

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.channel @ vec(rho), self.dim)

    def heat_flows(self, rho: np.ndarray) -> dict[str, float]:
        """Heat per unit time entering the system from each attached bath."""
        out = {side: 0.0 for side in SIDES}
        for side, (gain, n0) in self.ancilla_gain.items():
            n_after = float(np.real(np.sum(gain.T * rho)))
            out[side] = -self.omega * (n_after - n0) / self.tau
        return out

    def fixed_point(self) -> DensityMatrix:
        """Stroboscopic steady state: the unit-eigenvalue eigenvector of the channel."""
        generator = self.channel - np.eye(self.dim ** 2)
        _, s, vh = la.svd(generator)
        if s.size > 1 and s[-2] < 1e-9 * max(s[0], 1.0):
            raise NumericalError("collision channel has more than one fixed point")
        rho = unvec(vh[-1].conj(), self.dim)
        rho = rho / np.trace(rho)
        return DensityMatrix(0.5 * (rho + rho.conj().T))


def collision_channel(params: ModelParams, tau: float, spec: HilbertSpec | None = None,
                      baths: tuple[str, ...] = SIDES) -> CollisionChannel:
    """Build the one-step channel; the left ancilla meets site 0, the right one the last site."""
    spec = HilbertSpec.qubits(2) if spec is None else spec
    if spec.site_kind != QUBIT:
        raise DomainError("the collision model is implemented for qubit sites")
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if any(b not in SIDES for b in baths) or len(set(baths)) != len(baths):
        raise DomainError(f"baths must be distinct entries of {SIDES}, got {baths}")
    d = spec.dim
    ops = [spec.lowering(k).toarray() for k in range(spec.n_sites)]
    h_sys = sum(params.omega * s.conj().T @ s for s in ops)
    for k in range(spec.n_sites - 1):
        hop = ops[k] @ ops[k + 1].conj().T
        h_sys = h_sys + params.g * (hop + hop.conj().T)

    dims = [ancilla_dim(params, side) for side in baths]
    a_total = int(np.prod(dims)) if dims else 1
    eye_a = np.eye(a_total)
    h = np.kron(h_sys, eye_a)
    probs = np.ones(1)
    anc_numbers = {}
    site_of = {"left": ops[0], "right": ops[-1]}
    for i, side in enumerate(baths):
        b = _ladder(dims[i])
        factors = [np.eye(n) for n in dims]
        factors[i] = b
        b_full = factors[0]
        for f in factors[1:]:
            b_full = np.kron(b_full, f)
        number = b_full.conj().T @ b_full
        gamma = params.gamma_left if side == "left" else params.gamma_right
        temp = params.t_left if side == "left" else params.t_right
        s = site_of[side]
        coupling = np.kron(s, b_full.conj().T)
        h = h + params.omega * np.kron(np.eye(d), number)
        h = h + math.sqrt(gamma / tau) * (coupling + coupling.conj().T)
        probs = np.kron(probs, _ancilla_gibbs(dims[i], params.omega, temp))
        anc_numbers[side] = np.real(np.diag(number))

    u = la.expm(-1j * tau * h)
    err = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if err > UNITARITY_TOL:
        raise NumericalError(f"collision propagator deviates from unitarity by {err:.2e}")

    u4 = u.reshape(d, a_total, d, a_total)
    live = np.flatnonzero(probs > 0)
    u4 = u4[:, :, :, live]
    p = probs[live]
    # Phi[k, i, l, j] = sum_{a', a} p_a conj(K_{a'a}[k, l]) K_{a'a}[i, j]
    channel = np.einsum("kbla,ibja,a->kilj", u4.conj(), u4, p, optimize=True).reshape(d * d, d * d)
    gains = {}
    for side, numbers in anc_numbers.items():
        # G = sum_{a', a} p_a N(a') K^dag K, so that <N after> = tr(G rho)
        weighted = u4 * np.sqrt(p)[None, None, None, :]
        gain = np.einsum("ibka,b,ibja->kj", weighted.conj(), numbers, weighted, optimize=True)
        gains[side] = (gain, float(np.dot(probs, numbers)))
    return CollisionChannel(tau, d, channel, gains, params.omega)


@dataclass(frozen=True)
class CollisionTrajectory:
    states: tuple[DensityMatrix, ...]
    q_left: np.ndarray
    q_right: np.ndarray

    @property
    def current(self) -> np.ndarray:
        return self.q_left - self.q_right


def collision_simulate(params: ModelParams, tau: float, n_collisions: int,
                       spec: HilbertSpec | None = None, rho0: np.ndarray | None = None,
                       baths: tuple[str, ...] = SIDES) -> CollisionTrajectory:
    """Iterate ``n_collisions`` collisions starting from ``rho0`` (default: ground state).

    ``baths=()`` removes the ancillas, leaving unitary system evolution.
    """
    if int(n_collisions) != n_collisions or n_collisions < 0:
        raise DomainError("n_collisions must be a non-negative integer")
    ch = collision_channel(params, tau, spec, baths)
    if rho0 is None:
        rho = np.zeros((ch.dim, ch.dim), complex)
        rho[0, 0] = 1.0
    else:
        rho = np.array(rho0.matrix if isinstance(rho0, DensityMatrix) else rho0, dtype=complex)
    states = [DensityMatrix(rho)]
    ql, qr = [], []
    for _ in range(int(n_collisions)):
        flows = ch.heat_flows(rho)
        ql.append(flows["left"])
        qr.append(flows["right"])
        rho = ch.apply(rho)
        rho = 0.5 * (rho + rho.conj().T)
        states.append(DensityMatrix(rho))
    return CollisionTrajectory(tuple(states), np.array(ql), np.array(qr))


def collision_current(params: ModelParams, tau: float) -> float:
    """Long-time heat current Q_L - Q_R of the two-qubit collision model."""
    ch = collision_channel(params, tau)
    rho = ch.fixed_point()
    flows = ch.heat_flows(rho.matrix)
    return flows["left"] - flows["right"]
