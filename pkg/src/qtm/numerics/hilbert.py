"""Hilbert spaces of the central system and operators acting on them."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionCapError, DomainError
from ..model import BOSON, ModelParams

QUBIT = "qubit"
OSCILLATOR = "oscillator"

DEFAULT_DIM_CAP = 4096
TAIL_TOLERANCE = 1e-10
MIN_OSCILLATOR_DIM = 8


def dim_cap() -> int:
    """Largest allowed vectorized dimension d^2; ``QTM_DIM_CAP`` overrides it."""
    raw = os.environ.get("QTM_DIM_CAP")
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"QTM_DIM_CAP must be an integer, got {raw!r}") from exc
    if cap < 4:
        raise DomainError(f"QTM_DIM_CAP must be at least 4, got {cap}")
    return cap


@dataclass(frozen=True)
class HilbertSpec:
    site_kind: str = QUBIT
    n_sites: int = 2
    local_dim: int = 2

    def __post_init__(self):
        if self.site_kind not in (QUBIT, OSCILLATOR):
            raise DomainError(f"site_kind must be {QUBIT!r} or {OSCILLATOR!r}")
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise DomainError(f"n_sites must be a positive integer, got {self.n_sites}")
        if self.site_kind == QUBIT and self.local_dim != 2:
            raise DomainError("qubit sites have local dimension 2")
        if self.site_kind == OSCILLATOR and self.local_dim < 2:
            raise DomainError("oscillator truncation needs at least 2 levels")

    @classmethod
    def qubits(cls, n_sites: int = 2) -> "HilbertSpec":
        return cls(QUBIT, n_sites, 2)

    @classmethod
    def oscillators(cls, n_sites: int = 2, dim: int = MIN_OSCILLATOR_DIM) -> "HilbertSpec":
        return cls(OSCILLATOR, n_sites, dim)

    @classmethod
    def for_params(cls, params: ModelParams, n_sites: int = 2) -> "HilbertSpec":
        """Qubits for eps_sub = -1, otherwise oscillators truncated by the tail rule."""
        if params.eps_sub is BOSON:
            return cls.oscillators(n_sites, oscillator_dim(params))
        return cls.qubits(n_sites)

    @property
    def dim(self) -> int:
        return self.local_dim ** self.n_sites

    @property
    def dim_sq(self) -> int:
        return self.dim ** 2

    def check_cap(self) -> None:
        cap = dim_cap()
        if self.dim_sq > cap:
            raise DimensionCapError(
                f"vectorized dimension {self.dim_sq} exceeds the cap {cap} (set QTM_DIM_CAP to raise it)")

    def lowering(self, site: int) -> sp.csr_matrix:
        """Annihilation operator of ``site`` embedded in the full space."""
        if not 0 <= site < self.n_sites:
            raise DomainError(f"site {site} outside 0..{self.n_sites - 1}")
        local = sp.diags(np.sqrt(np.arange(1, self.local_dim, dtype=float)), 1,
                         shape=(self.local_dim, self.local_dim), format="csr")
        if self.site_kind == QUBIT:
            local = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
        eye = sp.identity(self.local_dim, format="csr")
        factors = [local if k == site else eye for k in range(self.n_sites)]
        return reduce(lambda a, b: sp.kron(a, b, format="csr"), factors).astype(complex)

    def excitations(self) -> np.ndarray:
        """Total excitation number of each product basis state."""
        levels = np.arange(self.local_dim)
        grids = np.meshgrid(*([levels] * self.n_sites), indexing="ij")
        return sum(grids).reshape(-1)

    def gibbs_tail(self, omega: float, temperature: float) -> float:
        """Thermal weight above the truncation of one site at temperature T."""
        if self.site_kind == QUBIT or temperature == 0:
            return 0.0
        return math.exp(-self.local_dim * omega / temperature)


def oscillator_dim(params: ModelParams, tolerance: float = TAIL_TOLERANCE) -> int:
    """Smallest truncation whose Gibbs tail weight is below ``tolerance`` (at least 8)."""
    t_max = max(params.t_left, params.t_right)
    if t_max == 0:
        return MIN_OSCILLATOR_DIM
    return max(MIN_OSCILLATOR_DIM, math.ceil(-math.log(tolerance) * t_max / params.omega))


def gibbs_state(hamiltonian: np.ndarray, temperature: float) -> np.ndarray:
    """exp(-H/T)/Z, or the ground-state projector at T = 0 (non-degenerate ground)."""
    h = np.asarray(hamiltonian, dtype=complex)
    energies, vectors = np.linalg.eigh(h)
    shifted = energies - energies[0]
    if temperature == 0:
        weights = (shifted == 0).astype(float)
    else:
        weights = np.exp(-shifted / temperature)
    weights /= weights.sum()
    return (vectors * weights) @ vectors.conj().T
