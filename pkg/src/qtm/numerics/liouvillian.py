"""Lindblad generators in column-stacked (``order='F'``) vectorization.

With vec(rho) stacking columns, vec(A rho B) = (B^T kron A) vec(rho), so

    -i[H, .]  ->  -i (I kron H - H^T kron I)
    D[x]      ->  conj(x) kron x - (I kron x^dag x + (x^dag x)^T kron I) / 2
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import DomainError, SchemaError, TruncationError, UnsupportedStatisticsError
from ..model import ModelParams, rates
from .hilbert import OSCILLATOR, TAIL_TOLERANCE, HilbertSpec
from .states import matrix_to_pairs, pairs_to_matrix

LOCAL = "local"
GLOBAL = "global"
SIDES = ("left", "right")


def commutator_superop(h) -> sp.csr_matrix:
    h = sp.csr_matrix(h, dtype=complex)
    eye = sp.identity(h.shape[0], dtype=complex, format="csr")
    return (-1j * (sp.kron(eye, h) - sp.kron(h.T, eye))).tocsr()


def dissipator_superop(x) -> sp.csr_matrix:
    x = sp.csr_matrix(x, dtype=complex)
    xdx = (x.conj().T @ x).tocsr()
    eye = sp.identity(x.shape[0], dtype=complex, format="csr")
    return (sp.kron(x.conj(), x) - 0.5 * (sp.kron(eye, xdx) + sp.kron(xdx.T, eye))).tocsr()


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape(dim, dim, order="F")


@dataclass(frozen=True)
class DissipatorTerm:
    """One rate-weighted channel gamma D[x] of a bath."""

    label: str
    rate: float
    superop: sp.csr_matrix


@dataclass(frozen=True, eq=False)
class Liouvillian:
    """Sparse generator plus the pieces needed for per-bath heat flows.

    ``charges`` holds, for every vectorized index of |i><j|, the excitation
    difference N(i) - N(j); the generator never mixes different charges.
    ``site_energies`` (local approach only) maps each bath to the bare energy
    operator of the site it touches.
    """

    matrix: sp.csr_matrix
    dim: int
    approach: str
    hamiltonian: np.ndarray
    heat_hamiltonian: np.ndarray
    dissipator_terms: dict[str, tuple[DissipatorTerm, ...]] = field(default_factory=dict)
    charges: np.ndarray | None = None
    site_energies: dict[str, np.ndarray] | None = None

    @property
    def dim_sq(self) -> int:
        return self.dim * self.dim

    @property
    def dissipator_slices(self) -> dict[str, sp.csr_matrix]:
        """Total dissipator of each bath."""
        out = {}
        for side, terms in self.dissipator_terms.items():
            total = sp.csr_matrix((self.dim_sq, self.dim_sq), dtype=complex)
            for term in terms:
                total = total + term.rate * term.superop
            out[side] = total.tocsr()
        return out

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho), self.dim)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def to_json(self) -> str:
        return json.dumps({"dim_sq": self.dim_sq, "approach": self.approach,
                           "matrix": matrix_to_pairs(self.dense())})

    @staticmethod
    def matrix_from_json(text: str) -> tuple[str, np.ndarray]:
        """Parse the JSON form back into (approach, dense matrix)."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict) or set(data) != {"dim_sq", "approach", "matrix"}:
            raise SchemaError("Liouvillian JSON needs exactly 'dim_sq', 'approach', 'matrix'")
        n = data["dim_sq"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise SchemaError(f"dim_sq must be a positive integer, got {n!r}")
        if data["approach"] not in (LOCAL, GLOBAL):
            raise SchemaError(f"approach must be {LOCAL!r} or {GLOBAL!r}")
        return data["approach"], pairs_to_matrix(data["matrix"], n, n)


def _charges(spec: HilbertSpec) -> np.ndarray:
    n = spec.excitations()
    # column stacking: index i + j*d holds |i><j|
    return (n[:, None] - n[None, :]).reshape(-1, order="F")


def _check_truncation(params: ModelParams, spec: HilbertSpec) -> None:
    if spec.site_kind != OSCILLATOR:
        return
    tail = spec.gibbs_tail(params.omega, max(params.t_left, params.t_right))
    if tail > TAIL_TOLERANCE:
        raise TruncationError(
            f"oscillator truncation {spec.local_dim} keeps Gibbs tail weight {tail:.2e} > "
            f"{TAIL_TOLERANCE:g}; use at least {math.ceil(-math.log(TAIL_TOLERANCE) * max(params.t_left, params.t_right) / params.omega)} levels")


def _chain_hamiltonian(params: ModelParams, spec: HilbertSpec):
    ops = [spec.lowering(k) for k in range(spec.n_sites)]
    h = sum(params.omega * (s.conj().T @ s) for s in ops)
    h_int = sp.csr_matrix((spec.dim, spec.dim), dtype=complex)
    for k in range(spec.n_sites - 1):
        hop = ops[k] @ ops[k + 1].conj().T
        h_int = h_int + params.g * (hop + hop.conj().T)
    return ops, sp.csr_matrix(h), sp.csr_matrix(h_int)


def _local_generator(params: ModelParams, spec: HilbertSpec) -> Liouvillian:
    spec.check_cap()
    _check_truncation(params, spec)
    ops, h_bare, h_int = _chain_hamiltonian(params, spec)
    r = rates(params)
    ends = {"left": ops[0], "right": ops[-1]}
    plus = {"left": r.gamma_plus_left, "right": r.gamma_plus_right}
    minus = {"left": r.gamma_minus_left, "right": r.gamma_minus_right}
    terms = {}
    total = commutator_superop(h_bare + h_int)
    for side in SIDES:
        s = ends[side]
        terms[side] = (DissipatorTerm("emission", minus[side], dissipator_superop(s)),
                       DissipatorTerm("absorption", plus[side], dissipator_superop(s.conj().T)))
        for term in terms[side]:
            total = total + term.rate * term.superop
    energies = {side: params.omega * (s.conj().T @ s).toarray() for side, s in ends.items()}
    return Liouvillian(total.tocsr(), spec.dim, LOCAL, (h_bare + h_int).toarray(),
                       h_bare.toarray(), terms, _charges(spec), energies)


def build_local_liouvillian(params: ModelParams, spec: HilbertSpec | None = None) -> Liouvillian:
    """Local generator for two sites, each coupled to its own bath.

    The heat Hamiltonian is the bare on-site part; qubit or truncated
    oscillator sites follow ``spec`` (default: chosen from ``eps_sub``).
    """
    spec = HilbertSpec.for_params(params) if spec is None else spec
    if spec.n_sites != 2:
        raise DomainError("the two-site local generator needs n_sites = 2")
    if (spec.site_kind == OSCILLATOR) != (params.eps_sub == 1):
        raise DomainError("site kind must match eps_sub (qubit for -1, oscillator for +1)")
    return _local_generator(params, spec)


def build_chain_liouvillian(params: ModelParams, n_sites: int) -> Liouvillian:
    """Open-boundary XX qubit chain with baths on the first and last site."""
    if not params.bosonic_qubits:
        raise UnsupportedStatisticsError("the chain generator needs bosonic baths and qubit sites")
    if int(n_sites) != n_sites or n_sites < 2:
        raise DomainError(f"a chain needs at least two sites, got {n_sites}")
    return _local_generator(params, HilbertSpec.qubits(int(n_sites)))


def eigenmodes(params: ModelParams) -> dict[str, tuple[float, np.ndarray]]:
    """Frequencies and projectors of the one-excitation normal modes of two qubits."""
    plus = np.zeros(4, complex)
    minus = np.zeros(4, complex)
    plus[[1, 2]] = [1, 1]
    minus[[1, 2]] = [1, -1]
    plus /= math.sqrt(2)
    minus /= math.sqrt(2)
    return {"plus": (params.omega + params.g, np.outer(plus, plus.conj())),
            "minus": (params.omega - params.g, np.outer(minus, minus.conj()))}


def eigenoperators(params: ModelParams) -> dict[tuple[int, str], tuple[float, np.ndarray]]:
    """Jump operators L_j(w_+-) = P_0 s_j P_+- + P_-+ s_j P_2 for j in {0, 1}."""
    spec = HilbertSpec.qubits(2)
    p0 = np.diag([1, 0, 0, 0]).astype(complex)
    p2 = np.diag([0, 0, 0, 1]).astype(complex)
    modes = eigenmodes(params)
    out = {}
    for j in range(2):
        s = spec.lowering(j).toarray()
        for name, other in (("plus", "minus"), ("minus", "plus")):
            w, proj = modes[name]
            out[(j, name)] = (w, p0 @ s @ proj + modes[other][1] @ s @ p2)
    return out


def build_global_liouvillian(params: ModelParams) -> Liouvillian:
    """Global generator of two coupled qubits with bosonic baths.

    Jump operators connect eigenstates of H_S + H_int, so the heat
    Hamiltonian is the full system Hamiltonian.
    """
    if not params.bosonic_qubits:
        raise UnsupportedStatisticsError("the global generator needs bosonic baths and qubit sites")
    if params.g >= params.omega:
        raise DomainError("g >= omega puts the lower mode at non-positive frequency")
    spec = HilbertSpec.qubits(2)
    _, h_bare, h_int = _chain_hamiltonian(params, spec)
    h = (h_bare + h_int).toarray()
    total = commutator_superop(h)
    terms = {}
    for side, j in (("left", 0), ("right", 1)):
        side_terms = []
        for name in ("plus", "minus"):
            w, op = eigenoperators(params)[(j, name)]
            r = rates(params, omega=w)
            g_minus = r.gamma_minus_left if side == "left" else r.gamma_minus_right
            g_plus = r.gamma_plus_left if side == "left" else r.gamma_plus_right
            side_terms.append(DissipatorTerm(f"emission_{name}", g_minus, dissipator_superop(op)))
            side_terms.append(DissipatorTerm(f"absorption_{name}", g_plus,
                                             dissipator_superop(op.conj().T)))
        terms[side] = tuple(side_terms)
        for term in side_terms:
            total = total + term.rate * term.superop
    return Liouvillian(total.tocsr(), spec.dim, GLOBAL, h, h, terms, _charges(spec))
