"""Steady-state observables: heat flows, coherence, entanglement, entropy production."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from ..analytic_local import CurrentDirection
from ..errors import DomainError, StationarityError
from ..model import ModelParams, rates
from .hilbert import HilbertSpec
from .liouvillian import SIDES, Liouvillian, build_local_liouvillian, unvec
from .solver import steady_state
from .states import DensityMatrix

X_STATE_TOL = 1e-10
_BALANCE_RTOL = 1e-10
_SIGMA_YY = np.fliplr(np.diag([-1.0, 1.0, 1.0, -1.0])).astype(complex)


def _dissipator_flows(rho: DensityMatrix, liou: Liouvillian) -> tuple[dict[str, float], float]:
    """tr(H_heat D_bath rho) per bath, plus the sum of |summands| as a round-off scale."""
    v = rho.vec()
    h = liou.heat_hamiltonian.reshape(-1, order="F")
    flows, gross = {}, 0.0
    for side in SIDES:
        q = 0.0
        for term in liou.dissipator_terms[side]:
            # tr(H D rho) = <D^dag(H), rho>, summed entry by entry
            products = term.rate * np.conj(term.superop.conj().T @ h) * v
            q += float(np.real(products.sum()))
            gross += float(np.abs(products).sum())
        flows[side] = q
    return flows, gross


def _bond_flows(rho: DensityMatrix, liou: Liouvillian) -> dict[str, float]:
    # steady state: the energy a bath injects into its site leaves through the
    # bond, Q = i tr([A, H] rho) with A the site energy; no large terms cancel
    h = liou.hamiltonian
    return {side: float(np.real(1j * np.sum((a @ h - h @ a).T * rho.matrix)))
            for side, a in liou.site_energies.items()}


def heat_flows(rho: DensityMatrix, liou: Liouvillian, check: bool = True) -> dict[str, float]:
    """Heat entering the system from each bath.

    The dissipator form tr(H_heat D_bath rho) is always evaluated; with
    ``check`` its balance Q_L + Q_R = 0 must hold to 1e-10 |Q| plus the
    round-off scale of the sum.  Local generators then report the bond flux
    into each end site, which equals the dissipator form in the steady state
    (also checked) but keeps relative accuracy when the bath terms nearly
    cancel.
    """
    if rho.dim != liou.dim:
        raise DomainError(f"state dimension {rho.dim} does not match generator dimension {liou.dim}")
    flows, gross = _dissipator_flows(rho, liou)
    allowed = _BALANCE_RTOL * max(abs(q) for q in flows.values()) + 64 * np.finfo(float).eps * gross
    if check:
        imbalance = abs(flows["left"] + flows["right"])
        if imbalance > allowed:
            raise StationarityError(
                f"heat balance violated: Q_L + Q_R = {flows['left'] + flows['right']:.3e}")
    if liou.site_energies is None:
        return flows
    bond = _bond_flows(rho, liou)
    if check:
        gap = max(abs(bond[side] - flows[side]) for side in SIDES)
        if gap > allowed:
            raise StationarityError(f"bath and bond heat flows differ by {gap:.3e}")
    return bond


def heat_current_numeric(rho: DensityMatrix, liou: Liouvillian, side: str = "net") -> float:
    """Heat current for ``side`` in {'left', 'right', 'net'}; 'net' is Q_L - Q_R."""
    flows = heat_flows(rho, liou)
    if side == "net":
        return flows["left"] - flows["right"]
    if side not in flows:
        raise ValueError(f"side must be 'left', 'right' or 'net', got {side!r}")
    return flows[side]


def _two_site_ops(rho: DensityMatrix):
    for local in (2,) + tuple(range(3, 64)):
        if local * local == rho.dim:
            kind = "qubit" if local == 2 else "oscillator"
            spec = HilbertSpec(kind, 2, local)
            return spec.lowering(0), spec.lowering(1)
    raise DomainError(f"dimension {rho.dim} is not a two-site space")


def hopping_expectation(rho: DensityMatrix) -> complex:
    """<s1 s2^dag>."""
    s1, s2 = _two_site_ops(rho)
    return rho.expect(s1 @ s2.conj().T)


def coherence(rho: DensityMatrix) -> complex:
    """<s1 s2^dag - s1^dag s2> / 2, which is i Im<s1 s2^dag>."""
    s1, s2 = _two_site_ops(rho)
    return 0.5 * (rho.expect(s1 @ s2.conj().T) - rho.expect(s1.conj().T @ s2))


def _require_two_qubits(rho: DensityMatrix) -> np.ndarray:
    if rho.dim != 4:
        raise DomainError(f"two-qubit state expected, got dimension {rho.dim}")
    return rho.matrix


def populations(rho: DensityMatrix) -> tuple[float, float, float, float]:
    """(p1, p2, p3, p4): doubly excited, |01>, |10>, ground."""
    m = _require_two_qubits(rho)
    d = np.real(np.diag(m))
    return float(d[3]), float(d[1]), float(d[2]), float(d[0])


def is_x_state(rho: DensityMatrix, tol: float = X_STATE_TOL) -> bool:
    m = _require_two_qubits(rho)
    mask = np.ones((4, 4), bool)
    mask[np.diag_indices(4)] = False
    mask[0, 3] = mask[3, 0] = mask[1, 2] = mask[2, 1] = False
    return bool(np.abs(m[mask]).max() < tol)


def concurrence_wootters(rho: DensityMatrix) -> float:
    m = _require_two_qubits(rho)
    # singular values of sqrt(rho) Y conj(sqrt(rho)) are the square roots of the
    # eigenvalues of rho Y rho* Y, without amplifying round-off near zero
    w, v = np.linalg.eigh(m)
    root = (v * np.sqrt(w.clip(0.0))) @ v.conj().T
    lam = np.linalg.svd(root @ _SIGMA_YY @ root.conj(), compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence_x(rho: DensityMatrix) -> float:
    """X-state concurrence 2 max(0, |rho_{01,10}| - sqrt(p1 p4), |rho_{00,11}| - sqrt(p2 p3))."""
    m = _require_two_qubits(rho)
    d = np.real(np.diag(m)).clip(0.0)
    a = abs(m[1, 2]) - math.sqrt(d[0] * d[3])
    b = abs(m[0, 3]) - math.sqrt(d[1] * d[2])
    return float(2.0 * max(0.0, a, b))


def concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence; closed X-state form when applicable."""
    if is_x_state(rho):
        return concurrence_x(rho)
    return concurrence_wootters(rho)


def populations_closed_form(params: ModelParams) -> tuple[float, float]:
    """(p1, p4) of the local steady state of two qubits."""
    r = rates(params)
    gp = r.gamma_plus_left + r.gamma_plus_right
    gm = r.gamma_minus_left + r.gamma_minus_right
    big = r.big_gamma
    den = (4 * params.g ** 2 + r.big_gamma_left * r.big_gamma_right) * big ** 2
    p1 = (4 * params.g ** 2 * gp ** 2 + r.gamma_plus_left * r.gamma_plus_right * big ** 2) / den
    p4 = (4 * params.g ** 2 * gm ** 2 + r.gamma_minus_left * r.gamma_minus_right * big ** 2) / den
    return p1, p4


def critical_current(params: ModelParams, form: str = "short") -> float:
    """Smallest heat current compatible with steady-state entanglement.

    ``short`` is 4 g w sqrt(p1 p4); ``long`` is the same quantity expanded
    in the rates; ``symmetric`` is the gamma_L = gamma_R, T_R = 0 form.
    """
    g, w = params.g, params.omega
    if form == "short":
        p1, p4 = populations_closed_form(params)
        return 4 * g * w * math.sqrt(p1 * p4)
    if form == "long":
        if g == 0:
            return 0.0
        r = rates(params)
        gp = r.gamma_plus_left + r.gamma_plus_right
        gm = r.gamma_minus_left + r.gamma_minus_right
        big = r.big_gamma
        chi = (4 * g * g + r.big_gamma_left * r.big_gamma_right) * big ** 2
        inner = (4 * g * g * gp ** 2 * gm ** 2
                 + big ** 2 * (r.gamma_minus_left * r.gamma_minus_right * gp ** 2
                               + r.gamma_plus_left * r.gamma_plus_right * gm ** 2)
                 + r.gamma_plus_left * r.gamma_minus_left * r.gamma_plus_right
                 * r.gamma_minus_right * big ** 4 / (4 * g * g))
        return 8 * g * g * w / chi * math.sqrt(inner)
    if form == "symmetric":
        if params.gamma_left != params.gamma_right or params.t_right != 0 or not params.bosonic_qubits:
            raise DomainError("the symmetric form needs gamma_L = gamma_R, T_R = 0, bosonic baths, qubits")
        from ..analytic_local import alpha_limits
        from ..model import coth_half
        n = params.n_left
        c1 = coth_half(w, params.t_left) + 1.0
        gam = params.gamma_left
        alpha1 = alpha_limits(params)[1]
        return (2 * n * w * alpha1 * math.sqrt(4 * g * g * (2 + n) ** 2 + gam ** 2 * c1 ** 2 * (1 + n))
                / c1 ** 2)
    raise ValueError(f"form must be 'short', 'long' or 'symmetric', got {form!r}")


@dataclass(frozen=True)
class EntropyReport:
    pi_forward: float
    pi_swapped: float
    rectification_ratio: float


def entropy_rate(params: ModelParams, j: float) -> float:
    """(1/T_R - 1/T_L) J."""
    if params.t_left <= 0 or params.t_right <= 0:
        raise DomainError("entropy production needs T_L, T_R > 0 (inverse temperature diverges)")
    return (1.0 / params.t_right - 1.0 / params.t_left) * j


def entropy_production(params: ModelParams, j_forward: float, j_swapped: float) -> EntropyReport:
    """Entropy production in both temperature orientations and R = |Pi->| / |Pi<-|."""
    pf = entropy_rate(params, j_forward)
    ps = entropy_rate(params.swapped(), j_swapped)
    ratio = abs(pf) / abs(ps) if ps != 0 else math.inf
    return EntropyReport(pf, ps, ratio)


def rectification_ratio(j_forward: float, j_swapped: float) -> float:
    return abs(j_forward) / abs(j_swapped)


@dataclass(frozen=True)
class TransportReport:
    current: float
    coherence: complex
    populations: tuple[float, float, float, float]
    concurrence: float
    critical_current: float
    entropy_rate: float | None
    rectification_ratio: float | None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coherence"] = [self.coherence.real, self.coherence.imag]
        d["populations"] = list(self.populations)
        return d


def local_current(params: ModelParams, direction: CurrentDirection = CurrentDirection.FORWARD,
                  spec: HilbertSpec | None = None) -> float:
    p = params if CurrentDirection(direction) is CurrentDirection.FORWARD else params.swapped()
    liou = build_local_liouvillian(p, spec)
    return heat_current_numeric(steady_state(liou), liou)


def transport_report(params: ModelParams) -> TransportReport:
    """Numeric local steady state of two qubits and everything derived from it."""
    if params.eps_sub != -1:
        raise DomainError("transport reports cover qubit subsystems (eps_sub = -1)")
    liou = build_local_liouvillian(params)
    rho = steady_state(liou)
    j = heat_current_numeric(rho, liou)
    pi = ratio = None
    if params.t_left > 0 and params.t_right > 0:
        pi = entropy_rate(params, j)
    if params.t_left != params.t_right:
        j_swapped = local_current(params, CurrentDirection.SWAPPED)
        if j_swapped != 0:
            ratio = rectification_ratio(j, j_swapped)
    return TransportReport(j, coherence(rho), populations(rho), concurrence(rho),
                           critical_current(params), pi, ratio)
