"""Null-space extraction for Lindblad generators."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg as la

from ..errors import ConvergenceError, DegenerateSteadyStateError, DimensionCapError
from .hilbert import dim_cap
from .liouvillian import Liouvillian, unvec
from .states import DensityMatrix

NULL_RTOL = 1e-9
RESIDUAL_RTOL = 1e-10
GRADED_PASSES = 4
GRADED_FLOOR = 1e-280


def _blocks(liou: Liouvillian) -> list[np.ndarray] | None:
    """Index sets of the charge sectors, or None if the generator mixes them."""
    if liou.charges is None:
        return None
    coo = liou.matrix.tocoo()
    q = liou.charges
    if np.any(q[coo.row] != q[coo.col]):
        return None
    return [np.flatnonzero(q == c) for c in np.unique(q)]


def _refine(block: np.ndarray, x: np.ndarray, sigma_max: float) -> np.ndarray:
    """One inverse-iteration step towards the null vector."""
    shift = 1e-13 * sigma_max
    try:
        y = la.solve(block - shift * np.eye(block.shape[0]), x)
    except (la.LinAlgError, ValueError):
        return x
    if not np.all(np.isfinite(y)):
        return x
    y /= np.linalg.norm(y)
    res_old = np.linalg.norm(block @ x)
    res_new = np.linalg.norm(block @ y)
    return y if res_new <= res_old else x


def _graded(block: np.ndarray, x: np.ndarray, rows: np.ndarray, cols: np.ndarray,
            dim: int) -> np.ndarray:
    """Re-solve with every unknown scaled by its positivity bound sqrt(rho_ii rho_jj).

    A plain null vector is accurate only relative to its largest entry, so
    exponentially small populations (cold baths) come out as round-off.
    Scaling rows and columns by the bound from the previous iterate makes
    each entry O(1); a few passes give every entry relative accuracy.
    """
    diag_pos = {}
    for k, (i, j) in enumerate(zip(rows, cols)):
        if i == j:
            diag_pos[i] = k
    if len(diag_pos) != dim:
        return x
    diag_idx = np.array([diag_pos[i] for i in range(dim)])
    for _ in range(GRADED_PASSES):
        p = np.abs(x[diag_idx].real)
        p /= p.max()
        w = np.sqrt(np.maximum(p[rows] * p[cols], GRADED_FLOOR))
        if w.min() > 1e-4:
            break
        scaled = block * (w[None, :] / w[:, None])
        # pin the largest population and drop its (trace-dependent) row
        ref = diag_idx[np.argmax(p)]
        keep = np.arange(block.shape[0]) != ref
        try:
            with warnings.catch_warnings():
                # an ill-conditioned scaled system is no improvement: keep x
                warnings.simplefilter("error", la.LinAlgWarning)
                sub = la.solve(scaled[np.ix_(keep, keep)], -scaled[keep, ref])
        except (la.LinAlgError, la.LinAlgWarning, ValueError):
            return x
        y = np.empty_like(x)
        y[ref] = 1.0
        y[keep] = sub
        y = w * y
        if not np.all(np.isfinite(y)):
            return x
        y /= np.linalg.norm(y)
        change = np.max(np.abs(y * np.vdot(y, x) / abs(np.vdot(y, x)) - x) / w)
        x = y
        if change < 1e-12:
            break
    return x


def steady_state(liou: Liouvillian) -> DensityMatrix:
    """Unique fixed point of ``liou`` as a density matrix.

    The right-singular vector of the smallest singular value is taken from
    the zero-charge sector (where populations live); all other sectors only
    contribute their singular values to the uniqueness count.  Raises
    DegenerateSteadyStateError if more than one singular value lies below
    1e-9 of the largest.
    """
    cap = dim_cap()
    if liou.dim_sq > cap:
        raise DimensionCapError(f"vectorized dimension {liou.dim_sq} exceeds the cap {cap}")
    blocks = _blocks(liou)
    if blocks is None:
        blocks = [np.arange(liou.dim_sq)]
        zero = blocks[0]
    else:
        zero = np.flatnonzero(liou.charges == 0)

    csr = liou.matrix.tocsr()
    singular = []
    null_vector = None
    zero_sigma = None
    for idx in blocks:
        block = csr[idx][:, idx].toarray()
        if idx is zero or np.array_equal(idx, zero):
            _, s, vh = la.svd(block)
            null_vector = vh[-1].conj()
            zero_sigma = s
            zero_block = block
        else:
            s = la.svd(block, compute_uv=False)
        singular.append(s)
    all_s = np.concatenate(singular)
    sigma_max = float(all_s.max())
    nullity = int(np.sum(all_s < NULL_RTOL * sigma_max))
    if nullity > 1:
        raise DegenerateSteadyStateError(nullity)
    if nullity == 0:
        raise ConvergenceError(
            f"no singular value below {NULL_RTOL:g} sigma_max (smallest {zero_sigma[-1]:.3e}); "
            "the generator has no steady state")

    x = _refine(zero_block, null_vector, sigma_max)
    rows, cols = zero % liou.dim, zero // liou.dim
    x = _graded(zero_block, x, rows, cols, liou.dim)
    full = np.zeros(liou.dim_sq, dtype=complex)
    full[zero] = x
    rho = unvec(full, liou.dim)
    rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)

    residual = np.linalg.norm(csr @ rho.reshape(-1, order="F")) / np.linalg.norm(rho)
    if residual > RESIDUAL_RTOL * sigma_max:
        raise ConvergenceError(f"steady-state residual {residual:.3e} above tolerance")
    return DensityMatrix(rho)
