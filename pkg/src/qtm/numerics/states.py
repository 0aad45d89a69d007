"""Validated density matrices with a plain JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, SchemaError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10


def matrix_to_pairs(matrix: np.ndarray) -> list[list[float]]:
    """Row-major list of [re, im] pairs."""
    flat = np.asarray(matrix, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def pairs_to_matrix(pairs, rows: int, cols: int) -> np.ndarray:
    try:
        arr = np.asarray(pairs, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"entries must be [re, im] number pairs: {exc}") from exc
    if arr.shape != (rows * cols, 2):
        raise SchemaError(f"expected {rows * cols} [re, im] pairs, got shape {arr.shape}")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(rows, cols)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"density matrix must be square, got shape {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL * scale:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise DomainError(f"density matrix trace is {np.trace(m).real!r}, not 1")
        if np.linalg.eigvalsh(m).min() < -POSITIVITY_TOL:
            raise DomainError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def vec(self) -> np.ndarray:
        """Column-stacked vectorization."""
        return self.matrix.reshape(-1, order="F")

    def expect(self, operator) -> complex:
        """tr(rho A) for a dense or sparse operator A."""
        a = operator.toarray() if hasattr(operator, "toarray") else np.asarray(operator)
        return complex(np.sum(self.matrix.T * a))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def trace_distance(self, other: "DensityMatrix | np.ndarray") -> float:
        b = other.matrix if isinstance(other, DensityMatrix) else np.asarray(other)
        return 0.5 * float(np.abs(np.linalg.eigvalsh(self.matrix - b)).sum())

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "entries": matrix_to_pairs(self.matrix)})

    @classmethod
    def from_json(cls, text: str) -> "DensityMatrix":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict) or set(data) != {"dim", "entries"}:
            raise SchemaError("density matrix JSON needs exactly the keys 'dim' and 'entries'")
        dim = data["dim"]
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise SchemaError(f"dim must be a positive integer, got {dim!r}")
        return cls(pairs_to_matrix(data["entries"], dim, dim))
