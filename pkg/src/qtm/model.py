"""Physical parameters, exchange statistics, thermal occupations and rates.

Natural units throughout: hbar = k_B = 1, and frequencies, temperatures and
rates are all measured in the same unit (usually the qubit frequency).
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import DomainError, SchemaError

# exp(x) overflows doubles a little above 709
_EXP_CUTOFF = 700.0


class Statistics(enum.IntEnum):
    """Exchange-statistics sign epsilon in s s^dag - epsilon s^dag s = 1."""

    BOSON = 1
    FERMION = -1

    @classmethod
    def coerce(cls, value: Any) -> "Statistics":
        if isinstance(value, cls):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise DomainError(f"statistics must be the integer +1 or -1, got {value!r}")
        return cls(value)


BOSON = Statistics.BOSON
FERMION = Statistics.FERMION


def occupation(eps: int, omega: float, temperature: float) -> float:
    """Mean excitation number 1/(exp(omega/T) - eps).

    Bose-Einstein for eps=+1, Fermi-Dirac for eps=-1.  T = 0 is exact and
    returns 0.
    """
    eps = Statistics.coerce(eps)
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if not temperature >= 0:
        raise DomainError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return 0.0
    x = omega / temperature
    if eps is Statistics.BOSON:
        if x > _EXP_CUTOFF:
            return 0.0
        return 1.0 / math.expm1(x)
    # Fermi-Dirac written with exp(-x) so it never overflows
    e = math.exp(-x)
    return e / (1.0 + e)


def coth_half(omega: float, temperature: float) -> float:
    """coth(omega / 2T) evaluated as 1 + 2 n_B; equals 1 at T = 0."""
    return 1.0 + 2.0 * occupation(BOSON, omega, temperature)


def tanh_half(omega: float, temperature: float) -> float:
    """tanh(omega / 2T) evaluated as 1 - 2 n_F; equals 1 at T = 0."""
    return 1.0 - 2.0 * occupation(FERMION, omega, temperature)


def csch(x: float) -> float:
    if x > _EXP_CUTOFF:
        return 2.0 * math.exp(-x)
    return 1.0 / math.sinh(x)


_FIELDS = ("omega", "g", "gamma_left", "gamma_right", "t_left", "t_right",
           "eps_left", "eps_right", "eps_sub")


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the resonant two-subsystem (or chain) thermal machine.

    ``eps_left``/``eps_right`` are the statistics of the bath ancillas and
    ``eps_sub`` the statistics shared by the central subsystems.
    """

    omega: float = 1.0
    g: float = 0.01
    gamma_left: float = 0.01
    gamma_right: float = 0.02
    t_left: float = 0.6
    t_right: float = 0.4
    eps_left: Statistics = BOSON
    eps_right: Statistics = BOSON
    eps_sub: Statistics = FERMION

    def __post_init__(self):
        for name in ("eps_left", "eps_right", "eps_sub"):
            object.__setattr__(self, name, Statistics.coerce(getattr(self, name)))
        for name in ("omega", "g", "gamma_left", "gamma_right", "t_left", "t_right"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if self.g < 0:
            raise DomainError(f"g must be non-negative, got {self.g}")
        if not (self.gamma_left > 0 and self.gamma_right > 0):
            raise DomainError("bath couplings gamma_left and gamma_right must be positive")
        if self.t_left < 0 or self.t_right < 0:
            raise DomainError("temperatures must be non-negative")

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def swapped(self) -> "ModelParams":
        """Exchange bath temperatures only; couplings and statistics stay on their side."""
        return self.replace(t_left=self.t_right, t_right=self.t_left)

    @property
    def n_left(self) -> float:
        return occupation(self.eps_left, self.omega, self.t_left)

    @property
    def n_right(self) -> float:
        return occupation(self.eps_right, self.omega, self.t_right)

    @property
    def bosonic_qubits(self) -> bool:
        """True for bosonic baths with qubit subsystems."""
        return (self.eps_left is BOSON and self.eps_right is BOSON
                and self.eps_sub is FERMION)

    def to_dict(self) -> dict[str, float | int]:
        out: dict[str, float | int] = {}
        for name in _FIELDS:
            value = getattr(self, name)
            out[name] = int(value) if name.startswith("eps") else value
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ModelParams":
        if not isinstance(data, Mapping):
            raise SchemaError("parameters must be a JSON object")
        problems = []
        missing = [k for k in _FIELDS if k not in data]
        extra = sorted(k for k in data if k not in _FIELDS)
        if missing:
            problems.append("missing field(s): " + ", ".join(missing))
        if extra:
            problems.append("unknown field(s): " + ", ".join(extra))
        for name in _FIELDS:
            if name not in data:
                continue
            value = data[name]
            if name.startswith("eps"):
                if isinstance(value, bool) or value not in (1, -1) or not isinstance(value, int):
                    problems.append(f"{name}: expected integer +1 or -1, got {value!r}")
            elif isinstance(value, bool) or not isinstance(value, (int, float)):
                problems.append(f"{name}: expected a number, got {value!r}")
        if problems:
            raise SchemaError("; ".join(problems))
        try:
            return cls(**{k: data[k] for k in _FIELDS})
        except DomainError as exc:
            raise SchemaError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class RateSet:
    """Dissipation rates gamma^+ (absorption) and gamma^- (emission) per bath."""

    gamma_plus_left: float
    gamma_minus_left: float
    gamma_plus_right: float
    gamma_minus_right: float

    @property
    def big_gamma_left(self) -> float:
        return self.gamma_minus_left + self.gamma_plus_left

    @property
    def big_gamma_right(self) -> float:
        return self.gamma_minus_right + self.gamma_plus_right

    @property
    def big_gamma(self) -> float:
        return self.big_gamma_left + self.big_gamma_right


def rates(params: ModelParams, omega: float | None = None) -> RateSet:
    """Detailed-balance rates gamma^+ = gamma n and gamma^- = gamma (1 + eps n).

    ``omega`` overrides the transition frequency (used for the eigenmodes of
    the global master equation); it defaults to ``params.omega``.
    """
    w = params.omega if omega is None else omega
    n_l = occupation(params.eps_left, w, params.t_left)
    n_r = occupation(params.eps_right, w, params.t_right)
    return RateSet(
        gamma_plus_left=params.gamma_left * n_l,
        gamma_minus_left=params.gamma_left * (1.0 + params.eps_left * n_l),
        gamma_plus_right=params.gamma_right * n_r,
        gamma_minus_right=params.gamma_right * (1.0 + params.eps_right * n_r),
    )
