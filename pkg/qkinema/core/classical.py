"""
Finite classical phase space Ω, distributions P(Ω) and the push-forward of
point dynamics.

A point map f: Ω → Ω may be as nonlinear as it likes; its lift to P(Ω) moves
probability mass and is always affine.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, Tuple, Union

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .kinematics import SeedLike, get_generator


MASS_TOL = 1e-12


@dataclass(frozen=True)
class PhaseSpace:
    """Ω = {0, ..., N−1}."""

    size: int

    def __post_init__(self):
        if int(self.size) < 1:
            raise ValidationError(f"phase space needs at least one point, got {self.size}")
        object.__setattr__(self, "size", int(self.size))

    def check_point(self, omega: int) -> int:
        if not 0 <= int(omega) < self.size:
            raise ValidationError(f"point {omega} outside phase space of size {self.size}")
        return int(omega)


@dataclass(frozen=True, eq=False)
class ClassicalDistribution:
    """A point of P(Ω): non-negative probabilities summing to 1 within 1e-12."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64).reshape(-1)
        if probs.size == 0 or not np.all(np.isfinite(probs)):
            raise ValidationError("distribution needs finite probabilities")
        if np.any(probs < 0):
            raise ValidationError("distribution has negative entries")
        if abs(probs.sum() - 1.0) > MASS_TOL:
            raise ValidationError(f"distribution has total mass {probs.sum()!r}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def space(self) -> PhaseSpace:
        return PhaseSpace(self.probs.size)

    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.probs))


@dataclass(frozen=True, eq=False)
class PointMap:
    """f: Ω → Ω as a lookup table, total on 0..N−1."""

    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64).reshape(-1)
        if table.size == 0:
            raise ValidationError("point map needs at least one entry")
        if np.any(table < 0) or np.any(table >= table.size):
            raise ValidationError(f"point map sends points outside 0..{table.size - 1}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_callable(cls, space: PhaseSpace, fn: Callable[[int], int]) -> "PointMap":
        return cls([fn(omega) for omega in range(space.size)])

    @property
    def space(self) -> PhaseSpace:
        return PhaseSpace(self.table.size)

    def __call__(self, omega: int) -> int:
        return int(self.table[self.space.check_point(omega)])


def as_space(space: Union[PhaseSpace, int]) -> PhaseSpace:
    return space if isinstance(space, PhaseSpace) else PhaseSpace(space)


def square_mod_map(space: Union[PhaseSpace, int]) -> PointMap:
    """ω ↦ ω² mod N."""
    space = as_space(space)
    return PointMap.from_callable(space, lambda omega: (omega * omega) % space.size)


def dirac(space: Union[PhaseSpace, int], omega: int) -> ClassicalDistribution:
    """δ_ω, an extremal point of P(Ω)."""
    space = as_space(space)
    probs = np.zeros(space.size)
    probs[space.check_point(omega)] = 1.0
    return ClassicalDistribution(probs)


def is_extremal(pi: ClassicalDistribution) -> bool:
    return len(pi.support()) == 1


def mix_distributions(parts: Iterable[Tuple[float, ClassicalDistribution]]) -> ClassicalDistribution:
    parts = list(parts)
    if not parts:
        raise ValidationError("nothing to mix")
    sizes = {pi.probs.size for _, pi in parts}
    if len(sizes) != 1:
        raise DimensionMismatchError(f"cannot mix distributions on spaces of sizes {sorted(sizes)}")
    weights = np.array([float(q) for q, _ in parts])
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > MASS_TOL:
        raise ValidationError(f"mixing weights must be ≥ 0 and sum to 1, got {weights.tolist()}")
    return ClassicalDistribution(weights @ np.stack([pi.probs for _, pi in parts]))


def push_forward(f: PointMap, pi: ClassicalDistribution) -> ClassicalDistribution:
    """Λ[Σ_k π_k δ_ω_k] = Σ_k π_k δ_f(ω_k): mass at ω accumulates into f(ω)."""
    if f.table.size != pi.probs.size:
        raise DimensionMismatchError(
            f"point map on {f.table.size} points, distribution on {pi.probs.size}"
        )
    return ClassicalDistribution(np.bincount(f.table, weights=pi.probs, minlength=pi.probs.size))


def random_distribution(space: Union[PhaseSpace, int], seed: SeedLike = None) -> ClassicalDistribution:
    space = as_space(space)
    rng = get_generator(seed)
    probs = rng.dirichlet(np.ones(space.size))
    return ClassicalDistribution(probs / probs.sum())


def random_point_map(space: Union[PhaseSpace, int], seed: SeedLike = None) -> PointMap:
    """Uniformly random table; generically many-to-one and far from any linear rule."""
    space = as_space(space)
    rng = get_generator(seed)
    return PointMap(rng.integers(0, space.size, size=space.size))
