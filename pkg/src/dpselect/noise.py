"""Seedable samplers and analytic CDF/density/quantile functions for the
three noise distributions used by the selection mechanisms.

Exponential noise is parameterized by its rate (inverse of its scale);
Laplace and Gumbel noise by their scale. Keeping the two conventions
explicit avoids the classic rate/scale inversion bug.

Sampling is inverse-CDF from a single uniform draw per sample, so every
stream is reproducible from its seed and directly checkable against the
analytic CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import PrivacyParams

# Smallest nonzero value the uniform stream can produce; substituting it for
# an exact 0.0 draw keeps the log-based quantiles finite.
_U_FLOOR = 2.0 ** -53


@dataclass(frozen=True)
class Exponential:
    """Nonnegative noise, density rate * exp(-rate * x) for x >= 0."""

    rate: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "rate", float(self.rate))
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise ValueError(f"rate must be positive and finite, got {self.rate!r}")


@dataclass(frozen=True)
class Laplace:
    """Symmetric noise, density exp(-|x| / scale) / (2 * scale)."""

    scale: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", float(self.scale))
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ValueError(f"scale must be positive and finite, got {self.scale!r}")


@dataclass(frozen=True)
class Gumbel:
    """Max-stable noise, density exp(-x/scale - exp(-x/scale)) / scale."""

    scale: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", float(self.scale))
        if not (math.isfinite(self.scale) and self.scale > 0.0):
            raise ValueError(f"scale must be positive and finite, got {self.scale!r}")


NoiseKind = Union[Exponential, Laplace, Gumbel]

NOISE_FAMILIES = ("exponential", "laplace", "gumbel")


def from_params(family: str, params: PrivacyParams) -> NoiseKind:
    """Noise calibration the selection mechanisms use for a given budget:
    exponential noise at rate epsilon/(2*sensitivity), Laplace or Gumbel
    noise at scale 2*sensitivity/epsilon."""
    if family == "exponential":
        return Exponential(params.rate)
    if family == "laplace":
        return Laplace(params.scale)
    if family == "gumbel":
        return Gumbel(params.scale)
    raise ValueError(f"unknown noise family {family!r}; expected one of {NOISE_FAMILIES}")


class RngState:
    """Deterministic pseudo-random stream seeded by an unsigned 64-bit int.

    Same seed, same stream, bit for bit. A state is single-owner and
    mutable: concurrent tasks must each use an independently seeded state.
    """

    def __init__(self, seed: int = 0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
        self._seed = seed
        self._gen = np.random.default_rng(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        """n doubles in [0, 1); same stream as n successive uniform() calls."""
        return self._gen.random(n)

    def integers(self, n: int) -> int:
        """One unbiased integer in [0, n)."""
        return int(self._gen.integers(n))

    def permutation(self, n: int) -> list[int]:
        """Uniform random permutation of range(n), via the generator's
        Fisher-Yates shuffle."""
        return self._gen.permutation(n).tolist()


def quantile(kind: NoiseKind, u: float) -> float:
    """Inverse CDF at u, defined for 0 < u < 1."""
    if not 0.0 < u < 1.0:
        raise ValueError(f"quantile needs 0 < u < 1, got {u!r}")
    if isinstance(kind, Exponential):
        return -math.log1p(-u) / kind.rate
    if isinstance(kind, Laplace):
        if u < 0.5:
            return kind.scale * math.log(2.0 * u)
        return -kind.scale * math.log(2.0 * (1.0 - u))
    if isinstance(kind, Gumbel):
        return -kind.scale * math.log(-math.log(u))
    raise TypeError(f"unknown noise kind {kind!r}")


def sample(kind: NoiseKind, rng: RngState) -> float:
    """One draw, the inverse-CDF transform of one uniform draw."""
    u = rng.uniform()
    if u <= 0.0:
        u = _U_FLOOR
    return quantile(kind, u)


def samples(kind: NoiseKind, rng: RngState, n: int) -> np.ndarray:
    """n draws, consuming the same uniform stream as n successive
    sample() calls and applying the same inverse CDF."""
    u = np.maximum(rng.uniforms(n), _U_FLOOR)
    if isinstance(kind, Exponential):
        return -np.log1p(-u) / kind.rate
    if isinstance(kind, Laplace):
        return np.where(
            u < 0.5,
            kind.scale * np.log(2.0 * u),
            -kind.scale * np.log(2.0 * (1.0 - u)),
        )
    if isinstance(kind, Gumbel):
        return -kind.scale * np.log(-np.log(u))
    raise TypeError(f"unknown noise kind {kind!r}")


def cdf(kind: NoiseKind, x: float) -> float:
    """Exact analytic CDF; nondecreasing with limits 0 and 1."""
    if isinstance(kind, Exponential):
        if x < 0.0:
            return 0.0
        return -math.expm1(-kind.rate * x)
    if isinstance(kind, Laplace):
        if x < 0.0:
            return 0.5 * math.exp(x / kind.scale)
        return 1.0 - 0.5 * math.exp(-x / kind.scale)
    if isinstance(kind, Gumbel):
        t = -x / kind.scale
        if t >= 710.0:  # exp(t) would overflow; the CDF is 0 long before
            return 0.0
        return math.exp(-math.exp(t))
    raise TypeError(f"unknown noise kind {kind!r}")


def pdf(kind: NoiseKind, x: float) -> float:
    """Exact analytic density."""
    if isinstance(kind, Exponential):
        if x < 0.0:
            return 0.0
        return kind.rate * math.exp(-kind.rate * x)
    if isinstance(kind, Laplace):
        return math.exp(-abs(x) / kind.scale) / (2.0 * kind.scale)
    if isinstance(kind, Gumbel):
        t = x / kind.scale
        if t <= -700.0:  # exp(-t) would overflow; the density is 0 there
            return 0.0
        return math.exp(-t - math.exp(-t)) / kind.scale
    raise TypeError(f"unknown noise kind {kind!r}")
