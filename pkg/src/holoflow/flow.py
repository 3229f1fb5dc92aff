"""Diagonal linear fields z' = A z, their curves, spectrum, and level grid.

Rates are exact rationals and the shared time unit tau has modulus one, so
the eigenvalues are alpha_j = r_j * tau.  Keeping the rates rational makes
the decay-level grid {lambda_j} exact: level coincidences are set equality
on fractions, never a floating point tie-break.

Curve convention: the canonical curve through c is
``s_c(zeta) = (c_1 e^(-alpha_1 zeta), ..., c_N e^(-alpha_N zeta))``,
so with positive rates and unit time the curves contract into the
polydisk as Re zeta -> +infinity, and the right half-plane is the common
domain for all expansions.  Fields written with the opposite sign are the
same curves under zeta -> -zeta; :func:`normalize_time` records the
rescale factor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

import numpy as np

_TAU_TOL = 1e-12


class SpectrumError(ValueError):
    """Raised when an operation needs a spectrum class the field lacks."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("rates must be exact (int, Fraction, or 'p/q' string), not float")
    return Fraction(value)


@dataclass(frozen=True)
class DiagonalField:
    """Diagonal field with rational rates and a unit-modulus time factor."""

    rates: tuple
    time_unit: complex = 1 + 0j

    def __post_init__(self):
        rates = tuple(_as_fraction(r) for r in self.rates)
        if len(rates) == 0:
            raise ValueError("field needs at least one rate")
        if any(r == 0 for r in rates):
            raise ValueError("all rates must be nonzero")
        tau = complex(self.time_unit)
        if abs(abs(tau) - 1.0) > _TAU_TOL:
            raise ValueError(f"time unit must have modulus 1, got |tau| = {abs(tau)}")
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "time_unit", tau)

    @property
    def dim(self) -> int:
        return len(self.rates)

    @property
    def eigenvalues(self) -> tuple[complex, ...]:
        return tuple(complex(r) * self.time_unit for r in self.rates)

    def is_canonical(self) -> bool:
        return self.time_unit == 1 and all(r > 0 for r in self.rates)


class SpectrumClass(Enum):
    POSITIVE_RATIOS = "positive_ratios"
    COMMON_HALF_PLANE = "common_half_plane"
    MIXED = "mixed"


@dataclass(frozen=True)
class BasePoint:
    """Initial point of a curve, strictly inside the unit polydisk."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(complex(c) for c in self.coords)
        if len(coords) == 0:
            raise ValueError("base point needs at least one coordinate")
        if any(abs(c) >= 1.0 for c in coords):
            raise ValueError("base point coordinates must satisfy |c_j| < 1")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)


def _coords(c) -> tuple[complex, ...]:
    if isinstance(c, BasePoint):
        return c.coords
    return tuple(complex(v) for v in c)


def classify_spectrum(field, theta_points: int = 10_000) -> SpectrumClass:
    """Classify a field (or a raw eigenvalue sequence) by its ratio structure.

    POSITIVE_RATIOS: every pairwise ratio alpha_j/alpha_k is a positive real.
    COMMON_HALF_PLANE: some unit w makes every Re(alpha_j * w) < 0, found by
    scanning w = e^(i theta) over a uniform grid.
    MIXED: neither.
    """
    if isinstance(field, DiagonalField):
        eigs = field.eigenvalues
    else:
        eigs = tuple(complex(a) for a in field)
    if any(a == 0 for a in eigs):
        raise ValueError("eigenvalues must be nonzero")

    base = eigs[0]
    ratios = [a / base for a in eigs]
    if all(abs(r.imag) <= 1e-12 * abs(r) and r.real > 0 for r in ratios):
        return SpectrumClass.POSITIVE_RATIOS

    thetas = np.linspace(0.0, 2.0 * math.pi, theta_points, endpoint=False)
    w = np.exp(1j * thetas)
    re_parts = np.stack([np.real(a * w) for a in eigs])
    if bool(np.any(np.all(re_parts < 0.0, axis=0))):
        return SpectrumClass.COMMON_HALF_PLANE
    return SpectrumClass.MIXED


def integral_curve(field: DiagonalField, c, zeta: complex) -> tuple[complex, ...]:
    """The curve s_c(zeta) with components c_j e^(-alpha_j zeta)."""
    coords = _coords(c)
    if len(coords) != field.dim:
        raise ValueError(f"base point has dimension {len(coords)}, field has {field.dim}")
    return tuple(cj * cmath.exp(-aj * zeta) for cj, aj in zip(coords, field.eigenvalues))


@dataclass(frozen=True)
class LevelGrid:
    """All decay levels (alpha,k)+(alpha,m) up to a cutoff, exactly enumerated."""

    rates: tuple
    lambda_max: Fraction
    levels: tuple

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(Fraction(r) for r in self.rates))
        object.__setattr__(self, "lambda_max", Fraction(self.lambda_max))
        object.__setattr__(self, "levels", tuple(Fraction(v) for v in self.levels))

    def __len__(self) -> int:
        return len(self.levels)

    def __contains__(self, value) -> bool:
        return Fraction(value) in set(self.levels)

    def index(self, value) -> int:
        return self.levels.index(Fraction(value))

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.levels)


def level_grid(field: DiagonalField, lambda_max) -> LevelGrid:
    """Enumerate every value  sum_j n_j |r_j| <= lambda_max  (n_j >= 0 integers).

    Because (alpha,k)+(alpha,m) depends only on k+m, enumerating single
    multi-indices n is exhaustive.  Requires a positive-ratio spectrum.
    """
    lam_max = _as_fraction(lambda_max)
    if lam_max <= 0:
        raise ValueError("lambda_max must be > 0")
    if classify_spectrum(field) is not SpectrumClass.POSITIVE_RATIOS:
        raise SpectrumError("level grid requires a positive-ratio spectrum "
                            "(mixed spectra have no well-ordered levels)")
    rates = tuple(abs(r) for r in field.rates)
    found: set[Fraction] = set()

    def recurse(j: int, acc: Fraction) -> None:
        if j == len(rates):
            found.add(acc)
            return
        value = acc
        while value <= lam_max:
            recurse(j + 1, value)
            value += rates[j]

    recurse(0, Fraction(0))
    return LevelGrid(rates=rates, lambda_max=lam_max, levels=tuple(sorted(found)))


class NormalizedField(NamedTuple):
    field: DiagonalField
    factor: complex


def normalize_time(field: DiagonalField) -> NormalizedField:
    """Rescale time so tau = 1 and all rates are positive.

    Returns the canonical field and the factor sigma with
    old_alpha_j = new_rate_j * sigma, i.e. the canonical curve parameter is
    zeta' = sigma * zeta.
    """
    if classify_spectrum(field) is not SpectrumClass.POSITIVE_RATIOS:
        raise SpectrumError("cannot normalize a field without positive ratios")
    sign = 1 if field.rates[0] > 0 else -1
    factor = sign * field.time_unit
    new_field = DiagonalField(tuple(sign * r for r in field.rates), 1 + 0j)
    return NormalizedField(new_field, factor)
