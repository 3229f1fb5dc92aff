"""Finite mixed Taylor jets at the origin of C^N.

A jet is a finite sum  sum a_{km} z^k zbar^m  where k and m are
multi-indices of length N.  Coefficients are complex doubles; structural
identities (a term vanishing because its coefficient is exactly zero) are
kept exact by pruning zero coefficients at construction, so equality of
jets is equality of coefficient maps.  Jets are immutable: every operation
returns a new value, and sharing across threads is safe.

Text format (one line per stored term, used by the CLI scenario files)::

    k1 k2 ... kN | m1 m2 ... mN | re | im

e.g. ``1 0 | 0 1 | 1.0 | 0.0`` is the term z1 * conj(z2).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .reports import (FAIL, INCONCLUSIVE, PASS, DecayReport, clamped_exp,
                      loglog_slope, monotone_below)

Point = Sequence[complex]


class MultiIndex(tuple):
    """Immutable tuple of non-negative integer exponents."""

    def __new__(cls, entries: Iterable[int]):
        items = tuple(int(e) for e in entries)
        if len(items) == 0:
            raise ValueError("multi-index must have at least one entry")
        if any(e < 0 for e in items):
            raise ValueError(f"multi-index entries must be >= 0, got {items}")
        return super().__new__(cls, items)

    @property
    def order(self) -> int:
        return sum(self)


def _as_key(k, m, dim: int) -> tuple[MultiIndex, MultiIndex]:
    ki, mi = MultiIndex(k), MultiIndex(m)
    if len(ki) != dim or len(mi) != dim:
        raise ValueError(f"exponent length mismatch: dim={dim}, k={ki}, m={mi}")
    return ki, mi


class TaylorSeries:
    """Finite map (k, m) -> a_{km} with zero coefficients pruned."""

    __slots__ = ("_dim", "_terms")

    def __init__(self, dim: int, terms: Mapping | Iterable | None = None):
        dim = int(dim)
        if dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        self._dim = dim
        data: dict[tuple[MultiIndex, MultiIndex], complex] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for (k, m), a in items:
            key = _as_key(k, m, dim)
            a = complex(a) + data.get(key, 0j)
            if a == 0:
                data.pop(key, None)
            else:
                data[key] = a
        self._terms = data

    @classmethod
    def monomial(cls, dim: int, k, m, coeff: complex = 1.0) -> "TaylorSeries":
        return cls(dim, {(tuple(k), tuple(m)): coeff})

    @classmethod
    def zero(cls, dim: int) -> "TaylorSeries":
        return cls(dim)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def degree(self) -> int:
        """Largest |k|+|m| with nonzero coefficient (0 for the zero jet)."""
        if not self._terms:
            return 0
        return max(k.order + m.order for k, m in self._terms)

    def terms(self) -> dict[tuple[MultiIndex, MultiIndex], complex]:
        return dict(self._terms)

    def coefficient(self, k, m) -> complex:
        return self._terms.get(_as_key(k, m, self._dim), 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        return self._dim == other._dim and self._terms == other._terms

    def __hash__(self):
        return hash((self._dim, frozenset(self._terms.items())))

    def __add__(self, other: "TaylorSeries") -> "TaylorSeries":
        if self._dim != other._dim:
            raise ValueError("dimension mismatch in series addition")
        merged = dict(self._terms)
        for key, a in other._terms.items():
            merged[key] = merged.get(key, 0j) + a
        return TaylorSeries(self._dim, merged)

    def __sub__(self, other: "TaylorSeries") -> "TaylorSeries":
        return self + other.scale(-1)

    def scale(self, factor: complex) -> "TaylorSeries":
        return TaylorSeries(self._dim, {key: factor * a for key, a in self._terms.items()})

    def partial_sum(self, z: Point, order: int) -> complex:
        """Evaluate only the terms with |k|+|m| <= order."""
        z = _check_point(z, self._dim)
        total = 0j
        for (k, m), a in self._terms.items():
            if k.order + m.order <= order:
                total += a * _monomial(z, k, m)
        return total

    def __repr__(self) -> str:
        return f"TaylorSeries(dim={self._dim}, terms={len(self._terms)}, degree={self.degree})"


def _check_point(z: Point, dim: int) -> tuple[complex, ...]:
    zt = tuple(complex(v) for v in z)
    if len(zt) != dim:
        raise ValueError(f"point has dimension {len(zt)}, series has {dim}")
    return zt


def _monomial(z: tuple[complex, ...], k: MultiIndex, m: MultiIndex) -> complex:
    value = 1 + 0j
    for zj, kj, mj in zip(z, k, m):
        if kj:
            value *= zj ** kj
        if mj:
            value *= zj.conjugate() ** mj
    return value


def eval_taylor(series: TaylorSeries, z: Point) -> complex:
    """Evaluate  sum a_{km} z^k conj(z)^m  over the stored support."""
    z = _check_point(z, series.dim)
    total = 0j
    for (k, m), a in series.terms().items():
        total += a * _monomial(z, k, m)
    return total


def antiholomorphic_part(series: TaylorSeries) -> TaylorSeries:
    """Sub-series of all terms with m != 0; the input is unchanged."""
    kept = {key: a for key, a in series.terms().items() if key[1].order > 0}
    return TaylorSeries(series.dim, kept)


def holomorphic_part(series: TaylorSeries) -> TaylorSeries:
    """Sub-series of all terms with m == 0."""
    kept = {key: a for key, a in series.terms().items() if key[1].order == 0}
    return TaylorSeries(series.dim, kept)


def wirtinger_F_derivative(series: TaylorSeries, alpha: Sequence[complex]) -> TaylorSeries:
    """Exact derivative along the conjugated linear field (a1 z1, ..., aN zN).

    For the jet this is  sum_j (d/dzbar_j) phi * conj(alpha_j) * zbar_j,
    computed term by term: each zbar_j-derivative is re-multiplied by
    zbar_j, so a term a z^k zbar^m maps to (sum_j m_j conj(alpha_j)) a z^k zbar^m.
    """
    avec = tuple(complex(a) for a in alpha)
    if len(avec) != series.dim:
        raise ValueError(f"field has dimension {len(avec)}, series has {series.dim}")
    out: dict = {}
    for (k, m), a in series.terms().items():
        mult = sum(mj * aj.conjugate() for mj, aj in zip(m, avec))
        if mult != 0:
            out[(k, m)] = mult * a
    return TaylorSeries(series.dim, out)


def _direction_set(dim: int, n_directions: int, seed: int) -> list[tuple[complex, ...]]:
    # the all-ones direction first, then deterministic random phase vectors
    rng = np.random.default_rng(seed)
    dirs = [tuple(1 + 0j for _ in range(dim))]
    for _ in range(max(0, n_directions - 1)):
        phases = rng.uniform(0.0, 2.0 * math.pi, size=dim)
        dirs.append(tuple(complex(math.cos(p), math.sin(p)) for p in phases))
    return dirs


def taylor_remainder_check(
    oracle: Callable[[Point], complex],
    series: TaylorSeries,
    n: int,
    radii: Sequence[float],
    *,
    tol: float = 1e-8,
    n_directions: int = 6,
    seed: int = 0,
    slope_min: float = 0.25,
) -> DecayReport:
    """Check |oracle(z) - partial sum through degree n| = o(|z|^n) on a radius grid.

    Points are sampled with every coordinate of modulus r, so |z| = r in the
    max norm.  The ratio residual / r^n is computed in the log domain (the
    counterexample oracles underflow r^n long before the ratio is resolved).
    Pass is decided by the ``remainder_trend`` rule.
    """
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(radii[i] <= radii[i + 1] for i in range(len(radii) - 1)):
        raise ValueError("radii must be positive and strictly decreasing")
    if n < 0:
        raise ValueError("order n must be >= 0")
    # n may exceed the stored degree: the check then asserts the function has
    # no terms between the stored degree and order n (caller's claim to test)

    directions = _direction_set(series.dim, n_directions, seed)
    ratios: list[float] = []
    for r in radii:
        worst = 0.0
        for u in directions:
            z = tuple(r * uj for uj in u)
            try:
                value = complex(oracle(z))
            except Exception as exc:
                return DecayReport(float(n), tuple(radii), tuple(ratios), tol,
                                   INCONCLUSIVE, "remainder_trend",
                                   witness=z, note=f"oracle failed: {exc}")
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                return DecayReport(float(n), tuple(radii), tuple(ratios), tol,
                                   INCONCLUSIVE, "remainder_trend",
                                   witness=z, note="oracle returned non-finite value")
            resid = abs(value - series.partial_sum(z, n))
            if resid == 0.0:
                # a computed zero only certifies |residual| below the smallest
                # subnormal; use that as an honest upper bound on the ratio
                log_resid = math.log(5e-324)
            else:
                log_resid = math.log(resid)
            ratio = clamped_exp(log_resid - n * math.log(r))
            worst = max(worst, ratio)
        ratios.append(worst)

    slope = loglog_slope(radii, ratios)
    if all(v <= tol for v in ratios):
        verdict = PASS
    elif monotone_below(ratios, tol):
        verdict = PASS
    elif slope is not None and slope >= slope_min and ratios[-1] < ratios[0]:
        verdict = PASS
    else:
        verdict = FAIL
    return DecayReport(float(n), tuple(radii), tuple(ratios), tol, verdict,
                       "remainder_trend", slope=slope)


def format_series(series: TaylorSeries) -> str:
    """Serialize to the documented one-term-per-line text format."""
    lines = []
    for (k, m), a in sorted(series.terms().items()):
        kpart = " ".join(str(e) for e in k)
        mpart = " ".join(str(e) for e in m)
        lines.append(f"{kpart} | {mpart} | {a.real!r} | {a.imag!r}")
    return "\n".join(lines)


def parse_term_line(line: str) -> tuple[tuple[int, ...], tuple[int, ...], complex]:
    """Parse one ``k | m | re | im`` line."""
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 4:
        raise ValueError(f"expected 'k | m | re | im', got {line!r}")
    k = tuple(int(tok) for tok in parts[0].split())
    m = tuple(int(tok) for tok in parts[1].split())
    return k, m, complex(float(parts[2]), float(parts[3]))


def parse_series(text: str, dim: int | None = None) -> TaylorSeries:
    """Inverse of :func:`format_series`.  Blank lines and ``#`` comments skipped."""
    terms = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        k, m, a = parse_term_line(line)
        terms.append(((k, m), a))
    if not terms and dim is None:
        raise ValueError("cannot infer dimension of an empty series; pass dim")
    inferred = dim if dim is not None else len(terms[0][0][0])
    return TaylorSeries(inferred, terms)
