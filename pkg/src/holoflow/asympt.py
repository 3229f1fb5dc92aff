"""Exponential asymptotic expansions on the right half-plane.

An expansion is a finite set of terms  p * e^(-mu z - nu zbar)  with
rational mu, nu >= 0, grouped by the decay level lambda = mu + nu.  The
class stores the canonical form: duplicate (mu, nu) keys merged, zero
coefficients pruned, levels sorted ascending.  Two expansions are equal
exactly when their nonzero terms coincide, so uniqueness checks are plain
dictionary equality.

The holomorphic specialization keeps (lambda_j, c_j) pairs only; it allows
explicit zero coefficients because coefficient recovery reports a value
for every grid level, including the structurally absent ones.

Weighted-tail checks replace "-> 0 as Re z -> infinity" by a monotone
decrease below tolerance over an abscissa ladder, and boundary values by
samples on a deep vertical segment; each report records the protocol used.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .flow import (DiagonalField, SpectrumClass, SpectrumError, _coords,
                   classify_spectrum, normalize_time)
from .reports import (FAIL, INCONCLUSIVE, PASS, DecayReport, fitted_decay_rate,
                      monotone_below)
from .series import TaylorSeries

#: merged pushforward coefficients below this modulus are treated as
#: structural zeros (cancellation), not data
MERGE_PRUNE_TOL = 1e-14

DEFAULT_ABSCISSAS = (1.0, 2.0, 4.0, 8.0, 12.0)
DEFAULT_Y_SAMPLES = (0.0, 0.7, -1.3, 2.9, -4.2, 6.1)


def _exponent(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("exponents must be exact (int, Fraction, or 'p/q' string)")
    return Fraction(value)


class AntiHolomorphicTermError(ValueError):
    """An expansion contains a term with nu > 0 where none is allowed."""

    def __init__(self, level: Fraction, mu: Fraction, nu: Fraction, coeff: complex):
        self.level, self.mu, self.nu, self.coeff = level, mu, nu, coeff
        super().__init__(
            f"anti-holomorphic term at level {level}: "
            f"(mu, nu, p) = ({mu}, {nu}, {coeff}) has nu > 0"
        )


class AsymptoticExpansion:
    """Canonical finite expansion  sum p e^(-mu z - nu zbar)."""

    __slots__ = ("_terms", "_levels")

    def __init__(self, terms: Iterable = ()):
        data: dict[tuple[Fraction, Fraction], complex] = {}
        for mu, nu, p in terms:
            mu, nu = _exponent(mu), _exponent(nu)
            if mu < 0 or nu < 0:
                raise ValueError(f"exponents must be >= 0, got (mu, nu) = ({mu}, {nu})")
            p = complex(p) + data.get((mu, nu), 0j)
            if p == 0:
                data.pop((mu, nu), None)
            else:
                data[(mu, nu)] = p
        self._terms = data
        self._levels = tuple(sorted({mu + nu for mu, nu in data}))

    @property
    def levels(self) -> tuple[Fraction, ...]:
        """Levels that carry at least one nonzero term, ascending."""
        return self._levels

    def terms_at_level(self, lam) -> tuple[tuple[Fraction, Fraction, complex], ...]:
        lam = Fraction(lam)
        out = [(mu, nu, p) for (mu, nu), p in self._terms.items() if mu + nu == lam]
        return tuple(sorted(out, key=lambda t: (t[0], t[1])))

    def all_terms(self) -> tuple[tuple[Fraction, Fraction, complex], ...]:
        return tuple(sorted(((mu, nu, p) for (mu, nu), p in self._terms.items()),
                            key=lambda t: (t[0] + t[1], t[0], t[1])))

    def term_map(self) -> dict[tuple[Fraction, Fraction], complex]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AsymptoticExpansion):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"AsymptoticExpansion(levels={len(self._levels)}, terms={len(self._terms)})"

    def partial(self, zeta: complex, n: int | None = None) -> complex:
        """Partial sum through stored level index n (all levels if None)."""
        if n is None:
            n = len(self._levels) - 1
        if n >= len(self._levels):
            raise ValueError(f"level index {n} out of range ({len(self._levels)} levels)")
        if n < 0:
            return 0j
        cutoff = self._levels[n]
        zeta = complex(zeta)
        zbar = zeta.conjugate()
        total = 0j
        for (mu, nu), p in self._terms.items():
            if mu + nu <= cutoff:
                total += p * cmath.exp(-float(mu) * zeta - float(nu) * zbar)
        return total


def equals(e1: AsymptoticExpansion, e2: AsymptoticExpansion) -> bool:
    """True iff the canonical nonzero term sets are identical."""
    return e1 == e2


class HolomorphicExpansion:
    """Pairs (lambda_j, c_j) with strictly increasing rational levels.

    Zero coefficients are allowed (recovery reports one value per grid
    level); :meth:`to_expansion` prunes them into canonical form.  The
    object is callable and numpy-broadcasting, so it doubles as the
    synthesized oracle for its own sum.
    """

    __slots__ = ("_levels", "_coeffs")

    def __init__(self, pairs: Iterable = ()):
        levels, coeffs = [], []
        for lam, c in pairs:
            levels.append(_exponent(lam))
            coeffs.append(complex(c))
        if any(lam < 0 for lam in levels):
            raise ValueError("levels must be >= 0")
        if any(levels[i] >= levels[i + 1] for i in range(len(levels) - 1)):
            raise ValueError("levels must be strictly increasing")
        self._levels = tuple(levels)
        self._coeffs = tuple(coeffs)

    @property
    def levels(self) -> tuple[Fraction, ...]:
        return self._levels

    @property
    def coeffs(self) -> tuple[complex, ...]:
        return self._coeffs

    def pairs(self) -> tuple[tuple[Fraction, complex], ...]:
        return tuple(zip(self._levels, self._coeffs))

    def nonzero_pairs(self) -> tuple[tuple[Fraction, complex], ...]:
        return tuple((lam, c) for lam, c in self.pairs() if c != 0)

    def coefficient(self, lam) -> complex:
        lam = Fraction(lam)
        for level, c in self.pairs():
            if level == lam:
                return c
        return 0j

    def __len__(self) -> int:
        return len(self._levels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HolomorphicExpansion):
            return NotImplemented
        return self.nonzero_pairs() == other.nonzero_pairs()

    def __hash__(self):
        return hash(self.nonzero_pairs())

    def __repr__(self) -> str:
        return f"HolomorphicExpansion(levels={len(self._levels)})"

    def partial(self, z, n: int | None = None):
        """Sum of c_j e^(-lambda_j z) for j <= n; broadcasts over arrays."""
        if n is None:
            n = len(self._levels) - 1
        if n >= len(self._levels):
            raise ValueError(f"term index {n} out of range ({len(self._levels)} terms)")
        total = np.zeros_like(np.asarray(z, dtype=complex))
        for lam, c in list(self.pairs())[: n + 1]:
            if c != 0:
                total = total + c * np.exp(-float(lam) * np.asarray(z, dtype=complex))
        if np.ndim(z) == 0:
            return complex(total)
        return total

    def __call__(self, z):
        return self.partial(z)

    def to_expansion(self) -> AsymptoticExpansion:
        return AsymptoticExpansion((lam, Fraction(0), c) for lam, c in self.nonzero_pairs())


def pushforward(series: TaylorSeries, field: DiagonalField, c, lambda_max) -> AsymptoticExpansion:
    """Expansion of  phi(s_c(zeta))  on the half-plane, in canonical time.

    Each stored (k, m) with nonzero  a * c^k conj(c)^m  contributes the term
    (mu, nu, p) = ((alpha,k), (alpha,m), a c^k conj(c)^m)  at level mu+nu,
    for levels up to lambda_max.  Terms landing on the same (mu, nu) merge;
    merged coefficients below MERGE_PRUNE_TOL are treated as cancellation.

    The field is normalized internally (positive rates, tau = 1), so the
    expansion variable is the canonical curve time.
    """
    lam_max = _exponent(lambda_max)
    if classify_spectrum(field) is not SpectrumClass.POSITIVE_RATIOS:
        raise SpectrumError("pushforward requires a positive-ratio spectrum")
    nfield, _ = normalize_time(field)
    alphas = nfield.rates
    coords = _coords(c)
    if len(coords) != series.dim or series.dim != nfield.dim:
        raise ValueError("series, field, and base point dimensions must agree")

    merged: dict[tuple[Fraction, Fraction], complex] = {}
    for (k, m), a in series.terms().items():
        mu = sum((kj * aj for kj, aj in zip(k, alphas)), Fraction(0))
        nu = sum((mj * aj for mj, aj in zip(m, alphas)), Fraction(0))
        if mu + nu > lam_max:
            continue
        weight = a
        for cj, kj, mj in zip(coords, k, m):
            if kj:
                weight *= cj ** kj
            if mj:
                weight *= cj.conjugate() ** mj
        if weight == 0:
            continue
        merged[(mu, nu)] = merged.get((mu, nu), 0j) + weight
    kept = [(mu, nu, p) for (mu, nu), p in merged.items() if abs(p) >= MERGE_PRUNE_TOL]
    return AsymptoticExpansion(kept)


def eval_expansion(e: AsymptoticExpansion, zeta: complex, n: int | None = None) -> complex:
    """Partial sum of e through stored level index n at the point zeta."""
    return e.partial(zeta, n)


def _sup_residual(oracle, partial_fn, x: float, y_samples) -> tuple[float, complex]:
    worst, worst_z = 0.0, complex(x)
    for y in y_samples:
        z = complex(x, y)
        value = complex(oracle(z))
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ArithmeticError(f"non-finite oracle value at {z}")
        resid = abs(value - partial_fn(z))
        if resid > worst:
            worst, worst_z = resid, z
    return worst, worst_z


def tail_bound_check(
    oracle: Callable[[complex], complex],
    e: AsymptoticExpansion,
    n: int,
    *,
    abscissas: Sequence[float] = DEFAULT_ABSCISSAS,
    y_samples: Sequence[float] = DEFAULT_Y_SAMPLES,
    tol: float = 1e-8,
    epsilon: float = 1e-3,
    next_rate=None,
) -> DecayReport:
    """Check that the level-n tail decays faster than e^(-lambda_n Re z).

    The primary report weights the residual by e^(lambda_n x) and applies
    the monotone rule.  If a following level exists (or ``next_rate`` is
    given), an epsilon-form companion report weights by
    e^((lambda_{n+1} - epsilon) x).
    """
    xs = [float(x) for x in abscissas]
    if any(xs[i] >= xs[i + 1] for i in range(len(xs) - 1)):
        raise ValueError("abscissas must be strictly increasing")
    if e.levels and n >= len(e.levels):
        raise ValueError(f"level index {n} out of range")
    lam_n = float(e.levels[n]) if e.levels else 0.0

    partial_fn = (lambda z: e.partial(z, n)) if e.levels else (lambda z: 0j)
    values, witness = [], None
    try:
        for x in xs:
            resid, z = _sup_residual(oracle, partial_fn, x, y_samples)
            values.append(resid * math.exp(lam_n * x))
            witness = z
    except ArithmeticError as exc:
        return DecayReport(lam_n, tuple(xs), tuple(values), tol, INCONCLUSIVE,
                           "monotone_below_tol", note=str(exc))
    except Exception as exc:
        return DecayReport(lam_n, tuple(xs), tuple(values), tol, INCONCLUSIVE,
                           "monotone_below_tol", note=f"oracle failed: {exc}")

    verdict = PASS if monotone_below(values, tol) else FAIL
    slope = fitted_decay_rate(xs, values)

    eps_report = None
    rate2 = None
    if next_rate is not None:
        rate2 = float(Fraction(next_rate)) - epsilon
    elif e.levels and n + 1 < len(e.levels):
        rate2 = float(e.levels[n + 1]) - epsilon
    if rate2 is not None:
        # the epsilon-weighted residual decays only like e^(-epsilon x), so
        # "below tolerance" is unreachable on a short ladder; certify the
        # decreasing trend instead
        wvals = []
        for x in xs:
            resid, _ = _sup_residual(oracle, partial_fn, x, y_samples)
            wvals.append(resid * math.exp(rate2 * x))
        nonincreasing = all(wvals[i] >= wvals[i + 1] for i in range(len(wvals) - 1))
        decayed = all(v <= tol for v in wvals) or (nonincreasing and wvals[-1] < wvals[0])
        eps_report = DecayReport(rate2, tuple(xs), tuple(wvals), tol,
                                 PASS if decayed else FAIL, "monotone_decay",
                                 slope=fitted_decay_rate(xs, wvals),
                                 note=f"epsilon = {epsilon}")

    return DecayReport(lam_n, tuple(xs), tuple(values), tol, verdict,
                       "monotone_below_tol", slope=slope,
                       witness=witness if verdict == FAIL else None,
                       epsilon_form=eps_report)


def restrict_holomorphic(e: AsymptoticExpansion) -> HolomorphicExpansion:
    """Succeeds iff every term has nu = 0; otherwise raises naming the term."""
    for mu, nu, p in e.all_terms():
        if nu > 0:
            raise AntiHolomorphicTermError(mu + nu, mu, nu, p)
    pairs = sorted((mu, p) for mu, nu, p in e.all_terms())
    return HolomorphicExpansion(pairs)


def max_principle_bound(
    oracle: Callable[[complex], complex],
    M: float,
    lam,
    samples: Sequence[complex],
    *,
    x_lo: float,
    tol: float = 1e-6,
) -> DecayReport:
    """Check |oracle(z)| <= M e^(-lambda (Re z - x_lo)) (1 + tol) on the samples.

    M plays the role of the boundary sup, sampled on the segment Re z = x_lo;
    all decay is measured relative to that segment.
    """
    lam = float(Fraction(lam)) if not isinstance(lam, float) else lam
    if lam < 0:
        raise ValueError("decay rate must be >= 0")
    if M <= 0:
        raise ValueError("bound M must be positive")
    by_x: dict[float, float] = {}
    worst_ratio, witness = 0.0, None
    for z in samples:
        z = complex(z)
        if z.real < x_lo - 1e-12:
            raise ValueError(f"sample {z} lies left of the reference segment Re z = {x_lo}")
        allowed = M * math.exp(-lam * (z.real - x_lo))
        ratio = abs(complex(oracle(z))) / allowed
        by_x[z.real] = max(by_x.get(z.real, 0.0), ratio)
        if ratio > worst_ratio:
            worst_ratio, witness = ratio, z
    xs = tuple(sorted(by_x))
    values = tuple(by_x[x] for x in xs)
    verdict = PASS if worst_ratio <= 1.0 + tol else FAIL
    return DecayReport(lam, xs, values, tol, verdict, "bound_margin",
                       witness=witness if verdict == FAIL else None,
                       note=f"worst ratio {worst_ratio:.6e} vs allowed 1+tol")


def residual(oracle: Callable[[complex], complex], e: HolomorphicExpansion, n: int):
    """The callable  f_n(z) = oracle(z) - sum_{j<=n} c_j e^(-lambda_j z)."""
    if n < 0 or n >= len(e):
        raise ValueError(f"term index {n} out of range ({len(e)} terms)")
    return lambda z: oracle(z) - e.partial(z, n)


def uniform_convergence_check(
    e: HolomorphicExpansion,
    d: float,
    oracle: Callable[[complex], complex],
    samples: Sequence[complex],
    *,
    tol: float = 1e-8,
) -> DecayReport:
    """Check sup |oracle - partial_n| over the samples shrinks below tol with n.

    The summability hypothesis (sum of e^(-lambda_j d) finite) can only be
    audited at the stored truncation; the report notes the computed tail sum
    and the level density instead of assuming it.
    """
    if d <= 0:
        raise ValueError("d must be positive")
    if not samples:
        raise ValueError("need at least one sample point")
    if any(complex(z).real < d - 1e-12 for z in samples):
        raise ValueError("all samples must satisfy Re z >= d")
    sups = []
    for n in range(len(e)):
        worst = 0.0
        for z in samples:
            worst = max(worst, abs(complex(oracle(z)) - e.partial(z, n)))
        sups.append(worst)
    if not sups:
        sups = [max(abs(complex(oracle(z))) for z in samples)] if samples else [0.0]
    tail_sum = sum(math.exp(-float(lam) * d) for lam in e.levels)
    span = float(e.levels[-1]) if e.levels else 0.0
    density = len(e.levels) / span if span > 0 else 0.0
    verdict = PASS if (sups[-1] <= tol and sups[-1] <= sups[0]) else FAIL
    return DecayReport(d, tuple(float(n) for n in range(len(sups))), tuple(sups),
                       tol, verdict, "uniform_tail",
                       note=f"sum e^(-lambda_j d) = {tail_sum:.6e} over stored terms; "
                            f"{density:.2f} levels per unit")
