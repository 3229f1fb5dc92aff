"""Executable counterexamples: smooth, curve-holomorphic, never holomorphic.

Two constructions on the bidisk, both vanishing to infinite order on
{z1 z2 = 0}, plus the rigid-rotation example conj(z1) conj(z2):

* resonant pair (1, -t):  phi = exp(-1 / (|z1|^t |z2|)), constant along
  every curve of the field (the product |z1|^t |z2| is a first integral);
* spiral pair (alpha, t conj(alpha)) with non-real ratio:
  phi = exp(xi^b) for xi = gamma log|z1| + (conj(gamma)/t) log|z2| with
  gamma = 1/(2 Re alpha) - i/(2 Im alpha).  Along a curve xi moves by
  exactly the curve time (the time identity), so the restriction is an
  entire function of the parameter.

The branch data (b, k) for xi^b is found by search: xi ranges over the
cone spanned by -gamma and -conj(gamma) (an angle < pi in the *right*
half-plane: Re(r gamma + s conj(gamma)) = (r+s)/(2 Re alpha) > 0 for
r, s < 0), and we need b(arg xi + 2 pi k) to land where the cosine is
negative, making Re(xi^b) < 0 and |phi| decay faster than any power of
|z_j|.  Among admissible branches the search keeps the smallest shift k
and then the largest containment margin: pushing k up lets b shrink
toward 1, and a decay exponent c u^b with b near 1 cannot outpace u^n at
any radius representable in double precision, so those branches would be
uncheckable even though they exist mathematically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .flow import BasePoint, DiagonalField, integral_curve
from .forelli import (HYPOTHESIS_VIOLATED, ForelliConfig, JetOracle,
                      f_holomorphy_check, forelli_pipeline)
from .sampling import polydisk_points
from .series import TaylorSeries, antiholomorphic_part, taylor_remainder_check
from .wirtinger import dbar_fd, dbar_fd_component

TWO_PI = 2.0 * math.pi


class BranchSearchError(RuntimeError):
    """No admissible branch exponent in the search range."""


@dataclass(frozen=True)
class ResonantExample:
    """phi = exp(-1/(|z1|^t |z2|)), extended by 0 across {z1 z2 = 0}."""

    t: float = 1.0

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("t must be positive")


def phi_resonant(ex: ResonantExample, z) -> float:
    z1, z2 = complex(z[0]), complex(z[1])
    if z1 == 0 or z2 == 0:
        return 0.0
    denom = abs(z1) ** ex.t * abs(z2)
    if denom == 0.0:
        return 0.0
    try:
        return math.exp(-1.0 / denom)
    except OverflowError:
        return 0.0


def sector_angles(alpha: complex) -> tuple[float, float]:
    """Argument range of the cone {r gamma + s conj(gamma): r, s < 0}."""
    alpha = complex(alpha)
    if not (alpha.real < 0 and alpha.imag > 0):
        raise ValueError("need Re alpha < 0 and Im alpha > 0")
    gamma = 1.0 / (2.0 * alpha.real) - 1j / (2.0 * alpha.imag)
    th1 = math.atan2((-gamma).imag, (-gamma).real)
    th2 = math.atan2((-gamma.conjugate()).imag, (-gamma.conjugate()).real)
    lo, hi = min(th1, th2), max(th1, th2)
    if hi - lo >= math.pi - 1e-12:
        raise BranchSearchError(f"sector spans {hi - lo:.6f} rad, not < pi")
    return lo, hi


def choose_branch_exponent(alpha: complex, t: float, *, b_step: float = 1e-3,
                           b_max: float = 4.0, k_max: int = 3) -> tuple[float, int]:
    """Search (b, k) with b (arg-range + 2 pi k) inside a cosine-negative band.

    Scans k = 0..k_max and b on a 1e-3 grid in (1, b_max]; returns for the
    smallest admissible k the b maximizing the containment margin.  The
    parameter t does not move the cone (it only rescales one generator's
    coefficient); it is validated for interface symmetry.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    lo0, hi0 = sector_angles(alpha)
    n_steps = int(round((b_max - 1.0) / b_step))
    for k in range(k_max + 1):
        lo_k, hi_k = lo0 + TWO_PI * k, hi0 + TWO_PI * k
        best = None
        for i in range(1, n_steps + 1):
            b = 1.0 + i * b_step
            lo, hi = b * lo_k, b * hi_k
            if hi - lo >= math.pi:
                break
            j = round(((lo + hi) / 2.0 - math.pi) / TWO_PI)
            margin = min(lo - (0.5 * math.pi + TWO_PI * j),
                         (1.5 * math.pi + TWO_PI * j) - hi)
            if margin > 0 and (best is None or margin > best[0]):
                best = (margin, b)
        if best is not None:
            return best[1], k
    raise BranchSearchError(
        f"no (b, k) with b <= {b_max}, k <= {k_max} for sector [{lo0:.6f}, {hi0:.6f}]")


@dataclass(frozen=True)
class SpiralExample:
    """phi = exp(xi^b) for the field (alpha, t conj(alpha)) with branch data."""

    alpha: complex
    t: float
    b: float
    branch_offset: int

    def __post_init__(self):
        alpha = complex(self.alpha)
        if not (alpha.real < 0 and alpha.imag > 0):
            raise ValueError("need Re alpha < 0 and Im alpha > 0")
        if not self.t > 0:
            raise ValueError("t must be positive")
        if not self.b > 1:
            raise ValueError("branch exponent must exceed 1")
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def create(cls, alpha: complex, t: float = 1.0) -> "SpiralExample":
        b, k = choose_branch_exponent(alpha, t)
        ex = cls(alpha=complex(alpha), t=float(t), b=b, branch_offset=k)
        ident = verify_time_identity(ex, [complex(1, 0), complex(0.3, -2.1), complex(-1.7, 0.9)])
        if not ident.passed:
            raise ValueError(f"time identity failed at {ident.witness}: {ident.max_error}")
        rng = np.random.default_rng(20240901)
        for xi in sector_samples(ex, rng, 1000):
            if branch_power(ex, xi).real >= 0:
                raise ValueError(f"Re(xi^b) >= 0 at sector point {xi}")
        return ex

    @property
    def gamma(self) -> complex:
        return 1.0 / (2.0 * self.alpha.real) - 1j / (2.0 * self.alpha.imag)

    @property
    def beta(self) -> complex:
        return self.t * self.alpha.conjugate()


def branch_power(ex: SpiralExample, xi: complex) -> complex:
    """xi^b on the branch  log xi = log|xi| + i (Arg xi + 2 pi k)."""
    xi = complex(xi)
    if xi == 0:
        raise ValueError("branch power undefined at 0")
    ang = math.atan2(xi.imag, xi.real) + TWO_PI * ex.branch_offset
    return cmath.exp(ex.b * complex(math.log(abs(xi)), ang))


def phi_spiral(ex: SpiralExample, z) -> complex:
    z1, z2 = complex(z[0]), complex(z[1])
    if z1 == 0 or z2 == 0:
        return 0j
    xi = ex.gamma * math.log(abs(z1)) + (ex.gamma.conjugate() / ex.t) * math.log(abs(z2))
    w = branch_power(ex, xi)
    if w.real > 700.0:
        raise ValueError(f"exp overflow at z = {(z1, z2)}: point outside the decay regime")
    return cmath.exp(w)


def spiral_curve(ex: SpiralExample, C, zeta: complex) -> tuple[complex, complex]:
    """Curve (C1 e^(alpha zeta), C2 e^(beta zeta)) of the non-real-ratio field."""
    c1, c2 = complex(C[0]), complex(C[1])
    return c1 * cmath.exp(ex.alpha * zeta), c2 * cmath.exp(ex.beta * zeta)


def sector_samples(ex: SpiralExample, rng: np.random.Generator, n: int) -> list[complex]:
    """Random points of the cone, log-uniform over several magnitude decades."""
    rs = -np.exp(rng.uniform(-3.0, 3.0, size=n))
    ss = -np.exp(rng.uniform(-3.0, 3.0, size=n))
    g = ex.gamma
    return [complex(r * g + s * g.conjugate()) for r, s in zip(rs, ss)]


@dataclass(frozen=True)
class IdentityReport:
    passed: bool
    max_error: float
    witness: complex | None = None


def verify_time_identity(ex: SpiralExample, zetas, tol: float = 1e-12) -> IdentityReport:
    """Check  gamma Re(alpha zeta) + (conj(gamma)/t) Re(beta zeta) = zeta  pointwise."""
    worst, witness = 0.0, None
    g = ex.gamma
    for zeta in zetas:
        zeta = complex(zeta)
        lhs = g * (ex.alpha * zeta).real + (g.conjugate() / ex.t) * (ex.beta * zeta).real
        err = abs(lhs - zeta)
        if err > worst:
            worst, witness = err, zeta
    return IdentityReport(worst < tol, worst, witness if worst >= tol else None)


def _zero_jet_radii(log_ratio, n: int, tol: float, v_cap: float = 640.0,
                    points: int = 5) -> list[float]:
    """Radii exp(-v) on which  residual / r^n  visibly drops below tol.

    log_ratio(v) is the log of the ratio along the diagonal direction at
    radius e^(-v); beyond its hump it is strictly decreasing, so bisection
    finds where it crosses +5 (grid start) and log(tol) - 5 (grid end).
    """
    target_end = math.log(tol) - 5.0

    def bisect(target: float, v_lo: float, v_hi: float) -> float:
        for _ in range(80):
            mid = 0.5 * (v_lo + v_hi)
            if log_ratio(mid) > target:
                v_lo = mid
            else:
                v_hi = mid
        return v_hi

    # walk out to find the decreasing regime and a bracket for the end target
    v_hump = 1e-3
    step = 0.25
    v = step
    best = log_ratio(v)
    while v < v_cap and log_ratio(v + step) >= best:
        v += step
        best = log_ratio(v)
        step *= 1.3
    v_hump = v
    v_end_hi = v_hump
    while v_end_hi < v_cap and log_ratio(v_end_hi) > target_end:
        v_end_hi = min(v_cap, v_end_hi * 1.5 + 0.5)
    if log_ratio(v_end_hi) > target_end:
        raise ValueError(
            f"order-{n} remainder cannot be certified within double range")
    v_end = bisect(target_end, v_hump, v_end_hi)
    if log_ratio(v_hump) <= 5.0:
        v_start = v_hump
    else:
        v_start = bisect(5.0, v_hump, v_end)
    v_end = max(v_end, 1.2 * v_start + 0.5)  # keep the radius grid non-degenerate
    vs = np.linspace(v_start, v_end, points)
    return [math.exp(-v) for v in vs]


@dataclass(frozen=True)
class SuiteReport:
    """Aggregated sub-check outcomes for one counterexample."""

    which: str
    params: dict
    checks: dict
    passed: bool
    decay_reports: dict

    def to_json_dict(self) -> dict:
        return {
            "which": self.which,
            "params": {k: str(v) for k, v in self.params.items()},
            "passed": self.passed,
            "checks": self.checks,
        }


def _curve_holomorphy(oracle, curve_fn, samples, step: float = 1e-5) -> tuple[float, object]:
    worst, witness = 0.0, None
    for C, zeta in samples:
        def along(w: complex) -> complex:
            return complex(oracle(curve_fn(C, w)))
        value = along(zeta)
        resid = abs(dbar_fd(along, zeta, step)) / (1.0 + abs(value))
        if resid > worst:
            worst, witness = resid, (C, zeta)
    return worst, witness


def _wirtinger_witness(oracle, point, step: float = 1e-5) -> float:
    return max(abs(dbar_fd_component(oracle, point, j, step)) for j in range(len(point)))


def counterexample_suite(which: str, *, t=1, alpha: complex = -1 + 1j,
                         seed: int = 0, max_order: int = 8) -> SuiteReport:
    """Run every verifiable property of the named example and bundle reports.

    which: 'resonant' (field (1, -t), t exact rational), 'spiral'
    (field (alpha, t conj(alpha))), or 'remark' (conj(z1) conj(z2) on the
    field (1, -1), documenting that mixed real ratios break reconstruction
    while curve-holomorphy survives).
    """
    rng = np.random.default_rng(seed)
    if which == "resonant":
        return _resonant_suite(Fraction(t), rng, max_order)
    if which == "spiral":
        return _spiral_suite(complex(alpha), float(t), rng, max_order)
    if which == "remark":
        return _remark_suite(rng)
    raise ValueError(f"unknown counterexample {which!r}")


def _resonant_suite(t: Fraction, rng: np.random.Generator, max_order: int) -> SuiteReport:
    if t <= 0:
        raise ValueError("t must be positive")
    ex = ResonantExample(float(t))
    oracle = lambda z: phi_resonant(ex, z)
    field = DiagonalField((Fraction(1), -t))
    zero_jet = TaylorSeries.zero(2)
    jo = JetOracle(oracle, zero_jet, bound=1.0)
    checks: dict = {}
    decay: dict = {}

    x_hi = 0.6 / max(1.0, float(t))
    curves = [BasePoint(c) for c in polydisk_points(rng, 2, 10, r_min=0.15, r_max=0.5)]
    zetas = [complex(x, y) for x, y in zip(rng.uniform(0.02, x_hi, 40),
                                           rng.uniform(-2.0, 2.0, 40))]
    curve_rep = f_holomorphy_check(jo, field, curves, zetas, tol=1e-8)
    checks["curve_holomorphy"] = {"passed": curve_rep.passed,
                                  "max_residual": curve_rep.max_residual}

    witness_res = _wirtinger_witness(oracle, (0.5 + 0j, 0.5 + 0j))
    checks["non_holomorphy_witness"] = {"passed": witness_res > 1e-3,
                                        "residual": witness_res,
                                        "point": "(0.5, 0.5)"}

    tp1 = float(t) + 1.0

    def resonant_log_ratio(v: float, n: int) -> float:
        e = v * tp1
        return n * v - (math.exp(e) if e < 700.0 else math.inf)

    orders_pass = True
    for n in range(1, max_order + 1):
        radii = _zero_jet_radii(lambda v, n=n: resonant_log_ratio(v, n), n, 1e-8)
        rep = taylor_remainder_check(oracle, zero_jet, n, radii)
        decay[f"zero_jet_order_{n}"] = rep
        orders_pass = orders_pass and rep.passed
    checks["zero_jet_remainder"] = {"passed": orders_pass, "orders": max_order}

    worst = 0.0
    invariant_samples = list(zip(polydisk_points(rng, 2, 100, r_min=0.1, r_max=0.5),
                                 rng.uniform(0.0, x_hi, 100), rng.uniform(-3.0, 3.0, 100)))
    for C, x, y in invariant_samples:
        z = integral_curve(field, C, complex(float(x), float(y)))
        value = abs(z[0]) ** float(t) * abs(z[1])
        ref = abs(C[0]) ** float(t) * abs(C[1])
        worst = max(worst, abs(value - ref))
    checks["first_integral_constancy"] = {"passed": bool(worst < 1e-12),
                                          "max_drift": float(worst)}

    passed = all(c["passed"] for c in checks.values())
    return SuiteReport("resonant", {"t": t}, checks, passed, decay)


def _spiral_suite(alpha: complex, t: float, rng: np.random.Generator,
                  max_order: int) -> SuiteReport:
    ex = SpiralExample.create(alpha, t)
    oracle = lambda z: phi_spiral(ex, z)
    zero_jet = TaylorSeries.zero(2)
    checks: dict = {}
    decay: dict = {}

    reach = 0.6 / (abs(ex.alpha) * max(1.0, t))
    curve_samples = []
    for C in polydisk_points(rng, 2, 10, r_min=0.15, r_max=0.4):
        for _ in range(10):
            r = rng.uniform(0.0, reach)
            th = rng.uniform(0.0, TWO_PI)
            curve_samples.append((C, r * complex(math.cos(th), math.sin(th))))
    worst, witness = _curve_holomorphy(oracle, lambda C, w: spiral_curve(ex, C, w),
                                       curve_samples)
    checks["curve_holomorphy"] = {"passed": worst < 1e-6, "max_residual": worst}

    witness_res = _wirtinger_witness(oracle, (0.5 + 0j, 0.5 + 0j))
    checks["non_holomorphy_witness"] = {"passed": witness_res > 1e-3,
                                        "residual": witness_res,
                                        "point": "(0.5, 0.5)"}

    ident = verify_time_identity(ex, [complex(x, y) for x, y in
                                      zip(rng.uniform(-10, 10, 100), rng.uniform(-10, 10, 100))])
    checks["time_identity"] = {"passed": ident.passed, "max_error": ident.max_error}

    sector_ok = all(branch_power(ex, xi).real < 0
                    for xi in sector_samples(ex, rng, 10_000))
    checks["sector_negativity"] = {"passed": sector_ok, "samples": 10_000}

    # decay constant along the all-equal-moduli direction used by the radius grid
    g_dir = -(ex.gamma + ex.gamma.conjugate() / ex.t)
    mod_g = abs(g_dir)
    ang = math.atan2(g_dir.imag, g_dir.real) + TWO_PI * ex.branch_offset
    c_dir = -math.cos(ex.b * ang) * mod_g ** ex.b
    orders_pass = True
    for n in range(1, max_order + 1):
        radii = _zero_jet_radii(lambda v, n=n: -c_dir * v ** ex.b + n * v, n, 1e-8)
        rep = taylor_remainder_check(oracle, zero_jet, n, radii)
        decay[f"zero_jet_order_{n}"] = rep
        orders_pass = orders_pass and rep.passed
    checks["zero_jet_remainder"] = {"passed": orders_pass, "orders": max_order}

    passed = all(c["passed"] for c in checks.values())
    return SuiteReport("spiral", {"alpha": alpha, "t": t, "b": ex.b,
                                  "branch_offset": ex.branch_offset},
                       checks, passed, decay)


def _remark_suite(rng: np.random.Generator) -> SuiteReport:
    jet = TaylorSeries.monomial(2, (0, 0), (1, 1))
    oracle = lambda z: (complex(z[0]) * complex(z[1])).conjugate()
    field = DiagonalField((Fraction(1), Fraction(-1)))
    jo = JetOracle(oracle, jet, bound=1.0)
    checks: dict = {}

    curves = [BasePoint(c) for c in polydisk_points(rng, 2, 10, r_min=0.15, r_max=0.5)]
    zetas = [complex(x, y) for x, y in zip(rng.uniform(0.02, 0.6, 40),
                                           rng.uniform(-2.0, 2.0, 40))]
    curve_rep = f_holomorphy_check(jo, field, curves, zetas, tol=1e-8)
    checks["curve_holomorphy"] = {"passed": curve_rep.passed,
                                  "max_residual": curve_rep.max_residual}

    witness_res = _wirtinger_witness(oracle, (0.5 + 0j, 0.5 + 0j))
    checks["non_holomorphy_witness"] = {"passed": witness_res > 1e-3,
                                        "residual": witness_res,
                                        "point": "(0.5, 0.5)"}

    checks["jet_antiholomorphic"] = {
        "passed": bool(antiholomorphic_part(jet)),
        "note": "the jet itself is anti-holomorphic; the ratio hypothesis is necessary",
    }

    verdict = forelli_pipeline(jo, field, ForelliConfig(seed=int(rng.integers(2**31))))
    checks["pipeline_verdict"] = {"passed": verdict.tag == HYPOTHESIS_VIOLATED,
                                  "tag": verdict.tag}

    passed = all(c["passed"] for c in checks.values())
    return SuiteReport("remark", {}, checks, passed, {})
