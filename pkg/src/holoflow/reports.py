"""Report types shared by the decay, bound, and convergence checks.

Every claim of the shape "this quantity tends to zero as the abscissa
grows" or "this bound holds on the sampled set" is reduced to a
:class:`DecayReport`: the sampled abscissas, the measured values, and a
verdict computed by one of a small set of named rules.  The rule used is
recorded in the report so a reader can tell *which* finite protocol stood
in for the limit statement.

Verdict rules
-------------
``monotone_below_tol``
    The measured values are non-increasing on the last three abscissas and
    the final value is at or below the tolerance.  Used for weighted-tail
    checks where the abscissa is Re z and the limit is Re z -> infinity.
``remainder_trend``
    Pass if all values are already below tolerance, or if they satisfy the
    monotone rule, or if a log-log fit against the radius shows a positive
    slope (value ~ r^s with s above a cutoff) while the sequence actually
    decreased.  Used for o(|z|^n) remainder checks where the abscissa is a
    radius shrinking to 0.
``bound_margin``
    Pass iff the worst sampled ratio value/bound stays below 1 + tol.
``uniform_tail``
    Pass iff the sup-error at the deepest truncation is below tolerance
    and did not exceed the initial error.

Values may be 0.0 (structural zeros, underflow of a genuinely tiny
residual) or inf (clamped overflow); the rules treat both directions
conservatively.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class DecayReport:
    """Outcome of a sampled decay/bound check."""

    claimed_rate: float
    abscissas: tuple
    values: tuple
    tolerance: float
    verdict: str
    rule: str
    slope: float | None = None
    witness: object = None
    note: str = ""
    epsilon_form: "DecayReport | None" = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def rows(self) -> list[tuple]:
        return [(a, v, self.verdict) for a, v in zip(self.abscissas, self.values)]

    def to_json_dict(self) -> dict:
        out = {
            "claimed_rate": float(self.claimed_rate),
            "abscissas": [float(a) for a in self.abscissas],
            "values": [float(v) for v in self.values],
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "rule": self.rule,
            "slope": self.slope,
            "note": self.note,
        }
        if self.witness is not None:
            out["witness"] = repr(self.witness)
        if self.epsilon_form is not None:
            out["epsilon_form"] = self.epsilon_form.to_json_dict()
        return out


def monotone_below(values: Sequence[float], tol: float) -> bool:
    """Non-increasing on the last three samples and final value <= tol."""
    if not values:
        return False
    tail = list(values[-3:])
    ok = all(tail[i] >= tail[i + 1] for i in range(len(tail) - 1))
    return ok and tail[-1] <= tol


def fitted_decay_rate(abscissas: Sequence[float], values: Sequence[float]) -> float | None:
    """Least-squares decay rate: values ~ C e^(-rate x).  None if underdetermined.

    Points with non-positive value (underflowed residuals) are ignored.
    """
    xs = [float(x) for x, v in zip(abscissas, values) if v > 0 and math.isfinite(v)]
    vs = [math.log(v) for v in values if v > 0 and math.isfinite(v)]
    if len(xs) < 2:
        return None
    slope = np.polyfit(xs, vs, 1)[0]
    return float(-slope)


def loglog_slope(radii: Sequence[float], values: Sequence[float]) -> float | None:
    """Slope s of value ~ r^s.  Positive s means the value vanishes with r."""
    pairs = [(math.log(r), math.log(v)) for r, v in zip(radii, values)
             if v > 0 and math.isfinite(v)]
    if len(pairs) < 2:
        return None
    xs, ys = zip(*pairs)
    if max(xs) - min(xs) < 1e-12:
        return None
    return float(np.polyfit(xs, ys, 1)[0])


def clamped_exp(log_value: float) -> float:
    """exp() that saturates instead of raising on over/underflow."""
    if log_value > 700.0:
        return math.inf
    if log_value < -745.0:
        return 0.0
    return math.exp(log_value)


def write_decay_csv(path, report: DecayReport, label: str = "") -> None:
    """Dump one report as CSV rows (abscissa, weighted residual, verdict)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "abscissa", "weighted_residual", "verdict"])
        for a, v, verdict in report.rows():
            writer.writerow([label, repr(float(a)), repr(float(v)), verdict])
        if report.epsilon_form is not None:
            for a, v, verdict in report.epsilon_form.rows():
                writer.writerow([label + ":epsilon_form", repr(float(a)), repr(float(v)), verdict])
