"""Scenario runner: every verification pipeline as a command.

Usage::

    holoflow run scenario.txt [--out DIR] [--tolerance X] [--seed N]
                              [--max-level P/Q]

Scenario files are plain ``key = value`` text; ``#`` starts a comment and
repeated keys accumulate (term lines).  Rates and levels are exact
fractions ``p/q``; complex values use ``a+bi``.  The oracle catalog is
closed: polynomial jets (``term`` lines), finite holomorphic expansions
(``exp_term`` lines), and the named counterexamples.

Keys by kind
------------
pushforward:    rates, tau?, term+, base_point, lambda_max?, seed?, tolerance?
extraction:     grid_rates, lambda_max, exp_term+, x0?, window?, nodes?,
                snap_tol?, tolerance?
forelli:        rates, tau?, term+, oracle? (jet|resonant|spiral|remark),
                t?, alpha?, bound?, expect?, seed?, tolerance?
counterexample: which (resonant|spiral|remark), t?, alpha?, seed?
bounds:         exp_term+, claimed_rate, x_lo?, bound?, tolerance?

Outputs: ``report.json`` plus CSV tables in the output directory; exit
status 0 iff every required check passed, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import counterex as cx
from .asympt import HolomorphicExpansion, eval_expansion, max_principle_bound, \
    pushforward, tail_bound_check
from .extract import ExtractionParams, extract_coefficients, sampled_sup, \
    verify_cauchy_bound
from .flow import DiagonalField, integral_curve, level_grid, normalize_time
from .forelli import ForelliConfig, JetOracle, forelli_pipeline
from .reports import write_decay_csv
from .sampling import polydisk_points
from .series import TaylorSeries, eval_taylor, parse_term_line


class ScenarioError(Exception):
    def __init__(self, path, line: int | None, message: str):
        self.path, self.line, self.message = path, line, message
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


class Scenario:
    """Parsed key/value file; values keep their line numbers for diagnostics."""

    def __init__(self, path):
        self.path = Path(path)
        self.entries: dict[str, list[tuple[int, str]]] = {}
        try:
            text = self.path.read_text()
        except OSError as exc:
            raise ScenarioError(path, None, f"cannot read scenario: {exc}")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ScenarioError(self.path, lineno, "expected 'key = value'")
            key, value = line.split("=", 1)
            self.entries.setdefault(key.strip(), []).append((lineno, value.strip()))

    def error(self, key: str, message: str):
        line = self.entries[key][0][0] if key in self.entries else None
        raise ScenarioError(self.path, line, message)

    def get(self, key: str, default=None) -> str | None:
        if key not in self.entries:
            return default
        return self.entries[key][-1][1]

    def require(self, key: str) -> str:
        value = self.get(key)
        if value is None:
            raise ScenarioError(self.path, None, f"missing required key {key!r}")
        return value

    def get_all(self, key: str) -> list[tuple[int, str]]:
        return self.entries.get(key, [])

    def get_int(self, key: str, default: int) -> int:
        value = self.get(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            self.error(key, f"{key} must be an integer, got {value!r}")

    def get_float(self, key: str, default: float | None) -> float | None:
        value = self.get(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            self.error(key, f"{key} must be a number, got {value!r}")

    def get_fraction(self, key: str, default=None):
        value = self.get(key)
        if value is None:
            return default
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            self.error(key, f"{key} must be an exact fraction p/q, got {value!r}")

    def get_fractions(self, key: str) -> list[Fraction]:
        value = self.require(key)
        try:
            return [Fraction(tok) for tok in value.split()]
        except (ValueError, ZeroDivisionError):
            self.error(key, f"{key} must be fractions p/q separated by spaces")

    def get_complex(self, key: str, default=None):
        value = self.get(key)
        if value is None:
            return default
        try:
            return parse_complex(value)
        except ValueError:
            self.error(key, f"{key} must be a complex number like 1+2i, got {value!r}")

    def get_complexes(self, key: str) -> list[complex]:
        value = self.require(key)
        try:
            return [parse_complex(tok) for tok in value.split()]
        except ValueError:
            self.error(key, f"{key} must be complex numbers separated by spaces")


def parse_complex(token: str) -> complex:
    return complex(token.strip().replace("i", "j"))


def _parse_jet(sc: Scenario) -> TaylorSeries:
    term_lines = sc.get_all("term")
    if not term_lines:
        raise ScenarioError(sc.path, None, "at least one 'term' line is required")
    terms = []
    dim = None
    for lineno, text in term_lines:
        try:
            k, m, a = parse_term_line(text)
        except ValueError as exc:
            raise ScenarioError(sc.path, lineno, str(exc))
        if dim is None:
            dim = len(k)
        terms.append(((k, m), a))
    return TaylorSeries(dim, terms)


def _parse_expansion(sc: Scenario) -> HolomorphicExpansion:
    lines = sc.get_all("exp_term")
    if not lines:
        raise ScenarioError(sc.path, None, "at least one 'exp_term' line is required")
    pairs = []
    for lineno, text in lines:
        parts = [p.strip() for p in text.split("|")]
        if len(parts) != 3:
            raise ScenarioError(sc.path, lineno, "expected 'lambda | re | im'")
        try:
            pairs.append((Fraction(parts[0]), complex(float(parts[1]), float(parts[2]))))
        except (ValueError, ZeroDivisionError) as exc:
            raise ScenarioError(sc.path, lineno, str(exc))
    pairs.sort(key=lambda p: p[0])
    try:
        return HolomorphicExpansion(pairs)
    except ValueError as exc:
        raise ScenarioError(sc.path, lines[0][0], str(exc))


def _field(sc: Scenario) -> DiagonalField:
    rates = sc.get_fractions("rates")
    tau = sc.get_complex("tau", 1 + 0j)
    try:
        return DiagonalField(tuple(rates), tau)
    except ValueError as exc:
        sc.error("rates", str(exc))


def _json_complex(c: complex) -> list[float]:
    return [c.real, c.imag]


def _run_pushforward(sc: Scenario, out: Path, tolerance: float | None,
                     seed: int, max_level) -> tuple[dict, bool]:
    field = _field(sc)
    jet = _parse_jet(sc)
    c = sc.get_complexes("base_point")
    if not (len(c) == jet.dim == field.dim):
        sc.error("base_point", f"dimension mismatch: {len(c)} base coordinates, "
                               f"jet dim {jet.dim}, field dim {field.dim}")
    tol = tolerance if tolerance is not None else sc.get_float("tolerance", 1e-10)
    nfield, _ = normalize_time(field)
    lam_max = max_level or sc.get_fraction("lambda_max")
    if lam_max is None:
        alphas = nfield.rates
        lam_max = max((sum(kj * aj for kj, aj in zip(k, alphas))
                       + sum(mj * aj for mj, aj in zip(m, alphas))
                       for (k, m) in jet.terms()), default=Fraction(0))
        lam_max = max(lam_max, Fraction(1))
    expansion = pushforward(jet, nfield, c, lam_max)

    rng = np.random.default_rng(seed)
    zetas = [complex(x, y) for x, y in zip(rng.uniform(0.0, 5.0, 100),
                                           rng.uniform(-4.0, 4.0, 100))]
    max_err = 0.0
    for zeta in zetas:
        lhs = eval_taylor(jet, integral_curve(nfield, c, zeta))
        rhs = eval_expansion(expansion, zeta) if len(expansion) else 0j
        max_err = max(max_err, abs(lhs - rhs))
    passed = max_err <= tol

    with open(out / "expansion.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mu", "nu", "level", "re", "im"])
        for mu, nu, p in expansion.all_terms():
            writer.writerow([str(mu), str(nu), str(mu + nu), repr(p.real), repr(p.imag)])
    report = {
        "expansion": [[str(mu), str(nu), _json_complex(p)]
                      for mu, nu, p in expansion.all_terms()],
        "lambda_max": str(lam_max),
        "exactness": {"max_error": max_err, "tolerance": tol, "passed": passed,
                      "zeta_samples": len(zetas)},
    }
    return report, passed


def _run_extraction(sc: Scenario, out: Path, tolerance: float | None,
                    seed: int, max_level) -> tuple[dict, bool]:
    source = _parse_expansion(sc)
    grid_rates = sc.get_fractions("grid_rates")
    lam_max = max_level or sc.get_fraction("lambda_max")
    if lam_max is None:
        sc.error("lambda_max", "extraction needs lambda_max (or --max-level)")
    grid = level_grid(DiagonalField(tuple(grid_rates)), lam_max)
    missing = [str(lam) for lam in source.levels if lam not in grid]
    if missing:
        sc.error("exp_term", f"oracle levels {missing} are off the grid")
    params = ExtractionParams(
        grid=grid,
        x0=sc.get_float("x0", 1.0),
        half_width=sc.get_float("window", 64.0),
        nodes=sc.get_int("nodes", 4096),
        tol=sc.get_float("snap_tol", 1e-6),
    )
    compare_tol = tolerance if tolerance is not None else sc.get_float("tolerance", 1e-8)

    trace: list = []
    recovered = extract_coefficients(source, params, trace=trace)
    max_err = max(abs(recovered.coefficient(lam) - source.coefficient(lam))
                  for lam in grid.levels)
    bound = sampled_sup(source, params)
    cauchy = verify_cauchy_bound(recovered, source, bound)
    passed = max_err <= compare_tol and cauchy.passed

    with open(out / "extraction_trace.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "coeff_re", "coeff_im", "residual_norm"])
        for lam, c, norm in trace:
            writer.writerow([repr(lam), repr(c.real), repr(c.imag), repr(norm)])
    report = {
        "recovered": [[str(lam), _json_complex(c)] for lam, c in recovered.pairs()],
        "max_error": max_err,
        "tolerance": compare_tol,
        "sampled_sup": bound,
        "cauchy_bound": cauchy.to_json_dict(),
        "grid_levels": [str(lam) for lam in grid.levels],
    }
    return report, passed


def _named_oracle(sc: Scenario, name: str):
    if name == "resonant":
        t = sc.get_float("t", 1.0)
        ex = cx.ResonantExample(t)
        return lambda z: cx.phi_resonant(ex, z)
    if name == "spiral":
        alpha = sc.get_complex("alpha", -1 + 1j)
        ex = cx.SpiralExample.create(alpha, sc.get_float("t", 1.0))
        return lambda z: cx.phi_spiral(ex, z)
    if name == "remark":
        return lambda z: (complex(z[0]) * complex(z[1])).conjugate()
    sc.error("oracle", f"unknown oracle {name!r} (catalog: jet, resonant, spiral, remark)")


def _run_forelli(sc: Scenario, out: Path, tolerance: float | None,
                 seed: int, max_level) -> tuple[dict, bool]:
    field = _field(sc)
    jet = _parse_jet(sc)
    oracle_name = sc.get("oracle", "jet")
    if oracle_name == "jet":
        oracle = lambda z: eval_taylor(jet, z)
    else:
        oracle = _named_oracle(sc, oracle_name)
    bound = sc.get_float("bound", None)
    if bound is None:
        rng = np.random.default_rng(seed + 1)
        pts = polydisk_points(rng, jet.dim, 512, r_min=0.0, r_max=0.95)
        bound = max(abs(complex(oracle(z))) for z in pts)
        bound = max(bound, 1e-12)
    config = ForelliConfig(seed=seed,
                           compare_tol=tolerance if tolerance is not None else 1e-10)
    verdict = forelli_pipeline(JetOracle(oracle, jet, bound), field, config)
    expect = sc.get("expect", "holomorphic")
    passed = verdict.tag == expect
    report = {
        "verdict": verdict.to_json_dict(),
        "expected": expect,
        "bound": bound,
        "oracle": oracle_name,
    }
    return report, passed


def _run_counterexample(sc: Scenario, out: Path, tolerance: float | None,
                        seed: int, max_level) -> tuple[dict, bool]:
    which = sc.require("which")
    kwargs: dict = {"seed": seed}
    if which == "resonant":
        kwargs["t"] = sc.get_fraction("t", Fraction(1))
    elif which == "spiral":
        kwargs["t"] = sc.get_float("t", 1.0)
        kwargs["alpha"] = sc.get_complex("alpha", -1 + 1j)
    elif which != "remark":
        sc.error("which", f"unknown counterexample {which!r}")
    suite = cx.counterexample_suite(which, **kwargs)
    for name, rep in suite.decay_reports.items():
        write_decay_csv(out / f"decay_{name}.csv", rep, label=name)
    return suite.to_json_dict(), suite.passed


def _run_bounds(sc: Scenario, out: Path, tolerance: float | None,
                seed: int, max_level) -> tuple[dict, bool]:
    source = _parse_expansion(sc)
    lam = sc.get_fraction("claimed_rate")
    if lam is None:
        sc.error("claimed_rate", "bounds scenarios need claimed_rate")
    x_lo = sc.get_float("x_lo", 0.01)
    tol = tolerance if tolerance is not None else sc.get_float("tolerance", 1e-6)
    bound = sc.get_float("bound", None)
    ys = np.linspace(-40.0, 40.0, 4001)
    if bound is None:
        bound = float(max(abs(source(complex(x_lo, y))) for y in ys))
    rng = np.random.default_rng(seed)
    samples = [complex(x, y) for x, y in zip(rng.uniform(x_lo, 10.0, 400),
                                             rng.uniform(-20.0, 20.0, 400))]
    mp_report = max_principle_bound(source, bound, lam, samples, x_lo=x_lo, tol=tol)
    tail_report = tail_bound_check(source, source.to_expansion(),
                                   n=len(source.to_expansion().levels) - 1)
    write_decay_csv(out / "max_principle.csv", mp_report, label="max_principle")
    write_decay_csv(out / "tail.csv", tail_report, label="tail")
    passed = mp_report.passed and tail_report.passed
    report = {
        "max_principle": mp_report.to_json_dict(),
        "tail": tail_report.to_json_dict(),
        "bound": bound,
    }
    return report, passed


_RUNNERS = {
    "pushforward": _run_pushforward,
    "extraction": _run_extraction,
    "forelli": _run_forelli,
    "counterexample": _run_counterexample,
    "bounds": _run_bounds,
}


def run_scenario(path, out_dir, tolerance=None, seed=None, max_level=None) -> int:
    sc = Scenario(path)
    kind = sc.require("kind")
    if kind not in _RUNNERS:
        sc.error("kind", f"unknown kind {kind!r} (one of {sorted(_RUNNERS)})")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    eff_seed = seed if seed is not None else sc.get_int("seed", 0)
    report, passed = _RUNNERS[kind](sc, out, tolerance, eff_seed, max_level)
    payload = {
        "kind": kind,
        "scenario": str(path),
        "seed": eff_seed,
        "passed": passed,
        "report": report,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(out / "report.json", "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"{kind}: {'pass' if passed else 'FAIL'} -> {out / 'report.json'}")
    return 0 if passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="holoflow", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scenario file")
    run_p.add_argument("scenario", help="path to the scenario file")
    run_p.add_argument("--out", default="reports", help="output directory")
    run_p.add_argument("--tolerance", type=float, default=None,
                       help="override the scenario tolerance")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the scenario seed")
    run_p.add_argument("--max-level", type=Fraction, default=None, metavar="P/Q",
                       help="override the level cutoff")
    args = parser.parse_args(argv)
    try:
        return run_scenario(args.scenario, args.out, args.tolerance,
                            args.seed, args.max_level)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
