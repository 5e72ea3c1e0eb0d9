"""Acceptance checks, one function per criterion.

Each check returns a :class:`CriterionResult`; ``run_all`` runs them in order.
Shared by the pytest acceptance module and ``quartic-sieve verify``.
"""

from __future__ import annotations

import math
import random
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .analysis import poisson_identity_check
from .characters import match_family_to_oracle
from .gauss_sums import gauss_sum, tau, tau_product_formula, tau_via_gauss_sum
from .gaussian import (
    GaussianInteger,
    coprime,
    enumerate_primary,
    factor,
    has_rational_prime_divisor,
    trial_factor_int,
)
from .harness import (
    duality_checks,
    exponent_iteration,
    piecewise_regime,
    squarefree_range,
    sweep,
    transformation_check,
)
from .reports import write_report
from .symbol import QuarticSymbolValue, _symbol, reciprocity_sign

SEED = 20240611
MINUS_ONE = QuarticSymbolValue(2)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"

    def to_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": self.seconds}


def _timed(number: int, name: str, fn: Callable[[], tuple[bool, str]],
           limit: float | None = None) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok = False
        detail += f"; runtime {dt:.1f}s exceeds {limit:.0f}s"
    return CriterionResult(number, name, ok, detail, dt)


def primary_primes(max_norm: int) -> list[GaussianInteger]:
    out = []
    for n in enumerate_primary(1, max_norm):
        primes = factor(n).primes
        if len(primes) == 1 and primes[0][1] == 1:
            out.append(n)
    return out


def admissible(max_norm: int) -> list[GaussianInteger]:
    """Primary square-free non-units free of rational prime divisors."""
    return [n for n in enumerate_primary(1, max_norm, squarefree=True, no_rational_prime_divisor=True)
            if not n.is_unit()]


def _is_prime(q: int) -> bool:
    return q > 1 and trial_factor_int(q) == [(q, 1)]


# 1
def reciprocity(max_norm: int = 1000) -> CriterionResult:
    def run():
        primes = primary_primes(max_norm)
        pairs, bad = 0, []
        for m in primes:
            for n in primes:
                if m == n:
                    continue
                pairs += 1
                rhs = _symbol(n, m)
                if reciprocity_sign(m, n) == -1:
                    rhs = rhs * MINUS_ONE
                if _symbol(m, n) != rhs:
                    bad.append(f"({m},{n})")
        detail = f"{len(primes)} primes, {pairs} ordered pairs, {len(bad)} failures"
        if bad:
            detail += f" e.g. {bad[0]}"
        return not bad, detail

    return _timed(1, "quartic reciprocity", run, limit=30.0)


# 2
def gauss_sum_magnitude(max_norm: int = 500) -> CriterionResult:
    def run():
        worst, count = 0.0, 0
        for n in enumerate_primary(1, max_norm, squarefree=True):
            if n.is_unit():
                continue
            N = n.norm()
            worst = max(worst, abs(abs(gauss_sum(1, n)) ** 2 - N) / N)
            count += 1
        return worst <= 1e-6, f"{count} moduli, max ||g|^2-N|/N = {worst:.2e} (tol 1e-6)"

    return _timed(2, "Gauss sum magnitude", run, limit=60.0)


# 3
def twist_identity(max_norm: int = 300, draws: int = 20) -> CriterionResult:
    def run():
        rng = random.Random(SEED)
        worst, count = 0.0, 0
        for n in enumerate_primary(1, max_norm, squarefree=True):
            if n.is_unit():
                continue
            for _ in range(draws):
                r = GaussianInteger(rng.randint(-60, 60), rng.randint(-60, 60))
                while True:
                    s = GaussianInteger(rng.randint(-60, 60), rng.randint(-60, 60))
                    if not s.is_zero() and coprime(s, n):
                        break
                lhs = gauss_sum(r * s, n)
                rhs = complex(_symbol(s, n).conjugate()) * gauss_sum(r, n)
                worst = max(worst, abs(lhs - rhs) / math.sqrt(n.norm()))
                count += 1
        return worst <= 1e-9, f"{count} (r,s,n) triples, max err/sqrt(N) = {worst:.2e} (tol 1e-9)"

    return _timed(3, "twist identity", run)


# 4
def tau_identities(max_norm: int = 500, max_product: int = 1000) -> CriterionResult:
    def run():
        ns = admissible(max_norm)
        bridge = mag = 0.0
        for n in ns:
            N = n.norm()
            t1 = tau(n)
            bridge = max(bridge, abs(t1 - tau_via_gauss_sum(n)) / math.sqrt(N))
            mag = max(mag, abs(abs(t1) ** 2 - N) / N, abs(abs(tau(n, 2)) ** 2 - N) / N)
        prod_err, pairs = 0.0, 0
        small = [n for n in ns if n.norm() * 5 <= max_product]
        for j, n1 in enumerate(small):
            for n2 in small[j + 1:]:
                n = n1 * n2
                if n.norm() > max_product or not coprime(n1, n2) or has_rational_prime_divisor(n):
                    continue
                pairs += 1
                prod_err = max(prod_err, abs(tau(n) - tau_product_formula(n1, n2)) / math.sqrt(n.norm()))
        ok = bridge <= 1e-6 and prod_err <= 1e-6 and mag <= 1e-6 and pairs > 0
        detail = (f"{len(ns)} moduli: bridge {bridge:.2e}, |tau|^2 rel {mag:.2e}; "
                  f"{pairs} pairs: product {prod_err:.2e} (tol 1e-6)")
        return ok, detail

    return _timed(4, "tau bridge and factorisation", run)


POISSON_CASES = (
    ("-1+2i", "1", 4.0),
    ("-1+2i", "1", 10.0),
    ("-1+2i", "3+2i", 10.0),
    ("-1+2i", "3+2i", 16.0),
)
# chi(i) = 1 for these, so neither side vanishes by symmetry
POISSON_NONDEGENERATE = (
    ("1+4i", "1", 10.0),
    ("-1+2i", "-1-2i", 10.0),
    ("1+4i", "1", 16.0),
)


# 5
def poisson(tol: float = 1e-4) -> CriterionResult:
    def run():
        parts, ok = [], True
        for n1, n2, M in POISSON_CASES + POISSON_NONDEGENERATE:
            r = poisson_identity_check(GaussianInteger.parse(n1), GaussianInteger.parse(n2), M, tol=tol)
            ok &= r.rel_err < tol
            tag = " deg" if r.degenerate else ""
            parts.append(f"({n1},{n2},{M:g}) {r.rel_err:.1e}{tag}")
        return ok, "; ".join(parts) + f" (tol {tol:g})"

    return _timed(5, "Poisson identity", run, limit=60.0)


# 6
def character_classification(max_q: int = 500) -> CriterionResult:
    def run():
        bad, n1, n3 = [], 0, 0
        for q in range(3, max_q + 1):
            if not _is_prime(q):
                continue
            rep = match_family_to_oracle(q)
            if q % 4 == 1:
                n1 += 1
                good = rep.ok and rep.family_count == rep.oracle_count == 2
            else:
                n3 += 1
                good = rep.family_count == rep.oracle_count == 0
            if not good:
                bad.append(f"q={q}: {rep.family_count}/{rep.oracle_count}")
        c65 = match_family_to_oracle(65)
        detail = (f"{n1} primes q=1 mod 4 with 2=2 bijective, {n3} primes q=3 mod 4 with 0=0, "
                  f"{len(bad)} failures; q=65 (reported only) family {c65.family_count} "
                  f"vs oracle {c65.oracle_count}")
        if bad:
            detail += f" e.g. {bad[0]}"
        return not bad, detail

    return _timed(6, "character classification", run)


DUALITY_GRID = (4, 8, 16, 32, 64)


# 7
def duality(grid=DUALITY_GRID) -> CriterionResult:
    def run():
        bad, worst_svd, worst_ratio = [], 0.0, 0.0
        for M in grid:
            for N in grid:
                r = duality_checks(M, N)
                bad.extend(r.counterexamples)
                worst_svd = max([worst_svd, *r.power_vs_svd.values()])
                if r.b_nm > 0:
                    worst_ratio = max(worst_ratio, r.b_mn / r.b_nm)
        detail = (f"{len(grid) ** 2} (M,N) pairs, max B1(M,N)/B1(N,M) = {worst_ratio:.4f}, "
                  f"max power-vs-svd rel {worst_svd:.1e}, {len(bad)} violations")
        if bad:
            detail += f" e.g. {bad[0]}"
        return not bad, detail

    return _timed(7, "duality and factor-2 lemma", run)


# 8
def exponent_recursion() -> CriterionResult:
    def run():
        hist = exponent_iteration(2, 100).xi_history
        first = hist[1] == Fraction(12, 7)
        decreasing = all(b < a for a, b in zip(hist, hist[1:]))
        gap = abs(float(hist[-1]) - 1.5)
        ok = first and decreasing and gap < 1e-6
        return ok, f"xi_1 = {hist[1]}, strictly decreasing = {decreasing}, |xi_100 - 3/2| = {gap:.2e}"

    return _timed(8, "exponent recursion", run)


REGIME_SAMPLES = (
    (0.5, "M"),
    (0.7, "Q^{7/4}"),
    (1.0, "Q^{1/2}M"),
    (1.3, "Q^{11/8}"),
    (1.55, "Q^{2/3}M"),
    (1.8, "Q^{5/4}"),
    (2.2, "M^{17/7}"),
    (3.0, "Q"),
)


# 9
def regime_table(M: float = 2.0**20) -> CriterionResult:
    def run():
        bad = []
        for x, label in REGIME_SAMPLES:
            r = piecewise_regime(M**x, M)
            if r.boundary or r.label != label or not r.consistent:
                bad.append(f"x={x}: {r.label} (argmin {r.argmin_term})")
        return not bad, f"{len(REGIME_SAMPLES)} interior samples, {len(bad)} mismatches" + (
            f" e.g. {bad[0]}" if bad else "")

    return _timed(9, "regime table", run)


RATIO_GRID = (4, 8, 16, 32, 64, 128, 256)


def ratio_tables(grid=RATIO_GRID, jobs: int = 1) -> dict[str, list]:
    return {kind: sweep(kind, grid, jobs=jobs) for kind in ("t1", "t2")}


def _write_tables(tables: dict[str, list], directory: Path) -> list[bytes]:
    blobs = []
    for kind, reports in tables.items():
        for fmt in ("csv", "json"):
            p = write_report(reports, fmt, directory / f"ratios_{kind}.{fmt}")
            blobs.append(p.read_bytes())
    return blobs


# 10
def ratio_reports(grid=RATIO_GRID, out_dir: Path | None = None) -> CriterionResult:
    def run():
        first = ratio_tables(grid)
        second = ratio_tables(grid, jobs=2)
        with tempfile.TemporaryDirectory() as tmp:
            a = _write_tables(first, Path(tmp) / "a")
            b = _write_tables(second, Path(tmp) / "b")
        if out_dir is not None:
            _write_tables(first, Path(out_dir))
        values = [r.ratio for reps in first.values() for r in reps]
        values += [r.extra["initial_estimate_ratio"] for r in first["t1"]]
        finite = all(math.isfinite(v) and v > 0 for v in values)
        same = a == b
        rng = {k: (min(r.ratio for r in v), max(r.ratio for r in v)) for k, v in first.items()}
        detail = (f"{sum(len(v) for v in first.values())} cells, all finite and positive = {finite}, "
                  f"byte-identical rerun = {same}, t1 ratio in [{rng['t1'][0]:.3g}, {rng['t1'][1]:.3g}], "
                  f"t2 ratio in [{rng['t2'][0]:.3g}, {rng['t2'][1]:.3g}]")
        return finite and same, detail

    return _timed(10, "ratio reports", run, limit=600.0)


# 11
def transformation(qs=(5, 13), M: int = 40, vectors: int = 5) -> CriterionResult:
    def run():
        rng = np.random.default_rng(SEED)
        ncols = len(squarefree_range(M, 2 * M, odd_only=True))
        worst, parts = 0.0, []
        for q in qs:
            for _ in range(vectors):
                a = rng.standard_normal(ncols) + 1j * rng.standard_normal(ncols)
                r = transformation_check(q, M, a)
                worst = max(worst, r.rel_err)
            parts.append(f"q={q}: {r.characters} characters, {r.generators} generators")
        return worst <= 1e-10, "; ".join(parts) + f"; max rel err {worst:.1e} (tol 1e-10)"

    return _timed(11, "transformation identity", run)


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    reciprocity,
    gauss_sum_magnitude,
    twist_identity,
    tau_identities,
    poisson,
    character_classification,
    duality,
    exponent_recursion,
    regime_table,
    ratio_reports,
    transformation,
)


def run_all(echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    results = []
    for check in CRITERIA:
        r = check()
        results.append(r)
        if echo is not None:
            echo(r.line())
    return results
