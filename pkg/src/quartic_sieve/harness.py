"""Character-sum matrices, empirical large-sieve norms and bound bookkeeping.

An empirical norm here is the exact supremum of the quadratic form over unit
coefficient vectors, i.e. the squared largest singular value of the matrix
of character values.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .characters import UnsupportedModulus, enumerate_quartic_family, list_order4_primitive
from .gaussian import GaussianInteger, enumerate_primary, trial_factor_int
from .symbol import _symbol, chi_eval

log = logging.getLogger(__name__)

DENSE_LIMIT = 200
DESK_LIMIT = 2000
_ROOTS = np.array([1, 1j, -1, -1j], dtype=complex)


class PowerIterationError(RuntimeError):
    pass


@dataclass
class SymbolMatrix:
    """Entries (n/m)_4 coded as exponents k (i**k), -1 for zero."""

    rows: list[GaussianInteger]
    cols: list[GaussianInteger]
    exponents: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.exponents.shape

    def to_complex(self) -> np.ndarray:
        out = np.zeros(self.exponents.shape, dtype=complex)
        nz = self.exponents >= 0
        out[nz] = _ROOTS[self.exponents[nz]]
        return out


def squarefree_primary(lo: int, hi: int) -> list[GaussianInteger]:
    return list(enumerate_primary(lo, hi, squarefree=True))


def symbol_matrix(M: int, N: int) -> SymbolMatrix:
    """Rows: square-free primary m, M < N(m) <= 2M; columns n likewise for N."""
    rows = squarefree_primary(M, 2 * M)
    cols = squarefree_primary(N, 2 * N)
    ex = np.full((len(rows), len(cols)), -1, dtype=np.int8)
    for i, m in enumerate(rows):
        for j, n in enumerate(cols):
            k = _symbol(n, m).k
            if k is not None:
                ex[i, j] = k
    return SymbolMatrix(rows, cols, ex)


# linear algebra


@dataclass
class PowerResult:
    value: float
    iterations: int
    residual: float


def start_vector(n: int) -> np.ndarray:
    j = np.arange(n)
    v = (1.0 + j / max(n, 1)) * np.exp(2j * np.pi * np.mod(j * 0.6180339887498949, 1.0))
    return v / np.linalg.norm(v)


def power_iteration(T: np.ndarray, rtol: float = 1e-9, max_iter: int = 100_000) -> PowerResult:
    """Largest eigenvalue of T^H T (= sigma_max(T)^2) by power iteration.

    The start vector is deterministic but deliberately unstructured (golden-ratio
    phases with a linear ramp): an all-ones start is orthogonal to the top
    singular space of many symbol matrices, which are symmetric under
    n -> conj(n).  Stops once the Rayleigh quotient changes by less than rtol
    relatively and the eigen-residual is below sqrt(rtol).
    """
    if T.size == 0:
        return PowerResult(0.0, 0, 0.0)
    v = start_vector(T.shape[1])
    prev = 0.0
    for it in range(1, max_iter + 1):
        w = T.conj().T @ (T @ v)
        lam = float(np.vdot(v, w).real)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return PowerResult(0.0, it, 0.0)
        residual = float(np.linalg.norm(w - lam * v)) / max(lam, 1e-300)
        if abs(lam - prev) <= rtol * lam and residual <= math.sqrt(rtol):
            return PowerResult(lam, it, residual)
        prev = lam
        v = w / nw
    raise PowerIterationError(
        f"power iteration did not converge in {max_iter} steps (lambda={prev}, residual={residual:.3e})"
    )


def dense_sigma_max_sq(T: np.ndarray) -> float:
    if T.size == 0:
        return 0.0
    return float(np.linalg.svd(T, compute_uv=False)[0] ** 2)


def spectral_norm_sq(T: np.ndarray) -> tuple[float, str]:
    if T.size == 0:
        return 0.0, "empty"
    if max(T.shape) <= DENSE_LIMIT:
        return dense_sigma_max_sq(T), "svd"
    return power_iteration(T).value, "power"


# reports


@dataclass
class SieveReport:
    kind: str
    params: dict
    rows: int
    cols: int
    empirical_norm: float
    bound_terms: dict
    bound: float
    eps: float
    method: str
    extra: dict = field(default_factory=dict)
    skipped: int = 0

    @property
    def ratio(self) -> float:
        return self.empirical_norm / self.bound

    @property
    def eps_factor(self) -> float:
        return math.prod(self.params.values()) ** self.eps

    @property
    def ratio_eps(self) -> float:
        return self.empirical_norm / (self.bound * self.eps_factor)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            **self.params,
            "rows": self.rows,
            "cols": self.cols,
            "empirical_norm": self.empirical_norm,
            "bound_terms": self.bound_terms,
            "bound": self.bound,
            "ratio": self.ratio,
            "eps": self.eps,
            "bound_eps": self.bound * self.eps_factor,
            "ratio_eps": self.ratio_eps,
            "method": self.method,
            "extra": self.extra,
            "skipped": self.skipped,
        }

    def csv_row(self) -> dict:
        row = {"kind": self.kind, **self.params, "rows": self.rows, "cols": self.cols,
               "empirical_norm": self.empirical_norm}
        row.update({f"term_{k}": v for k, v in self.bound_terms.items()})
        row.update({"bound": self.bound, "ratio": self.ratio, "ratio_eps": self.ratio_eps})
        return row


def theorem1_bounds(M: float, N: float) -> dict:
    return {"M": float(M), "N": float(N), "(MN)^{3/4}": (M * N) ** 0.75}


def empirical_B1(M: int, N: int, eps: float = 0.1) -> SieveReport:
    if M < 1 or N < 1:
        raise ValueError("M and N must be at least 1")
    S = symbol_matrix(M, N)
    value, method = spectral_norm_sq(S.to_complex())
    terms = theorem1_bounds(M, N)
    return SieveReport(
        kind="theorem1",
        params={"M": M, "N": N},
        rows=S.shape[0],
        cols=S.shape[1],
        empirical_norm=value,
        bound_terms=terms,
        bound=sum(terms.values()),
        eps=eps,
        method=method,
        extra={"initial_estimate_ratio": value / (M + N * N)},
    )


@dataclass
class DualityReport:
    M: int
    N: int
    b_mn: float
    b_nm: float
    sigma_T: float
    sigma_T_adjoint: float
    power_vs_svd: dict
    counterexamples: list[str]

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "M": self.M, "N": self.N, "B1(M,N)": self.b_mn, "B1(N,M)": self.b_nm,
            "sigma_T": self.sigma_T, "sigma_T_adjoint": self.sigma_T_adjoint,
            "power_vs_svd": self.power_vs_svd, "counterexamples": self.counterexamples,
            "ok": self.ok,
        }


def duality_checks(M: int, N: int, slack: float = 1e-6, sigma_tol: float = 1e-9,
                   svd_tol: float = 1e-7) -> DualityReport:
    """Factor-2 inequality both ways, adjoint equality and power-vs-SVD agreement."""
    T = symbol_matrix(M, N).to_complex()
    U = symbol_matrix(N, M).to_complex()
    b_mn, b_nm = dense_sigma_max_sq(T), dense_sigma_max_sq(U)
    problems = []
    if b_mn > 2 * b_nm + slack:
        problems.append(f"B1({M},{N})={b_mn:.12g} > 2*B1({N},{M})={2 * b_nm:.12g}")
    if b_nm > 2 * b_mn + slack:
        problems.append(f"B1({N},{M})={b_nm:.12g} > 2*B1({M},{N})={2 * b_mn:.12g}")
    # sigma_max of T via T^H T and of T^H via T T^H, two different Gram matrices
    s_t = power_iteration(T, rtol=1e-12).value if T.size else 0.0
    s_a = power_iteration(T.conj().T, rtol=1e-12).value if T.size else 0.0
    if abs(s_t - s_a) > sigma_tol * max(s_t, s_a, 1.0):
        problems.append(f"sigma(T)^2={s_t:.15g} != sigma(T^H)^2={s_a:.15g}")
    pv = {}
    for label, X, dense in (("T", T, b_mn), ("T_swap", U, b_nm)):
        if X.size and max(X.shape) <= DENSE_LIMIT:
            p = power_iteration(X).value
            rel = abs(p - dense) / max(dense, 1e-300)
            pv[label] = rel
            if rel > svd_tol:
                problems.append(f"power iteration {p:.15g} vs svd {dense:.15g} on {label}")
    return DualityReport(M, N, b_mn, b_nm, s_t, s_a, pv, problems)


# Dirichlet-character side: rows (q, chi), columns rational m


def squarefree_int(m: int) -> bool:
    return all(e == 1 for _, e in trial_factor_int(m)) if m > 1 else m == 1


def squarefree_range(lo: int, hi: int, odd_only: bool = False) -> list[int]:
    """Square-free integers in (lo, hi]."""
    return [m for m in range(lo + 1, hi + 1) if squarefree_int(m) and (not odd_only or m % 2)]


def theorem2_bounds(Q: float, M: float) -> dict:
    return {
        "Q^{7/4}+M": Q**1.75 + M,
        "Q^{11/8}+Q^{1/2}M": Q**1.375 + Q**0.5 * M,
        "Q^{5/4}+Q^{2/3}M": Q**1.25 + Q ** (2 / 3) * M,
        "Q+Q^{1/2}M+M^{17/7}": Q + Q**0.5 * M + M ** (17 / 7),
    }


def theorem2_matrix(Q: int, M: int, odd_only: bool = False) -> tuple[np.ndarray, list, list[int], int]:
    """Rows (q, chi) over primitive quartic chi mod q, Q < q <= 2Q; columns m."""
    cols = squarefree_range(M, 2 * M, odd_only)
    rows, data, skipped = [], [], 0
    for q in range(Q + 1, 2 * Q + 1):
        try:
            chars = list_order4_primitive(q)
        except UnsupportedModulus as exc:
            log.warning("skipping modulus %d: %s", q, exc)
            skipped += 1
            continue
        for chi in chars:
            rows.append((q, chi.exponents))
            data.append([chi(m) for m in cols])
    T = np.array(data, dtype=complex).reshape(len(rows), len(cols))
    return T, rows, cols, skipped


def empirical_theorem2(Q: int, M: int, eps: float = 0.1) -> SieveReport:
    if Q < 1 or M < 1:
        raise ValueError("Q and M must be at least 1")
    if Q > DESK_LIMIT or M > DESK_LIMIT:
        raise ValueError(f"Q and M are limited to {DESK_LIMIT} (desk scale)")
    T, rows, cols, skipped = theorem2_matrix(Q, M)
    value, method = spectral_norm_sq(T)
    terms = theorem2_bounds(Q, M)
    return SieveReport(
        kind="theorem2",
        params={"Q": Q, "M": M},
        rows=len(rows),
        cols=len(cols),
        empirical_norm=value,
        bound_terms=terms,
        bound=min(terms.values()),
        eps=eps,
        method=method,
        skipped=skipped,
    )


@dataclass
class TransformationReport:
    q: int
    dirichlet_side: float
    zi_side: float
    zi_side_pm: float
    characters: int
    generators: int

    @property
    def rel_err(self) -> float:
        return abs(self.dirichlet_side - self.zi_side) / max(abs(self.dirichlet_side), 1e-300)

    def to_dict(self) -> dict:
        return {"q": self.q, "dirichlet_side": self.dirichlet_side, "zi_side": self.zi_side,
                "zi_side_pm_half": self.zi_side_pm, "rel_err": self.rel_err,
                "characters": self.characters, "generators": self.generators}


def transformation_check(q: int, M: int, coeffs: Sequence[complex]) -> TransformationReport:
    """Single-q slice of the Dirichlet sum against the Z[i] side.

    Dirichlet side: sum over primitive quartic chi mod q of |sum a_m chi(m)|^2
    with m odd square-free in (M, 2M].  Z[i] side: the same with chi replaced
    by m -> (m/n)_4 for n primary, square-free, free of rational prime
    divisors and N(n) = q; the +-1 variant sums over n and -n and halves.
    """
    cols = squarefree_range(M, 2 * M, odd_only=True)
    a = np.asarray(coeffs, dtype=complex)
    if a.shape != (len(cols),):
        raise ValueError(f"expected {len(cols)} coefficients, got {a.shape}")
    chars = list_order4_primitive(q)
    lhs = sum(abs(sum(a[j] * chi(m) for j, m in enumerate(cols))) ** 2 for chi in chars)
    gens = [c.generator for c in enumerate_quartic_family(q)]
    rhs = sum(abs(sum(a[j] * complex(chi_eval(n, m)) for j, m in enumerate(cols))) ** 2 for n in gens)
    pm = list(enumerate_primary(q - 1, q, squarefree=True, no_rational_prime_divisor=True,
                                allow_negated=True))
    rhs_pm = 0.5 * sum(
        abs(sum(a[j] * complex(chi_eval(n, m)) for j, m in enumerate(cols))) ** 2 for n in pm
    )
    return TransformationReport(q, float(lhs), float(rhs), float(rhs_pm), len(chars), len(gens))


# regime table

REGIMES = (
    # (upper threshold exponent of M, label, Q-exponent, M-exponent)
    (Fraction(4, 7), "M", Fraction(0), Fraction(1)),
    (Fraction(4, 5), "Q^{7/4}", Fraction(7, 4), Fraction(0)),
    (Fraction(8, 7), "Q^{1/2}M", Fraction(1, 2), Fraction(1)),
    (Fraction(24, 17), "Q^{11/8}", Fraction(11, 8), Fraction(0)),
    (Fraction(12, 7), "Q^{2/3}M", Fraction(2, 3), Fraction(1)),
    (Fraction(68, 35), "Q^{5/4}", Fraction(5, 4), Fraction(0)),
    (Fraction(17, 7), "M^{17/7}", Fraction(0), Fraction(17, 7)),
    (None, "Q", Fraction(1), Fraction(0)),
)

# each min-term of the final bound as a list of (Q-exponent, M-exponent) pieces
MIN_TERMS = {
    "Q^{7/4}+M": ((1.75, 0), (0, 1)),
    "Q^{11/8}+Q^{1/2}M": ((1.375, 0), (0.5, 1)),
    "Q^{5/4}+Q^{2/3}M": ((1.25, 0), (2 / 3, 1)),
    "Q+Q^{1/2}M+M^{17/7}": ((1, 0), (0.5, 1), (0, 17 / 7)),
}


@dataclass
class RegimeResult:
    Q: float
    M: float
    x: float
    label: str
    bound_value: float
    boundary: bool
    argmin_term: str
    min_exponent: float
    table_exponent: float

    @property
    def consistent(self) -> bool:
        return self.boundary or abs(self.min_exponent - self.table_exponent) < 1e-9

    def to_dict(self) -> dict:
        return {"Q": self.Q, "M": self.M, "log_M(Q)": self.x, "label": self.label,
                "bound_value": self.bound_value, "boundary": self.boundary,
                "argmin_term": self.argmin_term, "min_exponent": self.min_exponent,
                "table_exponent": self.table_exponent, "consistent": self.consistent}


def piecewise_regime(Q: float, M: float, boundary_tol: float = 1e-9) -> RegimeResult:
    """Row of the regime table containing Q = M**x, plus an independent argmin.

    The argmin compares, as powers of M, the four terms of the final bound
    (each the maximum exponent of its pieces).
    """
    if Q < 2 or M < 2:
        raise ValueError("Q and M must be at least 2")
    x = math.log(Q) / math.log(M)
    boundary = False
    for upper, label, qe, me in REGIMES:
        if upper is not None and abs(x - float(upper)) < boundary_tol:
            boundary = True
        if upper is None or x <= float(upper):
            break
    table_exp = float(qe) * x + float(me)
    term_exps = {name: max(a * x + b for a, b in pieces) for name, pieces in MIN_TERMS.items()}
    argmin = min(term_exps, key=term_exps.get)
    return RegimeResult(Q, M, x, label, Q ** float(qe) * M ** float(me), boundary, argmin,
                        term_exps[argmin], table_exp)


# exponent recursion


@dataclass
class ExponentTrace:
    xi_history: list[Fraction]

    def to_dict(self) -> dict:
        return {"xi_history": [str(x) for x in self.xi_history],
                "final_float": float(self.xi_history[-1])}


def xi_step(xi: Fraction) -> Fraction:
    return (9 * xi - 6) / (4 * xi - 1)


def exponent_iteration(xi0: Fraction | int | str, steps: int) -> ExponentTrace:
    xi = Fraction(xi0)
    if not Fraction(3, 2) < xi <= 2:
        raise ValueError(f"xi0 must lie in (3/2, 2], got {xi}")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    hist = [xi]
    for _ in range(steps):
        xi = xi_step(xi)
        hist.append(xi)
    return ExponentTrace(hist)


def xi_fixed_points() -> list[Fraction]:
    """Solutions of xi = (9 xi - 6)/(4 xi - 1), i.e. 2 xi^2 - 5 xi + 3 = 0."""
    a, b, c = 2, -5, 3
    disc = b * b - 4 * a * c
    r = math.isqrt(disc)
    if r * r != disc:
        raise ArithmeticError("irrational fixed points")
    return sorted({Fraction(-b - r, 2 * a), Fraction(-b + r, 2 * a)})


# quadratic form helpers


def quadratic_form(S: SymbolMatrix, coeffs: dict[GaussianInteger, complex]) -> float:
    """sum over rows m of |sum over columns n of a_n (n/m)_4|^2, summed directly."""
    total = 0.0
    for m in S.rows:
        inner = 0j
        for n, a in coeffs.items():
            inner += a * complex(_symbol(n, m))
        total += abs(inner) ** 2
    return total


# sweeps


def _sweep_task(args):
    kind, x, y, eps = args
    if kind == "t1":
        return empirical_B1(x, y, eps)
    return empirical_theorem2(x, y, eps)


def sweep(kind: str, grid: Sequence[int], eps: float = 0.1, jobs: int = 1) -> list[SieveReport]:
    """All (x, y) in grid x grid; results in task order whatever the pool does."""
    if kind not in ("t1", "t2"):
        raise ValueError("kind must be t1 or t2")
    tasks = [(kind, x, y, eps) for x in grid for y in grid]
    if jobs <= 1:
        return [_sweep_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_task, tasks))
