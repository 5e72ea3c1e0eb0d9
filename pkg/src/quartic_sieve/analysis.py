"""Smooth weight, its radial Fourier transform, theta sums and the Poisson check.

The weight is W(x) = exp(-1/((2x-1)(5-2x))) on (1/2, 5/2) and 0 elsewhere.
Its transform

    W~(t) = int int W(x^2 + y^2) e~(t (x+yi) / (2i)) dx dy

reduces to int int W(x^2+y^2) cos(2 pi t y) dx dy because the phase
z + conj(z) of t(x+yi)/(2i) is t*y.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import j0

from .gauss_sums import gauss_sum, residues_mod
from .gaussian import (
    GaussianInteger,
    IntLike,
    coprime,
    enumerate_primary,
    factor,
    is_primary,
    lattice_hnf,
)
from .symbol import QuarticSymbolValue, _symbol, quartic_symbol

R_INNER = math.sqrt(0.5)
R_OUTER = math.sqrt(2.5)
QUAD_ABS_TOL = 1e-9


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (error estimate {estimate:.3e})")
        self.estimate = estimate


class TruncationError(RuntimeError):
    pass


def weight_W(x: float) -> float:
    if 0.5 < x < 2.5:
        return math.exp(-1.0 / ((2 * x - 1) * (5 - 2 * x)))
    return 0.0


def weight_W_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 0.5) & (x < 2.5)
    v = x[inside]
    out[inside] = np.exp(-1.0 / ((2 * v - 1) * (5 - 2 * v)))
    return out


def _slice_integral(y: float) -> float:
    """int W(x^2 + y^2) dx over x >= 0."""
    lo = math.sqrt(max(0.0, 0.5 - y * y))
    hi = math.sqrt(max(0.0, 2.5 - y * y))
    if hi <= lo:
        return 0.0
    v, _ = integrate.quad(lambda x: weight_W(x * x + y * y), lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)
    return v


@lru_cache(maxsize=4096)
def _weight_W_tilde_quad(t: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if t < 2.0:
                v, err = integrate.quad(
                    lambda y: _slice_integral(y) * math.cos(2 * math.pi * t * y),
                    0.0, R_OUTER, points=[R_INNER], epsabs=1e-12, epsrel=1e-12, limit=400,
                )
            else:
                v, err = integrate.quad(
                    _slice_integral, 0.0, R_OUTER, weight="cos", wvar=2 * math.pi * t,
                    epsabs=1e-12, limit=400,
                )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"W~({t}) did not converge: {exc}", float("nan")) from exc
    # four quadrants by symmetry
    return 4 * v, 4 * err


def weight_W_tilde(t: float) -> float:
    """W~(t) by iterated adaptive Gauss-Kronrod quadrature in Cartesian coordinates."""
    if t < 0:
        raise ValueError("t must be non-negative")
    value, err = _weight_W_tilde_quad(float(t))
    if err > QUAD_ABS_TOL:
        raise QuadratureError(f"W~({t}) above tolerance", err)
    return value


def weight_W_tilde_polar(t: float, nodes: int = 4000) -> float:
    """Independent route: 2 pi int W(r^2) r J0(2 pi t r) dr (trapezoid)."""
    r = np.linspace(R_INNER, R_OUTER, nodes)
    h = r[1] - r[0]
    return float(2 * math.pi * h * np.sum(weight_W_array(r * r) * r * j0(2 * math.pi * t * r)))


def weight_W_tilde_zero_oracle() -> float:
    """W~(0) = pi int W(u) du."""
    v, _ = integrate.quad(weight_W, 0.5, 2.5, epsabs=1e-13, epsrel=1e-12)
    return math.pi * v


class TildeGrid:
    """Batch evaluation of W~ by the trapezoid rule on the same 2-D integral.

    The integrand is C-infinity with compact support, so the trapezoid rule
    is exact up to aliasing: the error at frequency t is of the size of
    W~(1/h - t).  Nodes are refined until rules with n and 4n/5 nodes agree.
    """

    ALIAS_MARGIN = 1000.0

    def __init__(self, t_max: float, target: float = 1e-12):
        n = int(R_OUTER * (t_max + self.ALIAS_MARGIN)) + 1
        probe = np.linspace(0.0, t_max, 97)
        while True:
            fine = self._slices(n)
            coarse = self._slices(4 * n // 5)
            err = float(np.max(np.abs(self._eval(fine, probe) - self._eval(coarse, probe))))
            if err <= target or n > 1 << 16:
                break
            n = 5 * n // 4
        self.t_max = t_max
        self.nodes = n
        self.error_estimate = err
        self._fine = fine

    @staticmethod
    def _slices(n: int) -> tuple[np.ndarray, np.ndarray]:
        # full-line trapezoid folded onto [0, R]: node 0 weight h, others 2h
        x = np.linspace(0.0, R_OUTER, n + 1)
        h = x[1] - x[0]
        fold = np.full(n + 1, 2 * h)
        fold[0] = h
        x2 = x * x
        A = np.array([fold @ weight_W_array(x2 + yy * yy) for yy in x])
        return x, A * fold

    @staticmethod
    def _eval(sl, ts) -> np.ndarray:
        y, aw = sl
        ts = np.asarray(ts, dtype=float).ravel()
        out = np.empty(ts.shape)
        for i in range(0, ts.size, 2048):
            chunk = ts[i : i + 2048]
            out[i : i + 2048] = np.cos(2 * math.pi * np.outer(chunk, y)) @ aw
        return out

    def __call__(self, ts) -> np.ndarray:
        return self._eval(self._fine, ts)


@lru_cache(maxsize=4)
def _tilde_envelope(t_cap: float, step: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    """(t, sup_{s >= t} |W~(s)|) on a grid; a property of W alone."""
    grid = TildeGrid(t_cap)
    ts = np.arange(0.0, t_cap, step)
    env = np.maximum.accumulate(np.abs(grid(ts))[::-1])[::-1]
    return ts, env


@dataclass(frozen=True)
class ChiSpec:
    """chi(a) = prod (a/n_j)_4 ** p_j; no factors means principal."""

    factors: tuple[tuple[GaussianInteger, int], ...] = ()

    @classmethod
    def principal(cls) -> ChiSpec:
        return cls(())

    @classmethod
    def parse(cls, text: str) -> ChiSpec:
        """``principal`` or ``n1:p1,n2:p2`` with Gaussian literals n_j."""
        text = text.strip()
        if text == "principal":
            return cls.principal()
        factors = []
        for part in text.split(","):
            lit, _, p = part.rpartition(":")
            if not lit:
                lit, p = p, "1"
            factors.append((GaussianInteger.parse(lit), int(p)))
        return cls(tuple(factors))

    def __post_init__(self) -> None:
        for n, _ in self.factors:
            if not (n.is_odd() and is_primary(n)):
                raise ValueError(f"character factor {n} must be odd primary")

    def conjugate(self) -> ChiSpec:
        return ChiSpec(tuple((n, -p) for n, p in self.factors))

    @property
    def is_principal(self) -> bool:
        return all(p % 4 == 0 for _, p in self.factors)

    def __call__(self, a: GaussianInteger) -> QuarticSymbolValue:
        v = QuarticSymbolValue(0)
        for n, p in self.factors:
            v = v * _symbol(a, n) ** (p % 4)
        return v

    def __str__(self) -> str:
        if not self.factors:
            return "principal"
        return ",".join(f"{n}:{p}" for n, p in self.factors)


@dataclass
class ThetaSum:
    w: float
    modulus: GaussianInteger
    chi: ChiSpec
    value: complex
    truncation_norm: int
    tail_bound: float
    comparison: float
    eps: float = 0.1

    @property
    def ratio(self) -> float:
        return abs(self.value) / self.comparison

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "modulus": str(self.modulus),
            "chi": str(self.chi),
            "principal": self.chi.is_principal,
            "value": self.value,
            "truncation_norm": self.truncation_norm,
            "tail_bound": self.tail_bound,
            "comparison": self.comparison,
            "ratio": self.ratio,
            "eps": self.eps,
        }


def _theta_tail(T: int, w: float) -> float:
    """Bound for sum over a in Z[i] with N(a) > T of exp(-2 pi N(a) w).

    Uses #{a : N(a) = k} <= 4 (2 sqrt(k) + 1).
    """
    x = math.exp(-2 * math.pi * w)
    total, k = 0.0, T + 1
    term = 4 * (2 * math.sqrt(k) + 1) * x**k
    while term > 1e-30 * max(total, 1e-300) and term > 0:
        total += term
        k += 1
        term = 4 * (2 * math.sqrt(k) + 1) * x**k
    return total


def _theta_truncation(w: float, target: float = 1e-12) -> int:
    T = 1
    while math.exp(-2 * math.pi * T * w) * T >= target:
        T += 1
    return T


def theta_sum(
    w: float,
    f: IntLike,
    chi: ChiSpec,
    truncation_norm: Optional[int] = None,
    eps: float = 0.1,
) -> ThetaSum:
    """sum over primary a coprime to f of chi(a) exp(-2 pi N(a) w)."""
    f = GaussianInteger.coerce(f)
    if f.is_unit() or f.is_zero():
        raise ValueError("theta_sum needs a non-unit modulus f")
    if not 0 < w <= 1:
        raise ValueError("w must lie in (0, 1]")
    T = truncation_norm if truncation_norm is not None else _theta_truncation(w)
    total = 0j
    for a in enumerate_primary(0, T):
        if not coprime(a, f):
            continue
        v = chi(a)
        if not v.is_zero:
            total += complex(v) * math.exp(-2 * math.pi * a.norm() * w)
    E = 1.0 if chi.is_principal else 0.0
    comparison = E / w + f.norm() ** (0.5 + eps)
    return ThetaSum(w, f, chi, total, T, _theta_tail(T, w), comparison, eps)


@dataclass
class PoissonCheckReport:
    n1: GaussianInteger
    n2: GaussianInteger
    M: float
    lhs: complex
    rhs: complex
    lhs_terms: int
    rhs_t_max: float
    rhs_terms: int
    rhs_shells: int
    rhs_tail_bound: float
    quadrature_error: float
    quadrature_nodes: int
    prefactor: complex
    notes: list[str] = field(default_factory=list)

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_err(self) -> float:
        return self.abs_err / max(abs(self.lhs), abs(self.rhs), 1.0)

    @property
    def degenerate(self) -> bool:
        """Both sides vanish by the i-rotation symmetry (chi(i) != 1)."""
        return "chi(i) != 1" in " ".join(self.notes)

    def to_dict(self) -> dict:
        return {
            "n1": str(self.n1),
            "n2": str(self.n2),
            "M": self.M,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "prefactor": self.prefactor,
            "lhs_terms": self.lhs_terms,
            "rhs_t_max": self.rhs_t_max,
            "rhs_terms": self.rhs_terms,
            "rhs_shells": self.rhs_shells,
            "rhs_tail_bound": self.rhs_tail_bound,
            "quadrature_error": self.quadrature_error,
            "quadrature_nodes": self.quadrature_nodes,
            "notes": self.notes,
        }


def _reduce_lattice(a: np.ndarray, b: np.ndarray, q: GaussianInteger) -> np.ndarray:
    """Index of a + bi in the canonical residue system mod q (vectorised)."""
    d, g, c = lattice_hnf(q)
    t = np.mod(b, g)
    k = (b - t) // g
    s = np.mod(a - k * c, d)
    return t * d + s


def _character_table(q: GaussianInteger, n1: GaussianInteger, n2: GaussianInteger) -> np.ndarray:
    reps = residues_mod(q).reps
    tab = np.zeros(len(reps), dtype=complex)
    for j, x in enumerate(reps):
        tab[j] = complex(_symbol(x, n1) * _symbol(x, n2).conjugate())
    return tab


def _envelope_tail(t_cap: float, density: float) -> tuple[np.ndarray, np.ndarray]:
    """Pessimistic bound for sum of |W~(t_k)| over lattice shells beyond t.

    About 2 pi density (t + 1) dt points have t_k in [t, t + dt]; W~ is
    replaced by its running maximum from the right, so cancellation is ignored.
    """
    ts, env = _tilde_envelope(t_cap)
    step = ts[1] - ts[0]
    tail = np.cumsum((2 * math.pi * density * (ts + 1.0) * env * step)[::-1])[::-1]
    return ts, tail


def poisson_identity_check(
    n1: IntLike,
    n2: IntLike,
    M: float,
    tol: float = 1e-4,
    t_cap: float = 1500.0,
) -> PoissonCheckReport:
    """Compare both sides of the Poisson identity for chi = (./n1)_4 conj((./n2)_4).

    LHS = sum over m in Z[i] of W(N(m)/M) chi(m), exact finite support.
    RHS = chi(-2i) g(n1) conj(g(n2)) M / N(q) (n2/n1)_4 conj((n1/n2)_4) (-1/n2)_4
          * sum over k in Z[i] of W~(sqrt(N(k) M / N(q))) conj(chi(k)).
    The k-sum is truncated once a no-cancellation tail bound drops below
    tol/10 (relative to max(|LHS|, 1)).
    """
    n1 = GaussianInteger.coerce(n1)
    n2 = GaussianInteger.coerce(n2)
    if M <= 0:
        raise ValueError("M must be positive")
    for n in (n1, n2):
        if not (n.is_odd() and is_primary(n)):
            raise ValueError(f"{n} must be odd and primary")
        if not factor(n).is_squarefree():
            raise ValueError(f"{n} must be square-free")
    if n1.is_unit():
        raise ValueError("n1 must be a non-unit")
    if not coprime(n1, n2):
        raise ValueError("n1 and n2 must be coprime")

    q = n1 * n2
    Nq = q.norm()
    table = _character_table(q, n1, n2)
    notes = []

    # left side: W vanishes for N(m) >= 2.5 M
    R = math.isqrt(int(2.5 * M)) + 1
    a, b = np.meshgrid(np.arange(-R, R + 1), np.arange(-R, R + 1), indexing="ij")
    a, b = a.ravel(), b.ravel()
    wts = weight_W_array((a * a + b * b) / M)
    live = wts > 0
    lhs = complex(np.sum(wts[live] * table[_reduce_lattice(a[live], b[live], q)]))

    def chi(x: GaussianInteger) -> QuarticSymbolValue:
        return _symbol(x, n1) * _symbol(x, n2).conjugate()

    if chi(GaussianInteger(0, 1)).k != 0:
        notes.append("chi(i) != 1: both sides vanish by the rotation m -> i m")

    g2 = gauss_sum(1, n2) if not n2.is_unit() else 1.0
    pref = (
        complex(chi(GaussianInteger(0, -2)))
        * gauss_sum(1, n1)
        * np.conj(g2)
        * M
        / Nq
        * complex(quartic_symbol(n2, n1))
        * complex(quartic_symbol(n1, n2).conjugate())
        * complex(quartic_symbol(-1, n2))
    )

    # right side
    density = Nq / M
    ts_env, tail = _envelope_tail(t_cap, density)
    target = tol / 10 * max(abs(lhs), 1.0)
    ok = np.nonzero(abs(pref) * tail <= target)[0]
    if ok.size == 0:
        raise TruncationError(
            f"RHS tail bound {abs(pref) * tail[-1]:.3e} above {target:.3e} at t_cap={t_cap}"
        )
    t_max = max(float(ts_env[ok[0]]), 1.0)
    tail_bound = float(abs(pref) * tail[ok[0]])
    grid = TildeGrid(t_max)

    K = int(math.ceil(t_max * math.sqrt(density))) + 1
    ks = np.arange(-K, K + 1)
    nu_parts, ch_parts = [], []
    for x in ks:
        nu = x * x + ks * ks
        keep = nu * M <= t_max * t_max * Nq
        if keep.any():
            idx = _reduce_lattice(np.full(int(keep.sum()), x), ks[keep], q)
            nu_parts.append(nu[keep])
            ch_parts.append(np.conj(table[idx]))
    nu = np.concatenate(nu_parts)
    ch = np.concatenate(ch_parts)
    shells, inverse = np.unique(nu, return_inverse=True)
    weights = np.bincount(inverse, weights=ch.real, minlength=shells.size) + 1j * np.bincount(
        inverse, weights=ch.imag, minlength=shells.size
    )
    # shells whose character sum cancels exactly contribute nothing
    live_shells = np.abs(weights) > 1e-9
    ts = np.sqrt(shells[live_shells] * M / Nq)
    rhs_sum = complex(np.sum(grid(ts) * weights[live_shells])) if ts.size else 0j
    return PoissonCheckReport(
        n1=n1,
        n2=n2,
        M=M,
        lhs=lhs,
        rhs=complex(pref * rhs_sum),
        lhs_terms=int(np.count_nonzero(live)),
        rhs_t_max=t_max,
        rhs_terms=int(np.count_nonzero(ch)),
        rhs_shells=int(ts.size),
        rhs_tail_bound=tail_bound,
        quadrature_error=grid.error_estimate,
        quadrature_nodes=grid.nodes,
        prefactor=complex(pref),
        notes=notes,
    )
