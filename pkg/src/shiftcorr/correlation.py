"""Sums over zeros of the shifted product and the pair-correlation function.

Every pair sum here is over ordered pairs ``(rho, rho')`` of a finite zero
multiset and depends only on ``s = gamma + gamma'``.  Because the summand is
symmetric in the pair, the kernels visit each unordered pair once and count
it twice; the diagonal is counted once.

Determinism: the outer (row) loop is split into fixed chunks of
``ROW_CHUNK`` rows, each chunk returns compensated partial sums, and the
partials are combined in chunk order.  Results are bit-identical for any
worker count.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from numba import njit

from .errors import (
    EmptyZeroSet,
    IntegerX,
    OutOfRange,
    PairBudgetExceeded,
    QuadratureNonConvergence,
)
from .lfunction_dirichlet import VonMangoldtTable, lambda_L_shifted
from .summation import chunk_bounds, chunked_reduce, combine_partials
from .zero_data import LambdaZeroSet

PAIR_BUDGET = 4_000_000_000
ROW_CHUNK = 64
BIN_WIDTH = 1e-4
SLAB_BINS = 1 << 22
IMAG_TOL = 1e-9

_CAUCHY = 0  # x^{1+is} / (1+is)
_WEIGHT = 1  # x^{is} * 4 / (4+s^2)


@dataclass
class CorrelationResult:
    kind: str
    method: str
    grid: np.ndarray
    values: np.ndarray
    T: float | None = None
    lam: float | None = None
    label: str | None = None
    pair_count: int = 0
    runtime_ms: float = 0.0
    extra: dict = field(default_factory=dict)


def _ordinates(zeros) -> np.ndarray:
    if isinstance(zeros, LambdaZeroSet):
        return np.ascontiguousarray(zeros.ordinates, dtype=float)
    g = np.sort(np.asarray(zeros, dtype=float).ravel(), kind="stable")
    return np.ascontiguousarray(g)


def _window(zeros, T):
    if T is not None:
        return float(T)
    if isinstance(zeros, LambdaZeroSet):
        return zeros.window
    g = _ordinates(zeros)
    return float(np.max(np.abs(g))) if g.size else 0.0


# -- single sum ---------------------------------------------------------------


@njit(cache=True, nogil=True)
def _exp_sum(g, logs):
    out = np.empty((logs.size, 2))
    for m in range(logs.size):
        L = logs[m]
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        for j in range(g.size):
            v = math.cos(g[j] * L)
            t = sr + v
            if abs(sr) >= abs(v):
                cr += (sr - t) + v
            else:
                cr += (v - t) + sr
            sr = t
            v = math.sin(g[j] * L)
            t = si + v
            if abs(si) >= abs(v):
                ci += (si - t) + v
            else:
                ci += (v - t) + si
            si = t
        out[m, 0] = sr + cr
        out[m, 1] = si + ci
    return out


def single_zero_sum(zeros, x):
    """``sum_rho x^rho = sqrt(x) sum_gamma e^{i gamma log x}``; ``x`` may be an array."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 1):
        raise OutOfRange("x must exceed 1")
    g = _ordinates(zeros)
    logs = np.log(xa)
    parts = _exp_sum(g, logs)
    out = np.sqrt(xa) * (parts[:, 0] + 1j * parts[:, 1])
    return complex(out[0]) if np.ndim(x) == 0 else out


# -- Landau-Gonek comparison ---------------------------------------------------


@dataclass(frozen=True)
class LGComparison:
    x: float
    n_x: int
    lhs: complex
    main: float


def nearest_integer(x: float) -> int:
    """Nearest integer with ties going to the even neighbour."""
    return int(round(x))


def lg_main_term(vm: VonMangoldtTable, x: float, lam: float, T: float) -> float:
    """``-(Lambda_{L_lam}(n_x)/pi) sin(T log(x/n_x)) / log(x/n_x)``.

    At ``x = n_x`` the removable singularity is filled by its limit
    ``-Lambda_{L_lam}(n_x) T / pi``.
    """
    n = nearest_integer(x)
    if n < 1:
        return 0.0
    if n > vm.max_index:
        raise OutOfRange(f"nearest integer {n} exceeds table size {vm.max_index}")
    lam_n = lambda_L_shifted(vm, n, lam)
    u = math.log(x / n)
    ratio = T if u == 0.0 else math.sin(T * u) / u
    return -lam_n / math.pi * ratio


def landau_gonek_compare(zeros: LambdaZeroSet, vm: VonMangoldtTable, x: float, lam=None) -> LGComparison:
    if abs(x - round(x)) < 1e-9:
        raise IntegerX(f"x = {x} is an integer; the comparison needs x off the integers")
    lam = zeros.lam if lam is None else lam
    main = lg_main_term(vm, x, lam, zeros.window)
    return LGComparison(x=float(x), n_x=nearest_integer(x), lhs=single_zero_sum(zeros, x), main=main)


def local_maxima(values) -> np.ndarray:
    """Indices of strict interior local maxima (plateaus count at their left end)."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return np.zeros(0, dtype=np.int64)
    left = v[1:-1] > v[:-2]
    right = v[1:-1] >= v[2:]
    return np.flatnonzero(left & right) + 1


# -- pair kernels --------------------------------------------------------------


@njit(cache=True, nogil=True, fastmath=True)
def _row_dots(er, ei, kr, ki, start, complex_k, acc):
    # fastmath only here: plain dot products along one row, vectorised
    n = kr.size
    for q in range(er.shape[0]):
        ar = 0.0
        ai = 0.0
        if complex_k:
            for k in range(start, n):
                ar += er[q, k] * kr[k] - ei[q, k] * ki[k]
                ai += er[q, k] * ki[k] + ei[q, k] * kr[k]
        else:
            for k in range(start, n):
                ar += er[q, k] * kr[k]
                ai += ei[q, k] * kr[k]
        acc[q, 0] = ar
        acc[q, 1] = ai


@njit(cache=True, nogil=True)
def _pair_rows(g, er, ei, lo, hi, mode, skip_diag):
    n = g.size
    m = er.shape[0]
    out = np.zeros((m, 4))
    kr = np.zeros(n)
    ki = np.zeros(n)
    acc = np.empty((m, 2))
    for j in range(lo, hi):
        gj = g[j]
        start = j + 1 if skip_diag else j
        for k in range(start, n):
            s = gj + g[k]
            f = 1.0 if k == j else 2.0
            if mode == 0:
                d = f / (1.0 + s * s)
                kr[k] = d
                ki[k] = -s * d
            else:
                kr[k] = 4.0 * f / (4.0 + s * s)
        _row_dots(er, ei, kr, ki, start, mode == 0, acc)
        for q in range(m):
            # multiply the row sum by e^{i g_j L}
            v = er[q, j] * acc[q, 0] - ei[q, j] * acc[q, 1]
            t = out[q, 0] + v
            if abs(out[q, 0]) >= abs(v):
                out[q, 1] += (out[q, 0] - t) + v
            else:
                out[q, 1] += (v - t) + out[q, 0]
            out[q, 0] = t
            v = er[q, j] * acc[q, 1] + ei[q, j] * acc[q, 0]
            t = out[q, 2] + v
            if abs(out[q, 2]) >= abs(v):
                out[q, 3] += (out[q, 2] - t) + v
            else:
                out[q, 3] += (v - t) + out[q, 2]
            out[q, 2] = t
    res = np.empty((m, 2))
    for q in range(m):
        res[q, 0] = out[q, 0] + out[q, 1]
        res[q, 1] = out[q, 2] + out[q, 3]
    return res


def pair_sum(g, logs, mode: int, skip_diag: bool = False, workers: int = 1) -> np.ndarray:
    """``sum_{j,k} e^{i s L} K(s)`` at each ``L`` in ``logs``, ``s = g_j + g_k``.

    ``mode`` 0 uses ``K(s) = 1/(1+is)``, mode 1 uses ``K(s) = 4/(4+s^2)``.
    The phase is split as ``e^{i g_j L} e^{i g_k L}`` so the pair loop needs
    no trigonometry.
    """
    g = np.ascontiguousarray(g, dtype=float)
    logs = np.ascontiguousarray(np.atleast_1d(logs), dtype=float)
    if g.size == 0:
        return np.zeros(logs.size, dtype=complex)
    phase = np.outer(logs, g)
    er = np.ascontiguousarray(np.cos(phase))
    ei = np.ascontiguousarray(np.sin(phase))
    kernel = partial(_pair_kernel, g, er, ei, mode, skip_diag)
    parts = chunked_reduce(kernel, g.size, ROW_CHUNK, workers)
    return parts[:, 0] + 1j * parts[:, 1]


def _pair_kernel(g, er, ei, mode, skip_diag, lo, hi):
    return _pair_rows(g, er, ei, lo, hi, mode, skip_diag)


def _check_budget(n_pairs: int, n_points: int, budget: int):
    ops = n_pairs * n_points
    if ops > budget:
        raise PairBudgetExceeded(
            f"{n_pairs} pairs x {n_points} points = {ops} term evaluations exceeds budget {budget}"
        )


# -- double sum -----------------------------------------------------------------


def double_zero_sum(
    zeros,
    x,
    method: str = "direct",
    include_diagonal: bool = True,
    workers: int = 1,
    pair_budget: int = PAIR_BUDGET,
):
    """``sum_{rho, rho'} x^{rho+rho'} / (rho+rho')`` over ordered pairs.

    ``method="integral_oracle"`` integrates ``S(t)^2 / t`` over ``(0, x]``
    instead (diagonal always included).
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa <= 1):
        raise OutOfRange("x must exceed 1")
    g = _ordinates(zeros)
    if method == "direct":
        _check_budget(g.size * g.size, xa.size, pair_budget)
        out = xa * pair_sum(g, np.log(xa), _CAUCHY, not include_diagonal, workers)
    elif method == "integral_oracle":
        if not include_diagonal:
            raise ValueError("the integral oracle always includes the diagonal")
        T = float(np.max(np.abs(g))) if g.size else 1.0
        out = np.array([_square_integral(g, math.log(v), max(T, 1.0)) for v in xa])
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(out[0]) if np.ndim(x) == 0 else out


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _square_integrand(g, u):
    acc = np.zeros(u.size, dtype=complex)
    for lo, hi in chunk_bounds(g.size, 256):
        acc += np.exp(1j * np.outer(u, g[lo:hi])).sum(axis=1)
    return np.exp(u) * acc * acc


@njit(cache=True, nogil=True)
def _uniform_panel_sums(g, u0, width, n_panels, nodes):
    # S(u) at the GK nodes of equal panels; e^{i g mid} is advanced panel to
    # panel and reseeded every 256 panels to stop phase drift
    out = np.zeros((n_panels, nodes.size), dtype=np.complex128)
    half = 0.5 * width
    offs = np.empty(nodes.size, dtype=np.complex128)
    for j in range(g.size):
        step = cmath.exp(1j * g[j] * width)
        for k in range(nodes.size):
            offs[k] = cmath.exp(1j * g[j] * half * nodes[k])
        cur = 0j
        for p in range(n_panels):
            if p % 256 == 0:
                cur = cmath.exp(1j * g[j] * (u0 + (p + 0.5) * width))
            else:
                cur *= step
            for k in range(nodes.size):
                out[p, k] += cur * offs[k]
    return out


def _square_integral(g, L, T, tol=1e-9, max_depth=30, tail=40.0):
    """``int_{-inf}^{L} e^u (sum_j e^{i g_j u})^2 du`` by adaptive GK15 panels."""
    n = max(g.size, 1)
    u0 = L - (2.0 * math.log(n) + tail)
    width0 = math.pi / (4.0 * T)
    n_panels = max(1, math.ceil((L - u0) / width0))
    width0 = (L - u0) / n_panels
    a = u0 + width0 * np.arange(n_panels)
    b = a + width0
    pending = list(zip(a, b))
    accepted = []
    depth = 0
    while pending:
        a = np.array([p[0] for p in pending])
        b = np.array([p[1] for p in pending])
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        u = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
        if depth == 0:
            s = _uniform_panel_sums(g, u0, width0, n_panels, _NODES).ravel()
            f = (np.exp(u) * s * s).reshape(len(pending), 15)
        else:
            f = _square_integrand(g, u).reshape(len(pending), 15)
        k15 = half * (f @ _WK)
        g7 = half * (f @ _WG15)
        err = np.abs(k15 - g7)
        ok = err <= tol
        accepted.extend(k15[ok].tolist())
        if ok.all():
            break
        depth += 1
        if depth > max_depth:
            raise QuadratureNonConvergence(f"{int((~ok).sum())} panels above tolerance {tol}")
        pending = []
        for lo, mi, hi in zip(a[~ok], mid[~ok], b[~ok]):
            pending += [(lo, mi), (mi, hi)]
    re = math.fsum(v.real for v in accepted)
    im = math.fsum(v.imag for v in accepted)
    return complex(re, im)


# -- weighted sum and F_lambda --------------------------------------------------


def weighted_double_sum(zeros, x, workers: int = 1, pair_budget: int = PAIR_BUDGET):
    """``sum_{rho, rho'} x^{rho+rho'-1} w(rho+rho')`` with ``w(1+it) = 4/(4+t^2)``."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    g = _ordinates(zeros)
    _check_budget(g.size * g.size, xa.size, pair_budget)
    out = pair_sum(g, np.log(xa), _WEIGHT, False, workers)
    return complex(out[0]) if np.ndim(x) == 0 else out


def kernel_identity_sides(zeros, x: float, tol: float = 1e-10) -> tuple[complex, complex]:
    """Both sides of the kernel identity behind the weighted sum.

    Integrating each term ``y^s / s`` of the double sum against the kernel
    ``h_x`` gives ``x^s w(s) + 1/(x s (s+1))``.  Returns the quadrature
    assembly of ``(1/x) (int_1^inf h_x(y) D(y) dy - (1/x) sum 1/(s(s+1)))``
    and the direct weighted sum.
    """
    from scipy.integrate import quad_vec

    g = _ordinates(zeros)
    L = math.log(x)
    s_all = 1.0 + 1j * (g[:, None] + g[None, :]).ravel()
    corr = complex(np.sum(1.0 / (s_all * (s_all + 1.0))))
    smax = float(2.0 * np.max(np.abs(g))) if g.size else 1.0

    def integrand(u):
        y = math.exp(u)
        d = y * complex(pair_sum(g, [u], _CAUCHY)[0])
        h = -1.0 / x if y <= x else 3.0 * x**3 / y**4
        val = h * d * y
        return np.array([val.real, val.imag])

    def piece(a, b):
        n_pts = max(2, int((b - a) * smax / math.pi) + 2)
        pts = np.linspace(a, b, n_pts)
        total = np.zeros(2)
        for lo, hi in zip(pts[:-1], pts[1:]):
            v, _ = quad_vec(integrand, lo, hi, epsabs=tol, epsrel=1e-12)
            total += v
        return total

    inner = piece(0.0, L)
    outer = piece(L, L + 40.0)
    integral = complex(inner[0] + outer[0], inner[1] + outer[1])
    assembled = (integral - corr / x) / x
    direct = weighted_double_sum(g, x)
    return assembled, direct


@njit(cache=True, nogil=True)
def _hist_slab(g, b0, nb, bw, out):
    n = g.size
    lo_s = (b0 - 0.5) * bw
    hi_s = (b0 + nb - 0.5) * bw
    for j in range(n):
        gj = g[j]
        k = np.searchsorted(g, lo_s - gj - 2.0 * bw)
        if k < j:
            k = j
        while k < n:
            s = gj + g[k]
            if s >= hi_s + 2.0 * bw:
                break
            b = int(np.rint(s / bw)) - b0
            if 0 <= b < nb:
                f = 1.0 if k == j else 2.0
                out[b] += 4.0 * f / (4.0 + s * s)
            k += 1


@njit(cache=True, nogil=True)
def _hist_transform(hist, b0, bw, betas):
    """``sum_b hist[b] e^{i beta c_b}`` with centres ``c_b = (b0 + b) bw``."""
    m = betas.size
    res = np.zeros((m, 2))
    nb = hist.size
    for q in range(m):
        beta = betas[q]
        step_c = math.cos(beta * bw)
        step_s = math.sin(beta * bw)
        sr = 0.0
        cr = 0.0
        si = 0.0
        ci = 0.0
        zr = 0.0
        zi = 0.0
        for b in range(nb):
            if b % 1024 == 0:
                c0 = (b0 + b) * bw
                zr = math.cos(beta * c0)
                zi = math.sin(beta * c0)
            h = hist[b]
            if h != 0.0:
                v = h * zr
                t = sr + v
                if abs(sr) >= abs(v):
                    cr += (sr - t) + v
                else:
                    cr += (v - t) + sr
                sr = t
                v = h * zi
                t = si + v
                if abs(si) >= abs(v):
                    ci += (si - t) + v
                else:
                    ci += (v - t) + si
                si = t
            zr, zi = zr * step_c - zi * step_s, zr * step_s + zi * step_c
        res[q, 0] = sr + cr
        res[q, 1] = si + ci
    return res


def binned_pair_transform(g, betas, bin_width: float = BIN_WIDTH, workers: int = 1) -> np.ndarray:
    """Histogram ``s = g_j + g_k`` weighted by ``4/(4+s^2)`` and transform at each beta.

    The histogram is built slab by slab so memory stays bounded; slabs are
    independent and their transforms are combined in slab order.
    """
    g = np.ascontiguousarray(g, dtype=float)
    betas = np.ascontiguousarray(betas, dtype=float)
    if g.size == 0:
        return np.zeros(betas.size, dtype=complex)
    b_first = int(np.rint(2.0 * g[0] / bin_width))
    b_last = int(np.rint(2.0 * g[-1] / bin_width))
    total = b_last - b_first + 1
    starts = [b_first + i for i in range(0, total, SLAB_BINS)]

    def slab(b0):
        nb = min(SLAB_BINS, b_first + total - b0)
        hist = np.zeros(nb)
        _hist_slab(g, b0, nb, bin_width, hist)
        return _hist_transform(hist, b0, bin_width, betas)

    if workers <= 1 or len(starts) == 1:
        partials = [slab(b0) for b0 in starts]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(slab, starts))
    parts = combine_partials(partials)
    return parts[:, 0] + 1j * parts[:, 1]


def f_lambda(
    zeros,
    alpha_grid,
    T: float | None = None,
    method: str = "direct",
    bin_width: float = BIN_WIDTH,
    workers: int = 1,
    pair_budget: int = PAIR_BUDGET,
    return_info: bool = False,
):
    """Pair correlation ``F(alpha) = (1/N) sum e^{4 i alpha s log T} 4/(4+s^2)``.

    ``method="direct"`` falls back to ``"binned"`` when the pair count times
    the grid length exceeds ``pair_budget``.  Raises if the imaginary
    residue exceeds ``1e-9``.
    """
    g = _ordinates(zeros)
    if g.size == 0:
        raise EmptyZeroSet("no zeros in the window")
    alpha = np.atleast_1d(np.asarray(alpha_grid, dtype=float))
    T = _window(zeros, T)
    betas = 4.0 * alpha * math.log(T)
    used = method
    if method == "direct" and g.size * g.size * alpha.size > pair_budget:
        used = "binned"
    if used == "direct":
        vals = pair_sum(g, betas, _WEIGHT, False, workers)
    elif used == "binned":
        vals = binned_pair_transform(g, betas, bin_width, workers)
    else:
        raise ValueError(f"unknown method {method!r}")
    vals = vals / g.size
    resid = float(np.max(np.abs(vals.imag)))
    if resid > IMAG_TOL:
        raise ValueError(f"imaginary residue {resid:.3e} exceeds {IMAG_TOL}; zero multiset not symmetric?")
    if return_info:
        return vals.real, {"method": used, "imag_residue": resid, "pair_count": g.size * g.size}
    return vals.real


def evaluate(kind: str, zeros, grid, method: str = "direct", **kwargs) -> CorrelationResult:
    """Run one of the sums and wrap it with timing and pair-count metadata."""
    t0 = time.perf_counter()
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    info = {}
    if kind == "single_sum":
        values = single_zero_sum(zeros, grid)
    elif kind == "double_sum":
        values = double_zero_sum(zeros, grid, method=method, **kwargs)
    elif kind == "weighted_sum":
        values = weighted_double_sum(zeros, grid, **kwargs)
    elif kind == "f_lambda":
        values, info = f_lambda(zeros, grid, method=method, return_info=True, **kwargs)
        method = info["method"]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    n = _ordinates(zeros).size
    return CorrelationResult(
        kind=kind,
        method=method,
        grid=grid,
        values=np.atleast_1d(values),
        T=kwargs.get("T", zeros.window if isinstance(zeros, LambdaZeroSet) else None),
        lam=zeros.lam if isinstance(zeros, LambdaZeroSet) else None,
        label=getattr(getattr(zeros, "spec", None), "label", None),
        pair_count=0 if kind == "single_sum" else n * n,
        runtime_ms=1e3 * (time.perf_counter() - t0),
        extra=info,
    )


__all__ = [
    "CorrelationResult",
    "LGComparison",
    "binned_pair_transform",
    "double_zero_sum",
    "evaluate",
    "f_lambda",
    "kernel_identity_sides",
    "landau_gonek_compare",
    "lg_main_term",
    "local_maxima",
    "nearest_integer",
    "pair_sum",
    "single_zero_sum",
    "weighted_double_sum",
]
