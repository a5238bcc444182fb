"""Closed-form main terms and kernel integrals for shifted-zero statistics."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleAt

CONVENTIONS = ("paper", "derivation")


@dataclass(frozen=True)
class ShiftParams:
    """A shift ``lam >= 0`` with its two phase angles."""

    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError(f"shift must be >= 0, got {self.lam}")

    @property
    def theta(self) -> float:
        return math.atan(self.lam)

    @property
    def phi(self) -> float:
        return math.atan(self.lam / 2.0)


@dataclass(frozen=True)
class PairCorrConstants:
    amplitude: float
    phase: float


@dataclass(frozen=True)
class Phi2Integral:
    """Kernel integral of ``log y cos(lam log y - theta)``.

    ``value = first + second`` is exact; ``leading`` keeps only the
    ``x log x`` terms.
    """

    value: float
    leading: float
    first: float
    second: float


def _lam(params) -> float:
    return params.lam if isinstance(params, ShiftParams) else float(params)


def thm11_main_term(x, T, params):
    """``(2/pi) (1 + cos(lam log x - arctan lam) / sqrt(1 + lam^2)) T x log x``."""
    lam = _lam(params)
    x = np.asarray(x, dtype=float)
    logx = np.log(x)
    val = (2.0 / math.pi) * (1.0 + np.cos(lam * logx - math.atan(lam)) / math.hypot(1.0, lam))
    out = val * T * x * logx
    return float(out) if out.ndim == 0 else out


def psi_main_term(x, params):
    """``2 x log x (1 + cos(lam log x - arctan lam) / sqrt(1 + lam^2))``."""
    lam = _lam(params)
    x = np.asarray(x, dtype=float)
    logx = np.log(x)
    out = 2.0 * x * logx * (1.0 + np.cos(lam * logx - math.atan(lam)) / math.hypot(1.0, lam))
    return float(out) if out.ndim == 0 else out


def int_cos_closed(x: float, params) -> float:
    """``2 int_0^{log x} 2 cos(lam u) e^u du``."""
    lam = _lam(params)
    L = math.log(x)
    return 4.0 / (1.0 + lam * lam) * (x * (math.cos(lam * L) + lam * math.sin(lam * L)) - 1.0)


def int_usin_closed(x: float, params) -> float:
    """``2 lam int_0^{log x} u sin(lam u) e^u du``."""
    lam = _lam(params)
    L = math.log(x)
    d = 1.0 + lam * lam
    return (2.0 * lam * x / d) * (
        (L - (1.0 - lam * lam) / d) * math.sin(lam * L) - (lam * L - 2.0 * lam / d) * math.cos(lam * L)
    ) - 4.0 * (lam / d) ** 2


def psi2_leading(x: float, params) -> float:
    """``x log x`` part of the cosine-weighted prime sum: ``2 x log x cos(lam log x - theta) / sqrt(1+lam^2)``."""
    lam = _lam(params)
    L = math.log(x)
    return 2.0 * x * L * math.cos(lam * L - math.atan(lam)) / math.hypot(1.0, lam)


def kernel_h(x: float, y):
    """``-1/x`` for ``y <= x`` and ``3 x^3 / y^4`` beyond."""
    y = np.asarray(y, dtype=float)
    out = np.where(y <= x, -1.0 / x, 3.0 * x**3 / np.maximum(y, x) ** 4)
    return float(out) if out.ndim == 0 else out


def weight_w(s):
    """``-4 / ((s + 1)(s - 3))``, i.e. ``4 / (4 - (s - 1)^2)``.

    On critical-line pairs ``s = 1 + i t`` this is ``4 / (4 + t^2)``.
    """
    s_arr = np.asarray(s, dtype=complex)
    if np.any(s_arr == -1) or np.any(s_arr == 3):
        raise PoleAt("weight has poles at s = -1 and s = 3")
    out = -4.0 / ((s_arr + 1.0) * (s_arr - 3.0))
    return complex(out) if out.ndim == 0 else out


def phi1_kernel_integral(x: float) -> float:
    """``int_1^inf h_x(y) y log y dy / y``-type integral: ``x log x / 2 + 7x/4 - 1``."""
    return 0.5 * x * math.log(x) + 1.75 * x - 1.0


def phi2_kernel_integral(x: float, params) -> Phi2Integral:
    lam = _lam(params)
    theta = math.atan(lam)
    phi = math.atan(lam / 2.0)
    L = math.log(x)
    arg = lam * L - theta
    d1 = 1.0 + lam * lam
    d2 = 4.0 + lam * lam
    first = -(x / d1) * (
        (L - (1.0 - lam * lam) / d1) * math.cos(arg) + (lam * L - 2.0 * lam / d1) * math.sin(arg)
    ) + (3.0 * lam * lam - 1.0) / d1**2.5
    second = (3.0 * x / d2) * (
        (2.0 * L + (4.0 - lam * lam) / d2) * math.cos(arg) - (lam * L + 4.0 * lam / d2) * math.sin(arg)
    )
    leading = x * L * (
        -math.cos(lam * L - 2.0 * theta) / math.sqrt(d1) + 3.0 * math.cos(arg + phi) / math.sqrt(d2)
    )
    return Phi2Integral(value=first + second, leading=leading, first=first, second=second)


def pair_corr_constants(lam: float) -> PairCorrConstants:
    lam = float(lam)
    l2 = lam * lam
    amp = 2.0 / (l2 + 1.0) * math.sqrt((16.0 * l2 + 1.0) / (l2 + 4.0))
    phase = math.atan(lam * (l2 - 5.0) / (2.0 * (2.0 * l2 * l2 + 6.0 * l2 + 1.0)))
    return PairCorrConstants(amplitude=amp, phase=phase)


def recombine_trig(lam, L):
    """``1 - 2 cos(lam L - 2 theta)/(1+lam^2) + 6 cos(lam L - theta + phi)/sqrt((1+lam^2)(4+lam^2))``."""
    lam = np.asarray(lam, dtype=float)
    L = np.asarray(L, dtype=float)
    theta = np.arctan(lam)
    phi = np.arctan(lam / 2.0)
    d1 = 1.0 + lam * lam
    d2 = 4.0 + lam * lam
    out = 1.0 - 2.0 / d1 * np.cos(lam * L - 2.0 * theta) + 6.0 / np.sqrt(d1 * d2) * np.cos(
        lam * L - theta + phi
    )
    return float(out) if out.ndim == 0 else out


def recombined_phasor(lam: float) -> PairCorrConstants:
    """Amplitude and phase of the two cosines in :func:`recombine_trig` merged into one.

    The bracket equals ``1 + amplitude * cos(lam L - phase)``; the phase is
    taken in ``(-pi, pi]``.
    """
    p = ShiftParams(float(lam))
    d1 = 1.0 + p.lam**2
    d2 = 4.0 + p.lam**2
    z = -2.0 / d1 * cmath.exp(-2j * p.theta) + 6.0 / math.sqrt(d1 * d2) * cmath.exp(
        -1j * (p.theta - p.phi)
    )
    return PairCorrConstants(amplitude=abs(z), phase=_wrap(-cmath.phase(z)))


def phase_mismatch(lam: float) -> float:
    """Wrapped difference between the closed-form phase and the phasor phase."""
    return _wrap(pair_corr_constants(lam).phase - recombined_phasor(lam).phase)


def _wrap(angle: float) -> float:
    w = math.remainder(angle, 2.0 * math.pi)
    return math.pi if w == -math.pi else w


def thm12_prediction(alpha, T: float, lam: float, convention: str = "paper"):
    """Predicted pair correlation at ``alpha``.

    ``convention="paper"`` gives ``2 alpha (1 + A cos(4 alpha lam log T - theta_lam))``;
    ``"derivation"`` gives half of that, which is what dividing the weighted
    pair sum by the zero count ``(4/pi) T log T`` produces.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    c = pair_corr_constants(lam)
    alpha = np.asarray(alpha, dtype=float)
    core = alpha * (1.0 + c.amplitude * np.cos(4.0 * alpha * lam * math.log(T) - c.phase))
    out = 2.0 * core if convention == "paper" else core
    return float(out) if out.ndim == 0 else out


def zero_free_width(t, level: int, weight: int, c: float):
    """``c / log(N (|t| + k + 3))``; ``c`` is the unspecified absolute constant."""
    if c <= 0:
        raise ValueError("c must be positive")
    t = np.asarray(t, dtype=float)
    out = c / np.log(level * (np.abs(t) + weight + 3.0))
    return float(out) if out.ndim == 0 else out
