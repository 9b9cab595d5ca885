"""Beam-gain evaluation: exact sums, the quadratic-phase (Taylor) model,
its closed form in terms of the complex error function, and half-gain
width measurement.

With alpha = N^2 d (1 - theta^2) / (8 r) and beta = N (theta - phi) / 2,
the quadratic-phase model of the sweep gain is the oscillatory integral

    f~(alpha, beta) = 1/2 int_{-1}^{1} exp(j pi (alpha x^2 - beta x)) dx,

whose closed form under completing the square is an erf difference. The
half-gain (rho = 1/2) width of the normalized pattern collapses to
B = N d (1 - theta^2) / r when alpha is large; that law is what the
distance estimator inverts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ArrayConfig, PolarPoint, near_field_steering
from .codebooks import DftCodebook
from .errors import DomainError, EmptyMainSetError
from .numerics import erf_complex

RAW = "raw"
CENTRAL_NORMALIZED = "central-normalized"


@dataclass(frozen=True)
class AlphaBeta:
    """Reduced coordinates of the quadratic-phase gain model."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be finite and positive, got {self.alpha}")

    @classmethod
    def from_geometry(cls, cfg: ArrayConfig, p: PolarPoint, phi: float) -> "AlphaBeta":
        n = cfg.n_antennas
        alpha = n**2 * cfg.spacing * (1.0 - p.theta**2) / (8.0 * p.r)
        beta = n * (p.theta - phi) / 2.0
        return cls(alpha=alpha, beta=beta)


@dataclass(frozen=True)
class BeamPattern:
    grid: np.ndarray
    gains: np.ndarray
    normalization: str = RAW


@dataclass(frozen=True)
class MainAngleSet:
    """Grid angles whose (normalized) gain exceeds the threshold rho."""

    angles: np.ndarray
    rho: float

    @property
    def width(self) -> float:
        return float(self.angles.max() - self.angles.min())


def exact_gain(cfg: ArrayConfig, p: PolarPoint, phi: float) -> float:
    """|b^H(theta, r) a(phi)| by the direct N-term sum."""
    b = near_field_steering(cfg, p)
    a = np.exp(1j * np.pi * cfg.element_offsets() * phi) / math.sqrt(cfg.n_antennas)
    return float(abs(np.vdot(b, a)))


def exact_gain_grid(cfg: ArrayConfig, p: PolarPoint, codebook: DftCodebook) -> np.ndarray:
    """Exact gains against every codeword of the sweep codebook."""
    b = near_field_steering(cfg, p)
    return np.abs(b.conj() @ codebook.matrix)


def taylor_f(cfg: ArrayConfig, p: PolarPoint, phi: float) -> complex:
    """Quadratic-phase model of the sweep response, as a complex value.

    (1/N) sum_n exp(j pi [-delta_n (theta - phi)
                          + delta_n^2 d (1 - theta^2) / (2 r)])
    """
    delta = cfg.element_offsets()
    phase = np.pi * (
        -delta * (p.theta - phi)
        + delta**2 * cfg.spacing * (1.0 - p.theta**2) / (2.0 * p.r)
    )
    return complex(np.exp(1j * phase).sum() / cfg.n_antennas)


def taylor_gain(cfg: ArrayConfig, p: PolarPoint, phi: float) -> float:
    return abs(taylor_f(cfg, p, phi))


_E34 = complex(math.cos(3 * math.pi / 4), math.sin(3 * math.pi / 4))


def closed_form_f(ab: AlphaBeta) -> complex:
    """Closed form of the quadratic-phase integral via complex erf."""
    a, b = ab.alpha, ab.beta
    sa = math.sqrt(a)
    pref = complex(math.cos(math.pi * (a - b * b) / (4 * a)),
                   math.sin(math.pi * (a - b * b) / (4 * a)))
    z1 = _E34 * math.sqrt(math.pi) * (b - 2 * a) / (2 * sa)
    z2 = _E34 * math.sqrt(math.pi) * (b + 2 * a) / (2 * sa)
    return pref * (erf_complex(z1) - erf_complex(z2)) / (4 * sa)


def central_gain(ab: AlphaBeta) -> float:
    """Large-alpha approximation of the gain at phi = theta: 1/(2 sqrt(alpha))."""
    return 1.0 / (2.0 * math.sqrt(ab.alpha))


def normalized_closed_form_gain(ab: AlphaBeta) -> float:
    """Normalized gain in reduced coordinates: (1/2)|erf(.) - erf(.)|."""
    a, b = ab.alpha, ab.beta
    sa = math.sqrt(a)
    z1 = _E34 * math.sqrt(math.pi) * (b - 2 * a) / (2 * sa)
    z2 = _E34 * math.sqrt(math.pi) * (b + 2 * a) / (2 * sa)
    return 0.5 * abs(erf_complex(z1) - erf_complex(z2))


def normalized_pattern(cfg: ArrayConfig, p: PolarPoint, codebook: DftCodebook) -> BeamPattern:
    """Sweep gains divided by the exact gain at phi = theta.

    The channel-level and steering-level normalizations coincide: the
    scalar sqrt(N) g exp(-j 2 pi r / lambda) cancels in the ratio.
    """
    gains = exact_gain_grid(cfg, p, codebook)
    g0 = exact_gain(cfg, p, p.theta)
    return BeamPattern(grid=codebook.angle_grid, gains=gains / g0,
                       normalization=CENTRAL_NORMALIZED)


def raw_pattern(cfg: ArrayConfig, p: PolarPoint, codebook: DftCodebook) -> BeamPattern:
    return BeamPattern(grid=codebook.angle_grid,
                       gains=exact_gain_grid(cfg, p, codebook), normalization=RAW)


def _contiguous_run(above: np.ndarray, center: int) -> tuple[int, int]:
    lo = center
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = center
    while hi < above.size - 1 and above[hi + 1]:
        hi += 1
    return lo, hi


def measure_width(pattern: BeamPattern, rho: float, contiguous: bool = True) -> MainAngleSet:
    """Main angle set at threshold rho and its range.

    With contiguous=True (the default) only the connected run of grid
    points around the strongest sample is kept, so sidelobe ripples and
    noise spikes cannot stretch the measured width.
    """
    if not 0 < rho < 1:
        raise ValueError(f"rho must be in (0, 1), got {rho}")
    above = pattern.gains > rho
    if not above.any():
        raise EmptyMainSetError(f"no grid gain exceeds rho = {rho}")
    if contiguous:
        peak = int(np.argmax(pattern.gains))
        if not above[peak]:
            raise EmptyMainSetError(f"peak gain {pattern.gains[peak]} below rho = {rho}")
        lo, hi = _contiguous_run(above, peak)
        angles = pattern.grid[lo:hi + 1][above[lo:hi + 1]]
    else:
        angles = pattern.grid[above]
    return MainAngleSet(angles=np.asarray(angles, dtype=float), rho=rho)


def interpolated_width(pattern: BeamPattern, rho: float) -> float:
    """Half-gain width with sub-grid crossings by linear interpolation
    between adjacent grid gains; used to validate the closed-form width
    law against something finer than the grid resolution."""
    above = pattern.gains > rho
    if not above.any():
        raise EmptyMainSetError(f"no grid gain exceeds rho = {rho}")
    peak = int(np.argmax(pattern.gains))
    lo, hi = _contiguous_run(above, peak)
    g, x = pattern.gains, pattern.grid
    if lo > 0:
        left = x[lo] + (rho - g[lo]) * (x[lo - 1] - x[lo]) / (g[lo - 1] - g[lo])
    else:
        left = x[0]
    if hi < x.size - 1:
        right = x[hi] + (rho - g[hi]) * (x[hi + 1] - x[hi]) / (g[hi + 1] - g[hi])
    else:
        right = x[-1]
    return float(right - left)


def closed_form_width(cfg: ArrayConfig, p: PolarPoint) -> float:
    """Half-gain beam width B = N d (1 - theta^2) / r."""
    if not abs(p.theta) < 1.0:
        raise DomainError("theta = +-1 degenerates the width law")
    return cfg.n_antennas * cfg.spacing * (1.0 - p.theta**2) / p.r
