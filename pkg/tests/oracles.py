"""Independent numerical oracles used by the test suite.

These deliberately avoid the package's own closed forms: quadrature for
the oscillatory gain integral, coordinate geometry for element
distances, and plain midpoint integration for the real error function.
"""

import math

import numpy as np


def quadrature_f(alpha: float, beta: float, panels: int = 2 ** 16) -> complex:
    """Midpoint-rule value of (1/2) int_{-1}^{1} exp(j pi (a x^2 - b x)) dx."""
    x = (np.arange(panels) + 0.5) * (2.0 / panels) - 1.0
    vals = np.exp(1j * np.pi * (alpha * x * x - beta * x))
    return complex(0.5 * (2.0 / panels) * vals.sum())


def erf_real_quadrature(x: float, panels: int = 200001) -> float:
    """(2/sqrt(pi)) int_0^x exp(-y^2) dy by the midpoint rule."""
    y = (np.arange(panels) + 0.5) * (x / panels)
    return float(2.0 / math.sqrt(math.pi) * (x / panels) * np.exp(-y * y).sum())


def element_distance_by_coordinates(n_antennas: int, spacing: float,
                                    theta: float, r: float, n: int) -> float:
    """Distance from element n to the user, by explicit point placement.

    The user sits at (r cos(phi), r sin(phi)) with theta = sin(phi); the
    array lies on the y axis with element n at (0, delta_n * spacing).
    """
    phi = math.asin(theta)
    user = np.array([r * math.cos(phi), r * math.sin(phi)])
    delta = (2 * n - n_antennas + 1) / 2.0
    element = np.array([0.0, delta * spacing])
    return float(np.linalg.norm(user - element))


def steering_by_distances(n_antennas: int, wavelength: float,
                          theta: float, r: float) -> np.ndarray:
    """Near-field steering vector assembled element by element from the
    coordinate-geometry distances."""
    spacing = wavelength / 2.0
    out = np.empty(n_antennas, dtype=complex)
    for n in range(n_antennas):
        rn = element_distance_by_coordinates(n_antennas, spacing, theta, r, n)
        out[n] = np.exp(-2j * np.pi * (rn - r) / wavelength)
    return out / math.sqrt(n_antennas)
