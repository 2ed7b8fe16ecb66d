"""Discretised closed filaments and the right-hand side of the filament-pair model.

A filament is sampled at N points with uniform parameter spacing 2*pi/N. The
velocity of filament X interacting with Y is

    X_t = G1 X' x X'' / |X'|^3 - alpha G2 Y' x (X - Y) / |X - Y|^3

where primes are parameter derivatives and points of X and Y are paired at
equal parameter values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PhysicalState
from .errors import FilamentContact, InvalidInput

CONTACT_DISTANCE = 1e-12


@dataclass(frozen=True)
class DiscreteFilament:
    points: np.ndarray
    strength: float

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise InvalidInput(f"points must have shape (N, 3), got {pts.shape}")
        n = pts.shape[0]
        if n < 16 or n % 2:
            raise InvalidInput(f"need an even number of samples >= 16, got {n}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def shifted(self, offset) -> "DiscreteFilament":
        return DiscreteFilament(self.points + np.asarray(offset, dtype=float), self.strength)


def _fd4(p: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    p2, p1 = np.roll(p, -2, axis=0), np.roll(p, -1, axis=0)
    m1, m2 = np.roll(p, 1, axis=0), np.roll(p, 2, axis=0)
    d1 = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h)
    d2 = (-p2 + 16 * p1 - 30 * p + 16 * m1 - m2) / (12 * h * h)
    return d1, d2


def _spectral(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = p.shape[0]
    k = np.fft.fftfreq(n, d=1.0 / n)
    k1 = 1j * k
    k1[n // 2] = 0  # Nyquist mode has no odd derivative
    coef = np.fft.fft(p, axis=0)
    d1 = np.fft.ifft(k1[:, None] * coef, axis=0).real
    d2 = np.fft.ifft(-(k**2)[:, None] * coef, axis=0).real
    return d1, d2


def derivatives(points: np.ndarray, method: str = "fd4") -> tuple[np.ndarray, np.ndarray]:
    """First and second parameter derivatives of a periodic sample."""
    if method == "fd4":
        return _fd4(points, 2 * math.pi / points.shape[0])
    if method == "spectral":
        return _spectral(points)
    raise InvalidInput(f"unknown differentiation method {method!r}")


def pde_rhs(fx: DiscreteFilament, fy: DiscreteFilament, alpha: float, method: str = "fd4") -> np.ndarray:
    """Velocity of each sample of ``fx`` under self-induction and the pull of ``fy``."""
    if fx.n != fy.n:
        raise InvalidInput(f"sample counts differ: {fx.n} vs {fy.n}")
    sep = fx.points - fy.points
    dist = np.linalg.norm(sep, axis=1)
    if dist.min() <= CONTACT_DISTANCE:
        raise FilamentContact(f"paired samples {int(dist.argmin())} are {dist.min()!r} apart")
    dx, ddx = derivatives(fx.points, method)
    dy, _ = derivatives(fy.points, method)
    speed = np.linalg.norm(dx, axis=1)
    self_term = np.cross(dx, ddx) / speed[:, None] ** 3
    pair_term = np.cross(dy, sep) / dist[:, None] ** 3
    return fx.strength * self_term - alpha * fy.strength * pair_term


def sample_circular_pair(
    phys: PhysicalState, n: int, gamma1: float = 1.0, gamma2: float = 1.0
) -> tuple[DiscreteFilament, DiscreteFilament]:
    """Uniform samples of the two coaxial circles described by ``phys``."""
    if n < 16 or n % 2:
        raise InvalidInput(f"need an even number of samples >= 16, got {n}")
    xi = 2 * math.pi * np.arange(n) / n
    c, s = np.cos(xi), np.sin(xi)

    def ring(r, z):
        return np.column_stack([r * c, r * s, np.full(n, float(z))])

    return (
        DiscreteFilament(ring(phys.r1, phys.z1), gamma1),
        DiscreteFilament(ring(phys.r2, phys.z2), gamma2),
    )


def circular_components(vel: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split velocities of a circle sample into radial, azimuthal and axial parts."""
    xi = 2 * math.pi * np.arange(n) / n
    c, s = np.cos(xi), np.sin(xi)
    return vel[:, 0] * c + vel[:, 1] * s, -vel[:, 0] * s + vel[:, 1] * c, vel[:, 2]
