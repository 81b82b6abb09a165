"""Coherent states of first-kind oscillators.

Amplitudes follow c_(k+1) = z c_k / sqrt(2(k+1)) with c_0 = exp(-|z|^2/4),
so the occupation numbers are Poisson with mean |z|^2/2 and the states are
eigenfunctions of a_- = d/dy + y with eigenvalue z. In x-space the state is
Theta_z(x) = J(x)^(1/2) theta_z(s(x)). Energies are quoted in the
dimensionless convention E_k = 2k + 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConvergenceError, DomainError
from .ladder import derivative4
from .mass_models import MassFamily, coordinate_map
from .special_fns import hermite_functions
from .transform import WaveSample


def required_truncation(z: complex) -> int:
    """Smallest n_trunc whose Poisson tail is below 1e-12."""
    mu = abs(z) ** 2 / 2.0
    return math.ceil(mu + 12.0 * math.sqrt(mu + 1.0) + 10.0)


def coherent_amplitudes(z: complex, n_trunc: Optional[int] = None) -> np.ndarray:
    """c_0..c_(n_trunc) by the two-term recurrence."""
    z = complex(z)
    need = required_truncation(z)
    if n_trunc is None:
        n_trunc = need
    if n_trunc < need:
        raise DomainError(f"n_trunc={n_trunc} is too small for |z|={abs(z):.6g}; need at least {need}")
    c = np.empty(n_trunc + 1, dtype=complex)
    c[0] = math.exp(-abs(z) ** 2 / 4.0)
    for k in range(n_trunc):
        c[k + 1] = c[k] * z / math.sqrt(2.0 * (k + 1))
    return c


def poisson_prob(z: complex, n: int) -> float:
    """|z|^(2n) exp(-|z|^2/2) / (2^n n!), evaluated in log form."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    r2 = abs(complex(z)) ** 2
    if r2 == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(r2 / 2.0) - r2 / 2.0 - math.lgamma(n + 1))


def energy_moments(z: complex) -> tuple[float, float]:
    """(<H>, Delta H) = (|z|^2 + 1, sqrt(2) |z|)."""
    r = abs(complex(z))
    return r * r + 1.0, math.sqrt(2.0) * r


@dataclass(frozen=True)
class CoherentState:
    z: complex
    n_trunc: int
    amplitudes: np.ndarray = field(repr=False)
    family: MassFamily = field(default_factory=MassFamily.constant)

    def __post_init__(self):
        total = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(total - 1.0) > 1e-12:
            raise ConvergenceError(f"amplitudes sum to {total!r}, not 1 within 1e-12")

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def energy_series(self) -> tuple[float, float]:
        """<H> and Delta H summed over the truncated populations."""
        p = self.populations
        e = 2.0 * np.arange(len(p)) + 1.0
        mean = float(np.dot(p, e))
        var = float(np.dot(p, (e - mean) ** 2))
        return mean, math.sqrt(var)


def coherent_state(z: complex, family: MassFamily | None = None,
                   n_trunc: Optional[int] = None) -> CoherentState:
    amps = coherent_amplitudes(z, n_trunc)
    return CoherentState(complex(z), len(amps) - 1, amps, family or MassFamily.constant())


def coherent_y(state: CoherentState, y) -> np.ndarray:
    """theta_z(y) = sum c_k phi_k(y)."""
    phis = hermite_functions(state.n_trunc, np.asarray(y, dtype=float))
    return np.tensordot(state.amplitudes, phis, axes=1)


def coherent_wavefunction(state: CoherentState, x, space: str = "x"):
    """Theta_z at ``x`` (x-space, default) or theta_z at ``x`` read as y."""
    if space == "y":
        return coherent_y(state, x)
    if space != "x":
        raise DomainError("space must be 'x' or 'y'")
    cmap = coordinate_map(state.family)
    x = np.asarray(x, dtype=float)
    return np.sqrt(cmap.jacobian(x)) * coherent_y(state, cmap.forward(x))


def displaced_ground_state(z: complex, y) -> np.ndarray:
    """pi^(-1/4) exp(-(y - Re z)^2/2 + i Im z y - i Re z Im z / 2) in closed form."""
    a, b = complex(z).real, complex(z).imag
    y = np.asarray(y, dtype=float)
    return math.pi ** -0.25 * np.exp(-0.5 * (y - a) ** 2 + 1j * (b * y - 0.5 * a * b))


def displace(wave: WaveSample, z: complex) -> WaveSample:
    """Apply D(z) = exp(-Re z d/dy + i Im z y) to a y-space sample.

    The translation is done spectrally, so ``wave`` should decay well
    inside its uniform grid.
    """
    if wave.space != "y":
        raise DomainError("displace acts on y-space samples")
    a, b = complex(z).real, complex(z).imag
    y = wave.grid
    h = float(y[1] - y[0])
    k = 2.0 * math.pi * np.fft.fftfreq(len(y), d=h)
    shifted = np.fft.ifft(np.fft.fft(wave.values) * np.exp(-1j * k * a))
    return WaveSample(y, shifted * np.exp(1j * (b * y - 0.5 * a * b)), "y")


def _spectral_derivative(values: np.ndarray, h: float) -> np.ndarray:
    k = 2.0 * math.pi * np.fft.fftfreq(len(values), d=h)
    return np.fft.ifft(1j * k * np.fft.fft(values))


def uncertainty_from_samples(wave: WaveSample) -> float:
    """Delta q * Delta p of a sampled state, with p = -i d/dq taken spectrally."""
    q = wave.grid
    h = float(q[1] - q[0])
    if np.max(np.abs(np.diff(q) - h)) > 1e-8 * abs(h):
        raise DomainError("uncertainty_from_samples needs a uniform grid")
    psi = np.asarray(wave.values, dtype=complex)
    norm = np.sum(np.abs(psi) ** 2) * h
    rho = np.abs(psi) ** 2 * h / norm
    mq = float(np.sum(rho * q))
    dq2 = float(np.sum(rho * (q - mq) ** 2))
    dpsi = _spectral_derivative(psi, h)
    mp = float(np.real(np.sum(np.conj(psi) * (-1j) * dpsi)) * h / norm)
    mp2 = float(np.sum(np.abs(dpsi) ** 2) * h / norm)
    dp2 = mp2 - mp * mp
    if dq2 < 0 or dp2 < 0:
        raise ConvergenceError("negative variance from quadrature")
    return math.sqrt(dq2 * dp2)


def _y_window(state: CoherentState, half_width: float, points: int) -> np.ndarray:
    c = state.z.real
    return np.linspace(c - half_width, c + half_width, points)


def uncertainty_product(state: CoherentState, half_width: float = 14.0, points: int = 4096) -> float:
    """Delta y * Delta p in y-space (hbar = 1); 1/2 for every coherent state."""
    y = _y_window(state, half_width, points)
    return uncertainty_from_samples(WaveSample(y, coherent_y(state, y), "y"))


def uncertainty_product_x(state: CoherentState, half_width: float = 8.0, points: int = 20001) -> float:
    """Delta x * Delta p_x of Theta_z on a uniform x grid (no lower bound is implied)."""
    cmap = coordinate_map(state.family)
    yw = _y_window(state, half_width, 2)
    x = np.linspace(float(cmap.inverse(yw[0])), float(cmap.inverse(yw[1])), points)
    lo, hi = state.family.domain
    x = x[(x > lo) & (x < hi)]
    psi = coherent_wavefunction(state, x)
    h = float(x[1] - x[0])
    norm = np.sum(np.abs(psi) ** 2) * h
    rho = np.abs(psi) ** 2 * h / norm
    mx = float(np.sum(rho * x))
    dx2 = float(np.sum(rho * (x - mx) ** 2))
    dpsi = derivative4(psi, h)
    mp = float(np.real(np.sum(np.conj(psi) * (-1j) * dpsi)) * h / norm)
    dp2 = float(np.sum(np.abs(dpsi) ** 2) * h / norm) - mp * mp
    return math.sqrt(dx2 * dp2)
