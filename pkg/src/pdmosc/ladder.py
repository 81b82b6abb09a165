"""Factorization H_a = AB + eps of position-dependent mass Hamiltonians.

With hbar = 1,

    A = -(1/sqrt 2) m^a d/dx m^b + beta,    B = (1/sqrt 2) m^b d/dx m^a + beta,

and (beta, eps) factorize V when the Riccati residual vanishes. The
oscillator beta makes [A, B] = -1 for every mass function, which turns A and
B into raising and lowering operators. Antiderivatives are based at the
point where s(x) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.integrate import quad

from ._quad import adaptive_simpson
from .errors import DomainError
from .mass_models import MassFamily, OrderingParameter, coordinate_map, numeric_derivatives
from .oscillators import FirstKindOscillator
from .transform import PotentialSpec, WaveSample

SQRT2 = math.sqrt(2.0)
MIN_LADDER_POINTS = 1001


def _out(v):
    return v if np.ndim(v) else float(v)


def _base_point(family: MassFamily) -> float:
    """x with s(x) = 0."""
    return float(coordinate_map(family).inverse(0.0))


# -- beta ---------------------------------------------------------------------
def beta_oscillator(family: MassFamily, a, x):
    """(1/sqrt 2) int m^(1/2) - (1/sqrt 2)(a + 1/4) m' / m^(3/2)."""
    a = float(a)
    cmap = coordinate_map(family)
    m, dm, _ = family.derivatives(x)
    integral = math.sqrt(family.m0) * np.asarray(cmap.forward(x))
    return _out((integral - (a + 0.25) * dm / m**1.5) / SQRT2)


def beta_oscillator_prime(family: MassFamily, a, x):
    a = float(a)
    m, dm, d2m = family.derivatives(x)
    return _out((np.sqrt(m) - (a + 0.25) * (d2m / m**1.5 - 1.5 * dm * dm / m**2.5)) / SQRT2)


@dataclass(frozen=True)
class FactorizationPair:
    """Mass, ordering, beta function and factorization energy.

    ``beta_prime`` is optional; without it the derivative of ``beta`` is
    taken by fourth-order central differences. ``base`` is the lower limit
    of the antiderivative in the missing state (default: s(x) = 0).
    """

    family: MassFamily
    ordering: OrderingParameter
    beta: Callable
    epsilon: float
    beta_prime: Optional[Callable] = None
    base: Optional[float] = None
    oscillator: bool = False

    @property
    def a(self) -> float:
        return float(self.ordering.a)

    def beta_at(self, x):
        return self.beta(x)

    def dbeta(self, x):
        if self.beta_prime is not None:
            return self.beta_prime(x)
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        vals = np.array([numeric_derivatives(self.beta, float(t))[0] for t in xs])
        return vals.reshape(np.shape(x)) if np.ndim(x) else float(vals[0])


def oscillator_pair(family: MassFamily, ordering: OrderingParameter | None = None) -> FactorizationPair:
    """Ladder pair ([A, B] = -1, eps = 1/2) for ``family``."""
    from .oscillators import default_ordering

    ordering = ordering if ordering is not None else default_ordering(family)
    a = ordering.a
    return FactorizationPair(
        family, ordering,
        beta=lambda x: beta_oscillator(family, a, x),
        epsilon=0.5,
        beta_prime=lambda x: beta_oscillator_prime(family, a, x),
        base=_base_point(family),
        oscillator=True,
    )


# -- pointwise identities -------------------------------------------------------
def _riccati_terms(pair: FactorizationPair, x):
    m, dm, _ = pair.family.derivatives(x)
    b = np.asarray(pair.beta(x), dtype=float)
    db = np.asarray(pair.dbeta(x), dtype=float)
    return (2.0 * (pair.a + 0.25) * (dm / m) * b - db) / np.sqrt(2.0 * m) + b * b


def riccati_residual(pair: FactorizationPair, V: PotentialSpec, x):
    """V - eps - (1/sqrt(2m)) [2(a + 1/4)(m'/m) beta - beta'] - beta^2."""
    return _out(np.asarray(V(x)) - pair.epsilon - _riccati_terms(pair, x))


def potential_from_beta(pair: FactorizationPair, x):
    """The potential that (beta, eps) factorizes exactly."""
    return _out(pair.epsilon + _riccati_terms(pair, x))


def commutator_value(pair: FactorizationPair, x):
    """[A, B] = -(a + 1/4)(m m'' - (3/2) m'^2) / m^3 - sqrt(2/m) beta'."""
    m, dm, d2m = pair.family.derivatives(x)
    db = np.asarray(pair.dbeta(x), dtype=float)
    return _out(-(pair.a + 0.25) * (m * d2m - 1.5 * dm * dm) / m**3 - np.sqrt(2.0 / m) * db)


def partner_potential(pair: FactorizationPair, V: PotentialSpec, x):
    """V~ = V - [A, B], the potential of BA + eps."""
    return _out(np.asarray(V(x)) - np.asarray(commutator_value(pair, x)))


# -- missing state ----------------------------------------------------------------
class MissingState(NamedTuple):
    psi_tilde: np.ndarray
    psi_m: np.ndarray
    tilde_normalizable: bool
    m_normalizable: bool


def _log_psi_tilde(pair: FactorizationPair, x: np.ndarray) -> np.ndarray:
    """log of m^(a+1/2) exp(sqrt 2 int_base^x m^(1/2) beta)."""
    fam = pair.family
    m = fam.mass(x)
    if pair.oscillator:
        # sqrt 2 int m^(1/2) beta = m0 s^2 / 2 - (a + 1/4) log m + const; the
        # constant is left to the normalization (m may be singular at the base)
        s = np.asarray(coordinate_map(fam).forward(x))
        expo = 0.5 * fam.m0 * s * s - (pair.a + 0.25) * np.log(m)
    else:
        expo = SQRT2 * _antiderivative(pair)(x)
    return (pair.a + 0.5) * np.log(m) + expo


class _Antiderivative:
    """int_base^x m^(1/2) beta, tabulated on knots so each call integrates one short panel."""

    def __init__(self, pair: FactorizationPair, y_reach: float = 12.0, panels: int = 480):
        fam = pair.family
        cmap = coordinate_map(fam)
        base = pair.base if pair.base is not None else _base_point(fam)
        ylo, yhi = cmap.y_domain
        y = np.linspace(max(ylo, -y_reach), min(yhi, y_reach), panels + 1)
        knots = np.unique(np.append(np.asarray(cmap.inverse(y), dtype=float), base))
        lo, hi = fam.domain
        knots = knots[(knots > lo) & (knots < hi)]
        self.f = lambda t: math.sqrt(fam.mass(t)) * float(pair.beta(t))
        seg = [adaptive_simpson(self.f, a, b, tol=1e-13) for a, b in zip(knots[:-1], knots[1:])]
        vals = np.concatenate(([0.0], np.cumsum(seg)))
        self.knots = knots
        self.vals = vals - vals[int(np.searchsorted(knots, base))]

    def _one(self, t: float) -> float:
        i = int(np.clip(np.searchsorted(self.knots, t), 1, len(self.knots) - 1))
        # start from the nearer end of the panel (or the table edge)
        j = i - 1 if abs(t - self.knots[i - 1]) <= abs(t - self.knots[i]) else i
        return float(self.vals[j] + adaptive_simpson(self.f, float(self.knots[j]), t, tol=1e-12))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.array([self._one(float(t)) for t in np.ravel(x)]).reshape(x.shape)


@lru_cache(maxsize=32)
def _antiderivative(pair: FactorizationPair) -> _Antiderivative:
    return _Antiderivative(pair)


def _end_probes(family: MassFamily) -> list[np.ndarray]:
    lo, hi = family.domain
    steps = 10.0 ** np.arange(-1, 7)
    out = []
    out.append(lo + 1.0 / steps if math.isfinite(lo) else -steps)
    out.append(hi - 1.0 / steps if math.isfinite(hi) else steps)
    return out


def _normalizable(logpsi: Callable, family: MassFamily, peak: float) -> bool:
    """Heuristic: |psi|^2 times the distance scale must die out at both ends."""
    lo, hi = family.domain
    for end, probes in zip((lo, hi), _end_probes(family)):
        if math.isfinite(end):
            scale = np.abs(probes - end)
        else:
            scale = np.abs(probes)
        with np.errstate(all="ignore"):
            vals = 2.0 * logpsi(probes) + np.log(scale)
        last = vals[-1]
        if np.isnan(last) or last > 2.0 * peak + math.log(1e-10):
            return False
    return True


def _norm_const(logpsi: Callable, family: MassFamily, peak: float) -> float:
    """sqrt(int |psi|^2 dx), integrated in y = s(x) where dx = dy / J."""
    cmap = coordinate_map(family)
    ylo, yhi = cmap.y_domain

    def f(y):
        # far tails where x or m leave floating range carry no weight
        try:
            with np.errstate(all="ignore"):
                x = np.array([float(cmap.inverse(y))])
                val = float(np.exp(2.0 * (logpsi(x)[0] - peak)) / family.jacobian(x)[0])
        except DomainError:
            return 0.0
        return val if math.isfinite(val) else 0.0

    opts = dict(limit=400, epsabs=0.0, epsrel=1e-12)
    total = quad(f, ylo, 0.0, **opts)[0] + quad(f, 0.0, yhi, **opts)[0]
    return math.exp(peak) * math.sqrt(total)


def missing_state(pair: FactorizationPair, x) -> MissingState:
    """psi~_eps = m^(a+1/2) exp(sqrt 2 int m^(1/2) beta) and psi_M = m^(1/2) / psi~_eps.

    Each function is L2-normalized on the family domain when the
    normalizability heuristic accepts it, and returned with unit constant
    otherwise.
    """
    fam = pair.family
    x = np.asarray(x, dtype=float)
    fam._check(x)

    def log_t(t):
        return _log_psi_tilde(pair, np.asarray(t, dtype=float))

    def log_m(t):
        t = np.asarray(t, dtype=float)
        return 0.5 * np.log(fam.mass(t)) - _log_psi_tilde(pair, t)

    out = []
    # sample away from the base point, which may be a pole of m
    probe = np.asarray(coordinate_map(fam).inverse(np.linspace(-6.0, 6.0, 240)))
    for logf in (log_t, log_m):
        with np.errstate(all="ignore"):
            peak = float(np.nanmax(logf(probe)))
        ok = _normalizable(logf, fam, peak)
        c = _norm_const(logf, fam, peak) if ok else 1.0
        out.append((np.exp(logf(x)) / c, ok))
    (pt, ok_t), (pm, ok_m) = out
    return MissingState(_out(pt), _out(pm), ok_t, ok_m)


# -- operators on sampled functions ------------------------------------------------
def _uniform_step(grid: np.ndarray) -> float:
    if len(grid) < MIN_LADDER_POINTS:
        raise DomainError(f"ladder operators need at least {MIN_LADDER_POINTS} grid points")
    d = np.diff(grid)
    h = float(np.mean(d))
    if np.max(np.abs(d - h)) > 1e-8 * abs(h):
        raise DomainError("ladder operators need a uniform grid")
    return h


def derivative4(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative on a uniform grid, one-sided at the ends."""
    f = np.asarray(values)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12.0 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12.0 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12.0 * h)
    return d


def apply_ladder(direction: str, osc: Optional[FirstKindOscillator], wave: WaveSample) -> WaveSample:
    """Apply a_- = d/dy + y (``lower``) or a_+ = -d/dy + y (``raise``) in y-space.

    These carry the normalization [a_-, a_+] = 2, so a_- phi_k = sqrt(2k) phi_(k-1).
    ``osc`` only records which oscillator the sample belongs to; the y-space
    operators are the same for all of them.
    """
    if wave.space != "y":
        raise DomainError("apply_ladder acts on y-space samples")
    h = _uniform_step(wave.grid)
    d = derivative4(wave.values, h)
    y = wave.grid
    if direction == "lower":
        vals = d + y * wave.values
    elif direction == "raise":
        vals = -d + y * wave.values
    else:
        raise DomainError("direction must be 'raise' or 'lower'")
    return WaveSample(y, vals, "y")


def apply_factorization(op: str, pair: FactorizationPair, wave: WaveSample) -> WaveSample:
    """Apply A or B to an x-space sample on a uniform grid."""
    if wave.space != "x":
        raise DomainError("factorization operators act on x-space samples")
    h = _uniform_step(wave.grid)
    x = wave.grid
    m = pair.family.mass(x)
    a = pair.a
    b = float(pair.ordering.b)
    beta = np.asarray(pair.beta(x))
    if op == "B":
        vals = m**b * derivative4(m**a * wave.values, h) / SQRT2 + beta * wave.values
    elif op == "A":
        vals = -(m**a) * derivative4(m**b * wave.values, h) / SQRT2 + beta * wave.values
    else:
        raise DomainError("op must be 'A' or 'B'")
    return WaveSample(x, vals, "x")


def ladder_coefficient(result: WaveSample, target: WaveSample) -> float:
    """Least-squares c in result ~ c * target (both on one grid)."""
    return float(np.real(target.inner(result)) / np.real(target.inner(target)))
