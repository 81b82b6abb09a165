"""Leading-order WKB spectra.

The action integral int sqrt(2(E - V)) dy between the two turning points is
evaluated after the substitution y = c + r sin(theta), which removes the
square-root endpoint behaviour, with Gauss-Legendre nodes in theta doubled
until two successive estimates agree. Energies are found by bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._quad import gauss_legendre
from .errors import ConvergenceError, DomainError
from .special_fns import gamma_fn
from .transform import PotentialSpec

SQRT_PI = math.sqrt(math.pi)


class WkbMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class WkbLevel:
    k: int
    energy: float
    turning_points: tuple[float, float]
    method: WkbMethod = WkbMethod.QUADRATURE


def jn_constant(n: int) -> float:
    """int_{-1}^{1} sqrt(1 - z^(4n+2)) dz in closed form."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return SQRT_PI * gamma_fn(1.0 / (4 * n + 2)) / (2.0 * (n + 1) * gamma_fn((n + 1) / (2 * n + 1)))


def powerlaw_energy(n: int, k: int) -> float:
    """WKB level k of (1/2)(y/(2n+1))^(4n+2); n = 0 gives k + 1/2."""
    p = 2 * n + 1
    base = (math.pi / jn_constant(n)) * (k + 0.5) / p
    return 0.5 * base ** (p / (n + 1))


def crossing_index(n: int) -> float:
    """Real root k_c of powerlaw_energy(n, k) = k + 1/2."""
    if n < 1:
        raise DomainError("crossing index needs n >= 1")
    ratio = (2 * n + 1) * gamma_fn(1.0 / (4 * n + 2)) / (
        SQRT_PI * (n + 1) * gamma_fn((n + 1) / (2 * n + 1))
    )
    return 0.5 * (ratio ** ((2 * n + 1) / n) - 1.0)


# -- turning points ---------------------------------------------------------
def _bisect_crossing(V: PotentialSpec, energy: float, inside: float, outside: float) -> float:
    """Solve V(y) = E between a point with V < E and one with V >= E."""
    a, b = inside, outside
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        if V._safe(mid) < energy:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _side_crossing(V: PotentialSpec, energy: float, y_min: float, direction: int) -> tuple[float, bool]:
    """Walk outward from the minimum until V exceeds E.

    Returns the crossing and a flag that is True when a finite domain edge was
    reached with V still below E (a hard wall).
    """
    lo, hi = V.domain
    edge = lo if direction < 0 else hi
    step = 0.5
    inside = y_min
    for _ in range(400):
        if math.isfinite(edge):
            gap = abs(edge - inside)
            if gap <= 1e-13 * max(1.0, abs(edge)):
                return edge, True
            trial = inside + direction * min(step, 0.5 * gap)
        else:
            trial = inside + direction * step
        if V._safe(trial) >= energy:
            return _bisect_crossing(V, energy, inside, trial), False
        inside = trial
        step *= 2.0
    raise DomainError(f"potential is not confining: V stays below E={energy} going {direction:+d}")


def turning_points(V: PotentialSpec, energy: float, y_min: float | None = None) -> tuple[float, float]:
    closed = V.level_crossings(energy)
    if closed is not None:
        return closed
    if y_min is None:
        y_min = V.minimum()[0]
    left, _ = _side_crossing(V, energy, y_min, -1)
    right, _ = _side_crossing(V, energy, y_min, +1)
    return left, right


# -- action -----------------------------------------------------------------
def action(V: PotentialSpec, energy: float, y_min: float | None = None,
           nodes: int = 200, rtol: float = 1e-12, max_nodes: int = 12800) -> tuple[float, tuple[float, float]]:
    """Return (int sqrt(2(E-V)) dy over the allowed region, turning points)."""
    left, right = turning_points(V, energy, y_min)
    c, r = 0.5 * (left + right), 0.5 * (right - left)
    if r <= 0:
        return 0.0, (left, right)

    def estimate(m: int) -> float:
        t, wts = gauss_legendre(m)
        theta = 0.5 * math.pi * t
        y = c + r * np.sin(theta)
        with np.errstate(invalid="ignore"):
            vals = np.asarray(V(np.clip(y, left, right)), dtype=float)
        integrand = np.sqrt(np.maximum(2.0 * (energy - vals), 0.0)) * r * np.cos(theta)
        return 0.5 * math.pi * float(np.dot(wts, integrand))

    prev = estimate(nodes)
    m = nodes
    while m < max_nodes:
        m *= 2
        cur = estimate(m)
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return cur, (left, right)
        prev = cur
    raise ConvergenceError(
        f"action integral not converged at E={energy}: last two estimates differ by {abs(cur - prev):.3e}"
    )


def _curvature(V: PotentialSpec, y0: float) -> float:
    h = 1e-4 * (1.0 + abs(y0))
    lo, _ = V.domain
    try:
        if math.isfinite(lo) and y0 - h <= lo:
            return 0.0
        d2 = (V(y0 + h) - 2.0 * V(y0) + V(y0 - h)) / (h * h)
    except DomainError:
        return 0.0
    return d2 if math.isfinite(d2) and d2 > 0 else 0.0


def wkb_quantize(V: PotentialSpec, k: int, rtol: float = 1e-12) -> WkbLevel:
    """Solve action(E) = pi (k + 1/2) for the k-th level of a single well."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    y_min, v_min = V.minimum()
    target = math.pi * (k + 0.5)
    curv = _curvature(V, y_min)
    width = (k + 2) * math.pi * (math.sqrt(curv) if curv > 0 else 1.0)
    hi = v_min + width
    for _ in range(200):
        if action(V, hi, y_min)[0] > target:
            break
        width *= 2.0
        hi = v_min + width
    else:
        raise ConvergenceError("could not bracket the WKB level")
    lo = v_min
    while hi - lo > rtol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if action(V, mid, y_min)[0] < target:
            lo = mid
        else:
            hi = mid
    energy = 0.5 * (lo + hi)
    return WkbLevel(k, energy, turning_points(V, energy, y_min), WkbMethod.QUADRATURE)


def sinh2_wkb_spectrum(k_max: int) -> list[WkbLevel]:
    """WKB levels 0..k_max of sinh^2(y)/2; turning points +-arcsinh(sqrt(2E))."""
    V = PotentialSpec.sinh2()
    return [wkb_quantize(V, k) for k in range(k_max + 1)]


def powerlaw_levels(n: int, k_max: int) -> list[WkbLevel]:
    """Closed-form WKB levels of the even power law with their turning points."""
    V = PotentialSpec.power_law(n)
    out = []
    for k in range(k_max + 1):
        e = powerlaw_energy(n, k)
        out.append(WkbLevel(k, e, V.level_crossings(e), WkbMethod.CLOSED_FORM))
    return out
