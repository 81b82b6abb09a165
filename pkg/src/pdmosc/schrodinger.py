"""Numerov shooting eigensolver for -phi''/2 + V phi = E phi in y-space.

Level k is bracketed by Sturm node counting (the number of sign changes of
the left-started solution across the whole grid equals the number of
discrete levels below E), then refined by bisection on the discrete
Wronskian between the left and right solutions at the rightmost classical
turning point. The inner loops live in :mod:`pdmosc.kernels`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from ._quad import gauss_legendre, trapezoid
from .errors import ConvergenceError, DomainError
from .kernels import numerov_fill, numerov_nodes
from .spectra import _side_crossing, wkb_quantize
from .transform import PotentialSpec, WaveSample

# walls g / t^2 with g above this are truncated instead of Frobenius-seeded
_STRONG_WALL = 10.0


@dataclass(frozen=True)
class SolverConfig:
    grid_points: int = 4001
    ymax_margin: float = 25.0
    decay_lengths: float = 22.0
    energy_tol: float = 1e-10
    max_levels: int = 400
    z0: float = 1e-6
    tail_tol: float = 1e-8

    def __post_init__(self):
        if self.grid_points < 201 or self.grid_points % 2 == 0:
            raise DomainError("grid_points must be odd and >= 201")
        if self.energy_tol <= 0:
            raise DomainError("energy_tol must be positive")
        if self.ymax_margin <= 0 or self.decay_lengths <= 0:
            raise DomainError("domain margins must be positive")


@dataclass(frozen=True)
class EigenSolution:
    k: int
    energy: float
    wave: WaveSample
    norm: float


@dataclass(frozen=True)
class _Wall:
    """Regular-singular left wall: phi ~ t^ell (1 + c t^2) where V ~ g / t^2."""

    position: float
    ell: float
    g: float
    v_reg0: float
    scale: float


class _Problem:
    """Shooting problem on a uniform grid in s, with y = f(s).

    Writing phi = sqrt(f') chi turns the equation into chi'' = Q chi with
    Q = 2 f'^2 (V - E) + q and q = (3/4)(f''/f')^2 - f'''/(2 f'). On the full
    line f is the identity. Next to a wall f(s) = lo + c log(1 + e^s); this
    stretches the neighbourhood of the wall so that chi is smooth there and
    Numerov keeps its fourth order.
    """

    def __init__(self, V: PotentialSpec, s: np.ndarray, wall: Optional[_Wall]):
        self.V = V
        self.s = s
        self.h = s[1] - s[0]
        self.wall = wall
        self.n = len(s)
        if wall is None:
            self.y = s
            fp = np.ones_like(s)
            q = np.zeros_like(s)
        else:
            c = wall.scale
            sig = 0.5 * (1.0 + np.tanh(0.5 * s))
            self.y = wall.position + c * np.logaddexp(0.0, s)
            fp = c * sig
            # f''/f' = 1 - sig, f'''/f' = (1 - sig)(1 - 2 sig)
            q = 0.75 * (1.0 - sig) ** 2 - 0.5 * (1.0 - sig) * (1.0 - 2.0 * sig)
        self.fp = fp
        with np.errstate(all="ignore"):
            vg = np.array(V(self.y[1:-1]), dtype=float)
        first = float(V(self.y[0])) if wall is not None else vg[0]
        # a Dirichlet end only multiplies a zero, so any finite value will do
        self.vg = np.concatenate(([first], vg, [vg[-1]]))
        k = self.h * self.h / 12.0
        self._a = 2.0 * k * fp * fp
        self._b = -k * (2.0 * fp * fp * self.vg + q)

    def w(self, energy: float) -> np.ndarray:
        return self._a * energy + self._b

    def seeds(self, energy: float) -> tuple[float, float]:
        if self.wall is None:
            return 0.0, 1.0
        wl = self.wall
        c = 2.0 * (wl.v_reg0 - energy) / (4.0 * wl.ell + 2.0)
        t = self.y[:2] - wl.position
        vals = t**wl.ell * (1.0 + c * t * t) / np.sqrt(self.fp[:2])
        return float(vals[0] / vals[1]), 1.0

    def count(self, energy: float) -> int:
        p0, p1 = self.seeds(energy)
        return int(numerov_nodes(self.w(energy), p0, p1))

    def left(self, energy: float, stop: int) -> tuple[np.ndarray, np.ndarray]:
        """Left solution on indices 0..stop inclusive, with its w values."""
        w = np.ascontiguousarray(self.w(energy)[: stop + 1])
        p0, p1 = self.seeds(energy)
        out = np.empty(stop + 1)
        numerov_fill(w, p0, p1, out)
        return out, w

    def right(self, energy: float, start: int) -> tuple[np.ndarray, np.ndarray]:
        """Right solution (Dirichlet at the last point) on indices start..n-1."""
        w = np.ascontiguousarray(self.w(energy)[start:][::-1])
        out = np.empty(len(w))
        numerov_fill(w, 0.0, 1.0, out)
        return out[::-1], w[::-1]

    def wronskian(self, energy: float, m: int) -> float:
        lpsi, lw = self.left(energy, m + 1)
        rpsi, rw = self.right(energy, m)
        ul = (1.0 + lw[m:m + 2]) * lpsi[m:m + 2]
        ur = (1.0 + rw[:2]) * rpsi[:2]
        # scale each side so the product stays finite
        sl = max(abs(ul[0]), abs(ul[1])) or 1.0
        sr = max(abs(ur[0]), abs(ur[1])) or 1.0
        return (ul[0] / sl) * (ur[1] / sr) - (ul[1] / sl) * (ur[0] / sr)

    def match_index(self, energy: float) -> int:
        allowed = np.nonzero(self.vg[1:-1] < energy)[0]
        if len(allowed) == 0:
            m = int(np.argmin(self.vg[1:-1])) + 1
        else:
            m = int(allowed[-1]) + 1
        if m >= self.n - 3:
            raise DomainError(
                f"no classically forbidden region at the right end for E={energy:.6g}; "
                "increase the y_max margin"
            )
        return max(m, 2)

    def eigenfunction(self, energy: float, m: int) -> tuple[np.ndarray, np.ndarray]:
        """Normalized (grid, phi), with the grid uniform in y."""
        lpsi, _ = self.left(energy, m + 1)
        rpsi, _ = self.right(energy, m)
        j = m if abs(rpsi[0]) >= abs(rpsi[1]) else m + 1
        chi = np.concatenate((lpsi[: m + 1], (lpsi[j] / rpsi[j - m]) * rpsi[1:]))
        if not np.all(np.isfinite(chi)):
            raise ConvergenceError("non-finite eigenfunction")
        chi /= math.sqrt(trapezoid(self.fp**2 * chi * chi, self.s))
        phi = np.sqrt(self.fp) * chi
        if self.wall is None:
            return self.y, phi
        grid = np.linspace(self.wall.position, self.y[-1], self.n)
        spline = CubicSpline(np.concatenate(([self.wall.position], self.y)),
                             np.concatenate(([0.0], phi)))
        return grid, spline(grid)


def _decay_edge(V: PotentialSpec, energy: float, turn: float, direction: int,
                level: float, decay: float) -> tuple[float, bool]:
    """First point beyond ``turn`` where V >= level and int kappa dy >= decay.

    Returns the point and True when a finite domain edge came first.
    """
    lo, hi = V.domain
    edge = lo if direction < 0 else hi
    t, wts = gauss_legendre(64)
    u = 0.5 * (t + 1.0)
    d = 0.05 * (1.0 + abs(turn))
    for _ in range(400):
        far = turn + direction * d
        if math.isfinite(edge) and (far - edge) * direction >= 0:
            return edge, True
        if V._safe(far) >= level:
            # y = turn + d u^2 absorbs the square-root start of kappa
            ys = turn + direction * d * u * u
            vals = np.array([V._safe(v) for v in ys])
            kap = np.sqrt(np.maximum(2.0 * (vals - energy), 0.0))
            if d * float(np.dot(wts, kap * u)) >= decay:
                return far, False
        d *= 1.25
    raise DomainError("could not place the domain edge; the potential may not be confining")


def _estimate_top(V: PotentialSpec, k_max: int) -> float:
    _, v_min = V.minimum()
    e = wkb_quantize(V, k_max, rtol=1e-8).energy
    return e + 0.1 * (e - v_min) + 1.0


def _wall_for(V: PotentialSpec, y_min: float, cfg: SolverConfig) -> Optional[_Wall]:
    lo = V.domain[0]
    if not math.isfinite(lo):
        raise DomainError("the half-line solver needs a finite lower domain bound")
    eps = cfg.z0
    g = eps * eps * V._safe(lo + eps)
    if g < -0.125:
        raise DomainError("attractive singularity stronger than -1/(8 t^2): fall to the centre")
    if g > _STRONG_WALL:
        return None
    if abs(g) < 1e-9:
        g = 0.0
    ell = 0.5 * (1.0 + math.sqrt(1.0 + 8.0 * g))
    width = min(1.0, max(0.1, y_min - lo))
    delta = 1e-3 * width
    v_reg0 = V._safe(lo + delta) - g / (delta * delta)
    return _Wall(lo, ell, g, v_reg0, 0.5 * width)


def _build_problem(V: PotentialSpec, k_max: int, cfg: SolverConfig, half_line: bool):
    y_min, _ = V.minimum()
    # the wall check comes first: a fall to the centre has no WKB levels either
    wall = _wall_for(V, y_min, cfg) if half_line else None
    e_top = _estimate_top(V, k_max)
    level = e_top + cfg.ymax_margin
    if wall is None:
        turn_l, at_edge = _side_crossing(V, e_top, y_min, -1)
        left = turn_l if at_edge else _decay_edge(V, e_top, turn_l, -1, level, cfg.decay_lengths)[0]
    turn_r, at_edge = _side_crossing(V, e_top, y_min, +1)
    right = turn_r if at_edge else _decay_edge(V, e_top, turn_r, +1, level, cfg.decay_lengths)[0]
    if wall is None:
        return _Problem(V, np.linspace(left, right, cfg.grid_points), None), e_top
    # s-range of the softplus map covering [lo + z0, right]
    c = wall.scale
    s_lo = math.log(math.expm1(cfg.z0 / c))
    span = (right - wall.position) / c
    s_hi = span + math.log(-math.expm1(-span))
    return _Problem(V, np.linspace(s_lo, s_hi, cfg.grid_points), wall), e_top


def _solve_level(prob: _Problem, k: int, lo: float, hi: float, cfg: SolverConfig) -> float:
    c_lo, c_hi = prob.count(lo), prob.count(hi)
    if c_lo > k:
        raise ConvergenceError(f"lower bracket already has {c_lo} nodes for level {k}")
    for _ in range(60):
        if c_hi > k:
            break
        hi = lo + 2.0 * (hi - lo)
        c_hi = prob.count(hi)
    else:
        raise ConvergenceError(f"could not bracket level {k}")
    # Sturm bracketing until exactly one level is enclosed
    for _ in range(200):
        if c_lo == k and c_hi == k + 1:
            break
        mid = 0.5 * (lo + hi)
        c_mid = prob.count(mid)
        if c_mid <= k:
            lo, c_lo = mid, c_mid
        else:
            hi, c_hi = mid, c_mid
    else:
        raise ConvergenceError(f"node-count bracketing failed for level {k}")

    m = prob.match_index(hi)
    w_lo, w_hi = prob.wronskian(lo, m), prob.wronskian(hi, m)
    use_wronskian = (w_lo > 0) != (w_hi > 0)
    for _ in range(400):
        if hi - lo <= cfg.energy_tol * max(1.0, abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if use_wronskian:
            w_mid = prob.wronskian(mid, m)
            if (w_mid > 0) == (w_lo > 0):
                lo, w_lo = mid, w_mid
            else:
                hi = mid
        elif prob.count(mid) <= k:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sign_changes(psi: np.ndarray, rel: float = 1e-7) -> int:
    big = np.max(np.abs(psi))
    s = np.sign(psi[np.abs(psi) > rel * big])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _check_tails(psi: np.ndarray, has_wall: bool, cfg: SolverConfig) -> None:
    big = np.max(np.abs(psi))
    band = max(2, len(psi) // 50)
    ends = [psi[-band:]] if has_wall else [psi[:band], psi[-band:]]
    for seg in ends:
        tail = np.max(np.abs(seg)) / big
        if tail > cfg.tail_tol:
            raise DomainError(
                f"wavefunction tail {tail:.2e} exceeds {cfg.tail_tol:.0e} at the boundary; "
                "increase the y_max margin"
            )


def _solve(V: PotentialSpec, k_max: int, cfg: SolverConfig, half_line: bool) -> list[EigenSolution]:
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    if k_max + 1 > cfg.max_levels:
        raise DomainError(f"k_max exceeds max_levels={cfg.max_levels}")
    prob, e_top = _build_problem(V, k_max, cfg, half_line)
    out = []
    lo = float(np.min(prob.vg[1:-1]))
    for k in range(k_max + 1):
        energy = _solve_level(prob, k, lo, max(lo + 1.0, e_top), cfg)
        grid, psi = prob.eigenfunction(energy, prob.match_index(energy))
        # first lobe positive
        big = np.max(np.abs(psi))
        if psi[np.nonzero(np.abs(psi) > 1e-3 * big)[0][0]] < 0:
            psi = -psi
        nodes = _sign_changes(psi)
        if nodes != k:
            raise ConvergenceError(f"level {k} eigenfunction has {nodes} nodes")
        _check_tails(psi, prob.wall is not None, cfg)
        out.append(EigenSolution(k, energy, WaveSample(grid, psi, "y"), trapezoid(psi * psi, grid)))
        lo = energy + cfg.energy_tol * max(1.0, abs(energy))
    return out


def solve_levels(V: PotentialSpec, k_max: int, cfg: SolverConfig | None = None) -> list[EigenSolution]:
    """Levels 0..k_max of a confining potential on the full line (or a finite box)."""
    return _solve(V, k_max, cfg or SolverConfig(), half_line=False)


def solve_halfline(V: PotentialSpec, k_max: int, cfg: SolverConfig | None = None) -> list[EigenSolution]:
    """Levels 0..k_max of a potential with a wall at its lower domain bound.

    A wall g / t^2 (g = 0 is a plain hard wall) is started from the regular
    Frobenius solution t^ell with ell(ell - 1) = 2g. Stronger walls are
    truncated like the far side.
    """
    return _solve(V, k_max, cfg or SolverConfig(), half_line=True)
