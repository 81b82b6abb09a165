"""Reduction of position-dependent-mass problems to constant-mass ones.

A potential is pushed forward to y-space as V o s^-1; a y-space wavefunction
phi is pulled back to x-space as psi = J^(1/2) phi o s, which preserves the
L2 norm. ``effective_potential`` adds the ordering-dependent correction that
vanishes for the MDNT masses and for a = -1/4 (MINT).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from ._quad import trapezoid
from .errors import DomainError
from .mass_models import CoordinateMap, MassFamily, MassKind, coordinate_map

INF = math.inf
SQRT2 = math.sqrt(2.0)
SQUEEZED_SHIFT = (1.0 - SQRT2) / 4.0


class PotentialKind(str, Enum):
    HARMONIC = "harmonic"        # y^2 / 2
    SQUEEZED = "squeezed"        # (1/8)[(1/z - z)^2 + 2(1 - sqrt2)], z = x0 + lam x
    POWER_LAW = "power_law"      # (1/2)[(y/(2n+1))^(2n+1) - x0]^2
    SINH2 = "sinh2"              # sinh^2(y) / 2
    LOG2 = "log2"                # ln^2(x0 + lam x) / (2 lam^2)
    ARCSINH_SQ = "arcsinh_sq"    # arcsinh^2(lam x) / (2 lam^2)
    ODD_ROOT = "odd_root"        # ((2n+1)/lam)^2 (x0 + lam x)^(2/(2n+1)) / 2
    CUSTOM = "custom"


@dataclass(frozen=True)
class PotentialSpec:
    """A one-dimensional potential: closed-form tag plus parameters, or a callable.

    ``shift`` is an additive constant applied to every kind. Evaluation outside
    ``domain`` raises :class:`DomainError`; half-line kinds exclude the wall.
    """

    kind: PotentialKind
    n: Optional[int] = None
    x0: float = 0.0
    lam: float = 1.0
    shift: float = 0.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)
    custom_domain: Optional[tuple[float, float]] = None
    y_min_hint: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", PotentialKind(self.kind))
        if self.kind in (PotentialKind.POWER_LAW, PotentialKind.ODD_ROOT):
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise DomainError(f"{self.kind.value} needs a positive integer n")
        if self.kind is PotentialKind.CUSTOM and self.func is None:
            raise DomainError("custom potentials need a callable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def harmonic(cls, shift: float = 0.0) -> "PotentialSpec":
        return cls(PotentialKind.HARMONIC, shift=shift)

    @classmethod
    def squeezed(cls, x0: float = 0.0, lam: float = 1.0, shift: float = 0.0) -> "PotentialSpec":
        return cls(PotentialKind.SQUEEZED, x0=x0, lam=lam, shift=shift)

    @classmethod
    def power_law(cls, n: int, x0: float = 0.0) -> "PotentialSpec":
        return cls(PotentialKind.POWER_LAW, n=n, x0=x0)

    @classmethod
    def sinh2(cls, shift: float = 0.0) -> "PotentialSpec":
        return cls(PotentialKind.SINH2, shift=shift)

    @classmethod
    def log2(cls, x0: float = 1.0, lam: float = 1.0) -> "PotentialSpec":
        return cls(PotentialKind.LOG2, x0=x0, lam=lam)

    @classmethod
    def arcsinh_sq(cls, lam: float = 1.0) -> "PotentialSpec":
        return cls(PotentialKind.ARCSINH_SQ, lam=lam)

    @classmethod
    def odd_root(cls, n: int, x0: float = 0.0, lam: float = 1.0) -> "PotentialSpec":
        return cls(PotentialKind.ODD_ROOT, n=n, x0=x0, lam=lam)

    @classmethod
    def custom(cls, func: Callable, domain=(-INF, INF), y_min=None, label: str = "") -> "PotentialSpec":
        return cls(PotentialKind.CUSTOM, func=func, custom_domain=tuple(domain), y_min_hint=y_min,
                   label=label)

    # -- domain ---------------------------------------------------------------
    @property
    def domain(self) -> tuple[float, float]:
        k = self.kind
        if k is PotentialKind.CUSTOM:
            return self.custom_domain
        if k in (PotentialKind.SQUEEZED, PotentialKind.LOG2):
            return (-self.x0 / self.lam, INF)
        return (-INF, INF)

    @property
    def is_half_line(self) -> bool:
        lo, hi = self.domain
        return math.isfinite(lo) and not math.isfinite(hi)

    def _check(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        lo, hi = self.domain
        bad = ~np.isfinite(y)
        if math.isfinite(lo):
            bad |= y <= lo
        if math.isfinite(hi):
            bad |= y >= hi
        if np.any(bad):
            raise DomainError(f"{self.kind.value} potential evaluated outside its domain ({lo}, {hi})")
        return y

    # -- evaluation -------------------------------------------------------------
    def __call__(self, y):
        y = self._check(y)
        k = self.kind
        if k is PotentialKind.HARMONIC:
            v = 0.5 * y * y
        elif k is PotentialKind.SQUEEZED:
            z = self.x0 + self.lam * y
            v = 0.125 * ((1.0 / z - z) ** 2 + 2.0 * (1.0 - SQRT2))
        elif k is PotentialKind.POWER_LAW:
            p = 2 * self.n + 1
            v = 0.5 * ((y / p) ** p - self.x0) ** 2
        elif k is PotentialKind.SINH2:
            v = 0.5 * np.sinh(y) ** 2
        elif k is PotentialKind.LOG2:
            v = 0.5 * (np.log(self.x0 + self.lam * y) / self.lam) ** 2
        elif k is PotentialKind.ARCSINH_SQ:
            v = 0.5 * (np.arcsinh(self.lam * y) / self.lam) ** 2
        elif k is PotentialKind.ODD_ROOT:
            p = 2 * self.n + 1
            u = np.cbrt(self.x0 + self.lam * y) if p == 3 else \
                np.sign(self.x0 + self.lam * y) * np.abs(self.x0 + self.lam * y) ** (1.0 / p)
            v = 0.5 * (p / self.lam) ** 2 * u * u
        else:
            v = np.asarray(self.func(y), dtype=float)
        v = v + self.shift
        return v if np.ndim(v) else float(v)

    def minimum(self) -> tuple[float, float]:
        """Location and value of the (single-well) minimum."""
        k = self.kind
        if k in (PotentialKind.HARMONIC, PotentialKind.SINH2, PotentialKind.ARCSINH_SQ):
            y = 0.0
        elif k is PotentialKind.SQUEEZED:
            y = (1.0 - self.x0) / self.lam
        elif k is PotentialKind.LOG2:
            y = (1.0 - self.x0) / self.lam
        elif k is PotentialKind.ODD_ROOT:
            y = -self.x0 / self.lam
        elif k is PotentialKind.POWER_LAW:
            p = 2 * self.n + 1
            y = p * math.copysign(abs(self.x0) ** (1.0 / p), self.x0)
        elif self.y_min_hint is not None:
            y = float(self.y_min_hint)
            lo, hi = self.domain
            # a minimum on a hard wall is read just inside the domain
            if y == lo:
                y = lo + 1e-12 * (1.0 + abs(lo))
            elif y == hi:
                y = hi - 1e-12 * (1.0 + abs(hi))
        else:
            y = self._numeric_minimum()
        return y, float(self(y))

    def _numeric_minimum(self) -> float:
        lo, hi = self.domain
        a = lo if math.isfinite(lo) else -50.0
        b = hi if math.isfinite(hi) else 50.0
        span = b - a
        grid = np.linspace(a + 1e-9 * span, b - 1e-9 * span, 4001)
        with np.errstate(all="ignore"):
            vals = np.array([self._safe(t) for t in grid])
        i = int(np.nanargmin(vals))
        left, right = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        res = minimize_scalar(self._safe, bounds=(left, right), method="bounded",
                              options={"xatol": 1e-12})
        return float(res.x)

    def _safe(self, t: float) -> float:
        try:
            v = float(self(t))
        except (DomainError, FloatingPointError, OverflowError):
            return math.inf
        return v if math.isfinite(v) else math.inf

    def level_crossings(self, energy: float) -> Optional[tuple[float, float]]:
        """Closed-form solutions of V(y) = E around the minimum, when available."""
        e = energy - self.shift
        k = self.kind
        if e < 0 and k is not PotentialKind.SQUEEZED:
            return None
        if k is PotentialKind.HARMONIC:
            r = math.sqrt(2.0 * e)
            return -r, r
        if k is PotentialKind.SINH2:
            r = math.asinh(math.sqrt(2.0 * e))
            return -r, r
        if k is PotentialKind.POWER_LAW and self.x0 == 0.0:
            r = (2 * self.n + 1) * (2.0 * e) ** (1.0 / (4 * self.n + 2))
            return -r, r
        return None

    def to_dict(self) -> dict:
        if self.kind is PotentialKind.CUSTOM:
            return {"kind": "custom", "label": self.label}
        d = {"kind": self.kind.value, "x0": self.x0, "lambda": self.lam, "shift": self.shift}
        if self.n is not None:
            d["n"] = self.n
        return d


@dataclass(frozen=True)
class WaveSample:
    """Sampled wavefunction; ``space`` is ``"x"`` or ``"y"``."""

    grid: np.ndarray
    values: np.ndarray
    space: str = "y"

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values)
        if values.dtype.kind not in "fc":
            values = values.astype(float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise DomainError("grid and values must be 1-D arrays of equal length")
        if np.any(np.diff(grid) <= 0):
            raise DomainError("grid must be strictly increasing")
        if self.space not in ("x", "y"):
            raise DomainError("space must be 'x' or 'y'")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def norm(self) -> float:
        return trapezoid(np.abs(self.values) ** 2, self.grid)

    def normalized(self) -> "WaveSample":
        return WaveSample(self.grid, self.values / math.sqrt(self.norm()), self.space)

    def inner(self, other: "WaveSample") -> complex:
        if self.grid.shape != other.grid.shape or not np.allclose(self.grid, other.grid, rtol=0, atol=1e-12):
            raise DomainError("inner product needs a common grid")
        val = trapezoid(np.conj(self.values) * other.values, self.grid)
        return val

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cplx = np.iscomplexobj(self.values)
        w.writerow(["x" if self.space == "x" else "y", "re"] + (["im"] if cplx else []))
        for g, v in zip(self.grid, self.values):
            row = [format(g, ".9g"), format(float(np.real(v)), ".9g")]
            if cplx:
                row.append(format(float(np.imag(v)), ".9g"))
            w.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "WaveSample":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        data = np.array([[float(c) for c in r] for r in body])
        values = data[:, 1] + 1j * data[:, 2] if len(header) == 3 else data[:, 1]
        return cls(data[:, 0], values, "x" if header[0] == "x" else "y")


# ---------------------------------------------------------------------------
def _as_map(m) -> CoordinateMap:
    return m if isinstance(m, CoordinateMap) else coordinate_map(m)


def effective_potential(V: PotentialSpec, family: MassFamily, a: float, y):
    """V(y) minus the ordering-dependent mass term, with V given in y-space.

    V_eff = V - (1/(2 m^3)) [(1/4 + a) m m'' - (7/16 + a(2 + a)) m'^2],
    where m and its x-derivatives are evaluated at x = s^-1(y).
    """
    a = float(a)
    cmap = coordinate_map(family)
    x = cmap.inverse(y)
    m, dm, d2m = family.derivatives(x)
    corr = ((0.25 + a) * m * d2m - (7.0 / 16.0 + a * (2.0 + a)) * dm * dm) / (2.0 * m**3)
    out = V(y) - corr
    return out if np.ndim(out) else float(out)


def _image(cmap: CoordinateMap, lo: float, hi: float) -> tuple[float, float]:
    ylo, yhi = cmap.y_domain
    flo = ylo if not math.isfinite(lo) or lo <= cmap.x_domain[0] else float(cmap.forward(lo))
    fhi = yhi if not math.isfinite(hi) else float(cmap.forward(hi))
    return flo, fhi


def _closed_form_tag(V: PotentialSpec, fam: MassFamily) -> Optional[PotentialSpec]:
    if fam.m0 != 1.0:
        return None
    k, fk = V.kind, fam.kind
    if V.kind is PotentialKind.HARMONIC:
        if fk is MassKind.CONSTANT:
            return PotentialSpec.harmonic(shift=V.shift)
        if fam.lam != 1.0:
            return None
        if fk is MassKind.REGULAR:
            return PotentialSpec.sinh2(shift=V.shift)
        if fk is MassKind.SINGULAR_N:
            spec = PotentialSpec.power_law(fam.n, x0=fam.x0)
            return spec if V.shift == 0 else PotentialSpec(PotentialKind.POWER_LAW, n=fam.n, x0=fam.x0,
                                                             shift=V.shift)
    if k is PotentialKind.SQUEEZED and fk is MassKind.SINGULAR0:
        if fam.lam == V.lam == 1.0 and fam.x0 == V.x0:
            return PotentialSpec.sinh2(shift=SQUEEZED_SHIFT + V.shift)
    # first-kind potentials 1/2 s(x)^2 go to the oscillator
    if k is PotentialKind.ARCSINH_SQ and fk is MassKind.REGULAR and fam.lam == V.lam:
        return PotentialSpec.harmonic(shift=V.shift)
    if k is PotentialKind.LOG2 and fk is MassKind.SINGULAR0 and (fam.lam, fam.x0) == (V.lam, V.x0):
        return PotentialSpec.harmonic(shift=V.shift)
    if (k is PotentialKind.ODD_ROOT and fk is MassKind.SINGULAR_N
            and (fam.n, fam.lam, fam.x0) == (V.n, V.lam, V.x0)):
        return PotentialSpec.harmonic(shift=V.shift)
    return None


def pushforward_potential(V: PotentialSpec, cmap) -> PotentialSpec:
    """Represent an x-space potential in y-space, V o s^-1.

    Cataloged (mass, potential) pairs come back with their closed-form tag;
    anything else becomes a custom potential on the image domain.
    """
    cmap = _as_map(cmap)
    fam = cmap.family
    vlo, vhi = V.domain
    xlo, xhi = cmap.x_domain
    if vlo < xlo or vhi > xhi:
        raise DomainError(
            f"potential domain ({vlo}, {vhi}) is not contained in the map domain ({xlo}, {xhi})"
        )
    tag = _closed_form_tag(V, fam) if fam is not None and cmap.closed_form else None
    if tag is not None:
        return tag
    ylo, yhi = _image(cmap, vlo, vhi)
    inv = cmap.inverse

    def composed(y):
        return V(inv(y))

    y_hint = None
    if V.kind is not PotentialKind.CUSTOM or V.y_min_hint is not None:
        y_hint = float(cmap.forward(V.minimum()[0]))
    return PotentialSpec.custom(composed, domain=(ylo, yhi), y_min=y_hint,
                                label=f"pushforward({V.kind.value})")


def pullback_wavefunction(phi: WaveSample, cmap) -> WaveSample:
    """psi(x) = J(x)^(1/2) phi(s(x)) on the grid x = s^-1(y)."""
    cmap = _as_map(cmap)
    if phi.space != "y":
        raise DomainError("pullback expects a y-space sample")
    x = np.asarray(cmap.inverse(phi.grid), dtype=float)
    return WaveSample(x, np.sqrt(cmap.jacobian(x)) * phi.values, "x")


def pushforward_wavefunction(psi: WaveSample, cmap) -> WaveSample:
    """Inverse of :func:`pullback_wavefunction`: phi(y) = psi(x) / J(x)^(1/2) at y = s(x)."""
    cmap = _as_map(cmap)
    if psi.space != "x":
        raise DomainError("pushforward expects an x-space sample")
    y = np.asarray(cmap.forward(psi.grid), dtype=float)
    return WaveSample(y, psi.values / np.sqrt(cmap.jacobian(psi.grid)), "y")
