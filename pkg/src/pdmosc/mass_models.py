"""Mass functions m(x), their point transformations y = s(x) and Jacobians.

Units: hbar = omega_0 = 1. Every family carries ``m0`` (reference mass),
``x0`` (dimensionless offset) and ``lam`` (inverse length, default 1).

Families
--------
singular0    m0 / (x0 + lam x)^2,                 x > -x0/lam
singular_n   m0 / (x0 + lam x)^(4n/(2n+1)),      x != -x0/lam
regular      m0 / (1 + (lam x)^2)
rational_w   m0 ((w + (lam x)^2) / (1 + (lam x)^2))^2
quadratic_c  m0 c (lam x)^2
constant     m0
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._quad import adaptive_simpson
from .errors import DomainError, NonBijectiveError

INF = math.inf


class MassKind(str, Enum):
    SINGULAR0 = "singular0"
    SINGULAR_N = "singular_n"
    REGULAR = "regular"
    RATIONAL_W = "rational_w"
    QUADRATIC_C = "quadratic_c"
    CONSTANT = "constant"


# closed-form coordinate maps exist for these
CLOSED_FORM_KINDS = frozenset(
    {MassKind.SINGULAR0, MassKind.SINGULAR_N, MassKind.REGULAR, MassKind.CONSTANT}
)


def _odd_root(u, n: int):
    """Real (2n+1)-th root, odd in u."""
    p = 2 * n + 1
    if p == 3:
        return np.cbrt(u)
    return np.sign(u) * np.abs(u) ** (1.0 / p)


@dataclass(frozen=True)
class OrderingParameter:
    """Ordering exponent ``a`` of the kinetic term m^a P m^(2b) P m^a, with 2a + 2b = -1."""

    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))

    @property
    def b(self) -> Fraction:
        return (-1 - 2 * self.a) / 2

    def __float__(self) -> float:
        return float(self.a)


def allowed_ordering(n: int) -> OrderingParameter:
    """Ordering that makes ``singular0`` (n = 0) or ``singular_n`` free of effective-potential terms."""
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return OrderingParameter(Fraction(-1, 4))
    return OrderingParameter(Fraction(1 - n, 4 * n))


@dataclass(frozen=True)
class MassFamily:
    kind: MassKind
    m0: float = 1.0
    x0: float = 0.0
    lam: float = 1.0
    n: Optional[int] = None
    w: Optional[float] = None
    c: Optional[float] = None
    domain_override: Optional[tuple[float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", MassKind(self.kind))
        if self.m0 <= 0:
            raise DomainError("m0 must be positive")
        if self.lam == 0:
            raise DomainError("lambda must be nonzero")
        if self.kind is MassKind.SINGULAR_N:
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise DomainError("singular_n needs a positive integer n")
            object.__setattr__(self, "n", int(self.n))
        if self.kind is MassKind.RATIONAL_W and (self.w is None or self.w <= 0):
            raise DomainError("rational_w needs w > 0")
        if self.kind is MassKind.QUADRATIC_C and (self.c is None or self.c <= 0):
            raise DomainError("quadratic_c needs c > 0")
        if self.kind is MassKind.SINGULAR0 and self.lam < 0:
            raise DomainError("singular0 is defined for lambda > 0 only")
        if self.domain_override is not None:
            lo, hi = (float(v) for v in self.domain_override)
            if not lo < hi:
                raise DomainError("domain must satisfy lo < hi")
            object.__setattr__(self, "domain_override", (lo, hi))

    # -- constructors -----------------------------------------------------
    @classmethod
    def singular0(cls, x0: float = 1.0, lam: float = 1.0, m0: float = 1.0) -> "MassFamily":
        return cls(MassKind.SINGULAR0, m0=m0, x0=x0, lam=lam)

    @classmethod
    def singular_n(cls, n: int, x0: float = 0.0, lam: float = 1.0, m0: float = 1.0) -> "MassFamily":
        return cls(MassKind.SINGULAR_N, m0=m0, x0=x0, lam=lam, n=n)

    @classmethod
    def regular(cls, lam: float = 1.0, m0: float = 1.0) -> "MassFamily":
        return cls(MassKind.REGULAR, m0=m0, lam=lam)

    @classmethod
    def rational_w(cls, w: float, lam: float = 1.0, m0: float = 1.0) -> "MassFamily":
        return cls(MassKind.RATIONAL_W, m0=m0, lam=lam, w=w)

    @classmethod
    def quadratic_c(cls, c: float, lam: float = 1.0, m0: float = 1.0, domain=None) -> "MassFamily":
        return cls(MassKind.QUADRATIC_C, m0=m0, lam=lam, c=c, domain_override=domain)

    @classmethod
    def constant(cls, m0: float = 1.0) -> "MassFamily":
        return cls(MassKind.CONSTANT, m0=m0)

    # -- geometry ---------------------------------------------------------
    @property
    def t0(self) -> float:
        """Singular point -x0/lam of the singular families."""
        return -self.x0 / self.lam

    @property
    def exponent(self) -> Fraction:
        """Exponent p in m = m0 u^(-p); exact for the singular families."""
        if self.kind is MassKind.SINGULAR0:
            return Fraction(2)
        if self.kind is MassKind.SINGULAR_N:
            return Fraction(4 * self.n, 2 * self.n + 1)
        raise AttributeError(f"{self.kind.value} has no power-law exponent")

    @property
    def domain(self) -> tuple[float, float]:
        if self.domain_override is not None:
            return self.domain_override
        if self.kind is MassKind.SINGULAR0:
            return (self.t0, INF)
        return (-INF, INF)

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if np.any(~np.isfinite(x)):
            raise DomainError("x must be finite")
        lo, hi = self.domain
        if self.kind is MassKind.SINGULAR0 and self.domain_override is None:
            bad = x <= lo
        else:
            bad = (x < lo) | (x > hi)
        if np.any(bad):
            raise DomainError(f"x outside the {self.kind.value} domain ({lo}, {hi})")
        if self.kind is MassKind.SINGULAR_N and np.any(self.x0 + self.lam * x == 0):
            raise DomainError(f"x = {self.t0} is a pole of the singular_n mass")
        return x

    # -- mass and derivatives --------------------------------------------
    def derivatives(self, x):
        """Return (m, m', m'') at x, all closed form."""
        x = self._check(x)
        lam, m0 = self.lam, self.m0
        k = self.kind
        if k is MassKind.CONSTANT:
            m = np.full_like(x, m0)
            return m, np.zeros_like(x), np.zeros_like(x)
        if k in (MassKind.SINGULAR0, MassKind.SINGULAR_N):
            u = self.x0 + lam * x
            p = -float(self.exponent)
            if k is MassKind.SINGULAR0:
                m = m0 / (u * u)
            else:
                # even power of the odd root keeps m > 0 on both sides of the pole
                m = m0 * _odd_root(u, self.n) ** (-4 * self.n)
            return m, p * lam * m / u, p * (p - 1.0) * lam * lam * m / (u * u)
        q = lam * x
        if k is MassKind.REGULAR:
            d = 1.0 + q * q
            return m0 / d, -2.0 * lam * m0 * q / d**2, m0 * lam**2 * (6.0 * q * q - 2.0) / d**3
        if k is MassKind.RATIONAL_W:
            w = self.w
            d = 1.0 + q * q
            j = (w + q * q) / d
            dj = 2.0 * lam * q * (1.0 - w) / d**2
            d2j = 2.0 * lam**2 * (1.0 - w) * (1.0 - 3.0 * q * q) / d**3
            return m0 * j * j, 2.0 * m0 * j * dj, 2.0 * m0 * (dj * dj + j * d2j)
        if k is MassKind.QUADRATIC_C:
            c = self.c
            return m0 * c * q * q, 2.0 * m0 * c * lam * q, np.full_like(x, 2.0 * m0 * c * lam**2)
        raise AssertionError(k)

    def mass(self, x):
        m = self.derivatives(x)[0]
        return m if np.ndim(m) else float(m)

    def jacobian(self, x):
        """J(x) = sqrt(m(x)/m0)."""
        j = np.sqrt(self.derivatives(x)[0] / self.m0)
        return j if np.ndim(j) else float(j)

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "m0": self.m0, "x0": self.x0, "lambda": self.lam}
        for key in ("n", "w", "c"):
            val = getattr(self, key)
            if val is not None:
                d[key] = val
        if self.domain_override is not None:
            d["domain"] = list(self.domain_override)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MassFamily":
        dom = d.get("domain")
        return cls(
            MassKind(d["kind"]),
            m0=float(d.get("m0", 1.0)),
            x0=float(d.get("x0", 0.0)),
            lam=float(d.get("lambda", 1.0)),
            n=d.get("n"),
            w=d.get("w"),
            c=d.get("c"),
            domain_override=tuple(dom) if dom is not None else None,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MassFamily":
        return cls.from_dict(json.loads(text))


def mass_at(family: MassFamily, x: float) -> float:
    return family.mass(x)


def mdnt_residual(family: MassFamily, a: float, x):
    """c1 m m'' + c2 m'^2 with c1 = 1/4 + a, c2 = -(7/16 + a(2 + a)).

    Vanishes exactly where the effective-potential correction vanishes.
    """
    a = float(a)
    m, dm, d2m = family.derivatives(x)
    r = (0.25 + a) * m * d2m - (7.0 / 16.0 + a * (2.0 + a)) * dm * dm
    return r if np.ndim(r) else float(r)


@dataclass(frozen=True)
class CoordinateMap:
    forward: Callable
    inverse: Callable
    jacobian: Callable
    x_domain: tuple[float, float]
    y_domain: tuple[float, float]
    family: MassFamily = field(repr=False, default=None)
    closed_form: bool = True


def _closed_form_map(fam: MassFamily) -> CoordinateMap:
    lam, x0 = fam.lam, fam.x0
    k = fam.kind

    def wrap(fn):
        def g(v):
            out = fn(np.asarray(v, dtype=float))
            return out if np.ndim(out) else float(out)
        return g

    if k is MassKind.CONSTANT:
        fwd = wrap(lambda x: x * 1.0)
        inv = wrap(lambda y: y * 1.0)
        return CoordinateMap(fwd, inv, fam.jacobian, (-INF, INF), (-INF, INF), fam)
    if k is MassKind.REGULAR:
        fwd = wrap(lambda x: np.arcsinh(lam * fam._check(x)) / lam)
        inv = wrap(lambda y: np.sinh(lam * y) / lam)
        return CoordinateMap(fwd, inv, fam.jacobian, (-INF, INF), (-INF, INF), fam)
    if k is MassKind.SINGULAR0:
        fwd = wrap(lambda x: np.log(x0 + lam * fam._check(x)) / lam)
        inv = wrap(lambda y: (np.exp(lam * y) - x0) / lam)
        return CoordinateMap(fwd, inv, fam.jacobian, fam.domain, (-INF, INF), fam)
    if k is MassKind.SINGULAR_N:
        n = fam.n
        p = 2 * n + 1

        def fwd_n(x):
            x = np.asarray(x, dtype=float)
            if np.any(~np.isfinite(x)):
                raise DomainError("x must be finite")
            return (p / lam) * _odd_root(x0 + lam * x, n)

        def inv_n(y):
            return ((lam * y / p) ** p - x0) / lam

        return CoordinateMap(wrap(fwd_n), wrap(inv_n), fam.jacobian, (-INF, INF), (-INF, INF), fam)
    raise AssertionError(k)


def _numeric_map(fam: MassFamily, x_window: float = 50.0, nodes: int = 4001) -> CoordinateMap:
    """Forward map by adaptive Simpson on J, inverse by PCHIP plus a Newton step."""
    lo, hi = fam.domain
    if lo <= 0.0 <= hi:
        x_ref = 0.0
    elif math.isfinite(lo):
        x_ref = lo
    else:
        x_ref = hi
    a = lo if math.isfinite(lo) else -x_window
    b = hi if math.isfinite(hi) else x_window
    if not (a <= x_ref <= b):
        raise DomainError("reference point outside tabulation window")

    def jac(t: float) -> float:
        m = fam.derivatives(t)[0]
        return math.sqrt(float(m) / fam.m0)

    xs = np.linspace(a, b, nodes)
    if x_ref not in xs:
        xs = np.unique(np.append(xs, x_ref))
    iref = int(np.searchsorted(xs, x_ref))
    seg = np.array([adaptive_simpson(jac, xs[i], xs[i + 1], tol=1e-13) for i in range(len(xs) - 1)])
    ys = np.concatenate(([0.0], np.cumsum(seg)))
    ys -= ys[iref]
    if np.any(np.diff(ys) <= 0):
        raise NonBijectiveError("numerical map is not strictly increasing")
    spline = PchipInterpolator(ys, xs, extrapolate=False)

    def fwd_scalar(x: float) -> float:
        if not (lo <= x <= hi) or not math.isfinite(x):
            raise DomainError(f"x={x} outside ({lo}, {hi})")
        i = int(np.clip(np.searchsorted(xs, x) - 1, 0, len(xs) - 2))
        if x < xs[0] or x > xs[-1]:
            return adaptive_simpson(jac, x_ref, x, tol=1e-12)
        return float(ys[i] + adaptive_simpson(jac, xs[i], x, tol=1e-13))

    def forward(x):
        x = np.asarray(x, dtype=float)
        out = np.vectorize(fwd_scalar, otypes=[float])(x)
        return out if out.ndim else float(out)

    def inverse(y):
        y = np.asarray(y, dtype=float)
        if np.any((y < ys[0]) | (y > ys[-1])):
            raise DomainError(
                f"y outside the tabulated range [{ys[0]:.6g}, {ys[-1]:.6g}] of the numerical map"
            )
        x = spline(y)
        x = np.clip(x, xs[0], xs[-1])
        x = x - (forward(x) - y) / fam.jacobian(x)
        return x if np.ndim(x) else float(x)

    return CoordinateMap(
        forward, inverse, fam.jacobian, (lo, hi), (float(ys[0]), float(ys[-1])), fam, closed_form=False
    )


def coordinate_map(family: MassFamily, **numeric_opts) -> CoordinateMap:
    """Build the point transformation y = s(x) = int sqrt(m/m0) dx with y = 0 at the reference point."""
    if family.kind is MassKind.QUADRATIC_C:
        lo, hi = family.domain
        if lo <= 0.0 <= hi:
            raise NonBijectiveError(
                "quadratic_c has J(0) = 0; restrict the domain to one side of x = 0"
            )
    if family.kind in CLOSED_FORM_KINDS and family.domain_override is None:
        return _closed_form_map(family)
    return _numeric_map(family, **numeric_opts)


def numeric_derivatives(f: Callable[[float], float], x: float, h: Optional[float] = None):
    """Fourth-order central differences (f', f'') with step h = 1e-5 (1 + |x|)."""
    if h is None:
        h = 1e-5 * (1.0 + abs(x))
    f2p, f1p, f0, f1m, f2m = f(x + 2 * h), f(x + h), f(x), f(x - h), f(x - 2 * h)
    d1 = (-f2p + 8 * f1p - 8 * f1m + f2m) / (12 * h)
    d2 = (-f2p + 16 * f1p - 30 * f0 + 16 * f1m - f2m) / (12 * h * h)
    return d1, d2
