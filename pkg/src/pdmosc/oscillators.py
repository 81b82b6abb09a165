"""Oscillator catalogue.

First kind: the potential is the pull-back (1/2) s(x)^2 of the oscillator,
so the spectrum is exactly k + 1/2 for every mass function. Second kind:
the x-space potential is the literal oscillator (or the squeezed one) and
the spectrum is whatever its push-forward to y-space produces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import DomainError
from .mass_models import (
    CoordinateMap,
    MassFamily,
    MassKind,
    OrderingParameter,
    _odd_root,
    allowed_ordering,
    coordinate_map,
)
from .schrodinger import EigenSolution, SolverConfig, solve_halfline, solve_levels
from .special_fns import gamma_fn, hermite, hermite_function, laguerre
from .spectra import WkbLevel, wkb_quantize
from .transform import PotentialKind, PotentialSpec, pushforward_potential

SQRT2 = math.sqrt(2.0)
MINT = OrderingParameter(Fraction(-1, 4))


def default_ordering(family: MassFamily) -> OrderingParameter:
    """Ordering that removes the effective-potential terms for ``family``."""
    if family.kind is MassKind.SINGULAR0:
        return allowed_ordering(0)
    if family.kind is MassKind.SINGULAR_N:
        return allowed_ordering(family.n)
    return MINT


def _first_kind_potential(family: MassFamily, cmap: CoordinateMap) -> PotentialSpec:
    k = family.kind
    if family.m0 == 1.0:
        if k is MassKind.SINGULAR0:
            return PotentialSpec.log2(x0=family.x0, lam=family.lam)
        if k is MassKind.SINGULAR_N:
            return PotentialSpec.odd_root(family.n, x0=family.x0, lam=family.lam)
        if k is MassKind.REGULAR:
            return PotentialSpec.arcsinh_sq(lam=family.lam)
        if k is MassKind.CONSTANT:
            return PotentialSpec.harmonic()
    fwd = cmap.forward

    def half_s2(x):
        s = fwd(x)
        return 0.5 * np.asarray(s) ** 2

    return PotentialSpec.custom(half_s2, domain=cmap.x_domain, y_min=float(cmap.inverse(0.0)),
                                label=f"first-kind({k.value})")


@dataclass(frozen=True)
class FirstKindOscillator:
    family: MassFamily
    ordering: OrderingParameter
    potential: PotentialSpec

    @property
    def cmap(self) -> CoordinateMap:
        return coordinate_map(self.family)

    def energy(self, k: int) -> float:
        if k < 0:
            raise DomainError("k must be nonnegative")
        return k + 0.5

    def y_potential(self) -> PotentialSpec:
        return pushforward_potential(self.potential, self.cmap)


def first_kind(family: MassFamily, ordering: OrderingParameter | None = None) -> FirstKindOscillator:
    """First-kind oscillator for ``family`` with its null-term ordering by default."""
    ordering = ordering if ordering is not None else default_ordering(family)
    return FirstKindOscillator(family, ordering, _first_kind_potential(family, coordinate_map(family)))


def first_kind_eigenfunction(osc: FirstKindOscillator, k: int, x):
    """psi_k(x) = J(x)^(1/2) phi_k(s(x)) with phi_k the normalized Hermite function."""
    cmap = osc.cmap
    y = cmap.forward(x)
    out = np.sqrt(cmap.jacobian(x)) * hermite_function(k, y)
    return out if np.ndim(out) else float(out)


def closed_form_eigenfunction(family: MassFamily, k: int, x):
    """Hand-written eigenfunctions of the catalogued first-kind families (lambda = 1, m0 = 1).

    singular_n: H_k(p u^(1/p)) exp(-p^2 u^(2/p) / 2) / (u^(n/p) sqrt(2^k sqrt(pi) k!)),
    singular0:  H_k(ln u) exp(-ln^2(u) / 2) / sqrt(u 2^k sqrt(pi) k!),
    regular:    (m / (2^(2k) pi k!^2))^(1/4) H_k(asinh x) exp(-asinh^2(x) / 2),
    with u = x0 + x and real odd roots for u < 0.
    """
    if family.lam != 1.0 or family.m0 != 1.0:
        raise DomainError("closed forms are written for lambda = 1 and m0 = 1")
    x = family._check(x)
    norm = math.sqrt(2.0**k * math.sqrt(math.pi) * math.factorial(k))
    kind = family.kind
    if kind is MassKind.SINGULAR_N:
        n = family.n
        p = 2 * n + 1
        r = _odd_root(family.x0 + x, n)
        out = hermite(k, p * r) * np.exp(-0.5 * p * p * r * r) / (r**n * norm)
    elif kind is MassKind.SINGULAR0:
        u = family.x0 + x
        out = hermite(k, np.log(u)) * np.exp(-0.5 * np.log(u) ** 2) / np.sqrt(u * norm * norm)
    elif kind is MassKind.REGULAR:
        m = family.mass(x)
        pref = (m / (4.0**k * math.pi * math.factorial(k) ** 2)) ** 0.25
        out = pref * hermite(k, np.arcsinh(x)) * np.exp(-0.5 * np.arcsinh(x) ** 2)
    else:
        raise DomainError(f"no closed form catalogued for {kind.value}")
    return out if np.ndim(out) else float(out)


# -- squeezed oscillator ------------------------------------------------------
def squeezed_potential(x, x0: float = 0.0):
    """(1/8) [(1/z - z)^2 + 2(1 - sqrt 2)] with z = x0 + x > 0."""
    return PotentialSpec.squeezed(x0=x0)(x)


SQUEEZED_ELL = 0.5 * (1.0 + SQRT2)


def squeezed_eigenfunction(k: int, z):
    """Normalized half-line eigenfunction with energy k + 1/2.

    phi_k(z) = sqrt(k! / (2^(1/sqrt 2) Gamma(k + 1 + 1/sqrt 2))) z^ell e^(-z^2/4) L_k^(1/sqrt 2)(z^2/2).
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(~np.isfinite(z)):
        raise DomainError("squeezed eigenfunctions live on z >= 0")
    alpha = 1.0 / SQRT2
    c = math.sqrt(math.factorial(k) / (2.0**alpha * gamma_fn(k + 1 + alpha)))
    out = c * z**SQUEEZED_ELL * np.exp(-0.25 * z * z) * laguerre(k, alpha, 0.5 * z * z)
    return out if np.ndim(out) else float(out)


# -- second kind --------------------------------------------------------------
@dataclass(frozen=True)
class SecondKindOscillator:
    family: MassFamily
    ordering: OrderingParameter
    x_potential: PotentialSpec
    y_potential: PotentialSpec

    @property
    def half_line(self) -> bool:
        return self.y_potential.is_half_line

    def spectrum(self, k_max: int, cfg: SolverConfig | None = None) -> list[EigenSolution]:
        solve = solve_halfline if self.half_line else solve_levels
        return solve(self.y_potential, k_max, cfg)

    def wkb(self, k_max: int) -> list[WkbLevel]:
        return [wkb_quantize(self.y_potential, k) for k in range(k_max + 1)]


def _as_x_potential(x_pot: Union[str, PotentialSpec], family: MassFamily) -> PotentialSpec:
    if isinstance(x_pot, PotentialSpec):
        spec = x_pot
    else:
        kind = PotentialKind(x_pot)
        if kind is PotentialKind.HARMONIC:
            spec = PotentialSpec.harmonic()
        elif kind is PotentialKind.SQUEEZED:
            # the squeezed coordinate is z = x0 + lam x of the family
            x0 = family.x0 if family.kind in (MassKind.SINGULAR0, MassKind.SINGULAR_N) else 0.0
            spec = PotentialSpec.squeezed(x0=x0, lam=family.lam if family.kind is MassKind.SINGULAR0 else 1.0)
        else:
            raise DomainError("second-kind oscillators take the harmonic or squeezed potential")
    if spec.kind not in (PotentialKind.HARMONIC, PotentialKind.SQUEEZED):
        raise DomainError("second-kind oscillators take the harmonic or squeezed potential")
    return spec


def build_second_kind(family: MassFamily, x_pot: Union[str, PotentialSpec] = "harmonic",
                      ordering: OrderingParameter | None = None) -> SecondKindOscillator:
    """Assemble a second-kind problem and push its potential forward to y-space."""
    spec = _as_x_potential(x_pot, family)
    if family.kind is MassKind.SINGULAR0 and spec.kind is PotentialKind.HARMONIC:
        raise DomainError(
            "the harmonic potential lives on the full line but singular0 maps only "
            f"x > {family.t0}; pick a different mass for the second-kind oscillator"
        )
    ordering = ordering if ordering is not None else default_ordering(family)
    y_pot = pushforward_potential(spec, coordinate_map(family))
    return SecondKindOscillator(family, ordering, spec, y_pot)


def catalog() -> list[dict]:
    """Catalogued (mass, potential) pairs with their y-space images."""
    rows = []
    first = [MassFamily.singular0(), MassFamily.singular_n(1), MassFamily.singular_n(2),
             MassFamily.singular_n(3), MassFamily.regular(), MassFamily.constant()]
    for fam in first:
        osc = first_kind(fam)
        rows.append({"kind": "first", "family": fam.to_dict(), "ordering": str(osc.ordering.a),
                     "x_potential": osc.potential.to_dict(), "y_potential": osc.y_potential().to_dict()})
    second = [(MassFamily.regular(), "harmonic"), (MassFamily.singular0(), "squeezed"),
              (MassFamily.singular_n(1), "harmonic"), (MassFamily.constant(), "squeezed")]
    for fam, pot in second:
        osc = build_second_kind(fam, pot)
        rows.append({"kind": "second", "family": fam.to_dict(), "ordering": str(osc.ordering.a),
                     "x_potential": osc.x_potential.to_dict(), "y_potential": osc.y_potential.to_dict()})
    return rows
