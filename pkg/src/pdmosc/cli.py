"""Command-line front end.

    pdmosc spectrum --potential sinh2 --levels 10
    pdmosc wkb-compare --potential sinh2 --levels 10
    pdmosc coherent --family regular --z 1,0 --format json
    pdmosc second-kind --family singular0 --potential squeezed

``spectrum`` and ``eigenfunction`` solve the y-space problem named by
``--potential``; with ``--family`` the x-space system is its pull-back, so
``--family regular --potential harmonic`` is the first-kind oscillator.
Numbers are written with 9 significant digits, so identical configurations
give byte-identical output. Exit status is 2 for domain errors and 3 for
convergence failures.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from .coherent import (coherent_state, coherent_wavefunction, energy_moments, poisson_prob,
                       uncertainty_product, uncertainty_product_x)
from .errors import ConvergenceError, DomainError
from .ladder import apply_ladder, ladder_coefficient
from .mass_models import MassFamily, MassKind, coordinate_map
from .oscillators import build_second_kind, catalog, first_kind
from .schrodinger import SolverConfig, solve_halfline, solve_levels
from .special_fns import hermite_functions
from .spectra import wkb_quantize
from .transform import PotentialSpec, WaveSample, pullback_wavefunction

COMMANDS = ("spectrum", "eigenfunction", "wkb-compare", "ladder", "coherent", "catalog",
            "first-kind", "second-kind")
Y_POTENTIALS = ("harmonic", "sinh2", "squeezed", "power_law", "log2", "arcsinh_sq", "odd_root")


def fmt(v: float) -> str:
    return format(float(v), ".9g")


def r9(v: float) -> float:
    """Round to 9 significant digits for JSON output."""
    return float(fmt(v))


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    n: Optional[int] = None
    x0: Optional[float] = None
    lam: float = 1.0
    w: Optional[float] = None
    c: Optional[float] = None
    potential: Optional[str] = None
    levels: int = 10
    k: int = 0
    grid_points: int = 4001
    ymax_margin: float = 25.0
    z: tuple[float, float] = (1.0, 0.0)
    format: str = "csv"
    out: Optional[str] = None
    direction: str = "lower"
    steps: int = 1

    def __post_init__(self):
        self.z = tuple(float(v) for v in self.z)

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise DomainError("format must be csv or json")
        if self.levels < 1:
            raise DomainError("levels must be at least 1")
        if self.k < 0 or self.steps < 0:
            raise DomainError("k and steps must be nonnegative")
        if self.direction not in ("raise", "lower"):
            raise DomainError("direction must be raise or lower")
        if self.potential is not None and self.potential not in Y_POTENTIALS:
            raise DomainError(f"unknown potential {self.potential!r}")
        if self.family is not None:
            MassKind(self.family)
        self.solver()
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["z"] = list(self.z)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise DomainError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))

    # -- model objects ----------------------------------------------------------
    def solver(self) -> SolverConfig:
        return SolverConfig(grid_points=self.grid_points, ymax_margin=self.ymax_margin)

    def mass_family(self) -> MassFamily:
        kind = MassKind(self.family or "constant")
        if kind is MassKind.SINGULAR0:
            return MassFamily.singular0(x0=1.0 if self.x0 is None else self.x0, lam=self.lam)
        if kind is MassKind.SINGULAR_N:
            return MassFamily.singular_n(self.n if self.n is not None else 1, x0=self.x0 or 0.0, lam=self.lam)
        if kind is MassKind.REGULAR:
            return MassFamily.regular(lam=self.lam)
        if kind is MassKind.RATIONAL_W:
            return MassFamily.rational_w(self.w if self.w is not None else 2.0, lam=self.lam)
        if kind is MassKind.QUADRATIC_C:
            # J(0) = 0, so the map is only bijective away from the origin
            return MassFamily.quadratic_c(self.c if self.c is not None else 1.0, lam=self.lam,
                                          domain=(0.1, 20.0))
        return MassFamily.constant()

    def y_potential(self, default: str = "harmonic") -> PotentialSpec:
        name = self.potential or default
        if name == "harmonic":
            return PotentialSpec.harmonic()
        if name == "sinh2":
            return PotentialSpec.sinh2()
        if name == "squeezed":
            return PotentialSpec.squeezed()
        if name == "power_law":
            return PotentialSpec.power_law(self.n if self.n is not None else 1)
        if name == "log2":
            return PotentialSpec.log2(x0=1.0 if self.x0 is None else self.x0, lam=self.lam)
        if name == "arcsinh_sq":
            return PotentialSpec.arcsinh_sq(lam=self.lam)
        return PotentialSpec.odd_root(self.n if self.n is not None else 1, x0=self.x0 or 0.0, lam=self.lam)


# -- writers ----------------------------------------------------------------------
def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (int, str)) else fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    def clean(o):
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        if isinstance(o, (bool, int, str)) or o is None:
            return o
        return r9(o)

    return json.dumps(clean(obj), sort_keys=True, indent=2) + "\n"


def _table(cfg: RunConfig, header: list[str], rows: list[list], extra: Optional[dict] = None) -> str:
    if cfg.format == "csv":
        return _csv(header, rows)
    body = {"config": cfg.to_dict(), "columns": header, "rows": rows}
    if extra:
        body.update(extra)
    return _json(body)


def _solve(V: PotentialSpec, k_max: int, cfg: RunConfig):
    solve = solve_halfline if V.is_half_line else solve_levels
    return solve(V, k_max, cfg.solver())


def _pullback(wave: WaveSample, fam: MassFamily) -> WaveSample:
    cmap = coordinate_map(fam)
    if fam.kind is MassKind.SINGULAR_N:
        # psi is infinite (though square integrable) where the sample lands on the pole
        keep = np.asarray(cmap.inverse(wave.grid)) != fam.t0
        wave = WaveSample(wave.grid[keep], wave.values[keep], wave.space)
    return pullback_wavefunction(wave, cmap)


# -- commands ---------------------------------------------------------------------
def cmd_spectrum(cfg: RunConfig) -> str:
    V = cfg.y_potential()
    sols = _solve(V, cfg.levels - 1, cfg)
    return _table(cfg, ["k", "E"], [[s.k, s.energy] for s in sols])


def cmd_eigenfunction(cfg: RunConfig) -> str:
    V = cfg.y_potential()
    sol = _solve(V, cfg.k, cfg)[cfg.k]
    wave = sol.wave
    if cfg.family is not None and cfg.family != "constant":
        wave = _pullback(wave, cfg.mass_family())
    col = wave.space
    return _table(cfg, [col, "psi"], [[g, v] for g, v in zip(wave.grid, wave.values)],
                  {"energy": sol.energy})


def cmd_wkb_compare(cfg: RunConfig) -> str:
    V = cfg.y_potential(default="sinh2")
    sols = _solve(V, cfg.levels - 1, cfg)
    rows = [[s.k, wkb_quantize(V, s.k).energy, s.energy] for s in sols]
    return _table(cfg, ["k", "E_wkb", "E_schrodinger"], rows)


def cmd_ladder(cfg: RunConfig) -> str:
    y = np.linspace(-16.0, 16.0, max(cfg.grid_points, 1001))
    top = cfg.k + cfg.steps + 1
    phis = hermite_functions(top, y)
    wave = WaveSample(y, phis[cfg.k], "y")
    expected = 1.0
    level = cfg.k
    for _ in range(cfg.steps):
        wave = apply_ladder(cfg.direction, None, wave)
        if cfg.direction == "lower":
            expected *= math.sqrt(2.0 * level)
            level -= 1
        else:
            expected *= math.sqrt(2.0 * (level + 1))
            level += 1
    coeff = ladder_coefficient(wave, WaveSample(y, phis[level], "y")) if level >= 0 else 0.0
    if cfg.family is not None and cfg.family != "constant":
        wave = _pullback(wave, cfg.mass_family())
    rows = [[g, v] for g, v in zip(wave.grid, wave.values)]
    info = {"k": cfg.k, "result_level": max(level, -1), "coefficient": coeff,
            "expected": expected if level >= 0 else 0.0}
    if cfg.format == "csv":
        head = "".join(f"# {key},{fmt(val) if isinstance(val, float) else val}\n" for key, val in info.items())
        return head + _csv([wave.space, "psi"], rows)
    return _table(cfg, [wave.space, "psi"], rows, info)


def cmd_coherent(cfg: RunConfig) -> str:
    z = complex(*cfg.z)
    fam = cfg.mass_family()
    state = coherent_state(z, fam)
    mean, std = energy_moments(z)
    cmap = coordinate_map(fam)
    y = np.linspace(z.real - 8.0, z.real + 8.0, 401)
    x = np.asarray(cmap.inverse(y), dtype=float)
    dens = np.abs(coherent_wavefunction(state, x)) ** 2
    body = {
        "config": cfg.to_dict(),
        "z": [z.real, z.imag],
        "n_trunc": state.n_trunc,
        "mean": mean,
        "stddev": std,
        "uncertainty_y": uncertainty_product(state),
        "uncertainty_x": uncertainty_product_x(state),
        "poisson": [[n, poisson_prob(z, n)] for n in range(min(state.n_trunc, 40) + 1)],
        "density": {"x": list(x), "rho": list(dens)},
    }
    if cfg.format == "json":
        return _json(body)
    return _csv(["x", "rho"], [[a, b] for a, b in zip(x, dens)])


def cmd_catalog(cfg: RunConfig) -> str:
    rows = catalog()
    if cfg.format == "json":
        return _json({"config": cfg.to_dict(), "catalog": rows})
    return _csv(["kind", "family", "ordering", "x_potential", "y_potential"],
                [[r["kind"], r["family"]["kind"], r["ordering"], r["x_potential"]["kind"],
                  r["y_potential"]["kind"]] for r in rows])


def cmd_first_kind(cfg: RunConfig) -> str:
    osc = first_kind(cfg.mass_family())
    sols = _solve(osc.y_potential(), cfg.levels - 1, cfg)
    rows = [[s.k, osc.energy(s.k), s.energy] for s in sols]
    return _table(cfg, ["k", "E_exact", "E_numeric"], rows, {"ordering": str(osc.ordering.a)})


def cmd_second_kind(cfg: RunConfig) -> str:
    osc = build_second_kind(cfg.mass_family(), cfg.potential or "harmonic")
    sols = osc.spectrum(cfg.levels - 1, cfg.solver())
    rows = [[s.k, s.energy, wkb_quantize(osc.y_potential, s.k).energy] for s in sols]
    return _table(cfg, ["k", "E_numeric", "E_wkb"], rows,
                  {"ordering": str(osc.ordering.a), "y_potential": osc.y_potential.to_dict()})


DISPATCH = {
    "spectrum": cmd_spectrum,
    "eigenfunction": cmd_eigenfunction,
    "wkb-compare": cmd_wkb_compare,
    "ladder": cmd_ladder,
    "coherent": cmd_coherent,
    "catalog": cmd_catalog,
    "first-kind": cmd_first_kind,
    "second-kind": cmd_second_kind,
}


def run(cfg: RunConfig) -> str:
    cfg.validate()
    text = DISPATCH[cfg.command](cfg)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# -- argument parsing ---------------------------------------------------------------
def _parse_z(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError("--z takes re or re,im")
    vals = [float(p) for p in parts]
    return (vals[0], vals[1] if len(vals) == 2 else 0.0)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdmosc", description="Position-dependent mass oscillators.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--family", choices=[k.value for k in MassKind])
    p.add_argument("--n", type=int)
    p.add_argument("--x0", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--w", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--potential", choices=Y_POTENTIALS)
    p.add_argument("--levels", type=int, help="number of levels (k = 0 .. levels-1)")
    p.add_argument("--k", type=int)
    p.add_argument("--grid-points", dest="grid_points", type=int)
    p.add_argument("--ymax-margin", dest="ymax_margin", type=float)
    p.add_argument("--z", type=_parse_z, help="complex label as re,im")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.add_argument("--direction", choices=("raise", "lower"))
    p.add_argument("--steps", type=int)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    base = {}
    if ns.config:
        with open(ns.config, encoding="utf-8") as fh:
            base = json.load(fh)
    flags = {k: v for k, v in vars(ns).items() if k != "config" and v is not None}
    base.update(flags)
    return RunConfig.from_dict(base)


def main(argv: Optional[list[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text = run(cfg)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not cfg.out:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
