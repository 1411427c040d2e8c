"""Sampling check that a function is invariant under its group.

For a sense-preserving generator ``g`` the check is ``f(g.z) == f(z)``; for
a sense-reversing one it is ``conj(f(g.z)) == f(z)``.  Deviations are
measured relative to ``1 + |f(z)|``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ._serial import c2j
from .builder import WallpaperFunction, build
from .errors import SamplingExhausted
from .groups import act_on_value, lookup
from .ratfunc import RationalFunction
from .weierstrass import WeierstrassContext

VALUE_CAP = 1e4
DEFAULT_SAMPLES = 500
DEFAULT_TOL = 1e-7
DEFAULT_SEED = 0


def default_seed() -> int:
    """``ELLIPTICA_SEED`` from the environment, else 0."""
    v = os.environ.get("ELLIPTICA_SEED")
    return int(v) if v not in (None, "") else DEFAULT_SEED


def sample_points(ctx: WeierstrassContext, n: int, seed: int = DEFAULT_SEED,
                  value_cap: float = VALUE_CAP) -> np.ndarray:
    """``n`` reproducible points in the fundamental cell away from poles and half periods."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    lat = ctx.lattice
    out = []
    drawn = 0
    while sum(len(x) for x in out) < n:
        if drawn >= 100 * n:
            raise SamplingExhausted(f"rejected more than 99% of {drawn} candidate points")
        k = max(n, 64)
        xy = rng.random((k, 2))
        drawn += k
        z = xy[:, 0] * lat.omega1 + xy[:, 1] * lat.omega2
        # distance to the nearest point of the half lattice
        h = 2 * xy
        near = np.rint(h)
        d = np.abs((h[:, 0] - near[:, 0]) * lat.omega1 + (h[:, 1] - near[:, 1]) * lat.omega2) / 2
        keep = d >= ctx.pole_radius
        p, _, pole = ctx.evaluate(z[keep])
        good = ~pole & (np.abs(p) <= value_cap)
        out.append(z[keep][good])
    return np.concatenate(out)[:n]


@dataclass(frozen=True)
class GeneratorResult:
    kind: str
    max_dev: float
    worst_point: complex
    checked: int

    def to_json(self) -> dict:
        return {"kind": self.kind, "max_dev": self.max_dev, "worst_point": c2j(self.worst_point)}


@dataclass(frozen=True)
class VerifyReport:
    group: str
    passed: bool
    generators: tuple
    n: int
    tol: float
    seed: int

    @property
    def max_dev(self) -> float:
        return max(g.max_dev for g in self.generators)

    @property
    def worst_point(self) -> complex:
        return max(self.generators, key=lambda g: g.max_dev).worst_point

    @property
    def samples_used(self) -> int:
        return min(g.checked for g in self.generators)

    def deviation(self, kind_prefix: str) -> float:
        return max(g.max_dev for g in self.generators if g.kind.startswith(kind_prefix))

    def to_json(self) -> dict:
        return {"group": self.group, "pass": self.passed,
                "generators": [g.to_json() for g in self.generators],
                "n": self.n, "tol": self.tol, "seed": self.seed}


def verify_invariance(f: WallpaperFunction, n: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL,
                      seed: int | None = None, group=None) -> VerifyReport:
    """Check ``f`` against every generator of ``group`` (default: the group it was built for)."""
    seed = default_seed() if seed is None else seed
    spec = f.group if group is None else (lookup(group) if isinstance(group, str) else group)
    z = sample_points(f.ctx, n, seed)
    fz = np.asarray(f(z))
    results = []
    for g in spec.generators(f.lattice):
        fg = act_on_value(g, np.asarray(f(g(z))))
        ok = np.isfinite(fz) & np.isfinite(fg)
        dev = np.zeros(z.shape)
        dev[ok] = np.abs(fg[ok] - fz[ok]) / (1 + np.abs(fz[ok]))
        i = int(np.argmax(dev)) if np.any(ok) else 0
        results.append(GeneratorResult(g.label, float(dev[i]), complex(z[i]), int(ok.sum())))
    passed = all(r.max_dev <= tol and r.checked > 0 for r in results)
    return VerifyReport(spec.name, passed, tuple(results), n, tol, seed)


@dataclass(frozen=True)
class NegativeControl:
    function: WallpaperFunction
    expected_fail: str  # generator label
    description: str


_W = RationalFunction.identity()


def negative_controls(group, ctx) -> list[NegativeControl]:
    """Functions that break exactly the group's extra constraint.

    Each is an elliptic function of the lattice, so it passes both
    translations, but fails the designated rotation or (glide-)reflexion.
    """
    spec = lookup(group) if isinstance(group, str) else group
    gens = spec.generators(build(spec, ctx, _any_valid(spec)).lattice)
    rot = next((g.label for g in gens if g.label.startswith("rotation")), None)
    refl = next((g.label for g in gens if g.reversing), None)
    one = RationalFunction.constant(1)
    if spec.name == "p1":
        return []
    if spec.sensible:
        params, desc = {
            "p2": ({"R": _W, "S": one}, "wp + wp' (odd part present)"),
            "p3": ({"R": _W}, "wp (not fixed by the 3-fold rotation)"),
            "p4": ({"R": _W}, "wp (changes sign under z -> iz)"),
            "p6": ({"R": _W}, "wp' (changes sign under the half turn)"),
        }[spec.name]
        base = {"p2": "p1", "p3": "p2", "p4": "p2", "p6": "p3"}[spec.name]
        f = build(base, ctx, params)
        f = WallpaperFunction(spec, f.ctx, f.recipe)
        return [NegativeControl(f, rot, desc)]
    if spec.family == "axial":
        bad = RationalFunction([1j, 1])  # w + i
        key = "V" if spec.name == "p6mm" else "R"
        f = build(spec, ctx, {key: bad}, check=False)
        return [NegativeControl(f, refl, f"{key}(w) = w + i (imaginary coefficient)")]
    Q = RationalFunction([1, 0, 1]) if spec.name == "p4mg" else RationalFunction([1, 1])
    f = build(spec, ctx, {"Q": Q}, check=False)
    return [NegativeControl(f, refl, f"Q(w) = {'w^2' if spec.name == 'p4mg' else 'w'} + 1 "
                                     "(not inversion symmetric)")]


def _any_valid(spec) -> dict:
    if spec.family == "glide":
        return {"Q": RationalFunction.constant(1)}
    if spec.name in ("p6", "p6mm"):
        return {"V": _W}
    return {"R": _W}
