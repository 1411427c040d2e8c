"""JSON configuration for building, verifying and rendering a function.

Example::

    {"group": "p4", "lattice": [[1, 0], [0, 1]],
     "params": {"R": {"num": [[0, 0], [1, 0]], "den": [[1, 0]]}},
     "viewport": [[-1, -1], [1, 1]], "width": 256, "height": 256,
     "supersample": 2}

``viewport`` is ``[lower_left, upper_right]``.  An optional ``numerics``
object accepts ``terms``, ``series_radius``, ``pole_ratio`` and ``backend``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ._serial import j2c
from .builder import WallpaperFunction, build, params_from_json
from .errors import ConfigError, DegenerateLattice
from .groups import GroupSpec, lookup
from .lattice import Lattice
from .weierstrass import DEFAULT_TERMS, POLE_RATIO, SERIES_RADIUS, make_context

DEFAULT_SIZE = 256


@dataclass(frozen=True)
class RenderConfig:
    group: GroupSpec
    lattice: Lattice
    params: dict
    viewport: tuple[complex, complex]
    width: int = DEFAULT_SIZE
    height: int = DEFAULT_SIZE
    supersample: int = 1
    numerics: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("width", "height", "supersample"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        lo, hi = self.viewport
        if not (hi.real > lo.real and hi.imag > lo.imag):
            raise ConfigError(f"viewport must have lower-left below and left of upper-right: {self.viewport}")

    def with_overrides(self, **kw) -> "RenderConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def build(self) -> WallpaperFunction:
        num = self.numerics
        ctx = make_context(self.lattice, terms=num.get("terms", DEFAULT_TERMS),
                           series_radius=num.get("series_radius", SERIES_RADIUS),
                           pole_ratio=num.get("pole_ratio", POLE_RATIO))
        f = build(self.group, ctx, self.params)
        if num.get("backend"):
            f = replace(f, backend=num["backend"])
        return f


def parse_lattice(v) -> Lattice:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"lattice must be [[re, im], [re, im]], got {v!r}")
    try:
        return Lattice(j2c(v[0]), j2c(v[1]))
    except DegenerateLattice as exc:
        raise ConfigError(str(exc)) from exc


def default_viewport(lattice: Lattice) -> tuple[complex, complex]:
    r = abs(lattice.omega1) + abs(lattice.omega2)
    return complex(-r, -r), complex(r, r)


def parse_viewport(v) -> tuple[complex, complex]:
    if isinstance(v, str):
        try:
            x0, y0, x1, y1 = (float(t) for t in v.split(","))
        except ValueError:
            raise ConfigError(f"viewport must be 'x0,y0,x1,y1', got {v!r}") from None
        return complex(x0, y0), complex(x1, y1)
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ConfigError(f"viewport must be [[x0, y0], [x1, y1]], got {v!r}")
    return j2c(v[0]), j2c(v[1])


_KNOWN = {"group", "lattice", "params", "viewport", "width", "height", "supersample", "numerics"}
_NUMERICS = {"terms": int, "series_radius": float, "pole_ratio": float, "backend": str}


def config_from_dict(d: dict) -> RenderConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(d) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in ("group", "lattice"):
        if key not in d:
            raise ConfigError(f"config needs '{key}'")
    try:
        group = lookup(str(d["group"]))
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from None
    lattice = parse_lattice(d["lattice"])
    numerics = d.get("numerics", {})
    if not isinstance(numerics, dict) or set(numerics) - set(_NUMERICS):
        raise ConfigError(f"numerics accepts only {', '.join(_NUMERICS)}")
    for k, typ in _NUMERICS.items():
        if k in numerics and not isinstance(numerics[k], (typ, int) if typ is float else typ):
            raise ConfigError(f"numerics.{k} must be {typ.__name__}")
    if numerics.get("backend") not in (None, "python", "compiled"):
        raise ConfigError("numerics.backend must be 'python' or 'compiled'")
    viewport = parse_viewport(d["viewport"]) if "viewport" in d else default_viewport(lattice)
    return RenderConfig(group=group, lattice=lattice, params=params_from_json(d.get("params", {})),
                        viewport=viewport, width=d.get("width", DEFAULT_SIZE),
                        height=d.get("height", DEFAULT_SIZE),
                        supersample=d.get("supersample", 1), numerics=numerics)


def load_config(path) -> RenderConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return config_from_dict(d)
