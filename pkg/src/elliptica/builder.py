"""Factories for functions invariant under a wallpaper group.

Every family is built from ``wp`` and ``wp'`` of the period lattice:

* sensible groups (p1, p2, p3, p4, p6): arbitrary rational functions of
  ``wp``, ``wp^2``, ``wp'``, ``wp'^2`` or ``wp^3`` (plus ``S(wp) wp'`` for p1);
* groups with a mirror along the real axis: the same forms with
  real-coefficient rational functions;
* glide groups (pg, p2mg, p2gg, p4mg): rational functions of
  ``w = (wp - a)/c`` satisfying an inversion symmetry in ``w``.

Family constraints are checked when a function is built; the verifier is the
independent check that the resulting function really is invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (AsymmetricQ, ConfigError, ConstraintViolation, EvaluationFailure,
                     IncompatibleLattice, Indeterminate, MissingParameter,
                     NonRealCoefficients, OddQForP4mg)
from .groups import GroupSpec, align, lookup
from .lattice import Lattice
from .ratfunc import (FactoredSymmetricRational, RationalFunction, Variant,
                      check_inversion_symmetry, eval_rational, even_decompose,
                      expand_factored, glide_T_from_factored, is_real_on_reals,
                      random_factored, random_rational, weighted_T_check)
from .weierstrass import WeierstrassContext, make_context

# form name -> (variable fed to the main function, has a wp' term)
FORMS = {
    "p1": "R(wp) + S(wp) wp'",
    "p2": "R(wp)",
    "p4": "R(wp^2)",
    "p3": "R(wp')",
    "p6V": "V(wp'^2)",
    "p6U": "U(wp^3)",
    "glide": "Q(w) + T(w) wp'",
    "glideQ": "Q(w)",
}

# sensible subgroup form used by each group
_BASE_FORM = {
    "p1": "p1", "pm": "p1", "cm": "p1",
    "p2": "p2", "p2mm": "p2", "c2mm": "p2",
    "p3": "p3", "p31m": "p3", "p3m1": "p3",
    "p4": "p4", "p4mm": "p4",
    "p6": "p6", "p6mm": "p6",
}

_GLIDE_VARIANT = {"pg": Variant.MINUS, "p2mg": Variant.MINUS,
                  "p2gg": Variant.PLUS, "p4mg": Variant.PLUS}

VALUE_CAP = 1e250


@dataclass(frozen=True)
class Recipe:
    """Structural description of a built function."""

    form: str
    params: dict
    a: float | None = None
    c: float | None = None
    factored: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"form": FORMS[self.form], "params": {k: v.to_json() for k, v in self.params.items()}}
        if self.a is not None:
            out["a"], out["c"] = self.a, self.c
        if self.factored:
            out["factored"] = {k: v.to_json() for k, v in self.factored.items()}
        return out


def _safe_eval(f: RationalFunction, w: np.ndarray) -> np.ndarray:
    try:
        return eval_rational(f, w)
    except Indeterminate:
        out = np.empty(w.shape, dtype=complex)
        for i, x in enumerate(w):
            try:
                out[i] = eval_rational(f, x)
            except Indeterminate:
                out[i] = np.nan
        return out


def _wp_prime_term(f: RationalFunction, x: np.ndarray, pp: np.ndarray, pole: np.ndarray) -> np.ndarray:
    """``f(x) * wp'`` where ``x`` behaves like ``wp`` near the poles.

    At a pole ``wp ~ z^-2`` and ``wp' ~ z^-3``, so ``f(x) wp'`` has a pole
    unless ``f`` vanishes at infinity to order two or more, in which case the
    limit is zero.
    """
    out = np.zeros(x.shape, dtype=complex)
    if f.is_zero():
        return out
    fin = ~pole
    out[fin] = _safe_eval(f, x[fin]) * pp[fin]
    dn, dd = f.degree
    out[pole] = 0 if dd - dn >= 2 else np.inf
    return out


@dataclass(frozen=True)
class WallpaperFunction:
    """A function invariant under ``group`` on ``ctx.lattice``; call it on points."""

    group: GroupSpec
    ctx: WeierstrassContext
    recipe: Recipe
    backend: str | None = field(default=None, compare=False)

    @property
    def lattice(self) -> Lattice:
        return self.ctx.lattice

    def __call__(self, z):
        return self.evaluate(z)

    def evaluate(self, z):
        """Function values at ``z`` (scalar or array).  Poles hold ``inf``."""
        scalar = np.ndim(z) == 0
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        shape = z.shape
        p, pp, pole = self.ctx.evaluate(z.ravel(), self.backend)
        r = self.recipe
        P = r.params
        form = r.form
        if form == "p1":
            val = _safe_eval(P["R"], p) + _wp_prime_term(P["S"], p, pp, pole)
        elif form == "p2":
            val = _safe_eval(P["R"], p)
        elif form == "p4":
            with np.errstate(over="ignore"):
                val = _safe_eval(P["R"], p * p)
        elif form == "p3":
            val = _safe_eval(P["R"], pp)
        elif form == "p6V":
            with np.errstate(over="ignore"):
                val = _safe_eval(P["V"], pp * pp)
        elif form == "p6U":
            with np.errstate(over="ignore"):
                val = _safe_eval(P["U"], p ** 3)
        elif form in ("glide", "glideQ"):
            w = (p - r.a) / r.c
            val = _safe_eval(P["Q"], w)
            if form == "glide":
                val = val + _wp_prime_term(P["T"], w, pp, pole)
        else:  # pragma: no cover - recipes are built internally
            raise ValueError(form)
        val = val.reshape(shape)
        return complex(val[0]) if scalar else val

    def to_json(self) -> dict:
        return {"group": self.group.name, "lattice": self.lattice.to_json(),
                "recipe": self.recipe.to_json()}


def _as_rational(v, name: str) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, FactoredSymmetricRational):
        return expand_factored(v)
    if isinstance(v, (int, float, complex)):
        return RationalFunction.constant(v)
    raise ConfigError(f"parameter {name} must be a rational function, got {type(v).__name__}")


_ALLOWED = {"p1": {"R", "S"}, "p2": {"R", "S"}, "p3": {"R", "S"}, "p4": {"R", "S"},
            "p6": {"U", "V", "form"}}


def _check_keys(spec: GroupSpec, params: dict) -> None:
    if spec.family == "glide":
        allowed = {"Q", "T"} | ({"P"} if spec.name == "p4mg" else set())
    else:
        allowed = _ALLOWED[_BASE_FORM[spec.name]]
    extra = set(params) - allowed
    if extra:
        raise ConfigError(f"group {spec.name} does not use parameter(s) {', '.join(sorted(extra))}; "
                          f"expected {', '.join(sorted(allowed))}")


def _need(params: dict, name: str, group: str) -> RationalFunction:
    if name not in params or params[name] is None:
        raise MissingParameter(f"group {group} needs parameter {name}")
    return _as_rational(params[name], name)


def aligned_context(spec: GroupSpec, ctx_or_lattice) -> WeierstrassContext:
    """Context on the group-aligned lattice; rebuilt only if the basis changes."""
    if isinstance(ctx_or_lattice, WeierstrassContext):
        ctx, lattice = ctx_or_lattice, ctx_or_lattice.lattice
    else:
        ctx, lattice = None, ctx_or_lattice
    aligned = align(spec, lattice)
    if aligned is None:
        raise IncompatibleLattice(
            f"group {spec.name} needs a {spec.required_class} lattice, got tau = {lattice.tau:.6g}")
    if ctx is not None and ctx.lattice.same_basis(aligned):
        return ctx
    if ctx is None:
        return make_context(aligned)
    return make_context(aligned, terms=len(ctx.laurent_coeffs),
                        series_radius=ctx.series_radius, pole_ratio=ctx.pole_ratio)


def _sensible_recipe(base: str, params: dict, group: str) -> Recipe:
    if base == "p1":
        S = params.get("S")
        return Recipe("p1", {"R": _need(params, "R", group),
                             "S": RationalFunction.constant(0) if S is None else _as_rational(S, "S")})
    if base in ("p2", "p4", "p3"):
        if params.get("S") is not None:
            raise ConstraintViolation(f"group {group} has a rotation; S(wp) wp' terms are not allowed")
        return Recipe(base, {"R": _need(params, "R", group)})
    # p6: exactly one of V (function of wp'^2) or U (function of wp^3)
    form = params.get("form")
    has_v, has_u = params.get("V") is not None, params.get("U") is not None
    if form is not None and form not in ("U", "V"):
        raise ConfigError(f"p6 form must be 'U' or 'V', got {form!r}")
    if has_v and has_u:
        raise ConfigError("give only one of U or V")
    if form == "U" or (form is None and has_u):
        return Recipe("p6U", {"U": _need(params, "U", group)})
    return Recipe("p6V", {"V": _need(params, "V", group)})


def build_sensible(group, ctx, params: dict, check: bool = True) -> WallpaperFunction:
    spec = lookup(group) if isinstance(group, str) else group
    _check_keys(spec, params)
    if not spec.sensible:
        raise ValueError(f"{spec.name} is not a sensible group")
    ctx = aligned_context(spec, ctx)
    return WallpaperFunction(spec, ctx, _sensible_recipe(_BASE_FORM[spec.name], params, spec.name))


def build_axial(group, ctx, params: dict, check: bool = True) -> WallpaperFunction:
    spec = lookup(group) if isinstance(group, str) else group
    _check_keys(spec, params)
    if spec.family != "axial":
        raise ValueError(f"{spec.name} is not a mirror group")
    ctx = aligned_context(spec, ctx)
    recipe = _sensible_recipe(_BASE_FORM[spec.name], params, spec.name)
    if check:
        for name, f in recipe.params.items():
            if not is_real_on_reals(f):
                raise NonRealCoefficients(
                    f"group {spec.name} needs {name} real on the real axis (real coefficients)")
    return WallpaperFunction(spec, ctx, recipe)


def glide_constants(spec: GroupSpec, ctx: WeierstrassContext) -> tuple[float, float]:
    """``(a, c)`` with ``w = (wp - a)/c`` for a glide family.

    ``c`` is the positive square root; the radicand is positive on a
    rectangular lattice with the real period first.
    """
    e1, e2, e3 = ctx.invariants.e
    if spec.name == "pg":
        a, c2 = e1, (e1 - e2) * (e1 - e3)
    elif spec.name == "p2mg":
        a, c2 = e2, (e2 - e1) * (e2 - e3)
    else:
        a, c2 = e3, (e1 - e3) * (e3 - e2)
    scale = max(abs(e1), abs(e2), abs(e3))
    if abs(a.imag) > 1e-8 * scale or abs(c2.imag) > 1e-8 * scale**2 or c2.real <= 0:
        raise EvaluationFailure(f"glide constants for {spec.name} are not real and positive: "
                                f"a = {a}, c^2 = {c2}")
    return float(a.real), math.sqrt(c2.real)


def _power_compose(f: RationalFunction, k: int) -> RationalFunction:
    """``w -> f(w^k)``."""
    def spread(c):
        out = np.zeros(k * (len(c) - 1) + 1, dtype=complex)
        out[::k] = c
        return out
    return RationalFunction(spread(f.num), spread(f.den), reduce=False)


def build_glide(group, ctx, params: dict, check: bool = True) -> WallpaperFunction:
    spec = lookup(group) if isinstance(group, str) else group
    _check_keys(spec, params)
    if spec.family != "glide":
        raise ValueError(f"{spec.name} is not a glide group")
    ctx = aligned_context(spec, ctx)
    variant = _GLIDE_VARIANT[spec.name]
    factored = {}
    q_raw = params.get("Q")
    if spec.name == "p4mg" and q_raw is None and params.get("P") is not None:
        Q = _power_compose(_as_rational(params["P"], "P"), 2)
    else:
        if isinstance(q_raw, FactoredSymmetricRational):
            if q_raw.variant is not variant:
                raise AsymmetricQ(f"group {spec.name} needs the {variant.value} variant")
            factored["Q"] = q_raw
        Q = _need(params, "Q", spec.name)
    T_raw = params.get("T")
    if spec.name != "pg" and T_raw is not None and not _as_rational(T_raw, "T").is_zero():
        raise ConstraintViolation(f"group {spec.name} has a rotation; T(w) wp' terms are not allowed")
    if isinstance(T_raw, FactoredSymmetricRational):
        factored["T"] = T_raw
        T = glide_T_from_factored(T_raw)
    else:
        T = RationalFunction.constant(0) if T_raw is None else _as_rational(T_raw, "T")
    if check:
        if not check_inversion_symmetry(Q, variant):
            raise AsymmetricQ(f"Q fails the {variant.value} inversion symmetry required by {spec.name}")
        if not T.is_zero() and not weighted_T_check(T, variant):
            raise AsymmetricQ(f"T fails the inversion condition required by {spec.name}")
        if spec.name == "p4mg" and even_decompose(Q) is None:
            raise OddQForP4mg("p4mg needs an even Q(w) = P(w^2)")
    a, c = glide_constants(spec, ctx)
    form = "glide" if spec.name == "pg" else "glideQ"
    recipe_params = {"Q": Q, "T": T} if form == "glide" else {"Q": Q}
    return WallpaperFunction(spec, ctx, Recipe(form, recipe_params, a, c, factored))


def build(group, ctx_or_lattice, params: dict, check: bool = True) -> WallpaperFunction:
    """Dispatch on the group's family."""
    spec = lookup(group) if isinstance(group, str) else group
    factory = {"sensible": build_sensible, "axial": build_axial, "glide": build_glide}[spec.family]
    return factory(spec, ctx_or_lattice, params, check=check)


def params_from_json(d: dict) -> dict:
    """Parameter dict from config JSON.

    Each of R, S, Q, T, U, V, P is a rational function ``{"num", "den"}``, a
    number, or (for Q and T) a factored symmetric family ``{"C", "p", ...}``;
    a factored T stands for ``i*Q/w`` with that family member as ``Q``.
    """
    if not isinstance(d, dict):
        raise ConfigError("params must be an object")
    out = {}
    for key, v in d.items():
        if key == "form":
            out[key] = v
        elif key in ("R", "S", "Q", "T", "U", "V", "P"):
            if isinstance(v, dict) and "C" in v:
                out[key] = FactoredSymmetricRational.from_json(v)
            else:
                out[key] = RationalFunction.from_json(v)
        else:
            raise ConfigError(f"unknown parameter {key!r}")
    return out


def random_params(group, rng: np.random.Generator, max_deg: int = 2) -> dict:
    """Random valid parameters for the group's family."""
    spec = lookup(group) if isinstance(group, str) else group
    if spec.family == "glide":
        variant = _GLIDE_VARIANT[spec.name]
        even = spec.name == "p4mg"
        Q = random_factored(rng, variant, max_factors=2, max_mult=1, even=even)
        params = {"Q": Q}
        if spec.name == "pg":
            params["T"] = random_factored(rng, variant, max_factors=2, max_mult=1)
        return params
    real = spec.family == "axial"
    base = _BASE_FORM[spec.name]
    rf = lambda: random_rational(rng, max_deg, real=real)  # noqa: E731
    if base == "p1":
        return {"R": rf(), "S": rf()}
    if base == "p6":
        return {"V": rf()} if rng.random() < 0.5 else {"U": rf()}
    return {"R": rf()}


def p2mg_via_rotated_pg(ctx: WeierstrassContext, Q: RationalFunction):
    """A p2mg function written through the pg family in coordinates turned by 90 degrees.

    The vertical glide ``z -> -conj(z) - w2/2`` of p2mg becomes the
    horizontal glide of pg for ``zeta = z / i`` on the lattice ``L / i``.
    There ``wp`` changes sign and the half-period values become
    ``(-e2, -e1, -e3)``, i.e. e1 and e2 are exchanged (up to sign), so the
    pg variable equals ``-w`` for the p2mg variable ``w`` and the same
    function is ``Q'(w') = Q(-w')``.  Returns ``z -> f(z)``.
    """
    rot = Lattice(ctx.lattice.omega2 / 1j, ctx.lattice.omega1 / 1j)
    Qneg = RationalFunction(Q.num * (-1.0) ** np.arange(len(Q.num)),
                            Q.den * (-1.0) ** np.arange(len(Q.den)), reduce=False)
    f = build_glide("pg", make_context(rot, terms=len(ctx.laurent_coeffs)), {"Q": Qneg})

    def evaluate(z):
        return f(np.asarray(z, dtype=complex) / 1j)
    evaluate.pg_function = f
    return evaluate
