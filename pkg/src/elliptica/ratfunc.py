"""Rational functions in coefficient form and the inversion-symmetric families.

Coefficients are stored in ascending powers.  Every :class:`RationalFunction`
is kept reduced (common roots of numerator and denominator cancelled) with a
monic denominator, which makes "real coefficients" a well-defined test.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._serial import c2j, j2c
from .errors import ConfigError, ConstraintViolation, Indeterminate

ROOT_TOL = 1e-9


def _trim(c: np.ndarray) -> np.ndarray:
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1] if len(nz) else c[:1] * 0


def _horner(c: np.ndarray, w):
    out = np.zeros_like(w) + c[-1]
    for a in c[-2::-1]:
        out = out * w + a
    return out


def _deflate(c: np.ndarray, r: complex) -> np.ndarray:
    """Divide the polynomial by ``(w - r)``, dropping the remainder."""
    n = len(c) - 1
    q = np.zeros(n, dtype=complex)
    acc = 0j
    for k in range(n, 0, -1):
        acc = acc * r + c[k]
        q[k - 1] = acc
    return q


def _vanishes_at(c: np.ndarray, r: complex, tol: float) -> bool:
    scale = np.sum(np.abs(c) * max(1.0, abs(r)) ** np.arange(len(c)))
    return abs(_horner(c, np.complex128(r))) <= tol * scale


def _cancel_common(num: np.ndarray, den: np.ndarray, tol: float):
    while len(num) > 1 and len(den) > 1:
        small, other = (num, den) if len(num) <= len(den) else (den, num)
        for r in np.roots(small[::-1]):
            if _vanishes_at(other, r, tol) and _vanishes_at(small, r, tol):
                num, den = _deflate(num, r), _deflate(den, r)
                break
        else:
            break
    return num, den


class RationalFunction:
    """``num(w) / den(w)`` with ascending-power complex coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1.0,), reduce: bool = True):
        num = _trim(np.atleast_1d(np.asarray(num, dtype=complex)))
        den = _trim(np.atleast_1d(np.asarray(den, dtype=complex)))
        if not np.any(den):
            raise ZeroDivisionError("denominator is identically zero")
        if not np.any(num):
            num, den = num[:1], np.ones(1, dtype=complex)
        elif reduce:
            num, den = _cancel_common(num, den, ROOT_TOL)
        lead = den[-1]
        num = num / lead
        den = den / lead
        num.flags.writeable = False
        den.flags.writeable = False
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def constant(cls, c) -> "RationalFunction":
        return cls([c])

    @classmethod
    def identity(cls) -> "RationalFunction":
        return cls([0, 1])

    @property
    def degree(self) -> tuple[int, int]:
        return len(self.num) - 1, len(self.den) - 1

    def is_zero(self) -> bool:
        return not np.any(self.num)

    def __repr__(self):
        return f"RationalFunction(num={self.num.tolist()}, den={self.den.tolist()})"

    def __call__(self, w):
        return eval_rational(self, w)

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        return RationalFunction([other])

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(
            np.polynomial.polynomial.polyadd(np.convolve(self.num, o.den), np.convolve(o.num, self.den)),
            np.convolve(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(np.convolve(self.num, o.num), np.convolve(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(np.convolve(self.num, o.den), np.convolve(self.den, o.num))

    def allclose(self, other: "RationalFunction", tol: float = 1e-10) -> bool:
        if self.degree != other.degree:
            return False
        scale = max(np.max(np.abs(self.num)), np.max(np.abs(self.den)), 1e-300)
        return bool(np.max(np.abs(self.num - other.num)) <= tol * scale
                    and np.max(np.abs(self.den - other.den)) <= tol * scale)

    def to_json(self) -> dict:
        return {"num": [c2j(c) for c in self.num], "den": [c2j(c) for c in self.den]}

    @classmethod
    def from_json(cls, d) -> "RationalFunction":
        if isinstance(d, (int, float)) or (isinstance(d, list) and len(d) == 2
                                           and all(isinstance(x, (int, float)) for x in d)):
            return cls.constant(j2c(d))
        if not isinstance(d, dict) or "num" not in d:
            raise ConfigError(f"rational function needs a 'num' list: {d!r}")
        num = [j2c(c) for c in d["num"]]
        den = [j2c(c) for c in d.get("den", [[1, 0]])]
        try:
            return cls(num, den)
        except ZeroDivisionError as exc:
            raise ConfigError(str(exc)) from exc


def eval_rational(f: RationalFunction, w, tol: float = 1e-14):
    """Evaluate ``f`` at ``w`` (scalar or array).

    Infinite ``w`` yields the value at infinity.  Poles give ``inf``;
    :class:`Indeterminate` is raised where numerator and denominator both
    vanish to working precision.
    """
    scalar = np.ndim(w) == 0
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    out = np.empty(w.shape, dtype=complex)
    inf = ~np.isfinite(w)
    fin = ~inf
    if np.any(inf):
        dn, dd = f.degree
        if f.is_zero():
            out[inf] = 0
        elif dn > dd:
            out[inf] = np.inf
        elif dn == dd:
            out[inf] = f.num[-1] / f.den[-1]
        else:
            out[inf] = 0
    if np.any(fin):
        wf = w[fin]
        N = _horner(f.num, wf)
        D = _horner(f.den, wf)
        big = np.maximum(1.0, np.abs(wf))
        sN = tol * _horner(np.abs(f.num).astype(complex), big).real
        sD = tol * _horner(np.abs(f.den).astype(complex), big).real
        if not f.is_zero() and np.any((np.abs(N) <= sN) & (np.abs(D) <= sD)):
            raise Indeterminate("numerator and denominator both vanish")
        with np.errstate(divide="ignore", invalid="ignore"):
            val = N / D
        val[D == 0] = np.inf
        out[fin] = val
    return complex(out[0]) if scalar else out


def conjugate_coefficients(f: RationalFunction) -> RationalFunction:
    """The function ``w -> conj(f(conj(w)))``."""
    return RationalFunction(np.conj(f.num), np.conj(f.den), reduce=False)


def _sparse_part(f: RationalFunction, step: int, tol: float):
    scale = max(np.max(np.abs(f.num)), np.max(np.abs(f.den)))
    for c in (f.num, f.den):
        mask = np.arange(len(c)) % step != 0
        if np.any(np.abs(c[mask]) > tol * scale):
            return None
    return RationalFunction(f.num[::step], f.den[::step], reduce=False)


def even_decompose(f: RationalFunction, tol: float = 1e-10):
    """``T`` with ``f(w) = T(w^2)``, or ``None`` if ``f`` is not even."""
    return _sparse_part(f, 2, tol)


def cube_decompose(f: RationalFunction, tol: float = 1e-10):
    """``T`` with ``f(w) = T(w^3)``, or ``None``."""
    return _sparse_part(f, 3, tol)


def is_real_on_reals(f: RationalFunction, tol: float = 1e-10) -> bool:
    # the reduced form with monic denominator is unique, so realness is a coefficient test
    scale = max(np.max(np.abs(f.num)), np.max(np.abs(f.den)))
    worst = max(np.max(np.abs(f.num.imag)), np.max(np.abs(f.den.imag)))
    return bool(worst <= tol * scale)


class Variant(str, enum.Enum):
    """Which inversion ``w -> sigma / conj(w)`` the family is symmetric under."""

    MINUS = "minus"  # sigma = +1, factors (w - a)(conj(a) w - 1)
    PLUS = "plus"    # sigma = -1, factors (w - a)(conj(a) w + 1)

    @property
    def sigma(self) -> int:
        return 1 if self is Variant.MINUS else -1


@dataclass(frozen=True)
class FactoredSymmetricRational:
    C: complex
    p: int
    zeros: tuple = ()
    poles: tuple = ()
    variant: Variant = Variant.MINUS

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        for name in ("zeros", "poles"):
            items = tuple((complex(a), int(m)) for a, m in getattr(self, name))
            for a, m in items:
                if a == 0:
                    raise ConstraintViolation("factors at 0 must be expressed through the exponent p")
                if m < 1:
                    raise ConstraintViolation("multiplicities must be positive integers")
            object.__setattr__(self, name, items)

    def constraint_holds(self) -> bool:
        return (sum(m for _, m in self.poles) == self.p + sum(m for _, m in self.zeros)
                and complex(self.C).imag == 0 and self.C != 0)

    def to_json(self) -> dict:
        return {"C": complex(self.C).real, "p": self.p, "variant": self.variant.value,
                "zeros": [{"a": c2j(a), "lambda": m} for a, m in self.zeros],
                "poles": [{"b": c2j(b), "mu": m} for b, m in self.poles]}

    @classmethod
    def from_json(cls, d) -> "FactoredSymmetricRational":
        try:
            return cls(C=float(d["C"]), p=int(d["p"]), variant=Variant(d.get("variant", "minus")),
                       zeros=[(j2c(z["a"]), int(z["lambda"])) for z in d.get("zeros", [])],
                       poles=[(j2c(z["b"]), int(z["mu"])) for z in d.get("poles", [])])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad factored rational function {d!r}: {exc}") from exc


def _pair_factor(a: complex, variant: Variant) -> np.ndarray:
    # (w - a)(conj(a) w -+ 1), ascending coefficients
    s = -1.0 if variant is Variant.MINUS else 1.0
    return np.convolve([-a, 1.0], [s, np.conj(a)])


def expand_factored(q: FactoredSymmetricRational, check: bool = True) -> RationalFunction:
    if check and not q.constraint_holds():
        raise ConstraintViolation(
            "need C real and nonzero with sum(mu) == p + sum(lambda)")
    num = np.array([complex(q.C)])
    den = np.array([1.0 + 0j])
    for a, m in q.zeros:
        for _ in range(m):
            num = np.convolve(num, _pair_factor(a, q.variant))
    for b, m in q.poles:
        for _ in range(m):
            den = np.convolve(den, _pair_factor(b, q.variant))
    if q.p > 0:
        num = np.concatenate([np.zeros(q.p), num])
    elif q.p < 0:
        den = np.concatenate([np.zeros(-q.p), den])
    return RationalFunction(num, den)


def _sample_w(samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    r = np.exp(rng.uniform(np.log(0.25), np.log(4.0), samples))
    return r * np.exp(2j * np.pi * rng.random(samples))


MAX_CONDITION = 1e6


def _cond_den(f: RationalFunction, w) -> np.ndarray:
    """Relative condition number of the denominator at ``w``.

    Rounding errors in ``f(w)`` relative to ``|f(w)|`` are about ``eps``
    times this; it blows up next to poles.
    """
    w = np.asarray(w, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        c = _horner(np.abs(f.den).astype(complex), np.abs(w).astype(complex)).real / np.abs(_horner(f.den, w))
    return np.nan_to_num(c, nan=np.inf)


def inversion_deviation(f: RationalFunction, sigma: int, parity: int, w) -> float:
    """Largest ``|f(w) - parity*conj(f(sigma/conj(w)))| / max(1, |f(w)|)`` over ``w``.

    Samples where either evaluation is ill-conditioned (condition number
    above ``MAX_CONDITION``, i.e. right next to a pole) carry no information
    at double precision and are skipped.
    """
    w = np.asarray(w, dtype=complex)
    v = sigma / np.conj(w)
    a = eval_rational(f, w)
    b = parity * np.conj(eval_rational(f, v))
    ok = np.isfinite(a) & np.isfinite(b) & (np.abs(a) < 1e12) & (np.abs(b) < 1e12)
    if not f.is_zero():
        ok &= (_cond_den(f, w) < MAX_CONDITION) & (_cond_den(f, v) < MAX_CONDITION)
    if not np.any(ok):
        return np.inf
    return float(np.max(np.abs(a[ok] - b[ok]) / np.maximum(1.0, np.abs(a[ok]))))


def check_inversion_symmetry(f: RationalFunction, variant, samples: int = 200,
                             tol: float = 1e-9, seed: int = 0, points=None) -> bool:
    """``f(w) == conj(f(sigma / conj(w)))`` at sampled ``w``."""
    variant = Variant(variant)
    w = _sample_w(samples, seed) if points is None else points
    return inversion_deviation(f, variant.sigma, 1, w) <= tol


def weighted_T_check(t: RationalFunction, variant, samples: int = 200,
                     tol: float = 1e-9, seed: int = 0) -> bool:
    """Condition on the coefficient of wp' in a glide family.

    Invariance needs ``w*t(w) == -conj(u(sigma/conj(w)))`` with ``u = w*t``,
    i.e. ``i*w*t(w)`` lies in the symmetric family of the same variant.
    """
    variant = Variant(variant)
    u = t * RationalFunction.identity()
    return inversion_deviation(u, variant.sigma, -1, _sample_w(samples, seed)) <= tol


def glide_T_from_factored(q: FactoredSymmetricRational) -> RationalFunction:
    """A valid wp' coefficient for a glide family: ``i*Q(w)/w``."""
    return expand_factored(q) * RationalFunction([1j], [0, 1])


def random_factored(rng: np.random.Generator, variant, max_factors: int = 3,
                    max_mult: int = 2, even: bool = False) -> FactoredSymmetricRational:
    """Random member of a symmetric family satisfying the exponent constraint.

    With ``even=True`` the zero and pole sets are closed under negation and
    ``p`` is even, which makes the expanded function even.
    """
    variant = Variant(variant)

    def draw(k):
        out = []
        for _ in range(k):
            a = np.exp(rng.uniform(np.log(0.3), np.log(3.0))) * np.exp(2j * np.pi * rng.random())
            m = int(rng.integers(1, max_mult + 1))
            out.append((complex(a), m))
            if even:
                out.append((complex(-a), m))
        return out

    kz = int(rng.integers(0, max_factors + 1))
    kp = int(rng.integers(0, max_factors + 1))
    zeros, poles = draw(kz), draw(kp)
    p = sum(m for _, m in poles) - sum(m for _, m in zeros)
    C = float(rng.choice([-1, 1]) * rng.uniform(0.5, 2.0))
    return FactoredSymmetricRational(C=C, p=p, zeros=zeros, poles=poles, variant=variant)


def random_rational(rng: np.random.Generator, max_deg: int = 3, real: bool = False) -> RationalFunction:
    dn = int(rng.integers(0, max_deg + 1))
    dd = int(rng.integers(0, max_deg + 1))

    def coeffs(k):
        c = rng.normal(size=k + 1)
        if not real:
            c = c + 1j * rng.normal(size=k + 1)
        return c

    return RationalFunction(coeffs(dn), coeffs(dd))
