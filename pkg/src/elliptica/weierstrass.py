"""Weierstrass wp and wp' for an arbitrary period lattice.

Two independent evaluation routes are provided:

* :func:`eval_oracle` sums the defining lattice series directly.  Each row
  ``m*omega1 + n*omega2`` (fixed ``n``) is summed in closed form with
  ``pi^2 csc^2``, and the rows are truncated at ``|n| <= cutoff``.
* :class:`WeierstrassContext` precomputes the invariants, Laurent
  coefficients and half-period values once, and then evaluates by argument
  reduction, a Laurent series near the origin, and the half-period shift
  formulas elsewhere.  Very elongated cells are handled by summing over the
  cosets of a sublattice whose cell is close to square.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import (ConvergenceFailure, DegenerateAddition, DegenerateShift,
                     EvaluationFailure, PoleProximity)
from .lattice import (DEFAULT_CUTOFF, Lattice, LatticeInvariants, cot, csc2,
                      cubic_roots, eisenstein_sums, normalize_basis)

DEFAULT_TERMS = 24
SERIES_RADIUS = 0.4
POLE_RATIO = 1e-3
ORACLE_CUTOFF = 160
# largest residual offset (core units) the series is trusted at
MAX_RADIUS = 0.75
# reduced cells taller than this are split into near-square sublattice cosets
SUBLATTICE_ABOVE = 1.5

POLE = complex(math.inf, 0.0)


def laurent_coefficients(g2: complex, g3: complex, count: int = DEFAULT_TERMS) -> list[complex]:
    """Coefficients ``[c_2, ..., c_{count+1}]`` of ``wp(z) = z^-2 + sum c_k z^(2k-2)``.

    Uses ``c_2 = g2/20``, ``c_3 = g3/28`` and the convolution recursion that
    follows from the differential equation.
    """
    if count < 2:
        raise ValueError("count must be >= 2")
    c = {2: complex(g2) / 20, 3: complex(g3) / 28}
    for k in range(4, count + 2):
        acc = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3 * acc / ((2 * k + 1) * (k - 3))
    return [c[k] for k in range(2, count + 2)]


@dataclass(frozen=True)
class WpPair:
    p: complex
    pprime: complex
    at_pole: bool = False

    def to_json(self) -> dict:
        if self.at_pole:
            return {"p": None, "pprime": None, "at_pole": True}
        return {"p": [self.p.real, self.p.imag],
                "pprime": [self.pprime.real, self.pprime.imag], "at_pole": False}


def _series_point(u: complex, coeffs) -> tuple[complex, complex]:
    t = u * u
    A = 0j
    D = 0j
    for j in range(len(coeffs) - 1, -1, -1):
        A = A * t + coeffs[j]
        D = D * t + (2 * j + 2) * coeffs[j]
    return 1 / t + A * t, (D * t * t - 2) / (u * t)


def _shift_constants(e) -> np.ndarray:
    e1, e2, e3 = e
    return np.array([(e1 - e2) * (e1 - e3), (e2 - e1) * (e2 - e3), (e3 - e1) * (e3 - e2)])


@dataclass(frozen=True)
class _Core:
    """Evaluation data for a reduced lattice ``Z + Z tau`` with modest ``Im tau``."""

    tau: complex
    g2: complex
    g3: complex
    coeffs: np.ndarray
    e: np.ndarray
    B: np.ndarray

    @classmethod
    def build(cls, tau: complex, terms: int, cutoff: int) -> "_Core":
        G4, G6 = eisenstein_sums(tau, cutoff)
        g2, g3 = 60 * G4, 140 * G6
        coeffs = np.array(laurent_coefficients(g2, g3, terms))
        roots = cubic_roots(g2, g3)
        # Rough values at 1/2, tau/2, (1+tau)/2 by duplication from the
        # quarter periods; only used to decide which root is which.
        approx = []
        for h in (0.5, tau / 2, (1 + tau) / 2):
            p, pp = _series_point(h / 2, coeffs)
            ppp = 6 * p * p - g2 / 2
            approx.append((ppp / (2 * pp)) ** 2 - 2 * p)
        best = min(itertools.permutations(range(3)),
                   key=lambda perm: sum(abs(roots[perm[i]] - approx[i]) for i in range(3)))
        e = np.array([roots[i] for i in best])
        return cls(tau, g2, g3, coeffs, e, _shift_constants(e))

    def eval(self, z, series_radius: float, pole_radius: float, backend=None):
        k = _backend.get(backend)
        return k.wp_core(z, self.tau, self.coeffs, self.e, self.B,
                         series_radius, pole_radius, MAX_RADIUS)


@dataclass(frozen=True)
class WeierstrassContext:
    """Precomputed data for fast evaluation of wp on one lattice.

    Construct with :func:`make_context`.  Immutable and safe to share.
    """

    lattice: Lattice
    invariants: LatticeInvariants
    laurent_coeffs: tuple
    min_period_norm: float
    series_radius: float = SERIES_RADIUS
    pole_ratio: float = POLE_RATIO
    # internal frame: z_int = z / scale, lattice Z + Z tau
    scale: complex = field(default=1, repr=False)
    tau: complex = field(default=1j, repr=False)
    cosets: int = field(default=1, repr=False)
    core_scale: complex = field(default=1, repr=False)
    core: _Core = field(default=None, repr=False)
    coset_constant: complex = field(default=0j, repr=False)

    @property
    def pole_radius(self) -> float:
        return self.pole_ratio * self.min_period_norm

    def evaluate(self, z, backend=None):
        """Vectorised ``(wp, wp', at_pole)`` for an array of points.

        Entries at poles hold ``inf``.  Raises :class:`ConvergenceFailure`
        if any point could not be brought inside the trusted series radius.
        """
        z = np.asarray(z, dtype=complex)
        shape = z.shape
        zi = z.ravel() / self.scale
        if self.cosets == 1:
            p, pp, flag = self.core.eval(zi, self.series_radius, self.pole_ratio, backend)
        else:
            p = np.zeros(zi.shape, dtype=complex)
            pp = np.zeros(zi.shape, dtype=complex)
            flag = np.zeros(zi.shape, dtype=np.int8)
            cs = self.core_scale
            for j in range(self.cosets):
                pj, ppj, fj = self.core.eval((zi + j) / cs, self.series_radius, 0.0, backend)
                p += pj / cs**2
                pp += ppj / cs**3
                flag = np.maximum(flag, np.where(fj == 2, 2, 0).astype(np.int8))
            p -= self.coset_constant
            u, _, _ = _backend.get(backend).reduce_core(zi, self.tau)
            pole = np.abs(u) < self.pole_ratio
            p[pole] = np.inf
            pp[pole] = np.inf
            flag[pole] = 1
        if np.any(flag == 2):
            raise ConvergenceFailure("residual offset exceeds the trusted series radius")
        at_pole = flag == 1
        with np.errstate(invalid="ignore", over="ignore"):
            p = p / self.scale**2
            pp = pp / self.scale**3
        p[at_pole] = np.inf
        pp[at_pole] = np.inf
        return p.reshape(shape), pp.reshape(shape), at_pole.reshape(shape)

    def with_options(self, **kw) -> "WeierstrassContext":
        opts = dict(terms=len(self.laurent_coeffs), series_radius=self.series_radius,
                    pole_ratio=self.pole_ratio)
        opts.update(kw)
        return make_context(self.lattice, **opts)


def make_context(lattice: Lattice, terms: int = DEFAULT_TERMS,
                 series_radius: float = SERIES_RADIUS, pole_ratio: float = POLE_RATIO,
                 cutoff: int = DEFAULT_CUTOFF) -> WeierstrassContext:
    red = normalize_basis(lattice)
    s = red.omega1
    tau = red.tau
    G4, G6 = eisenstein_sums(tau, cutoff)
    g2 = 60 * G4 / s**4
    g3 = 140 * G6 / s**6

    if tau.imag > SUBLATTICE_ABOVE:
        M = int(round(tau.imag))
        sub = normalize_basis(Lattice(M, tau))
        core_scale, core = sub.omega1, _Core.build(sub.tau, terms, cutoff)
    else:
        M, core_scale, core = 1, 1, _Core.build(tau, terms, cutoff)

    ctx = WeierstrassContext(
        lattice=lattice,
        invariants=LatticeInvariants(g2, g3, 0j, 0j, 0j),
        laurent_coeffs=tuple(complex(c) / s ** (2 * k + 4) for k, c in
                             enumerate(laurent_coefficients(60 * G4, 140 * G6, terms))),
        min_period_norm=abs(s),
        series_radius=series_radius,
        pole_ratio=pole_ratio,
        scale=s, tau=tau, cosets=M, core_scale=core_scale, core=core,
    )
    if M > 1:
        js = np.arange(1, M) / core_scale
        pj, _, _ = core.eval(js, series_radius, 0.0)
        object.__setattr__(ctx, "coset_constant", complex(np.sum(pj / core_scale**2)))

    halves = np.array([lattice.omega1 / 2, lattice.omega2 / 2,
                       (lattice.omega1 + lattice.omega2) / 2])
    vals, _, _ = ctx.evaluate(halves)
    roots = cubic_roots(g2, g3)
    e = []
    for v in vals:
        i = int(np.argmin(np.abs(roots - v)))
        if abs(roots[i] - v) > 1e-6 * (1 + abs(v)):
            raise EvaluationFailure(f"half-period value {v} does not match any cubic root")
        e.append(complex(roots[i]))
    spread = max(abs(x) for x in e)
    if min(abs(e[0] - e[1]), abs(e[0] - e[2]), abs(e[1] - e[2])) <= 1e-9 * spread:
        raise EvaluationFailure("half-period values are not distinct")
    object.__setattr__(ctx, "invariants", LatticeInvariants(g2, g3, *e))
    return ctx


def half_period_values(ctx: WeierstrassContext) -> tuple[complex, complex, complex]:
    """``(e1, e2, e3) = (wp(w1/2), wp(w2/2), wp((w1+w2)/2))`` for the context's basis."""
    return ctx.invariants.e


def evaluate(z: complex, ctx: WeierstrassContext) -> WpPair:
    p, pp, pole = ctx.evaluate(np.array([z]))
    if pole[0]:
        return WpPair(POLE, POLE, True)
    return WpPair(complex(p[0]), complex(pp[0]), False)


def reduce_argument(z: complex, lattice: Lattice) -> tuple[complex, tuple[int, int]]:
    """Nearest lattice translate of ``z`` to the origin over the 3x3 neighbour stencil."""
    x, y = lattice.coords(z)
    m0, n0 = int(round(float(x))), int(round(float(y)))
    best = None
    for dm in (-1, 0, 1):
        for dn in (-1, 0, 1):
            m, n = m0 + dm, n0 + dn
            cand = z - lattice.point(m, n)
            if best is None or abs(cand) < abs(best[0]):
                best = (cand, (m, n))
    return best


def oracle_array(z, lattice: Lattice, cutoff: int = ORACLE_CUTOFF, pole_ratio: float = POLE_RATIO):
    """Row-summed lattice series for wp and wp'; ``inf`` within the pole radius."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    red = normalize_basis(lattice)
    s, tau = red.omega1, red.tau
    z = np.asarray(z, dtype=complex)
    zi = z.ravel() / s
    y = np.rint(zi.imag / tau.imag)
    zi = zi - y * tau
    zi = zi - np.rint(zi.real)
    dist = np.min(np.abs(zi[:, None] - np.array(
        [m + n * tau for m in (-1, 0, 1) for n in (-1, 0, 1)])[None, :]), axis=1)
    pole = dist < pole_ratio

    pi = math.pi
    p = np.zeros(zi.shape, dtype=complex)
    pp = np.zeros(zi.shape, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for n in range(cutoff, 0, -1):
            const = pi**2 * complex(csc2(pi * n * tau))
            for sgn in (1, -1):
                x = pi * (zi - sgn * n * tau)
                c = csc2(x)
                p += pi**2 * c - const
                pp += -2 * pi**3 * c * cot(pi * (zi - sgn * n * tau))
        c = csc2(pi * zi)
        p += pi**2 * c - pi**2 / 3
        pp += -2 * pi**3 * c * cot(pi * zi)
    p = p / s**2
    pp = pp / s**3
    p[pole] = np.inf
    pp[pole] = np.inf
    return p.reshape(z.shape), pp.reshape(z.shape), pole.reshape(z.shape)


def eval_oracle(z: complex, lattice: Lattice, cutoff: int = ORACLE_CUTOFF,
                pole_ratio: float = POLE_RATIO) -> WpPair:
    p, pp, pole = oracle_array(np.array([z]), lattice, cutoff, pole_ratio)
    if pole[0]:
        raise PoleProximity(f"{z} is within the pole radius of a lattice point")
    return WpPair(complex(p[0]), complex(pp[0]))


def diffeq_residual(pair: WpPair, inv: LatticeInvariants) -> float:
    """``|wp'^2 - (4 wp^3 - g2 wp - g3)| / (1 + |wp|^3)``."""
    p, pp = pair.p, pair.pprime
    return abs(pp * pp - (4 * p**3 - inv.g2 * p - inv.g3)) / (1 + abs(p) ** 3)


def half_period_shift(p_value: complex, pprime_value: complex, index: int,
                      inv: LatticeInvariants, tol: float = 1e-14) -> WpPair:
    """``(wp, wp')`` at ``z + h_index`` from their values at ``z``.

    ``index`` 1, 2, 3 selects ``w1/2``, ``w2/2``, ``(w1+w2)/2``.  The
    derivative carries the minus sign obtained by differentiating the
    value formula.
    """
    if index not in (1, 2, 3):
        raise ValueError("index must be 1, 2 or 3")
    e = inv.e
    ei = e[index - 1]
    ej, ek = (e[i] for i in range(3) if i != index - 1)
    B = (ei - ej) * (ei - ek)
    if cmath.isinf(p_value):
        return WpPair(ei, 0j)
    den = p_value - ei
    if abs(den) <= tol * (1 + abs(p_value) + abs(ei)):
        raise DegenerateShift("wp(z) equals the half-period value; the shifted point is a pole")
    return WpPair(ei + B / den, -B * pprime_value / den**2)


def add(z: complex, w: complex, ctx: WeierstrassContext, tol: float = 1e-10) -> complex:
    """``wp(z + w)`` from the addition formula."""
    a = evaluate(z, ctx)
    b = evaluate(w, ctx)
    if a.at_pole or b.at_pole:
        raise PoleProximity("addition formula needs both arguments away from poles")
    den = a.p - b.p
    if abs(den) <= tol * (abs(a.p) + abs(b.p) + ctx.min_period_norm ** -2):
        raise DegenerateAddition("wp(z) == wp(w); evaluate wp(z + w) directly")
    return 0.25 * ((a.pprime - b.pprime) / den) ** 2 - a.p - b.p
