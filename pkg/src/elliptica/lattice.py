"""Period lattices: basis reduction, shape classification and invariants.

Complex numbers are plain Python ``complex`` values (numpy ``complex128``
inside arrays).  A :class:`Lattice` stores its basis exactly as given apart
from the orientation, which is fixed so that ``Im(omega2/omega1) > 0``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLattice

DEFAULT_CUTOFF = 120
CLASSIFY_TOL = 1e-9

HEX_TAU = cmath.exp(1j * math.pi / 3)


class LatticeClass(str, enum.Enum):
    GENERIC = "generic"
    RECTANGULAR = "rectangular"
    RHOMBIC = "rhombic"
    SQUARE = "square"
    HEXAGONAL = "hexagonal"


@dataclass(frozen=True)
class Lattice:
    omega1: complex
    omega2: complex

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        if w1 == 0 or w2 == 0 or not (cmath.isfinite(w1) and cmath.isfinite(w2)):
            raise DegenerateLattice(f"periods must be finite and nonzero: {w1}, {w2}")
        ratio = w2 / w1
        if abs(ratio.imag) <= 1e-12 * abs(ratio):
            raise DegenerateLattice(f"periods are parallel: {w1}, {w2}")
        if ratio.imag < 0:
            w2 = -w2
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def area(self) -> float:
        return (self.omega1.conjugate() * self.omega2).imag

    def point(self, m, n):
        return m * self.omega1 + n * self.omega2

    def coords(self, z):
        """Real coordinates ``(x, y)`` with ``z = x*omega1 + y*omega2``."""
        z = np.asarray(z, dtype=complex)
        w1, w2 = self.omega1, self.omega2
        det = self.area
        # Cramer's rule on the real 2x2 system.
        x = (z.real * w2.imag - z.imag * w2.real) / det
        y = (w1.real * z.imag - w1.imag * z.real) / det
        return x, y

    def contains(self, z, tol: float = 1e-9) -> bool:
        x, y = self.coords(z)
        return bool(abs(x - round(float(x))) <= tol and abs(y - round(float(y))) <= tol)

    def scaled(self, s: complex) -> "Lattice":
        return Lattice(s * self.omega1, s * self.omega2)

    def same_basis(self, other: "Lattice", tol: float = 1e-12) -> bool:
        scale = max(abs(self.omega1), abs(self.omega2))
        return (abs(self.omega1 - other.omega1) <= tol * scale
                and abs(self.omega2 - other.omega2) <= tol * scale)

    def to_json(self):
        return [[self.omega1.real, self.omega1.imag], [self.omega2.real, self.omega2.imag]]


@dataclass(frozen=True)
class LatticeInvariants:
    g2: complex
    g3: complex
    e1: complex
    e2: complex
    e3: complex

    @property
    def e(self) -> tuple[complex, complex, complex]:
        return (self.e1, self.e2, self.e3)

    def to_json(self) -> dict:
        return {k: [getattr(self, k).real, getattr(self, k).imag]
                for k in ("g2", "g3", "e1", "e2", "e3")}


def normalize_basis(lattice: Lattice) -> Lattice:
    """Gauss-reduce the basis so that ``tau`` lies in the standard fundamental region.

    The returned basis spans the same point set, with ``|Re tau| <= 1/2``,
    ``|tau| >= 1`` and ``Im tau > 0``.  Boundary points are left alone.
    """
    w1, w2 = lattice.omega1, lattice.omega2
    for _ in range(200):
        tau = w2 / w1
        if abs(tau.real) > 0.5 + 1e-12:
            w2 = w2 - round(tau.real) * w1
            continue
        if abs(tau) < 1 - 1e-12:
            w1, w2 = w2, -w1
            continue
        break
    else:  # pragma: no cover - reduction always terminates for finite input
        raise DegenerateLattice("basis reduction did not terminate")
    return Lattice(w1, w2)


def classify_lattice(lattice: Lattice, tol: float = CLASSIFY_TOL) -> LatticeClass:
    tau = normalize_basis(lattice).tau
    if abs(tau - 1j) <= tol:
        return LatticeClass.SQUARE
    if abs(tau - HEX_TAU) <= tol or abs(tau - HEX_TAU**2) <= tol:
        return LatticeClass.HEXAGONAL
    if abs(tau.real) <= tol * abs(tau):
        return LatticeClass.RECTANGULAR
    if abs(abs(tau) - 1) <= tol or abs(abs(tau.real) - 0.5) <= tol:
        return LatticeClass.RHOMBIC
    return LatticeClass.GENERIC


def is_rectangular(lattice: Lattice, tol: float = CLASSIFY_TOL) -> bool:
    return classify_lattice(lattice, tol) in (LatticeClass.RECTANGULAR, LatticeClass.SQUARE)


def is_rhombic(lattice: Lattice, tol: float = CLASSIFY_TOL) -> bool:
    # a square cell is a rhombus, and a hexagonal cell is a 60-degree rhombus
    return classify_lattice(lattice, tol) in (
        LatticeClass.RHOMBIC, LatticeClass.SQUARE, LatticeClass.HEXAGONAL)


def is_conjugation_invariant(lattice: Lattice, tol: float = 1e-9) -> bool:
    """True when complex conjugation maps the lattice point set onto itself."""
    return (lattice.contains(lattice.omega1.conjugate(), tol)
            and lattice.contains(lattice.omega2.conjugate(), tol))


def csc2(x):
    """``1/sin(x)**2`` evaluated through ``exp(+-2ix)`` so large ``|Im x|`` cannot overflow."""
    x = np.asarray(x, dtype=complex)
    sign = np.where(x.imag >= 0, 1.0, -1.0)
    q = np.exp(2j * sign * x)
    return -4 * q / (1 - q) ** 2


def cot(x):
    x = np.asarray(x, dtype=complex)
    sign = np.where(x.imag >= 0, 1.0, -1.0)
    q = np.exp(2j * sign * x)
    return sign * 1j * (1 + q) / (q - 1)


def eisenstein_sums(tau: complex, cutoff: int = DEFAULT_CUTOFF) -> tuple[complex, complex]:
    """``(sum' w^-4, sum' w^-6)`` over the lattice ``Z + Z tau``.

    Rows ``m + n tau`` (fixed ``n``, ``|n| <= cutoff``) are summed in closed
    form, so the only truncation is in ``n`` and decays like
    ``exp(-2 pi n Im tau)``.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    pi = math.pi
    n = np.arange(cutoff, 0, -1)  # smallest terms first
    c = csc2(pi * n * tau)
    rows4 = pi**4 * (c * c - 2.0 / 3.0 * c)
    rows6 = pi**6 * (c**3 - c * c + 2.0 / 15.0 * c)
    G4 = pi**4 / 45 + 2 * complex(np.sum(rows4))
    G6 = 2 * pi**6 / 945 + 2 * complex(np.sum(rows6))
    return G4, G6


def eisenstein_invariants(lattice: Lattice, cutoff: int = DEFAULT_CUTOFF) -> tuple[complex, complex]:
    """Return ``(g2, g3) = (60 sum' w^-4, 140 sum' w^-6)`` for the lattice."""
    red = normalize_basis(lattice)
    s = red.omega1
    G4, G6 = eisenstein_sums(red.tau, cutoff)
    return 60 * G4 / s**4, 140 * G6 / s**6


def cubic_roots(g2: complex, g3: complex) -> np.ndarray:
    """Roots of ``4t^3 - g2 t - g3``, Newton-polished."""
    roots = np.roots([4.0, 0.0, -complex(g2), -complex(g3)]).astype(complex)
    for _ in range(3):
        f = 4 * roots**3 - g2 * roots - g3
        df = 12 * roots**2 - g2
        step = np.where(df != 0, f / np.where(df != 0, df, 1), 0)
        roots = roots - step
    return roots
