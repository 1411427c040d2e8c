"""The 17 wallpaper groups as generating plane isometries.

A sense-preserving isometry acts as ``z -> a z + b`` and a sense-reversing
one as ``z -> a conj(z) + b``.  On function values, sense-reversing elements
additionally conjugate the value (see :func:`act_on_value`), which is what
keeps invariant functions meromorphic.

Groups with mirrors or glides are realised with the mirror along the real
axis, so they need the lattice in a particular orientation: *rectiform*
(``omega1`` real and the lattice symmetric under conjugation) or *rhombic*
(``omega2 = conj(omega1)``).  :func:`align` rotates a user lattice into that
position.

Name conventions: p31m uses the rectiform hexagonal basis (mirror along a
lattice vector) and p3m1 the rhombic one (mirror perpendicular to a lattice
vector).
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import (HEX_TAU, Lattice, LatticeClass, classify_lattice,
                      is_conjugation_invariant, normalize_basis)

ALIASES = {
    "pmm": "p2mm", "pmg": "p2mg", "pgg": "p2gg", "cmm": "c2mm",
    "p4m": "p4mm", "p4g": "p4mg", "p6m": "p6mm",
}

_ALL = frozenset(LatticeClass)
_RECT = frozenset({LatticeClass.RECTANGULAR, LatticeClass.SQUARE})
_RHOMB = frozenset({LatticeClass.RHOMBIC, LatticeClass.SQUARE, LatticeClass.HEXAGONAL})
_SQUARE = frozenset({LatticeClass.SQUARE})
_HEX = frozenset({LatticeClass.HEXAGONAL})

ALIGN_TOL = 1e-9


class Sense(str, enum.Enum):
    DIRECT = "direct"
    REVERSING = "reversing"


class BasisStyle(str, enum.Enum):
    RECTIFORM = "rectiform"
    RHOMBIC = "rhombic"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class Isometry:
    sense: Sense
    a: complex
    b: complex = 0j
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if abs(abs(self.a) - 1) > 1e-12:
            raise ValueError(f"isometry needs |a| = 1, got {self.a}")

    @property
    def reversing(self) -> bool:
        return self.sense is Sense.REVERSING

    def __call__(self, z):
        return apply_isometry(self, z)

    def then(self, other: "Isometry") -> "Isometry":
        """``other`` applied after ``self``."""
        return compose(other, self)


IDENTITY = Isometry(Sense.DIRECT, 1, 0, "identity")


def apply_isometry(g: Isometry, z):
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    if g.reversing:
        return g.a * np.conj(z) + g.b
    return g.a * z + g.b


def act_on_value(g: Isometry, v):
    """Codomain half of the modified action: conjugate for sense-reversing elements."""
    return np.conj(v) if g.reversing else v


def compose(g: Isometry, h: Isometry) -> Isometry:
    """``g o h``, i.e. ``z -> g(h(z))``."""
    ah = h.a.conjugate() if g.reversing else h.a
    bh = h.b.conjugate() if g.reversing else h.b
    sense = Sense.REVERSING if (g.reversing != h.reversing) else Sense.DIRECT
    return Isometry(sense, g.a * ah, g.a * bh + g.b)


@dataclass(frozen=True)
class GroupSpec:
    name: str
    sensible: bool
    lattice_classes: frozenset
    basis_style: BasisStyle
    rotation_order: int
    family: str
    form: str
    conditions: str
    reflexion: str = ""  # "mirror", "glide-w1", "mirror-w2", "glide-diag"

    @property
    def required_class(self) -> str:
        return "/".join(sorted(c.value for c in self.lattice_classes))

    def generators(self, lattice: Lattice) -> list[Isometry]:
        """Translations, then the rotation and (glide-)reflexion if present.

        ``lattice`` must already be aligned (see :func:`align`).
        """
        w1, w2 = lattice.omega1, lattice.omega2
        gens = [Isometry(Sense.DIRECT, 1, w1, "translation w1"),
                Isometry(Sense.DIRECT, 1, w2, "translation w2")]
        if self.rotation_order > 1:
            k = self.rotation_order
            gens.append(Isometry(Sense.DIRECT, cmath.exp(2j * math.pi / k), 0, f"rotation {k}-fold"))
        if self.reflexion == "mirror":
            gens.append(Isometry(Sense.REVERSING, 1, 0, "reflexion conj(z)"))
        elif self.reflexion == "glide-w1":
            gens.append(Isometry(Sense.REVERSING, 1, w1 / 2, "glide conj(z) + w1/2"))
        elif self.reflexion == "mirror-w2":
            gens.append(Isometry(Sense.REVERSING, 1, w2 / 2, "reflexion conj(z) + w2/2"))
        elif self.reflexion == "glide-diag":
            gens.append(Isometry(Sense.REVERSING, 1, ((w1 + w2) / 2).conjugate(),
                                 "glide conj(z + (w1+w2)/2)"))
        return gens

    def describe(self) -> dict:
        return {"group": self.name, "sensible": self.sensible, "lattice": self.required_class,
                "basis": self.basis_style.value, "family": self.family,
                "form": self.form, "conditions": self.conditions}


_REAL = "R, S real for real w"


def _spec(name, sensible, classes, style, order, family, form, conditions, reflexion=""):
    return GroupSpec(name, sensible, classes, style, order, family, form, conditions, reflexion)


_NA, _RF, _RB = BasisStyle.NOT_APPLICABLE, BasisStyle.RECTIFORM, BasisStyle.RHOMBIC

_CATALOG = (
    _spec("p1", True, _ALL, _NA, 1, "sensible", "R(wp) + S(wp) wp'", "R, S arbitrary"),
    _spec("p2", True, _ALL, _NA, 2, "sensible", "R(wp)", "R arbitrary"),
    _spec("p3", True, _HEX, _NA, 3, "sensible", "R(wp')", "R arbitrary"),
    _spec("p4", True, _SQUARE, _NA, 4, "sensible", "R(wp^2)", "R arbitrary"),
    _spec("p6", True, _HEX, _NA, 6, "sensible", "V(wp'^2) or U(wp^3)", "U, V arbitrary"),
    _spec("pm", False, _RECT, _RF, 1, "axial", "R(wp) + S(wp) wp'", _REAL, "mirror"),
    _spec("p2mm", False, _RECT, _RF, 2, "axial", "R(wp)", _REAL, "mirror"),
    _spec("p4mm", False, _SQUARE, _RF, 4, "axial", "R(wp^2)", _REAL, "mirror"),
    _spec("p31m", False, _HEX, _RF, 3, "axial", "R(wp')", _REAL, "mirror"),
    _spec("p6mm", False, _HEX, _RF, 6, "axial", "V(wp'^2) or U(wp^3)", _REAL, "mirror"),
    _spec("cm", False, _RHOMB, _RB, 1, "axial", "R(wp) + S(wp) wp'", _REAL, "mirror"),
    _spec("c2mm", False, _RHOMB, _RB, 2, "axial", "R(wp)", _REAL, "mirror"),
    _spec("p3m1", False, _HEX, _RB, 3, "axial", "R(wp')", _REAL, "mirror"),
    _spec("pg", False, _RECT, _RF, 1, "glide",
          "Q(w) + T(w) wp',  w = (wp - e1)/sqrt((e1-e2)(e1-e3))",
          "Q(w) = conj(Q(1/conj w)); i w T(w) satisfies the same", "glide-w1"),
    _spec("p2mg", False, _RECT, _RF, 2, "glide",
          "Q(w),  w = (wp - e2)/sqrt((e2-e1)(e2-e3))",
          "Q(w) = conj(Q(1/conj w))", "mirror-w2"),
    _spec("p2gg", False, _RECT, _RF, 2, "glide",
          "Q(w),  w = (wp - e3)/sqrt((e1-e3)(e3-e2))",
          "Q(w) = conj(Q(-1/conj w))", "glide-diag"),
    _spec("p4mg", False, _SQUARE, _RF, 4, "glide",
          "Q(w) = P(w^2),  w = (wp - e3)/sqrt((e1-e3)(e3-e2))",
          "Q(w) = conj(Q(-1/conj w)) and Q even", "glide-diag"),
)

_BY_NAME = {g.name: g for g in _CATALOG}
GROUP_NAMES = tuple(_BY_NAME)
SENSIBLE = tuple(g.name for g in _CATALOG if g.sensible)


def catalog() -> list[GroupSpec]:
    return list(_CATALOG)


def lookup(name: str) -> GroupSpec:
    key = ALIASES.get(name.strip().lower(), name.strip().lower())
    try:
        return _BY_NAME[key]
    except KeyError:
        raise KeyError(f"unknown wallpaper group {name!r}; known: {', '.join(GROUP_NAMES)}") from None


def _is_rectiform(spec: GroupSpec, lattice: Lattice) -> bool:
    w1, w2 = lattice.omega1, lattice.omega2
    if abs(w1.imag) > ALIGN_TOL * abs(w1):
        return False
    if spec.lattice_classes == _HEX:
        return is_conjugation_invariant(lattice)
    return abs(w2.real) <= ALIGN_TOL * abs(w2)


def _is_rhombic_basis(spec: GroupSpec, lattice: Lattice) -> bool:
    w1, w2 = lattice.omega1, lattice.omega2
    if abs(w2 - w1.conjugate()) > ALIGN_TOL * abs(w1):
        return False
    if spec.name == "p3m1":
        return abs(abs(w2 - w1) - abs(w1)) <= ALIGN_TOL * abs(w1)
    return True


def align(spec: GroupSpec, lattice: Lattice) -> Lattice | None:
    """The lattice in the orientation the group's generators assume, or ``None``.

    A basis that already has the required style is returned unchanged, so a
    user's choice of which period is the glide direction is respected.
    """
    if classify_lattice(lattice) not in spec.lattice_classes:
        return None
    style = spec.basis_style
    if style is BasisStyle.NOT_APPLICABLE:
        return lattice
    red = normalize_basis(lattice)
    w1, w2 = red.omega1, red.omega2
    if style is BasisStyle.RECTIFORM:
        if _is_rectiform(spec, lattice):
            return lattice
        if abs(w2 / w1 - HEX_TAU**2) <= 1e-9:
            w2 = w2 + w1
        rot = abs(w1) / w1
        a, b = abs(w1), w2 * rot
        if spec.lattice_classes != _HEX:
            b = complex(0, b.imag)
        return Lattice(a, b)
    if _is_rhombic_basis(spec, lattice):
        return lattice
    tau = w2 / w1
    if abs(abs(tau) - 1) <= 1e-9:
        u, v = w1, w2
    elif tau.real > 0:
        u, v = w2, w2 - w1
    else:
        u, v = w2 + w1, w2
    rot = abs(u + v) / (u + v)
    v = v * rot
    return Lattice(v.conjugate(), v)


def lattice_compatible(spec: GroupSpec, lattice: Lattice) -> bool:
    return align(spec, lattice) is not None


def maps_lattice_to_itself(g: Isometry, lattice: Lattice, tol: float = 1e-9) -> bool:
    """Whether the linear part of ``g`` permutes the lattice points."""
    lin = (lambda w: g.a * w.conjugate()) if g.reversing else (lambda w: g.a * w)
    return all(lattice.contains(lin(w), tol) for w in (lattice.omega1, lattice.omega2))


def is_translation(g: Isometry, lattice: Lattice, tol: float = 1e-9) -> bool:
    return (not g.reversing and abs(g.a - 1) <= tol and lattice.contains(g.b, tol))
