"""Weierstrass elliptic functions and wallpaper-group invariant functions."""
from ._backend import BACKEND
from .builder import WallpaperFunction, build, build_axial, build_glide, build_sensible
from .groups import GroupSpec, Isometry, catalog, lookup
from .lattice import Lattice, LatticeClass, classify_lattice, normalize_basis
from .ratfunc import FactoredSymmetricRational, RationalFunction, Variant
from .verifier import verify_invariance
from .weierstrass import WeierstrassContext, evaluate, make_context

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FactoredSymmetricRational", "GroupSpec", "Isometry", "Lattice", "LatticeClass",
    "RationalFunction", "Variant", "WallpaperFunction", "WeierstrassContext", "build",
    "build_axial", "build_glide", "build_sensible", "catalog", "classify_lattice", "evaluate",
    "lookup", "make_context", "normalize_basis", "verify_invariance",
]
