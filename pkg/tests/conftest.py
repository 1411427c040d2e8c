import cmath
import math

import numpy as np
import pytest

from elliptica import _backend
from elliptica.lattice import Lattice
from elliptica.weierstrass import make_context

HEX = cmath.exp(1j * math.pi / 3)

# the standard lattices used across the suite
LATTICES = {
    "square": Lattice(1, 1j),
    "rect": Lattice(2, 3j),
    "hex": Lattice(1, HEX),
    "generic": Lattice(1, 0.3 + 1.2j),
    "rhombic": Lattice(1.5 + 1j, 1.5 - 1j),
}

BACKENDS = ["python"] + (["compiled"] if _backend.compiled_kernels is not None else [])

_CTX = {}


def context(name_or_lattice):
    key = name_or_lattice if isinstance(name_or_lattice, str) else name_or_lattice.to_json().__repr__()
    if key not in _CTX:
        lat = LATTICES[name_or_lattice] if isinstance(name_or_lattice, str) else name_or_lattice
        _CTX[key] = make_context(lat)
    return _CTX[key]


def cell_points(lattice, n, seed, margin=0.02):
    """Uniform points of the cell, kept ``margin`` (in cell coordinates) from the half lattice."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        x, y = rng.random(2)
        if min(abs(2 * x - round(2 * x)), 1) < 2 * margin and min(abs(2 * y - round(2 * y)), 1) < 2 * margin:
            continue
        out.append(x * lattice.omega1 + y * lattice.omega2)
    return np.array(out)


@pytest.fixture(params=list(LATTICES))
def lattice_name(request):
    return request.param


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
