"""JSON helpers: complex numbers are two-element ``[re, im]`` arrays."""
from .errors import ConfigError


def c2j(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def j2c(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"expected a complex number as [re, im], got {v!r}")
