import cmath
import colorsys
import math
from pathlib import Path

import numpy as np
import pytest

from elliptica.config import config_from_dict, load_config
from elliptica.errors import ConfigError
from elliptica.render import (Image, domain_color, domain_color_array, pixel_grid, read_ppm,
                              render, render_function, write_ppm)

from conftest import BACKENDS

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"
GOLDEN = Path(__file__).with_name("golden")


def small(name, size=64):
    return load_config(CONFIGS / f"{name}.json").with_overrides(width=size, height=size)


def test_domain_color_examples():
    assert domain_color(0) == (0, 0, 0)
    assert domain_color(complex(math.inf, 0)) == (255, 255, 255)
    assert domain_color(float("nan")) == (255, 255, 255)
    a, b = domain_color(1), domain_color(1j)
    assert a != b
    # equal modulus -> equal HSL lightness
    la = colorsys.rgb_to_hls(*(x / 255 for x in a))[1]
    lb = colorsys.rgb_to_hls(*(x / 255 for x in b))[1]
    assert abs(la - lb) < 2 / 255
    assert domain_color(1) == (255, 0, 0) or domain_color(1)[0] > 200


def test_vectorised_colour_matches_scalar():
    rng = np.random.default_rng(0)
    v = (rng.normal(size=500) + 1j * rng.normal(size=500)) * np.exp(rng.normal(size=500) * 2)
    v = np.concatenate([v, [0, np.inf, 1, -1, 1j, -1j, 1e30]])
    arr = domain_color_array(v)
    for x, c in zip(v, arr):
        assert tuple(int(t) for t in c) == domain_color(x)


def test_pixel_grid_orientation():
    g = pixel_grid((complex(0, 0), complex(4, 2)), 4, 2)
    assert g.shape == (2, 4, 1)
    assert g[0, 0, 0] == complex(0.5, 1.5)      # top-left pixel centre
    assert g[1, 3, 0] == complex(3.5, 0.5)
    s = pixel_grid((complex(0, 0), complex(1, 1)), 1, 1, supersample=2)
    assert sorted(s.ravel(), key=lambda z: (z.real, z.imag)) == [0.25 + 0.25j, 0.25 + 0.75j,
                                                                 0.75 + 0.25j, 0.75 + 0.75j]


def test_ppm_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    img = Image(5, 3, rng.integers(0, 256, (3, 5, 3), dtype=np.uint8))
    path = tmp_path / "x.ppm"
    write_ppm(path, img)
    assert path.read_bytes().startswith(b"P6\n5 3\n255\n")
    back = read_ppm(path)
    assert back.width == 5 and back.height == 3 and np.array_equal(back.pixels, img.pixels)


def test_supersample_pole_pixel():
    f = lambda z: np.where(np.abs(z) < 0.3, np.inf, 1.0 + 0 * z)  # noqa: E731
    img = render_function(f, (complex(-1, -1), complex(1, 1)), 3, 3, supersample=3)
    assert tuple(img.pixels[1, 1]) == (255, 255, 255)
    assert tuple(img.pixels[0, 0]) == domain_color(1)


def test_render_deterministic():
    cfg = small("p2", 32)
    a, b = render(cfg), render(cfg)
    assert a.to_ppm() == b.to_ppm()


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("name", ["p4", "p3", "pg"])
def test_golden(name, backend):
    ref = read_ppm(GOLDEN / f"{name}_64.ppm")
    img = render(small(name).with_overrides(numerics={"backend": backend}))
    diff = np.abs(img.pixels.astype(int) - ref.pixels.astype(int))
    assert diff.max() <= 1


def test_p4_image_rotation_symmetry():
    cfg = small("p4")
    lo, hi = cfg.viewport
    assert lo == -hi  # viewport centred on a lattice point
    px = render(cfg).pixels.astype(int)
    # z -> iz sends pixel (row, col) to (W-1-col, row)
    assert np.abs(np.rot90(px) - px).max() <= 2


@pytest.mark.parametrize("name, order", [("p2", 2), ("p3", 3), ("p4", 4), ("p6", 6)])
def test_rotated_grid_symmetry(name, order):
    cfg = small(name, 48)
    rot = cmath.exp(2j * math.pi / order)
    a = render(cfg).pixels.astype(int)
    b = render(cfg, transform=lambda z: rot * z).pixels.astype(int)
    assert np.abs(a - b).max() <= 2


def test_config_validation():
    base = {"group": "p4", "lattice": [[1, 0], [0, 1]], "params": {"R": 1}}
    config_from_dict(base)
    for bad in ({"height": 0}, {"width": -3}, {"supersample": 0}, {"width": 2.5},
                {"viewport": [[1, 1], [0, 0]]}, {"group": "p5"}, {"lattice": [[1, 0], [2, 0]]},
                {"colour": "red"}, {"numerics": {"backend": "gpu"}}):
        with pytest.raises(ConfigError):
            config_from_dict({**base, **bad})
    with pytest.raises(ConfigError):
        config_from_dict({"lattice": [[1, 0], [0, 1]]})


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    cfg = load_config(path)
    f = cfg.build()
    assert cfg.group.name == path.stem and f.group is cfg.group
