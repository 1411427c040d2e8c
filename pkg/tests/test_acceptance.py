"""Exit criteria of the package, each at its stated tolerance.

Every test records one PASS/FAIL line, listed again in the terminal summary
under "acceptance criteria".
"""
import cmath
import math
from pathlib import Path

import numpy as np
import pytest

from elliptica.builder import build, build_glide, p2mg_via_rotated_pg, random_params
from elliptica.config import load_config
from elliptica.groups import catalog, lattice_compatible
from elliptica.lattice import Lattice
from elliptica.ratfunc import (FactoredSymmetricRational, Variant, check_inversion_symmetry,
                               expand_factored, random_factored)
from elliptica.render import read_ppm, render
from elliptica.verifier import negative_controls, sample_points, verify_invariance
from elliptica.weierstrass import (WpPair, add, diffeq_residual, evaluate, half_period_shift,
                                   make_context, oracle_array)

from conftest import HEX, LATTICES, record_criterion

pytestmark = pytest.mark.acceptance

ROOT = Path(__file__).resolve().parents[1]
FOUR = {"(1,i)": Lattice(1, 1j), "(2,3i)": Lattice(2, 3j), "(1,exp(i pi/3))": Lattice(1, HEX),
        "(1,0.3+1.2i)": Lattice(1, 0.3 + 1.2j)}
CONTEXTS = {}


def ctx_of(lat):
    key = repr(lat)
    if key not in CONTEXTS:
        CONTEXTS[key] = make_context(lat)
    return CONTEXTS[key]


def test_c01_differential_equation():
    worst = 0.0
    for lat in FOUR.values():
        ctx = ctx_of(lat)
        z = sample_points(ctx, 1000, seed=101)
        p, pp, _ = ctx.evaluate(z)
        for a, b in zip(p, pp):
            worst = max(worst, diffeq_residual(WpPair(a, b), ctx.invariants))
    ok = worst < 1e-7
    record_criterion(1, "differential-equation residual < 1e-7", ok, f"max {worst:.2e}")
    assert ok


def test_c02_oracle_equivalence():
    worst = 0.0
    for lat in FOUR.values():
        ctx = ctx_of(lat)
        z = sample_points(ctx, 1000, seed=102, value_cap=np.inf)
        p, pp, pole = ctx.evaluate(z)
        q, qq, qpole = oracle_array(z, lat, cutoff=160)
        ok = ~(pole | qpole)
        worst = max(worst, np.max(np.abs(p[ok] - q[ok]) / np.abs(q[ok])),
                    np.max(np.abs(pp[ok] - qq[ok]) / np.abs(qq[ok])))
    ok = worst < 1e-8
    record_criterion(2, "fast evaluation vs lattice-sum oracle, relative 1e-8", ok, f"max {worst:.2e}")
    assert ok


def test_c03_degenerate_invariants():
    g3 = abs(ctx_of(FOUR["(1,i)"]).invariants.g3)
    g2 = abs(ctx_of(FOUR["(1,exp(i pi/3))"]).invariants.g2)
    ok = g3 < 1e-8 and g2 < 1e-8
    record_criterion(3, "g3 = 0 on square, g2 = 0 on hexagonal (< 1e-8)", ok,
                     f"|g3| {g3:.1e}, |g2| {g2:.1e}")
    assert ok


def _dev(a, b):
    # deviation as the verifier measures it: relative to 1 + |value|
    return float(np.max(np.abs(a - b) / (1 + np.abs(b))))


def test_c04_rotation_laws():
    sq = ctx_of(FOUR["(1,i)"])
    z = sample_points(sq, 500, seed=104)
    p = sq.evaluate(z)[0]
    q = sq.evaluate(1j * z)[0]
    d_sq, a_sq = _dev(q, -p), float(np.max(np.abs(q + p)))
    hx = ctx_of(FOUR["(1,exp(i pi/3))"])
    om = cmath.exp(2j * math.pi / 3)
    z = sample_points(hx, 500, seed=105)
    p, pp, _ = hx.evaluate(z)
    q, qq, _ = hx.evaluate(om * z)
    d_hx = max(_dev(q, om * p), _dev(qq, pp))
    a_hx = float(max(np.max(np.abs(q - om * p)), np.max(np.abs(qq - pp))))
    ok = d_sq < 1e-7 and d_hx < 1e-7
    record_criterion(4, "rotation laws on square and hexagonal lattices < 1e-7", ok,
                     f"square {d_sq:.1e}, hexagonal {d_hx:.1e}; absolute {a_sq:.1e}, {a_hx:.1e} "
                     "with |wp'| up to ~2e6")
    assert ok


def test_c05_half_period_ordering():
    rows = []
    ok = True
    for aspect in (1.1, 1.5, 2, 3, 5):
        e1, e2, e3 = (e.real for e in make_context(Lattice(1, aspect * 1j)).invariants.e)
        ok &= e1 > e3 > e2
        rows.append(f"{aspect}: {min(e1 - e3, e3 - e2):.1e}")
    record_criterion(5, "e1 > e3 > e2 on rectangular lattices", ok, "min gap " + ", ".join(rows))
    assert ok


def test_c06_shift_and_addition():
    rng = np.random.default_rng(106)
    worst = 0.0
    for lat in FOUR.values():
        ctx = ctx_of(lat)
        halves = (lat.omega1 / 2, lat.omega2 / 2, (lat.omega1 + lat.omega2) / 2)
        z = sample_points(ctx, 200, seed=107)
        w = sample_points(ctx, 200, seed=108)
        for zi, wi in zip(z, w):
            a = evaluate(zi, ctx)
            k = int(rng.integers(1, 4))
            s = half_period_shift(a.p, a.pprime, k, ctx.invariants)
            d = evaluate(zi + halves[k - 1], ctx)
            worst = max(worst, abs(s.p - d.p) / abs(d.p), abs(s.pprime - d.pprime) / abs(d.pprime))
            direct = evaluate(zi + wi, ctx).p
            worst = max(worst, abs(add(zi, wi, ctx) - direct) / abs(direct))
    ok = worst < 1e-7
    record_criterion(6, "half-period shift and addition formulas, relative 1e-7", ok,
                     f"max {worst:.2e}")
    assert ok


def test_c07_positive_invariance():
    rng = np.random.default_rng(107)
    failures, runs, covered = [], 0, set()
    for spec in catalog():
        for name, lat in LATTICES.items():
            if not lattice_compatible(spec, lat):
                continue
            f = build(spec, ctx_of(lat), random_params(spec, rng))
            rep = verify_invariance(f, n=500, tol=1e-7, seed=7)
            runs += 1
            if rep.passed:
                covered.add(spec.name)
            else:
                failures.append(f"{spec.name}/{name} {rep.max_dev:.1e}")
    ok = not failures and len(covered) == 17
    record_criterion(7, "randomized builder outputs invariant for all 17 groups (tol 1e-7, n 500)",
                     ok, f"{runs} runs, {len(covered)} groups" + (f"; failed {failures}" if failures else ""))
    assert ok


def test_c08_negative_controls():
    bad, count, weakest = [], 0, math.inf
    for spec in catalog():
        for name, lat in LATTICES.items():
            if not lattice_compatible(spec, lat):
                continue
            for c in negative_controls(spec, ctx_of(lat)):
                count += 1
                rep = verify_invariance(c.function, n=500, tol=1e-7)
                dev = {g.kind: g.max_dev for g in rep.generators}
                weakest = min(weakest, dev[c.expected_fail])
                if not (dev[c.expected_fail] > 1e-2 and dev["translation w1"] <= 1e-7
                        and dev["translation w2"] <= 1e-7):
                    bad.append(f"{spec.name}/{name}")
    ok = not bad and count > 0
    record_criterion(8, "negative controls fail their generator (> 1e-2) and pass translations", ok,
                     f"{count} controls, smallest deviation {weakest:.2e}" + (f"; bad {bad}" if bad else ""))
    assert ok


def test_c09_q_family():
    rng = np.random.default_rng(109)
    good = broken = 0
    for variant in Variant:
        for _ in range(100):
            q = random_factored(rng, variant)
            good += check_inversion_symmetry(expand_factored(q), variant, samples=200, tol=1e-9)
            wrong = FactoredSymmetricRational(q.C, q.p + int(rng.choice([-1, 1])), q.zeros, q.poles,
                                              variant)
            assert not wrong.constraint_holds()
            broken += not check_inversion_symmetry(expand_factored(wrong, check=False), variant,
                                                   samples=200, tol=1e-9)
    ok = good == 200 and broken == 200
    record_criterion(9, "factored symmetric families pass, broken constraint fails", ok,
                     f"{good}/200 valid pass, {broken}/200 broken fail")
    assert ok


def test_c10_p2mg_dual_representation():
    rng = np.random.default_rng(110)
    worst = 0.0
    for lat in (Lattice(2, 3j), Lattice(1, 1j), Lattice(1, 2.5j)):
        for _ in range(3):
            q = random_factored(rng, Variant.MINUS, max_factors=2, max_mult=1)
            if not q.zeros and not q.poles:
                continue
            f = build_glide("p2mg", ctx_of(lat), {"Q": q})
            g = p2mg_via_rotated_pg(f.ctx, f.recipe.params["Q"])
            z = sample_points(f.ctx, 200, seed=111)
            a, b = f(z), g(z)
            worst = max(worst, np.max(np.abs(a - b) / (1 + np.abs(a))))
    ok = worst < 1e-7
    record_criterion(10, "p2mg mirror form equals rotated pg form (e1, e2 exchanged)", ok,
                     f"max {worst:.2e}")
    assert ok


def test_c11_golden_images():
    diffs = {}
    for name in ("p4", "p3", "pg"):
        cfg = load_config(ROOT / "configs" / f"{name}.json").with_overrides(width=64, height=64)
        img = render(cfg)
        ref = read_ppm(ROOT / "tests" / "golden" / f"{name}_64.ppm")
        diffs[name] = int(np.abs(img.pixels.astype(int) - ref.pixels.astype(int)).max())
        if name == "p4":
            px = img.pixels.astype(int)
            rot = int(np.abs(np.rot90(px) - px).max())
    ok = all(d <= 1 for d in diffs.values()) and rot <= 2
    record_criterion(11, "64x64 goldens within 1, p4 90-degree symmetry within 2", ok,
                     ", ".join(f"{k} {v}" for k, v in diffs.items()) + f", rotation {rot}")
    assert ok
