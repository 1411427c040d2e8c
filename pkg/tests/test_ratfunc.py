import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elliptica.errors import ConfigError, ConstraintViolation, Indeterminate
from elliptica.ratfunc import (FactoredSymmetricRational, RationalFunction as RF, Variant,
                               check_inversion_symmetry, conjugate_coefficients, cube_decompose,
                               eval_rational, even_decompose, expand_factored,
                               glide_T_from_factored, is_real_on_reals, random_factored,
                               random_rational, weighted_T_check)

W = RF.identity()
seeds = st.integers(0, 2**32 - 1)


def test_eval_basic():
    assert eval_rational(W, 3) == 3
    assert np.isinf(eval_rational(RF([1], [0, 1]), 0))
    assert eval_rational(RF([1, 2], [3, 4]), np.inf) == 0.5
    assert eval_rational(RF([1], [0, 1]), np.inf) == 0
    assert np.isinf(eval_rational(RF([0, 0, 1]), np.inf))


def test_indeterminate():
    f = RF([1, 0, -1], [-1, 1], reduce=False)  # (w^2 - 1)/(w - 1) kept unreduced
    with pytest.raises(Indeterminate):
        eval_rational(f, 1.0)


def test_reduction_cancels_common_roots():
    f = RF([0, 1], [0, 0, 1])
    assert f.allclose(RF([1], [0, 1]))
    g = RF(np.convolve([-2, 1], [3, 1]), np.convolve([-2, 1], [1, 0, 1]))
    assert g.degree == (1, 2)
    assert abs(g(0.7) - (3 + 0.7) / (1 + 0.49)) < 1e-12


def test_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RF([1], [0])


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_eval_matches_power_sum(seed):
    # evaluation order is independent of the Horner scheme
    rng = np.random.default_rng(seed)
    f = random_rational(rng)
    w = rng.normal() + 1j * rng.normal()
    num = sum(c * w**k for k, c in enumerate(f.num))
    den = sum(c * w**k for k, c in enumerate(f.den))
    assert abs(f(w) - num / den) <= 1e-10 * (1 + abs(num / den))


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_arithmetic(seed):
    rng = np.random.default_rng(seed)
    f, g = random_rational(rng), random_rational(rng)
    w = rng.normal() + 1j * rng.normal()
    fw, gw = f(w), g(w)
    tol = 1e-8 * (1 + abs(fw)) * (1 + abs(gw))
    assert abs((f + g)(w) - (fw + gw)) <= tol
    assert abs((f * g)(w) - fw * gw) <= tol
    assert abs((f - g)(w) - (fw - gw)) <= tol
    if abs(gw) > 1e-3:
        assert abs((f / g)(w) - fw / gw) <= tol / abs(gw)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_conjugate_coefficients(seed):
    rng = np.random.default_rng(seed)
    f = random_rational(rng)
    w = rng.normal() + 1j * rng.normal()
    assert abs(conjugate_coefficients(f)(w) - np.conj(f(np.conj(w)))) <= 1e-10 * (1 + abs(f(np.conj(w))))


def test_conjugate_examples():
    real = RF([1, 2], [3, 1])
    assert conjugate_coefficients(real).allclose(real)
    assert conjugate_coefficients(RF([0, 1j])).allclose(RF([0, -1j]))


def test_even_and_cube_decompose():
    assert even_decompose(RF([1, 0, 1])).allclose(RF([1, 1]))
    assert even_decompose(W) is None
    assert cube_decompose(RF([0, 0, 0, 1])).allclose(W)
    assert cube_decompose(RF([0, 0, 1])) is None


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_decompose_round_trip(seed, k):
    rng = np.random.default_rng(seed)
    t = random_rational(rng)
    spread = [np.zeros(k * (len(c) - 1) + 1, complex) for c in (t.num, t.den)]
    spread[0][::k], spread[1][::k] = t.num, t.den
    f = RF(*spread)
    back = (even_decompose if k == 2 else cube_decompose)(f)
    assert back is not None and back.allclose(t, 1e-10)


def test_is_real_on_reals():
    assert is_real_on_reals(RF([2, 0, 1], [-1, 1]))
    assert not is_real_on_reals(RF([0, 1j]))
    assert not is_real_on_reals(RF([1 + 1e-3j, 1]), tol=1e-6)
    # a complex multiple of a real function is not real on the reals
    assert not is_real_on_reals(RF([1j, 1j], [2, 1]))


def test_expand_examples():
    q = expand_factored(FactoredSymmetricRational(1, -1, [(2, 1)], [], Variant.MINUS))
    assert q.allclose(RF(np.convolve([-2, 1], [-1, 2]), [0, 1]))
    q = expand_factored(FactoredSymmetricRational(1, -1, [(1, 1)], [], Variant.PLUS))
    assert q.allclose(RF([-1, 0, 1], [0, 1]))
    with pytest.raises(ConstraintViolation):
        expand_factored(FactoredSymmetricRational(1, 0, [(2, 1)], [], Variant.MINUS))
    with pytest.raises(ConstraintViolation):
        FactoredSymmetricRational(1, 1, [(0, 1)], [])


def test_symmetry_examples():
    assert check_inversion_symmetry(RF(np.convolve([-2, 1], [-1, 2]), [0, 1]), "minus")
    assert check_inversion_symmetry(RF([-1, 0, 1], [0, 1]), "plus")
    for v in Variant:
        assert not check_inversion_symmetry(RF([1, 1]), v)


def test_weighted_T_condition():
    q = RF(np.convolve([-2, 1], [-1, 2]), [0, 1])
    assert weighted_T_check(q * RF([1j], [0, 1]), "minus")
    assert not weighted_T_check(q * RF([1], [0, 1]), "minus")
    assert not weighted_T_check(RF.constant(1), "minus")


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from(list(Variant)))
def test_factored_family_symmetric(seed, variant):
    rng = np.random.default_rng(seed)
    q = random_factored(rng, variant)
    f = expand_factored(q)
    assert check_inversion_symmetry(f, variant, samples=200, tol=1e-9)
    assert weighted_T_check(glide_T_from_factored(q), variant)


@settings(max_examples=50, deadline=None)
@given(seeds, st.sampled_from(list(Variant)))
def test_symmetry_check_stable_under_inversion_of_samples(seed, variant):
    rng = np.random.default_rng(seed)
    f = expand_factored(random_factored(rng, variant))
    w = np.exp(rng.uniform(-1, 1, 100)) * np.exp(2j * np.pi * rng.random(100))
    inv = variant.sigma / np.conj(w)
    assert (check_inversion_symmetry(f, variant, points=w)
            == check_inversion_symmetry(f, variant, points=inv))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_even_factored(seed):
    q = random_factored(np.random.default_rng(seed), Variant.PLUS, even=True)
    assert even_decompose(expand_factored(q)) is not None


def test_json_round_trip():
    f = RF([1, 2j], [3, 1])
    assert RF.from_json(f.to_json()).allclose(f)
    assert RF.from_json(2.5).allclose(RF.constant(2.5))
    q = FactoredSymmetricRational(2.0, -1, [(1 + 1j, 2)], [(0.5, 1)], Variant.PLUS)
    assert FactoredSymmetricRational.from_json(q.to_json()) == q
    with pytest.raises(ConfigError):
        RF.from_json({"den": [1]})
    with pytest.raises(ConfigError):
        FactoredSymmetricRational.from_json({"C": 1})
