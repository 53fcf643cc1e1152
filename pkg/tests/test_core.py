import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwline.core import (
    Custom,
    Localized,
    NormalizationError,
    SiteAmplitudes,
    SymmetricPair,
    WalkState,
    evolve,
    hadamard,
    make_initial,
    step,
    trajectory,
)

R2 = 1 / math.sqrt(2)


def probs(state):
    return np.abs(state.a) ** 2 + np.abs(state.b) ** 2


@pytest.mark.parametrize(
    "spinor, expected",
    [
        ((1, 0), (R2, R2)),
        ((0, 1), (R2, -R2)),
        ((R2, R2), (1, 0)),
    ],
)
def test_hadamard_examples(spinor, expected):
    out = hadamard(SiteAmplitudes(*spinor))
    assert out.a == pytest.approx(expected[0], abs=1e-15)
    assert out.b == pytest.approx(expected[1], abs=1e-15)


finite_complex = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@given(finite_complex, finite_complex)
def test_hadamard_is_norm_preserving_involution(a, b):
    once = hadamard(SiteAmplitudes(a, b))
    twice = hadamard(once)
    assert abs(once.a) ** 2 + abs(once.b) ** 2 == pytest.approx(abs(a) ** 2 + abs(b) ** 2, rel=1e-12, abs=1e-12)
    assert twice.a == pytest.approx(a, abs=1e-12)
    assert twice.b == pytest.approx(b, abs=1e-12)


def test_symmetric_pair_plus_amplitudes():
    s = make_initial(SymmetricPair(1, +1))
    assert s.t == 0
    assert s.amplitude(-1) == (0.5j, 0.5)
    assert s.amplitude(1) == (0.5j, 0.5)
    assert s.amplitude(0) == (0, 0)
    assert s.support() == (-1, 1)
    assert np.count_nonzero(probs(s)) == 2


def test_symmetric_pair_minus_amplitudes():
    s = make_initial(SymmetricPair(3, -1), t_max=5)
    assert s.amplitude(-3) == (0.5j, 0.5)
    assert s.amplitude(3) == (-0.5j, -0.5)
    assert (s.x_min, s.x_max) == (-8, 8)


def test_localized_amplitudes():
    s = make_initial(Localized(1j * R2, R2))
    assert s.amplitude(0) == (1j * R2, R2)
    assert s.norm() == pytest.approx(1, abs=1e-15)


def test_default_localized_coin_matches_pair_coin_factor():
    cond = Localized()
    assert complex(cond.alpha) == pytest.approx(1j * R2)
    assert complex(cond.beta) == pytest.approx(R2)


def test_custom_with_half_norm_rejected():
    with pytest.raises(NormalizationError):
        make_initial(Custom([(0, 0.5, 0.5)]))


def test_localized_non_normalized_rejected():
    with pytest.raises(NormalizationError):
        make_initial(Localized(1, 1))


@pytest.mark.parametrize("k", [0, -2])
def test_pair_requires_positive_k(k):
    with pytest.raises(ValueError):
        make_initial(SymmetricPair(k, 1))


def test_pair_rejects_bad_sign():
    with pytest.raises(ValueError):
        make_initial(SymmetricPair(1, 0))


def test_custom_rejects_duplicate_sites():
    with pytest.raises(ValueError):
        make_initial(Custom([(0, R2, 0), (0, 0, R2)]))


def test_step_localized_example():
    s1 = step(make_initial(Localized(1j * R2, R2)))
    p = probs(s1)
    assert s1.t == 1
    assert p[1 - s1.x_min] == pytest.approx(0.5, abs=1e-15)
    assert p[-1 - s1.x_min] == pytest.approx(0.5, abs=1e-15)
    assert p.sum() == pytest.approx(1, abs=1e-15)
    # coin after H is ((1+i)|R> + (i-1)|L>)/2
    assert s1.amplitude(1).a == pytest.approx((1 + 1j) / 2)
    assert s1.amplitude(-1).b == pytest.approx((1j - 1) / 2)


def test_step_right_coin_example():
    s1 = step(make_initial(Custom([(0, 1, 0)])))
    assert s1.amplitude(1) == pytest.approx((R2, 0))
    assert s1.amplitude(-1) == pytest.approx((0, R2))
    assert s1.amplitude(0) == (0, 0)
    assert s1.support() == (-1, 1)


def test_step_does_not_mutate_input():
    s0 = make_initial(SymmetricPair(1, 1), t_max=3)
    before = s0.a.copy()
    step(s0)
    assert np.array_equal(s0.a, before)
    with pytest.raises(ValueError):
        s0.a[0] = 1


def test_evolve_zero_is_identity():
    s0 = make_initial(SymmetricPair(2, -1), t_max=4)
    assert evolve(s0, 0) is s0


def test_evolve_matches_repeated_step():
    s0 = make_initial(Localized(), t_max=3)
    a = evolve(s0, 3)
    b = step(step(step(s0)))
    assert np.array_equal(a.a, b.a) and np.array_equal(a.b, b.b)
    assert a.t == b.t == 3


def test_evolve_composes():
    s0 = make_initial(SymmetricPair(1, 1), t_max=50)
    whole = evolve(s0, 37)
    split = evolve(evolve(s0, 20), 17)
    assert np.array_equal(whole.a, split.a) and np.array_equal(whole.b, split.b)


def test_growing_window_matches_preallocated():
    grown = evolve(make_initial(SymmetricPair(1, -1)), 60)
    fixed = evolve(make_initial(SymmetricPair(1, -1), t_max=60), 60)
    lo, hi = fixed.x_min, fixed.x_max
    regrid = grown.window(lo, hi)
    np.testing.assert_allclose(regrid.a, fixed.a, rtol=0, atol=1e-15)
    np.testing.assert_allclose(regrid.b, fixed.b, rtol=0, atol=1e-15)
    assert grown.norm() == pytest.approx(1, abs=1e-13)


def test_trajectory_sampling_grid():
    s0 = make_initial(Localized(), t_max=10)
    assert [s.t for s in trajectory(s0, 10, every=4)] == [0, 4, 8, 10]
    with pytest.raises(ValueError):
        list(trajectory(s0, -1))


@pytest.mark.parametrize("cond", [Localized(), SymmetricPair(1, 1), SymmetricPair(3, -1)])
def test_light_cone_and_sublattice(cond):
    s0 = make_initial(cond, t_max=40)
    sup0 = s0.support()
    for snap in trajectory(s0, 40):
        t = snap.t
        p = probs(snap)
        x = snap.positions
        outside = (x < sup0[0] - t) | (x > sup0[1] + t)
        assert np.all(snap.a[outside] == 0) and np.all(snap.b[outside] == 0)
        wrong_parity = (x - sup0[0] - t) % 2 != 0
        assert np.all(p[wrong_parity] == 0)


@settings(max_examples=30, deadline=None)
@given(
    c1=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    c2=st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    n=st.integers(0, 40),
)
def test_linearity(c1, c2, n):
    s1 = make_initial(SymmetricPair(1, 1), t_max=40)
    s2 = make_initial(Custom([(1, cmath.exp(0.3j) * 0.6, 0.8)]), t_max=40).window(s1.x_min, s1.x_max)
    mix = WalkState(c1 * s1.a + c2 * s2.a, c1 * s1.b + c2 * s2.b, s1.x_min)
    e1, e2, em = evolve(s1, n), evolve(s2, n), evolve(mix, n)
    np.testing.assert_allclose(em.a, c1 * e1.a + c2 * e2.a, rtol=0, atol=1e-12)
    np.testing.assert_allclose(em.b, c1 * e1.b + c2 * e2.b, rtol=0, atol=1e-12)


def test_norm_preserved_each_step():
    s0 = make_initial(SymmetricPair(1, 1), t_max=200)
    norms = np.array([s.norm() for s in trajectory(s0, 200)])
    assert np.max(np.abs(np.diff(norms))) <= 1e-14
    assert abs(norms[0] - 1) <= 1e-15


def test_walkstate_validation():
    with pytest.raises(ValueError):
        WalkState(np.zeros(3), np.zeros(2), 0)
    with pytest.raises(ValueError):
        WalkState(np.zeros(3), np.zeros(3), 0, t=-1)
    s = make_initial(SymmetricPair(1, 1))
    with pytest.raises(ValueError):
        s.window(0, 5)
