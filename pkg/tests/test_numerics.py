import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brokenstick.numerics import (
    Estimate,
    StreamingStats,
    Z95,
    find_root,
    integrate,
    merge_all,
)
from brokenstick.sampling import stream_for_sample

# root of k*(1 - k^2) = 0.16, verified independently to 30 digits
ROOT_CUBIC_016 = 0.16444711963734145


def test_find_root_linear():
    assert find_root(lambda x: x - 0.5, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)


def test_find_root_cubic_through_zero():
    assert find_root(lambda k: k * (1 - k * k), -0.5, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_find_root_exceedance_cubic():
    f = lambda k: k * (1 - k * k) - 8 * 0.02
    root = find_root(f, 0.0, 0.5774, tol=1e-14)
    assert abs(f(root)) <= 1e-12
    assert root == pytest.approx(ROOT_CUBIC_016, abs=1e-9)


def test_find_root_sign_order_irrelevant():
    f = lambda x: x - 0.3
    a = find_root(f, 0.0, 1.0, tol=1e-13)
    b = find_root(lambda x: -f(x), 0.0, 1.0, tol=1e-13)
    assert a == pytest.approx(b, abs=1e-12)


def test_find_root_requires_sign_change():
    with pytest.raises(ValueError):
        find_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_integrate_polynomial():
    assert integrate(lambda x: x * x, 0.0, 1.0, tol=1e-10) == pytest.approx(1 / 3, abs=1e-10)


def test_integrate_exceedance_limit():
    val = integrate(lambda k: 4 * k * (1 - k * k), 0.0, 1.0, tol=1e-10)
    assert val == pytest.approx(1.0, abs=1e-10)


def test_integrate_sine():
    assert integrate(math.sin, 0.0, math.pi, tol=1e-10) == pytest.approx(2.0, abs=1e-10)


def test_integrate_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        integrate(math.sin, 1.0, 0.0)


def test_integrate_linearity():
    tol = 1e-10
    f = lambda x: math.sin(3 * x)
    g = lambda x: x * x * x
    combined = integrate(lambda x: 2.0 * f(x) + 0.5 * g(x), 0.0, 2.0, tol=tol)
    split = 2.0 * integrate(f, 0.0, 2.0, tol=tol) + 0.5 * integrate(g, 0.0, 2.0, tol=tol)
    assert abs(combined - split) <= 2 * tol


def test_streaming_push_fixture():
    s = StreamingStats()
    for x in (1.0, 2.0, 3.0):
        s.push(x)
    assert s.mean == pytest.approx(2.0)
    assert s.variance == pytest.approx(1.0)


def test_streaming_merge_law():
    merged = StreamingStats.from_values([1.0, 2.0]).merge(StreamingStats.from_values([3.0]))
    direct = StreamingStats.from_values([1.0, 2.0, 3.0])
    assert merged.count == direct.count
    assert merged.mean == pytest.approx(direct.mean, rel=1e-12)
    assert merged.m2 == pytest.approx(direct.m2, rel=1e-12)


def test_streaming_uniform_moments():
    xs = stream_for_sample(17, 0).random(1_000_000)
    s = StreamingStats.from_values(xs)
    assert abs(s.mean - 0.5) <= 4 * s.std_error
    assert abs(s.variance - 1 / 12) <= 4 * s.variance_std_error


def test_finalize_requires_two_samples():
    s = StreamingStats()
    s.push(1.0)
    with pytest.raises(ValueError):
        s.finalize(seed=0)


def test_finalize_ci_convention():
    s = StreamingStats.from_values([0.0, 1.0, 2.0, 3.0])
    est = s.finalize(seed=9)
    assert isinstance(est, Estimate)
    assert est.ci95_low == pytest.approx(est.mean - Z95 * est.std_error)
    assert est.ci95_high == pytest.approx(est.mean + Z95 * est.std_error)
    assert est.n_samples == 4
    assert est.seed == 9


@given(
    values=st.lists(st.floats(-100, 100), min_size=4, max_size=60),
    cut=st.integers(1, 3),
)
@settings(max_examples=200, deadline=None)
def test_streaming_merge_tree_shape_irrelevant(values, cut):
    k = max(1, min(len(values) - 1, cut * len(values) // 4))
    left = StreamingStats.from_values(values[:k])
    right = StreamingStats.from_values(values[k:])
    ab = left.merge(right)
    ba = right.merge(left)
    direct = StreamingStats.from_values(values)
    scale = max(1.0, abs(direct.m2))
    assert ab.count == ba.count == direct.count
    assert abs(ab.mean - direct.mean) <= 1e-10 * max(1.0, abs(direct.mean))
    assert abs(ab.m2 - direct.m2) <= 1e-10 * scale
    assert abs(ba.m2 - direct.m2) <= 1e-10 * scale
    assert ab.variance >= 0.0


def test_merge_all_folds_in_order():
    parts = [StreamingStats.from_values([float(i)]) for i in range(5)]
    total = merge_all(parts)
    assert total.count == 5
    assert total.mean == pytest.approx(2.0)
