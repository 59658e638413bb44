import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brokenstick.sampling import (
    Partition,
    count_kgons,
    forms_kgon,
    has_any_triangle,
    kth_longest,
    sample_partition,
    sample_pieces,
    stream_for_sample,
)


def test_stream_same_seed_index_is_bit_identical():
    a = stream_for_sample(1, 0).random(100)
    b = stream_for_sample(1, 0).random(100)
    assert (a == b).all()


def test_stream_distinct_indices_differ():
    a = stream_for_sample(1, 0).random(1)
    b = stream_for_sample(1, 1).random(1)
    assert a[0] != b[0]


def test_stream_is_pure_function_of_seed_and_index():
    # scheduling independence: rebuilding the stream anywhere gives the
    # same draws, so worker count cannot matter
    draws = [stream_for_sample(1, 5).random(50) for _ in range(3)]
    assert (draws[0] == draws[1]).all() and (draws[1] == draws[2]).all()


def test_stream_rejects_bad_arguments():
    with pytest.raises(ValueError):
        stream_for_sample(-1, 0)
    with pytest.raises(ValueError):
        stream_for_sample(2**64, 0)
    with pytest.raises(ValueError):
        stream_for_sample(1, -1)


def test_partition_single_piece():
    p = sample_partition(stream_for_sample(1, 0), 1)
    assert p.breaks == ()
    assert p.pieces == (1.0,)


def test_partition_three_pieces_sum_to_one():
    p = sample_partition(stream_for_sample(1, 0), 3)
    assert len(p.breaks) == 2
    assert len(p.pieces) == 3
    assert abs(sum(p.pieces) - 1.0) <= 1e-12


def test_partition_rejects_zero_pieces():
    with pytest.raises(ValueError):
        sample_partition(stream_for_sample(1, 0), 0)


def test_partition_validates_break_order():
    with pytest.raises(ValueError):
        Partition((0.7, 0.3))
    with pytest.raises(ValueError):
        Partition((-0.1,))
    # duplicated break points are retained and give a zero-length piece
    p = Partition((0.5, 0.5))
    assert p.pieces == (0.5, 0.0, 0.5)


def test_sampled_pieces_nonnegative_and_normalized():
    pieces = sample_pieces(stream_for_sample(3, 0), 2000, 5)
    assert (pieces >= 0).all()
    assert np.abs(pieces.sum(axis=1) - 1.0).max() <= 1e-12


def test_piece_means_symmetric():
    # each of the 3 positions has mean 1/3; spacing variance is 1/18
    pieces = sample_pieces(stream_for_sample(11, 0), 1_000_000, 3)
    sigma = math.sqrt((1.0 / 18.0) / 1_000_000)
    for j in range(3):
        assert abs(pieces[:, j].mean() - 1.0 / 3.0) <= 4 * sigma


def test_forms_kgon_fixtures():
    assert forms_kgon((1 / 3, 1 / 3, 1 / 3))
    assert not forms_kgon((0.5, 0.3, 0.2))  # degenerate equality is strict
    assert forms_kgon((0.4, 0.2, 0.2, 0.2))


def test_forms_kgon_rejects_bad_input():
    with pytest.raises(ValueError):
        forms_kgon((0.5, 0.5))
    with pytest.raises(ValueError):
        forms_kgon((0.5, -0.1, 0.6))


def test_count_kgons_fixtures():
    assert count_kgons((0.25, 0.25, 0.25, 0.25), 3) == 4
    assert count_kgons((0.7, 0.1, 0.1, 0.1), 3) == 1
    # enumerate the 4 triples of (0.4, 0.3, 0.2, 0.1) by hand:
    # (0.4,0.3,0.2) ok; (0.4,0.3,0.1) degenerate; (0.4,0.2,0.1) no;
    # (0.3,0.2,0.1) degenerate
    assert count_kgons((0.4, 0.3, 0.2, 0.1), 3) == 1


def test_count_kgons_early_exit_matches_full_count():
    pieces = (0.25, 0.25, 0.25, 0.25)
    assert count_kgons(pieces, 3, at_least=1) == 1
    assert count_kgons(pieces, 3, at_least=10) == 4


def test_count_kgons_range_checks():
    with pytest.raises(ValueError):
        count_kgons((0.5, 0.5), 3)
    with pytest.raises(ValueError):
        count_kgons((0.2,) * 5, 2)
    with pytest.raises(ValueError):
        count_kgons((1.0 / 26,) * 26, 3)


def test_kth_longest_fixtures():
    assert kth_longest((0.5, 0.2, 0.3), 1) == 0.5
    assert kth_longest((0.5, 0.2, 0.3), 3) == 0.2
    assert kth_longest((0.25, 0.25, 0.5), 2) == 0.25
    with pytest.raises(ValueError):
        kth_longest((0.5, 0.5), 3)


@given(
    pieces=st.lists(st.floats(1e-6, 1.0), min_size=3, max_size=8),
    scale=st.floats(0.01, 100.0),
)
@settings(max_examples=200, deadline=None)
def test_count_kgons_permutation_and_scale_invariant(pieces, scale):
    k = 3
    base = count_kgons(pieces, k)
    assert count_kgons(list(reversed(pieces)), k) == base
    assert count_kgons(sorted(pieces), k) == base
    assert count_kgons([scale * p for p in pieces], k) == base


@given(
    sides=st.lists(st.floats(1e-3, 1.0), min_size=3, max_size=6),
    bump=st.floats(0.0, 1.0),
)
@settings(max_examples=200, deadline=None)
def test_forms_kgon_monotone_in_nonmaximal_sides(sides, bump):
    if not forms_kgon(sides):
        return
    grown = sorted(sides)
    longest = grown[-1]
    # grow the smallest side while keeping it non-maximal
    grown[0] = min(longest, grown[0] + bump * (longest - grown[0]))
    assert forms_kgon(grown)


@given(st.lists(st.floats(1e-6, 1.0), min_size=3, max_size=9))
@settings(max_examples=300, deadline=None)
def test_has_any_triangle_matches_exhaustive_count(pieces):
    arr = np.sort(np.array(pieces))
    assert bool(has_any_triangle(arr)) == (count_kgons(pieces, 3, at_least=1) >= 1)
