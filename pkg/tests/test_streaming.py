"""Merge-and-reduce streaming: memory bounds and certified errors."""

import numpy as np
import pytest

from meancore import (
    EmptyStream,
    StreamSummary,
    WeightedSet,
    coreset,
    summarization_error,
)


def _chunks(n_chunks, chunk, d, seed):
    rng = np.random.default_rng(seed)
    return [rng.standard_normal((chunk, d)) + rng.uniform(-2, 2, d) for _ in range(n_chunks)]


def test_stream_validation():
    with pytest.raises(ValueError):
        StreamSummary(0.0, 100)
    with pytest.raises(ValueError):
        StreamSummary(1.0, 100)
    with pytest.raises(ValueError):
        StreamSummary(0.1, 1)


def test_finalize_empty_stream_raises():
    with pytest.raises(EmptyStream):
        StreamSummary(0.1, 100).finalize()


def test_single_chunk_matches_offline_coreset():
    chunk = _chunks(1, 300, 3, seed=0)[0]
    ss = StreamSummary(0.1, 300, mode="slow")
    ss.insert(chunk)
    got = ss.finalize()
    want = coreset(WeightedSet(chunk), 0.1, mode="slow")
    assert np.array_equal(got.indices, want.indices)
    assert np.array_equal(got.weights, want.weights)


def test_identical_points_reduce_exactly():
    ss = StreamSummary(0.2, 50)
    for _ in range(4):
        ss.insert(np.tile([1.0, -2.0], (50, 1)))
    assert ss.max_reduce_error == 0.0
    final = ss.finalize()
    s = WeightedSet(np.tile([1.0, -2.0], (200, 1)))
    assert final.mean_of(s.points[final.indices]) == pytest.approx([1.0, -2.0])
    assert final.total == pytest.approx(200.0)


def test_bucket_count_stays_logarithmic():
    ss = StreamSummary(0.15, 200)
    for chunk in _chunks(16, 200, 3, seed=1):
        ss.insert(chunk)
        assert ss.occupied <= 5
    assert ss.peak_buckets <= 5
    assert ss.count == 3200
    # a full binary counter performs one reduce per chunk plus one per carry
    assert len(ss.reduce_errors) == 16 + 15


def test_every_reduce_is_certified_within_eps():
    eps = 0.15
    ss = StreamSummary(eps, 200)
    for chunk in _chunks(9, 200, 4, seed=2):
        ss.insert(chunk)
    assert all(0.0 <= e <= eps for e in ss.reduce_errors)
    assert ss.max_reduce_error == max(ss.reduce_errors)


def test_single_live_bucket_is_returned_without_extra_reduce():
    ss = StreamSummary(0.1, 100)
    for chunk in _chunks(4, 100, 2, seed=3):
        ss.insert(chunk)
    n_reduces = len(ss.reduce_errors)
    assert ss.occupied == 1
    ss.finalize()
    assert len(ss.reduce_errors) == n_reduces


def test_partial_tree_merges_once_on_finalize():
    ss = StreamSummary(0.1, 100)
    for chunk in _chunks(5, 100, 2, seed=4):
        ss.insert(chunk)
    assert ss.occupied == 2
    n_reduces = len(ss.reduce_errors)
    final = ss.finalize()
    assert len(ss.reduce_errors) == n_reduces + 1
    assert np.all(np.diff(final.indices) > 0)
    assert final.indices[0] >= 0 and final.indices[-1] < 500


def test_final_error_tracks_certificates():
    eps = 0.1
    data = _chunks(8, 200, 3, seed=5)
    ss = StreamSummary(eps, 200, mode="slow")
    for chunk in data:
        ss.insert(chunk)
    final = ss.finalize()
    full = WeightedSet(np.concatenate(data))
    err = summarization_error(full, final)
    assert err <= 6.0 * max(ss.max_reduce_error, 1e-15)
    assert final.total == pytest.approx(1600.0, rel=0.05)


def test_weighted_insert_path():
    rng = np.random.default_rng(6)
    ss = StreamSummary(0.2, 60)
    pts, ws = [], []
    for _ in range(3):
        p = rng.standard_normal((60, 2))
        w = rng.uniform(0.5, 3.0, 60)
        ss.insert(p, w)
        pts.append(p)
        ws.append(w)
    final = ss.finalize()
    full = WeightedSet(np.concatenate(pts), np.concatenate(ws))
    assert summarization_error(full, final) <= 6.0 * max(ss.max_reduce_error, 1e-15)
    assert final.total == pytest.approx(full.total_weight, rel=0.1)


def test_stream_determinism():
    data = _chunks(6, 150, 3, seed=7)
    outs = []
    for _ in range(2):
        ss = StreamSummary(0.12, 150)
        for chunk in data:
            ss.insert(chunk)
        outs.append(ss.finalize())
    assert np.array_equal(outs[0].indices, outs[1].indices)
    assert np.array_equal(outs[0].weights, outs[1].weights)
