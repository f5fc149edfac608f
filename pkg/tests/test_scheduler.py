import numpy as np
import pytest

from ringleader.core.scheduler import SchedulerStream


def test_determinism():
    a = SchedulerStream(16, 42)
    b = SchedulerStream(16, 42)
    assert a.draw(5000) == b.draw(5000)


def test_next_index_matches_draw():
    a = SchedulerStream(10, 7)
    b = SchedulerStream(10, 7)
    assert [a.next_index() for _ in range(20_000)] == b.draw(20_000)


def test_mixed_consumption_is_one_stream():
    a = SchedulerStream(10, 9)
    b = SchedulerStream(10, 9)
    got = a.draw(3) + [a.next_index()] + a.draw(10_000)
    assert got == b.draw(10_004)


def test_range():
    s = SchedulerStream(5, 0)
    assert all(0 <= i < 5 for i in s.draw(10_000))


def test_uniformity_five_sigma():
    # 10^6 draws at n=16: every index frequency within 5 sigma of 1/16
    s = SchedulerStream(16, 123)
    counts = np.bincount(s.draw(1_000_000), minlength=16)
    p = 1 / 16
    sigma = np.sqrt(p * (1 - p) / 1_000_000)
    freqs = counts / 1_000_000
    assert np.all(np.abs(freqs - p) < 5 * sigma), freqs


def test_chi_square_sane():
    s = SchedulerStream(8, 2024)
    n_draws = 200_000
    counts = np.bincount(s.draw(n_draws), minlength=8)
    expected = n_draws / 8
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    # 7 degrees of freedom: 0.999 quantile is ~24.3
    assert chi2 < 24.3, chi2


def test_rejects_tiny_ring():
    with pytest.raises(ValueError):
        SchedulerStream(1, 0)
