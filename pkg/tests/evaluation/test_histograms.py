"""Tests for hold-window histograms and their overlap in bilat.evaluation.histograms."""

import pytest
from pydantic import ValidationError

from bilat.evaluation.errors import EmptyWindowError, HistogramEdgeMismatchError
from bilat.evaluation.histograms import (Histogram, grip_histogram, histogram_of, overlap_coefficient,
                                         pooled_histogram)
from tests.helpers import make_episode


def _histogram(counts, edges=(0.0, 1.0, 2.0)) -> Histogram:
    return Histogram(edges=list(edges), counts=list(counts), channel="torque")


def test_overlap_is_the_shared_mass():
    assert overlap_coefficient(_histogram([1, 1]), _histogram([1, 3])) == pytest.approx(0.75)
    assert overlap_coefficient(_histogram([1, 3]), _histogram([1, 1])) == pytest.approx(0.75)
    assert overlap_coefficient(_histogram([2, 5]), _histogram([2, 5])) == pytest.approx(1.0)
    assert overlap_coefficient(_histogram([2, 0]), _histogram([0, 7])) == 0.0


def test_overlap_needs_shared_edges():
    with pytest.raises(HistogramEdgeMismatchError, match="different bin edges"):
        overlap_coefficient(_histogram([1, 1]), _histogram([1, 1], edges=(0.0, 0.5, 2.0)))
    with pytest.raises(HistogramEdgeMismatchError):
        pooled_histogram([_histogram([1, 1]), _histogram([1, 1, 1], edges=(0.0, 1.0, 2.0, 3.0))])


def test_outliers_land_in_the_outer_bins():
    histogram = histogram_of([-5.0, 0.25, 0.5, 5.0], "torque", bins=2, value_range=(0.0, 1.0))
    assert histogram.edges == [0.0, 0.5, 1.0]
    assert histogram.counts == [2, 2]
    assert histogram.total == 4


def test_range_is_inferred_from_the_values():
    histogram = histogram_of([1.0, 3.0], "angle", bins=4)
    assert histogram.edges[0] == 1.0 and histogram.edges[-1] == 3.0
    flat = histogram_of([2.0, 2.0], "angle", bins=2)
    assert flat.edges == [1.5, 2.0, 2.5]


def test_mass_between_counts_whole_bins():
    histogram = _histogram([1, 2, 1], edges=(0.0, 0.1, 0.2, 0.3))
    assert histogram.mass.tolist() == [0.25, 0.5, 0.25]
    assert histogram.mass_between(0.0, 0.2) == pytest.approx(0.75)
    assert histogram.mass_between(-1.0, 1.0) == pytest.approx(1.0)
    assert histogram.mass_between(0.3, 0.5) == 0.0


def test_mass_between_prorates_partial_bins():
    histogram = _histogram([1, 2, 1], edges=(0.0, 0.1, 0.2, 0.3))
    assert histogram.mass_between(0.05, 0.3) == pytest.approx(0.875)
    assert histogram.mass_between(0.12, 0.14) == pytest.approx(0.1)
    assert histogram.mass_between(0.0, 0.12) + histogram.mass_between(0.12, 0.3) == pytest.approx(1.0)


def test_pooling_sums_counts():
    pooled = pooled_histogram([_histogram([1, 2]), _histogram([3, 0])])
    assert pooled.counts == [4, 2]


def test_histogram_validation():
    with pytest.raises(ValidationError, match="strictly increasing"):
        _histogram([1, 1], edges=(0.0, 2.0, 1.0))
    with pytest.raises(ValidationError, match="counts"):
        _histogram([1], edges=(0.0, 1.0, 2.0))
    with pytest.raises(ValueError, match="at least 2"):
        histogram_of([1.0], "torque", bins=1)


def test_gripper_histogram_over_a_window():
    episode = make_episode(60, gripper_torque=0.05)
    histogram = grip_histogram(episode, window=(0.01, 0.03), bins=2, value_range=(0.0, 1.0))
    assert histogram.counts == [20, 0]
    assert histogram.channel == "follower.joint4.torque"
    leader = grip_histogram(episode, channel="angle", stream="leader", joint=0, bins=3)
    assert leader.total == 60
    assert leader.channel == "leader.joint0.angle"


def test_empty_window():
    episode = make_episode(60)
    with pytest.raises(EmptyWindowError, match="holds no samples"):
        grip_histogram(episode, window=(1.0, None))
