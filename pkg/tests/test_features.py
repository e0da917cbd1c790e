import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from pupilload.features import (BaselinePupilStats, SegmentDistributionFeatures,
                                baseline_pupil_stats, extract_feature, labels_of,
                                normalize_minmax, scores_of, segment_stds,
                                squeeze_unit_interval)
from pupilload.segmentation import SparseSegmentError, with_diameter

from conftest import make_recording, random_recording


def test_normalize_and_squeeze():
    x = normalize_minmax([2.0, 4.0, 3.0])
    assert x.tolist() == [0.0, 1.0, 0.5]
    assert normalize_minmax([5.0, 5.0]).tolist() == [0.5, 0.5]
    s = squeeze_unit_interval(x)
    assert s.min() == 0.5 / 3 and s.max() == 2.5 / 3


def test_constant_segment_features_are_zero():
    assert segment_stds(np.full(40, 2.0)) == (0.0, 0.0)


def test_feature_layout_interleaves():
    rec = random_recording(3, n=2400)
    fv = extract_feature(rec, 4)
    assert fv.values.shape == (8,) and fv.k == 4
    np.testing.assert_array_equal(fv.normal_stds, fv.values[0::2])
    assert np.all((fv.values > 0) & (fv.values < 0.5))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), a=st.floats(0.1, 10), b=st.floats(-5, 5),
       k=st.integers(1, 8))
def test_affine_invariance(seed, a, b, k):
    rec = random_recording(seed)
    f0 = extract_feature(rec, k).values
    f1 = extract_feature(with_diameter(rec, a * rec.diameter + b), k).values
    np.testing.assert_allclose(f1, f0, atol=1e-9, rtol=0)


def test_extract_feature_sparse():
    with pytest.raises(SparseSegmentError):
        extract_feature(make_recording(np.arange(50.0)), 2)


def test_baseline_stats_against_scipy():
    from scipy import stats

    x = np.random.default_rng(0).gamma(2.0, 1.0, 500)
    got = baseline_pupil_stats(make_recording(x))
    np.testing.assert_allclose(got, [x.mean(), x.std(), stats.skew(x),
                                     stats.kurtosis(x, fisher=False)], rtol=1e-12)
    assert baseline_pupil_stats(make_recording(np.full(10, 2.0))).tolist() == [2, 0, 0, 0]
    with pytest.raises(ValueError):
        baseline_pupil_stats(make_recording([1.0, 2.0]))


def test_transformer_fixed_and_auto(small_synth):
    fixed = SegmentDistributionFeatures(n_splits=3).fit(small_synth)
    X = fixed.transform(small_synth[:4])
    assert X.shape == (4, 6)
    assert list(fixed.get_feature_names_out()[:2]) == ["normal_sd_1", "beta_sd_1"]
    auto = SegmentDistributionFeatures(k_max=8, random_state=2).fit(small_synth)
    assert 1 <= auto.n_splits_ <= 8 and auto.split_optima_
    assert clone(auto).get_params() == auto.get_params()
    with pytest.raises(ValueError):
        SegmentDistributionFeatures(n_splits=0).fit(small_synth)


def test_baseline_transformer_and_labels(small_synth):
    X = BaselinePupilStats().fit_transform(small_synth)
    assert X.shape == (18, 4)
    assert labels_of(small_synth).tolist() == ["C1"] * 6 + ["C2"] * 6 + ["C3"] * 6
    assert scores_of(small_synth)[0] == 15.0
