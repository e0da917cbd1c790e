import numpy as np
import pytest

from pupilload.features import labels_of
from pupilload.synth import SynthSpec, default_spec, generate_dataset, generate_recording


def test_shape_and_labels():
    rec = generate_recording(default_spec("C3", duration_s=10, seed=4))
    assert len(rec) == 2401 and rec.duration == pytest.approx(10.0)
    assert rec.label.label == "C3"
    assert np.all(rec.diameter > 0)


def test_dataset_is_balanced_and_seeded():
    a = generate_dataset(3, seed=9)
    b = generate_dataset(3, seed=9)
    c = generate_dataset(3, seed=10)
    assert labels_of(a).tolist() == ["C1"] * 3 + ["C2"] * 3 + ["C3"] * 3
    assert all(np.array_equal(x.diameter, y.diameter) for x, y in zip(a, b))
    assert not np.array_equal(a[0].diameter, c[0].diameter)
    assert len({r.id for r in a}) == 9


def test_diameters_stay_positive():
    for rec in generate_dataset(15, seed=2):
        assert rec.diameter.min() >= 1.0 - 1e-12


def test_dilation_variability_orders_classes():
    spreads = [np.std(np.diff(generate_recording(default_spec(c, seed=1)).diameter))
               for c in ("C1", "C2", "C3")]
    assert spreads[0] < spreads[1] < spreads[2]


@pytest.mark.parametrize("bad", [dict(label="C9"), dict(duration_s=0), dict(n_epochs=0)])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        SynthSpec(**bad)
    with pytest.raises(ValueError):
        generate_dataset(0)


@pytest.mark.parametrize("seed", range(5))
def test_c3_spread_exceeds_c1(seed):
    kw = dict(duration_s=10_000 / 240, seed=seed)
    c1 = generate_recording(default_spec("C1", **kw))
    c3 = generate_recording(default_spec("C3", **kw))
    assert len(c1) >= 10_000
    assert np.std(c3.diameter) > np.std(c1.diameter)


def test_ten_per_class():
    data = generate_dataset(10, seed=0)
    assert len(data) == 30
    assert {c: list(labels_of(data)).count(c) for c in ("C1", "C2", "C3")} == \
        {"C1": 10, "C2": 10, "C3": 10}
    assert [r.label.mean_score for r in data[::10]] == [15.0, 40.0, 70.0]
