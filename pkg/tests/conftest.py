import numpy as np
import pytest

from pupilload.ingest import Recording, TlxLabel


def make_recording(diameter, rate=240.0, id="r", label_mean=20.0, confidence=None):
    diameter = np.asarray(diameter, dtype=float)
    t = np.arange(diameter.size) / rate
    return Recording(id=id, t=t, diameter=diameter, confidence=confidence,
                     label=TlxLabel.from_mean(label_mean))


def random_recording(seed, n=None, rate=240.0, **kw):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(1500, 4000))
    d = 3.0 + np.cumsum(rng.normal(0, 0.02, n)) + rng.normal(0, 0.05, n)
    return make_recording(d, rate, id=f"rand{seed}", **kw)


@pytest.fixture
def rec_factory():
    return make_recording


@pytest.fixture(scope="session")
def small_synth():
    from pupilload.synth import generate_dataset

    return generate_dataset(6, seed=1)
