"""Seeded synthetic pupil recordings with class-dependent dilation variability."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter

from .ingest import CLASSES, Recording, TlxLabel

MIN_DIAMETER = 1.0
CLASS_SCORES = {"C1": 15.0, "C2": 40.0, "C3": 70.0}
DEFAULT_DILATION_STD = {"C1": 0.0035, "C2": 0.0055, "C3": 0.02}


@dataclass(frozen=True)
class SynthSpec:
    """Generator settings for one recording (diameters in mm)."""

    label: str = "C1"
    duration_s: float = 60.0
    rate_hz: float = 240.0
    base_diameter: float = 3.5
    dilation_std: float = DEFAULT_DILATION_STD["C1"]
    dilation_tau_s: float = 0.001
    drift_amplitude: float = 0.01
    drift_period_s: float = 10.0
    drift_phase: float = 0.0
    noise_std: float = 0.001
    n_epochs: int = 5
    epoch_level_step: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.label not in CLASSES:
            raise ValueError(f"unknown class {self.label!r}")
        for name in ("duration_s", "rate_hz", "base_diameter", "dilation_std", "dilation_tau_s",
                     "drift_amplitude", "drift_period_s", "noise_std"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.n_epochs < 1 or self.epoch_level_step < 0:
            raise ValueError("n_epochs must be >= 1 and epoch_level_step >= 0")


def default_spec(label: str, **overrides) -> SynthSpec:
    return SynthSpec(label=label, dilation_std=DEFAULT_DILATION_STD[label], **overrides)


def _ou_process(rng, n: int, dt: float, tau: float, std: float) -> np.ndarray:
    """Stationary Ornstein-Uhlenbeck samples with marginal std ``std``."""
    phi = math.exp(-dt / tau)
    innov = rng.standard_normal(n) * std * math.sqrt(1.0 - phi * phi)
    out = np.empty(n)
    out[0] = rng.standard_normal() * std
    out[1:] = lfilter([1.0], [1.0, -phi], innov[1:], zi=[phi * out[0]])[0]
    return out


def _epoch_levels(rng, n: int, step: float) -> np.ndarray:
    """Per-epoch baseline offsets: sorted gaps of 0.5-1.5 ``step``, visited in random order."""
    levels = np.concatenate([[0.0], np.cumsum(rng.uniform(0.5, 1.5, n - 1) * step)])
    return rng.permutation(levels - levels.mean())


def generate_recording(spec: SynthSpec, id: str | None = None) -> Recording:
    """diameter(t) = base + slow sinusoidal drift + Gaussian dilation process + noise."""
    rng = np.random.default_rng(spec.seed)
    n = int(round(spec.duration_s * spec.rate_hz)) + 1
    t = np.arange(n) / spec.rate_hz
    drift = spec.drift_amplitude * np.sin(2.0 * np.pi * t / spec.drift_period_s + spec.drift_phase)
    dilation = _ou_process(rng, n, 1.0 / spec.rate_hz, spec.dilation_tau_s, spec.dilation_std)
    noise = rng.standard_normal(n) * spec.noise_std
    levels = _epoch_levels(rng, spec.n_epochs, spec.epoch_level_step)
    epoch = np.minimum((t / spec.duration_s * spec.n_epochs).astype(int), spec.n_epochs - 1)
    diameter = spec.base_diameter + levels[epoch] + drift + dilation + noise
    floor = MIN_DIAMETER - diameter.min()
    if floor > 0:  # keep the trace physical; a constant shift leaves segment shapes alone
        diameter = diameter + floor
    return Recording(
        id=id if id is not None else f"synth-{spec.label}-{spec.seed}",
        t=t, diameter=diameter, confidence=np.ones(n),
        label=TlxLabel.from_mean(CLASS_SCORES[spec.label]),
        subject_id=f"s{spec.seed}", activity_id=spec.label, nominal_rate=spec.rate_hz)


def generate_dataset(n_per_class: int, profile: SynthSpec | None = None, seed: int = 0,
                     subject_variation: bool = True) -> list[Recording]:
    """Balanced dataset of ``3 * n_per_class`` recordings, ordered C1, C2, C3.

    Every recording gets its own derived seed. With ``subject_variation`` each
    one also draws its own pupil size, gain and drift shape, which scales and
    shifts the raw signal without touching the class-dependent dilation
    variability relative to the drift.
    """
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    profile = profile or SynthSpec()
    seeds = np.random.SeedSequence(seed).spawn(3 * n_per_class)
    recordings = []
    for ci, label in enumerate(CLASSES):
        for j in range(n_per_class):
            ss = seeds[ci * n_per_class + j]
            rng = np.random.default_rng(ss.spawn(1)[0])
            spec = replace(profile, label=label, dilation_std=DEFAULT_DILATION_STD[label]
                           * profile.dilation_std / DEFAULT_DILATION_STD["C1"],
                           seed=int(ss.generate_state(1)[0]))
            if subject_variation:
                gain = math.exp(rng.uniform(math.log(0.4), math.log(2.5)))
                spec = replace(
                    spec,
                    base_diameter=rng.uniform(2.5, 6.0),
                    dilation_std=spec.dilation_std * gain,
                    drift_amplitude=spec.drift_amplitude * gain,
                    epoch_level_step=spec.epoch_level_step * gain,
                    noise_std=spec.noise_std * gain,
                    drift_period_s=spec.drift_period_s * rng.uniform(0.8, 1.25),
                    drift_phase=rng.uniform(0.0, 2.0 * math.pi))
            recordings.append(generate_recording(spec, id=f"{label.lower()}_{j:03d}"))
    return recordings
