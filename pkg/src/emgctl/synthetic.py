"""Deterministic synthetic EMG datasets for tests, demos and benchmarks.

Each gesture class gets a per-channel sinusoid recipe (frequency, amplitude)
plus additive Gaussian noise; distinct recipes make the classes separable by
spectral content. Every (subject, gesture, repetition) record draws its phases
and noise from a stream keyed by those ids, so a spec with a fixed seed always
produces byte-identical data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .records import EmgRecord, RecordMeta
from .validation import check_positive_int


@dataclass(frozen=True)
class ClassRecipe:
    """Per-channel sinusoid frequencies/amplitudes and a noise amplitude."""

    freqs: tuple[float, ...]
    amps: tuple[float, ...]
    noise: float = 0.0

    def __post_init__(self):
        if len(self.freqs) != len(self.amps):
            raise ValueError("freqs and amps must have one entry per channel")
        if len(self.freqs) < 1:
            raise ValueError("recipe needs at least one channel")
        if self.noise < 0:
            raise ValueError("noise amplitude must be >= 0")

    @property
    def channels(self) -> int:
        return len(self.freqs)


@dataclass(frozen=True)
class SynthSpec:
    subjects: int
    gestures: int
    repetitions: int
    duration: float
    sample_rate: int
    recipes: tuple[ClassRecipe, ...]
    seed: int = 0

    def __post_init__(self):
        check_positive_int("subjects", self.subjects)
        check_positive_int("gestures", self.gestures)
        check_positive_int("repetitions", self.repetitions)
        check_positive_int("sample_rate", self.sample_rate)
        if not self.duration > 0:
            raise ValueError(f"duration must be > 0, got {self.duration}")
        if len(self.recipes) != self.gestures:
            raise ValueError(
                f"need one recipe per gesture: {len(self.recipes)} != {self.gestures}"
            )
        channels = {r.channels for r in self.recipes}
        if len(channels) != 1:
            raise ValueError("all recipes must agree on channel count")

    @property
    def channels(self) -> int:
        return self.recipes[0].channels

    @property
    def samples_per_record(self) -> int:
        return int(round(self.duration * self.sample_rate))


def default_recipes(
    gestures: int,
    channels: int = 8,
    amplitude: float = 1.2,
    floor: float = 0.15,
    noise: float = 0.05,
) -> tuple[ClassRecipe, ...]:
    """Separable defaults: each class lights up two adjacent channels and
    carries its own base frequency, well below the Nyquist rate of any
    plausible spec."""
    recipes = []
    for g in range(gestures):
        freqs = tuple(35.0 + 9.0 * g + 4.0 * c for c in range(channels))
        amps = tuple(
            amplitude if (c - g) % channels < 2 else floor for c in range(channels)
        )
        recipes.append(ClassRecipe(freqs=freqs, amps=amps, noise=noise))
    return tuple(recipes)


def make_synth_spec(
    subjects: int = 8,
    gestures: int = 15,
    repetitions: int = 3,
    duration: float = 20.0,
    sample_rate: int = 2000,
    channels: int = 8,
    noise: float = 0.05,
    seed: int = 0,
) -> SynthSpec:
    return SynthSpec(
        subjects=subjects,
        gestures=gestures,
        repetitions=repetitions,
        duration=duration,
        sample_rate=sample_rate,
        recipes=default_recipes(gestures, channels, noise=noise),
        seed=seed,
    )


def _record_rng(spec: SynthSpec, subject: int, gesture: int, repetition: int):
    seq = np.random.SeedSequence(spec.seed, spawn_key=(subject, gesture, repetition))
    return np.random.default_rng(seq)


def synth_record(spec: SynthSpec, subject: int, gesture: int, repetition: int) -> EmgRecord:
    recipe = spec.recipes[gesture]
    n = spec.samples_per_record
    rng = _record_rng(spec, subject, gesture, repetition)
    t = np.arange(n, dtype=np.float64) / spec.sample_rate
    phases = rng.uniform(0.0, 2.0 * np.pi, size=recipe.channels)
    samples = np.empty((n, recipe.channels), dtype=np.float64)
    for c in range(recipe.channels):
        samples[:, c] = recipe.amps[c] * np.sin(
            2.0 * np.pi * recipe.freqs[c] * t + phases[c]
        )
    if recipe.noise > 0:
        samples += recipe.noise * rng.standard_normal(samples.shape)
    return EmgRecord(
        samples=samples.astype(np.float32),
        sample_rate=spec.sample_rate,
        meta=RecordMeta(subject_id=subject, gesture=gesture, repetition=repetition),
    )


def synth_dataset(spec: SynthSpec):
    """Generate the full (subject, gesture, repetition) grid as a DatasetIndex."""
    from .dataset import DatasetIndex

    records = [
        synth_record(spec, s, g, r)
        for s in range(spec.subjects)
        for g in range(spec.gestures)
        for r in range(spec.repetitions)
    ]
    return DatasetIndex(records)
