"""Desk-scale noise on profile vectors and rank-order recovery.

The storage channel returns a possibly perturbed count histogram; rank
readout survives any noise that never lets two counts cross.  The two noise
models here are deliberately simple knobs (uniform additive shifts and
per-read drops), each fully determined by an explicit seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Sequence, Union

from .core import ProfileVector, RankPermutation, TieError, rank_of


@dataclass(frozen=True)
class AdditiveNoise:
    """Each count moves by a uniform integer in [-magnitude, magnitude]."""

    magnitude: int

    def apply(self, counts: Sequence[int], rng: random.Random) -> list[int]:
        m = self.magnitude
        if m < 0:
            raise ValueError("magnitude must be nonnegative")
        return [max(0, c + rng.randint(-m, m)) for c in counts]

    def label(self) -> str:
        return f"additive:{self.magnitude}"


@dataclass(frozen=True)
class DropNoise:
    """Each counted read is independently lost with the given rate."""

    rate: float

    def apply(self, counts: Sequence[int], rng: random.Random) -> list[int]:
        if not 0.0 <= self.rate <= 1.0:
            raise ValueError("rate must lie in [0, 1]")
        out = []
        for c in counts:
            kept = sum(1 for _ in range(c) if rng.random() >= self.rate)
            out.append(kept)
        return out

    def label(self) -> str:
        return f"drop:{self.rate}"


NoiseModel = Union[AdditiveNoise, DropNoise]


def perturb(p: ProfileVector, model: NoiseModel, seed: int) -> ProfileVector:
    rng = random.Random(seed)
    return ProfileVector(p.params, tuple(model.apply(p.counts, rng)))


@dataclass(frozen=True)
class TieFailure:
    """Rank readout failed: these word groups share a count."""

    groups: tuple[tuple, ...]


def rank_decode(p: ProfileVector) -> RankPermutation | TieFailure:
    """Rank order of the counts, or the collisions preventing one."""
    try:
        return rank_of(p)
    except TieError as err:
        return TieFailure(err.groups)


@dataclass(frozen=True)
class TrialRow:
    noise: str
    trials: int
    successes: int
    ties: int
    rank_errors: int

    def to_text(self) -> str:
        return "\t".join(
            str(v)
            for v in (self.noise, self.trials, self.successes, self.ties, self.rank_errors)
        )


def _trial_block(args) -> tuple[int, int, int]:
    p, model, seed, mi, lo, hi = args
    clean = rank_of(p)
    successes = ties = errors = 0
    for trial in range(lo, hi):
        noisy = perturb(p, model, seed=(seed * 1_000_003 + mi) * 1_000_003 + trial)
        got = rank_decode(noisy)
        if isinstance(got, TieFailure):
            ties += 1
        elif got == clean:
            successes += 1
        else:
            errors += 1
    return successes, ties, errors


def simulate(
    p: ProfileVector,
    models: Sequence[NoiseModel],
    trials: int,
    seed: int,
    jobs: int | None = None,
) -> list[TrialRow]:
    """Monte-Carlo recovery sweep.

    Trial k of model m draws from a generator seeded by (master seed, m, k),
    so results are reproducible and independent of how trials are split
    across workers.
    """
    rank_of(p)  # fail fast on a tied clean profile
    jobs = jobs or 1
    rows = []
    for mi, model in enumerate(models):
        if jobs <= 1:
            parts = [_trial_block((p, model, seed, mi, 0, trials))]
        else:
            chunk = -(-trials // jobs)
            args = [
                (p, model, seed, mi, lo, min(lo + chunk, trials))
                for lo in range(0, trials, chunk)
            ]
            with get_context("fork").Pool(jobs) as pool:
                parts = pool.map(_trial_block, args)
        successes = sum(x[0] for x in parts)
        ties = sum(x[1] for x in parts)
        errors = sum(x[2] for x in parts)
        rows.append(TrialRow(model.label(), trials, successes, ties, errors))
    return rows
