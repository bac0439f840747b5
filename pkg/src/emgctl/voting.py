"""FIFO majority-vote smoothing of per-window class decisions, plus error models.

A FIFO of the last n predictions outputs any class holding a strict majority
of the entries present, and falls back to the newest prediction when nothing
does. Capacity must be odd so a full buffer cannot tie. A bigger buffer
reacts slower (a gesture change needs (n+1)/2 frames to win the vote), so
capacity trades response delay against reliability; the analytic error
models and the Monte Carlo simulator below quantify the reliability side.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .validation import check_odd, check_positive_int, check_probability


class FifoMemory:
    """Last-n class buffer with strict-majority aggregation.

    Single-owner mutable state: exactly one consumer should push. Before the
    buffer fills, the majority threshold is over the entries present, so the
    unit gives usable output from the very first frame.
    """

    def __init__(self, capacity: int = 5):
        self.capacity = check_odd("capacity", capacity)
        self._entries: deque[int] = deque(maxlen=self.capacity)
        self._counts: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> tuple[int, ...]:
        """Current contents, oldest first."""
        return tuple(self._entries)

    @property
    def full(self) -> bool:
        return len(self._entries) == self.capacity

    def majority(self) -> int | None:
        """Class held by strictly more than half of the present entries, if any."""
        present = len(self._entries)
        for cls, count in self._counts.items():
            if 2 * count > present:
                return cls
        return None

    def push(self, predicted: int) -> int:
        """Append a prediction (evicting the oldest at capacity) and decide.

        Returns the majority class when one exists, else the newest entry.
        """
        predicted = int(predicted)
        if len(self._entries) == self.capacity:
            oldest = self._entries[0]
            remaining = self._counts[oldest] - 1
            if remaining:
                self._counts[oldest] = remaining
            else:
                del self._counts[oldest]
        self._entries.append(predicted)
        self._counts[predicted] = self._counts.get(predicted, 0) + 1
        winner = self.majority()
        return winner if winner is not None else predicted

    def clear(self) -> None:
        self._entries.clear()
        self._counts.clear()


def push_and_aggregate(fifo: FifoMemory, predicted: int) -> int:
    return fifo.push(predicted)


def vote_error_lower_bound(rho: float, n: int) -> float:
    """rho^((n+1)/2): the chance that one specific half-plus-one of the buffer
    is all wrong. A lower bound on the exact majority error for every rho."""
    rho = check_probability("rho", rho)
    n = check_odd("n", n)
    return rho ** ((n + 1) // 2)


def exact_majority_error(rho: float, n: int) -> float:
    """Binomial tail: probability that >= (n+1)/2 of n iid frames are wrong,
    when every error lands on the same wrong class."""
    rho = check_probability("rho", rho)
    n = check_odd("n", n)
    need = (n + 1) // 2
    return float(
        sum(comb(n, k) * rho**k * (1.0 - rho) ** (n - k) for k in range(need, n + 1))
    )


@dataclass(frozen=True)
class ErrorModelParams:
    rho: float
    n: int = 5
    trials: int = 1_000_000
    seed: int = 0

    def __post_init__(self):
        check_probability("rho", self.rho)
        check_odd("n", self.n)
        check_positive_int("trials", self.trials)


def simulate_stream_error(model: ErrorModelParams) -> float:
    """Monte Carlo error rate of the aggregation unit on an iid two-class stream.

    Frame truth is class 0; each frame is independently misread as class 1
    with probability rho. The stream runs through a real FifoMemory and the
    first n outputs are discarded as warm-up. Deterministic per seed.
    """
    rng = np.random.default_rng(model.seed)
    if model.trials <= model.n:
        raise ValueError(f"trials must exceed the {model.n}-frame warm-up")
    frames = (rng.random(model.trials) < model.rho).astype(np.int64)
    fifo = FifoMemory(model.n)
    wrong = 0
    for i, cls in enumerate(frames):
        decided = fifo.push(int(cls))
        if i >= model.n and decided != 0:
            wrong += 1
    return wrong / (model.trials - model.n)


def sweep_error_report(
    rho: float,
    nmax: int,
    trials: int = 100_000,
    seed: int = 0,
) -> list[str]:
    """One line per odd capacity up to nmax:
    rho,<f>,n,<d>,power_bound,<f>,exact,<f>,monte_carlo,<f>,stderr,<f>"""
    check_odd("nmax", nmax)
    lines = []
    for n in range(1, nmax + 1, 2):
        bound = vote_error_lower_bound(rho, n)
        exact = exact_majority_error(rho, n)
        mc = simulate_stream_error(ErrorModelParams(rho=rho, n=n, trials=trials, seed=seed))
        measured = trials - n
        stderr = sqrt(mc * (1.0 - mc) / measured)
        lines.append(
            f"rho,{rho:.6f},n,{n},power_bound,{bound:.8f},exact,{exact:.8f},"
            f"monte_carlo,{mc:.8f},stderr,{stderr:.8f}"
        )
    return lines
