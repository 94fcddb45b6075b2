"""
Experiment Module.

Seeded trial harness: draws random hidden states, runs the learner on each
and aggregates failure counts, copy counts and timings per qubit count.

Every trial (n, i) owns two generators derived from
SeedSequence(entropy=seed, spawn_key=(n, i)): the first draws the hidden
state, the second drives the simulated measurements. Results therefore do
not depend on how trials are spread over worker processes.
"""
import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from scipy import stats

from .. import config
from ..access.access_manager import initialize_access
from ..errors import CapacityError, DomainError
from ..simulation.tableau import random_state, same_state
from .learner import learn, spanning_failure_probability

logger = logging.getLogger(__name__)

EXPERIMENT_COLUMNS = ('n', 'trials', 'failures', 'failure_rate', 'bound_2^-n',
                      'exact_failure_prob', 'mean_copies_on_success', 'mean_duration_seconds')
BENCH_COLUMNS = ('n', 'trials', 'mean_seconds', 'ratio_to_previous')


def trial_streams(seed: int, n: int, trial: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """(state_rng, access_rng) for trial number `trial` at n qubits."""
    state_seq, access_seq = np.random.SeedSequence(entropy=seed, spawn_key=(n, trial)).spawn(2)
    return np.random.default_rng(state_seq), np.random.default_rng(access_seq)


@dataclass
class ExperimentConfig:
    """Parameters of one `experiment` run."""

    n_min: int
    n_max: int
    trials: int
    seed: int = config.DEFAULT_SEED
    backend: str = config.DEFAULT_BACKEND
    output_path: Optional[str] = None
    jobs: int = 1
    timing: bool = True

    def validate(self) -> None:
        """
        Raises:
            DomainError: On an empty qubit range, trials < 1, jobs < 1 or an
                unknown backend
            CapacityError: If the dense backend is asked for n_max > its cap
        """
        if self.n_min < 1:
            raise DomainError(f"n_min must be >= 1, got {self.n_min}")
        if self.n_max < self.n_min:
            raise DomainError(f"n_max ({self.n_max}) must be >= n_min ({self.n_min})")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.jobs < 1:
            raise DomainError(f"jobs must be >= 1, got {self.jobs}")
        if self.backend not in config.BACKENDS:
            raise DomainError(f"unknown backend {self.backend!r}")
        if self.backend == 'dense' and self.n_max > config.DENSE_BACKEND_MAX_QUBITS:
            raise CapacityError(self.n_max, config.DENSE_BACKEND_MAX_QUBITS, "dense backend")


@dataclass
class SizeSummary:
    """Counts and sums for all trials at one qubit count."""

    n: int
    trials: int = 0
    failures: int = 0
    copies_on_success: int = 0
    duration_seconds: float = 0.0
    mismatches: int = 0

    def merge(self, other: 'SizeSummary') -> 'SizeSummary':
        return SizeSummary(
            self.n,
            self.trials + other.trials,
            self.failures + other.failures,
            self.copies_on_success + other.copies_on_success,
            self.duration_seconds + other.duration_seconds,
            self.mismatches + other.mismatches,
        )

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials if self.trials else math.nan

    @property
    def mean_copies_on_success(self) -> float:
        successes = self.trials - self.failures
        return self.copies_on_success / successes if successes else math.nan

    @property
    def mean_duration_seconds(self) -> float:
        return self.duration_seconds / self.trials if self.trials else math.nan

    def row(self) -> List[str]:
        return [
            str(self.n),
            str(self.trials),
            str(self.failures),
            format_float(self.failure_rate),
            format_float(2.0 ** -self.n),
            format_float(spanning_failure_probability(self.n, 2 * self.n)),
            format_float(self.mean_copies_on_success),
            format_float(self.mean_duration_seconds),
        ]


def format_float(value: float) -> str:
    return 'nan' if math.isnan(value) else f"{value:.10g}"


def run_trial(n: int, trial: int, seed: int, backend: str, timing: bool = True) -> SizeSummary:
    """Learn one random hidden state and check the answer against it."""
    state_rng, access_rng = trial_streams(seed, n, trial)
    truth = random_state(n, state_rng)
    report = learn(initialize_access(truth, backend, access_rng))
    summary = SizeSummary(n, trials=1, duration_seconds=report.duration_seconds if timing else 0.0)
    if not report.success:
        summary.failures = 1
    else:
        summary.copies_on_success = report.copies_used
        if not same_state(report.tableau, truth):
            logger.error("n=%d trial %d: learned state differs from the hidden state", n, trial)
            summary.mismatches = 1
    return summary


def _run_chunk(args: Tuple[int, Sequence[int], int, str, bool]) -> SizeSummary:
    n, trials, seed, backend, timing = args
    total = SizeSummary(n)
    for trial in trials:
        total = total.merge(run_trial(n, trial, seed, backend, timing))
    return total


def _chunks(count: int, parts: int) -> List[range]:
    bounds = np.linspace(0, count, min(parts, count) + 1).astype(int)
    return [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def run_experiment(cfg: ExperimentConfig) -> List[SizeSummary]:
    """Run cfg.trials learning trials for every n in [n_min, n_max]."""
    cfg.validate()
    summaries = []
    executor = ProcessPoolExecutor(max_workers=cfg.jobs) if cfg.jobs > 1 else None
    try:
        for n in range(cfg.n_min, cfg.n_max + 1):
            work = [(n, chunk, cfg.seed, cfg.backend, cfg.timing)
                    for chunk in _chunks(cfg.trials, 4 * cfg.jobs)]
            results = executor.map(_run_chunk, work) if executor else map(_run_chunk, work)
            total = SizeSummary(n)
            for part in results:
                total = total.merge(part)
            logger.info("n=%d: %d/%d failures", n, total.failures, total.trials)
            summaries.append(total)
    finally:
        if executor is not None:
            executor.shutdown()
    return summaries


def write_csv(rows: Iterable[Sequence[str]], columns: Sequence[str], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    writer.writerows(rows)


# ----------------------------------------------------------------------
# Benchmark
# ----------------------------------------------------------------------

@dataclass
class BenchRow:
    n: int
    trials: int
    mean_seconds: float
    ratio_to_previous: float = math.nan

    def row(self) -> List[str]:
        return [str(self.n), str(self.trials), format_float(self.mean_seconds),
                format_float(self.ratio_to_previous)]


def run_bench(sizes: Sequence[int], trials: int, seed: int) -> List[BenchRow]:
    """Mean wall-clock time of learn() on the coset backend for every size."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    rows = []
    for n in sizes:
        if n < 1:
            raise DomainError(f"bench sizes must be >= 1, got {n}")
        elapsed = 0.0
        for trial in range(trials):
            state_rng, access_rng = trial_streams(seed, n, trial)
            access = initialize_access(random_state(n, state_rng), 'coset', access_rng)
            start = time.perf_counter()
            learn(access)
            elapsed += time.perf_counter() - start
        row = BenchRow(n, trials, elapsed / trials)
        if rows:
            row.ratio_to_previous = row.mean_seconds / rows[-1].mean_seconds
        logger.info("bench n=%d: %.4f s", n, row.mean_seconds)
        rows.append(row)
    return rows


def fitted_exponent(rows: Sequence[BenchRow]) -> float:
    """Slope of log(mean_seconds) against log(n); nan with fewer than two sizes."""
    if len(rows) < 2:
        return math.nan
    fit = stats.linregress(np.log([r.n for r in rows]), np.log([r.mean_seconds for r in rows]))
    return float(fit.slope)
