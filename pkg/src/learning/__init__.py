"""
Learning package: the Bell-sampling learner and its seeded experiment harness.
"""
from .learner import (
    LearnReport,
    learn,
    learn_with_retries,
    spanning_failure_probability,
    spanning_success_probability,
)
from .experiment import ExperimentConfig, SizeSummary, run_bench, run_experiment, trial_streams

__all__ = [
    'LearnReport', 'learn', 'learn_with_retries', 'spanning_failure_probability',
    'spanning_success_probability', 'ExperimentConfig', 'SizeSummary', 'run_bench',
    'run_experiment', 'trial_streams',
]
