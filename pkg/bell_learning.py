"""
Bell Learning Application - Main Entry Point

Command-line harness around the Bell-sampling stabilizer learner.

Commands:
- gen         write a random stabilizer state in the tableau text format
- learn       learn one hidden state and write a JSON report
- experiment  run seeded trials over a range of qubit counts, write CSV
- verify      compare two tableau files up to the choice of generators
- bench       time learn() at large n on the coset backend, write CSV

Exit statuses: 0 success, 1 algorithmic failure, 2 usage error,
3 I/O or parse error.
"""
import argparse
import contextlib
import json
import logging
import sys
from typing import Iterator, List, Optional, TextIO

import numpy as np

from src import config
from src.access import initialize_access
from src.errors import (
    BellLearningError,
    CapacityError,
    DimensionError,
    DomainError,
    TableauParseError,
)
from src.learning import ExperimentConfig, learn, learn_with_retries, run_bench, run_experiment, trial_streams
from src.learning.experiment import BENCH_COLUMNS, EXPERIMENT_COLUMNS, fitted_exponent, write_csv
from src.simulation import StabilizerTableau, canonical_form, random_state, same_state

logger = logging.getLogger(__name__)


def banner(title: str) -> None:
    """Status header on stderr; stdout is reserved for reports."""
    print("=" * 50, file=sys.stderr)
    print(f"BELL LEARNING - {title}", file=sys.stderr)
    print("=" * 50, file=sys.stderr)


@contextlib.contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    """Write to `path`, or to stdout when it is None or '-'."""
    if path is None or path == '-':
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, 'w', encoding='utf-8', newline='') as stream:
            yield stream


def read_tableau(path: str) -> StabilizerTableau:
    with open(path, 'r', encoding='utf-8') as f:
        return StabilizerTableau.from_text(f.read())


def cmd_gen(args: argparse.Namespace) -> int:
    """Write random_state(n) for the given seed."""
    if args.n < 1:
        raise DomainError(f"--n must be >= 1, got {args.n}")
    tableau = random_state(args.n, np.random.default_rng(args.seed))
    with open_output(args.out) as out:
        out.write(tableau.to_text())
    logger.info("generated a %d-qubit state with seed %d", args.n, args.seed)
    return config.EXIT_OK


def cmd_learn(args: argparse.Namespace) -> int:
    """Learn one hidden state, from a file or drawn at random."""
    if args.state_file is not None:
        truth = read_tableau(args.state_file)
        _, access_rng = trial_streams(args.seed, truth.n, 0)
    else:
        if args.random < 1:
            raise DomainError(f"--random must be >= 1, got {args.random}")
        state_rng, access_rng = trial_streams(args.seed, args.random, 0)
        truth = random_state(args.random, state_rng)

    banner("Learn")
    print(f"Qubits: {truth.n}", file=sys.stderr)
    print(f"Backend: {args.backend}", file=sys.stderr)

    if args.retry < 1:
        raise DomainError(f"--retry must be >= 1, got {args.retry}")

    def make_access():
        return initialize_access(truth, args.backend, access_rng, args.max_copies)

    if args.retry > 1:
        report = learn_with_retries(make_access, args.retry)
    else:
        report = learn(make_access())

    matches = same_state(report.tableau, truth) if report.success else None
    record = report.to_record()
    if args.no_timing:
        record['duration_seconds'] = 0.0
    record['matches_truth'] = matches
    record['attempts'] = report.attempts
    with open_output(args.out) as out:
        json.dump(record, out, indent=2)
        out.write('\n')

    if not report.success:
        print(f"❌ Spanning failure: rank {report.basis_rank} < {truth.n}", file=sys.stderr)
        return config.EXIT_FAILURE
    if not matches:
        logger.error("learned state differs from the hidden state")
        return config.EXIT_FAILURE
    print(f"✅ Learned with {report.copies_used} copies", file=sys.stderr)
    return config.EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    """Seeded failure-rate experiment over a qubit range."""
    cfg = ExperimentConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        trials=args.trials,
        seed=args.seed,
        backend=args.backend,
        output_path=args.out,
        jobs=args.jobs,
        timing=not args.no_timing,
    )
    cfg.validate()

    banner("Experiment")
    print(f"Qubits: {cfg.n_min}..{cfg.n_max}  Trials: {cfg.trials}", file=sys.stderr)
    print(f"Backend: {cfg.backend}  Jobs: {cfg.jobs}  Seed: {cfg.seed}", file=sys.stderr)

    summaries = run_experiment(cfg)
    with open_output(cfg.output_path) as out:
        write_csv([s.row() for s in summaries], EXPERIMENT_COLUMNS, out)

    mismatches = sum(s.mismatches for s in summaries)
    if mismatches:
        print(f"❌ {mismatches} learned states differ from their hidden state", file=sys.stderr)
        return config.EXIT_FAILURE
    return config.EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Exit 0 iff both files describe the same state."""
    truth = read_tableau(args.true_file)
    learned = read_tableau(args.learned_file)
    if same_state(truth, learned):
        print("✅ Same state", file=sys.stderr)
        return config.EXIT_OK
    print("❌ States differ", file=sys.stderr)
    print(f"# canonical form of {args.true_file}")
    print(canonical_form(truth).to_text(), end='')
    print(f"# canonical form of {args.learned_file}")
    print(canonical_form(learned).to_text(), end='')
    return config.EXIT_FAILURE


def cmd_bench(args: argparse.Namespace) -> int:
    """Time learn() on the coset backend and fit the growth exponent."""
    banner("Bench")
    print(f"Sizes: {', '.join(str(n) for n in args.sizes)}  Trials: {args.trials}", file=sys.stderr)
    rows = run_bench(args.sizes, args.trials, args.seed)
    with open_output(args.out) as out:
        write_csv([r.row() for r in rows], BENCH_COLUMNS, out)
    print(f"Fitted exponent: {fitted_exponent(rows):.3f}", file=sys.stderr)
    return config.EXIT_OK


def parse_sizes(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bell_learning',
        description="Learn stabilizer states from Bell samples.",
    )
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="More log output on stderr (-v info, -vv debug)")
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help="Write a random stabilizer state")
    gen.add_argument('--n', type=int, required=True, help="Number of qubits")
    gen.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    gen.add_argument('--out', help="Output tableau file (default stdout)")
    gen.set_defaults(func=cmd_gen)

    lrn = sub.add_parser('learn', help="Learn one hidden state")
    source = lrn.add_mutually_exclusive_group(required=True)
    source.add_argument('state_file', nargs='?', help="Tableau file of the hidden state")
    source.add_argument('--random', type=int, metavar='N', help="Hide a random N-qubit state")
    lrn.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    lrn.add_argument('--backend', choices=config.BACKENDS, default=config.DEFAULT_BACKEND)
    lrn.add_argument('--retry', type=int, default=1, metavar='ATTEMPTS',
                     help="Retry on spanning failure, up to ATTEMPTS runs")
    lrn.add_argument('--max-copies', type=int, help="Copy budget per run")
    lrn.add_argument('--no-timing', action='store_true', help="Write 0.0 as duration")
    lrn.add_argument('--out', help="Output JSON report (default stdout)")
    lrn.set_defaults(func=cmd_learn)

    exp = sub.add_parser('experiment', help="Failure-rate experiment over a qubit range")
    exp.add_argument('--n-min', type=int, required=True)
    exp.add_argument('--n-max', type=int, required=True)
    exp.add_argument('--trials', type=int, required=True)
    exp.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    exp.add_argument('--backend', choices=config.BACKENDS, default=config.DEFAULT_BACKEND)
    exp.add_argument('--jobs', type=int, default=config.DEFAULT_JOBS)
    exp.add_argument('--no-timing', action='store_true', help="Write 0.0 as durations")
    exp.add_argument('--out', help="Output CSV (default stdout)")
    exp.set_defaults(func=cmd_experiment)

    ver = sub.add_parser('verify', help="Check that two tableau files are the same state")
    ver.add_argument('true_file')
    ver.add_argument('learned_file')
    ver.set_defaults(func=cmd_verify)

    bench = sub.add_parser('bench', help="Time learn() at large n")
    bench.add_argument('--sizes', type=parse_sizes, default=list(config.BENCH_SIZES),
                       help="Comma-separated qubit counts")
    bench.add_argument('--trials', type=int, default=3)
    bench.add_argument('--seed', type=int, default=config.DEFAULT_SEED)
    bench.add_argument('--out', help="Output CSV (default stdout)")
    bench.set_defaults(func=cmd_bench)

    return parser


def setup_logging(verbosity: int) -> None:
    level = {0: config.LOG_LEVEL, 1: 'INFO'}.get(verbosity, 'DEBUG')
    logging.basicConfig(level=level, format=config.LOG_FORMAT, stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and map errors to exit statuses."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.func(args)
    except TableauParseError as exc:
        print(f"❌ Parse error: {exc}", file=sys.stderr)
        return config.EXIT_IO
    except OSError as exc:
        print(f"❌ I/O error: {exc}", file=sys.stderr)
        return config.EXIT_IO
    except (DomainError, CapacityError, DimensionError) as exc:
        print(f"❌ Usage error: {exc}", file=sys.stderr)
        return config.EXIT_USAGE
    except BellLearningError as exc:
        print(f"❌ Error: {exc}", file=sys.stderr)
        return config.EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
