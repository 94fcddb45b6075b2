"""
Tests for the bell_learning command-line harness: exit statuses and the
files each command writes.
"""
import csv
import json

import numpy as np
import pytest

from bell_learning import main
from src.learning.experiment import EXPERIMENT_COLUMNS
from src.simulation.tableau import StabilizerTableau, canonical_form, random_state


@pytest.fixture
def state_file(tmp_path):
    path = tmp_path / 'state.txt'
    assert main(['gen', '--n', '4', '--seed', '5', '--out', str(path)]) == 0
    return path


# ═══════════════════════════════════════════════════════════════════
# gen / verify
# ═══════════════════════════════════════════════════════════════════


class TestGen:

    def test_writes_valid_tableau(self, state_file):
        t = StabilizerTableau.from_text(state_file.read_text())
        assert t.n == 4
        assert t == random_state(4, np.random.default_rng(5))

    def test_stdout(self, capsys):
        assert main(['gen', '--n', '2', '--seed', '1']) == 0
        assert capsys.readouterr().out.startswith('n=2\n')

    def test_bad_n(self):
        assert main(['gen', '--n', '0']) == 2


class TestVerify:

    def test_same_file(self, state_file):
        assert main(['verify', str(state_file), str(state_file)]) == 0

    def test_equivalent_generators(self, state_file, tmp_path):
        other = tmp_path / 'canonical.txt'
        t = StabilizerTableau.from_text(state_file.read_text())
        other.write_text(canonical_form(t).to_text())
        assert main(['verify', str(state_file), str(other)]) == 0

    def test_zero_state_against_other_generators(self, tmp_path):
        first, second = tmp_path / 'zero.txt', tmp_path / 'zz.txt'
        first.write_text('n=2\n+ZI\n+IZ\n')
        second.write_text('n=2\n+ZZ\n+ZI\n')
        assert main(['verify', str(first), str(second)]) == 0

    def test_zero_against_plus(self, tmp_path):
        first, second = tmp_path / 'zero.txt', tmp_path / 'plus.txt'
        first.write_text('n=1\n+Z\n')
        second.write_text('n=1\n+X\n')
        assert main(['verify', str(first), str(second)]) == 1

    def test_different_states(self, state_file, tmp_path, capsys):
        other = tmp_path / 'other.txt'
        assert main(['gen', '--n', '4', '--seed', '6', '--out', str(other)]) == 0
        assert main(['verify', str(state_file), str(other)]) == 1
        assert '# canonical form of' in capsys.readouterr().out

    def test_missing_file(self, state_file, tmp_path):
        assert main(['verify', str(state_file), str(tmp_path / 'nope.txt')]) == 3

    def test_malformed_file(self, state_file, tmp_path, capsys):
        bad = tmp_path / 'bad.txt'
        bad.write_text('n=2\n+XI\n+ZI\n')
        assert main(['verify', str(state_file), str(bad)]) == 3
        assert 'line 3: generators 0 and 1 anticommute' in capsys.readouterr().err


# ═══════════════════════════════════════════════════════════════════
# learn
# ═══════════════════════════════════════════════════════════════════


class TestLearnCommand:

    def test_learns_file(self, state_file, tmp_path):
        report = tmp_path / 'report.json'
        code = main(['learn', str(state_file), '--retry', '40', '--out', str(report)])
        record = json.loads(report.read_text())
        assert code == 0
        assert record['success'] and record['matches_truth']
        assert record['copies_used'] == 18 * (record['attempts'] - 1) + 22

    def test_random_state_without_timing(self, capsys):
        code = main(['learn', '--random', '3', '--seed', '2', '--retry', '40', '--no-timing'])
        record = json.loads(capsys.readouterr().out)
        assert code == 0
        assert record['duration_seconds'] == 0.0
        assert record['n'] == 3

    def test_single_attempt_status(self, capsys):
        code = main(['learn', '--random', '1', '--seed', '0', '--no-timing'])
        record = json.loads(capsys.readouterr().out)
        assert code == (0 if record['success'] else 1)
        assert record['copies_used'] == (7 if record['success'] else 6)

    @pytest.mark.parametrize('argv', [
        ['learn', '--random', '0'],
        ['learn', '--random', '6', '--backend', 'dense'],
        ['learn', '--random', '2', '--retry', '0'],
    ])
    def test_usage_errors(self, argv):
        assert main(argv) == 2

    def test_copy_budget_is_a_failure(self):
        assert main(['learn', '--random', '2', '--max-copies', '3']) == 1

    def test_missing_file(self, tmp_path):
        assert main(['learn', str(tmp_path / 'nope.txt')]) == 3

    @pytest.mark.parametrize('argv', [
        ['learn'],
        ['learn', 'state.txt', '--random', '3'],
        ['learn', '--random', '2', '--backend', 'qpu'],
        ['teleport'],
    ])
    def test_argparse_errors(self, argv):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2


# ═══════════════════════════════════════════════════════════════════
# experiment / bench
# ═══════════════════════════════════════════════════════════════════


class TestExperimentCommand:

    def test_writes_csv(self, tmp_path):
        out = tmp_path / 'exp.csv'
        argv = ['experiment', '--n-min', '1', '--n-max', '3', '--trials', '6', '--no-timing', '--out', str(out)]
        assert main(argv) == 0
        with open(out, newline='') as f:
            rows = list(csv.reader(f))
        assert tuple(rows[0]) == EXPERIMENT_COLUMNS
        assert [row[0] for row in rows[1:]] == ['1', '2', '3']

    def test_byte_identical_reruns(self, tmp_path):
        paths = [tmp_path / 'a.csv', tmp_path / 'b.csv']
        for path in paths:
            main(['experiment', '--n-min', '2', '--n-max', '3', '--trials', '5', '--seed', '11',
                  '--no-timing', '--out', str(path)])
        assert paths[0].read_bytes() == paths[1].read_bytes()

    @pytest.mark.parametrize('argv', [
        ['experiment', '--n-min', '3', '--n-max', '2', '--trials', '1'],
        ['experiment', '--n-min', '1', '--n-max', '6', '--trials', '1', '--backend', 'dense'],
        ['experiment', '--n-min', '1', '--n-max', '2', '--trials', '1', '--jobs', '0'],
    ])
    def test_usage_errors(self, argv):
        assert main(argv) == 2


class TestBenchCommand:

    def test_writes_csv(self, tmp_path):
        out = tmp_path / 'bench.csv'
        assert main(['bench', '--sizes', '4,8', '--trials', '1', '--out', str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == 'n,trials,mean_seconds,ratio_to_previous'
        assert len(lines) == 3

    def test_bad_sizes(self):
        with pytest.raises(SystemExit):
            main(['bench', '--sizes', '4,x'])
