import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from pydantic import ValidationError

from cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, RunConfig, cli

DATA = Path(__file__).parent / 'data'


@pytest.fixture
def runner():
    return CliRunner()


def test_run_config_parses_range():
    config = RunConfig(command='gap-table', k_range='3..5')
    assert config.k_range == (3, 5)
    assert list(config.ks((2, 24))) == [3, 4, 5]
    assert list(RunConfig(command='certify', k=17).ks((16, 24))) == [17]
    assert list(RunConfig(command='certify').ks((16, 18))) == [16, 17, 18]


@pytest.mark.parametrize('values', [
    {'command': 'gap-table', 'k_range': '3-5'},
    {'command': 'gap-table', 'k_range': '5..3'},
    {'command': 'certify', 'k': 1},
    {'command': 'dense', 'tol': 0},
    {'command': 'dense', 'format': 'xml'},
])
def test_run_config_rejects(values):
    with pytest.raises(ValidationError):
        RunConfig(**values)


def test_verify_algebra(runner):
    result = runner.invoke(cli, ['verify-algebra'])
    assert result.exit_code == EXIT_OK
    assert '81/81 Clifford relations exact' in result.stdout
    assert '[PASS] S_0 S_1 ... S_8 = +I' in result.stdout
    assert '[FAIL]' not in result.stdout


def test_verify_algebra_json(runner):
    result = runner.invoke(cli, ['verify-algebra', '--json'])
    assert result.exit_code == EXIT_OK
    report = json.loads(result.stdout)
    assert report['status'] == 'success'
    assert report['failed'] == []


def test_verify_algebra_detects_corrupted_table(runner):
    result = runner.invoke(cli, ['verify-algebra', '--corrupt-sign', '1,2'])
    assert result.exit_code == EXIT_FAILED
    assert '[FAIL]' in result.stdout
    assert 'violated: S_' in result.stdout


@pytest.mark.parametrize('value', ['9,9', 'x'])
def test_verify_algebra_bad_corruption_argument(runner, value):
    result = runner.invoke(cli, ['verify-algebra', '--corrupt-sign', value])
    assert result.exit_code == EXIT_USAGE


def test_certify_k17(runner, tmp_path):
    result = runner.invoke(cli, ['certify', '--k', '17', '--format', 'json', '--output', str(tmp_path)])
    assert result.exit_code == EXIT_OK
    doc = json.loads(result.stdout)
    assert doc['verdict'] == 'not_sos'
    assert doc['certificate']['product_rhs'] == '-1/1'
    assert (tmp_path / 'certificate_k17.json').exists()


def test_certify_k16_text(runner, tmp_path):
    result = runner.invoke(cli, ['certify', '--k', '16', '--output', str(tmp_path)])
    assert result.exit_code == EXIT_OK
    assert result.stdout.startswith('k=16: sos')


def test_certify_writes_files(runner, tmp_path):
    result = runner.invoke(cli, ['certify', '--k-range', '16..17', '--output', str(tmp_path)])
    assert result.exit_code == EXIT_OK
    assert sorted(p.name for p in tmp_path.iterdir()) == ['certificate_k16.json', 'certificate_k17.json']


@pytest.mark.parametrize('args', [['--k', '5'], ['--k-range', '16..30'], ['--k-range', 'abc']])
def test_certify_usage_errors(runner, args):
    result = runner.invoke(cli, ['certify', *args])
    assert result.exit_code == EXIT_USAGE


def test_gap_table_csv(runner):
    result = runner.invoke(cli, ['gap-table', '--k-range', '16..17', '--format', 'csv'])
    assert result.exit_code == EXIT_OK
    lines = result.stdout.strip().splitlines()
    assert lines[0] == 'k,sos_min,gap,gap_gt_2,matches_closed_form'
    assert lines[1] == '16,-1/4,2/1,False,True'
    assert lines[2] == '17,-32/127,255/127,True,True'


def test_gap_table_output_file(runner, tmp_path):
    target = tmp_path / 'gap.json'
    result = runner.invoke(cli, ['gap-table', '--k-range', '2..3', '--format', 'json', '--output', str(target)])
    assert result.exit_code == EXIT_OK
    rows = json.loads(target.read_text())
    assert rows[0]['k'] == 2
    assert rows[0]['sos_min'] == '-1/11'


def test_gap_table_bad_range(runner):
    result = runner.invoke(cli, ['gap-table', '--k-range', '1..3'])
    assert result.exit_code == EXIT_USAGE


def test_dense_malformed_file(runner, tmp_path):
    form_file = tmp_path / 'bad.txt'
    form_file.write_text('1 2 0\n1 0 x\n')
    result = runner.invoke(cli, ['dense', str(form_file)])
    assert result.exit_code == EXIT_USAGE
    assert 'line 2' in result.stderr


def test_dense_needs_one_source(runner):
    assert runner.invoke(cli, ['dense']).exit_code == EXIT_USAGE
    assert runner.invoke(cli, ['dense', '--motzkin', str(DATA / 'forms' / 'sphere4.txt')]).exit_code == EXIT_USAGE
    assert runner.invoke(cli, ['dense', str(DATA / 'missing.txt')]).exit_code == EXIT_USAGE


def test_dense_stable_set(runner):
    result = runner.invoke(cli, ['dense', '--stable-set', str(DATA / 'graphs' / 'c5.txt'), '--format', 'json'])
    assert result.exit_code == EXIT_OK
    report = json.loads(result.stdout)
    assert report['alpha'] == 2
    assert report['min'] == pytest.approx(0.5, abs=1e-4)
    assert report['gap_lt_2'] is True


def test_dense_constant_form(runner):
    result = runner.invoke(cli, ['dense', '--stable-set', str(DATA / 'graphs' / 'k3.txt')])
    assert result.exit_code == EXIT_OK
    assert 'gap: None' in result.stdout


def test_convexity(runner):
    result = runner.invoke(cli, ['convexity', '--k', '2', '--samples', '3', '--pairs', '5', '--format', 'json'])
    assert result.exit_code == EXIT_OK
    report = json.loads(result.stdout)
    assert report['window_ok'] is True
    assert report['min_midpoint_slack'] >= 0
