import json

import numpy as np
import pytest

from projclust import cli_main
from projclust.models import PointSet
from projclust.utils.instances import load_csv, save_csv


def run(*argv):
    return cli_main(list(argv), config_class='testing')


def read_json(path):
    return json.loads(path.read_text())


@pytest.fixture
def points_csv(tmp_path, random_points):
    path = tmp_path / 'points.csv'
    save_csv(random_points(12, 4), path)
    return path


@pytest.fixture
def star_csv(tmp_path):
    path = tmp_path / 'star.csv'
    assert run('gen', '--kind', 'star-identity', '--size', '10', '--output', str(path)) == 0
    return path


def test_help(capsys):
    assert run('--help') == 0
    assert 'experiment' in capsys.readouterr().out


def test_version(capsys):
    assert run('--version') == 0
    out = capsys.readouterr().out
    assert 'v1.0.0' in out and 'Build' in out


def test_unknown_flag():
    assert run('mst', '--frobnicate') == 1


def test_missing_input():
    assert run('mst') == 1


def test_bad_csv(tmp_path, capsys):
    path = tmp_path / 'bad.csv'
    path.write_text('1,2\n3\n')
    assert run('mst', '--input', str(path)) == 1
    assert 'line 2' in capsys.readouterr().err


def test_gen_writes_csv(star_csv):
    ps = load_csv(star_csv)
    assert (ps.n, ps.m) == (11, 10)


def test_gen_json(capsys):
    assert run('gen', '--kind', 'comb', '--size', '2') == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload['n'] == 8
    assert payload['reference_cost'] == pytest.approx(4.5)
    assert len(payload['points']) == 8


def test_gen_bad_param():
    assert run('gen', '--kind', 'walk', '--size', '5', '--param', 'scale') == 1


def test_mst_of_star(star_csv, tmp_path):
    out = tmp_path / 'mst.json'
    assert run('mst', '--input', str(star_csv), '--output', str(out)) == 0
    payload = read_json(out)
    assert payload['cost'] == pytest.approx(10.0)
    assert len(payload['tree']['edges']) == 10
    assert 'deterministic_digest' in payload


def test_mst_csv(star_csv, capsys):
    assert run('mst', '--input', str(star_csv), '--format', 'csv') == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == 'u,v,length'
    assert len(lines) == 11


def test_mst_projected(points_csv, tmp_path):
    out = tmp_path / 'mst.json'
    assert run('mst', '--input', str(points_csv), '--project', '3', '--seed', '5', '--output', str(out)) == 0
    payload = read_json(out)
    assert payload['projection'] == {'d': 3, 'seed': 5}
    assert payload['ratio'] >= 1.0 - 1e-12


def test_fl_projected_is_reproducible(points_csv, tmp_path):
    outputs = []
    for name in ('a.json', 'b.json'):
        out = tmp_path / name
        assert run('fl', '--input', str(points_csv), '--project', '5', '--seed', '7', '--output', str(out)) == 0
        outputs.append(out.read_text())
    assert outputs[0] == outputs[1]
    payload = json.loads(outputs[0])
    assert payload['locally_optimal'] is True
    assert payload['ratio'] > 0


def test_fl_budget_out_of_range(points_csv):
    assert run('fl', '--input', str(points_csv), '--budget', '50') == 1


def test_radii(points_csv, tmp_path):
    out = tmp_path / 'radii.json'
    assert run('radii', '--input', str(points_csv), '--squared', '--output', str(out)) == 0
    payload = read_json(out)
    assert len(payload['profile']['radii']) == 12
    assert payload['cost_estimate'] > 0


def test_doubling(points_csv, tmp_path):
    out = tmp_path / 'doubling.json'
    assert run('doubling', '--input', str(points_csv), '--centers', '4', '--output', str(out)) == 0
    assert read_json(out)['estimate']['lambda_hat'] >= 1


def test_optimum(points_csv, tmp_path):
    out = tmp_path / 'opt.json'
    assert run('optimum', '--input', str(points_csv), '--output', str(out)) == 0
    assert read_json(out)['solution']['total'] > 0


def test_optimum_size_guard(tmp_path, random_points):
    path = tmp_path / 'big.csv'
    save_csv(random_points(30, 2), path)
    assert run('optimum', '--input', str(path)) == 2
    assert run('optimum', '--tree', '--input', str(path)) == 2


def test_optimum_tree_on_single_point(tmp_path, capsys):
    path = tmp_path / 'one.csv'
    save_csv(PointSet(np.zeros((1, 3))), path)
    assert run('optimum', '--tree', '--input', str(path)) == 0
    assert json.loads(capsys.readouterr().out)['cost'] == 0.0


def test_doubling_csv(points_csv, capsys):
    assert run('doubling', '--input', str(points_csv), '--centers', '4', '--format', 'csv') == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == 'lambda_hat,ddim_hat,centers_probed,scales_probed'
    assert len(lines) == 2


def test_optimum_csv(points_csv, capsys):
    assert run('optimum', '--input', str(points_csv), '--format', 'csv') == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == 'facility'
    assert len(lines) >= 2


class TestExperimentCommands:
    def test_ratio_sweep(self, tmp_path):
        out = tmp_path / 'sweep.json'
        assert run('experiment', 'ratio-sweep', '--kind', 'prefix-gauss', '--size', '20',
                   '--d-values', '4,8', '--trials', '2', '--output', str(out)) == 0
        report = read_json(out)
        assert report['kind'] == 'ratio-sweep'
        assert len(report['records']) == 4
        assert report['metadata']['seeds'] == [r['seed'] for r in report['records']]

    def test_ratio_sweep_csv(self, points_csv, capsys):
        assert run('experiment', 'ratio-sweep', '--input', str(points_csv), '--task', 'fl',
                   '--d-values', '2..3', '--trials', '1', '--format', 'csv') == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith('dataset,d,trial,seed,ratio')
        assert len(lines) == 3

    def test_ratio_sweep_needs_data(self):
        assert run('experiment', 'ratio-sweep', '--trials', '1') == 1

    def test_ratio_sweep_rejects_descending_dimensions(self, points_csv):
        assert run('experiment', 'ratio-sweep', '--input', str(points_csv), '--d-values', '10,5') == 1

    def test_squared_mst_is_rejected(self, points_csv):
        assert run('experiment', 'ratio-sweep', '--input', str(points_csv), '--squared') == 1

    def test_doubling_compare(self, tmp_path):
        out = tmp_path / 'compare.json'
        assert run('experiment', 'doubling-compare', '--size', '15', '--d-values', '5',
                   '--trials', '1', '--centers', '4', '--output', str(out)) == 0
        report = read_json(out)
        assert set(report['summary']['datasets']) == {'prefix-gauss', 'axis-gauss'}

    def test_counterexample(self, tmp_path):
        out = tmp_path / 'walk.json'
        assert run('experiment', 'counterexample', '--kind', 'walk', '--size', '10', '--trials', '2',
                   '--param', 'scale=3', '--output', str(out)) == 0
        report = read_json(out)
        assert report['summary']['reference_cost'] == 10.0
        assert report['config']['params'] == {'scale': 3.0}

    def test_counterexample_digest_is_stable(self, tmp_path):
        digests = []
        for name in ('a.json', 'b.json'):
            out = tmp_path / name
            assert run('experiment', 'counterexample', '--kind', 'mst-star', '--size', '20',
                       '--trials', '2', '--output', str(out)) == 0
            digests.append(read_json(out)['deterministic_digest'])
        assert digests[0] == digests[1]
