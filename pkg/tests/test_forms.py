import pytest

from projclust.forms import (parse_d_values, parse_params, validate_budget, validate_counterexample,
                             validate_d_values, validate_epsilon, validate_kind, validate_seed, validate_task,
                             validate_trials)


def test_parse_d_values():
    assert parse_d_values('5, 10,20') == (5, 10, 20)
    assert parse_d_values('2..5') == (2, 3, 4, 5)
    with pytest.raises(ValueError):
        parse_d_values('five')


@pytest.mark.parametrize('values, ok', [((5, 10), True), ((), False), ((0, 3), False), ((3, 3), False)])
def test_validate_d_values(values, ok):
    assert validate_d_values(values)[0] is ok


@pytest.mark.parametrize('validator, value, ok', [
    (validate_trials, 1, True),
    (validate_trials, 0, False),
    (validate_epsilon, 1.0, True),
    (validate_epsilon, 0.0, False),
    (validate_epsilon, float('nan'), False),
    (validate_seed, 0, True),
    (validate_seed, -1, False),
    (validate_seed, 2 ** 64, False),
    (validate_kind, 'comb', True),
    (validate_kind, 'spiral', False),
    (validate_counterexample, 'mst-grid', True),
    (validate_counterexample, 'comb', False),
    (validate_task, 'fl-squared', True),
    (validate_task, 'kmeans', False),
])
def test_validators(validator, value, ok):
    assert validator(value)[0] is ok


def test_validate_budget():
    assert validate_budget(None)[0]
    assert validate_budget(3, n=10)[0]
    assert not validate_budget(0)[0]
    assert not validate_budget(11, n=10)[0]


def test_parse_params():
    assert parse_params(['R=2.5', 'C=4', 'd=3']) == (True, {'R': 2.5, 'C': 4, 'd': 3})
    assert parse_params(None) == (True, {})
    ok, message = parse_params(['R'])
    assert not ok and 'key=value' in message
    assert not parse_params(['R=abc'])[0]
    assert not parse_params(['R=inf'])[0]
