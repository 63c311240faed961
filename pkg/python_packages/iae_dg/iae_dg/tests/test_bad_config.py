import pytest
import traitlets

from ..cli import ExperimentRunner
from ..trait_types import IntList, parse_int_list

GOOD = {
    "problem": "ex1",
    "m_list": [3],
    "N_list": [4, 8, 16],
    "mode": "global",
    "component": "1",
    "m1": None,
    "format": "csv",
}


@pytest.mark.parametrize(
    "overrides",
    [
        {"problem": ""},
        {"m_list": []},
        {"m_list": [0]},
        {"m_list": [9]},
        {"mode": "local"},
        {"component": "3"},
        {"format": "xlsx"},
        {"N_list": [4, 8]},
        {"N_list": [1, 2, 4]},
        # perturbed runs need an exponent, the others must not have one
        {"mode": "perturbed"},
        {"m1": 4.0},
        {"quad_points": 0},
    ],
)
def test_bad_config(overrides):
    with pytest.raises(traitlets.TraitError):
        ExperimentRunner(experiment={**GOOD, **overrides})


def test_missing_n_list():
    config = dict(GOOD)
    config.pop("N_list")
    with pytest.raises(traitlets.TraitError):
        ExperimentRunner(experiment=config)
    ExperimentRunner(experiment={**config, "mode": "identities"})


def test_good_config():
    assert ExperimentRunner(experiment=GOOD).experiment == GOOD
    ExperimentRunner(experiment={**GOOD, "mode": "perturbed", "m1": 4.5})


@pytest.mark.parametrize(
    "text, expected",
    [("3", [3]), ("3,4,5", [3, 4, 5]), ("1..4", [1, 2, 3, 4]), (" 2 .. 3 ", [2, 3])],
)
def test_int_list(text, expected):
    assert parse_int_list(text) == expected
    assert IntList().from_string(text) == expected


def test_bad_int_list():
    with pytest.raises(traitlets.TraitError):
        IntList().from_string("three")
