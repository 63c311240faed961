import logging

import pytest
import traitlets

from .. import registry as registry_module
from ..problems import IaeProblem, ProblemError
from ..registry import ProblemRegistry
from .conftest import not_a_problem


def test_builtins(registry):
    assert {"ex1", "ex2", "ex3"} <= set(registry.keys)
    assert isinstance(registry.get("ex2"), IaeProblem)


def test_no_autodetect():
    """the built-in examples resolve without installed entry points"""
    registry = ProblemRegistry(autodetect=False)
    assert registry.keys == ["ex1", "ex2", "ex3"]


def test_unknown(registry):
    with pytest.raises(ProblemError, match="unknown problem `ex9`"):
        registry.get("ex9")


def test_extra_problems():
    registry = ProblemRegistry(
        autodetect=False,
        extra_problems=["iae_dg.tests.conftest.polynomial_iae"],
    )
    assert "polynomial" in registry.keys


def test_extra_problem_not_a_problem(caplog):
    caplog.set_level(logging.WARNING)
    registry = ProblemRegistry(
        autodetect=False, extra_problems=["iae_dg.tests.conftest.not_a_problem"]
    )
    registry.initialize()
    assert "nope" not in registry.problems
    assert "not a problem" in caplog.text


def test_extra_problem_fails(caplog):
    def broken():
        raise RuntimeError("no data today")

    caplog.set_level(logging.WARNING)
    registry = ProblemRegistry(autodetect=False, extra_problems=[broken])
    assert registry.keys == ["ex1", "ex2", "ex3"]
    assert "no data today" in caplog.text


@pytest.mark.parametrize("extra", [["iae_dg.tests.nothing_here"], [1]])
def test_extra_problem_not_loadable(extra):
    with pytest.raises(traitlets.TraitError):
        ProblemRegistry(extra_problems=extra)


def test_broken_builtin(monkeypatch):
    """a built-in that fails validation is an error, not a warning"""

    def broken():
        raise ProblemError("ex2: exact solution misses the equations by 0.5")

    monkeypatch.setitem(registry_module.BUILTINS, "ex2", broken)
    with pytest.raises(ProblemError, match="built-in problem `ex2` is broken"):
        ProblemRegistry(autodetect=False).get("ex1")


def test_builtin_not_a_problem(monkeypatch):
    monkeypatch.setitem(registry_module.BUILTINS, "ex3", not_a_problem)
    with pytest.raises(ProblemError, match="built-in problem `ex3` returned"):
        ProblemRegistry(autodetect=False).initialize()
