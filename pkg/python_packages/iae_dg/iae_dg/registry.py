""" A configurable registry of problems, discovered through entry points
"""

import sys
from typing import Dict, Iterator, List, Text, Tuple

# See compatibility note on `group` keyword in
# https://docs.python.org/3/library/importlib.metadata.html#entry-points
if sys.version_info < (3, 10):  # pragma: no cover
    from importlib_metadata import entry_points
else:  # pragma: no cover
    from importlib.metadata import entry_points

from traitlets import Bool
from traitlets import Dict as Dict_
from traitlets import List as List_
from traitlets.config import LoggingConfigurable

from .constants import EP_PROBLEM_V1
from .problems import ex1, ex2, ex3
from .problems.utils import IaeProblem, ProblemError
from .trait_types import LoadableCallable

KeyedProblems = Dict[Text, IaeProblem]

BUILTINS = {"ex1": ex1, "ex2": ex2, "ex3": ex3}


class ProblemRegistry(LoggingConfigurable):
    """Find the problems the experiment runner can select by key"""

    autodetect: bool = Bool(  # type:ignore[assignment]
        True, help="load problems published under the iae_dg_problem_v1 entry point"
    ).tag(config=True)

    extra_problems = List_(  # type:ignore[var-annotated]
        trait=LoadableCallable,  # type:ignore[arg-type]
        help="dotted paths of callables returning an IaeProblem",
    ).tag(config=True)

    problems: KeyedProblems = Dict_(  # type:ignore[assignment]
        default_value={}, help="problems keyed by their key"
    )

    def __init__(self, **kwargs):
        self._ready = False
        super().__init__(**kwargs)

    def initialize(self) -> "ProblemRegistry":
        problems: KeyedProblems = {}

        # built-ins resolve even when the distribution is not installed
        for name, maker in BUILTINS.items():
            problems[name] = self._make_builtin(name, maker)

        if self.autodetect:
            problems.update(self._autodetect_problems())

        for maker in self.extra_problems:
            name = getattr(maker, "__name__", repr(maker))
            for key, problem in self._make(name, maker):
                problems[key] = problem

        self.problems = problems
        self._ready = True
        return self

    @property
    def keys(self) -> List[Text]:
        if not self._ready:
            self.initialize()
        return sorted(self.problems)

    def get(self, key: Text) -> IaeProblem:
        if not self._ready:
            self.initialize()
        try:
            return self.problems[key]
        except KeyError:
            raise ProblemError(
                "unknown problem `{}`, known: {}".format(key, ", ".join(self.keys))
            ) from None

    def _make_builtin(self, name: Text, maker) -> IaeProblem:
        """a built-in that fails to build is a bug in this package"""
        try:
            problem = maker()
        except ProblemError as err:
            raise ProblemError(f"built-in problem `{name}` is broken: {err}") from err
        if not isinstance(problem, IaeProblem) or problem.key != name:
            raise ProblemError(f"built-in problem `{name}` returned {problem!r}")
        return problem

    def _make(self, name: Text, maker) -> Iterator[Tuple[Text, IaeProblem]]:
        try:
            problem = maker()
        except Exception as err:
            self.log.warning("[iae-dg] Failed to build problem `%s`: \n%s", name, err)
            return

        if not isinstance(problem, IaeProblem):
            self.log.warning(
                "[iae-dg] Problem finder `%s` returned %s, not a problem", name, problem
            )
            return

        yield problem.key, problem

    def _autodetect_problems(self) -> Iterator[Tuple[Text, IaeProblem]]:
        _entry_points = None

        try:
            _entry_points = entry_points(group=EP_PROBLEM_V1)
        except Exception:  # pragma: no cover
            self.log.exception("[iae-dg] Failed to load entry_points")

        for ep in _entry_points or []:
            try:
                maker = ep.load()
            except Exception as err:  # pragma: no cover
                self.log.warning(
                    "[iae-dg] Failed to load problem finder `%s`: \n%s", ep.name, err
                )
                continue

            yield from self._make(ep.name, maker)
