""" batch runner for convergence experiments, writing CSV and markdown tables
"""

import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Text, Tuple

import traitlets
from traitlets import Enum, Float, Int, Unicode, default
from traitlets.config import Application, LoggingConfigurable

from ._version import __version__
from .analysis import (
    AnalysisError,
    ConvergenceError,
    ConvergenceReport,
    ConvergenceStudy,
    check_n_list,
)
from .constants import DEFAULT_OUTPUT_DIR, ENV_OUTPUT_DIR
from .problems.utils import ProblemError
from .registry import ProblemRegistry
from .schema import EXPERIMENT_CONFIG, EXPERIMENT_RESULTS, REPORT_VERSION
from .solver import DgSolver
from .spectral import IdentityReport, build, verify_identities
from .trait_types import IntList, Schema
from .types import ErrorKind, ExperimentConfig, Mode

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

FORMATS = ("csv", "md")


def _error(value: float) -> Text:
    return "%.2E" % value


def _order(value: Optional[float]) -> Text:
    if value is None or not math.isfinite(value):
        return ""
    return "%.3f" % value


def emit_table(report: ConvergenceReport, format: Text = "csv") -> Text:
    """one row per mesh: N, error and the order against the previous mesh"""
    orders: List[Optional[float]] = [None, *report.orders]
    rows = [
        (str(N), _error(error), _order(order))
        for (N, error), order in zip(report.rows, orders)
    ]

    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["N", "error", "order"])
        writer.writerows(rows)
        return out.getvalue()

    if format == "md":
        lines = ["| N | error | order |", "| ---: | ---: | ---: |"]
        lines += ["| {} | {} | {} |".format(*row) for row in rows]
        lines += ["| Order |  | {} |".format(_order(report.final_order))]
        return "\n".join(lines) + "\n"

    raise ValueError(f"unknown table format {format!r}, expected one of {FORMATS}")


def emit_grid(reports: Sequence[ConvergenceReport]) -> Text:
    """markdown with one column per basis order, rows per mesh and a final
    Order row, for reports of the same problem, kind and component"""
    columns = sorted(reports, key=lambda report: report.m)
    N_list = sorted({N for report in columns for N, _ in report.rows})
    errors = [dict(report.rows) for report in columns]

    header = ["N"] + [f"m={report.m}" for report in columns]
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join(["---:"] * len(header)) + " |",
    ]
    for N in N_list:
        cells = [_error(row[N]) if N in row else "" for row in errors]
        lines.append("| " + " | ".join([str(N), *cells]) + " |")
    finals = [_order(report.final_order) for report in columns]
    lines.append("| " + " | ".join(["Order", *finals]) + " |")
    return "\n".join(lines) + "\n"


def emit_identities(report: IdentityReport, format: Text = "csv") -> Text:
    rows = [(name, _error(value)) for name, value in report.residuals.items()]
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["identity", "residual"])
        writer.writerows(rows)
        return out.getvalue()
    lines = ["| identity | residual |", "| --- | ---: |"]
    lines += ["| {} | {} |".format(*row) for row in rows]
    return "\n".join(lines) + "\n"


def parse_table(text: Text) -> List[Tuple[int, float, Optional[float]]]:
    """read back a CSV table written by ``emit_table``"""
    rows = []
    for record in csv.DictReader(io.StringIO(text)):
        order = record["order"]
        rows.append(
            (int(record["N"]), float(record["error"]), float(order) if order else None)
        )
    return rows


def parse_config_file(path: Path) -> List[Text]:
    """``key=value`` lines, with ``#`` comments, as command line arguments"""
    argv = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise traitlets.TraitError(f"{path}:{number}: expected key=value: {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        argv.append(f"--{key.lstrip('-')}={value}")
    return argv


def _write(path: Path, text: Text) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as out:
        out.write(text)


class ExperimentRunner(LoggingConfigurable):
    """Run one validated experiment config and write its tables"""

    experiment = Schema(
        validator=EXPERIMENT_CONFIG, help="the experiment to run"
    )  # type: ExperimentConfig

    def run(self) -> int:
        config = self.experiment
        mode = Mode(config["mode"])
        out = Path(config["output_dir"])
        ext = config["format"]

        if mode is Mode.IDENTITIES:
            return self.run_identities(config["m_list"], out, ext)

        registry = ProblemRegistry(parent=self)
        study = ConvergenceStudy(
            parent=self,
            solver=DgSolver(parent=self, quad_points=config.get("quad_points")),
        )
        problem = registry.get(config["problem"])
        component = config["component"]
        components = [1, 2] if component == "both" else [int(component)]

        reports: List[ConvergenceReport] = []
        try:
            for m in config["m_list"]:
                if mode is Mode.PERTURBED:
                    reports.append(
                        study.perturbation_study(
                            problem.first_kind(), m, config["m1"], config["N_list"]
                        )
                    )
                else:
                    reports += study.order_regressions(
                        problem, m, config["N_list"], ErrorKind(mode.value), components
                    )
        except ConvergenceError as err:
            self.log.error(
                "[iae-dg] solver failed for problem %s, m=%s, N=%s, step %s: %s",
                err.problem,
                err.m,
                err.N,
                err.step,
                err.cause,
            )
            return EXIT_FAILED

        stem = f"{config['problem']}_{mode.value}"
        for report in reports:
            name = f"{stem}_m{report.m}_x{report.component}.{ext}"
            _write(out / name, emit_table(report, ext))
            self.log.info("[iae-dg] wrote %s", out / name)

        if ext == "md":
            for component in sorted({report.component for report in reports}):
                grid = [report for report in reports if report.component == component]
                _write(out / f"{stem}_x{component}_summary.md", emit_grid(grid))

        self._write_results(out / f"{stem}.json", config, reports)
        return EXIT_OK

    def run_identities(self, m_list: Sequence[int], out: Path, ext: Text) -> int:
        status = EXIT_OK
        residuals: Dict[Text, Dict[Text, float]] = {}
        for m in m_list:
            report = verify_identities(build(m))
            residuals[str(m)] = report.residuals
            _write(out / f"identities_m{m}.{ext}", emit_identities(report, ext))
            if not report.ok:
                self.log.error(
                    "[iae-dg] m=%s: identities above %.0e: %s",
                    m,
                    report.tol,
                    ", ".join(report.failures),
                )
                status = EXIT_FAILED
        self._write_results(
            out / "identities.json", self.experiment, [], identities=residuals
        )
        return status

    def _write_results(self, path: Path, config, reports, identities=None) -> None:
        results = {
            "version": REPORT_VERSION,
            "config": config,
            "reports": [report.to_dict() for report in reports],
        }
        if identities is not None:
            results["identities"] = identities
        errors = list(EXPERIMENT_RESULTS.iter_errors(results))
        if errors:  # pragma: no cover
            self.log.warning(
                "[iae-dg] results do not match their schema:\n%s",
                "\n".join(error.message for error in errors),
            )
        _write(path, json.dumps(results, indent=2, sort_keys=True) + "\n")


def run(config: ExperimentConfig, **kwargs) -> int:
    """validate ``config``, run it and return the exit status"""
    try:
        if config.get("N_list") and config.get("mode") != Mode.IDENTITIES.value:
            check_n_list(config["N_list"])
        runner = ExperimentRunner(experiment=config, **kwargs)
    except (traitlets.TraitError, AnalysisError) as err:
        (kwargs.get("parent") or ExperimentRunner()).log.error(
            "[iae-dg] invalid experiment: %s", err
        )
        return EXIT_USAGE
    try:
        return runner.run()
    except ProblemError as err:
        runner.log.error("[iae-dg] %s", err)
        return EXIT_USAGE


class ExperimentApp(Application):
    """Reproduce convergence tables of the DG method for index-2 systems"""

    name = "iae-dg"
    version = __version__
    description = __doc__
    examples = """
    iae-dg --problem ex1 --m 3,4,5,6 --N 4,8,16,32 --mode global --component 1
    iae-dg --mode identities --m 1..8
    iae-dg --problem ex1 --mode perturbed --m 3 --m1 4 --format md
    """

    aliases = {
        "problem": "ExperimentApp.problem",
        "m": "ExperimentApp.m_list",
        "N": "ExperimentApp.n_list",
        "mode": "ExperimentApp.mode",
        "component": "ExperimentApp.component",
        "m1": "ExperimentApp.m1",
        "quad-points": "ExperimentApp.quad_points",
        "out": "ExperimentApp.output_dir",
        "format": "ExperimentApp.format",
        "config": "ExperimentApp.config_file",
        "workers": "ConvergenceStudy.max_workers",
        "log-level": "Application.log_level",
    }

    classes = [ExperimentRunner, ProblemRegistry, ConvergenceStudy, DgSolver]

    problem = Unicode("ex1", help="key of the problem to solve").tag(config=True)
    m_list = IntList([3, 4, 5, 6], help="basis orders, as 3,4,5 or 1..8").tag(
        config=True
    )
    n_list = IntList([4, 8, 16, 32], help="doubling interval counts").tag(config=True)
    mode = Enum(
        [mode.value for mode in Mode], "global", help="which experiment to run"
    ).tag(config=True)
    component = Enum(
        ["1", "2", "both"], "both", help="solution component to measure"
    ).tag(config=True)
    m1 = Float(None, allow_none=True, help="perturbation exponent").tag(config=True)
    quad_points = Int(
        None, allow_none=True, help="Gauss points per direction for moments"
    ).tag(config=True)
    output_dir = Unicode(
        help=f"""where tables are written.

        Its default value can be set with {ENV_OUTPUT_DIR} and falls back to
        '{DEFAULT_OUTPUT_DIR}'.
        """
    ).tag(config=True)
    format = Enum(list(FORMATS), "csv", help="table format").tag(config=True)
    config_file = Unicode(
        "", help="a file of key=value lines mirroring the flags"
    ).tag(config=True)

    @default("output_dir")
    def _default_output_dir(self):
        return os.getenv(ENV_OUTPUT_DIR, DEFAULT_OUTPUT_DIR)

    def initialize(self, argv=None):
        super().initialize(argv)
        if self.config_file:
            # flags given on the command line win over the file
            argv = sys.argv[1:] if argv is None else list(argv)
            self.parse_command_line(
                parse_config_file(Path(self.config_file)) + argv
            )

    def experiment_config(self) -> ExperimentConfig:
        return {
            "problem": self.problem,
            "m_list": list(self.m_list),
            "N_list": list(self.n_list),
            "mode": self.mode,
            "component": self.component,
            "m1": self.m1,
            "quad_points": self.quad_points,
            "output_dir": self.output_dir,
            "format": self.format,
        }

    def start(self):
        status = run(self.experiment_config(), parent=self)
        if status == EXIT_USAGE:
            self.print_help()
        self.exit(status)


main = launch_new_instance = ExperimentApp.launch_instance
