# coding=utf-8
"""Command line harness reproducing the error tables and experiment data.

Every subcommand accepts the family exponents and the grid axes; missing
values are taken from the ``legproj`` section of the configuration file and
then from :data:`legproj.constants.EXPERIMENT_DEFAULTS`. Exit codes are 0 on
success, 1 on usage, validation or I/O errors and 2 on numerical failures.
"""
import csv
import json
import logging
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

from plumbum import cli

from legproj import analysis
from legproj import constants
from legproj import estimator
from legproj import exceptions
from legproj import sampler
from legproj import testfam
from legproj import utils
from legproj.enums import Algorithm
from legproj.enums import Mode
from legproj.enums import OutputFormat
from legproj.enums import Target
from legproj.types import BoundConstants
from legproj.types import ErrorReport
from legproj.types import ExperimentConfig
from legproj.types import TestFamilyParams


logger = logging.getLogger(__name__)


def build_config(mode, nu1=None, nu2=None, n_list=None, m_list=None, **overrides):
    """Return an :class:`legproj.types.ExperimentConfig` merging switches and settings.

    Arguments left as ``None`` (or empty) fall back to the configured
    settings.
    """
    settings = utils.get_experiment_settings()
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value
    family = TestFamilyParams(
        nu1 if nu1 is not None else settings.get("nu1", 1),
        nu2 if nu2 is not None else settings.get("nu2", 2),
    )
    return ExperimentConfig(
        family=family,
        n_list=[int(n) for n in (n_list or settings["n_list"])],
        m_list=[int(m) for m in (m_list or settings["m_list"])],
        seed=int(settings["seed"]),
        replicates=int(settings["replicates"]),
        algorithm=Algorithm(int(settings["algorithm"])),
        output=OutputFormat(str(settings["format"]).lower()),
        mode=Mode(mode),
        max_m=int(settings["max_m"]),
        workers=int(settings["workers"]),
        block_size=int(settings["block_size"]),
    )


def cmd_exact(config):
    """Return the deterministic error rows of every ``n`` of the config.

    Each row carries the full-precision error and its table display form.
    """
    p = config.family
    rows = []
    for n in config.n_list:
        eps_g, eps_f = testfam.deterministic_errors(p, n)
        for target, value in ((Target.DENSITY, eps_g), (Target.DISTRIBUTION, eps_f)):
            rows.append(
                {
                    "nu1": p.nu1,
                    "nu2": p.nu2,
                    "n": n,
                    "target": target.value,
                    "eps_det": value,
                    "display": utils.format_table_value(value),
                }
            )
    return rows


def run_cell(job):
    """Run one grid cell and return its density and distribution reports.

    :param job: A ``(nu1, nu2, n, m, replicate, seed, algorithm, block_size)``
        tuple, kept flat so it pickles for worker processes.
    """
    nu1, nu2, n, m, replicate, seed, algorithm, block_size = job
    p = TestFamilyParams(nu1, nu2)
    cell_seed = utils.derive_cell_seed(seed, nu1, nu2, n, m, replicate)
    rng = sampler.RngStream(cell_seed, stream_id=0, block_size=block_size)
    N = utils.sample_size(m)
    logger.debug("Running cell n=%s, m=%s, replicate=%s with seed %s", n, m, replicate, cell_seed)
    est = estimator.run_algorithm(algorithm, p, n, N, rng)
    return estimator.estimate_error_vs_truth(est, p, m=m, replicate=replicate)


def cmd_table(config):
    """Run the whole ``(n, m)`` grid and return its reports.

    Reports come in ``(n, m, replicate)`` order, density before distribution,
    whatever the number of workers.
    """
    too_large = [m for m in config.m_list if m > config.max_m]
    if too_large:
        warnings.warn(
            "Sample size exponents {} exceed {} (N = 2 ** {}).".format(
                too_large, config.max_m, config.max_m + constants.SAMPLE_SIZE_OFFSET
            ),
            exceptions.SampleSizeWarning,
        )
    p = config.family
    jobs = [
        (p.nu1, p.nu2, n, m, replicate, config.seed, config.algorithm.value, config.block_size)
        for n in config.n_list
        for m in config.m_list
        for replicate in range(config.replicates)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(run_cell, jobs))
    else:
        results = [run_cell(job) for job in jobs]
    return [report for pair in results for report in pair]


def read_table(path):
    """Read reports back from a CSV written by the ``table`` command."""
    try:
        with open(path, encoding="utf-8", newline="") as handler:
            rows = list(csv.DictReader(handler))
    except OSError as err:
        raise exceptions.SampleFileError(path, err.strerror or str(err)) from err
    reports = []
    for row in rows:
        reports.append(
            ErrorReport(
                nu1=int(row["nu1"]),
                nu2=int(row["nu2"]),
                n=int(row["n"]),
                m=int(row["m"]) if row["m"] not in ("", "None") else None,
                N=int(row["N"]),
                target=Target(row["target"]),
                eps_det=float(row["eps_det"]),
                eps_stoch=float(row["eps_stoch"]),
                eps_total=float(row["eps_total"]),
                seed=int(row["seed"]) if row["seed"] not in ("", "None") else None,
                replicate=int(row["replicate"]),
            )
        )
    return reports


def _averaged_cells(reports, target):
    cells = {}
    for report in reports:
        if report.target is target:
            cells.setdefault((report.n, report.m, report.N), []).append(report.eps_total)
    return [(n, m, N, sum(values) / len(values)) for (n, m, N), values in sorted(cells.items())]


def cmd_fit(config, reports=None, target=Target.DENSITY):
    """Fit the bound constants to a grid and return them with both error surfaces.

    :param reports: Reports of a completed grid. The grid of ``config`` is run
        when omitted.
    :returns: A ``(constants, rows)`` tuple. Rows hold the computational and
        theoretical errors keyed by ``k = log2(n) - 2`` and ``m``.
    """
    target = Target(target)
    if reports is None:
        reports = cmd_table(config)
    cells = _averaged_cells(reports, target)
    s = config.family.smoothness
    fitted = analysis.fit_constants([(n, N, eps) for n, _, N, eps in cells], s, target=target)
    rows = [
        {
            "k": int(round(math.log2(n))) - 2,
            "m": m,
            "n": n,
            "N": N,
            "computational": eps,
            "theoretical": analysis.error_bound(fitted, n, N, target),
        }
        for n, m, N, eps in cells
    ]
    logger.debug("Fitted %s from %s cells", fitted, len(cells))
    return fitted, rows


def cmd_optimize(config, gamma, target=Target.DENSITY, c1=None, c2=None):
    """Return the conditionally optimal plan for accuracy ``gamma``.

    Constants not given fall back to those configured or published for the
    family; the smoothness is that of the family.
    """
    p = config.family
    if c1 is None or c2 is None:
        known = utils.get_bound_constants(p.nu1, p.nu2)
        if known is None:
            raise ValueError(
                "No bound constants known for family {}; pass --c1 and --c2.".format(p.key)
            )
        c1 = known[0] if c1 is None else c1
        c2 = known[1] if c2 is None else c2
    return analysis.optimize(BoundConstants(c1, c2, p.smoothness), gamma, target)


def cmd_sample(config, count, out_path):
    """Write ``count`` realizations of the configured family to ``out_path``."""
    if count < 1:
        raise exceptions.EmptySampleError("count must be at least 1, got {!r}.".format(count))
    rng = sampler.RngStream(config.seed, stream_id=0, block_size=config.block_size)
    batch = sampler.sample(config.family, rng, count)
    sampler.write_samples(batch, out_path)
    return batch


def cmd_estimate(config):
    """Run one estimate for the first ``n`` and ``m`` of the config.

    :returns: A ``(estimate, reports)`` tuple.
    """
    n, m = config.n_list[0], config.m_list[0]
    rng = sampler.RngStream(
        utils.derive_cell_seed(config.seed, config.family.nu1, config.family.nu2, n, m, 0),
        block_size=config.block_size,
    )
    est = estimator.run_algorithm(config.algorithm, config.family, n, utils.sample_size(m), rng)
    return est, estimator.estimate_error_vs_truth(est, config.family, m=m)


def write_rows(rows, fieldnames, fmt, stream):
    """Write rows as CSV (LF endings, shortest round-trip floats) or JSON."""
    if OutputFormat(fmt) is OutputFormat.JSON:
        json.dump(rows, stream, indent=2)
        stream.write("\n")
        return
    writer = csv.DictWriter(stream, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


class LegprojCLI(cli.Application):
    """Projection estimates in the Legendre basis."""

    PROGNAME = "legproj"
    VERSION = "1.0.0"

    verbose = cli.Flag(["-v", "--verbose"], help="Log debug messages")

    def main(self, *args):
        """Configure logging and require a subcommand."""
        logging.basicConfig(
            level=logging.DEBUG if self.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        if args:
            print("Unknown command {!r}".format(args[0]), file=sys.stderr)
            return constants.EXIT_USAGE
        if not self.nested_command:
            print("No command given", file=sys.stderr)
            return constants.EXIT_USAGE


class _ExperimentCommand(cli.Application):
    """Switches shared by every subcommand."""

    MODE = None

    nu1 = cli.SwitchAttr(["--nu1"], int, default=None, help="Left exponent of the family")
    nu2 = cli.SwitchAttr(["--nu2"], int, default=None, help="Right exponent of the family")
    n_values = cli.SwitchAttr(["--n"], int, list=True, help="Expansion length (repeatable)")
    m_values = cli.SwitchAttr(
        ["--m"], int, list=True, help="Sample size exponent, N = 2 ** (m + 9) (repeatable)"
    )
    seed = cli.SwitchAttr(["--seed"], int, default=None, help="Experiment seed")
    replicates = cli.SwitchAttr(["--replicates"], int, default=None, help="Runs per grid cell")
    algorithm = cli.SwitchAttr(
        ["--algorithm"], cli.Set("1", "2"), default=None, help="1: moments, 2: recurrence"
    )
    output_format = cli.SwitchAttr(
        ["--format"], cli.Set("csv", "json", case_sensitive=False), default=None
    )
    out = cli.SwitchAttr(["--out"], str, default=None, help="Write results to this path")
    workers = cli.SwitchAttr(["--workers"], int, default=None, help="Parallel grid cells")
    max_m = cli.SwitchAttr(["--max-m"], int, default=None, help="Warn above this exponent")

    def config(self):
        """Return the experiment config of this invocation."""
        return build_config(
            self.MODE,
            nu1=self.nu1,
            nu2=self.nu2,
            n_list=self.n_values,
            m_list=self.m_values,
            seed=self.seed,
            replicates=self.replicates,
            algorithm=self.algorithm,
            format=self.output_format,
            workers=self.workers,
            max_m=self.max_m,
        )

    def emit(self, rows, fieldnames, fmt):
        """Write rows to ``--out`` or standard output."""
        if self.out is None:
            write_rows(rows, fieldnames, fmt, sys.stdout)
            return
        with open(self.out, "w", encoding="utf-8", newline="") as handler:
            write_rows(rows, fieldnames, fmt, handler)
        logger.debug("Wrote %s rows to %s", len(rows), self.out)


@LegprojCLI.subcommand("exact")
class ExactCommand(_ExperimentCommand):
    """Print the deterministic truncation errors."""

    MODE = Mode.EXACT

    def main(self):
        """Run the subcommand."""
        config = self.config()
        self.emit(cmd_exact(config), constants.EXACT_FIELDS, config.output)


@LegprojCLI.subcommand("table")
class TableCommand(_ExperimentCommand):
    """Run the (n, m) grid and print the error reports."""

    MODE = Mode.TABLE

    def main(self):
        """Run the subcommand."""
        config = self.config()
        rows = [report.as_row() for report in cmd_table(config)]
        self.emit(rows, constants.TABLE_FIELDS, config.output)


@LegprojCLI.subcommand("fit")
class FitCommand(_ExperimentCommand):
    """Fit the bound constants and print both error surfaces."""

    MODE = Mode.FIT

    grid = cli.SwitchAttr(["--grid"], cli.ExistingFile, default=None, help="Table CSV to fit")
    target = cli.SwitchAttr(["--target"], cli.Set("g", "f"), default="g")

    def main(self):
        """Run the subcommand."""
        config = self.config()
        reports = read_table(str(self.grid)) if self.grid else None
        fitted, rows = cmd_fit(config, reports, Target(self.target))
        if config.output is OutputFormat.JSON:
            payload = {"c1": fitted.c1, "c2": fitted.c2, "s": fitted.s, "surfaces": rows}
            self.emit(payload, None, OutputFormat.JSON)
            return
        print("c1={!r} c2={!r} s={!r}".format(fitted.c1, fitted.c2, fitted.s), file=sys.stderr)
        self.emit(rows, constants.FIT_FIELDS, config.output)


@LegprojCLI.subcommand("optimize")
class OptimizeCommand(_ExperimentCommand):
    """Print the conditionally optimal (n, N) for a required accuracy."""

    MODE = Mode.OPTIMIZE

    gamma = cli.SwitchAttr(["--gamma"], float, mandatory=True, help="Required accuracy")
    target = cli.SwitchAttr(["--target"], cli.Set("g", "f"), default="g")
    c1 = cli.SwitchAttr(["--c1"], float, default=None)
    c2 = cli.SwitchAttr(["--c2"], float, default=None)

    def main(self):
        """Run the subcommand."""
        config = self.config()
        plan = cmd_optimize(config, self.gamma, Target(self.target), self.c1, self.c2)
        row = {
            "gamma": plan.gamma_target,
            "target": plan.target.value,
            "n_opt": plan.n_opt,
            "N_opt": plan.N_opt,
            "relation_exponent": plan.relation_exponent,
        }
        self.emit([row], list(row), config.output)


@LegprojCLI.subcommand("sample")
class SampleCommand(_ExperimentCommand):
    """Write realizations of the family to a file."""

    MODE = Mode.SAMPLE

    count = cli.SwitchAttr(["--count"], int, mandatory=True, help="Number of realizations")

    def main(self):
        """Run the subcommand."""
        if self.out is None:
            print("--out is required", file=sys.stderr)
            return constants.EXIT_USAGE
        cmd_sample(self.config(), self.count, self.out)


@LegprojCLI.subcommand("estimate")
class EstimateCommand(_ExperimentCommand):
    """Run one estimate and print its coefficients and errors."""

    MODE = Mode.ESTIMATE

    def main(self):
        """Run the subcommand."""
        config = self.config()
        est, reports = cmd_estimate(config)
        if config.output is OutputFormat.JSON:
            payload = {
                "g_coeffs": est.g_coeffs.coeffs.tolist(),
                "f_coeffs": est.f_coeffs.coeffs.tolist(),
                "reports": [report.as_row() for report in reports],
            }
            self.emit(payload, None, OutputFormat.JSON)
            return
        self.emit([report.as_row() for report in reports], constants.TABLE_FIELDS, config.output)


def main(argv=None):
    """Run the command line and return its exit code.

    :param argv: Arguments without the program name; ``sys.argv[1:]`` when
        omitted.
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        _, retcode = LegprojCLI.run([LegprojCLI.PROGNAME] + argv, exit=False)
    except exceptions.NumericalFailure as err:
        print("Numerical failure: {}".format(err), file=sys.stderr)
        return constants.EXIT_NUMERICAL
    except (ValueError, OSError) as err:
        print("Error: {}".format(err), file=sys.stderr)
        return constants.EXIT_USAGE
    if retcode == 2:
        # plumbum reports switch errors with 2
        return constants.EXIT_USAGE
    return retcode or constants.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
