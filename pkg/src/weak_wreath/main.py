"""
Main application entry point for weak-wreath.

This module provides the command-line interface: one subcommand per
batch job, each producing a Report on stdout.
"""

import argparse
import dataclasses
import sys
import time
from functools import partial
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

from weak_wreath import __version__
from weak_wreath.config import load_config
from weak_wreath.exactlinalg import Field
from weak_wreath.exceptions import (
    IndexOutOfRange,
    NotAGroup,
    ParseError,
    ShapeMismatch,
    WreathError,
)
from weak_wreath.fileformat import (
    load_algebra_file,
    load_manifest,
    load_map_file,
)
from weak_wreath.finvect import (
    check_algebra,
    check_coalgebra,
    check_demimonad,
    split_demimonad,
)
from weak_wreath.golden import GoldenTable
from weak_wreath.logger import setup_logging
from weak_wreath.metrics import MetricsCollector
from weak_wreath.models import CheckReport, Config, Report
from weak_wreath.spinchain import (
    SpinChainSpec,
    build_spin_chain,
    explicit_idempotent,
    observable_algebra,
    oracle_dimension,
)
from weak_wreath.wdl import (
    WeakDistributiveLaw,
    binary_factorize,
    check_binary_factorization,
    check_wdl,
    check_wdl_identities,
    weak_wreath,
)
from weak_wreath.wdln import (
    MonadCube,
    WdlNObject,
    build_cube,
    canonical_factorization_data,
    check_associativity,
    iterated_idempotent,
    iterated_wreath,
    nary_factorization_check,
    validate_object,
    verify_cube,
)
from weak_wreath.weakbialgebra import (
    BUILTIN_NAMES,
    WeakBialgebra,
    builtin_bialgebra,
    check_weak_bialgebra,
)

# Errors caused by the input rather than by the mathematics
INPUT_ERRORS = (
    ParseError,
    ShapeMismatch,
    IndexOutOfRange,
    NotAGroup,
    FileNotFoundError,
    ValueError,
)


class Application:
    """
    Main application class for weak-wreath.

    This class manages one command invocation:
    - Logging setup
    - Running the command and timing it
    - Rendering the report
    - Exporting metrics
    """

    def __init__(
        self, config: Config, json_output: bool = False, timing: bool = False
    ):
        """
        Initialize the application.

        Args:
            config: Application configuration, CLI overrides applied
            json_output: Render reports as JSON instead of text
            timing: Include wall-clock timing in reports
        """
        self.config = config
        self.json_output = json_output
        self.timing = timing
        self.logger = setup_logging(config.logging)
        self.field = Field.parse(config.engine.field)

        self.metrics: Optional[MetricsCollector] = None
        if config.metrics.enabled:
            self.metrics = MetricsCollector(
                textfile_path=config.metrics.textfile_path,
                histogram_buckets=config.metrics.histogram_buckets,
            )
            if not self.metrics.available:
                self.logger.warning(
                    "METRICS DISABLED: prometheus-client not installed. "
                    "Install with: pip install prometheus-client"
                )
                self.metrics = None

    def run(self, command: str, job: Callable[[], Report]) -> int:
        """
        Run a command, print its report and record metrics.

        Returns:
            Exit code: 0 if every section passed, 1 otherwise
        """
        self.logger.info(f"Starting {command}", extra={"command": command})
        started = time.perf_counter()
        report = job()
        duration = time.perf_counter() - started

        if self.timing:
            report.timing = {"total": duration}
        print(report.to_json() if self.json_output else report.to_text(), end="")
        if self.json_output:
            print()

        status = "pass" if report.passed else "fail"
        self.logger.info(
            f"Finished {command}: {status.upper()} in {duration * 1000:.0f}ms",
            extra={
                "command": command,
                "status": status,
                "duration_ms": round(duration * 1000, 3),
            },
        )

        if self.metrics:
            self.metrics.record_report(command, report, duration)
            try:
                self.metrics.write()
            except OSError as e:
                self.logger.warning(f"Could not write metrics: {e}")

        return 0 if report.passed else 1

    # commands

    def cmd_check(self, path: str, kind: Optional[str] = None) -> Report:
        """Run the checker matching the kind of an .alg file."""
        parsed = load_algebra_file(path, self._field_override())
        kind = kind or parsed.kind or "algebra"
        report = Report(command=f"check {kind} {path}")
        section: CheckReport
        if kind == "algebra":
            section = check_algebra(parsed.to_algebra())
        elif kind == "coalgebra":
            section = check_coalgebra(parsed.to_coalgebra())
        elif kind == "demimonad":
            section = check_demimonad(parsed.to_demimonad())
        else:
            section = check_weak_bialgebra(parsed.to_weak_bialgebra())
        report.add(kind, section)
        report.values["dimension"] = parsed.dim
        return report

    def cmd_wdl(self, path_t: str, path_s: str, path_lambda: str) -> Report:
        """Check a law λ: t (x) s -> s (x) t read from three files."""
        field_ = self._field_override()
        t = load_algebra_file(path_t, field_).to_demimonad()
        s = load_algebra_file(path_s, field_).to_demimonad()
        law = load_map_file(path_lambda, field_)
        expected = (t.space.dim * s.space.dim, s.space.dim * t.space.dim)
        if (law.domain.dim, law.codomain.dim) != expected:
            raise ShapeMismatch(
                f"Law in {path_lambda} must map {t.space.tensor(s.space)} -> "
                f"{s.space.tensor(t.space)}"
            )
        law = law.relabel(t.space.tensor(s.space), s.space.tensor(t.space))

        report = Report(command=f"wdl {path_t} {path_s} {path_lambda}")
        section = report.add("wdl", check_wdl(t, s, law))
        if section.passed:
            w = WeakDistributiveLaw(t, s, law)
            report.add("identities", check_wdl_identities(w))
            report.values["rank_lambda_bar"] = section.values["rank_lambda_bar"]
        return report

    def cmd_wreath(
        self,
        manifest_path: str,
        order: Optional[Sequence[int]] = None,
        all_orders: bool = False,
    ) -> Report:
        """Build the iterated wreath of an object and compare composites."""
        o = self._load_object(manifest_path)
        report = Report(command=f"wreath {manifest_path}")
        if not report.add("object", validate_object(o)).passed:
            return report

        alg, _, _ = split_demimonad(iterated_wreath(o), verify=False)
        report.values["dimension"] = alg.space.dim
        report.values["monads"] = o.n + 1

        if order is not None or all_orders:
            engine = self.config.engine
            section = report.add(
                "associativity",
                check_associativity(
                    o,
                    workers=engine.workers,
                    max_full_enumeration=engine.max_full_enumeration,
                    sample_orders=engine.sample_orders,
                    seed=engine.sample_seed,
                    orders=[tuple(order)] if order is not None else None,
                ),
            )
            count = section.values["composites"]
            verdict = str(section.passed).lower()
            scope = "sampled" if section.flags.get("sampled") else "all"
            report.notes.append(f"{scope} {count} composites identical: {verdict}")
        return report

    def cmd_spinchain(
        self,
        source: str,
        n: int,
        cube: bool = False,
        factorization_check: bool = False,
        golden_file: Optional[str] = None,
    ) -> Report:
        """Build a spin chain and report its observable algebra."""
        h = self._load_bialgebra(source)
        convention = self.config.engine.site_convention
        report = Report(command=f"spinchain {source} {n}")
        if not report.add("bialgebra", check_weak_bialgebra(h)).passed:
            return report

        spec = SpinChainSpec(h, n, convention)
        o = build_spin_chain(spec, validate=False)
        if not report.add("chain", validate_object(o)).passed:
            return report

        _, dimension = observable_algebra(spec)
        report.values["dimension"] = dimension
        report.values["convention"] = convention
        report.values["n"] = n

        formula = CheckReport(subject=f"closed formula for {spec.label}")
        formula.record(
            "explicit_idempotent", explicit_idempotent(spec), iterated_idempotent(o)
        )
        report.add("formula", formula)

        if source.lower() in BUILTIN_NAMES:
            table = GoldenTable.load(golden_file or self.config.engine.golden_file)
            golden = CheckReport(subject=f"golden dimension of {spec.label}")
            oracle = oracle_dimension(spec)
            golden.record_result(
                "oracle_agrees",
                oracle == dimension,
                f"oracle gives {oracle}, construction gives {dimension}",
            )
            expected = table.lookup(source.lower(), convention, n)
            if expected is not None:
                golden.record_result(
                    "table_agrees",
                    expected == dimension,
                    f"table has {expected}, construction gives {dimension}",
                )
            else:
                report.notes.append(f"no golden entry for {spec.label}")
            report.add("golden", golden)

        if cube or factorization_check:
            monad_cube = build_cube(o)
            if cube:
                self._add_cube(report, monad_cube)
            if factorization_check:
                report.add(
                    "factorization",
                    nary_factorization_check(canonical_factorization_data(monad_cube)),
                )
        return report

    def cmd_regen_golden(
        self, source: str, n: int, golden_file: Optional[str] = None
    ) -> Report:
        """
        Recompute golden entries for n' = 0..n with the oracle and save them.

        Raises:
            ValueError: If the source is not builtin or no file is named
        """
        target = golden_file or self.config.engine.golden_file
        if target is None:
            raise ValueError("--regen-golden needs --golden-file or WREATH_GOLDEN_FILE")
        if source.lower() not in BUILTIN_NAMES:
            raise ValueError(
                f"Golden entries are kept for builtin bialgebras only: "
                f"{', '.join(BUILTIN_NAMES)}"
            )
        table = GoldenTable.load(target)
        fresh = table.regenerate(
            [source],
            range(n + 1),
            convention=self.config.engine.site_convention,
            field=self.field,
        )
        table.save(target)
        report = Report(command=f"spinchain {source} {n} --regen-golden")
        report.values["entries"] = dict(sorted(fresh.items()))
        report.notes.append(f"wrote {len(fresh)} entries to {target}")
        return report

    def cmd_factorize(self, manifest_path: str) -> Report:
        """Factorization checks on an object: binary round trip, cube, n-ary."""
        o = self._load_object(manifest_path)
        report = Report(command=f"factorize {manifest_path}")
        if not report.add("object", validate_object(o)).passed:
            return report

        if o.n == 1:
            report.add("binary", self._binary_round_trip(o.law(0, 1)))

        monad_cube = build_cube(o)
        self._add_cube(report, monad_cube)
        report.add(
            "factorization",
            nary_factorization_check(canonical_factorization_data(monad_cube)),
        )
        return report

    # helpers

    def _add_cube(self, report: Report, monad_cube: MonadCube) -> None:
        """Verify the cube under the configured vertex limit and note the counts."""
        section = report.add(
            "cube",
            verify_cube(monad_cube, self.config.engine.max_cube_vertex_dim),
        )
        values = section.values
        report.notes.append(
            f"edges: {values['edges_passing']}/{values['edges']} monad morphisms"
        )
        report.notes.append(
            f"faces: {values['faces_commuting']}/{values['faces']} commute"
        )
        if values["skipped_vertices"]:
            report.notes.append(
                f"vertices: {values['skipped_vertices']} skipped above dimension "
                f"{self.config.engine.max_cube_vertex_dim}"
            )

    def _field_override(self) -> Optional[Field]:
        """A prime field overrides the files; the rationals let each file decide."""
        return self.field if self.field.characteristic else None

    def _load_object(self, manifest_path: str) -> WdlNObject:
        manifest = load_manifest(manifest_path, self._field_override())
        if manifest.chain is not None:
            return build_spin_chain(manifest.chain, validate=False)
        assert manifest.obj is not None
        return manifest.obj

    def _load_bialgebra(self, source: str) -> WeakBialgebra:
        if source.lower() in BUILTIN_NAMES and not Path(source).exists():
            return builtin_bialgebra(source, self.field)
        return load_algebra_file(source, self._field_override()).to_weak_bialgebra()

    def _binary_round_trip(self, w: WeakDistributiveLaw) -> CheckReport:
        """Factorize the weak wreath product of w and recover w."""
        d, proj_t, proj_s = weak_wreath(w)
        section = check_binary_factorization(
            d, w.t, w.s, proj_t.structure, proj_s.structure, w.bar
        )
        if section.passed:
            recovered = binary_factorize(
                d, w.t, w.s, proj_t.structure, proj_s.structure, w.bar
            )
            section.record("round_trip", recovered.law, w.law)
        return section


def _parse_order(value: str) -> Tuple[int, ...]:
    try:
        return tuple(int(k) for k in value.split(",") if k.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"Invalid order '{value}'. Expected comma separated integers k1,...,kn"
        )


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """
    Options accepted both before and after the subcommand.

    On subparsers the defaults are suppressed so that a value given before
    the subcommand is not overwritten.
    """

    def default(value: object) -> object:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--config",
        "-c",
        type=str,
        default=default(None),
        help="Path to configuration file (YAML)",
    )
    parser.add_argument(
        "--field",
        type=str,
        default=default(None),
        help="Scalar field: rational or prime:p (overrides the files)",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=default(None),
        help="Threads used to build independent composites",
    )
    parser.add_argument(
        "--json",
        action="store_true",
        default=default(False),
        help="Print the report as JSON",
    )
    parser.add_argument(
        "--timing",
        action="store_true",
        default=default(False),
        help="Include wall-clock timing in the report",
    )
    parser.add_argument(
        "--log-level",
        type=str,
        default=default(None),
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Log level (logs go to stderr)",
    )


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """
    Parse command line arguments.

    Args:
        argv: Arguments to parse; sys.argv[1:] by default

    Returns:
        Parsed arguments
    """
    parser = argparse.ArgumentParser(
        prog="weak-wreath",
        description=(
            "weak-wreath: exact checks for weak distributive laws, iterated "
            "weak wreath products and spin-chain observable algebras"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Check a structure-constant file
  weak-wreath check z2_group.alg --kind weak-bialgebra

  # Check a law between two algebras
  weak-wreath wdl z2_group.alg z2_group.alg flip_z2.map

  # Compare every composite of an object with its iterated wreath
  weak-wreath wreath m2_chain_n2.yaml --all-orders

  # Observable algebra of the M2 chain on sites 0..2, with the cube
  weak-wreath spinchain m2 2 --cube --json

  # Recompute golden dimensions
  weak-wreath spinchain m2 3 --regen-golden --golden-file golden.yaml

Exit codes: 0 pass, 1 mathematical failure, 2 input error, 130 interrupted.
        """,
    )
    _add_global_options(parser, suppress=False)
    parser.add_argument(
        "--version", "-v", action="version", version=f"weak-wreath {__version__}"
    )

    common = argparse.ArgumentParser(add_help=False)
    _add_global_options(common, suppress=True)

    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="Check an .alg file")
    check.add_argument("path", help="Structure-constant file (.alg)")
    check.add_argument(
        "--kind",
        choices=["algebra", "coalgebra", "demimonad", "weak-bialgebra"],
        help="Axioms to check (default: the file's kind, else algebra)",
    )

    wdl = sub.add_parser("wdl", parents=[common], help="Check a weak distributive law")
    wdl.add_argument("path_t", help="Monad t (.alg)")
    wdl.add_argument("path_s", help="Monad s (.alg)")
    wdl.add_argument("path_lambda", help="Law t (x) s -> s (x) t (.map)")

    wreath = sub.add_parser("wreath", parents=[common], help="Iterated weak wreath")
    wreath.add_argument("manifest", help="Object manifest (.yaml)")
    orders = wreath.add_mutually_exclusive_group()
    orders.add_argument(
        "--order",
        type=_parse_order,
        help="One composite C_k1..C_kn to compare, as k1,...,kn",
    )
    orders.add_argument(
        "--all-orders",
        action="store_true",
        help="Compare every composite (sampled above max_full_enumeration)",
    )

    chain = sub.add_parser("spinchain", parents=[common], help="Spin-chain algebra")
    chain.add_argument(
        "source",
        help=f"Builtin bialgebra ({', '.join(BUILTIN_NAMES)}) or .alg file",
    )
    chain.add_argument("n", type=int, help="Index of the last site")
    chain.add_argument(
        "--dual-even", action="store_true", help="Put the dual on even sites"
    )
    chain.add_argument("--cube", action="store_true", help="Build and verify the cube")
    chain.add_argument(
        "--factorization-check",
        action="store_true",
        help="Run the n-ary factorization check on the cube",
    )
    chain.add_argument(
        "--regen-golden",
        action="store_true",
        help="Recompute golden dimensions for sites 0..n with the oracle",
    )
    chain.add_argument("--golden-file", type=str, help="Golden table (YAML)")

    factorize = sub.add_parser(
        "factorize", parents=[common], help="Factorization checks on an object"
    )
    factorize.add_argument("manifest", help="Object manifest (.yaml)")

    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> Config:
    """
    Load configuration and apply command-line overrides.

    Raises:
        FileNotFoundError: If the config file does not exist
        ValueError: If a value is invalid
    """
    config = load_config(args.config)
    engine = config.engine
    overrides = {}
    if args.field is not None:
        overrides["field"] = args.field
    if args.workers is not None:
        overrides["workers"] = args.workers
    if getattr(args, "dual_even", False):
        overrides["site_convention"] = "dual-even"
    if overrides:
        # replace() re-runs validation
        config.engine = dataclasses.replace(engine, **overrides)
    if args.log_level is not None:
        config.logging = dataclasses.replace(config.logging, level=args.log_level)
    return config


def dispatch(app: Application, args: argparse.Namespace) -> int:
    """Run the selected subcommand."""
    command = args.command
    job: Callable[[], Report]
    if command == "check":
        job = partial(app.cmd_check, args.path, args.kind)
    elif command == "wdl":
        job = partial(app.cmd_wdl, args.path_t, args.path_s, args.path_lambda)
    elif command == "wreath":
        job = partial(
            app.cmd_wreath, args.manifest, order=args.order, all_orders=args.all_orders
        )
    elif command == "spinchain" and args.regen_golden:
        job = partial(app.cmd_regen_golden, args.source, args.n, args.golden_file)
    elif command == "spinchain":
        job = partial(
            app.cmd_spinchain,
            args.source,
            args.n,
            cube=args.cube,
            factorization_check=args.factorization_check,
            golden_file=args.golden_file,
        )
    else:
        job = partial(app.cmd_factorize, args.manifest)
    return app.run(command, job)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the application.

    Returns:
        Exit code: 0 pass, 1 mathematical failure, 2 input error, 130 interrupt
    """
    try:
        args = parse_args(argv)

        try:
            config = build_config(args)
        except (FileNotFoundError, ValueError) as e:
            print(f"Error loading configuration: {e}", file=sys.stderr)
            return 2

        app = Application(config, json_output=args.json, timing=args.timing)
        return dispatch(app, args)

    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return 130

    except INPUT_ERRORS as e:
        print(f"Input error: {e}", file=sys.stderr)
        return 2

    except WreathError as e:
        print(f"Check failed: {e}", file=sys.stderr)
        return 1

    except Exception as e:
        print(f"Fatal error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
