"""
Command-line interface for cftnvm
Single-instance queries, batch scans and certificate emission
"""

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from . import __version__
from .characters import extensions, subgroup_character, subgroup_of_index
from .config import load_settings, set_settings
from .cyclotomic import det_exact
from .errors import CftNvmError, ConfigError, InconsistencyError
from .finite_field import build_field, factor_prime_power, field_for_order
from .nvm import (
    CHARACTER_SELECTORS,
    METHODS,
    STRATEGIES,
    NvmReport,
    chebotarev_check,
    nvm_decide,
    proof_identities,
    scan_range,
    uncertainty_bound,
    violation_witness,
)
from .report import (
    CSV_COLUMNS,
    FORMATS,
    cft_payload,
    csv_row,
    dumps,
    field_payload,
    gauss_payload,
    get_renderer,
    summary_line,
    witness_payload,
    write_reports,
)
from .transform import cft_matrix, fourier_transform, gauss_set, t_sums

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DISAGREEMENT = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    """Validated parameters of one CLI invocation"""
    command: str
    q: Optional[int] = None
    p: Optional[int] = None
    m: Optional[int] = None
    index: int = 1
    chi: int = 0
    q_max: int = 0
    method: str = "both"
    strategy: str = "laplace"
    chars: str = "all"
    workers: Optional[int] = None
    out: Optional[Path] = None
    format: str = "table"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        known = {name: getattr(args, name) for name in cls.__dataclass_fields__ if hasattr(args, name)}
        config = cls(**known)
        config.validate()
        return config

    def validate(self) -> None:
        if self.command in ("field",):
            self._resolve_field()
        if self.command in ("gauss", "cft", "nvm", "witness"):
            if self.q is None:
                raise ConfigError("--q is required")
            p, m = factor_prime_power(self.q)
            self.p, self.m = p, m
            spec_order = self.q - 1
            if self.index < 1 or spec_order % self.index:
                raise ConfigError(f"Index {self.index} does not divide q - 1 = {spec_order}")
            d = spec_order // self.index
            if not 0 <= self.chi < d:
                raise ConfigError(f"Character exponent {self.chi} outside [0, {d})")
        if self.format == "csv" and self.command not in ("nvm", "chebotarev", "scan"):
            raise ConfigError(f"CSV output is not available for the {self.command} command")

    def _resolve_field(self) -> None:
        if self.q is not None:
            p, m = factor_prime_power(self.q)
            if (self.p is not None and self.p != p) or (self.m is not None and self.m != m):
                raise ConfigError(f"--p/--m do not match q = {self.q} = {p}^{m}")
            self.p, self.m = p, m
        elif self.p is not None:
            self.m = self.m or 1
            self.q = self.p ** self.m
        else:
            raise ConfigError("Give either --q or --p")


def _add_common_arguments(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument("--verbose", "-v", action="store_true", default=default(False),
                        help="Enable debug logging on stderr")
    parser.add_argument("--config", "-c", type=Path, default=default(None),
                        help="Path to a YAML, TOML or JSON settings file")
    parser.add_argument("--format", "-f", choices=FORMATS, default=default("table"),
                        help="Output format (default: table)")
    parser.add_argument("--out", "-o", type=Path, default=default(None),
                        help="Write output to a file instead of stdout")


def create_parser() -> argparse.ArgumentParser:
    """Create the main argument parser"""
    parser = argparse.ArgumentParser(
        prog="cftnvm",
        description="Exact finite-field Fourier analysis and nonvanishing-minors decisions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s field --q 9
  %(prog)s gauss --q 7 --index 3 --chi 1
  %(prog)s nvm --q 7 --index 3 --chi 1 --method both
  %(prog)s scan --q-max 100 --index 3 --chars nontrivial --format json --out scan.jsonl
  %(prog)s witness --q 4 --index 3 --chi 0
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common_arguments(parser, suppress=False)

    common = argparse.ArgumentParser(add_help=False)
    _add_common_arguments(common, suppress=True)

    subparsers = parser.add_subparsers(dest="command", help="Available commands", metavar="COMMAND")

    field_parser = subparsers.add_parser("field", parents=[common], help="Show a finite field")
    field_parser.add_argument("--q", type=int, help="Field size, a prime power")
    field_parser.add_argument("--p", type=int, help="Characteristic")
    field_parser.add_argument("--m", type=int, help="Extension degree (default: 1)")

    def instance_parser(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("--q", type=int, required=True, help="Field size, a prime power")
        sub.add_argument("--index", "-s", type=int, default=1,
                         help="Index of the subgroup H in F_q^x (default: 1)")
        sub.add_argument("--chi", "-j", type=int, default=0,
                         help="Exponent j of the character on H (default: 0)")
        return sub

    instance_parser("gauss", "Gauss sums of the extensions of a character")
    instance_parser("cft", "Compressed Fourier matrix of a character")
    nvm_parser = instance_parser("nvm", "Decide the nonvanishing-minors property")
    nvm_parser.add_argument("--method", choices=METHODS, default="both",
                            help="Decision method (default: both)")
    nvm_parser.add_argument("--strategy", choices=STRATEGIES, default="laplace",
                            help="Minor enumeration strategy (default: laplace)")
    instance_parser("witness", "Emit an element violating the uncertainty bound")

    cheb_parser = subparsers.add_parser("chebotarev", parents=[common],
                                        help="Check every minor of the p x p DFT matrix")
    cheb_parser.add_argument("--p", type=int, required=True, help="Prime")

    scan_parser = subparsers.add_parser("scan", parents=[common], help="Scan many fields")
    scan_parser.add_argument("--q-max", dest="q_max", type=int, required=True,
                             help="Largest field size")
    scan_parser.add_argument("--index", "-s", type=int, default=3, help="Subgroup index (default: 3)")
    scan_parser.add_argument("--chars", choices=CHARACTER_SELECTORS, default="all",
                             help="Characters on H to scan (default: all)")
    scan_parser.add_argument("--workers", "-w", type=int, help="Worker processes")

    return parser


def setup_logging(verbose: bool) -> None:
    """Log to stderr so stdout stays reproducible"""
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )
    logging.getLogger().setLevel(logging.DEBUG if verbose else logging.INFO)


def emit(text: str, out: Optional[Path]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")


def _single_report(report: NvmReport, fmt: str) -> str:
    if fmt == "json":
        return dumps(report.to_dict())
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerow(csv_row(report))
        return buffer.getvalue()
    return get_renderer().render("nvm", report=report)


def _character(config: RunConfig):
    H = subgroup_of_index(field_for_order(config.q), config.index)
    return subgroup_character(H, config.chi)


def cmd_field(config: RunConfig) -> int:
    spec = build_field(config.p, config.m)
    if config.format == "json":
        emit(dumps(field_payload(spec)), config.out)
    else:
        emit(get_renderer().render("field", spec=spec, elements=spec.elements()), config.out)
    return EXIT_OK


def cmd_gauss(config: RunConfig) -> int:
    chi = _character(config)
    gauss = gauss_set(chi)
    ts = t_sums(gauss) if config.index == 3 else None
    identities = proof_identities(gauss) if ts is not None and not chi.is_trivial() else None
    if config.format == "json":
        emit(dumps(gauss_payload(gauss, ts, identities)), config.out)
    else:
        emit(get_renderer().render("gauss", gauss=gauss, pairs=list(zip(extensions(chi), gauss.sums)),
                                   ts=ts, identities=identities), config.out)
    return EXIT_OK


def cmd_cft(config: RunConfig) -> int:
    cft = cft_matrix(_character(config))
    determinant = det_exact(cft.matrix)
    if config.format == "json":
        emit(dumps(cft_payload(cft, determinant)), config.out)
    else:
        emit(get_renderer().render("cft", cft=cft, rows=cft.matrix.to_rows(),
                                   determinant=determinant), config.out)
    return EXIT_OK


def cmd_nvm(config: RunConfig) -> int:
    report = nvm_decide(_character(config), method=config.method, strategy=config.strategy)
    emit(_single_report(report, config.format), config.out)
    return EXIT_DISAGREEMENT if report.agreement is False else EXIT_OK


def cmd_chebotarev(config: RunConfig) -> int:
    report = chebotarev_check(config.p)
    emit(_single_report(report, config.format), config.out)
    return EXIT_OK


def cmd_scan(config: RunConfig) -> int:
    reports = scan_range(config.q_max, config.index, config.chars, config.workers)
    buffer = io.StringIO()
    write_reports(reports, config.format, buffer, summary=config.out is None)
    emit(buffer.getvalue(), config.out)
    if config.out is not None:
        print(summary_line(reports))
    return EXIT_DISAGREEMENT if any(r.agreement is False for r in reports) else EXIT_OK


def cmd_witness(config: RunConfig) -> int:
    chi = _character(config)
    cft = cft_matrix(chi)
    report = nvm_decide(chi, method="brute")
    f = violation_witness(cft, report.witness, chi) if not report.holds else None
    if config.format == "json":
        emit(dumps(witness_payload(report, f, cft)), config.out)
        return EXIT_OK
    context: Dict[str, Any] = {"report": report, "f": f}
    if f is not None:
        total, bound = uncertainty_bound(f, chi)
        context.update(
            coefficients=[(x, v) for x, v in zip(f.field.elements(), f.values) if not v.is_zero()],
            support=sorted(f.support(), key=lambda x: x.index),
            support_hat=sorted(fourier_transform(f).support(), key=lambda x: x.index),
            total=total,
            bound=bound,
        )
    emit(get_renderer().render("witness", **context), config.out)
    return EXIT_OK


HANDLERS = {
    "field": cmd_field,
    "gauss": cmd_gauss,
    "cft": cmd_cft,
    "nvm": cmd_nvm,
    "chebotarev": cmd_chebotarev,
    "scan": cmd_scan,
    "witness": cmd_witness,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.verbose)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    try:
        settings = load_settings(args.config)
        workers = getattr(args, "workers", None)
        if workers is not None:
            settings = replace(settings, workers=workers)
        set_settings(settings)

        config = RunConfig.from_args(args)
        logger.debug(f"Running {config}")
        return HANDLERS[config.command](config)
    except KeyboardInterrupt:
        logger.info("Operation cancelled by user")
        return 130
    except InconsistencyError as e:
        logger.error(f"Internal consistency check failed: {e}")
        if args.verbose:
            logger.exception("Full traceback:")
        return EXIT_DISAGREEMENT
    except (CftNvmError, OSError) as e:
        logger.error(f"Error: {e}")
        if args.verbose:
            logger.exception("Full traceback:")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
