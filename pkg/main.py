import sys
import argparse
from loguru import logger

from config import config, validate_config
from core.commands import Command, VERBS, run


# Global exception hook so nothing dies without a log line
def exception_hook(exctype, value, traceback):
    logger.error(f"Uncaught exception: {value}", exc_info=(exctype, value, traceback))
    sys.__excepthook__(exctype, value, traceback)


sys.excepthook = exception_hook


def setup_logging(level: str):
    """Logs go to stderr, reports to stdout"""
    logger.remove()
    logger.add(sys.stderr, level=level.upper(),
               format="<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {name}:{line} - {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradedpi",
        description="Graded polynomial identities, central polynomials and primeness for matrix algebras",
    )
    parser.add_argument("verb", choices=list(VERBS), help="what to run")
    parser.add_argument("polynomials", nargs="*", help="polynomials, e.g. \"x1[g]*x2[g] - x2[g]*x1[g]\"")
    parser.add_argument("--algebra", help="algebra spec file, or inline 'kind = MnF; n = 2; ...'")
    parser.add_argument("--json", action="store_true", help="print the report as JSON")
    parser.add_argument("--budget", type=int, help="Grassmann generators for E-entry algebras")
    parser.add_argument("--conductor", type=int, help="base field Q(zeta_m)")
    parser.add_argument("--maxdeg", type=int, help="degree bound per factor for primeness-scan")
    parser.add_argument("--seed", type=int, help="seed for the randomized suites")
    parser.add_argument("--coeffs", help="coefficient set for primeness-scan, e.g. \"1,-1\"")
    parser.add_argument("--cases", type=int, default=50, help="cases per randomized suite")
    parser.add_argument("--at", help="substitution for eval, e.g. \"x1=E12,x2=e1*E21\"")
    parser.add_argument("--p", help="diagonal for witness, e.g. \"1,-1\"")
    parser.add_argument("--h", help="degree map for transform --mode h, e.g. \"x1=1,x2=0\"")
    parser.add_argument("--mode", choices=["h", "star"], default="star", help="transform flavour")
    parser.add_argument("--companion", help="companion polynomial g for check-central --ordinary")
    parser.add_argument("--ordinary", action="store_true", help="treat the polynomial as ungraded")
    parser.add_argument("--realization", help="regular grading, e.g. grassmann:budget=6, pauli:m=3, clock:m=2")
    parser.add_argument("--limit", type=int, default=20, help="rows shown for lists in reports")
    parser.add_argument("--archive", action="store_true", help="store the report in the sqlite archive")
    parser.add_argument("--log-level", default=None, help="loguru level (default from GRADEDPI_LOG_LEVEL)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or config.log_level)

    if not validate_config():
        return 2

    command = Command(
        verb=args.verb,
        algebra=args.algebra,
        polynomials=args.polynomials,
        budget=args.budget,
        conductor=args.conductor,
        maxdeg=args.maxdeg,
        seed=args.seed,
        coeffs=[c.strip() for c in args.coeffs.split(",")] if args.coeffs else None,
        at=args.at,
        p=args.p,
        h=args.h,
        mode=args.mode,
        companion=args.companion,
        ordinary=args.ordinary,
        realization=args.realization,
        cases=args.cases,
        limit=args.limit,
        archive_path=config.archive.path,
    )
    logger.info(f"Running {command.verb}")
    exit_code, report = run(command)

    print(report.to_json() if args.json else report.to_text())

    if (args.archive or config.archive.enabled) and command.verb not in ("history", "schema"):
        from core.database import archive_report
        archive_report(report, config.archive.path)

    return exit_code


if __name__ == "__main__":
    sys.exit(main())
