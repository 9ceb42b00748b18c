import argparse

from app.commands.common import add_common_arguments, emit, resolve_options
from app.ops.verify import SUITES, SuiteContext, run_suites
from app.schemas.report import VerificationReport

FORMATS = ("json", "text")


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="run theorem-verification suites")
    add_common_arguments(parser, FORMATS)
    parser.add_argument(
        "--suite", dest="suites", action="append",
        help=f"suite to run, repeatable: {', '.join(SUITES)} or all (default)",
    )
    parser.add_argument("--max-length", dest="max_length", type=int, help="only sweep elements of at most this length")
    parser.set_defaults(func=verify_command)


def format_report(report: VerificationReport) -> str:
    lines = [f"{report.type} over {report.field}: {'PASS' if report.passed else 'FAIL'}"]
    for suite in report.suites:
        status = "ok" if suite.passed else "FAIL"
        lines.append(f"{suite.suite}: {status} ({suite.checked} checked, {suite.skipped} skipped) {suite.theorem}")
        lines += [f"  failure: {line}" for line in suite.failures]
        lines += [f"  finding: {line}" for line in suite.findings]
    return "\n".join(lines)


def verify_command(args: argparse.Namespace) -> int:
    options = resolve_options(args, FORMATS, default_fmt="text")
    context = SuiteContext(
        group=options.group,
        field=options.field,
        J=options.J or None,
        w=options.w,
        dmax_slack=options.dmax_slack,
        max_length=args.max_length,
    )
    report = run_suites(args.suites or ["all"], context)
    text = report.model_dump_json(indent=2) if options.fmt == "json" else format_report(report)
    emit(text, options.out)
    return 0 if report.passed else 1
