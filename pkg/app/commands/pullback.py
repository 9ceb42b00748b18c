import argparse

from app.commands.common import add_common_arguments, emit, resolve_options
from app.commands.verify import format_report
from app.lib.exceptions import UsageError
from app.lib.utils import display_word
from app.ops.bmp import bmp_sheaf, verify_axioms
from app.ops.graph import right_mult_isomorphism, validate_morphism
from app.ops.sheaf import pullback, restrict_sheaf
from app.ops.verify import SuiteContext, run_suites
from app.schemas.report import SuiteResult, VerificationReport

FORMATS = ("json", "text")


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "pullback", help="check that pullbacks of canonical sheaves along isomorphisms are canonical"
    )
    add_common_arguments(parser, FORMATS)
    parser.add_argument("--y", dest="y", help="with --w and --s: check the single interval isomorphism [y,w] -> [ys,ws]")
    parser.add_argument("--s", dest="s", type=int, help="simple index of s")
    parser.set_defaults(func=pullback_command)


def _single(options, y_word: str, s_index: int) -> SuiteResult:
    group, field = options.group, options.field
    y, w, s = group.element(y_word), options.w, group.s(s_index)
    f = right_mult_isomorphism(group, y, w, s)
    label = f"right s{s_index} on [{display_word(group.word(y))},{display_word(group.word(w))}]"
    result = SuiteResult(suite="pullback", theorem="pullback along x -> xs of B_ws is canonical", checked=1)
    report = validate_morphism(f, field=field, isomorphism=True)
    if not report.valid:
        result.failures += [f"{label}: {v}" for v in report.violations]
        return result
    source = bmp_sheaf(group, w, field, frozenset(), options.dmax_slack)
    target = restrict_sheaf(bmp_sheaf(group, w * s, field, frozenset(), options.dmax_slack), f.target.ids)
    pulled = pullback(f, target)
    if pulled.stalks != restrict_sheaf(source, f.source.ids).stalks:
        result.failures.append(f"{label}: pulled-back stalks differ from the canonical sheaf")
    axioms = verify_axioms(pulled, source.degree_cap)
    result.failures += [f"{label}: axiom {a.axiom} at {a.vertex}: {a.detail}" for a in axioms.failures]
    return result


def pullback_command(args: argparse.Namespace) -> int:
    options = resolve_options(args, FORMATS, default_fmt="text")
    if args.y is not None or args.s is not None:
        if args.y is None or args.s is None or options.w is None:
            raise UsageError("--y and --s must be given together with --w")
        result = _single(options, args.y, args.s)
        report = VerificationReport(
            type=options.group.datum.type_label, field=options.field.label, suites=[result], passed=result.passed
        )
    else:
        context = SuiteContext(group=options.group, field=options.field, w=options.w, dmax_slack=options.dmax_slack)
        report = run_suites(["pullback"], context)
    text = report.model_dump_json(indent=2) if options.fmt == "json" else format_report(report)
    emit(text, options.out)
    return 0 if report.passed else 1
