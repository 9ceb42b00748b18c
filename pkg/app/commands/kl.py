import argparse

from app.commands.common import add_common_arguments, emit, resolve_options, to_csv
from app.lib.utils import display_word, table_sort_key
from app.ops.kl import kl_engine
from app.schemas.tables import KLRow, KLTable

FORMATS = ("json", "csv", "text")


def register(subparsers) -> None:
    parser = subparsers.add_parser("kl", help="print Kazhdan-Lusztig polynomials P_{y,w} (parabolic with --J)")
    add_common_arguments(parser, FORMATS)
    parser.set_defaults(func=kl_command)


def kl_command(args: argparse.Namespace) -> int:
    """Rows for every y <= w in W^J; every w in W^J when --w is not given."""
    options = resolve_options(args, FORMATS, default_fmt="text")
    group, J = options.group, options.J
    engine = kl_engine(group)
    if options.w is not None:
        tops = [options.w]
    else:
        tops = list(group.min_coset_reps(J).min_reps)
    entries = []
    for w in tops:
        for y in group.lower_interval(w):
            if not group.is_min_rep(y, J):
                continue
            p = engine.parabolic_kl(J, y, w) if J else engine.kl(y, w)
            key = table_sort_key(group.length(w), group.word(w), group.length(y), group.word(y))
            entries.append((key, y, w, p))
    entries.sort(key=lambda entry: entry[0])
    rows = [
        KLRow(y=display_word(group.word(y)), w=display_word(group.word(w)), coefficients=list(p.coefficients))
        for _, y, w, p in entries
    ]
    if options.fmt == "json":
        text = KLTable(type=group.datum.type_label, J=sorted(J), rows=rows).model_dump_json(indent=2)
    elif options.fmt == "csv":
        text = to_csv(("y", "w", "coefficients"), ([r.y, r.w, " ".join(str(c) for c in r.coefficients)] for r in rows))
    else:
        text = "\n".join(f"P({r.y},{r.w}) = {p}" for r, (_, _, _, p) in zip(rows, entries))
    emit(text, options.out)
    return 0
