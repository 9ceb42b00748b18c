import argparse
import time

from app.commands.common import add_common_arguments, emit, resolve_options, to_csv
from app.lib.utils import display_word, table_sort_key
from app.models.kl import QPolynomial
from app.ops.bmp import bmp_sheaf, graded_rank
from app.ops.sheaf import sheaf_to_json
from app.schemas.tables import RankRow, RankTable

FORMATS = ("json", "csv", "text")


def register(subparsers) -> None:
    parser = subparsers.add_parser("bmp", help="build the canonical sheaf B^J_w and print its graded ranks")
    add_common_arguments(parser, FORMATS)
    parser.add_argument("--timings", action="store_true", help="add the build wall time to every row")
    parser.add_argument("--with-sheaf", dest="with_sheaf", action="store_true",
                        help="emit the full sheaf document (json) instead of the rank table")
    parser.set_defaults(func=bmp_command)


def bmp_command(args: argparse.Namespace) -> int:
    options = resolve_options(args, FORMATS, default_fmt="text")
    group = options.group
    w = options.w if options.w is not None else group.project_to_min_rep(group.longest_element, options.J)
    started = time.perf_counter()
    sheaf = bmp_sheaf(group, w, options.field, options.J, options.dmax_slack)
    elapsed = time.perf_counter() - started
    if args.with_sheaf:
        emit(sheaf_to_json(sheaf), options.out)
        return 0

    w_word = group.word(w)
    rows = []
    for v in sorted(sheaf.graph.vertices, key=lambda v: table_sort_key(group.length(w), w_word, v.length, v.id)):
        rows.append(RankRow(
            w=display_word(w_word),
            y=display_word(v.id),
            field=options.field.label,
            coefficients=list(graded_rank(sheaf, v.id).coefficients),
            converged=sheaf.converged[v.id],
            wall_time=round(elapsed, 6) if options.timings else None,
        ))
    table = RankTable(type=group.datum.type_label, J=sorted(options.J), rows=rows)
    if options.fmt == "json":
        text = table.model_dump_json(indent=2, exclude_none=True)
    elif options.fmt == "csv":
        header = ["w", "y", "field", "coefficients", "converged"] + (["wall_time"] if options.timings else [])
        text = to_csv(header, (
            [r.w, r.y, r.field, " ".join(str(c) for c in r.coefficients), str(r.converged).lower()]
            + ([f"{r.wall_time:.6f}"] if options.timings else [])
            for r in rows
        ))
    else:
        lines = []
        for row in rows:
            rank = QPolynomial(tuple(row.coefficients))
            flag = "" if row.converged else "  (unconverged)"
            lines.append(f"{row.w}  {row.y}  {rank}{flag}")
        if options.timings:
            lines.append(f"# built in {elapsed:.3f}s")
        text = "\n".join(lines)
    emit(text, options.out)
    return 0
