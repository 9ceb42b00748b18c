import argparse

from app.commands.common import add_common_arguments, emit, resolve_options
from app.lib.utils import display_word
from app.ops.graph import bruhat_graph, is_gkm_pair, lower_graph

FORMATS = ("json", "text")


def register(subparsers) -> None:
    parser = subparsers.add_parser("gkm", help="audit the moment graph over a field (nonvanishing labels, GKM pair)")
    add_common_arguments(parser, FORMATS)
    parser.set_defaults(func=gkm_command)


def gkm_command(args: argparse.Namespace) -> int:
    """Exit 0 when the graph is a GKM pair over the field, 1 otherwise."""
    options = resolve_options(args, FORMATS, default_fmt="text")
    group = options.group
    if options.w is None:
        graph = bruhat_graph(group, options.J)
    else:
        graph = lower_graph(group, options.w, options.J)
    report = is_gkm_pair(graph, options.field)
    if options.fmt == "json":
        text = report.model_dump_json(indent=2)
    else:
        lines = [
            f"{group.datum.type_label} over {report.field}: "
            f"k-moment graph {'yes' if report.is_k_moment_graph else 'no'}, GKM {'yes' if report.is_gkm else 'no'}"
        ]
        lines += [f"vanishing label on {display_word(t)} -> {display_word(h)}" for t, h in report.vanishing_labels]
        lines += [
            f"proportional labels at {display_word(v.vertex)}: "
            f"{display_word(v.edge_a[0])} -> {display_word(v.edge_a[1])} and "
            f"{display_word(v.edge_b[0])} -> {display_word(v.edge_b[1])}"
            for v in report.violations
        ]
        text = "\n".join(lines)
    emit(text, options.out)
    return 0 if report.is_gkm else 1
