import argparse

from app.commands.common import add_common_arguments, emit, resolve_options, to_csv
from app.lib.utils import display_word
from app.ops.graph import bruhat_graph, lower_graph, to_dot, to_json

FORMATS = ("dot", "json", "csv", "text")


def register(subparsers) -> None:
    parser = subparsers.add_parser("graph", help="emit the Bruhat moment graph of W^J, or its part below w")
    add_common_arguments(parser, FORMATS)
    parser.set_defaults(func=graph_command)


def graph_command(args: argparse.Namespace) -> int:
    options = resolve_options(args, FORMATS, default_fmt="dot")
    group = options.group
    if options.w is None:
        graph = bruhat_graph(group, options.J)
    else:
        graph = lower_graph(group, options.w, options.J)
    if options.fmt == "dot":
        text = to_dot(graph)
    elif options.fmt == "json":
        text = to_json(graph)
    else:
        rows = [
            (display_word(e.tail), display_word(e.head), " ".join(str(c) for c in e.label))
            for e in graph.edges
        ]
        if options.fmt == "csv":
            text = to_csv(("tail", "head", "label"), rows)
        else:
            lines = [f"{len(graph.vertices)} vertices, {len(graph.edges)} edges"]
            lines += [f"{tail} -> {head} ({label})" for tail, head, label in rows]
            text = "\n".join(lines)
    emit(text, options.out)
    return 0
