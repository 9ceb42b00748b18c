import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass
from typing import Iterable, Sequence

from app.lib.exceptions import UsageError
from app.lib.utils import parse_field, parse_parabolic
from app.models.coxeter import WeylElement
from app.models.ring import CoefficientField
from app.ops.coxeter import WeylGroup, get_group
from config import Settings, load_settings

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "dot", "text")


@dataclass
class Options:
    """Flags merged over the settings; a flag given on the command line wins."""

    settings: Settings
    group: WeylGroup
    J: frozenset[int]
    w: WeylElement | None
    field: CoefficientField
    dmax_slack: int
    fmt: str
    out: str | None
    timings: bool = False


def add_common_arguments(parser: argparse.ArgumentParser, formats: Sequence[str] = FORMATS) -> None:
    parser.add_argument("--type", dest="cartan_type", help="Cartan type, e.g. A2, B3, G2")
    parser.add_argument("--J", dest="J", help="comma list of simple indices, e.g. 1,3")
    parser.add_argument("--w", dest="w", help="word of w in simple indices, e.g. 2132; e for the identity")
    parser.add_argument("--field", dest="field", help="Q, F3, F5 or Fp:<p>")
    parser.add_argument("--dmax-slack", dest="dmax_slack", type=int, help="extra even degrees searched per vertex")
    parser.add_argument("--fmt", dest="fmt", choices=list(formats), help="output format")
    parser.add_argument("--out", dest="out", help="write output to this file instead of stdout")
    parser.add_argument("--config", dest="config", help="KEY=value manifest mirroring the flags")


def _pick(flag, setting):
    return setting if flag is None else flag


def resolve_options(args: argparse.Namespace, formats: Sequence[str] = FORMATS, default_fmt: str | None = None) -> Options:
    settings = load_settings(getattr(args, "config", None))
    group = get_group(_pick(args.cartan_type, settings.CARTAN_TYPE).strip().upper())
    J = parse_parabolic(_pick(args.J, settings.J), group.rank)
    word = _pick(args.w, settings.W)
    w = group.element(word) if word else None
    field = parse_field(_pick(args.field, settings.FIELD))
    dmax_slack = _pick(args.dmax_slack, settings.DMAX_SLACK)
    if dmax_slack < 0:
        raise UsageError("--dmax-slack must be nonnegative")
    fmt = args.fmt or settings.FMT
    if args.fmt is None and fmt not in formats and default_fmt is not None:
        fmt = default_fmt
    if fmt not in formats:
        raise UsageError(f"format {fmt!r} not available here; choose from {', '.join(formats)}")
    return Options(
        settings=settings,
        group=group,
        J=J,
        w=w,
        field=field,
        dmax_slack=dmax_slack,
        fmt=fmt,
        out=_pick(args.out, settings.OUT),
        timings=getattr(args, "timings", False),
    )


def emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()
