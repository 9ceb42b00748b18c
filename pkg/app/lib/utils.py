import re

from app.lib.exceptions import PreconditionError, UsageError
from app.models.ring import CoefficientField, PrimeField, RationalField

_FIELD_PATTERN = re.compile(r"^(?:F(\d+)|Fp:(\d+))$")


def parse_field(label: str) -> CoefficientField:
    text = label.strip()
    if text in ("Q", "QQ"):
        return RationalField()
    match = _FIELD_PATTERN.match(text)
    if not match:
        raise UsageError(f"unknown field {label!r}; use Q, F3, F5 or Fp:<p>")
    p = int(match.group(1) or match.group(2))
    try:
        return PrimeField(p)
    except PreconditionError as exc:
        raise UsageError(exc.detail) from exc


def parse_parabolic(text: str | None, rank: int | None = None) -> frozenset[int]:
    if text is None or not text.strip():
        return frozenset()
    try:
        J = frozenset(int(part) for part in text.replace(" ", "").split(",") if part)
    except ValueError:
        raise UsageError(f"--J must be a comma list of simple indices, got {text!r}") from None
    if rank is not None and any(not 1 <= i <= rank for i in J):
        raise UsageError(f"--J indices must lie in 1..{rank}, got {text!r}")
    return J


def even_ceil(n: int) -> int:
    return n if n % 2 == 0 else n + 1


def display_word(word: str) -> str:
    return word or "e"


def table_sort_key(length_w: int, word_w: str, length_y: int, word_y: str) -> tuple:
    return (length_w, word_w, length_y, word_y)
