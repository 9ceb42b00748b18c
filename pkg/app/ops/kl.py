"""Kazhdan-Lusztig polynomials of a finite Weyl group, regular and parabolic."""
import logging
from functools import lru_cache
from typing import Iterable

from app.lib.exceptions import NotMinimalRepresentativeError, PreconditionError
from app.models.coxeter import WeylElement
from app.models.kl import KLPolynomial, QPolynomial
from app.ops.coxeter import WeylGroup
from app.schemas.report import IdentityReport

logger = logging.getLogger(__name__)


class KazhdanLusztig:
    """Memoised left-descent recursion for P_{y,w}.

    The descent used by `kl` is always the least simple index s with sw < w;
    `recursion_step` evaluates the same formula for any left descent.
    """

    def __init__(self, group: WeylGroup):
        self.group = group
        self._memo: dict[tuple[int, int], KLPolynomial] = {}

    def kl(self, y: WeylElement, w: WeylElement) -> KLPolynomial:
        group = self.group
        key = (group.index(y), group.index(w))
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if y == w:
            value = QPolynomial.one()
        elif not group.bruhat_leq(y, w):
            value = QPolynomial.zero()
        else:
            s = group.s(group.left_descents(w)[0])
            value = self._step(y, w, s)
        self._memo[key] = value
        return value

    def recursion_step(self, y: WeylElement, w: WeylElement, s: WeylElement) -> KLPolynomial:
        """P_{y,w} expanded along the left descent s of w."""
        group = self.group
        i = group.simple_index(s)
        if i not in group.left_descents(w):
            raise PreconditionError(f"s{i} is not a left descent of {group.word(w) or 'e'}")
        if not group.bruhat_leq(y, w):
            return QPolynomial.zero()
        if y == w:
            return QPolynomial.one()
        return self._step(y, w, s)

    def _step(self, y: WeylElement, w: WeylElement, s: WeylElement) -> KLPolynomial:
        group = self.group
        v = s * w
        sy = s * y
        c = 1 if group.length(sy) < group.length(y) else 0
        value = self.kl(sy, v).shift(1 - c) + self.kl(y, v).shift(c)
        length_w = group.length(w)
        for z in group.interval(y, v) if group.bruhat_leq(y, v) else ():
            if z == v or group.length(s * z) > group.length(z):
                continue
            m = self.mu(z, v)
            if m:
                value = value - self.kl(y, z).shift((length_w - group.length(z)) // 2) * m
        return value

    def mu(self, z: WeylElement, v: WeylElement) -> int:
        group = self.group
        if not group.bruhat_leq(z, v):
            return 0
        gap = group.length(v) - group.length(z) - 1
        if gap < 0 or gap % 2:
            return 0
        return self.kl(z, v).coefficient(gap // 2)

    def parabolic_kl(self, J: Iterable[int], y: WeylElement, w: WeylElement) -> KLPolynomial:
        """P^{J,-1}_{y,w} through the longest element of W_J."""
        group = self.group
        J = frozenset(J)
        for x in (y, w):
            if not group.is_min_rep(x, J):
                raise NotMinimalRepresentativeError(
                    f"{group.word(x) or 'e'} is not a minimal coset representative for J={sorted(J)}"
                )
        w_J = group.longest_in(J)
        return self.kl(y * w_J, w * w_J)


@lru_cache(maxsize=None)
def kl_engine(group: WeylGroup) -> KazhdanLusztig:
    return KazhdanLusztig(group)


def kl(group: WeylGroup, y: WeylElement, w: WeylElement) -> KLPolynomial:
    return kl_engine(group).kl(y, w)


def mu(group: WeylGroup, z: WeylElement, v: WeylElement) -> int:
    return kl_engine(group).mu(z, v)


def recursion_step(group: WeylGroup, y: WeylElement, w: WeylElement, s: WeylElement) -> KLPolynomial:
    return kl_engine(group).recursion_step(y, w, s)


def parabolic_kl(group: WeylGroup, J: Iterable[int], y: WeylElement, w: WeylElement) -> KLPolynomial:
    return kl_engine(group).parabolic_kl(J, y, w)


def verify_identities(group: WeylGroup) -> IdentityReport:
    """Inverse symmetry and the two right-multiplication identities, exhaustively."""
    engine = kl_engine(group)
    violations: list[str] = []
    checked = 0

    def name(x: WeylElement) -> str:
        return group.word(x) or "e"

    for w in group.elements:
        w_inv = group.inverse(w)
        for y in group.lower_interval(w):
            p = engine.kl(y, w)
            checked += 1
            if p != engine.kl(group.inverse(y), w_inv):
                violations.append(f"inverse: P({name(y)},{name(w)}) != P({name(y)}^-1,{name(w)}^-1)")
            for i in group.right_descents(w):
                s = group.s(i)
                ws, ys = w * s, y * s
                if not group.bruhat_leq(y, ws):
                    checked += 1
                    if p != engine.kl(ys, ws):
                        violations.append(f"ys,ws: P({name(y)},{name(w)}) != P({name(ys)},{name(ws)}) for s{i}")
                checked += 1
                if p != engine.kl(ys, w):
                    violations.append(f"ys,w: P({name(y)},{name(w)}) != P({name(ys)},{name(w)}) for s{i}")
    logger.info("checked %d KL identities in %s, %d violations", checked, group.datum.type_label, len(violations))
    return IdentityReport(checked=checked, violations=violations)
