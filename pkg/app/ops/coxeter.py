import logging
from collections import deque
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from app.lib.exceptions import NonFiniteCartanError, PreconditionError, UsageError
from app.models.coxeter import (
    CartanDatum,
    LiftingCheck,
    ParabolicQuotient,
    Reflection,
    RootSystem,
    WeylElement,
)
from app.models.ring import LatticeVector

logger = logging.getLogger(__name__)

MAX_GROUP_ORDER = 1152


def _is_positive(vector: Sequence[int]) -> bool:
    return all(v >= 0 for v in vector) and any(v > 0 for v in vector)


def _root_system(datum: CartanDatum) -> RootSystem:
    a = np.array(datum.cartan_matrix, dtype=np.int64)
    n = datum.rank
    basis = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]

    def reflect(i: int, root: tuple, coroot: tuple) -> tuple[tuple, tuple]:
        pairing = int((a @ np.array(root))[i])
        co_pairing = int((a.T @ np.array(coroot))[i])
        new_root = tuple(r - (pairing if k == i else 0) for k, r in enumerate(root))
        new_coroot = tuple(c - (co_pairing if k == i else 0) for k, c in enumerate(coroot))
        return new_root, new_coroot

    seen: dict[tuple, tuple] = {}
    queue = deque((b, b) for b in basis)
    while queue:
        root, coroot = queue.popleft()
        if root in seen:
            continue
        seen[root] = coroot
        if len(seen) > 2 * MAX_GROUP_ORDER:
            raise NonFiniteCartanError(f"root system of {datum.type_label} is not finite")
        for i in range(n):
            queue.append(reflect(i, root, coroot))
    positive = sorted((r for r in seen if _is_positive(r)), key=lambda r: (sum(r), tuple(-v for v in r)))
    return RootSystem(
        simple_roots=tuple(basis),
        simple_coroots=tuple(basis),
        positive_roots=tuple(positive),
        coroot_of={r: seen[r] for r in positive},
    )


class WeylGroup:
    """Finite Weyl group with precomputed multiplication, length and Bruhat tables.

    Elements are indexed by their position in the (length, canonical word) order.
    All tables are filled at construction, so instances are safe to share.
    """

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.rank = datum.rank
        self.roots = _root_system(datum)
        a = datum.cartan_matrix
        n = self.rank
        self._simple_matrices = []
        for i in range(n):
            m = np.eye(n, dtype=np.int64)
            for k in range(n):
                m[i][k] = (1 if i == k else 0) - a[k][i]
            self._simple_matrices.append(m)
        self._enumerate()
        self._build_reflections()
        self._build_bruhat()
        logger.info("built Weyl group %s with %d elements", datum.type_label, len(self.elements))

    def _enumerate(self) -> None:
        n = self.rank
        identity = WeylElement(np.eye(n, dtype=np.int64))
        found = {identity.key: identity}
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for m in self._simple_matrices:
                y = WeylElement(x.matrix @ m)
                if y.key not in found:
                    found[y.key] = y
                    queue.append(y)
                    if len(found) > MAX_GROUP_ORDER:
                        raise NonFiniteCartanError(
                            f"{self.datum.type_label} has more than {MAX_GROUP_ORDER} elements"
                        )
        coroots = np.array(self.roots.positive_coroots, dtype=np.int64).T
        unsorted = list(found.values())
        lengths = {x.key: int(np.sum(np.any(x.matrix @ coroots < 0, axis=0))) for x in unsorted}

        def left_descent(x: WeylElement) -> int | None:
            for i, m in enumerate(self._simple_matrices):
                if lengths[WeylElement(m @ x.matrix).key] < lengths[x.key]:
                    return i
            return None

        words = {}
        for x in unsorted:
            word, y = [], x
            while True:
                i = left_descent(y)
                if i is None:
                    break
                word.append(i + 1)
                y = WeylElement(self._simple_matrices[i] @ y.matrix)
            words[x.key] = "".join(str(i) for i in word)
        ordered = sorted(unsorted, key=lambda x: (lengths[x.key], words[x.key]))
        self.elements: tuple[WeylElement, ...] = tuple(ordered)
        self._index = {x.key: k for k, x in enumerate(ordered)}
        self._lengths = [lengths[x.key] for x in ordered]
        self._words = [words[x.key] for x in ordered]
        self._right = [[self._index[(x.matrix @ m).tobytes()] for m in self._simple_matrices] for x in ordered]
        self._left = [[self._index[(m @ x.matrix).tobytes()] for m in self._simple_matrices] for x in ordered]
        self._inverse = []
        for word in self._words:
            k = 0
            for letter in reversed(word):
                k = self._right[k][int(letter) - 1]
            self._inverse.append(k)

    def _build_reflections(self) -> None:
        a = np.array(self.datum.cartan_matrix, dtype=np.int64)
        n = self.rank
        reflections = []
        for root in self.roots.positive_roots:
            coroot = self.roots.coroot_of[root]
            pairing = a @ np.array(root, dtype=np.int64)
            matrix = np.eye(n, dtype=np.int64) - np.outer(np.array(coroot, dtype=np.int64), pairing)
            reflections.append(Reflection(self.elements[self.index(WeylElement(matrix))], root, coroot))
        self.reflections: tuple[Reflection, ...] = tuple(reflections)
        self._reflection_index = {self.index(t.element): t for t in reflections}

    def _build_bruhat(self) -> None:
        below = [0] * len(self.elements)
        below[0] = 1
        for w in range(1, len(self.elements)):
            s = next(i for i in range(self.rank) if self._lengths[self._right[w][i]] < self._lengths[w])
            v = self._right[w][s]
            mask_v = below[v]
            mask = 0
            for x in range(w + 1):
                xs = self._right[x][s]
                probe = xs if self._lengths[xs] < self._lengths[x] else x
                if (mask_v >> probe) & 1:
                    mask |= 1 << x
            below[w] = mask
        self._below = below

    # lookups

    def index(self, x: WeylElement) -> int:
        try:
            return self._index[x.key]
        except KeyError:
            raise PreconditionError(f"{x!r} is not an element of {self.datum.type_label}") from None

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def simple_reflections(self) -> tuple[WeylElement, ...]:
        return tuple(self.elements[self._right[0][i]] for i in range(self.rank))

    def s(self, i: int) -> WeylElement:
        """Simple reflection s_i, 1-based."""
        if not 1 <= i <= self.rank:
            raise PreconditionError(f"simple index {i} out of range 1..{self.rank}")
        return self.elements[self._right[0][i - 1]]

    def simple_index(self, s: WeylElement) -> int:
        k = self.index(s)
        for i in range(self.rank):
            if self._right[0][i] == k:
                return i + 1
        raise PreconditionError(f"{self.word(s)!r} is not a simple reflection")

    @property
    def longest_element(self) -> WeylElement:
        return self.elements[-1]

    def element(self, word: str | Iterable[int]) -> WeylElement:
        if isinstance(word, str):
            text = word.strip()
            if text in ("", "e"):
                letters = []
            elif not text.isdigit():
                raise UsageError(f"word {word!r} must be a string of simple indices")
            else:
                letters = [int(c) for c in text]
        else:
            letters = list(word)
        k = 0
        for letter in letters:
            if not 1 <= letter <= self.rank:
                raise UsageError(f"letter {letter} of word {word!r} out of range 1..{self.rank}")
            k = self._right[k][letter - 1]
        return self.elements[k]

    def word(self, x: WeylElement) -> str:
        return self._words[self.index(x)]

    def length(self, x: WeylElement) -> int:
        return self._lengths[self.index(x)]

    def multiply(self, x: WeylElement, y: WeylElement) -> WeylElement:
        k = self.index(x)
        for letter in self._words[self.index(y)]:
            k = self._right[k][int(letter) - 1]
        return self.elements[k]

    def inverse(self, x: WeylElement) -> WeylElement:
        return self.elements[self._inverse[self.index(x)]]

    def sort_key(self, x: WeylElement) -> tuple[int, str]:
        k = self.index(x)
        return (self._lengths[k], self._words[k])

    # descents and order

    def right_descents(self, x: WeylElement) -> list[int]:
        k = self.index(x)
        return [i + 1 for i in range(self.rank) if self._lengths[self._right[k][i]] < self._lengths[k]]

    def left_descents(self, x: WeylElement) -> list[int]:
        k = self.index(x)
        return [i + 1 for i in range(self.rank) if self._lengths[self._left[k][i]] < self._lengths[k]]

    def bruhat_leq(self, x: WeylElement, w: WeylElement) -> bool:
        return bool((self._below[self.index(w)] >> self.index(x)) & 1)

    def bruhat_lt(self, x: WeylElement, w: WeylElement) -> bool:
        return x != w and self.bruhat_leq(x, w)

    def lower_interval(self, w: WeylElement) -> list[WeylElement]:
        mask = self._below[self.index(w)]
        return [x for k, x in enumerate(self.elements) if (mask >> k) & 1]

    def interval(self, y: WeylElement, w: WeylElement) -> list[WeylElement]:
        if not self.bruhat_leq(y, w):
            raise PreconditionError(f"interval [{self.word(y) or 'e'}, {self.word(w) or 'e'}] is empty: y is not below w")
        return [x for x in self.lower_interval(w) if self.bruhat_leq(y, x)]

    # parabolic data

    def _check_J(self, J: Iterable[int]) -> frozenset[int]:
        J = frozenset(J)
        bad = [i for i in J if not 1 <= i <= self.rank]
        if bad:
            raise PreconditionError(f"parabolic indices {sorted(bad)} out of range 1..{self.rank}")
        return J

    def parabolic_subgroup(self, J: Iterable[int]) -> list[WeylElement]:
        J = self._check_J(J)
        seen = {0}
        queue = deque([0])
        while queue:
            k = queue.popleft()
            for i in J:
                m = self._right[k][i - 1]
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        return [self.elements[k] for k in sorted(seen)]

    def longest_in(self, J: Iterable[int]) -> WeylElement:
        return self.parabolic_subgroup(J)[-1]

    def is_min_rep(self, x: WeylElement, J: Iterable[int]) -> bool:
        J = self._check_J(J)
        return not any(i in J for i in self.right_descents(x))

    def min_coset_reps(self, J: Iterable[int]) -> ParabolicQuotient:
        J = self._check_J(J)
        reps = tuple(x for x in self.elements if self.is_min_rep(x, J))
        return ParabolicQuotient(J=J, min_reps=reps, w_J=self.longest_in(J))

    def project_to_min_rep(self, w: WeylElement, J: Iterable[int]) -> WeylElement:
        J = self._check_J(J)
        k = self.index(w)
        while True:
            for i in J:
                m = self._right[k][i - 1]
                if self._lengths[m] < self._lengths[k]:
                    k = m
                    break
            else:
                return self.elements[k]

    # reflections, lifting

    def reflection(self, t: WeylElement) -> Reflection:
        try:
            return self._reflection_index[self.index(t)]
        except KeyError:
            raise PreconditionError(f"{self.word(t)!r} is not a reflection") from None

    def is_reflection(self, t: WeylElement) -> bool:
        return self.index(t) in self._reflection_index

    def coroot(self, t: WeylElement) -> LatticeVector:
        return self.reflection(t).coroot

    def g_l_set(self, x: WeylElement, y: WeylElement) -> list[Reflection]:
        """Reflections t with x < tx <= y."""
        return [
            t for t in self.reflections
            if self.bruhat_lt(x, t.element * x) and self.bruhat_leq(t.element * x, y)
        ]

    def check_lifting(self, u: WeylElement, v: WeylElement, s: WeylElement) -> LiftingCheck:
        self.simple_index(s)
        vs, us = v * s, u * s
        if not self.bruhat_lt(vs, v):
            raise PreconditionError("lifting property needs vs < v")
        if not self.bruhat_lt(u, v):
            raise PreconditionError("lifting property needs u < v")
        descent = not self.bruhat_lt(us, u) or self.bruhat_lt(us, vs)
        ascent = not self.bruhat_lt(u, us) or (self.bruhat_leq(us, v) and self.bruhat_leq(u, vs))
        return LiftingCheck(descent_case=descent, ascent_case=ascent, us_below_v=self.bruhat_leq(us, v))


def build_group(datum: CartanDatum) -> WeylGroup:
    return _build_group_cached(datum)


@lru_cache(maxsize=None)
def _build_group_cached(datum: CartanDatum) -> WeylGroup:
    return WeylGroup(datum)


def get_group(label: str) -> WeylGroup:
    return build_group(CartanDatum.from_label(label))
