from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar, Iterable, Mapping, Union

from app.lib.exceptions import FieldMismatchError, PreconditionError

LatticeVector = tuple[int, ...]
Exponent = tuple[int, ...]


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class RationalField:
    characteristic: ClassVar[int] = 0

    @property
    def label(self) -> str:
        return "Q"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __call__(self, value: Any) -> Fraction:
        return Fraction(value)

    def normalize(self, value: Fraction) -> Fraction:
        return value

    def inv(self, value: Fraction) -> Fraction:
        if value == 0:
            raise ZeroDivisionError("zero has no inverse in Q")
        return 1 / Fraction(value)

    def is_zero(self, value: Any) -> bool:
        return value == 0

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not _is_odd_prime(self.p):
            raise PreconditionError(f"field characteristic must be an odd prime, got {self.p}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def label(self) -> str:
        return f"F{self.p}"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def __call__(self, value: Any) -> int:
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"{value} has no image in {self.label}")
            return value.numerator * pow(den, self.p - 2, self.p) % self.p
        return int(value) % self.p

    def normalize(self, value: int) -> int:
        return value % self.p

    def inv(self, value: int) -> int:
        if value % self.p == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self.label}")
        return pow(value, self.p - 2, self.p)

    def is_zero(self, value: Any) -> bool:
        return value % self.p == 0

    def __str__(self) -> str:
        return self.label


CoefficientField = Union[RationalField, PrimeField]


def _graded_lex_key(exponent: Exponent):
    return (sum(exponent), tuple(-a for a in exponent))


def _format_monomial(exponent: Exponent) -> str:
    parts = []
    for i, a in enumerate(exponent):
        if a == 1:
            parts.append(f"x{i + 1}")
        elif a > 1:
            parts.append(f"x{i + 1}^{a}")
    return "·".join(parts)


class Polynomial:
    """Element of Sym(Y ⊗ k) = k[x1..xn] stored as a sparse {exponent: coefficient} map."""

    __slots__ = ("field", "rank", "terms")

    def __init__(self, field: CoefficientField, rank: int, terms: Mapping[Exponent, Any] | None = None):
        self.field = field
        self.rank = rank
        clean: dict[Exponent, Any] = {}
        for exponent, value in (terms or {}).items():
            exponent = tuple(int(a) for a in exponent)
            if len(exponent) != rank or any(a < 0 for a in exponent):
                raise PreconditionError(f"bad exponent {exponent} for rank {rank}")
            value = field(value)
            if not field.is_zero(value):
                clean[exponent] = field.normalize(clean.get(exponent, field.zero) + value)
                if field.is_zero(clean[exponent]):
                    del clean[exponent]
        self.terms = clean

    @classmethod
    def from_normalized(cls, field: CoefficientField, rank: int, terms: dict) -> "Polynomial":
        poly = cls.__new__(cls)
        poly.field = field
        poly.rank = rank
        poly.terms = terms
        return poly

    @classmethod
    def zero(cls, field: CoefficientField, rank: int) -> "Polynomial":
        return cls.from_normalized(field, rank, {})

    @classmethod
    def constant(cls, field: CoefficientField, rank: int, value: Any = 1) -> "Polynomial":
        return cls(field, rank, {(0,) * rank: value})

    @classmethod
    def monomial(cls, field: CoefficientField, rank: int, exponent: Exponent, value: Any = 1) -> "Polynomial":
        return cls(field, rank, {tuple(exponent): value})

    @classmethod
    def variable(cls, field: CoefficientField, rank: int, index: int) -> "Polynomial":
        exponent = [0] * rank
        exponent[index] = 1
        return cls(field, rank, {tuple(exponent): 1})

    @classmethod
    def linear_form(cls, field: CoefficientField, vector: Iterable[Any]) -> "Polynomial":
        vector = tuple(vector)
        rank = len(vector)
        terms = {}
        for i, value in enumerate(vector):
            exponent = [0] * rank
            exponent[i] = 1
            terms[tuple(exponent)] = value
        return cls(field, rank, terms)

    def _check(self, other: "Polynomial") -> None:
        if self.field != other.field or self.rank != other.rank:
            raise FieldMismatchError(
                f"cannot combine polynomials over {self.field}[{self.rank}] and {other.field}[{other.rank}]"
            )

    def _coerce(self, other: Any) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.field, self.rank, other)

    def __add__(self, other: Any) -> "Polynomial":
        other = self._coerce(other)
        field = self.field
        terms = dict(self.terms)
        for exponent, value in other.terms.items():
            total = field.normalize(terms.get(exponent, field.zero) + value)
            if field.is_zero(total):
                terms.pop(exponent, None)
            else:
                terms[exponent] = total
        return Polynomial.from_normalized(field, self.rank, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        field = self.field
        return Polynomial.from_normalized(
            field, self.rank, {e: field.normalize(-v) for e, v in self.terms.items()}
        )

    def __sub__(self, other: Any) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, value: Any) -> "Polynomial":
        field = self.field
        value = field(value)
        if field.is_zero(value):
            return Polynomial.zero(field, self.rank)
        return Polynomial.from_normalized(
            field, self.rank, {e: field.normalize(v * value) for e, v in self.terms.items()}
        )

    def __mul__(self, other: Any) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        field = self.field
        terms: dict[Exponent, Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                total = field.normalize(terms.get(exponent, field.zero) + c1 * c2)
                if field.is_zero(total):
                    terms.pop(exponent, None)
                else:
                    terms[exponent] = total
        return Polynomial.from_normalized(field, self.rank, terms)

    def __rmul__(self, other: Any) -> "Polynomial":
        return self.scale(other)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise PreconditionError("negative powers are not polynomials")
        result = Polynomial.constant(self.field, self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.field == other.field and self.rank == other.rank and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.field, self.rank, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.rank, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: Exponent) -> Any:
        return self.terms.get(tuple(exponent), self.field.zero)

    def degree(self) -> int:
        """Degree in the grading where each variable has degree 2; the zero polynomial has degree -1."""
        if not self.terms:
            return -1
        return 2 * max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Exponent, Any]]:
        return sorted(self.terms.items(), key=lambda item: _graded_lex_key(item[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for exponent, value in self.sorted_terms():
            mono = _format_monomial(exponent)
            if not mono:
                text = str(value)
            elif value == 1:
                text = mono
            elif value == -1:
                text = f"-{mono}"
            else:
                text = f"{value}·{mono}"
            if not out:
                out.append(text)
            elif text.startswith("-"):
                out.append(f" - {text[1:]}")
            else:
                out.append(f" + {text}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Polynomial({self}, {self.field}, rank={self.rank})"
