from dataclasses import dataclass
from typing import Iterable

from app.lib.exceptions import PreconditionError


@dataclass(frozen=True)
class QPolynomial:
    """Integer polynomial in q, coefficients listed from q^0 up; no trailing zeros."""

    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        coefficients = list(self.coefficients)
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(int(c) for c in coefficients))

    @classmethod
    def zero(cls) -> "QPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "QPolynomial":
        return cls((1,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "QPolynomial":
        if k < 0:
            raise PreconditionError("negative powers of q are not supported")
        return cls((0,) * k + (c,))

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "QPolynomial":
        """Graded rank: a generator in degree d contributes q^(d/2)."""
        counts: dict[int, int] = {}
        for d in degrees:
            if d < 0 or d % 2:
                raise PreconditionError(f"graded rank needs even nonnegative degrees, got {d}")
            counts[d // 2] = counts.get(d // 2, 0) + 1
        if not counts:
            return cls.zero()
        return cls(tuple(counts.get(k, 0) for k in range(max(counts) + 1)))

    def coefficient(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "QPolynomial") -> "QPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return QPolynomial(tuple(self.coefficient(k) + other.coefficient(k) for k in range(n)))

    def __neg__(self) -> "QPolynomial":
        return QPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "QPolynomial") -> "QPolynomial":
        return self + (-other)

    def __mul__(self, other: "QPolynomial | int") -> "QPolynomial":
        if isinstance(other, int):
            return QPolynomial(tuple(c * other for c in self.coefficients))
        if self.is_zero() or other.is_zero():
            return QPolynomial.zero()
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return QPolynomial(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPolynomial":
        """Multiply by q^k."""
        if self.is_zero():
            return self
        return QPolynomial((0,) * k + self.coefficients)

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                power = "q" if k == 1 else f"q^{k}"
                body = power if abs(c) == 1 else f"{abs(c)}{power}"
            if not parts:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f"-{body}" if c < 0 else f"+{body}")
        return "".join(parts)


KLPolynomial = QPolynomial
GradedRank = QPolynomial
