"""Exact truncated power series and integer polynomials in one variable ``t``.

Everything here works over Python's arbitrary precision ``int`` and
``fractions.Fraction``; nothing is ever rounded.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class NonIntegralCoefficient(ArithmeticError):
    pass


class NonvanishingTail(ArithmeticError):
    pass


DEFAULT_SLACK = 7


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``sum c_k t^k`` known exactly for ``k <= order``."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        cs = (cs + [Fraction(0)] * (order + 1))[: order + 1]
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([1], order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: order + 1], min(order, self.order))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)], n)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + other.scale(-1)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries([c * a for a in self.coeffs], self.order)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def as_ints(self) -> list[int]:
        """Coefficients as ``int``; raises if any is not an integer."""
        for k, c in enumerate(self.coeffs):
            if c.denominator != 1:
                raise NonIntegralCoefficient(f"coefficient of t^{k} is {c}")
        return [int(c) for c in self.coeffs]

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coeffs[:12])
        more = ", ..." if self.order >= 12 else ""
        return f"TruncatedSeries([{body}{more}], order={self.order})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product, truncated at the smaller of the two orders."""
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        ai = ac[i]
        if not ai:
            continue
        for j in range(n + 1 - i):
            if bc[j]:
                out[i + j] += ai * bc[j]
    return TruncatedSeries(out, n)


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial; ``coeffs[k]`` multiplies ``t^k``."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[k] + other[k] for k in range(n))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[k] - other[k] for k in range(n))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def exact_div(self, d: int) -> "IntPolynomial":
        if any(c % d for c in self.coeffs):
            raise NonIntegralCoefficient(f"polynomial not divisible by {d}")
        return IntPolynomial(c // d for c in self.coeffs)

    def to_series(self, order: int) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs[: order + 1], order)

    def __repr__(self) -> str:
        return f"IntPolynomial(degree={self.degree}, coeffs={list(self.coeffs[:8])}...)"


@dataclass(frozen=True)
class CyclotomicDenominator:
    """The product ``prod (1 - t^d)^mult`` stored as ``{d: mult}``."""

    factors: tuple[tuple[int, int], ...] = field(default=())

    def __init__(self, factors: Iterable[tuple[int, int]] = ()):
        merged: Counter[int] = Counter()
        for d, mult in factors:
            if d < 1 or mult < 1:
                raise ValueError(f"bad factor (1 - t^{d})^{mult}")
            merged[d] += mult
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "CyclotomicDenominator":
        return cls((d, 1) for d in degrees)

    @property
    def count(self) -> int:
        return sum(mult for _, mult in self.factors)

    @property
    def degrees(self) -> list[int]:
        return [d for d, mult in self.factors for _ in range(mult)]

    def polynomial(self) -> IntPolynomial:
        p = IntPolynomial([1])
        for d in self.degrees:
            p = p * IntPolynomial([1] + [0] * (d - 1) + [-1])
        return p


def expand_reciprocal_denominator(q: CyclotomicDenominator, order: int) -> TruncatedSeries:
    c = [0] * (order + 1)
    c[0] = 1
    for d in q.degrees:
        for m in range(d, order + 1):
            c[m] += c[m - d]
    return TruncatedSeries(c, order)


def divide_by_scalar_factor(s: TruncatedSeries, sign: int, tpow: int) -> TruncatedSeries:
    """``s / (1 - sign * t^tpow)`` by the in-place recurrence."""
    c = list(s.coeffs)
    for m in range(tpow, len(c)):
        c[m] += sign * c[m - tpow]
    return TruncatedSeries(c, s.order)


def multiply_by_denominator(s: TruncatedSeries, q: CyclotomicDenominator) -> TruncatedSeries:
    c = list(s.coeffs)
    for d in q.degrees:
        for m in range(len(c) - 1, d - 1, -1):
            c[m] -= c[m - d]
    return TruncatedSeries(c, s.order)


def reconstruct_numerator(
    s: TruncatedSeries, q: CyclotomicDenominator, expected_deg: int, slack: int = DEFAULT_SLACK
) -> IntPolynomial:
    """Recover the numerator ``P`` of ``s = P / q``.

    The product ``s * q`` must be integral and vanish strictly above
    ``expected_deg`` through ``s.order``. At least ``slack`` such degrees
    are required so the vanishing check means something.
    """
    if s.order < expected_deg + slack:
        raise ValueError(
            f"series order {s.order} too small to check a degree-{expected_deg} numerator"
        )
    p = multiply_by_denominator(s, q)
    ints = []
    for k, c in enumerate(p.coeffs):
        if c.denominator != 1:
            raise NonIntegralCoefficient(f"coefficient of t^{k} in s*q is {c}")
        ints.append(int(c))
    tail = [(k, c) for k, c in enumerate(ints) if k > expected_deg and c]
    if tail:
        k, c = tail[0]
        raise NonvanishingTail(f"s*q has coefficient {c} at t^{k} > {expected_deg}")
    return IntPolynomial(ints[: expected_deg + 1])


def is_palindromic(p: IntPolynomial, sign: int = 1, degree: int | None = None) -> bool:
    """True iff ``p[k] == sign * p[deg - k]`` for every ``k``."""
    n = p.degree if degree is None else degree
    return all(p[k] == sign * p[n - k] for k in range(n + 1))


def eval_at_one(p: IntPolynomial) -> int:
    return sum(p.coeffs)


def series_from_rational(p: IntPolynomial, q: CyclotomicDenominator, order: int) -> TruncatedSeries:
    return series_mul(p.to_series(order), expand_reciprocal_denominator(q, order))


def read_coefficients(path) -> list[int]:
    """Read one integer per line, skipping blank lines and ``#`` comments."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(int(line))
    return out


def write_coefficients(path, coeffs: Sequence[int], header: str = "") -> None:
    with open(path, "w") as fh:
        for line in header.splitlines():
            fh.write(f"# {line}\n")
        for c in coeffs:
            fh.write(f"{int(c)}\n")
