"""Power series in ``t`` with Laurent-polynomial coefficients in one or two
circle variables, and extraction of their constant terms.

Each t-degree coefficient is a dense ``numpy`` object array of Python ints,
centred on exponent zero: the entry at index ``e + bound`` holds the
coefficient of ``z^e`` (or ``z^e w^f`` with a second axis for ``w``).

The cap policy bounds exponents at degree ``m`` by ``rate * m + margin``
(a hard cap; exceeding it is a bug and raises :class:`CapOverflow`), and,
when a target order ``M`` is known, additionally by
``rate * (M - m) + margin``. Monomials beyond the second bound can never
come back to exponent zero by degree ``M``, so they are dropped.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .seriesring import TruncatedSeries


class CapOverflow(ArithmeticError):
    """A monomial fell outside the hard exponent cap."""


@dataclass(frozen=True)
class Factor:
    """The geometric factor ``1 - sign * t^tpow * z^exps[0] (w^exps[1])``."""

    sign: int
    tpow: int
    exps: tuple[int, ...]

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.tpow < 1:
            raise ValueError("every factor needs at least one power of t")
        object.__setattr__(self, "exps", tuple(int(e) for e in self.exps))

    @property
    def nvars(self) -> int:
        return len(self.exps)


@dataclass(frozen=True)
class CapPolicy:
    rate: int
    margin: int = 2
    target: int | None = None

    def hard(self, m: int) -> int:
        return self.rate * m + self.margin

    def bound(self, m: int) -> int:
        b = self.hard(m)
        if self.target is not None:
            b = min(b, self.rate * max(self.target - m, 0) + self.margin)
        return b


def _zeros(nvars: int, bound: int) -> np.ndarray:
    arr = np.empty((2 * bound + 1,) * nvars, dtype=object)
    arr.fill(0)
    return arr


def _overlap(dst_bound: int, src_bound: int, shift: int) -> tuple[slice, slice] | None:
    # src index i (exponent i - src_bound) lands at exponent i - src_bound + shift
    lo = max(-src_bound + shift, -dst_bound)
    hi = min(src_bound + shift, dst_bound)
    if lo > hi:
        return None
    return (
        slice(lo + dst_bound, hi + dst_bound + 1),
        slice(lo - shift + src_bound, hi - shift + src_bound + 1),
    )


def add_shifted(dst: np.ndarray, dst_bound: int, src: np.ndarray, src_bound: int,
                shift: Sequence[int], sign: int = 1) -> None:
    """``dst += sign * shift(src)`` in place, clipped to the destination box."""
    dsl, ssl = [], []
    for s in shift:
        ov = _overlap(dst_bound, src_bound, s)
        if ov is None:
            return
        dsl.append(ov[0])
        ssl.append(ov[1])
    dsl, ssl = tuple(dsl), tuple(ssl)
    if sign > 0:
        dst[dsl] += src[ssl]
    else:
        dst[dsl] -= src[ssl]


def _resize(arr: np.ndarray, bound: int, new_bound: int) -> np.ndarray:
    out = _zeros(arr.ndim, new_bound)
    add_shifted(out, new_bound, arr, bound, (0,) * arr.ndim)
    return out


class LaurentPoly:
    """Laurent polynomial in ``nvars`` circle variables with int coefficients."""

    __slots__ = ("nvars", "bound", "data")

    def __init__(self, nvars: int, bound: int, data: np.ndarray | None = None):
        if nvars not in (1, 2):
            raise ValueError("nvars must be 1 or 2")
        self.nvars = nvars
        self.bound = bound
        self.data = _zeros(nvars, bound) if data is None else data

    @classmethod
    def from_terms(cls, terms: Mapping, nvars: int, bound: int | None = None) -> "LaurentPoly":
        keys = [(k,) if isinstance(k, int) else tuple(k) for k in terms]
        need = max((abs(e) for k in keys for e in k), default=0)
        if bound is None:
            bound = need
        elif need > bound:
            raise CapOverflow(f"exponent {need} exceeds cap {bound}")
        p = cls(nvars, bound)
        for k, c in zip(keys, terms.values()):
            if len(k) != nvars:
                raise ValueError(f"exponent {k} has wrong arity")
            p.data[tuple(e + bound for e in k)] += int(c)
        return p

    @classmethod
    def constant(cls, c: int, nvars: int, bound: int = 0) -> "LaurentPoly":
        return cls.from_terms({(0,) * nvars: c}, nvars, bound)

    def terms(self) -> dict[tuple[int, ...], int]:
        out = {}
        for idx in zip(*np.nonzero(self.data != 0)):
            out[tuple(int(i) - self.bound for i in idx)] = int(self.data[idx])
        return out

    def coefficient(self, exps: Iterable[int]) -> int:
        exps = tuple(exps)
        if any(abs(e) > self.bound for e in exps):
            return 0
        return int(self.data[tuple(e + self.bound for e in exps)])

    def constant_term(self) -> int:
        return self.coefficient((0,) * self.nvars)

    def max_abs_exponent(self) -> int:
        return max((max(abs(e) for e in k) for k in self.terms()), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms() == other.terms()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.terms()})"


def weyl_multiply_array(arr: np.ndarray, bound: int, new_bound: int) -> np.ndarray:
    """Multiply by ``(2 - z - 1/z)`` along every axis."""
    cur, cur_bound = arr, bound
    for axis in range(arr.ndim):
        out = _zeros(arr.ndim, new_bound)
        for s, sign, times in ((0, 1, 2), (1, -1, 1), (-1, -1, 1)):
            shift = [0] * arr.ndim
            shift[axis] = s
            for _ in range(times):
                add_shifted(out, new_bound, cur, cur_bound, shift, sign)
        cur, cur_bound = out, new_bound
    return cur


def weyl_constant_term(arr: np.ndarray, bound: int) -> int:
    """Constant term of ``prod_axes (2 - z - 1/z) * arr`` without forming it."""
    weights = {0: 2, 1: -1, -1: -1}
    total = 0
    if arr.ndim == 1:
        for a, wa in weights.items():
            if abs(a) <= bound:
                total += wa * arr[bound - a]
    else:
        for a, wa in weights.items():
            for b, wb in weights.items():
                if abs(a) <= bound and abs(b) <= bound:
                    total += wa * wb * arr[bound - a, bound - b]
    return int(total)


class LaurentSeries2:
    """Truncated series in ``t`` with :class:`LaurentPoly` coefficients."""

    def __init__(self, coeffs: Sequence[LaurentPoly], caps: CapPolicy):
        if not coeffs:
            raise ValueError("need at least the t^0 coefficient")
        nvars = coeffs[0].nvars
        fitted = []
        for m, c in enumerate(coeffs):
            if c.nvars != nvars:
                raise ValueError("mixed variable counts")
            if c.max_abs_exponent() > caps.hard(m):
                raise CapOverflow(f"degree {m} coefficient exceeds cap {caps.hard(m)}")
            b = caps.bound(m)
            fitted.append(LaurentPoly(nvars, b, _resize(c.data, c.bound, b)))
        self.nvars = nvars
        self.caps = caps
        self.coeffs = fitted

    @classmethod
    def one(cls, nvars: int, order: int, caps: CapPolicy) -> "LaurentSeries2":
        coeffs = [LaurentPoly.constant(1, nvars)] + [LaurentPoly(nvars, 0) for _ in range(order)]
        return cls(coeffs, caps)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, m: int) -> LaurentPoly:
        return self.coeffs[m]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries2):
            return NotImplemented
        return self.coeffs == other.coeffs


def _check_factor(f: Factor, nvars: int, caps: CapPolicy) -> None:
    if f.nvars != nvars:
        raise ValueError(f"factor has {f.nvars} circle variables, series has {nvars}")
    if max((abs(e) for e in f.exps), default=0) > caps.rate * f.tpow:
        raise CapOverflow(
            f"factor {f} grows exponents faster than the cap rate {caps.rate} per t-power"
        )


def divide_by_factor(s: LaurentSeries2, f: Factor) -> LaurentSeries2:
    """``s / (1 - sign t^a m)`` via ``c'_k = c_k + sign * m * c'_{k-a}``."""
    _check_factor(f, s.nvars, s.caps)
    out: list[LaurentPoly] = []
    for m, c in enumerate(s.coeffs):
        data = c.data.copy()
        if m >= f.tpow:
            prev = out[m - f.tpow]
            add_shifted(data, c.bound, prev.data, prev.bound, f.exps, f.sign)
        out.append(LaurentPoly(s.nvars, c.bound, data))
    res = LaurentSeries2.__new__(LaurentSeries2)
    res.nvars, res.caps, res.coeffs = s.nvars, s.caps, out
    return res


def multiply_factor(s: LaurentSeries2, f: Factor) -> LaurentSeries2:
    """``s * (1 - sign t^a m)``; the inverse of :func:`divide_by_factor`."""
    _check_factor(f, s.nvars, s.caps)
    out = []
    for m, c in enumerate(s.coeffs):
        data = c.data.copy()
        if m >= f.tpow:
            prev = s.coeffs[m - f.tpow]
            add_shifted(data, c.bound, prev.data, prev.bound, f.exps, -f.sign)
        out.append(LaurentPoly(s.nvars, c.bound, data))
    res = LaurentSeries2.__new__(LaurentSeries2)
    res.nvars, res.caps, res.coeffs = s.nvars, s.caps, out
    return res


def multiply_weyl_factor(s: LaurentSeries2) -> LaurentSeries2:
    """Multiply every coefficient by ``(2 - z - 1/z)`` (and ``(2 - w - 1/w)``)."""
    out = []
    for m, c in enumerate(s.coeffs):
        if c.max_abs_exponent() + 1 > s.caps.hard(m):
            raise CapOverflow(f"Weyl factor pushes degree {m} past cap {s.caps.hard(m)}")
        out.append(LaurentPoly(s.nvars, c.bound, weyl_multiply_array(c.data, c.bound, c.bound)))
    res = LaurentSeries2.__new__(LaurentSeries2)
    res.nvars, res.caps, res.coeffs = s.nvars, s.caps, out
    return res


def constant_term(s: LaurentSeries2) -> TruncatedSeries:
    return TruncatedSeries([c.constant_term() for c in s.coeffs], s.order)


def expand_product(factors: Sequence[Factor], nvars: int, order: int,
                   caps: CapPolicy) -> LaurentSeries2:
    """Full (non-streaming) expansion of ``prod 1/f`` to ``order``."""
    s = LaurentSeries2.one(nvars, order, caps)
    for f in factors:
        s = divide_by_factor(s, f)
    return s


def stream_product(factors: Sequence[Factor], nvars: int, order: int,
                   caps: CapPolicy) -> Iterator[tuple[int, int, np.ndarray]]:
    """Yield ``(m, bound, coefficient array)`` of ``prod 1/f`` degree by degree.

    Factor ``i`` only needs its own last ``tpow`` outputs, so memory stays at
    one box per factor (times its t-power) no matter how large ``order`` is.
    """
    for f in factors:
        _check_factor(f, nvars, caps)
    history: list[deque] = [deque(maxlen=f.tpow) for f in factors]
    for m in range(order + 1):
        b = caps.bound(m)
        cur = _zeros(nvars, b)
        if m == 0:
            cur[(b,) * nvars] = 1
        for f, hist in zip(factors, history):
            if m >= f.tpow and len(hist) == f.tpow:
                prev_b, prev = hist[0]
                cur = cur.copy()
                add_shifted(cur, b, prev, prev_b, f.exps, f.sign)
            hist.append((b, cur))
        yield m, b, cur


def weyl_constant_terms(factors: Sequence[Factor], nvars: int, order: int,
                        rate: int) -> list[int]:
    """Constant terms of ``Weyl * prod 1/f`` for degrees ``0..order``."""
    caps = CapPolicy(rate=rate, target=order)
    return [weyl_constant_term(arr, b) for _, b, arr in stream_product(factors, nvars, order, caps)]
