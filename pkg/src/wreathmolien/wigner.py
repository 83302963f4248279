"""Exact Clebsch-Gordan coefficients and 3j symbols, and Wigner D matrices.

Coefficients are computed from the Racah closed form with exact rational
arithmetic and returned as :class:`Surd` values ``sign * sqrt(radicand)``.
Phases follow Condon-Shortley; rotations are active, Euler angles zyz.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np


class InvalidSpin(ValueError):
    pass


@dataclass(frozen=True)
class Surd:
    """Exact real number ``sign * sqrt(radicand)``."""

    sign: int
    radicand: Fraction

    def __post_init__(self):
        r = Fraction(self.radicand)
        if r < 0:
            raise ValueError("radicand must be nonnegative")
        sign = 0 if r == 0 else int(self.sign)
        if r and sign not in (1, -1):
            raise ValueError("nonzero surd needs sign +1 or -1")
        object.__setattr__(self, "radicand", r)
        object.__setattr__(self, "sign", sign)

    @classmethod
    def zero(cls) -> "Surd":
        return cls(0, Fraction(0))

    @classmethod
    def from_rational(cls, q) -> "Surd":
        q = Fraction(q)
        return cls((q > 0) - (q < 0), q * q)

    def is_zero(self) -> bool:
        return self.sign == 0

    def square(self) -> Fraction:
        return self.radicand

    def signed_square(self) -> Fraction:
        return self.sign * self.radicand

    def __neg__(self) -> "Surd":
        return Surd(-self.sign, self.radicand)

    def __mul__(self, other) -> "Surd":
        if not isinstance(other, Surd):
            other = Surd.from_rational(other)
        return Surd(self.sign * other.sign, self.radicand * other.radicand)

    __rmul__ = __mul__

    def __float__(self) -> float:
        return self.sign * math.sqrt(self.radicand)

    def to_json(self) -> dict:
        return {"sign": self.sign, "radicand": str(self.radicand)}

    def __repr__(self) -> str:
        return f"Surd({'-' if self.sign < 0 else ''}sqrt({self.radicand}))"


def _half(x) -> Fraction:
    f = Fraction(x)
    if (2 * f).denominator != 1:
        raise InvalidSpin(f"{x} is not a multiple of 1/2")
    return f


def _int(x: Fraction) -> int:
    if x.denominator != 1:
        raise InvalidSpin(f"{x} is not an integer")
    return int(x)


def _valid(j: Fraction, m: Fraction) -> bool:
    if j < 0:
        raise InvalidSpin(f"negative spin {j}")
    if (j + m).denominator != 1:
        raise InvalidSpin(f"j={j}, m={m}: j + m must be an integer")
    return abs(m) <= j


@functools.lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return math.factorial(n)


def _racah(j1: Fraction, m1: Fraction, j2: Fraction, m2: Fraction,
           j: Fraction, m: Fraction) -> Surd:
    if m1 + m2 != m:
        return Surd.zero()
    if not (abs(j1 - j2) <= j <= j1 + j2) or (j1 + j2 + j).denominator != 1:
        return Surd.zero()
    if not (abs(m1) <= j1 and abs(m2) <= j2 and abs(m) <= j):
        return Surd.zero()
    f = lambda x: _fact(_int(x))
    pref = (2 * j + 1) * Fraction(f(j + j1 - j2) * f(j - j1 + j2) * f(j1 + j2 - j),
                                  f(j1 + j2 + j + 1))
    pref *= f(j + m) * f(j - m) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2)
    total = Fraction(0)
    for k in range(0, _int(j1 + j2 - j) + 1):
        args = (j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k)
        if any(a < 0 for a in args):
            continue
        den = _fact(k)
        for a in args:
            den *= f(a)
        total += Fraction((-1) ** k, den)
    if total == 0:
        return Surd.zero()
    return Surd(1 if total > 0 else -1, pref * total * total)


def clebsch_gordan(j1, m1, j2, m2, j, m) -> Surd:
    """``<j m | j1 m1; j2 m2>``, exact."""
    j1, m1, j2, m2, j, m = map(_half, (j1, m1, j2, m2, j, m))
    ok = _valid(j1, m1) & _valid(j2, m2) & _valid(j, m)
    if not ok:
        return Surd.zero()
    return _racah(j1, m1, j2, m2, j, m)


@dataclass(frozen=True)
class ThreeJKey:
    j1: Fraction
    j2: Fraction
    j3: Fraction
    m1: Fraction
    m2: Fraction
    m3: Fraction

    def __post_init__(self):
        for name in ("j1", "j2", "j3", "m1", "m2", "m3"):
            object.__setattr__(self, name, _half(getattr(self, name)))
        for j, m in ((self.j1, self.m1), (self.j2, self.m2), (self.j3, self.m3)):
            if not _valid(j, m):
                raise InvalidSpin(f"|m|={abs(m)} exceeds j={j}")

    @property
    def js(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.j1, self.j2, self.j3

    @property
    def ms(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.m1, self.m2, self.m3


def three_j_raw(j1, j2, j3, m1, m2, m3) -> Surd:
    """3j symbol straight from its definition through a Clebsch-Gordan value."""
    j1, j2, j3, m1, m2, m3 = map(_half, (j1, j2, j3, m1, m2, m3))
    if m1 + m2 + m3 != 0:
        for j, m in ((j1, m1), (j2, m2), (j3, m3)):
            _valid(j, m)
        return Surd.zero()
    cg = clebsch_gordan(j1, m1, j2, m2, j3, -m3)
    if cg.is_zero():
        return cg
    phase = -1 if _int(j1 - j2 - m3) % 2 else 1
    return Surd(phase * cg.sign, cg.radicand / (2 * j3 + 1))


def _canonical(js, ms):
    """Representative of a 3j key under column permutations and m -> -m.

    Returns ``(js, ms, phase)`` with the original symbol equal to
    ``phase`` times the symbol at the representative.
    """
    odd = _int(sum(js)) % 2
    best = None
    for perm, parity in (((0, 1, 2), 0), ((1, 2, 0), 0), ((2, 0, 1), 0),
                         ((1, 0, 2), 1), ((0, 2, 1), 1), ((2, 1, 0), 1)):
        pj = tuple(js[i] for i in perm)
        for flip in (0, 1):
            pm = tuple((-ms[i] if flip else ms[i]) for i in perm)
            phase = -1 if odd and (parity + flip) % 2 else 1
            cand = (pj, pm)
            if best is None or cand > best[:2]:
                best = (pj, pm, phase)
    return best


@functools.lru_cache(maxsize=None)
def _three_j_cached(js, ms) -> Surd:
    return three_j_raw(*js, *ms)


def three_j(key: ThreeJKey | tuple) -> Surd:
    """Wigner 3j symbol, cached on a symmetry-reduced key.

    Accepts a :class:`ThreeJKey` or a 6-tuple ``(j1, j2, j3, m1, m2, m3)``.
    """
    if not isinstance(key, ThreeJKey):
        key = ThreeJKey(*key)
    if sum(key.ms) != 0:
        return Surd.zero()
    js, ms, phase = _canonical(key.js, key.ms)
    val = _three_j_cached(js, ms)
    return -val if phase < 0 else val


def three_j_float(j1, j2, j3, m1, m2, m3) -> float:
    return float(three_j((j1, j2, j3, m1, m2, m3)))


@functools.lru_cache(maxsize=None)
def three_j_tensor(j1: int, j2: int, j3: int) -> np.ndarray:
    """Array ``W[m1 + j1, m2 + j2, m3 + j3]`` of 3j values for integer spins."""
    out = np.zeros((2 * j1 + 1, 2 * j2 + 1, 2 * j3 + 1))
    for m1 in range(-j1, j1 + 1):
        for m2 in range(-j2, j2 + 1):
            m3 = -m1 - m2
            if abs(m3) <= j3:
                out[m1 + j1, m2 + j2, m3 + j3] = float(three_j((j1, j2, j3, m1, m2, m3)))
    out.flags.writeable = False
    return out


def cg_rows(j1: int, j2: int) -> list[tuple[int, int]]:
    return [(j, m) for j in range(abs(j1 - j2), j1 + j2 + 1) for m in range(-j, j + 1)]


def cg_columns(j1: int, j2: int) -> list[tuple[int, int]]:
    # m1-major, so columns line up with np.kron(D(j1), D(j2))
    return [(m1, m2) for m1 in range(-j1, j1 + 1) for m2 in range(-j2, j2 + 1)]


def cg_matrix_exact(j1: int, j2: int) -> list[list[Surd]]:
    return [[clebsch_gordan(j1, m1, j2, m2, j, m) for m1, m2 in cg_columns(j1, j2)]
            for j, m in cg_rows(j1, j2)]


def cg_matrix(j1: int, j2: int) -> np.ndarray:
    return np.array([[float(c) for c in row] for row in cg_matrix_exact(j1, j2)])


def small_d(ell: int, beta: float) -> np.ndarray:
    """Wigner small-d matrix ``d[m + ell, m' + ell]``."""
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    n = 2 * ell + 1
    d = np.zeros((n, n))
    f = math.factorial
    for m in range(-ell, ell + 1):
        for mp in range(-ell, ell + 1):
            norm = math.sqrt(f(ell + m) * f(ell - m) * f(ell + mp) * f(ell - mp))
            total = 0.0
            for k in range(max(0, mp - m), min(ell + mp, ell - m) + 1):
                den = f(ell + mp - k) * f(k) * f(m - mp + k) * f(ell - m - k)
                total += ((-1) ** (m - mp + k) * c ** (2 * ell + mp - m - 2 * k)
                          * s ** (m - mp + 2 * k) / den)
            d[m + ell, mp + ell] = norm * total
    return d


def wigner_d(ell: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """``D^(ell)(alpha, beta, gamma)`` with entries ``e^{-i m a} d_{mm'}(b) e^{-i m' g}``."""
    ms = np.arange(-ell, ell + 1)
    return (np.exp(-1j * ms * alpha)[:, None] * small_d(ell, beta)
            * np.exp(-1j * ms * gamma)[None, :])


def rotation_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """The 3x3 rotation ``Rz(alpha) Ry(beta) Rz(gamma)``."""
    def rz(a):
        return np.array([[math.cos(a), -math.sin(a), 0], [math.sin(a), math.cos(a), 0], [0, 0, 1]])

    def ry(b):
        return np.array([[math.cos(b), 0, math.sin(b)], [0, 1, 0], [-math.sin(b), 0, math.cos(b)]])

    return rz(alpha) @ ry(beta) @ rz(gamma)


def euler_from_matrix(r: np.ndarray) -> tuple[float, float, float]:
    """zyz Euler angles of a rotation matrix (inverse of :func:`rotation_matrix`)."""
    sin_beta = math.hypot(r[0, 2], r[1, 2])
    beta = math.atan2(sin_beta, r[2, 2])
    if sin_beta > 1e-12:
        alpha = math.atan2(r[1, 2], r[0, 2])
        gamma = math.atan2(r[2, 1], -r[2, 0])
    else:
        alpha = math.atan2(r[1, 0], r[0, 0]) if r[2, 2] > 0 else math.atan2(-r[1, 0], -r[0, 0])
        gamma = 0.0
    return alpha, beta, gamma


def random_euler(rng: np.random.Generator) -> tuple[float, float, float]:
    """Euler angles of a Haar-random rotation."""
    alpha, gamma = rng.uniform(0, 2 * math.pi, size=2)
    beta = math.acos(rng.uniform(-1.0, 1.0))
    return float(alpha), beta, float(gamma)


def compose_euler(g1, g2) -> tuple[float, float, float]:
    return euler_from_matrix(rotation_matrix(*g1) @ rotation_matrix(*g2))


def cg_block_check(j1: int, j2: int, rotations: Iterable) -> float:
    """Largest error in ``C (D1 x D2) C^T = diag(D^(|j1-j2|), ..., D^(j1+j2))``."""
    c = cg_matrix(j1, j2)
    err = 0.0
    for euler in rotations:
        big = c @ np.kron(wigner_d(j1, *euler), wigner_d(j2, *euler)) @ c.T
        expected = np.zeros_like(big)
        start = 0
        for j in range(abs(j1 - j2), j1 + j2 + 1):
            n = 2 * j + 1
            expected[start:start + n, start:start + n] = wigner_d(j, *euler)
            start += n
        err = max(err, float(np.max(np.abs(big - expected))))
    return err
