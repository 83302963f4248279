"""Molien series of SO(3) wr Z2 acting on (2l+1) x (2l+1) matrices.

The Haar integral over each coset is reduced to the maximal torus by the
Weyl integration formula and evaluated as a constant term: expand
``1/det(I - t D(g))`` in ``t`` with Laurent coefficients in the torus
variables, multiply by ``(2 - z - 1/z)`` per circle, read off the
exponent-zero coefficient and divide by ``|W| = 2`` per SO(3) factor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .invariants import tau_matrix
from .laurent import Factor, weyl_constant_terms
from .seriesring import (
    CyclotomicDenominator,
    TruncatedSeries,
    divide_by_scalar_factor,
)
from .wigner import random_euler, rotation_matrix, wigner_d


class NormalizationFailure(ArithmeticError):
    """A Molien coefficient came out negative or non-integral."""


GAMMA0 = "gamma0"
GAMMA1 = "gamma1"
FULL = "full"

ELL1_DENOMINATOR = CyclotomicDenominator.from_degrees([2, 3, 4])
Q0 = CyclotomicDenominator.from_degrees(
    [2, 3, 4, 4, 4, 5, 6, 6, 7, 7, 8, 8, 9, 9, 10, 10, 11, 12, 13]
)


@dataclass(frozen=True)
class CosetSpec:
    """Eigenvalue data of ``det(I - t D)`` on one coset, plus its normalisation.

    ``scalar_prefactor`` holds ``(sign, tpow)`` for factors
    ``(1 - sign t^tpow)`` free of circle variables.
    """

    ell: int
    coset: str
    scalar_prefactor: tuple[tuple[int, int], ...]
    circle_factors: tuple[Factor, ...]
    nvars: int
    normalization: Fraction = field(default=Fraction(1))

    @property
    def dimension(self) -> int:
        return sum(p for _, p in self.scalar_prefactor) + sum(f.tpow for f in self.circle_factors)

    def evaluate(self, t: complex, angles: Sequence[float]) -> complex:
        """``det(I - t D)`` from the factor list at the given rotation angles."""
        vars_ = [cmath.exp(1j * a) for a in angles]
        val = complex(1.0)
        for sign, tpow in self.scalar_prefactor:
            val *= 1 - sign * t ** tpow
        for f in self.circle_factors:
            mono = complex(1.0)
            for v, e in zip(vars_, f.exps):
                mono *= v ** e
            val *= 1 - f.sign * t ** f.tpow * mono
        return val


def gamma0_spec(ell: int) -> CosetSpec:
    _check_ell(ell)
    rng = range(-ell, ell + 1)
    return CosetSpec(
        ell, GAMMA0, (), tuple(Factor(1, 1, (j, k)) for j in rng for k in rng), 2, Fraction(1, 4)
    )


def gamma1_spec(ell: int) -> CosetSpec:
    _check_ell(ell)
    if ell == 1:
        scalar = ((1, 1), (1, 1), (-1, 1))
        circle = [(1, 1, 1), (1, 1, -1), (1, 2, 1), (1, 2, -1)]
    else:
        scalar = ((1, 1),) * 3 + ((-1, 1),) * 2
        circle = (
            [(1, 2, 1)] * 2 + [(1, 2, -1)] * 2 + [(1, 1, 1)] * 2 + [(1, 1, -1)] * 2
            + [(-1, 1, 1), (-1, 1, -1), (1, 1, 2), (1, 1, -2), (1, 2, 3), (1, 2, -3)]
        )
    return CosetSpec(
        ell, GAMMA1, scalar, tuple(Factor(s, a, (b,)) for s, a, b in circle), 1, Fraction(1, 2)
    )


def _check_ell(ell: int) -> None:
    if ell not in (1, 2):
        raise ValueError(f"ell must be 1 or 2, got {ell}")


def coset_series(spec: CosetSpec, order: int) -> TruncatedSeries:
    if order < 0:
        raise ValueError("order must be nonnegative")
    ct = weyl_constant_terms(spec.circle_factors, spec.nvars, order, spec.ell)
    s = TruncatedSeries([spec.normalization * c for c in ct], order)
    for sign, tpow in spec.scalar_prefactor:
        s = divide_by_scalar_factor(s, sign, tpow)
    _check_counts(s, f"{spec.coset} l={spec.ell}")
    return s


def _check_counts(s: TruncatedSeries, what: str) -> None:
    for k, c in enumerate(s.coeffs):
        if c.denominator != 1 or c < 0:
            raise NormalizationFailure(f"{what}: coefficient of t^{k} is {c}")


def gamma0_series(ell: int, order: int) -> TruncatedSeries:
    return coset_series(gamma0_spec(ell), order)


def gamma1_series(ell: int, order: int) -> TruncatedSeries:
    return coset_series(gamma1_spec(ell), order)


def full_series(ell: int, order: int) -> TruncatedSeries:
    s = (gamma0_series(ell, order) + gamma1_series(ell, order)).scale(Fraction(1, 2))
    _check_counts(s, f"full l={ell}")
    return s


def molien_series(group: str, ell: int, order: int) -> TruncatedSeries:
    fn = {GAMMA0: gamma0_series, GAMMA1: gamma1_series, FULL: full_series}.get(group)
    if fn is None:
        raise ValueError(f"unknown group {group!r}")
    return fn(ell, order)


def rotation_angle(r: np.ndarray) -> float:
    return math.acos(max(-1.0, min(1.0, (np.trace(r) - 1.0) / 2.0)))


def action_matrix(ell: int, coset: str, g_euler, h_euler) -> np.ndarray:
    """Matrix of ``(g, h)`` or ``(g, h) tau`` on ``vec(S)``, row-major."""
    m = np.kron(wigner_d(ell, *g_euler), wigner_d(ell, *h_euler).conj())
    if coset == GAMMA1:
        m = m @ tau_matrix(ell)
    return m


def char_poly_check(ell: int, coset: str, samples: Iterable, t_sample: float) -> float:
    """Max ``|det(I - t D~) - factor product|`` over sampled ``(g, h)`` Euler pairs."""
    spec = gamma0_spec(ell) if coset == GAMMA0 else gamma1_spec(ell)
    n = (2 * ell + 1) ** 2
    worst = 0.0
    for g, h in samples:
        direct = np.linalg.det(np.eye(n) - t_sample * action_matrix(ell, coset, g, h))
        rg, rh = rotation_matrix(*g), rotation_matrix(*h)
        if coset == GAMMA0:
            angles = (rotation_angle(rg), rotation_angle(rh))
        else:
            angles = (rotation_angle(rg @ rh),)
        worst = max(worst, abs(direct - spec.evaluate(t_sample, angles)))
    return worst


def random_pairs(n: int, seed) -> list:
    rng = np.random.default_rng(seed)
    return [(random_euler(rng), random_euler(rng)) for _ in range(n)]


def su2_label_table(max_dim: int) -> list[tuple[int, list[tuple[Fraction, Fraction]]]]:
    """Labels ``(l1, l2)``, ``l1 <= l2``, of SU(2) x SU(2) irreps that descend to SO(4).

    Only dimensions with at least one such label are listed.
    """
    if max_dim < 1:
        raise ValueError("max_dim must be positive")
    out = []
    for n in range(1, max_dim + 1):
        labels = []
        for a in range(1, n + 1):
            if n % a:
                continue
            b = n // a
            if a > b or (a + b) % 2:
                continue
            labels.append((Fraction(a - 1, 2), Fraction(b - 1, 2)))
        if labels:
            out.append((n, labels))
    return out
