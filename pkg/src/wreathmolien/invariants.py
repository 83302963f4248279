"""Order tensors, the wreath-product action on them, and explicit invariants.

An order tensor is a complex ``(2l+1) x (2l+1)`` matrix ``S`` in the
spherical basis, indexed ``S[m + l, m' + l]``, obeying the reality
condition ``conj(S[m, m']) = (-1)^(m+m') S[-m, -m']``. The subgroup acts
by ``S -> D(g) S D(h)^dagger`` and the transposition by
``S[m, m'] -> (-1)^(m+m') S[-m', -m]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .wigner import three_j_tensor, wigner_d


class NonRealResult(ArithmeticError):
    pass


class RankUnstable(ArithmeticError):
    pass


REALITY_TOL = 1e-12
IMAG_TOL = 1e-9
RANK_THRESHOLD = 1e-8

DIAGONAL_PAIRS = [(j, j) for j in range(5)]
OFF_DIAGONAL_PAIRS = [(0, 2), (0, 4), (1, 3), (2, 4)]


def _signs(ell: int) -> np.ndarray:
    ms = np.arange(-ell, ell + 1)
    return (-1.0) ** np.add.outer(ms, ms)


def reality_defect(s: np.ndarray) -> float:
    ell = (s.shape[0] - 1) // 2
    mirrored = _signs(ell) * s[::-1, ::-1]
    return float(np.max(np.abs(np.conj(s) - mirrored), initial=0.0))


@dataclass(frozen=True)
class OrderTensor:
    ell: int
    entries: np.ndarray

    def __post_init__(self):
        n = 2 * self.ell + 1
        if self.entries.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix")
        d = reality_defect(self.entries)
        if d > REALITY_TOL * max(1.0, float(np.max(np.abs(self.entries), initial=0.0))):
            raise ValueError(f"reality condition violated by {d:.3e}")

    @classmethod
    def zeros(cls, ell: int) -> "OrderTensor":
        n = 2 * ell + 1
        return cls(ell, np.zeros((n, n), dtype=complex))

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def scaled(self, lam: float) -> "OrderTensor":
        return OrderTensor(self.ell, lam * self.entries)


def _mat(s) -> np.ndarray:
    return s.entries if isinstance(s, OrderTensor) else np.asarray(s)


def random_order_tensor(ell: int, seed) -> OrderTensor:
    """Gaussian sample from the ``(2l+1)^2``-dimensional real space of order tensors.

    Draw a full complex Gaussian matrix, keep one entry from each pair
    ``{(m, m'), (-m, -m')}`` and rebuild its partner from the reality
    condition; the centre entry is forced real.
    """
    rng = np.random.default_rng(seed)
    n = 2 * ell + 1
    raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = np.zeros((n, n), dtype=complex)
    for m in range(-ell, ell + 1):
        for mp in range(-ell, ell + 1):
            if (m, mp) > (-m, -mp):
                v = raw[m + ell, mp + ell]
                s[m + ell, mp + ell] = v
                s[-m + ell, -mp + ell] = (-1) ** (m + mp) * np.conj(v)
    s[ell, ell] = raw[ell, ell].real
    return OrderTensor(ell, s)


def real_parameter_count(ell: int) -> int:
    """Dimension of the real fixed space of the reality involution, by counting orbits."""
    count = 0
    for m in range(-ell, ell + 1):
        for mp in range(-ell, ell + 1):
            if (m, mp) == (-m, -mp):
                count += 1
            elif (m, mp) > (-m, -mp):
                count += 2
    return count


def act_gamma0(g_euler, h_euler, s: OrderTensor) -> OrderTensor:
    dg = wigner_d(s.ell, *g_euler)
    dh = wigner_d(s.ell, *h_euler)
    return OrderTensor(s.ell, dg @ s.entries @ dh.conj().T)


def act_tau(s: OrderTensor) -> OrderTensor:
    return OrderTensor(s.ell, _signs(s.ell) * s.entries[::-1, ::-1].T)


def tau_matrix(ell: int) -> np.ndarray:
    """Matrix of the transposition on ``vec(S)`` (row-major flattening)."""
    n = 2 * ell + 1
    t = np.zeros((n * n, n * n))
    for m in range(-ell, ell + 1):
        for mp in range(-ell, ell + 1):
            t[(m + ell) * n + mp + ell, (-mp + ell) * n + (-m + ell)] = (-1) ** (m + mp)
    return t


# Unitary taking Cartesian components to spherical ones at l = 1, rows m = -1, 0, 1.
SPHERICAL_FROM_CARTESIAN = np.array([
    [1 / math.sqrt(2), 1j / math.sqrt(2), 0],
    [0, 0, 1],
    [-1 / math.sqrt(2), 1j / math.sqrt(2), 0],
])


def order_tensor_from_cartesian(a: np.ndarray) -> OrderTensor:
    u = SPHERICAL_FROM_CARTESIAN
    return OrderTensor(1, u @ a @ u.conj().T)


def cartesian_from_order_tensor(s: OrderTensor) -> np.ndarray:
    u = SPHERICAL_FROM_CARTESIAN
    return u.conj().T @ s.entries @ u


def _real(value: complex, scale: float, what: str) -> float:
    if abs(value.imag) > IMAG_TOL * max(1.0, scale):
        raise NonRealResult(f"{what} has imaginary part {value.imag:.3e}")
    return float(value.real)


def inv2(s) -> float:
    """The quadratic invariant ``||S||^2``."""
    m = _mat(s)
    return float(np.sum(np.abs(m) ** 2))


def inv3(s) -> float:
    """The cubic invariant, a double 3j(2 2 2) contraction of ``S x S x S``."""
    m = _mat(s)
    if m.shape != (5, 5):
        raise ValueError("the cubic invariant is defined for l = 2")
    w = three_j_tensor(2, 2, 2)
    val = np.einsum("abc,def,ad,be,cf->", w, w, m, m, m)
    return _real(complex(val), float(np.linalg.norm(m)) ** 3, "I3")


def supertensor(s, j: int, jp: int) -> np.ndarray:
    """``U^(j,j')[k + j, k' + j']``: two copies of ``S`` coupled through 3j symbols."""
    m = _mat(s)
    if m.shape != (5, 5):
        raise ValueError("super-tensors are defined for l = 2")
    return np.einsum("abk,del,ad,be->kl", three_j_tensor(2, 2, j), three_j_tensor(2, 2, jp), m, m)


@lru_cache(maxsize=None)
def _contraction_signs(j: int, jp: int) -> np.ndarray:
    ks, kps = np.arange(-j, j + 1), np.arange(-jp, jp + 1)
    return (-1.0) ** np.add.outer(ks, kps)


def _contract(u: np.ndarray, j: int, jp: int) -> complex:
    return complex(np.sum(_contraction_signs(j, jp) * u * u[::-1, ::-1]))


def inv4(s, j: int, jp: int) -> float:
    """``I4^(j,j') = sum (-1)^(k+k') U[k,k'] U[-k,-k']``."""
    u = supertensor(s, j, jp)
    scale = float(np.linalg.norm(_mat(s))) ** 4
    return _real(_contract(u, j, jp), scale, f"I4^({j},{jp})")


def inv4_sym(s, j: int, jp: int) -> float:
    return 0.5 * (inv4(s, j, jp) + inv4(s, jp, j))


def inv4_skew(s, j: int, jp: int) -> float:
    return 0.5 * (inv4(s, j, jp) - inv4(s, jp, j))


def quartic_table(s) -> dict[tuple[int, int], float]:
    """All 25 ``I4^(j,j')`` for ``0 <= j, j' <= 4``."""
    return {(j, jp): inv4(s, j, jp) for j in range(5) for jp in range(5)}


# Each identity: list of (coefficient, kind, j, j'); kind in {"d", "sym", "skew"}.
# The eight reference relations among the quartic candidates. The last three
# do not hold as written; see CORRECTED_QUARTIC_IDENTITIES.
QUARTIC_IDENTITIES = [
    [(4, "d", 0, 0), (9, "d", 1, 1), (5, "d", 2, 2), (-14, "d", 3, 3), (-54, "d", 4, 4)],
    [(60, "d", 0, 0), (9, "d", 1, 1), (245, "d", 2, 2), (-784, "d", 3, 3), (-280, "sym", 0, 2)],
    [(212, "d", 0, 0), (-909, "d", 1, 1), (2695, "d", 2, 2), (-3136, "d", 3, 3),
     (-1512, "sym", 0, 4)],
    [(100, "d", 0, 0), (99, "d", 1, 1), (-1225, "d", 2, 2), (784, "d", 3, 3),
     (-1008, "sym", 1, 3)],
    [(220, "d", 0, 0), (-387, "d", 1, 1), (-535, "d", 2, 2), (112, "d", 3, 3),
     (-2160, "sym", 2, 4)],
    [(5, "skew", 0, 2), (-9, "skew", 0, 4)],
    [(5, "skew", 0, 2), (-6, "skew", 1, 3)],
    [(7, "skew", 0, 2), (18, "skew", 2, 4)],
]

# The skew relations with the sign of I4{0,2} flipped. Written as above, each
# combination evaluates to twice its largest term instead of zero.
CORRECTED_QUARTIC_IDENTITIES = QUARTIC_IDENTITIES[:5] + [
    [(5, "skew", 0, 2), (9, "skew", 0, 4)],
    [(5, "skew", 0, 2), (6, "skew", 1, 3)],
    [(7, "skew", 0, 2), (-18, "skew", 2, 4)],
]


def _term_value(table, kind: str, j: int, jp: int) -> float:
    if kind == "d":
        return table[j, jp]
    if kind == "sym":
        return 0.5 * (table[j, jp] + table[jp, j])
    return 0.5 * (table[j, jp] - table[jp, j])


def verify_identities(s, identities=QUARTIC_IDENTITIES) -> list[tuple[float, float]]:
    """``(residual, largest term magnitude)`` for each quartic identity."""
    table = quartic_table(s)
    out = []
    for ident in identities:
        terms = [c * _term_value(table, kind, j, jp) for c, kind, j, jp in ident]
        out.append((abs(sum(terms)), max(abs(t) for t in terms)))
    return out


def quartic_candidates(subset: str = "all13") -> list[tuple[str, int, int]]:
    diag = [("d", j, j) for j in range(5)]
    sym = [("sym", j, jp) for j, jp in OFF_DIAGONAL_PAIRS]
    skew = [("skew", j, jp) for j, jp in OFF_DIAGONAL_PAIRS]
    if subset == "all13":
        return diag + sym + skew
    if subset == "tau_invariant":
        return diag + sym
    if subset == "skew":
        return skew
    raise ValueError(f"unknown subset {subset!r}")


def numerical_rank(values: np.ndarray, threshold: float = RANK_THRESHOLD) -> int:
    """Rank from singular values, refusing when one sits within 10x of the cut."""
    cols = np.linalg.norm(values, axis=0)
    cols[cols == 0] = 1.0
    sv = np.linalg.svd(values / cols, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    rel = sv / sv[0]
    ambiguous = rel[(rel > threshold / 10) & (rel < threshold * 10)]
    if ambiguous.size:
        raise RankUnstable(f"singular values {ambiguous} too close to cut {threshold}")
    return int(np.sum(rel > threshold))


def degree4_rank(n_samples: int, seed, subset: str = "all13") -> int:
    if n_samples < 20:
        raise ValueError("need at least 20 samples")
    cands = quartic_candidates(subset)
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_samples):
        table = quartic_table(random_order_tensor(2, rng))
        rows.append([_term_value(table, kind, j, jp) for kind, j, jp in cands])
    return numerical_rank(np.array(rows))


def degree_rank(fn, n_samples: int, seed) -> int:
    """Rank of the sample-value vectors of a single invariant (0 or 1)."""
    rng = np.random.default_rng(seed)
    vals = np.array([[fn(random_order_tensor(2, rng))] for _ in range(n_samples)])
    return numerical_rank(vals)


def ell1_invariants(a: np.ndarray) -> tuple[float, float, float]:
    a = np.asarray(a, dtype=float)
    b = a.T @ a
    return float(np.trace(b)), float(np.linalg.det(a)), float(np.trace(b @ b))


def cayley_hamilton_cube_trace(i2: float, p2: float, det_b: float) -> float:
    """``tr(B^3)`` for a 3x3 ``B`` from ``tr B``, ``tr B^2`` and ``det B``.

    Taking the trace of ``B^3 - e1 B^2 + e2 B - e3 I = 0`` gives
    ``tr B^3 = e1 p2 - e2 e1 + 3 e3`` with ``e2 = (e1^2 - p2) / 2``.
    """
    e2 = 0.5 * (i2 * i2 - p2)
    return i2 * p2 - e2 * i2 + 3.0 * det_b
