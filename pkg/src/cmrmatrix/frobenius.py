"""The Frobenius subalgebra F_n of gl(n) and the expansion of R' over it.

F_n is spanned by ``e_kl`` with ``k < n`` (matrices with vanishing last
row).  With the wedge convention ``T_a ^ T_b = T_a (x) T_b - T_b (x) T_a`` and
an antisymmetric coefficient matrix summed over all ordered pairs, the
expansion ``R' = sum_ab M_ab T_a ^ T_b`` is unique, and ``M^-1`` is
proportional to the 2-coboundary ``G_ab = Lambda_n([T_a, T_b])`` with
``Lambda_n(T) = tr(J_n T)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _exact
from .algebra import elementary
from .rmatrix import constant_R


@dataclass(frozen=True)
class FrobeniusBasis:
    n: int
    pairs: tuple  # 0-based (k, l) of each T_a, row-major

    @property
    def elements(self) -> list[np.ndarray]:
        return [elementary(self.n, k, l) for k, l in self.pairs]

    def __len__(self):
        return len(self.pairs)

    def index(self, k: int, l: int) -> int:
        return self.pairs.index((k, l))


def frobenius_basis(n: int) -> FrobeniusBasis:
    if n < 2:
        raise ValueError(f"F_n needs n >= 2, got {n}")
    return FrobeniusBasis(n, tuple((k, l) for k in range(n - 1) for l in range(n)))


def principal_nilpotent(n: int) -> np.ndarray:
    """``J_n = sum_k e_{k+1,k}``."""
    return np.eye(n, k=-1, dtype=np.int64)


def lambda_functional(T, n: int):
    T = np.asarray(T)
    if T.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {T.shape}")
    return np.trace(principal_nilpotent(n) @ T)


def commutator(A, B):
    return A @ B - B @ A


def coboundary_matrix(basis: FrobeniusBasis) -> np.ndarray:
    """``G_ab = Lambda_n([T_a, T_b])`` as an integer matrix."""
    T = basis.elements
    n = basis.n
    return np.array([[lambda_functional(commutator(a, b), n) for b in T] for a in T], dtype=np.int64)


def in_frobenius_square(Rp) -> bool:
    """True when both tensor factors of ``Rp`` have vanishing last row."""
    Rp = np.asarray(Rp)
    return not (np.any(Rp[-1] != 0) or np.any(Rp[:, :, -1] != 0))


def expansion_matrix(Rp, basis: FrobeniusBasis) -> np.ndarray:
    """Antisymmetric ``M`` (``Fraction`` entries) with ``Rp = sum_ab M_ab T_a ^ T_b``."""
    Rp = np.asarray(Rp)
    n = basis.n
    if Rp.shape != (n,) * 4:
        raise ValueError(f"tensor shape {Rp.shape} does not match n={n}")
    if not in_frobenius_square(Rp):
        raise ValueError("tensor does not lie in F_n (x) F_n")
    if np.any(Rp + Rp.transpose(2, 3, 0, 1) != 0):
        raise ValueError("tensor is not antisymmetric")
    # each unordered pair is counted twice: coefficient of T_a (x) T_b is 2 M_ab
    m = len(basis)
    M = np.empty((m, m), dtype=object)
    for a, (i, j) in enumerate(basis.pairs):
        for b, (k, l) in enumerate(basis.pairs):
            M[a, b] = Fraction(Rp[i, j, k, l]) / 2
    return M


def rebuild_from_expansion(M, basis: FrobeniusBasis) -> np.ndarray:
    n = basis.n
    out = np.zeros((n,) * 4, dtype=object)
    out[...] = Fraction(0)
    for a, (i, j) in enumerate(basis.pairs):
        for b, (k, l) in enumerate(basis.pairs):
            out[i, j, k, l] += M[a, b]
            out[k, l, i, j] -= M[a, b]
    return out


class FrobeniusCheck(NamedTuple):
    kappa: Fraction | float | None
    residual: float
    invertible: bool
    M: np.ndarray
    G: np.ndarray


def frobenius_inverse_check(n: int, exact: bool = True) -> FrobeniusCheck:
    """Compare ``M^-1`` (from ``constant_R(n)``) with the coboundary ``G``.

    ``kappa`` is the least-squares scalar with ``M^-1 ~ kappa G``; the residual
    is ``max |M^-1 - kappa G|``.  A singular ``M`` is reported through
    ``invertible=False`` rather than raised.
    """
    basis = frobenius_basis(n)
    M = expansion_matrix(constant_R(n), basis)
    G = coboundary_matrix(basis)
    if exact:
        Minv = _exact.inverse(M)
        if Minv is None:
            return FrobeniusCheck(None, float("inf"), False, M, G)
        num = sum(Minv[a, b] * int(G[a, b]) for a in range(len(basis)) for b in range(len(basis)))
        den = int((G * G).sum())
        kappa = Fraction(num) / den
        residual = max(abs(Minv[a, b] - kappa * int(G[a, b])) for a in range(len(basis)) for b in range(len(basis)))
        return FrobeniusCheck(kappa, float(residual), True, M, G)
    Mf = M.astype(float)
    if abs(np.linalg.det(Mf)) < 1e-12:
        return FrobeniusCheck(None, float("inf"), False, M, G)
    Minv = np.linalg.inv(Mf)
    kappa = float((Minv * G).sum() / (G * G).sum())
    return FrobeniusCheck(kappa, float(np.abs(Minv - kappa * G).max()), True, M, G)


def subalgebra_closure_defect(n: int) -> int:
    """Number of basis pairs whose commutator leaves F_n (zero for a subalgebra)."""
    T = frobenius_basis(n).elements
    return sum(1 for a in T for b in T if np.any(commutator(a, b)[-1] != 0))
