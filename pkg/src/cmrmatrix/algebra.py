"""gl(n) conventions and tensor arithmetic on gl(n)^{(x)2} and gl(n)^{(x)3}.

Matrices are plain ``numpy`` arrays.  A two-tensor is an array ``T`` of shape
``(n, n, n, n)`` where ``T[i, j, k, l]`` is the coefficient of
``e_ij (x) e_kl``; a three-tensor has shape ``(n,)*6`` in the same layout.
Indices are 0-based.  Every routine works for integer, float, complex and
``object`` (e.g. ``Fraction``) dtypes, so integer inputs stay exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import kernels

__all__ = [
    "Root",
    "roots",
    "simple_roots",
    "elementary",
    "basis_element",
    "gl_basis",
    "expand_in_basis",
    "tensor_product",
    "swap_factors",
    "bracket_action",
    "to_matrix",
    "from_matrix",
    "cybe_residual",
]


@dataclass(frozen=True, order=True)
class Root:
    """The root ``lambda_k - lambda_l`` of gl(n), 0-based."""

    k: int
    l: int

    def __post_init__(self):
        if self.k == self.l:
            raise ValueError(f"not a root: k == l == {self.k}")
        if self.k < 0 or self.l < 0:
            raise ValueError(f"negative root index in {self}")

    def __neg__(self) -> "Root":
        return Root(self.l, self.k)

    def check(self, n: int) -> None:
        if max(self.k, self.l) >= n:
            raise IndexError(f"{self} out of range for gl({n})")

    def __call__(self, diag) -> object:
        """Evaluate the root on a diagonal matrix (or its diagonal vector)."""
        d = np.asarray(diag)
        if d.ndim == 2:
            d = np.diagonal(d)
        return d[self.k] - d[self.l]


def roots(n: int) -> Iterator[Root]:
    for k in range(n):
        for l in range(n):
            if k != l:
                yield Root(k, l)


def simple_roots(n: int) -> list[Root]:
    return [Root(i, i + 1) for i in range(n - 1)]


def elementary(n: int, k: int, l: int, dtype=np.int64) -> np.ndarray:
    if not (0 <= k < n and 0 <= l < n):
        raise IndexError(f"e_({k},{l}) out of range for gl({n})")
    m = np.zeros((n, n), dtype=dtype)
    m[k, l] = 1
    return m


def basis_element(kind: str, index, n: int, dtype=np.int64) -> np.ndarray:
    """Return ``H_k``, ``E_alpha``, ``H_alpha`` or ``K_alpha``.

    ``kind`` is one of ``"H"``, ``"E"``, ``"H_alpha"``, ``"K_alpha"``.  For
    ``"H"`` the index is an integer ``k``; otherwise it is a :class:`Root`
    (or a ``(k, l)`` pair).
    """
    if kind == "H":
        return elementary(n, index, index, dtype)
    root = index if isinstance(index, Root) else Root(*index)
    root.check(n)
    k, l = root.k, root.l
    if kind == "E":
        return elementary(n, k, l, dtype)
    if kind == "H_alpha":
        return elementary(n, k, k, dtype) - elementary(n, l, l, dtype)
    if kind == "K_alpha":
        return elementary(n, k, k, dtype) + elementary(n, l, l, dtype)
    raise ValueError(f"unknown basis kind {kind!r}")


def gl_basis(n: int) -> list[np.ndarray]:
    """``{H_k} u {E_alpha}`` in row-major ``e_kl`` order."""
    out = []
    for k in range(n):
        for l in range(n):
            out.append(basis_element("H", k, n) if k == l else basis_element("E", Root(k, l), n))
    return out


def expand_in_basis(X: np.ndarray) -> np.ndarray:
    """Coefficients of ``X`` on :func:`gl_basis`, solved as a linear system."""
    X = np.asarray(X)
    n = X.shape[0]
    B = np.stack([b.reshape(-1) for b in gl_basis(n)], axis=1).astype(float)
    return np.linalg.solve(B, X.reshape(-1))


def _check_square(A: np.ndarray, n: int | None = None) -> int:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if n is not None and A.shape[0] != n:
        raise ValueError(f"dimension mismatch: {A.shape[0]} != {n}")
    return A.shape[0]


def tensor_product(A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    _check_square(B, _check_square(A))
    return np.einsum("ij,kl->ijkl", A, B)


def swap_factors(T) -> np.ndarray:
    return np.asarray(T).transpose(2, 3, 0, 1)


def bracket_action(T, A, slot: int) -> np.ndarray:
    """``[T, A (x) 1]`` for ``slot=1`` and ``[T, 1 (x) A]`` for ``slot=2``."""
    T, A = np.asarray(T), np.asarray(A)
    _check_square(A, T.shape[0])
    if slot == 1:
        return np.einsum("ixkl,xj->ijkl", T, A) - np.einsum("ix,xjkl->ijkl", A, T)
    if slot == 2:
        return np.einsum("ijkx,xl->ijkl", T, A) - np.einsum("kx,ijxl->ijkl", A, T)
    raise ValueError(f"slot must be 1 or 2, got {slot}")


def to_matrix(T) -> np.ndarray:
    """The ``n^2 x n^2`` Kronecker-layout matrix of a two-tensor."""
    T = np.asarray(T)
    n = T.shape[0]
    return T.transpose(0, 2, 1, 3).reshape(n * n, n * n)


def from_matrix(M) -> np.ndarray:
    M = np.asarray(M)
    n = int(round(np.sqrt(M.shape[0])))
    return M.reshape(n, n, n, n).transpose(0, 2, 1, 3)


def cybe_residual(R) -> tuple[np.ndarray, float]:
    """``[R12, R13] + [R12, R23] + [R13, R23]`` and its max-abs entry.

    Integer tensors are contracted exactly by the compiled kernel when it is
    available.
    """
    R = np.asarray(R)
    if R.dtype.kind in "iu":
        X = kernels.cybe_int(np.ascontiguousarray(R, dtype=np.int64))
    else:
        X = _cybe_einsum(R)
    return X, (abs(X).max() if X.size else 0)


def _cybe_einsum(r: np.ndarray) -> np.ndarray:
    # output index layout: (a,b) first factor, (c,d) second, (e,f) third
    x = np.einsum("axcd,xbef->abcdef", r, r)
    x -= np.einsum("axef,xbcd->abcdef", r, r)
    x += np.einsum("abcy,ydef->abcdef", r, r)
    x -= np.einsum("cyef,abyd->abcdef", r, r)
    x += np.einsum("abez,cdzf->abcdef", r, r)
    x -= np.einsum("cdez,abzf->abcdef", r, r)
    return x
