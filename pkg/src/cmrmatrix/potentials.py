"""Degenerate Calogero-Moser pair functions.

For each family the potential ``v``, the Lax pair function ``w`` and its
derivative ``w'`` are given in closed form:

=============  ===============  =================  ==========================
family         v(x)             w(x)               w'(x)
=============  ===============  =================  ==========================
rational       x**-2            1/x                -1/x**2
hyperbolic     a²/sinh²(ax)     a/sinh(ax)         -a² cosh(ax)/sinh²(ax)
trigonometric  a²/sin²(ax)      a/sin(ax)          -a² cos(ax)/sin²(ax)
=============  ===============  =================  ==========================

In all three cases ``v == w**2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

GUARD = 1e-8

KINDS = ("rational", "hyperbolic", "trigonometric")


class SingularityError(ValueError):
    """A coordinate difference hit the singular locus of the potential."""

    def __init__(self, message, pair=None, step=None):
        super().__init__(message)
        self.pair = pair
        self.step = step


@dataclass(frozen=True)
class PotentialKind:
    variant: str = "rational"
    a: float = 1.0

    def __post_init__(self):
        if self.variant not in KINDS:
            raise ValueError(f"unknown potential {self.variant!r}; expected one of {KINDS}")
        if self.variant != "rational" and not self.a > 0:
            raise ValueError(f"coupling a must be positive, got {self.a}")

    @property
    def code(self) -> int:
        return {
            "rational": kernels.RATIONAL,
            "hyperbolic": kernels.HYPERBOLIC,
            "trigonometric": kernels.TRIGONOMETRIC,
        }[self.variant]

    def chart(self, xi):
        """The quantity whose vanishing marks the singular locus."""
        if self.variant == "trigonometric":
            return np.sin(self.a * np.asarray(xi))
        return np.asarray(xi)

    def __str__(self):
        if self.variant == "rational":
            return "rational"
        return f"{self.variant}(a={self.a:g})"


RATIONAL = PotentialKind("rational")


def check_regular(kind: PotentialKind, xi, pair=None, guard: float = GUARD) -> None:
    s = np.abs(kind.chart(xi))
    if np.any(s < guard):
        if pair is None and np.ndim(xi):
            pair = tuple(int(i) for i in np.argwhere(s < guard)[0])
        raise SingularityError(
            f"{kind} potential is singular at pair {pair} (|chart| = {np.min(s):.3g} < {guard:g})",
            pair=pair,
        )


def pair_functions(kind: PotentialKind, xi, pair=None, guard: float = GUARD):
    """Vectorised ``(v, w, w')`` on an array of coordinate differences."""
    xi = np.asarray(xi, dtype=float)
    check_regular(kind, xi, pair, guard)
    a = kind.a
    if kind.variant == "rational":
        w = 1.0 / xi
        wp = -1.0 / xi**2
    elif kind.variant == "hyperbolic":
        s = np.sinh(a * xi)
        w = a / s
        wp = -(a**2) * np.cosh(a * xi) / s**2
    else:
        s = np.sin(a * xi)
        w = a / s
        wp = -(a**2) * np.cos(a * xi) / s**2
    return w * w, w, wp


def potential_values(kind: PotentialKind, xi: float, pair=None) -> tuple[float, float, float]:
    """Return ``(v(xi), w(xi), w'(xi))`` for a single coordinate difference."""
    v, w, wp = pair_functions(kind, float(xi), pair)
    return float(v), float(w), float(wp)


def difference_matrix(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q[:, None] - q[None, :]


def pair_tables(kind: PotentialKind, q, guard: float = GUARD):
    """``w(q_k - q_l)`` and ``w'(q_k - q_l)`` as n x n tables, zero on the diagonal."""
    d = difference_matrix(q)
    n = d.shape[0]
    off = ~np.eye(n, dtype=bool)
    w = np.zeros((n, n))
    wp = np.zeros((n, n))
    if n > 1:
        s = np.abs(kind.chart(d))
        s[~off] = np.inf
        if np.any(s < guard):
            k, l = (int(i) for i in np.argwhere(s < guard)[0])
            raise SingularityError(
                f"{kind} potential is singular at pair ({k}, {l}): q_k - q_l = {d[k, l]:.3g}",
                pair=(k, l),
            )
        _, w[off], wp[off] = pair_functions(kind, d[off], guard=0.0)
    return w, wp
