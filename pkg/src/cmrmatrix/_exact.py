"""Exact rational linear algebra backed by sympy's ``DomainMatrix`` over QQ."""
from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _to_dm(rows) -> DomainMatrix:
    rows = [[Fraction(x) if not isinstance(x, np.integer) else Fraction(int(x)) for x in row] for row in rows]
    m = len(rows)
    return DomainMatrix([[QQ(int(x.numerator), int(x.denominator)) for x in row] for row in rows], (m, m), QQ)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def det(rows) -> Fraction:
    return _to_fraction(_to_dm(rows).det())


def inverse(rows):
    """Inverse as an ``object`` array of ``Fraction``, or ``None`` if singular."""
    dm = _to_dm(rows)
    if dm.det() == 0:
        return None
    inv = dm.inv().to_Matrix().tolist()
    return np.array([[Fraction(int(x.p), int(x.q)) for x in row] for row in inv], dtype=object)
