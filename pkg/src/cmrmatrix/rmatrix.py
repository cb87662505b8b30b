"""Dynamical r-matrices of the Calogero-Moser Lax matrix and their gauge transforms.

Conventions: roots are :class:`~cmrmatrix.algebra.Root` objects (0-based),
Cartan elements are stored as length-n diagonal vectors, a gauge field is an
array ``A`` of shape ``(n, n, n)`` with ``A[k]`` the matrix ``A_k(q)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from . import _exact
from .algebra import Root, bracket_action, roots, simple_roots, swap_factors
from .lax import PhasePoint, build_lax, lax_poisson_tensor
from .potentials import PotentialKind, SingularityError, pair_tables

log = logging.getLogger(__name__)

CASES = ("I", "II")
C_MODES = ("I", "II", "general")
Q_MODES = ("zero", "sln")
PATH_GUARD = 1e-6


class UnsupportedConfiguration(ValueError):
    pass


# -- Cartan data -------------------------------------------------------------


def _is_exact(values) -> bool:
    return all(isinstance(v, (int, np.integer, Fraction)) for v in np.ravel(values))


def _cartan_matrix(n: int) -> np.ndarray:
    m = n - 1
    return 2 * np.eye(m, dtype=np.int64) - np.eye(m, k=1, dtype=np.int64) - np.eye(m, k=-1, dtype=np.int64)


def _coroot_combination(c, n: int):
    """``sum_j c_j H_{alpha_j}`` as a diagonal vector."""
    d = [0] * n
    for j, cj in enumerate(c):
        d[j] += cj
        d[j + 1] -= cj
    return d


@dataclass
class CartanMap:
    """Assignment ``alpha -> C_alpha`` of traceless diagonal matrices."""

    n: int
    values: dict = field(default_factory=dict)

    def __getitem__(self, root: Root) -> np.ndarray:
        return np.asarray(self.values[root])

    def matrix(self, root: Root) -> np.ndarray:
        return np.diag(self[root])

    def as_float_table(self) -> np.ndarray:
        """``table[i, k, l] = lambda_i(C_{lambda_k - lambda_l})``, zero for k == l."""
        n = self.n
        t = np.zeros((n, n, n))
        for r, v in self.values.items():
            t[:, r.k, r.l] = np.asarray(v, dtype=float)
        return t

    def condition_residuals(self) -> tuple[float, float]:
        """Max violations of ``C_{-a} = -C_a`` and ``b(C_a) = a(C_b)``."""
        antisym = 0.0
        sym = 0.0
        rs = list(roots(self.n))
        for a in rs:
            antisym = max(antisym, float(np.abs(np.asarray(self[a] + self[-a], dtype=float)).max()))
            for b in rs:
                sym = max(sym, abs(float(b(self[a]) - a(self[b]))))
        return antisym, sym

    @classmethod
    def constant(cls, n: int, sign: int) -> "CartanMap":
        """``C_alpha = sign * H_alpha`` for every root (case II: +1, case I: -1)."""
        vals = {}
        for r in roots(n):
            d = [0] * n
            d[r.k] = sign
            d[r.l] = -sign
            vals[r] = np.array(d, dtype=np.int64)
        return cls(n, vals)


def extend_simple_C(simple_values, n: int, tol: float = 1e-12) -> CartanMap:
    """Extend simple-root values ``C_{alpha_i}`` to every root.

    For a non-simple root ``alpha`` the value is the traceless diagonal
    ``C_alpha`` solving ``alpha_i(C_alpha) = alpha(C_{alpha_i})`` for every
    simple root.  The simple values must themselves satisfy
    ``alpha_i(C_{alpha_j}) = alpha_j(C_{alpha_i})``; otherwise no extension
    satisfies the symmetry condition and ``ValueError`` is raised.

    Integer or ``Fraction`` input is solved exactly.
    """
    simple = [np.diagonal(v) if np.ndim(v) == 2 else np.asarray(v) for v in simple_values]
    if len(simple) != n - 1:
        raise ValueError(f"need {n - 1} simple-root values for gl({n}), got {len(simple)}")
    for i, (v, raw) in enumerate(zip(simple, simple_values)):
        if v.shape != (n,):
            raise ValueError(f"simple value {i} has shape {v.shape}, expected ({n},)")
        if np.ndim(raw) == 2 and np.any(np.asarray(raw) - np.diag(v) != 0):
            raise ValueError(f"simple value {i} is not diagonal")
        if abs(float(sum(v))) > tol:
            raise ValueError(f"simple value {i} is not traceless (trace {float(sum(v)):g})")
    sroots = simple_roots(n)
    for i, a in enumerate(sroots):
        for j, b in enumerate(sroots):
            if abs(float(a(simple[j]) - b(simple[i]))) > tol:
                raise ValueError(
                    f"simple values violate alpha_{i}(C_{j}) = alpha_{j}(C_{i}) "
                    f"({float(a(simple[j])):g} != {float(b(simple[i])):g})"
                )

    exact = _is_exact([x for v in simple for x in v])
    A = _cartan_matrix(n)
    if exact:
        Ainv = _exact.inverse(A.tolist())
        if Ainv is None:
            raise RuntimeError("Cartan pairing matrix is singular")
    else:
        if abs(np.linalg.det(A)) < 0.5:
            raise RuntimeError("Cartan pairing matrix is singular")
        Ainv = np.linalg.inv(A.astype(float))

    def normalize(d):
        if not exact:
            return np.asarray(d, dtype=float)
        d = [Fraction(x) for x in d]
        if all(x.denominator == 1 for x in d):
            return np.array([int(x) for x in d], dtype=np.int64)
        return np.array(d, dtype=object)

    values = {}
    for r in roots(n):
        if r in sroots:
            values[r] = normalize(simple[sroots.index(r)])
            continue
        target = [r(s) for s in simple]
        if exact:
            c = [sum(Ainv[i, j] * Fraction(target[j]) for j in range(n - 1)) for i in range(n - 1)]
        else:
            c = Ainv @ np.asarray(target, dtype=float)
        values[r] = normalize(_coroot_combination(c, n))
    return CartanMap(n, values)


def random_simple_values(n: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Random admissible simple-root values, drawn via a symmetric pairing matrix."""
    m = n - 1
    S = rng.normal(size=(m, m))
    S = S + S.T
    Ainv = np.linalg.inv(_cartan_matrix(n).astype(float))
    return [np.array(_coroot_combination(Ainv @ S[:, j], n), dtype=float) for j in range(m)]


# -- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class RMatrixConfig:
    kind: PotentialKind = field(default_factory=PotentialKind)
    c_mode: str = "I"
    simple_values: tuple | None = None
    q_mode: str = "zero"
    omega: float = 0.0

    def __post_init__(self):
        if self.c_mode not in C_MODES:
            raise ValueError(f"c_mode must be one of {C_MODES}, got {self.c_mode!r}")
        if self.q_mode not in Q_MODES:
            raise ValueError(f"q_mode must be one of {Q_MODES}, got {self.q_mode!r}")
        if self.c_mode == "general" and self.simple_values is None:
            raise ValueError("c_mode 'general' needs simple_values")

    def cartan_map(self, n: int) -> CartanMap:
        if self.c_mode == "I":
            return CartanMap.constant(n, -1)
        if self.c_mode == "II":
            return CartanMap.constant(n, +1)
        if len(self.simple_values) != n - 1:
            raise ValueError(f"config carries {len(self.simple_values)} simple values, gl({n}) needs {n - 1}")
        return extend_simple_C(self.simple_values, n)


# -- dynamical r-matrix --------------------------------------------------------


def build_dynamical_R(q, cfg: RMatrixConfig, C: CartanMap | None = None, Q=None) -> np.ndarray:
    """``sum (w'/w) E_a (x) E_-a + 1/2 sum w_a (C_a - K_a) (x) E_a + 1 (x) Q``.

    ``Q`` defaults to the choice named by ``cfg.q_mode``; an explicit matrix
    overrides it.
    """
    q = np.asarray(q, dtype=float)
    n = q.size
    C = cfg.cartan_map(n) if C is None else C
    w, wp = pair_tables(cfg.kind, q)
    off = ~np.eye(n, dtype=bool)
    ratio = np.zeros((n, n))
    ratio[off] = wp[off] / w[off]
    R = np.zeros((n,) * 4)
    k_idx, l_idx = np.nonzero(off)
    R[k_idx, l_idx, l_idx, k_idx] = ratio[k_idx, l_idx]
    # (C_a - K_a) (x) E_a for a = (k, l): diagonal in the first slot
    cdiff = C.as_float_table() if n > 1 else np.zeros((n, n, n))
    eye = np.eye(n)
    cdiff = cdiff - eye[:, :, None] - eye[:, None, :]
    diag = 0.5 * w[None, :, :] * np.where(off[None], cdiff, 0.0)
    i = np.arange(n)
    R[i, i] += diag
    if Q is None:
        Q = w / n if cfg.q_mode == "sln" else None
    if Q is not None:
        R = R.astype(np.result_type(R, np.asarray(Q)))
        R[i, i] += np.asarray(Q)[None]
    return R


def rmatrix_residual(x: PhasePoint, R: np.ndarray, kind: PotentialKind) -> float:
    """Max-abs entry of ``{L1, L2} - [R12, L1] + [R21, L2]``."""
    L = build_lax(x, kind)
    res = lax_poisson_tensor(x, kind) - bracket_action(R, L, 1) + bracket_action(swap_factors(R), L, 2)
    return float(np.abs(res).max()) if res.size else 0.0


# -- gauge potentials -----------------------------------------------------------


def _check_case(case: str) -> None:
    if case not in CASES:
        raise ValueError(f"case must be 'I' or 'II', got {case!r}")


def build_gauge_potential(q, kind: PotentialKind, case: str = "I", omega: float = 0.0) -> np.ndarray:
    """``A_k = sum_l Psi_k^l H_l + sum_a w_a b_k^a E_a`` stacked over k.

    Case I: ``b_k^(m,l) = delta_km + omega``, ``Psi_k^l = -w'/w (q_l - q_k)``.
    Case II: ``b_k^(m,l) = delta_kl + omega``, ``Psi_k^l = +w'/w (q_l - q_k)``.
    """
    _check_case(case)
    q = np.asarray(q, dtype=float)
    n = q.size
    w, wp = pair_tables(kind, q)
    off = ~np.eye(n, dtype=bool)
    ratio = np.zeros((n, n))
    ratio[off] = wp[off] / w[off]
    sign = -1.0 if case == "I" else 1.0
    eye = np.eye(n)
    A = np.zeros((n, n, n))
    # b[k, m, l]
    b = (eye[:, :, None] if case == "I" else eye[:, None, :]) + omega
    A += b * w[None]
    idx = np.arange(n)
    # Psi_k^l sits on the (l, l) diagonal entry of A_k; ratio[l, k] = (w'/w)(q_l - q_k)
    A[:, idx, idx] += sign * ratio.T
    return A


def _fd_steps(q: np.ndarray) -> np.ndarray:
    return 1e-6 * np.maximum(1.0, np.abs(q))


def _partials(f, q: np.ndarray) -> list:
    """Central-difference partials ``[d f / d q_k for k]``."""
    out = []
    for k, h in enumerate(_fd_steps(q)):
        e = np.zeros_like(q)
        e[k] = h
        out.append((f(q + e) - f(q - e)) / (2 * h))
    return out


def curvature_residual(q, kind: PotentialKind, case: str = "I", omega: float = 0.0) -> float:
    """Max-abs entry of ``d_k A_l - d_l A_k + [A_l, A_k]`` over all pairs."""
    q = np.asarray(q, dtype=float)
    n = q.size
    A = build_gauge_potential(q, kind, case, omega)
    dA = _partials(lambda x: build_gauge_potential(x, kind, case, omega), q)
    worst = 0.0
    for k in range(n):
        for l in range(k + 1, n):
            F = dA[k][l] - dA[l][k] + A[l] @ A[k] - A[k] @ A[l]
            worst = max(worst, float(np.abs(F).max()))
    return worst


def gauge_condition_residual(q, cfg: RMatrixConfig, C: CartanMap | None = None,
                             gauge_case: str | None = None) -> float:
    """Max-abs entry over k of the flatness condition on ``R`` and ``A_k``.

    ``d_k R + sum_l d_l A_k (x) H_l + [R, A_k (x) 1 + 1 (x) A_k] + sum_l A_l (x) [H_l, A_k]``

    The gauge field is the one attached to ``cfg.c_mode``; for
    ``c_mode='general'`` a ``gauge_case`` must be named explicitly.
    """
    if cfg.q_mode != "zero":
        raise UnsupportedConfiguration("gauge flattening is only known for Q = 0")
    if gauge_case is None:
        if cfg.c_mode == "general":
            raise UnsupportedConfiguration(
                "no gauge potential is known for general C; pass gauge_case to test one anyway"
            )
        gauge_case = cfg.c_mode
    q = np.asarray(q, dtype=float)
    n = q.size
    C = cfg.cartan_map(n) if C is None else C

    def R_at(x):
        return build_dynamical_R(x, cfg, C)

    def A_at(x):
        return build_gauge_potential(x, cfg.kind, gauge_case, cfg.omega)

    R = R_at(q)
    A = A_at(q)
    dR = _partials(R_at, q)
    dA = _partials(A_at, q)
    H = np.eye(n)
    worst = 0.0
    for k in range(n):
        X = dR[k] + bracket_action(R, A[k], 1) + bracket_action(R, A[k], 2)
        for l in range(n):
            Hl = np.diag(H[l])
            X = X + np.einsum("ij,ab->ijab", dA[l][k], Hl)
            X = X + np.einsum("ij,ab->ijab", A[l], Hl @ A[k] - A[k] @ Hl)
        worst = max(worst, float(np.abs(X).max()))
    return worst


# -- rational case: phi(q) and the constant r-matrix -------------------------


def _check_distinct(q, guard: float = 0.0) -> None:
    n = len(q)
    for k in range(n):
        for l in range(k + 1, n):
            if abs(q[k] - q[l]) <= guard:
                raise SingularityError(f"coincident coordinates q_{k} = q_{l}", pair=(k, l))


def elementary_symmetric(values) -> list:
    """``[e_0, e_1, ..., e_m]`` of the given values, in their own number type."""
    e = [1]
    for x in values:
        e = [1] + [e[m] + x * e[m - 1] for m in range(1, len(e))] + [x * e[-1]]
    return e


def build_phi(q) -> np.ndarray:
    """Gauge matrix of the rational case.

    Row ``j`` (1-based, ``j < n``) column ``k`` holds the elementary symmetric
    polynomial of degree ``n - j`` in the coordinates other than ``q_k``; the
    last row is all ones.  Integer/``Fraction`` input gives an exact result.
    """
    q = list(q)
    n = len(q)
    _check_distinct(q)
    cols = []
    for k in range(n):
        e = elementary_symmetric(q[:k] + q[k + 1:])
        cols.append([e[n - j] for j in range(1, n + 1)])
    phi = np.array(cols, dtype=object).T
    if not _is_exact(q):
        return phi.astype(float)
    if all(isinstance(x, (int, np.integer)) for x in phi.flat):
        return phi.astype(np.int64)
    return phi


def vandermonde_product(q):
    out = 1
    n = len(q)
    for j in range(n):
        for k in range(j + 1, n):
            out *= q[k] - q[j]
    return out


def phi_gauge_check(q) -> float:
    """Max over k of ``|d_k phi + phi A_k|`` (rational, case I, omega = 0)."""
    q = np.asarray(q, dtype=float)
    _check_distinct(q)
    A = build_gauge_potential(q, PotentialKind("rational"), "I", 0.0)
    phi = build_phi(q)
    dphi = _partials(build_phi, q)
    return max((float(np.abs(d + phi @ Ak).max()) for d, Ak in zip(dphi, A)), default=0.0)


def _inverse(g: np.ndarray) -> np.ndarray:
    if g.dtype == object or g.dtype.kind in "iu":
        ginv = _exact.inverse(g.tolist())
        if ginv is None:
            raise SingularityError("gauge matrix is singular")
        return ginv
    if np.linalg.cond(g) > 1e12:
        raise SingularityError("gauge matrix is singular")
    return np.linalg.inv(g)


def gauge_transform_R(g, R, A) -> np.ndarray:
    """``(g (x) g) (R + sum_k A_k (x) H_k) (g (x) g)^-1``.

    Integer/``Fraction`` inputs are transformed exactly.
    """
    g = np.asarray(g)
    n = g.shape[0]
    ginv = _inverse(g)
    X = np.array(R, dtype=np.result_type(R, A, ginv))
    for k in range(n):
        X[:, :, k, k] += A[k]
    out = np.einsum("ia,abcd,bj->ijcd", g, X, ginv)
    return np.einsum("kc,ijcd,dl->ijkl", g, out, ginv)


def rational_case_I_exact(q):
    """``R(q)`` and ``A_k(q)`` of the rational case I in ``Fraction`` arithmetic."""
    q = [Fraction(x) for x in q]
    n = len(q)
    _check_distinct(q)
    R = np.zeros((n,) * 4, dtype=object)
    R[...] = Fraction(0)
    A = np.zeros((n, n, n), dtype=object)
    A[...] = Fraction(0)
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            w = 1 / (q[k] - q[l])
            # w'/w = -1/xi for w = 1/xi
            R[k, l, l, k] += -w
            R[k, k, k, l] -= w
            A[k, k, l] += w
            A[k, l, l] -= -1 / (q[l] - q[k])
    return R, A


def rational_gauge_transform(q, exact: bool = False) -> np.ndarray:
    """Gauge transform of the rational case-I r-matrix by ``phi(q)``.

    With ``exact=True`` the coordinates are converted to ``Fraction`` and the
    whole computation is rational.
    """
    if exact:
        q = [Fraction(x) for x in q]
        R, A = rational_case_I_exact(q)
        return gauge_transform_R(build_phi(q), R, A)
    q = np.asarray(q, dtype=float)
    cfg = RMatrixConfig(PotentialKind("rational"), "I")
    R = build_dynamical_R(q, cfg)
    A = build_gauge_potential(q, cfg.kind, "I", 0.0)
    return gauge_transform_R(build_phi(q), R, A)


def constant_R_index_set(n: int) -> list[tuple[int, int, int, int]]:
    """1-based quadruples ``(a, b, c, d)`` with ``a + c + 1 = b + d``,
    ``1 <= b <= a < n``, ``b <= c < n``, ``1 <= d <= n``."""
    out = []
    for a in range(1, n):
        for b in range(1, a + 1):
            for c in range(b, n):
                d = a + c + 1 - b
                if 1 <= d <= n:
                    out.append((a, b, c, d))
    return out


def constant_R(n: int) -> np.ndarray:
    """``sum_S (e_ab (x) e_cd - e_cd (x) e_ab)`` as an integer two-tensor."""
    R = np.zeros((n,) * 4, dtype=np.int64)
    S = constant_R_index_set(n)
    if not S:
        log.info("constant_R(%d): index set is empty, R' = 0", n)
    for a, b, c, d in S:
        R[a - 1, b - 1, c - 1, d - 1] += 1
        R[c - 1, d - 1, a - 1, b - 1] -= 1
    return R


# -- integrating the gauge transformation ---------------------------------------


def _path_point_check(kind: PotentialKind, q: np.ndarray, sign0: np.ndarray, guard: float) -> None:
    s = kind.chart(q[:, None] - q[None, :])
    n = q.size
    bad = (np.abs(s) < guard) | (np.sign(s) != sign0)
    bad[np.eye(n, dtype=bool)] = False
    if bad.any():
        k, l = (int(i) for i in np.argwhere(bad)[0])
        raise SingularityError(f"gauge path crosses the singular locus of pair ({k}, {l})", pair=(k, l))


def integrate_gauge_path(points, kind: PotentialKind, case: str = "I", omega: float = 0.0,
                         steps: int = 1000, guard: float = PATH_GUARD) -> np.ndarray:
    """Solve ``dg/ds = -g sum_k q_k'(s) A_k(q(s))`` along a piecewise-linear path.

    Starts from ``g = 1`` at the first point; ``steps`` RK4 steps per segment.
    """
    pts = [np.asarray(p, dtype=float) for p in points]
    n = pts[0].size
    sign0 = np.sign(kind.chart(pts[0][:, None] - pts[0][None, :]))
    _path_point_check(kind, pts[0], sign0, guard)
    g = np.eye(n)
    for start, end in zip(pts[:-1], pts[1:]):
        vel = end - start
        if not np.any(vel):
            continue

        def rhs(s, g):
            x = start + s * vel
            _path_point_check(kind, x, sign0, guard)
            A = build_gauge_potential(x, kind, case, omega)
            return -g @ np.tensordot(vel, A, axes=1)

        h = 1.0 / steps
        for i in range(steps):
            s = i * h
            k1 = rhs(s, g)
            k2 = rhs(s + h / 2, g + h / 2 * k1)
            k3 = rhs(s + h / 2, g + h / 2 * k2)
            k4 = rhs(s + h, g + h * k3)
            g = g + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return g


def integrate_gauge(q_start, q_end, kind: PotentialKind, case: str = "I", omega: float = 0.0,
                    steps: int = 1000) -> np.ndarray:
    return integrate_gauge_path([q_start, q_end], kind, case, omega, steps)
