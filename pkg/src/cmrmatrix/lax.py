"""Lax matrix, Hamiltonian, Poisson tensor and flow of the Calogero-Moser model.

Poisson brackets follow ``{p_k, q_l} = delta_kl``, i.e. for functions f, g on
phase space ``{f, g} = sum_k (df/dp_k dg/dq_k - df/dq_k dg/dp_k)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .potentials import GUARD, PotentialKind, SingularityError, check_regular, pair_functions, pair_tables


@dataclass(frozen=True)
class PhasePoint:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float).reshape(-1)
        p = np.array(self.p, dtype=float).reshape(-1)
        if q.shape != p.shape:
            raise ValueError(f"q and p differ in length: {q.size} != {p.size}")
        q.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.size


@dataclass
class Trajectory:
    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    kind: PotentialKind = field(default_factory=PotentialKind)

    def __len__(self):
        return len(self.times)

    @property
    def states(self) -> list[PhasePoint]:
        return [PhasePoint(q, p) for q, p in zip(self.q, self.p)]


def build_lax(x: PhasePoint, kind: PotentialKind) -> np.ndarray:
    """``L_kl = p_k delta_kl + i (1 - delta_kl) w(q_k - q_l)``."""
    w, _ = pair_tables(kind, x.q)
    return np.diag(x.p).astype(complex) + 1j * w


def hamiltonian(x: PhasePoint, kind: PotentialKind) -> float:
    w, _ = pair_tables(kind, x.q)
    return 0.5 * float(x.p @ x.p) + 0.5 * float((w * w).sum())


def lax_derivatives(x: PhasePoint, kind: PotentialKind):
    """``(dL/dp_k, dL/dq_k)`` stacked over k, each of shape ``(n, n, n)``."""
    n = x.n
    _, wp = pair_tables(kind, x.q)
    dp = np.zeros((n, n, n), dtype=complex)
    dp[np.arange(n), np.arange(n), np.arange(n)] = 1.0
    # d/dq_k of w(q_m - q_l) is w'(q_m - q_l) (delta_km - delta_kl)
    eye = np.eye(n)
    dq = 1j * wp[None, :, :] * (eye[:, :, None] - eye[:, None, :])
    return dp, dq


def lax_poisson_tensor(x: PhasePoint, kind: PotentialKind) -> np.ndarray:
    """``{L_1, L_2}`` as a two-tensor, computed from the analytic derivatives."""
    dp, dq = lax_derivatives(x, kind)
    return np.einsum("kij,kab->ijab", dp, dq) - np.einsum("kij,kab->ijab", dq, dp)


def finite_difference_poisson_tensor(x: PhasePoint, kind: PotentialKind, step: float = 1e-6):
    """Oracle for :func:`lax_poisson_tensor` using central differences of L."""
    n = x.n
    out = np.zeros((n,) * 4, dtype=complex)
    for k in range(n):
        e = np.zeros(n)
        e[k] = step
        dLp = (build_lax(PhasePoint(x.q, x.p + e), kind) - build_lax(PhasePoint(x.q, x.p - e), kind)) / (2 * step)
        dLq = (build_lax(PhasePoint(x.q + e, x.p), kind) - build_lax(PhasePoint(x.q - e, x.p), kind)) / (2 * step)
        out += np.einsum("ij,ab->ijab", dLp, dLq) - np.einsum("ij,ab->ijab", dLq, dLp)
    return out


def integrate_flow(
    x0: PhasePoint,
    kind: PotentialKind,
    dt: float,
    steps: int,
    guard: float = GUARD,
    backend=None,
) -> Trajectory:
    """Classical RK4 for ``q' = p``, ``p' = -dV/dq``.

    Raises :class:`SingularityError` (with ``.step`` and ``.pair``) when the
    trajectory comes within ``guard`` of, or crosses, a singular hyperplane.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    impl = kernels if backend is None else kernels.get_backend(backend)
    qs, ps, bad_step, k, l = impl.cm_flow(x0.q, x0.p, kind.code, float(kind.a), float(dt), int(steps), guard)
    if bad_step >= 0:
        raise SingularityError(
            f"trajectory approached the singular locus of pair ({k}, {l}) during step {bad_step}",
            pair=(int(k), int(l)),
            step=int(bad_step),
        )
    return Trajectory(np.arange(steps + 1) * dt, np.asarray(qs), np.asarray(ps), kind)


def _lax_batch(traj: Trajectory, kind: PotentialKind) -> np.ndarray:
    """L at every sample time, shape ``(T, n, n)``."""
    n = traj.q.shape[1]
    d = traj.q[:, :, None] - traj.q[:, None, :]
    off = np.broadcast_to(~np.eye(n, dtype=bool), d.shape)
    w = np.zeros_like(d)
    if n > 1:
        check_regular(kind, d[off])
        _, w[off], _ = pair_functions(kind, d[off], guard=0.0)
    L = 1j * w
    idx = np.arange(n)
    L[:, idx, idx] = traj.p
    return L


def _power_traces(L: np.ndarray) -> np.ndarray:
    """``tr L^m`` for ``m = 1..n``; works on stacks of matrices."""
    n = L.shape[-1]
    P = L
    out = [np.trace(P, axis1=-2, axis2=-1)]
    for _ in range(n - 1):
        P = P @ L
        out.append(np.trace(P, axis1=-2, axis2=-1))
    return np.stack(out, axis=-1)


def spectral_drift(traj: Trajectory, kind: PotentialKind | None = None) -> float:
    """``max_t max_m |tr L(t)^m - tr L(0)^m|`` over ``m = 1..n``."""
    kind = traj.kind if kind is None else kind
    t = _power_traces(_lax_batch(traj, kind))
    return float(np.abs(t - t[0]).max())


def eigenvalue_drift(traj: Trajectory, kind: PotentialKind | None = None) -> float:
    """Largest eigenvalue displacement of L between the first and last state."""
    kind = traj.kind if kind is None else kind
    first, last = traj.states[0], traj.states[-1]
    e0 = np.sort(np.linalg.eigvalsh(build_lax(first, kind)))
    e1 = np.sort(np.linalg.eigvalsh(build_lax(last, kind)))
    return float(np.abs(e1 - e0).max())


def energy_drift(traj: Trajectory, kind: PotentialKind | None = None) -> float:
    """Max relative energy error (absolute when the initial energy is zero)."""
    kind = traj.kind if kind is None else kind
    L = _lax_batch(traj, kind)
    # off-diagonal |L_kl|^2 = w^2 = v, so h = (sum p^2 + sum_{k != l} v) / 2
    h = 0.5 * (np.abs(L) ** 2).sum(axis=(1, 2))
    scale = abs(h[0]) if h[0] != 0 else 1.0
    return float(np.abs(h - h[0]).max() / scale)


def momentum_drift(traj: Trajectory) -> float:
    total = traj.p.sum(axis=1)
    return float(np.abs(total - total[0]).max())


def random_phase_point(n: int, kind: PotentialKind, rng: np.random.Generator, min_sep: float = 0.1,
                       max_tries: int = 1000) -> PhasePoint:
    """Seeded regular phase point.

    ``q`` is drawn in the box ``[-n/2, n/2]`` with pairwise separation at least
    ``min_sep`` (for the trigonometric family ``a (q_k - q_l)`` is kept at
    least ``min_sep`` away from multiples of pi); ``p`` is uniform in [-1, 1].
    """
    for _ in range(max_tries):
        q = rng.uniform(-0.5 * n, 0.5 * n, size=n)
        d = np.abs(q[:, None] - q[None, :])[np.triu_indices(n, 1)]
        if kind.variant == "trigonometric":
            d = np.mod(kind.a * d, np.pi)
            ok = np.all((d > min_sep) & (d < np.pi - min_sep))
        else:
            ok = np.all(d > min_sep)
        if ok:
            p = rng.uniform(-1.0, 1.0, size=n)
            return PhasePoint(q, p)
    raise SingularityError(f"no regular point found after {max_tries} draws (n={n}, {kind})")
