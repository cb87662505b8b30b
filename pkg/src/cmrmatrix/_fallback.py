"""Pure-Python kernels.  Same signatures and results as ``_native``."""
import numpy as np

RATIONAL, HYPERBOLIC, TRIGONOMETRIC = 0, 1, 2


def cybe_int(r):
    n = r.shape[0]
    x = np.einsum("axcd,xbef->abcdef", r, r)
    x -= np.einsum("axef,xbcd->abcdef", r, r)
    x += np.einsum("abcy,ydef->abcdef", r, r)
    x -= np.einsum("cyef,abyd->abcdef", r, r)
    x += np.einsum("abez,cdzf->abcdef", r, r)
    x -= np.einsum("cdez,abzf->abcdef", r, r)
    return x.reshape((n,) * 6)


def _chart(d, code, a):
    if code == TRIGONOMETRIC:
        return np.sin(a * d)
    return d


def _force(q, code, a, guard, sign0):
    """Return ``-dV/dq`` or the offending pair ``(k, l)``."""
    n = q.shape[0]
    d = q[:, None] - q[None, :]
    s = _chart(d, code, a)
    bad = (np.abs(s) < guard) | (np.sign(s) != sign0)
    np.fill_diagonal(bad, False)
    if bad.any():
        k, l = np.argwhere(bad)[0]
        return None, (int(k), int(l))
    np.fill_diagonal(d, 1.0)
    if code == RATIONAL:
        vp = -2.0 / d**3
    elif code == HYPERBOLIC:
        sh = np.sinh(a * d)
        vp = -2.0 * a**3 * np.cosh(a * d) / sh**3
    else:
        sn = np.sin(a * d)
        vp = -2.0 * a**3 * np.cos(a * d) / sn**3
    np.fill_diagonal(vp, 0.0)
    if n == 1:
        return np.zeros(1), None
    return -vp.sum(axis=1), None


def cm_flow(q0, p0, code, a, dt, steps, guard):
    """Fixed-step RK4 for the Calogero-Moser equations of motion.

    Returns ``(qs, ps, step, k, l)``; ``step`` is ``-1`` on success, otherwise
    the index of the step that approached a singular pair ``(k, l)``.
    """
    q = np.array(q0, dtype=float)
    p = np.array(p0, dtype=float)
    n = q.shape[0]
    qs = np.empty((steps + 1, n))
    ps = np.empty((steps + 1, n))
    qs[0], ps[0] = q, p
    sign0 = np.sign(_chart(q[:, None] - q[None, :], code, a))
    h2 = 0.5 * dt
    f1, bad = _force(q, code, a, guard, sign0)
    if bad is not None:
        return qs[:1], ps[:1], 0, bad[0], bad[1]
    for i in range(steps):
        f2, bad = _force(q + h2 * p, code, a, guard, sign0)
        if bad is None:
            f3, bad = _force(q + h2 * (p + h2 * f1), code, a, guard, sign0)
        if bad is None:
            f4, bad = _force(q + dt * (p + h2 * f2), code, a, guard, sign0)
        if bad is None:
            q = q + dt / 6.0 * (p + 2.0 * (p + h2 * f1) + 2.0 * (p + h2 * f2) + (p + dt * f3))
            p = p + dt / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
            # the next step's first stage doubles as the end-point check
            f1, bad = _force(q, code, a, guard, sign0)
        if bad is not None:
            return qs[: i + 1], ps[: i + 1], i, bad[0], bad[1]
        qs[i + 1], ps[i + 1] = q, p
    return qs, ps, -1, -1, -1
