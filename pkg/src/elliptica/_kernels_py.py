"""Pure numpy implementation of the evaluation kernels.

This is the fallback used when the compiled ``_kernels`` extension is not
available; both expose identical signatures and must agree to rounding.

All kernels work in *core units*: the lattice is ``Z + Z tau`` with ``tau``
Gauss-reduced, so the shortest period has length one.
"""
import numpy as np

OK, POLE, FAILED = 0, 1, 2

_STENCIL = np.array([(dm, dn) for dm in (-1, 0, 1) for dn in (-1, 0, 1)], dtype=float)
_HALF = np.array([(a, b) for a in range(-2, 3) for b in range(-2, 3)], dtype=int)


def reduce_core(z, tau):
    """Translate ``z`` by lattice vectors to its nearest-to-origin representative.

    Returns the reduced point and the integer shifts ``(m, n)`` with
    ``z = z_red + m + n*tau``.
    """
    z = np.asarray(z, dtype=complex)
    y = z.imag / tau.imag
    x = z.real - y * tau.real
    m = np.rint(x)
    n = np.rint(y)
    best = z - m - n * tau
    bm, bn = m.copy(), n.copy()
    for dm, dn in _STENCIL:
        cand = z - (m + dm) - (n + dn) * tau
        better = np.abs(cand) < np.abs(best)
        best = np.where(better, cand, best)
        bm = np.where(better, m + dm, bm)
        bn = np.where(better, n + dn, bn)
    return best, bm.astype(np.int64), bn.astype(np.int64)


def _series(v, coeffs):
    """Return ``(t, A, D)`` with ``t = v^2``, ``A = sum c_k t^(k-1)`` and
    ``D = sum (2k-2) c_k t^k`` for the Laurent tail of wp."""
    t = v * v
    A = np.zeros_like(v)
    D = np.zeros_like(v)
    K = len(coeffs)
    for j in range(K - 1, -1, -1):
        A = A * t + coeffs[j]
        D = D * t + (2 * j + 2) * coeffs[j]
    return t, A * t, D * t * t


def wp_core(z, tau, coeffs, e, B, series_radius, pole_radius, max_radius):
    """Evaluate ``(wp, wp')`` at core-unit points ``z``.

    Points within ``series_radius`` of a lattice point use the Laurent series
    directly.  Other points are moved next to the nearest half-lattice point
    and evaluated through the half-period shift formulas, written so that the
    shifted point itself is harmless.  ``flag`` is 1 at poles and 2 where the
    residual offset would exceed ``max_radius``.
    """
    z = np.ascontiguousarray(z, dtype=complex).ravel()
    coeffs = np.asarray(coeffs, dtype=complex)
    e = np.asarray(e, dtype=complex)
    B = np.asarray(B, dtype=complex)
    u, _, _ = reduce_core(z, tau)
    r = np.abs(u)

    # nearest point of the half lattice
    best_v = u.copy()
    best_a = np.zeros(u.shape, dtype=int)
    best_b = np.zeros(u.shape, dtype=int)
    far = r > series_radius
    if np.any(far):
        uf = u[far]
        bv = uf.copy()
        ba = np.zeros(uf.shape, dtype=int)
        bb = np.zeros(uf.shape, dtype=int)
        for a, b in _HALF:
            cand = uf - 0.5 * (a + b * tau)
            better = np.abs(cand) < np.abs(bv)
            bv = np.where(better, cand, bv)
            ba = np.where(better, a, ba)
            bb = np.where(better, b, bb)
        best_v[far], best_a[far], best_b[far] = bv, ba, bb

    cls = (best_a % 2) + 2 * (best_b % 2)  # 0: lattice, 1: w1/2, 2: w2/2, 3: (w1+w2)/2
    t, A, D = _series(best_v, coeffs)
    flag = np.zeros(z.shape, dtype=np.int8)
    flag[np.abs(best_v) > max_radius] = FAILED

    direct = cls == 0
    pole = direct & ((r < pole_radius) | (t == 0))
    with np.errstate(divide="ignore", invalid="ignore"):
        p_dir = 1.0 / t + A
        pp_dir = (D - 2.0) / (best_v * t)
    idx = np.clip(cls - 1, 0, 2)
    ei = e[idx]
    Bi = B[idx]
    den = 1.0 + t * (A - ei)
    p_sh = ei + Bi * t / den
    pp_sh = -Bi * (D - 2.0) * best_v / (den * den)

    p = np.where(direct, p_dir, p_sh)
    pp = np.where(direct, pp_dir, pp_sh)
    p[pole] = np.inf
    pp[pole] = np.inf
    flag[pole] = POLE
    return p, pp, flag
