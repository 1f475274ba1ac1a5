"""Pure-Python fixed-substep RK4 kernel for two coupled complex amplitudes.

Reference implementation of the same loop as the compiled extension; kept
in plain Python (list indexing, scalar complex arithmetic) so it runs
anywhere and serves as the equivalence baseline in tests and benchmarks.
"""

from __future__ import annotations

import numpy as np

__all__ = ["rk4_pair"]


def rk4_pair(
    stage_k: np.ndarray,
    d1: complex,
    d2: complex,
    n_sub: int,
    h: float,
    out_g: np.ndarray,
    out_e: np.ndarray,
) -> None:
    """Propagate y' = diag(d1, d2) y + i [[0, k(t)], [conj(k(t)), 0]] y.

    ``stage_k`` holds the coupling k(t) on the half-substep lattice (spacing
    h/2, length 2*(len(out_g)-1)*n_sub + 1). ``out_g[0]``, ``out_e[0]`` seed
    the state; the remaining entries are filled with the amplitudes at each
    output grid point. ``h`` is the substep, not the output spacing.
    """
    ks = stage_k.tolist()
    n_out = len(out_g)
    yg = complex(out_g[0])
    ye = complex(out_e[0])
    half = 0.5 * h
    sixth = h / 6.0
    m = 0
    for i in range(1, n_out):
        for _ in range(n_sub):
            k0 = ks[m]
            kh = ks[m + 1]
            k1 = ks[m + 2]
            ag1 = d1 * yg + 1j * k0 * ye
            ae1 = d2 * ye + 1j * k0.conjugate() * yg
            tg = yg + half * ag1
            te = ye + half * ae1
            ag2 = d1 * tg + 1j * kh * te
            ae2 = d2 * te + 1j * kh.conjugate() * tg
            tg = yg + half * ag2
            te = ye + half * ae2
            ag3 = d1 * tg + 1j * kh * te
            ae3 = d2 * te + 1j * kh.conjugate() * tg
            tg = yg + h * ag3
            te = ye + h * ae3
            ag4 = d1 * tg + 1j * k1 * te
            ae4 = d2 * te + 1j * k1.conjugate() * tg
            yg = yg + sixth * (ag1 + 2.0 * (ag2 + ag3) + ag4)
            ye = ye + sixth * (ae1 + 2.0 * (ae2 + ae3) + ae4)
            m += 2
        out_g[i] = yg
        out_e[i] = ye
