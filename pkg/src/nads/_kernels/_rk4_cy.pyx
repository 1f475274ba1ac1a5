# cython: language_level=3
"""Compiled fixed-substep RK4 kernel for two coupled complex amplitudes.

Same contract as the pure-Python kernel: propagate
y' = diag(d1, d2) y + i [[0, k(t)], [conj(k(t)), 0]] y
with the coupling sampled on the half-substep lattice.
"""

cimport cython


@cython.boundscheck(False)
@cython.wraparound(False)
def rk4_pair(
    const double complex[::1] stage_k,
    double complex d1,
    double complex d2,
    Py_ssize_t n_sub,
    double h,
    double complex[::1] out_g,
    double complex[::1] out_e,
):
    cdef Py_ssize_t n_out = out_g.shape[0]
    cdef double complex yg = out_g[0]
    cdef double complex ye = out_e[0]
    cdef double half = 0.5 * h
    cdef double sixth = h / 6.0
    cdef double complex I = 1j
    cdef double complex k0, kh, k1
    cdef double complex ag1, ae1, ag2, ae2, ag3, ae3, ag4, ae4, tg, te
    cdef Py_ssize_t i, j, m = 0
    for i in range(1, n_out):
        for j in range(n_sub):
            k0 = stage_k[m]
            kh = stage_k[m + 1]
            k1 = stage_k[m + 2]
            ag1 = d1 * yg + I * k0 * ye
            ae1 = d2 * ye + I * k0.conjugate() * yg
            tg = yg + half * ag1
            te = ye + half * ae1
            ag2 = d1 * tg + I * kh * te
            ae2 = d2 * te + I * kh.conjugate() * tg
            tg = yg + half * ag2
            te = ye + half * ae2
            ag3 = d1 * tg + I * kh * te
            ae3 = d2 * te + I * kh.conjugate() * tg
            tg = yg + h * ag3
            te = ye + h * ae3
            ag4 = d1 * tg + I * k1 * te
            ae4 = d2 * te + I * k1.conjugate() * tg
            yg = yg + sixth * (ag1 + 2.0 * (ag2 + ag3) + ag4)
            ye = ye + sixth * (ae1 + 2.0 * (ae2 + ae3) + ae4)
            m += 2
        out_g[i] = yg
        out_e[i] = ye
