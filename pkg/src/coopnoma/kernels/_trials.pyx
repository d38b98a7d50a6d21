# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trial kernel: same stream layout and decision rules as ``_trials_py``."""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport cos, log1p, pow, sqrt
from libc.stdint cimport uint64_t
from numpy.random cimport bitgen_t

import numpy as np

from . import params as P

cdef double U53 = 1.0 / 9007199254740992.0
cdef double TWO_PI = 6.283185307179586


cdef inline double _uniform(bitgen_t *rng) noexcept nogil:
    return <double>(rng.next_uint64(rng.state) >> 11) * U53


cdef inline double _distance(int law, double inner, double outer, double pl, double q1,
                             double u) noexcept nogil:
    cdef double r2
    if law == 0:
        return sqrt(inner * inner + u * (outer * outer - inner * inner))
    if law == 1:
        r2 = inner * inner - log1p(-u * q1) / pl
    else:
        r2 = outer * outer + log1p(-(1.0 - u) * q1) / pl
    if r2 < inner * inner:
        r2 = inner * inner
    elif r2 > outer * outer:
        r2 = outer * outer
    return sqrt(r2)


cdef inline double _path_loss(double d, double alpha, int ialpha) noexcept nogil:
    # integer exponents by multiplication, matching the numpy backend exactly
    if ialpha == 2:
        return 1.0 + d * d
    if ialpha == 3:
        return 1.0 + d * d * d
    if ialpha == 4:
        return 1.0 + (d * d) * (d * d)
    return 1.0 + pow(d, alpha)


def count_block(double[::1] p, object seed, Py_ssize_t start, Py_ssize_t stop):
    """Return ``(near, far_coop, far_noncoop, decoded)`` outage counts over trials [start, stop)."""
    bitgen = np.random.Philox(key=seed, counter=P.COUNTER_STEPS_PER_TRIAL * start)
    capsule = bitgen.capsule
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")

    cdef int near_law = <int>p[P.NEAR_LAW]
    cdef int far_law = <int>p[P.FAR_LAW]
    cdef double n_in = p[P.NEAR_INNER], n_out = p[P.NEAR_OUTER], n_pl = p[P.NEAR_PL], n_q1 = p[P.NEAR_Q1]
    cdef double f_in = p[P.FAR_INNER], f_out = p[P.FAR_OUTER], f_pl = p[P.FAR_PL], f_q1 = p[P.FAR_Q1]
    cdef double alpha = p[P.ALPHA], eta = p[P.ETA], rho = p[P.RHO]
    cdef int ialpha = <int>alpha if alpha in (2.0, 3.0, 4.0) else 0
    cdef double p1 = p[P.P1], p2 = p[P.P2], tau1 = p[P.TAU1], eps_a = p[P.EPS_A]
    cdef double near_tol = p[P.NEAR_TOL]
    cdef bint approx = p[P.APPROX_RELAY] != 0.0

    cdef Py_ssize_t i
    cdef long long near = 0, coop = 0, noncoop = 0, decoded_n = 0
    cdef double u0, u1, u2, u3, u4, u5
    cdef double d_a, d_b, d_c, h_a, h_b, g, l_a, l_b, l_c, y, beta, relay, snr_x2, direct
    cdef bint decoded

    with nogil:
        for i in range(start, stop):
            u0 = _uniform(rng)
            u1 = _uniform(rng)
            u2 = _uniform(rng)
            u3 = _uniform(rng)
            u4 = _uniform(rng)
            u5 = _uniform(rng)
            rng.next_uint64(rng.state)  # reserved draws
            rng.next_uint64(rng.state)

            d_b = _distance(near_law, n_in, n_out, n_pl, n_q1, u0)
            d_a = _distance(far_law, f_in, f_out, f_pl, f_q1, u1)
            h_a = -log1p(-u3)
            h_b = -log1p(-u4)
            g = -log1p(-u5)
            if approx:
                d_c = d_a
            else:
                d_c = d_a * d_a + d_b * d_b - 2.0 * d_a * d_b * cos(TWO_PI * u2)
                d_c = sqrt(d_c) if d_c > 0.0 else 0.0

            l_a = _path_loss(d_a, alpha, ialpha)
            l_b = _path_loss(d_b, alpha, ialpha)
            l_c = _path_loss(d_c, alpha, ialpha)

            y = h_b / l_b
            decoded = y >= eps_a
            if decoded:
                beta = 1.0 - eps_a / y
                if beta < 0.0:
                    beta = 0.0
                relay = eta * rho * beta * h_b * g / (l_c * l_b)
                snr_x2 = rho * h_b * p2 * (1.0 - beta) / l_b
                decoded_n += 1
                if snr_x2 < near_tol:
                    near += 1
            else:
                relay = 0.0
                near += 1

            direct = rho * h_a * p1 / (rho * p2 * h_a + l_a)
            if direct < tau1:
                noncoop += 1
            if direct + relay < tau1:
                coop += 1

    return (near, coop, noncoop, decoded_n)
