"""Numba kernel for the fixed-step RK4 integration of the hybrid equations.

State layout: classical (x, p) plus four complex amplitudes.  The quantum
generator is H(x, t) = omega0*SZ + beta*Omega(t)*x*DX + W with the fixed
sparse structure of SZ and DX unrolled for speed; W is an arbitrary constant
Hermitian matrix (zero when no perturbation is active).
"""

import numpy as np
from numba import njit

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

OK = 0
NON_FINITE = 1


@njit(cache=True, nogil=True)
def _deriv(t, x, p, c0, c1, c2, c3,
           m, mw2, omega0, beta,
           om_const, pulsed, om_peak, t_center, inv_two_sig2,
           W):
    if pulsed:
        dtc = t - t_center
        om = om_peak * np.exp(-dtc * dtc * inv_two_sig2)
    else:
        om = om_const
    g = beta * om
    a = omega0 * _INV_SQRT2
    gx = g * x
    h0 = a * c2 + gx * c0 + W[0, 0] * c0 + W[0, 1] * c1 + W[0, 2] * c2 + W[0, 3] * c3
    h1 = a * c2 - gx * c1 + W[1, 0] * c0 + W[1, 1] * c1 + W[1, 2] * c2 + W[1, 3] * c3
    h2 = a * (c0 + c1) + W[2, 0] * c0 + W[2, 1] * c1 + W[2, 2] * c2 + W[2, 3] * c3
    h3 = W[3, 0] * c0 + W[3, 1] * c1 + W[3, 2] * c2 + W[3, 3] * c3
    dx = p / m
    dp = -mw2 * x - g * (c0.real * c0.real + c0.imag * c0.imag
                         - c1.real * c1.real - c1.imag * c1.imag)
    return (dx, dp, -1j * h0, -1j * h1, -1j * h2, -1j * h3)


@njit(cache=True, nogil=True)
def rk4_trajectory(x0, p0, c_init, t_start, dt, n_steps, stride,
                   m, omega, omega0, beta,
                   pulsed, pulse_amplitude, pulse_t0, pulse_sigma,
                   W, out_t, out_x, out_p, out_c):
    """Integrate n_steps RK4 steps, sampling every `stride` steps into out_*.

    Returns (status, t_fail); status is OK or NON_FINITE, in which case
    t_fail is the time at which a non-finite value was first seen.
    """
    mw2 = m * omega * omega
    om_const = omega * np.sqrt(m * omega)
    om_peak = pulse_amplitude * om_const
    inv_two_sig2 = 0.0
    if pulsed:
        inv_two_sig2 = 1.0 / (2.0 * pulse_sigma * pulse_sigma)

    x = x0
    p = p0
    c0 = c_init[0]
    c1 = c_init[1]
    c2 = c_init[2]
    c3 = c_init[3]

    out_t[0] = t_start
    out_x[0] = x
    out_p[0] = p
    out_c[0, 0] = c0
    out_c[0, 1] = c1
    out_c[0, 2] = c2
    out_c[0, 3] = c3

    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        t = t_start + k * dt
        a1 = _deriv(t, x, p, c0, c1, c2, c3, m, mw2, omega0, beta,
                    om_const, pulsed, om_peak, pulse_t0, inv_two_sig2, W)
        a2 = _deriv(t + half, x + half * a1[0], p + half * a1[1],
                    c0 + half * a1[2], c1 + half * a1[3],
                    c2 + half * a1[4], c3 + half * a1[5],
                    m, mw2, omega0, beta,
                    om_const, pulsed, om_peak, pulse_t0, inv_two_sig2, W)
        a3 = _deriv(t + half, x + half * a2[0], p + half * a2[1],
                    c0 + half * a2[2], c1 + half * a2[3],
                    c2 + half * a2[4], c3 + half * a2[5],
                    m, mw2, omega0, beta,
                    om_const, pulsed, om_peak, pulse_t0, inv_two_sig2, W)
        a4 = _deriv(t + dt, x + dt * a3[0], p + dt * a3[1],
                    c0 + dt * a3[2], c1 + dt * a3[3],
                    c2 + dt * a3[4], c3 + dt * a3[5],
                    m, mw2, omega0, beta,
                    om_const, pulsed, om_peak, pulse_t0, inv_two_sig2, W)
        x += sixth * (a1[0] + 2.0 * a2[0] + 2.0 * a3[0] + a4[0])
        p += sixth * (a1[1] + 2.0 * a2[1] + 2.0 * a3[1] + a4[1])
        c0 += sixth * (a1[2] + 2.0 * a2[2] + 2.0 * a3[2] + a4[2])
        c1 += sixth * (a1[3] + 2.0 * a2[3] + 2.0 * a3[3] + a4[3])
        c2 += sixth * (a1[4] + 2.0 * a2[4] + 2.0 * a3[4] + a4[4])
        c3 += sixth * (a1[5] + 2.0 * a2[5] + 2.0 * a3[5] + a4[5])

        probe = (x + p + c0.real + c0.imag + c1.real + c1.imag
                 + c2.real + c2.imag + c3.real + c3.imag)
        if not np.isfinite(probe):
            return NON_FINITE, t_start + (k + 1) * dt

        if (k + 1) % stride == 0:
            j = (k + 1) // stride
            out_t[j] = t_start + (k + 1) * dt
            out_x[j] = x
            out_p[j] = p
            out_c[j, 0] = c0
            out_c[j, 1] = c1
            out_c[j, 2] = c2
            out_c[j, 3] = c3

    return OK, 0.0
