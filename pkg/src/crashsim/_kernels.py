"""Hot inner loops: contact integration and the first-order IIR filter.

Both kernels are plain Python functions compiled with numba's ``@njit`` when
numba is importable. Set ``CRASHSIM_NUMBA=0`` (or ``false``/``off``/``no``) to
force the uncompiled pure-NumPy path; the two paths run the same code and
produce identical results. ``benchmarks/bench_kernels.py`` compares them.
"""

from __future__ import annotations

import os

import numpy as np

# termination codes returned by integrate_contact
TERM_REBOUND = 0
TERM_COLLISION = 1
TERM_MAX_TIME = 2
TERM_NON_FINITE = 3


def _numba_requested() -> bool:
    flag = os.environ.get("CRASHSIM_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


NUMBA_ENABLED = False
if _numba_requested():
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass


def _integrate_contact_impl(mass, damping, stiffness, gravity, v0, clearance,
                            dt, substeps, max_records):
    """Fixed-step RK4 integration of m*x'' + c*x' + k*x = m*g during contact.

    State is (x, v, e) with e the accumulated damper energy, de/dt = c*v**2,
    integrated by the same RK4 quadrature as the motion. Integration advances
    in substeps of length dt and records every `substeps`-th state, so the
    recorded grid has spacing substeps*dt (the scenario sampling period).

    Termination events (compression crossing `clearance` upward, or crossing
    zero downward after compression) are first located by linear interpolation
    of x over the bracketing substep, then the partial-step length is polished
    with a few Newton corrections so the appended final sample lands on the
    crossing level to float precision while staying on the integrated
    trajectory (linear state blending would break energy accounting at fast
    collisions).

    Returns (t, x, v, a, e, n_samples, termination_code, fail_time); arrays
    are oversized and must be sliced to n_samples by the caller.
    """
    n_cap = max_records + 2
    t_out = np.empty(n_cap)
    x_out = np.empty(n_cap)
    v_out = np.empty(n_cap)
    a_out = np.empty(n_cap)
    e_out = np.empty(n_cap)

    inv_m = 1.0 / mass

    def rk4(x_p, v_p, e_p, step):
        a1 = gravity - (damping * v_p + stiffness * x_p) * inv_m
        e1 = damping * v_p * v_p

        x2 = x_p + 0.5 * step * v_p
        v2 = v_p + 0.5 * step * a1
        a2 = gravity - (damping * v2 + stiffness * x2) * inv_m
        e2 = damping * v2 * v2

        x3 = x_p + 0.5 * step * v2
        v3 = v_p + 0.5 * step * a2
        a3 = gravity - (damping * v3 + stiffness * x3) * inv_m
        e3 = damping * v3 * v3

        x4 = x_p + step * v3
        v4 = v_p + step * a3
        a4 = gravity - (damping * v4 + stiffness * x4) * inv_m
        e4 = damping * v4 * v4

        x_n = x_p + step / 6.0 * (v_p + 2.0 * v2 + 2.0 * v3 + v4)
        v_n = v_p + step / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        e_n = e_p + step / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4)
        return x_n, v_n, e_n

    t_out[0] = 0.0
    x_out[0] = 0.0
    v_out[0] = v0
    a_out[0] = gravity - damping * v0 * inv_m
    e_out[0] = 0.0
    n = 1

    x_s = 0.0
    v_s = v0
    e_s = 0.0

    term = TERM_MAX_TIME
    fail_time = -1.0

    total_substeps = max_records * substeps
    i = 0
    while i < total_substeps:
        x_p = x_s
        v_p = v_s
        e_p = e_s

        x_s, v_s, e_s = rk4(x_p, v_p, e_p, dt)
        i += 1

        if not (np.isfinite(x_s) and np.isfinite(v_s)):
            term = TERM_NON_FINITE
            fail_time = i * dt
            break

        crossed_clearance = x_p < clearance and x_s >= clearance
        crossed_zero = x_p > 0.0 and x_s <= 0.0
        if crossed_clearance or crossed_zero:
            level = clearance if crossed_clearance else 0.0
            h = dt * (level - x_p) / (x_s - x_p)
            x_e, v_e, e_e = rk4(x_p, v_p, e_p, h)
            # polish h so x(h) hits the level exactly; skip near-tangent
            # crossings where the linear bracket is already as good as it gets
            for _ in range(4):
                gap = level - x_e
                if gap == 0.0 or v_e == 0.0:
                    break
                dh = gap / v_e
                if not np.isfinite(dh) or abs(dh) >= dt:
                    break
                h_new = h + dh
                if h_new <= 0.0 or h_new > dt:
                    break
                h = h_new
                x_e, v_e, e_e = rk4(x_p, v_p, e_p, h)

            t_out[n] = (i - 1) * dt + h
            x_out[n] = x_e
            v_out[n] = v_e
            a_out[n] = gravity - (damping * v_e + stiffness * x_e) * inv_m
            e_out[n] = e_e
            n += 1
            term = TERM_COLLISION if crossed_clearance else TERM_REBOUND
            break

        if i % substeps == 0:
            t_out[n] = i * dt
            x_out[n] = x_s
            v_out[n] = v_s
            a_out[n] = gravity - (damping * v_s + stiffness * x_s) * inv_m
            e_out[n] = e_s
            n += 1

    return t_out, x_out, v_out, a_out, e_out, n, term, fail_time


def _lowpass_impl(values, k_mid, k_last):
    """First-order low-pass via the bilinear transform, k = tan(pi*fc*dt).

    The state is warm-started at values[0], so a constant input passes
    through unchanged. k_last applies to the final transition only; it lets
    an event-terminated trajectory end on a shorter-than-nominal step.
    """
    n = values.shape[0]
    out = np.empty(n)

    b0 = k_mid / (1.0 + k_mid)
    a1 = (k_mid - 1.0) / (1.0 + k_mid)

    x_prev = values[0]
    y_prev = values[0]
    for i in range(n):
        if i == n - 1 and k_last != k_mid:
            b0 = k_last / (1.0 + k_last)
            a1 = (k_last - 1.0) / (1.0 + k_last)
        x_i = values[i]
        y_i = b0 * (x_i + x_prev) - a1 * y_prev
        out[i] = y_i
        x_prev = x_i
        y_prev = y_i
    return out


if NUMBA_ENABLED:
    integrate_contact = njit(cache=True, nogil=True)(_integrate_contact_impl)
    lowpass = njit(cache=True, nogil=True)(_lowpass_impl)
else:
    integrate_contact = _integrate_contact_impl
    lowpass = _lowpass_impl
