# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step discharge integrator.

Line-for-line port of ``_simkernel_py.integrate``; keep the two in sync.
"""
from libc.math cimport cos, sin, INFINITY

import numpy as np


cdef inline double _interp(double q, const double[::1] grid, const double[::1] vals, Py_ssize_t n, Py_ssize_t* idx) noexcept nogil:
    cdef Py_ssize_t i
    cdef double g0, v0
    if n == 1 or q <= grid[0]:
        return vals[0]
    if q >= grid[n - 1]:
        return vals[n - 1]
    i = idx[0]
    while grid[i + 1] <= q:
        i += 1
    idx[0] = i
    g0 = grid[i]
    v0 = vals[i]
    return v0 + (vals[i + 1] - v0) * (q - g0) / (grid[i + 1] - g0)


def integrate(
    double mass, double gravity, double drag_coeff, double omega, double p_anc, double velocity,
    double move_s, double pause_s, double dt, double sample_period, double e_hat, long long max_steps,
    grade_x, grade_v, fric_x, fric_v, dist_t, dist_v,
):
    cdef const double[::1] gx = np.ascontiguousarray(grade_x, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(grade_v, dtype=np.float64)
    cdef const double[::1] fx = np.ascontiguousarray(fric_x, dtype=np.float64)
    cdef const double[::1] fv = np.ascontiguousarray(fric_v, dtype=np.float64)
    cdef const double[::1] dtt = np.ascontiguousarray(dist_t, dtype=np.float64)
    cdef const double[::1] dv = np.ascontiguousarray(dist_v, dtype=np.float64)
    cdef Py_ssize_t ng = gx.shape[0], nf = fx.shape[0], nd = dtt.shape[0]
    cdef Py_ssize_t ig = 0, jf = 0, kd = 0

    cdef double weight = mass * gravity
    cdef double drag = drag_coeff * velocity * velocity
    cdef double period = move_s + pause_s
    cdef long long cycle = 0
    cdef bint moving = True
    cdef double phase_end = move_s if pause_s > 0 else INFINITY
    cdef long long n_sample = 1
    cdef double next_sample = sample_period

    cdef double t = 0.0, x = 0.0, e = 0.0, ae = 0.0, te = 0.0
    cdef double seg_t0 = 0.0, seg_x0 = 0.0, seg_e = 0.0
    cdef double h, t_new, pm, theta, crr, fdist, force, mech, p, de, span
    cdef long long steps = 0

    ts, xs, vs, ps, ms = [0.0], [0.0], [0.0], [0.0], [False]

    if e_hat <= 0.0:
        return ts, xs, vs, ps, ms, ae, te, steps

    while True:
        steps += 1
        if steps > max_steps:
            raise RuntimeError(f"simulation exceeded {max_steps} steps without exhausting the battery")
        h = dt
        t_new = t + dt
        if phase_end <= t_new:
            h = phase_end - t
            t_new = phase_end
        if next_sample <= t_new:
            h = next_sample - t
            t_new = next_sample

        pm = 0.0
        if moving:
            theta = _interp(x, gx, gv, ng, &ig)
            crr = _interp(x, fx, fv, nf, &jf)
            fdist = _interp(t, dtt, dv, nd, &kd)
            force = crr * weight * cos(theta) + weight * sin(theta) + drag + fdist
            mech = force * velocity
            if mech > 0.0:
                pm = mech / omega
        p = p_anc + pm
        de = p * h

        if e + de >= e_hat:
            h = (e_hat - e) / p
            t = t + h
            if moving:
                x = x + velocity * h
            ae += p_anc * h
            te += pm * h
            seg_e += e_hat - e
            e = e_hat
            span = t - seg_t0
            if span > 0.0:
                ts.append(t)
                xs.append(x)
                vs.append((x - seg_x0) / span)
                ps.append(seg_e / span)
                ms.append(x > seg_x0)
            break

        e += de
        seg_e += de
        ae += p_anc * h
        te += pm * h
        if moving:
            x = x + velocity * h
        t = t_new

        if t >= phase_end:
            if moving:
                moving = False
                phase_end = cycle * period + period
            else:
                moving = True
                cycle += 1
                phase_end = cycle * period + move_s
        if t >= next_sample:
            span = t - seg_t0
            ts.append(t)
            xs.append(x)
            vs.append((x - seg_x0) / span)
            ps.append(seg_e / span)
            ms.append(x > seg_x0)
            seg_t0 = t
            seg_x0 = x
            seg_e = 0.0
            n_sample += 1
            next_sample = n_sample * sample_period

    return ts, xs, vs, ps, ms, ae, te, steps
