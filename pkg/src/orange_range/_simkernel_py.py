"""Pure-Python fixed-step discharge integrator.

Reference twin of ``_simkernel.pyx``; both must perform the same floating
point operations in the same order so their results agree bit for bit.
"""
from math import cos, sin


def _interp(q, grid, vals, n, idx):
    if n == 1 or q <= grid[0]:
        return vals[0], idx
    if q >= grid[n - 1]:
        return vals[n - 1], idx
    while grid[idx + 1] <= q:
        idx += 1
    g0 = grid[idx]
    v0 = vals[idx]
    return v0 + (vals[idx + 1] - v0) * (q - g0) / (grid[idx + 1] - g0), idx


def integrate(
    mass, gravity, drag_coeff, omega, p_anc, velocity,
    move_s, pause_s, dt, sample_period, e_hat, max_steps,
    grade_x, grade_v, fric_x, fric_v, dist_t, dist_v,
):
    """Integrate until the battery energy ``e_hat`` is used up.

    Returns ``(t, x, v, power, moving, ae, te, steps)`` where the first five
    are per-sample lists and ``ae``/``te`` are the ancillary and traversal
    energy totals.
    """
    grade_x = [float(g) for g in grade_x]
    grade_v = [float(g) for g in grade_v]
    fric_x = [float(g) for g in fric_x]
    fric_v = [float(g) for g in fric_v]
    dist_t = [float(g) for g in dist_t]
    dist_v = [float(g) for g in dist_v]
    ng, nf, nd = len(grade_x), len(fric_x), len(dist_t)
    ig = jf = kd = 0

    weight = mass * gravity
    drag = drag_coeff * velocity * velocity
    period = move_s + pause_s
    cycle = 0
    moving = True
    phase_end = move_s if pause_s > 0 else float("inf")
    n_sample = 1
    next_sample = sample_period

    t = x = e = ae = te = 0.0
    seg_t0 = seg_x0 = seg_e = 0.0
    ts, xs, vs, ps, ms = [0.0], [0.0], [0.0], [0.0], [False]
    steps = 0

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
            theta, ig = _interp(x, grade_x, grade_v, ng, ig)
            crr, jf = _interp(x, fric_x, fric_v, nf, jf)
            fdist, kd = _interp(t, dist_t, dist_v, nd, kd)
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
