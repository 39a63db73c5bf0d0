"""Numba-compiled numerical core.

Everything in this module operates on plain float64 arrays packed into the
namedtuples below; no Python objects cross into the jitted code. Functions
return integer status codes instead of raising (callers translate to typed
exceptions). All math is IEEE-ordered (no fastmath) so results are identical
with and without JIT, which the determinism contract relies on.

Status codes shared by the projection/traversal kernels:
    0  success
    1  projection did not converge
    2  constraint Jacobian rank deficient
    3  degenerate surface normal
    4  invalid state (limits / domain / collision) during a checked walk
    5  step discontinuity during a walk
    6  walk exceeded its state buffer
"""

import math
from collections import namedtuple

import numpy as np
from numba import njit

#: Serial robot: joint kinds (0 revolute, 1 prismatic), local joint axes,
#: fixed origin transforms, tool transform, joint limits and link capsules
#: (cap_link indexes the link frame each capsule is attached to).
RobotPack = namedtuple(
    "RobotPack",
    "kinds axes org_r org_t tool_r tool_t lo hi cap_link cap_p0 cap_p1 cap_r",
)

#: Parametric surface: kind (0 plane, 1 paraboloid, 2 sinusoid, 3 bezier),
#: scalar params, Bezier control net + degrees, and the (u, v) domain box.
SurfPack = namedtuple("SurfPack", "kind par ctrl deg dom")

#: Obstacle set: kind (0 sphere, 1 capsule, 2 box), anchor points a/b
#: (center / endpoints / center+half-extents), radii, and clearance margin.
WorldPack = namedtuple("WorldPack", "kind a b r margin")

OK = 0
NO_CONVERGENCE = 1
SINGULAR = 2
DEGENERATE = 3
INVALID_STATE = 4
DISCONTINUOUS = 5
BUFFER_FULL = 6

_FD_H = 1e-6  # central-difference step for Bezier normal derivatives


# ---------------------------------------------------------------------------
# small fixed-size linear algebra (hand rolled: BLAS dispatch costs more than
# the arithmetic at 3x3 scale)

@njit(cache=True)
def _mv3(m, v):
    out = np.empty(3)
    for i in range(3):
        out[i] = m[i, 0] * v[0] + m[i, 1] * v[1] + m[i, 2] * v[2]
    return out


@njit(cache=True)
def _mtv3(m, v):
    out = np.empty(3)
    for i in range(3):
        out[i] = m[0, i] * v[0] + m[1, i] * v[1] + m[2, i] * v[2]
    return out


@njit(cache=True)
def _mm3(a, b):
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            out[i, j] = a[i, 0] * b[0, j] + a[i, 1] * b[1, j] + a[i, 2] * b[2, j]
    return out


@njit(cache=True)
def _cross3(a, b):
    out = np.empty(3)
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]
    return out


@njit(cache=True)
def _dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@njit(cache=True)
def _norm3(a):
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


@njit(cache=True)
def _vnorm(a):
    s = 0.0
    for i in range(a.shape[0]):
        s += a[i] * a[i]
    return math.sqrt(s)


@njit(cache=True)
def _rot_axis_angle(axis, angle):
    """Rodrigues rotation about a unit axis."""
    c = math.cos(angle)
    s = math.sin(angle)
    t = 1.0 - c
    x, y, z = axis[0], axis[1], axis[2]
    out = np.empty((3, 3))
    out[0, 0] = t * x * x + c
    out[0, 1] = t * x * y - s * z
    out[0, 2] = t * x * z + s * y
    out[1, 0] = t * x * y + s * z
    out[1, 1] = t * y * y + c
    out[1, 2] = t * y * z - s * x
    out[2, 0] = t * x * z - s * y
    out[2, 1] = t * y * z + s * x
    out[2, 2] = t * z * z + c
    return out


# ---------------------------------------------------------------------------
# forward kinematics

@njit(cache=True)
def fk_full(rp, q):
    """FK sweep along the chain.

    Returns world joint axes, joint anchor points, the per-link frames
    (rotation, translation after each joint's motion) and the tool frame.
    """
    n = rp.kinds.shape[0]
    axes_w = np.empty((n, 3))
    org_w = np.empty((n, 3))
    link_r = np.empty((n, 3, 3))
    link_p = np.empty((n, 3))

    r = np.eye(3)
    p = np.zeros(3)
    for i in range(n):
        p = p + _mv3(r, rp.org_t[i])
        r = _mm3(r, rp.org_r[i])
        aw = _mv3(r, rp.axes[i])
        axes_w[i, :] = aw
        org_w[i, :] = p
        if rp.kinds[i] == 0:
            r = _mm3(r, _rot_axis_angle(rp.axes[i], q[i]))
        else:
            p = p + aw * q[i]
        link_r[i] = r
        link_p[i] = p

    tool_p = p + _mv3(r, rp.tool_t)
    tool_r = _mm3(r, rp.tool_r)
    return axes_w, org_w, link_r, link_p, tool_r, tool_p


@njit(cache=True)
def fk_pose(rp, q):
    _, _, _, _, tr, tp = fk_full(rp, q)
    return tr, tp


@njit(cache=True)
def geometric_jacobian(rp, q):
    """World-frame geometric Jacobian (linear on top, spatial angular below)."""
    n = rp.kinds.shape[0]
    axes_w, org_w, _, _, _, tool_p = fk_full(rp, q)
    jac = np.zeros((6, n))
    for i in range(n):
        if rp.kinds[i] == 0:
            lever = tool_p - org_w[i]
            lin = _cross3(axes_w[i], lever)
            jac[0, i] = lin[0]
            jac[1, i] = lin[1]
            jac[2, i] = lin[2]
            jac[3, i] = axes_w[i, 0]
            jac[4, i] = axes_w[i, 1]
            jac[5, i] = axes_w[i, 2]
        else:
            jac[0, i] = axes_w[i, 0]
            jac[1, i] = axes_w[i, 1]
            jac[2, i] = axes_w[i, 2]
    return jac


@njit(cache=True)
def within_limits_k(rp, q):
    for i in range(q.shape[0]):
        if q[i] < rp.lo[i] or q[i] > rp.hi[i]:
            return False
    return True


# ---------------------------------------------------------------------------
# surfaces

@njit(cache=True)
def _bernstein(deg, t, out):
    """All Bernstein basis values of given degree at t (stable triangle)."""
    out[0] = 1.0
    for j in range(1, deg + 1):
        saved = 0.0
        for k in range(j):
            tmp = out[k]
            out[k] = saved + (1.0 - t) * tmp
            saved = t * tmp
        out[j] = saved


@njit(cache=True)
def _bezier_eval(sp, tu, tv):
    m = sp.deg[0]
    k = sp.deg[1]
    bu = np.empty(m + 1)
    bv = np.empty(k + 1)
    _bernstein(m, tu, bu)
    _bernstein(k, tv, bv)
    out = np.zeros(3)
    for i in range(m + 1):
        for j in range(k + 1):
            w = bu[i] * bv[j]
            row = i * (k + 1) + j
            out[0] += w * sp.ctrl[row, 0]
            out[1] += w * sp.ctrl[row, 1]
            out[2] += w * sp.ctrl[row, 2]
    return out


@njit(cache=True)
def _bezier_partials(sp, tu, tv):
    """Derivatives w.r.t. the normalized patch coordinates."""
    m = sp.deg[0]
    k = sp.deg[1]
    bu = np.empty(m + 1)
    bv = np.empty(k + 1)
    _bernstein(m, tu, bu)
    _bernstein(k, tv, bv)
    bu1 = np.empty(m)  # degree m-1
    bv1 = np.empty(k)
    _bernstein(m - 1, tu, bu1)
    _bernstein(k - 1, tv, bv1)

    du = np.zeros(3)
    for i in range(m):
        for j in range(k + 1):
            w = m * bu1[i] * bv[j]
            hi = (i + 1) * (k + 1) + j
            lo = i * (k + 1) + j
            du[0] += w * (sp.ctrl[hi, 0] - sp.ctrl[lo, 0])
            du[1] += w * (sp.ctrl[hi, 1] - sp.ctrl[lo, 1])
            du[2] += w * (sp.ctrl[hi, 2] - sp.ctrl[lo, 2])
    dv = np.zeros(3)
    for i in range(m + 1):
        for j in range(k):
            w = k * bv1[j] * bu[i]
            hi = i * (k + 1) + j + 1
            lo = i * (k + 1) + j
            dv[0] += w * (sp.ctrl[hi, 0] - sp.ctrl[lo, 0])
            dv[1] += w * (sp.ctrl[hi, 1] - sp.ctrl[lo, 1])
            dv[2] += w * (sp.ctrl[hi, 2] - sp.ctrl[lo, 2])
    return du, dv


@njit(cache=True)
def surf_eval(sp, u, v):
    out = np.empty(3)
    if sp.kind == 0:  # plane: origin + u*su + v*sv
        for i in range(3):
            out[i] = sp.par[i] + u * sp.par[3 + i] + v * sp.par[6 + i]
    elif sp.kind == 1:  # paraboloid origin + (u, v, a u^2 + b v^2)
        out[0] = sp.par[2] + u
        out[1] = sp.par[3] + v
        out[2] = sp.par[4] + sp.par[0] * u * u + sp.par[1] * v * v
    elif sp.kind == 2:  # sinusoid origin + (u, v, A sin(w u) sin(w v))
        out[0] = sp.par[2] + u
        out[1] = sp.par[3] + v
        out[2] = sp.par[4] + sp.par[0] * math.sin(sp.par[1] * u) * math.sin(sp.par[1] * v)
    else:  # bezier patch over normalized domain
        tu = (u - sp.dom[0]) / (sp.dom[1] - sp.dom[0])
        tv = (v - sp.dom[2]) / (sp.dom[3] - sp.dom[2])
        out = _bezier_eval(sp, tu, tv)
    return out


@njit(cache=True)
def surf_partials(sp, u, v):
    du = np.empty(3)
    dv = np.empty(3)
    if sp.kind == 0:
        for i in range(3):
            du[i] = sp.par[3 + i]
            dv[i] = sp.par[6 + i]
    elif sp.kind == 1:
        du[0] = 1.0
        du[1] = 0.0
        du[2] = 2.0 * sp.par[0] * u
        dv[0] = 0.0
        dv[1] = 1.0
        dv[2] = 2.0 * sp.par[1] * v
    elif sp.kind == 2:
        amp = sp.par[0]
        w = sp.par[1]
        du[0] = 1.0
        du[1] = 0.0
        du[2] = amp * w * math.cos(w * u) * math.sin(w * v)
        dv[0] = 0.0
        dv[1] = 1.0
        dv[2] = amp * w * math.sin(w * u) * math.cos(w * v)
    else:
        tu = (u - sp.dom[0]) / (sp.dom[1] - sp.dom[0])
        tv = (v - sp.dom[2]) / (sp.dom[3] - sp.dom[2])
        du, dv = _bezier_partials(sp, tu, tv)
        su = 1.0 / (sp.dom[1] - sp.dom[0])
        sv = 1.0 / (sp.dom[3] - sp.dom[2])
        for i in range(3):
            du[i] *= su
            dv[i] *= sv
    return du, dv


@njit(cache=True)
def surf_normal_raw(sp, u, v):
    du, dv = surf_partials(sp, u, v)
    return _cross3(du, dv)


@njit(cache=True)
def surf_unit_normal(sp, u, v):
    """Unit normal; status DEGENERATE when the raw cross product vanishes."""
    raw = surf_normal_raw(sp, u, v)
    nn = _norm3(raw)
    if nn <= 1e-12:
        return DEGENERATE, raw
    return OK, raw / nn


@njit(cache=True)
def _surf_second(sp, u, v):
    """Second partials (analytic kinds only; Bezier handled by FD upstream)."""
    suu = np.zeros(3)
    suv = np.zeros(3)
    svv = np.zeros(3)
    if sp.kind == 1:
        suu[2] = 2.0 * sp.par[0]
        svv[2] = 2.0 * sp.par[1]
    elif sp.kind == 2:
        amp = sp.par[0]
        w = sp.par[1]
        su = math.sin(w * u)
        sv = math.sin(w * v)
        cu = math.cos(w * u)
        cv = math.cos(w * v)
        suu[2] = -amp * w * w * su * sv
        suv[2] = amp * w * w * cu * cv
        svv[2] = -amp * w * w * su * sv
    return suu, suv, svv


@njit(cache=True)
def surf_dnormal_unit(sp, u, v):
    """Partials of the unit normal w.r.t. u and v.

    Analytic via second derivatives for plane/paraboloid/sinusoid; central
    finite differences on the unit normal for Bezier patches.
    """
    if sp.kind == 3:
        s1, npu = surf_unit_normal(sp, u + _FD_H, v)
        s2, nmu = surf_unit_normal(sp, u - _FD_H, v)
        s3, npv = surf_unit_normal(sp, u, v + _FD_H)
        s4, nmv = surf_unit_normal(sp, u, v - _FD_H)
        if s1 != OK or s2 != OK or s3 != OK or s4 != OK:
            return DEGENERATE, npu, npv
        dnu = (npu - nmu) / (2.0 * _FD_H)
        dnv = (npv - nmv) / (2.0 * _FD_H)
        return OK, dnu, dnv

    du, dv = surf_partials(sp, u, v)
    raw = _cross3(du, dv)
    nn = _norm3(raw)
    if nn <= 1e-12:
        return DEGENERATE, raw, raw
    nhat = raw / nn
    suu, suv, svv = _surf_second(sp, u, v)
    dn_u = _cross3(suu, dv) + _cross3(du, suv)
    dn_v = _cross3(suv, dv) + _cross3(du, svv)
    dnu = (dn_u - nhat * _dot3(nhat, dn_u)) / nn
    dnv = (dn_v - nhat * _dot3(nhat, dn_v)) / nn
    return OK, dnu, dnv


@njit(cache=True)
def in_domain_k(sp, u, v):
    return sp.dom[0] <= u <= sp.dom[1] and sp.dom[2] <= v <= sp.dom[3]


# ---------------------------------------------------------------------------
# constraint function and Jacobian on the extended space (q, u, v)

@njit(cache=True)
def constraint_c(rp, sp, vec):
    """Stacked constraint: tool-position residual and the first two
    components of the surface unit normal expressed in the tool frame."""
    n = rp.kinds.shape[0]
    q = vec[:n]
    u = vec[n]
    v = vec[n + 1]
    tool_r, tool_p = fk_pose(rp, q)
    s = surf_eval(sp, u, v)
    status, nhat = surf_unit_normal(sp, u, v)
    out = np.empty(5)
    if status != OK:
        return status, out
    out[0] = tool_p[0] - s[0]
    out[1] = tool_p[1] - s[1]
    out[2] = tool_p[2] - s[2]
    w = _mtv3(tool_r, nhat)
    out[3] = w[0]
    out[4] = w[1]
    return OK, out


@njit(cache=True)
def constraint_jac(rp, sp, vec):
    n = rp.kinds.shape[0]
    q = vec[:n]
    u = vec[n]
    v = vec[n + 1]
    axes_w, org_w, _, _, tool_r, tool_p = fk_full(rp, q)
    du, dv = surf_partials(sp, u, v)
    status, nhat = surf_unit_normal(sp, u, v)
    jac = np.zeros((5, n + 2))
    if status != OK:
        return status, jac
    sdn, dnu, dnv = surf_dnormal_unit(sp, u, v)
    if sdn != OK:
        return sdn, jac

    for i in range(n):
        if rp.kinds[i] == 0:
            lever = tool_p - org_w[i]
            lin = _cross3(axes_w[i], lever)
            jac[0, i] = lin[0]
            jac[1, i] = lin[1]
            jac[2, i] = lin[2]
            # d(R^T nhat)/dq_i = -R^T (omega_i x nhat)
            t = _mtv3(tool_r, _cross3(axes_w[i], nhat))
            jac[3, i] = -t[0]
            jac[4, i] = -t[1]
        else:
            jac[0, i] = axes_w[i, 0]
            jac[1, i] = axes_w[i, 1]
            jac[2, i] = axes_w[i, 2]
    for k in range(3):
        jac[k, n] = -du[k]
        jac[k, n + 1] = -dv[k]
    ru = _mtv3(tool_r, dnu)
    rv = _mtv3(tool_r, dnv)
    jac[3, n] = ru[0]
    jac[4, n] = ru[1]
    jac[3, n + 1] = rv[0]
    jac[4, n + 1] = rv[1]
    return OK, jac


@njit(cache=True)
def _cinf(c):
    m = 0.0
    for i in range(c.shape[0]):
        a = abs(c[i])
        if a > m:
            m = a
    return m


@njit(cache=True)
def newton_project(rp, sp, vec, eps_proj, max_iters):
    """Damped Newton with minimum-norm (pseudo-inverse) steps.

    Full step first, halved up to four times until the residual 2-norm
    decreases; no decrease at all counts as non-convergence.
    """
    x = vec.copy()
    status, c = constraint_c(rp, sp, x)
    if status != OK:
        return status, x
    for it in range(max_iters + 1):
        if _cinf(c) <= eps_proj:
            return OK, x
        if it == max_iters:
            break
        js, jac = constraint_jac(rp, sp, x)
        if js != OK:
            return js, x
        u, s, vt = np.linalg.svd(jac, False)
        if s[4] < 1e-9:
            return SINGULAR, x
        utc = u.T @ c
        for k in range(5):
            utc[k] /= s[k]
        dx = vt.T @ utc
        c0 = _vnorm(c)
        alpha = 1.0
        accepted = False
        for _ in range(5):
            xn = x - alpha * dx
            sc, cn = constraint_c(rp, sp, xn)
            if sc == OK and _vnorm(cn) < c0:
                x = xn
                c = cn
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            return NO_CONVERGENCE, x
    return NO_CONVERGENCE, x


@njit(cache=True)
def chart_basis(rp, sp, vec, rank_rtol):
    """Orthonormal null-space basis of the constraint Jacobian.

    Requires exactly five singular values above rank_rtol * sigma_max;
    otherwise the point is (near) singular and no chart exists.
    """
    n2 = vec.shape[0]
    js, jac = constraint_jac(rp, sp, vec)
    if js != OK:
        return js, np.zeros((n2, n2 - 5))
    u, s, vt = np.linalg.svd(jac)
    smax = s[0]
    if smax <= 0.0:
        return SINGULAR, np.zeros((n2, n2 - 5))
    rank = 0
    for k in range(5):
        if s[k] > rank_rtol * smax:
            rank += 1
    if rank < 5:
        return SINGULAR, np.zeros((n2, n2 - 5))
    basis = np.ascontiguousarray(vt[5:, :].T)
    return OK, basis


@njit(cache=True)
def tool_align_dot(rp, sp, vec):
    """Dot product of the tool z-axis with the surface unit normal."""
    n = rp.kinds.shape[0]
    tool_r, _ = fk_pose(rp, vec[:n])
    status, nhat = surf_unit_normal(sp, vec[n], vec[n + 1])
    if status != OK:
        return status, 0.0
    d = tool_r[0, 2] * nhat[0] + tool_r[1, 2] * nhat[1] + tool_r[2, 2] * nhat[2]
    return OK, d


# ---------------------------------------------------------------------------
# collision primitives

@njit(cache=True)
def _pt_seg_dist(p, a, b):
    ab = b - a
    denom = _dot3(ab, ab)
    if denom < 1e-18:
        return _norm3(p - a)
    t = _dot3(p - a, ab) / denom
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return _norm3(p - (a + ab * t))


@njit(cache=True)
def _seg_seg_dist(p1, q1, p2, q2):
    """Closest distance between segments (clamped line-line parameters)."""
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = _dot3(d1, d1)
    b = _dot3(d1, d2)
    c = _dot3(d2, d2)
    d = _dot3(d1, r)
    e = _dot3(d2, r)
    den = a * c - b * b

    if den > 1e-14:
        s = (b * e - c * d) / den
        if s < 0.0:
            s = 0.0
        elif s > 1.0:
            s = 1.0
    else:
        s = 0.0
    t = 0.0
    if c > 1e-18:
        t = (b * s + e) / c
    if t < 0.0:
        t = 0.0
        if a > 1e-18:
            s = -d / a
            if s < 0.0:
                s = 0.0
            elif s > 1.0:
                s = 1.0
    elif t > 1.0:
        t = 1.0
        if a > 1e-18:
            s = (b - d) / a
            if s < 0.0:
                s = 0.0
            elif s > 1.0:
                s = 1.0
    return _norm3((p1 + d1 * s) - (p2 + d2 * t))


@njit(cache=True)
def _pt_box_signed(p, center, half):
    """Signed distance from a point to an axis-aligned box."""
    out = 0.0
    inner = -1e300
    for i in range(3):
        d = abs(p[i] - center[i]) - half[i]
        if d > 0.0:
            out += d * d
        if d > inner:
            inner = d
    if out > 0.0:
        return math.sqrt(out)
    return inner  # <= 0: penetration depth of the deepest axis


@njit(cache=True)
def _seg_box_signed(a, b, center, half):
    """Signed segment-box distance via golden section.

    The signed distance to a convex set is convex along a line, so a golden
    section over the segment parameter converges to the global minimum.
    """
    inv_phi = 0.6180339887498949
    lo = 0.0
    hi = 1.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1 = _pt_box_signed(a + (b - a) * x1, center, half)
    f2 = _pt_box_signed(a + (b - a) * x2, center, half)
    for _ in range(60):
        if f1 <= f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = _pt_box_signed(a + (b - a) * x1, center, half)
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = _pt_box_signed(a + (b - a) * x2, center, half)
    best = f1 if f1 < f2 else f2
    fa = _pt_box_signed(a, center, half)
    fb = _pt_box_signed(b, center, half)
    if fa < best:
        best = fa
    if fb < best:
        best = fb
    return best


@njit(cache=True)
def capsule_obstacle_dist(p0, p1, radius, okind, oa, ob, orad):
    """Separation between a capsule and one obstacle (negative = penetration)."""
    if okind == 0:  # sphere
        return _pt_seg_dist(oa, p0, p1) - radius - orad
    if okind == 1:  # capsule
        return _seg_seg_dist(p0, p1, oa, ob) - radius - orad
    return _seg_box_signed(p0, p1, oa, ob) - radius  # box


@njit(cache=True)
def config_collides(rp, wp, link_r, link_p):
    """Any world-space link capsule within margin of any obstacle.

    Contact counts as collision (distance <= margin). A per-axis AABB gap
    test rejects far pairs before the exact distance runs.
    """
    ncap = rp.cap_link.shape[0]
    nobs = wp.kind.shape[0]
    for ci in range(ncap):
        li = rp.cap_link[ci]
        p0 = link_p[li] + _mv3(link_r[li], rp.cap_p0[ci])
        p1 = link_p[li] + _mv3(link_r[li], rp.cap_p1[ci])
        rad = rp.cap_r[ci]
        for oi in range(nobs):
            skip = False
            for ax in range(3):
                clo = min(p0[ax], p1[ax]) - rad
                chi = max(p0[ax], p1[ax]) + rad
                if wp.kind[oi] == 0:
                    olo = wp.a[oi, ax] - wp.r[oi]
                    ohi = wp.a[oi, ax] + wp.r[oi]
                elif wp.kind[oi] == 1:
                    olo = min(wp.a[oi, ax], wp.b[oi, ax]) - wp.r[oi]
                    ohi = max(wp.a[oi, ax], wp.b[oi, ax]) + wp.r[oi]
                else:
                    olo = wp.a[oi, ax] - wp.b[oi, ax]
                    ohi = wp.a[oi, ax] + wp.b[oi, ax]
                if clo - ohi > wp.margin or olo - chi > wp.margin:
                    skip = True
                    break
            if skip:
                continue
            d = capsule_obstacle_dist(
                p0, p1, rad, wp.kind[oi], wp.a[oi], wp.b[oi], wp.r[oi]
            )
            if d <= wp.margin:
                return True
    return False


@njit(cache=True)
def state_valid_k(rp, sp, wp, vec):
    """Joint limits, domain membership, and collision freedom."""
    n = rp.kinds.shape[0]
    if not within_limits_k(rp, vec[:n]):
        return False
    if not in_domain_k(sp, vec[n], vec[n + 1]):
        return False
    if rp.cap_link.shape[0] == 0 or wp.kind.shape[0] == 0:
        return True
    _, _, link_r, link_p, _, _ = fk_full(rp, vec[:n])
    return not config_collides(rp, wp, link_r, link_p)


# ---------------------------------------------------------------------------
# on-manifold traversal

@njit(cache=True)
def walk_geodesic(rp, sp, wp, a, b, step, eps_chart, rho, rank_rtol,
                  eps_proj, max_newton, validate, max_states):
    """Discrete chart-hopping traversal from a toward b.

    Steps of tangent length `step` in the current chart, projecting each
    step back to the manifold and re-anchoring the chart when the current
    state drifts off its tangent plane (deviation > eps_chart) or leaves
    the chart ball (radius rho). With validate=True every new state must
    also pass limits/domain/collision. Returns a status code, the visited
    states (row 0 = a, last row = b on success) and their count.
    """
    dim = a.shape[0]
    states = np.empty((max_states, dim))
    states[0] = a
    count = 1

    cur = a.copy()
    anchor = a.copy()
    cs, basis = chart_basis(rp, sp, anchor, rank_rtol)
    if cs != OK:
        return cs, states, count

    stall = 0
    while True:
        diff_b = b - cur
        d_b = _vnorm(diff_b)
        if d_b <= step + 1e-12:
            if validate and not state_valid_k(rp, sp, wp, b):
                return INVALID_STATE, states, count
            if count >= max_states:
                return BUFFER_FULL, states, count
            states[count] = b
            count += 1
            return OK, states, count

        y_cur = basis.T @ (cur - anchor)
        y_b = basis.T @ (b - anchor)
        dirv = y_b - y_cur
        nd = _vnorm(dirv)
        if nd < 1e-14:
            # target projects onto the anchor point of this chart: re-anchor
            stall += 1
            if stall >= 3:
                return NO_CONVERGENCE, states, count
            anchor = cur.copy()
            cs, basis = chart_basis(rp, sp, anchor, rank_rtol)
            if cs != OK:
                return cs, states, count
            continue

        y_new = y_cur + dirv * (step / nd)
        x_lin = anchor + basis @ y_new
        ps, x_new = newton_project(rp, sp, x_lin, eps_proj, max_newton)
        if ps != OK:
            return ps, states, count
        if _vnorm(x_new - cur) > 2.0 * step:
            return DISCONTINUOUS, states, count
        if _vnorm(b - x_new) >= d_b - 0.1 * step:
            stall += 1
            if stall >= 3:
                return NO_CONVERGENCE, states, count
        else:
            stall = 0
        if validate and not state_valid_k(rp, sp, wp, x_new):
            return INVALID_STATE, states, count
        if count >= max_states:
            return BUFFER_FULL, states, count
        states[count] = x_new
        count += 1
        cur = x_new

        off = cur - anchor
        y = basis.T @ off
        dev = _vnorm(off - basis @ y)
        if dev > eps_chart or _vnorm(y) > rho:
            anchor = cur.copy()
            cs, basis = chart_basis(rp, sp, anchor, rank_rtol)
            if cs != OK:
                return cs, states, count


# ---------------------------------------------------------------------------
# batched helpers for baselines and validation sweeps

@njit(cache=True)
def baseline_scan(rp, sp, wp, draws, eps_proj, max_newton, n_grid, marks):
    """Project random ambient draws and mark reached grid cells.

    Only aligned (tool axis along +normal) valid states count; this is
    point reachability, no continuity involved. Returns the number of
    successful marks.
    """
    n = rp.kinds.shape[0]
    hits = 0
    for row in range(draws.shape[0]):
        st, x = newton_project(rp, sp, draws[row], eps_proj, max_newton)
        if st != OK:
            continue
        if not state_valid_k(rp, sp, wp, x):
            continue
        ast, d = tool_align_dot(rp, sp, x)
        if ast != OK or d <= 0.0:
            continue
        u = x[n]
        v = x[n + 1]
        i = int((u - sp.dom[0]) / (sp.dom[1] - sp.dom[0]) * n_grid)
        j = int((v - sp.dom[2]) / (sp.dom[3] - sp.dom[2]) * n_grid)
        if i >= n_grid:
            i = n_grid - 1
        if j >= n_grid:
            j = n_grid - 1
        marks[i, j] += 1
        hits += 1
    return hits


@njit(cache=True)
def residual_batch(rp, sp, vecs, out):
    for row in range(vecs.shape[0]):
        st, c = constraint_c(rp, sp, vecs[row])
        if st != OK:
            out[row] = np.inf
        else:
            out[row] = _cinf(c)


@njit(cache=True)
def align_batch(rp, sp, vecs, out):
    for row in range(vecs.shape[0]):
        st, d = tool_align_dot(rp, sp, vecs[row])
        out[row] = d if st == OK else np.nan
