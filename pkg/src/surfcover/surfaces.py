"""C2-smooth parametric surfaces with analytic partials and normals.

Four kinds: plane, paraboloid (z = a u^2 + b v^2), sinusoid
(z = A sin(w u) sin(w v)) and tensor Bezier patches. The Bezier patch is
the free-form stand-in for CAD geometry: analytic first partials, with
normal derivatives taken by central differences.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .errors import DegenerateSurfaceError

PLANE = "plane"
PARABOLOID = "paraboloid"
SINUSOID = "sinusoid"
BEZIER = "bezier_patch"

_KIND_CODES = {PLANE: 0, PARABOLOID: 1, SINUSOID: 2, BEZIER: 3}


class Surface:
    """Immutable surface; construct via the factory functions below."""

    def __init__(self, kind: str, pack: K.SurfPack, params: dict):
        self.kind = kind
        self.params = params
        self._pack = pack
        u0, u1, v0, v1 = pack.dom
        if not (u0 < u1 and v0 < v1):
            raise ValueError("domain must be a proper rectangle")
        self._probe_nondegenerate()

    @property
    def pack(self) -> K.SurfPack:
        return self._pack

    @property
    def domain(self) -> tuple[float, float, float, float]:
        return tuple(self._pack.dom)

    def _probe_nondegenerate(self, res: int = 32):
        """Reject parametrizations whose normal vanishes on the domain."""
        u0, u1, v0, v1 = self._pack.dom
        for u in np.linspace(u0, u1, res):
            for v in np.linspace(v0, v1, res):
                raw = K.surf_normal_raw(self._pack, u, v)
                if np.linalg.norm(raw) <= 1e-9:
                    raise DegenerateSurfaceError(
                        f"degenerate parametrization at (u={u:.4f}, v={v:.4f})"
                    )

    # -- operations ---------------------------------------------------------

    def eval(self, u: float, v: float) -> np.ndarray:
        return K.surf_eval(self._pack, float(u), float(v))

    def partials(self, u: float, v: float) -> tuple[np.ndarray, np.ndarray]:
        return K.surf_partials(self._pack, float(u), float(v))

    def normal(self, u: float, v: float) -> tuple[np.ndarray, np.ndarray]:
        """(raw cross product, unit normal)."""
        raw = K.surf_normal_raw(self._pack, float(u), float(v))
        nn = np.linalg.norm(raw)
        if nn <= 1e-12:
            raise DegenerateSurfaceError(f"zero normal at (u={u}, v={v})")
        return raw, raw / nn

    def in_domain(self, u: float, v: float) -> bool:
        return bool(K.in_domain_k(self._pack, float(u), float(v)))

    def closest_point(self, p) -> tuple[float, float]:
        """Domain point minimizing the distance to p.

        Multi-start: best seed on a 32x32 grid, then damped Gauss-Newton on
        (u, v) with clamping to the domain.
        """
        p = np.asarray(p, dtype=float)
        u0, u1, v0, v1 = self._pack.dom
        us = np.linspace(u0, u1, 32)
        vs = np.linspace(v0, v1, 32)
        best = (us[0], vs[0])
        best_d = np.inf
        for u in us:
            for v in vs:
                d = np.linalg.norm(self.eval(u, v) - p)
                if d < best_d:
                    best_d = d
                    best = (u, v)

        u, v = best
        for _ in range(50):
            r = self.eval(u, v) - p
            du, dv = self.partials(u, v)
            jac = np.stack([du, dv], axis=1)
            jtj = jac.T @ jac
            jtr = jac.T @ r
            try:
                step = np.linalg.solve(jtj + 1e-12 * np.eye(2), jtr)
            except np.linalg.LinAlgError:
                break
            cur = np.linalg.norm(r)
            alpha = 1.0
            moved = False
            for _ in range(6):
                un = min(max(u - alpha * step[0], u0), u1)
                vn = min(max(v - alpha * step[1], v0), v1)
                if np.linalg.norm(self.eval(un, vn) - p) < cur:
                    if abs(un - u) < 1e-10 and abs(vn - v) < 1e-10:
                        return un, vn
                    u, v = un, vn
                    moved = True
                    break
                alpha *= 0.5
            if not moved:
                break
        return u, v


# ---------------------------------------------------------------------------
# factories

def _make_pack(kind, par, ctrl, deg, domain):
    dom = np.asarray(domain, dtype=float)
    if dom.shape != (4,):
        raise ValueError("domain must be (u_min, u_max, v_min, v_max)")
    return K.SurfPack(
        _KIND_CODES[kind],
        np.asarray(par, dtype=float),
        np.ascontiguousarray(ctrl, dtype=float),
        np.asarray(deg, dtype=np.int64),
        dom,
    )


_DUMMY_CTRL = np.zeros((1, 3))
_NO_DEG = np.zeros(2, dtype=np.int64)


def make_plane(origin, span_u, span_v, domain) -> Surface:
    origin = np.asarray(origin, dtype=float)
    span_u = np.asarray(span_u, dtype=float)
    span_v = np.asarray(span_v, dtype=float)
    par = np.concatenate([origin, span_u, span_v])
    return Surface(PLANE, _make_pack(PLANE, par, _DUMMY_CTRL, _NO_DEG, domain),
                   {"origin": origin, "span_u": span_u, "span_v": span_v})


def make_paraboloid(a, b, domain, origin=(0.0, 0.0, 0.0)) -> Surface:
    origin = np.asarray(origin, dtype=float)
    par = np.concatenate([[a, b], origin])
    return Surface(PARABOLOID,
                   _make_pack(PARABOLOID, par, _DUMMY_CTRL, _NO_DEG, domain),
                   {"a": a, "b": b, "origin": origin})


def make_sinusoid(amplitude, frequency, domain, origin=(0.0, 0.0, 0.0)) -> Surface:
    origin = np.asarray(origin, dtype=float)
    par = np.concatenate([[amplitude, frequency], origin])
    return Surface(SINUSOID,
                   _make_pack(SINUSOID, par, _DUMMY_CTRL, _NO_DEG, domain),
                   {"amplitude": amplitude, "frequency": frequency,
                    "origin": origin})


def make_bezier(control_points, domain) -> Surface:
    """control_points: (m+1, k+1, 3) grid of 3-vectors, degrees m, k >= 2."""
    ctrl = np.asarray(control_points, dtype=float)
    if ctrl.ndim != 3 or ctrl.shape[2] != 3:
        raise ValueError("control points must have shape (m+1, k+1, 3)")
    m = ctrl.shape[0] - 1
    k = ctrl.shape[1] - 1
    if m < 2 or k < 2:
        raise ValueError("patch degrees must be at least 2 for C2 smoothness")
    flat = ctrl.reshape(-1, 3)
    return Surface(BEZIER,
                   _make_pack(BEZIER, [0.0], flat, [m, k], domain),
                   {"control_points": ctrl})


def surface_from_config(cfg: dict) -> Surface:
    """Build a surface from its scenario-file description."""
    kind = cfg.get("kind")
    domain = cfg.get("domain")
    if kind is None or domain is None:
        raise ValueError("surface config requires 'kind' and 'domain'")
    if kind == PLANE:
        return make_plane(cfg.get("origin", (0, 0, 0)),
                          cfg.get("span_u", (1, 0, 0)),
                          cfg.get("span_v", (0, 1, 0)), domain)
    if kind == PARABOLOID:
        return make_paraboloid(cfg["a"], cfg["b"], domain,
                               cfg.get("origin", (0.0, 0.0, 0.0)))
    if kind == SINUSOID:
        return make_sinusoid(cfg["amplitude"], cfg["frequency"], domain,
                             cfg.get("origin", (0.0, 0.0, 0.0)))
    if kind == BEZIER:
        return make_bezier(cfg["control_points"], domain)
    raise ValueError(f"unknown surface kind {kind!r}")
