"""Strongly convex bodies on S^2 as finite intersections of geodesic caps.

A cap is {p : <p, pole> >= cos(rho)} with rho in (0, pi/2]. Intersections of
caps are closed under inner parallels (every radius shrinks by t), which
makes perimeter profiles exact rather than approximate. Boundary structure,
perimeter (sum of circle arcs) and area (Gauss-Bonnet) are all closed form.

Conventions:
  * bodies are closed sets, membership uses non-strict inequalities;
  * each cap circle is parameterized as
        c_i(theta) = cos(rho_i) n_i + sin(rho_i) (cos(theta) u_i + sin(theta) v_i)
    with (u_i, v_i, n_i) right-handed, so increasing theta walks the circle
    counterclockwise with the cap on the left;
  * tangential (measure-zero) configurations are rejected, never perturbed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from robinsphere.errors import (
    DegenerateGeometryError,
    EmptyInteriorError,
    GeometryError,
)
from robinsphere.spaceform import HALF_PI

TWO_PI = 2.0 * math.pi

_TANGENCY_TOL = 1e-10
_FEAS_TOL = 1e-11


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise GeometryError("cannot normalize the zero vector")
    return v / n


def _clamp(x: float) -> float:
    return min(1.0, max(-1.0, x))


@dataclass(frozen=True)
class CapConstraint:
    """One geodesic cap: unit pole and geodesic radius rho in (0, pi/2]."""

    pole: tuple[float, float, float]
    rho: float

    def __post_init__(self):
        norm = math.sqrt(sum(c * c for c in self.pole))
        if abs(norm - 1.0) > 1e-12:
            raise GeometryError(f"cap pole must be unit to 1e-12, |pole| = {norm}")
        if not 0.0 < self.rho <= HALF_PI:
            raise GeometryError(f"cap radius {self.rho} outside (0, pi/2]")

    @property
    def pole_array(self) -> np.ndarray:
        return np.asarray(self.pole, dtype=float)


@dataclass(frozen=True)
class CapBody:
    """Intersection of finitely many geodesic caps."""

    constraints: tuple[CapConstraint, ...]

    def __post_init__(self):
        if len(self.constraints) == 0:
            raise GeometryError("a body needs at least one cap constraint")

    @property
    def poles(self) -> np.ndarray:
        return np.array([c.pole for c in self.constraints], dtype=float)

    @property
    def radii(self) -> np.ndarray:
        return np.array([c.rho for c in self.constraints], dtype=float)


def make_body(poles, radii) -> CapBody:
    caps = tuple(
        CapConstraint(tuple(float(x) for x in _unit(p)), float(r))
        for p, r in zip(poles, radii)
    )
    return CapBody(caps)


def cap_fixture(radius: float, pole=(0.0, 0.0, 1.0)) -> CapBody:
    """A single geodesic cap (the ball fixture)."""
    return make_body([pole], [radius])


def octant_fixture() -> CapBody:
    """The positive octant: three hemisphere constraints about the axes."""
    return make_body(np.eye(3), [HALF_PI] * 3)


# ---------------------------------------------------------------------------
# cached per-pole-set trigonometry
#
# Inner parallels reuse the poles of the parent body, so the circle frames
# and all pairwise scalar products are cached keyed by the pole matrix.

_TABLE_CACHE: dict = {}


class _PoleTables:
    __slots__ = ("frames", "G", "U", "V", "k")

    def __init__(self, poles: np.ndarray):
        k = len(poles)
        us = np.empty((k, 3))
        vs = np.empty((k, 3))
        ref_z = np.array([0.0, 0.0, 1.0])
        ref_x = np.array([1.0, 0.0, 0.0])
        for i in range(k):
            ref = ref_x if abs(poles[i] @ ref_z) > 0.9 else ref_z
            us[i] = _unit(np.cross(poles[i], ref))
            vs[i] = np.cross(poles[i], us[i])
        self.k = k
        self.frames = [(us[i], vs[i], poles[i]) for i in range(k)]
        self.G = (poles @ poles.T).tolist()
        self.U = (us @ poles.T).tolist()
        self.V = (vs @ poles.T).tolist()


def _tables(body: CapBody) -> _PoleTables:
    key = body.poles.tobytes()
    tab = _TABLE_CACHE.get(key)
    if tab is None:
        tab = _PoleTables(body.poles)
        if len(_TABLE_CACHE) > 256:
            _TABLE_CACHE.clear()
        _TABLE_CACHE[key] = tab
    return tab


# ---------------------------------------------------------------------------
# membership and distances


def contains(body: CapBody, p, tol: float = 1e-12) -> bool:
    """Closed membership: <p, pole_i> >= cos(rho_i) for every cap."""
    p = np.asarray(p, dtype=float)
    return bool(np.all(body.poles @ p >= np.cos(body.radii) - tol))


def _margin(body: CapBody, p) -> float:
    dots = np.clip(body.poles @ p, -1.0, 1.0)
    return float(np.min(body.radii - np.arccos(dots)))


def distance_to_boundary(body: CapBody, p) -> float:
    """Distance from an interior/boundary point to the boundary.

    Equals the smallest slack min_i (rho_i - d(p, pole_i)): every cap contains
    the geodesic ball of that radius around p, and the touching point of the
    tightest cap lies on the body boundary.
    """
    p = _unit(p)
    if not contains(body, p, tol=1e-9):
        raise GeometryError("point lies outside the body")
    return _margin(body, p)


def inner_parallel(body: CapBody, t: float, inradius_hint: float | None = None) -> CapBody:
    """Inner parallel set: the same poles with every radius reduced by t."""
    if t < 0.0:
        raise GeometryError(f"parallel distance must be nonnegative, got {t}")
    if t == 0.0:
        return body
    rin = inradius(body) if inradius_hint is None else inradius_hint
    if t >= rin:
        raise EmptyInteriorError(
            f"inner parallel at t = {t} >= inradius {rin} has empty interior"
        )
    return make_body(body.poles, body.radii - t)


# ---------------------------------------------------------------------------
# boundary structure


@dataclass
class BoundaryArc:
    """Feasible sub-arc of one cap circle, traversed counterclockwise."""

    cap: int
    theta_start: float
    theta_end: float  # > theta_start; may exceed 2*pi for wrapping arcs
    start_source: int | None  # constraint active at the start vertex
    end_source: int | None
    length: float = 0.0
    geodesic_curvature: float = 0.0

    @property
    def width(self) -> float:
        return self.theta_end - self.theta_start


@dataclass
class BoundaryVertex:
    point: np.ndarray
    exterior_angle: float
    caps: tuple[int, int]  # (incoming arc cap, outgoing arc cap)


@dataclass
class BoundaryStructure:
    """Arcs in traversal order; vertices[j] closes arcs[j] and opens arcs[j+1]."""

    arcs: list[BoundaryArc]
    vertices: list[BoundaryVertex]
    frames: list = field(default_factory=list)
    radii: np.ndarray | None = None

    def arc_point(self, arc: BoundaryArc, theta: float) -> np.ndarray:
        u, v, n = self.frames[arc.cap]
        rho = float(self.radii[arc.cap])
        return (
            math.cos(rho) * n
            + math.sin(rho) * (math.cos(theta) * u + math.sin(theta) * v)
        )


def _feasible_arcs_on_circle(radii, i: int, tab: _PoleTables):
    """Feasible theta-set of circle i against all other caps.

    Returns (arcs, full) where arcs is a list of
    (theta_start, theta_end, start_source, end_source), theta_end > theta_start.
    """
    k = tab.k
    rho_i = radii[i]
    si, ci = math.sin(rho_i), math.cos(rho_i)
    Gi, Ui, Vi = tab.G[i], tab.U[i], tab.V[i]

    # each other cap j restricts theta through A cos(theta - t0) >= c
    coeffs = []  # (j, A, t0, c)
    for j in range(k):
        if j == i:
            continue
        a = si * Ui[j]
        b = si * Vi[j]
        c = math.cos(radii[j]) - ci * Gi[j]
        A = math.hypot(a, b)
        if A <= 1e-13:
            if abs(c) <= _TANGENCY_TOL:
                raise DegenerateGeometryError(
                    f"caps {i} and {j} have coincident boundary circles"
                )
            if c > 0.0:
                return [], False  # circle i entirely outside cap j
            continue
        r = c / A
        if abs(abs(r) - 1.0) <= _TANGENCY_TOL:
            raise DegenerateGeometryError(
                f"circle of cap {i} is tangent to the boundary of cap {j}"
            )
        if r > 1.0:
            return [], False
        if r < -1.0:
            continue  # never binds
        coeffs.append((j, A, math.atan2(b, a), c))

    if not coeffs:
        return [(0.0, TWO_PI, None, None)], True

    def feasible(theta: float) -> bool:
        for _, A, t0, c in coeffs:
            if A * math.cos(theta - t0) < c - _FEAS_TOL:
                return False
        return True

    # candidate switch angles: the two crossings of each binding constraint
    events = []  # (theta in [0, 2pi), source j)
    for j, A, t0, c in coeffs:
        delta = math.acos(_clamp(c / A))
        events.append(((t0 - delta) % TWO_PI, j))
        events.append(((t0 + delta) % TWO_PI, j))
    events.sort()
    for (ta, ja), (tb, jb) in zip(events, events[1:]):
        if tb - ta < 1e-12:
            raise DegenerateGeometryError(
                f"caps {ja} and {jb} cross the circle of cap {i} at the same point"
            )

    m = len(events)
    seg_ok = []
    for kk in range(m):
        ta = events[kk][0]
        tb = events[(kk + 1) % m][0] + (TWO_PI if kk + 1 == m else 0.0)
        seg_ok.append(feasible(0.5 * (ta + tb)))

    if all(seg_ok):
        raise DegenerateGeometryError(
            f"circle of cap {i} touches another cap boundary tangentially"
        )
    if not any(seg_ok):
        return [], False

    # maximal runs of feasible segments (circular), starting from a gap
    arcs = []
    k0 = next(kk for kk in range(m) if not seg_ok[kk])
    run_start = None
    for step in range(m):
        kk = (k0 + step) % m
        if seg_ok[kk] and run_start is None:
            run_start = kk
        if run_start is not None and not seg_ok[(kk + 1) % m]:
            start_ev = events[run_start]
            end_ev = events[(kk + 1) % m]
            ts = start_ev[0]
            te = end_ev[0]
            if te <= ts:
                te += TWO_PI
            arcs.append((ts, te, start_ev[1], end_ev[1]))
            run_start = None
    return arcs, False


def _raw_arcs(body: CapBody):
    """All feasible boundary arcs plus the full-circle flag.

    Raises EmptyInteriorError when no circle carries feasible points: the
    boundary of a nonempty body always meets some cap circle.
    """
    tab = _tables(body)
    radii = body.radii.tolist()
    raw: list[BoundaryArc] = []
    fulls: list[BoundaryArc] = []
    for i in range(tab.k):
        arcs, full = _feasible_arcs_on_circle(radii, i, tab)
        srho = math.sin(radii[i])
        kg = math.cos(radii[i]) / srho
        for ts, te, js, je in arcs:
            if te - ts < 1e-12:
                raise DegenerateGeometryError(
                    f"degenerate zero-width boundary arc on cap {i}"
                )
            arc = BoundaryArc(
                cap=i,
                theta_start=ts,
                theta_end=te,
                start_source=js,
                end_source=je,
                length=srho * (te - ts),
                geodesic_curvature=kg,
            )
            raw.append(arc)
            if full:
                fulls.append(arc)
    if not raw:
        raise EmptyInteriorError("no boundary arcs: the cap intersection is empty")
    if fulls and len(raw) > 1:
        raise DegenerateGeometryError(
            "a full boundary circle coexists with other boundary arcs"
        )
    return raw, tab, bool(fulls)


def boundary_structure(body: CapBody) -> BoundaryStructure:
    """Arcs and vertices of the boundary, chained into one closed curve."""
    raw, tab, has_full = _raw_arcs(body)
    radii = body.radii
    structure = BoundaryStructure(arcs=[], vertices=[], frames=tab.frames, radii=radii)

    if has_full:
        structure.arcs = list(raw)
        return structure

    def endpoint(arc: BoundaryArc, which: str) -> np.ndarray:
        theta = arc.theta_start if which == "start" else arc.theta_end
        return structure.arc_point(arc, theta)

    # chain arcs: the end of an arc on cap i limited by cap j continues on an
    # arc of cap j whose start is limited by cap i at the same point
    unused = list(range(len(raw)))
    order = [unused.pop(0)]
    while True:
        cur = raw[order[-1]]
        p_end = endpoint(cur, "end")
        j = cur.end_source
        best, best_d = None, math.inf
        for idx in unused + [order[0]]:
            cand = raw[idx]
            if cand.cap != j or cand.start_source != cur.cap:
                continue
            d = float(np.linalg.norm(endpoint(cand, "start") - p_end))
            if d < best_d:
                best, best_d = idx, d
        if best is None or best_d > 1e-7:
            raise DegenerateGeometryError("boundary arcs do not chain into a closed curve")
        if best == order[0]:
            break
        unused.remove(best)
        order.append(best)
    if unused:
        raise DegenerateGeometryError("boundary has more than one component")

    poles = body.poles
    arcs = [raw[idx] for idx in order]
    vertices = []
    for pos, arc in enumerate(arcs):
        nxt = arcs[(pos + 1) % len(arcs)]
        p = endpoint(arc, "end")
        t_in = _unit(np.cross(poles[arc.cap], p))
        t_out = _unit(np.cross(poles[nxt.cap], p))
        ext = math.atan2(float(p @ np.cross(t_in, t_out)), float(t_in @ t_out))
        if not 1e-12 < ext < math.pi - 1e-12:
            raise DegenerateGeometryError(
                f"exterior angle {ext} at a vertex outside (0, pi)"
            )
        vertices.append(
            BoundaryVertex(point=p, exterior_angle=ext, caps=(arc.cap, nxt.cap))
        )
    structure.arcs = arcs
    structure.vertices = vertices
    return structure


def perimeter(body: CapBody, structure: BoundaryStructure | None = None) -> float:
    """Boundary length: sum over arcs of sin(rho_i) * width."""
    if structure is not None:
        return sum(arc.length for arc in structure.arcs)
    raw, _, _ = _raw_arcs(body)
    return sum(arc.length for arc in raw)


def area(body: CapBody, structure: BoundaryStructure | None = None) -> float:
    """Enclosed area by Gauss-Bonnet: 2 pi - sum cos(rho_i) dtheta_i - sum exterior angles."""
    bs = structure if structure is not None else boundary_structure(body)
    radii = body.radii
    turning = sum(math.cos(radii[arc.cap]) * arc.width for arc in bs.arcs)
    corners = sum(v.exterior_angle for v in bs.vertices)
    return TWO_PI - turning - corners


# ---------------------------------------------------------------------------
# incenter and inradius


def _slerp(a: np.ndarray, b: np.ndarray, frac: float) -> np.ndarray:
    gamma = math.acos(_clamp(float(a @ b)))
    if gamma < 1e-14:
        return a.copy()
    return (math.sin((1.0 - frac) * gamma) * a + math.sin(frac * gamma) * b) / math.sin(gamma)


def _triple_incenter(poles, radii, idx):
    """Newton solve of the 3-active-constraint equal-margin system."""
    na, nb, nc = (poles[k] for k in idx)
    ra, rb, rc = (radii[k] for k in idx)
    x = na + nb + nc
    nx = float(np.linalg.norm(x))
    if nx < 1e-9:
        return None
    x = x / nx
    t = min(ra - math.acos(_clamp(float(x @ na))),
            rb - math.acos(_clamp(float(x @ nb))),
            rc - math.acos(_clamp(float(x @ nc))))
    z = np.array([x[0], x[1], x[2], t])
    for _ in range(60):
        x = z[:3]
        t = z[3]
        F = np.array(
            [
                float(x @ na) - math.cos(ra - t),
                float(x @ nb) - math.cos(rb - t),
                float(x @ nc) - math.cos(rc - t),
                0.5 * (float(x @ x) - 1.0),
            ]
        )
        if float(np.linalg.norm(F)) < 1e-14:
            break
        J = np.zeros((4, 4))
        J[0, :3], J[0, 3] = na, -math.sin(ra - t)
        J[1, :3], J[1, 3] = nb, -math.sin(rb - t)
        J[2, :3], J[2, 3] = nc, -math.sin(rc - t)
        J[3, :3] = x
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        z = z - step
    x = z[:3]
    if abs(float(x @ x) - 1.0) > 1e-10:
        return None
    return _unit(x)


def incenter_and_inradius(body: CapBody) -> tuple[np.ndarray, float]:
    """Deepest interior point and its boundary distance.

    The slack function f(p) = min_i (rho_i - d(p, pole_i)) is concave on the
    body, so its maximum is attained with one, two, or three active caps;
    all candidate configurations are enumerated in closed form (pairs) or by
    Newton (triples), with a Nelder-Mead polish as a safety net.
    """
    poles = body.poles
    radii = body.radii
    k = len(radii)

    candidates = [poles[i] for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            gamma = math.acos(_clamp(float(poles[i] @ poles[j])))
            if gamma < 1e-12:
                continue
            alpha = 0.5 * (radii[i] - radii[j] + gamma)
            if 0.0 < alpha < gamma:
                candidates.append(_slerp(poles[i], poles[j], alpha / gamma))
    if k >= 3:
        for i in range(k):
            for j in range(i + 1, k):
                for l in range(j + 1, k):
                    x = _triple_incenter(poles, radii, (i, j, l))
                    if x is not None:
                        candidates.append(x)

    best_p, best_f = None, -math.inf
    for p in candidates:
        f = _margin(body, p)
        if f > best_f:
            best_p, best_f = p, f

    if best_p is None:
        raise EmptyInteriorError("cap intersection has empty interior")

    # local polish on a tangent chart around the best candidate
    ref = [0.0, 0.0, 1.0] if abs(best_p[2]) < 0.9 else [1.0, 0.0, 0.0]
    e1 = _unit(np.cross(best_p, ref))
    e2 = np.cross(best_p, e1)

    def neg_margin(xy):
        q = _unit(best_p + xy[0] * e1 + xy[1] * e2)
        return -_margin(body, q)

    res = optimize.minimize(
        neg_margin,
        np.zeros(2),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-13, "maxiter": 400},
    )
    if -res.fun > best_f:
        best_f = -res.fun
        best_p = _unit(best_p + res.x[0] * e1 + res.x[1] * e2)

    if best_f <= 0.0:
        raise EmptyInteriorError("cap intersection has empty interior")
    return best_p, best_f


def inradius(body: CapBody) -> float:
    """Largest t for which the inner parallel set is nonempty."""
    return incenter_and_inradius(body)[1]


# ---------------------------------------------------------------------------
# hemisphere certification


def _arc_min_dot(structure: BoundaryStructure, arc: BoundaryArc, w) -> float:
    """Exact minimum of <. , w> over one boundary arc."""
    u, v, n = structure.frames[arc.cap]
    rho = float(structure.radii[arc.cap])
    K = math.cos(rho) * float(n @ w)
    a = math.sin(rho) * float(u @ w)
    b = math.sin(rho) * float(v @ w)
    A = math.hypot(a, b)
    t0 = math.atan2(b, a)
    vals = [
        K + A * math.cos(arc.theta_start - t0),
        K + A * math.cos(arc.theta_end - t0),
    ]
    # interior minimum of the cosine at t0 + pi
    tmin = t0 + math.pi
    for shift in (-TWO_PI, 0.0, TWO_PI):
        th = tmin + shift
        if arc.theta_start <= th <= arc.theta_end:
            vals.append(K - A)
            break
    return min(vals)


def hemisphere_witness(body: CapBody, margin_tol: float = 1e-12) -> tuple[np.ndarray, float]:
    """A direction w with <p, w> >= margin > 0 for the whole body.

    The default candidate is the normalized sum of the poles, verified by an
    exact sweep over boundary arcs plus a check that -w is not in the body;
    a grid search over directions runs if the default fails.
    """
    structure = boundary_structure(body)

    def body_margin(w) -> float:
        if contains(body, -w):
            return -1.0
        return min(_arc_min_dot(structure, arc, w) for arc in structure.arcs)

    w = _unit(np.sum(body.poles, axis=0))
    m = body_margin(w)
    if m > margin_tol:
        return w, m

    # Fibonacci sphere fallback
    count = 4000
    golden = math.pi * (3.0 - math.sqrt(5.0))
    best_w, best_m = w, m
    for i in range(count):
        z = 1.0 - 2.0 * (i + 0.5) / count
        r = math.sqrt(max(0.0, 1.0 - z * z))
        th = golden * i
        cand = np.array([r * math.cos(th), r * math.sin(th), z])
        mc = body_margin(cand)
        if mc > best_m:
            best_w, best_m = cand, mc
    if best_m > margin_tol:
        return best_w, best_m
    raise GeometryError(
        "no hemisphere witness found: body is not certifiably strongly convex"
    )


# ---------------------------------------------------------------------------
# sampling utilities


def sample_boundary(
    body: CapBody, count: int, structure: BoundaryStructure | None = None
) -> np.ndarray:
    """Points spread along the boundary, proportionally to arc length."""
    bs = structure if structure is not None else boundary_structure(body)
    total = sum(arc.length for arc in bs.arcs)
    pts = []
    for arc in bs.arcs:
        m = max(2, int(round(count * arc.length / total)))
        for theta in np.linspace(arc.theta_start, arc.theta_end, m):
            pts.append(bs.arc_point(arc, theta))
    return np.array(pts)


def distance_to_body_many(body: CapBody, points: np.ndarray) -> np.ndarray:
    """Geodesic distance from each point to the body (0 inside).

    Outside distances are the minimum over boundary arcs (meridian foot when
    it falls inside the feasible theta-range) and vertices.
    """
    bs = boundary_structure(body)
    pts = np.asarray(points, dtype=float)
    dots = np.clip(pts @ body.poles.T, -1.0, 1.0)
    inside = np.all(np.arccos(dots) <= body.radii[None, :] + 1e-12, axis=1)

    dist = np.full(len(pts), np.inf)
    for arc in bs.arcs:
        u, v, n = bs.frames[arc.cap]
        rho = float(body.radii[arc.cap])
        theta = np.arctan2(pts @ v, pts @ u)
        d_pole = np.arccos(np.clip(pts @ n, -1.0, 1.0))
        circ = np.abs(d_pole - rho)
        lo = arc.theta_start % TWO_PI
        rel = (theta - lo) % TWO_PI
        on_arc = rel <= arc.width
        dist = np.where(on_arc, np.minimum(dist, circ), dist)
    for vtx in bs.vertices:
        dv = np.arccos(np.clip(pts @ vtx.point, -1.0, 1.0))
        dist = np.minimum(dist, dv)
    dist[inside] = 0.0
    return dist


def random_body(seed: int, k: int, spread: float = 0.4, max_attempts: int = 256) -> CapBody:
    """Deterministic random strongly convex body.

    Poles are sampled within angular distance ``spread`` of the north pole,
    radii uniformly in [0.6, pi/2]; draws repeat until the body has nonempty
    interior, a hemisphere witness, clean boundary structure, and perimeter
    strictly below the equator length.
    """
    if not 3 <= k <= 12:
        raise GeometryError(f"k must lie in [3, 12], got {k}")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        poles = []
        for _ in range(k):
            ang = rng.uniform(0.0, spread)
            azi = rng.uniform(0.0, TWO_PI)
            poles.append(
                [
                    math.sin(ang) * math.cos(azi),
                    math.sin(ang) * math.sin(azi),
                    math.cos(ang),
                ]
            )
        radii = rng.uniform(0.6, HALF_PI, size=k)
        try:
            body = make_body(poles, radii)
            bs = boundary_structure(body)
            _, rin = incenter_and_inradius(body)
            if rin < 1e-3:
                continue
            if perimeter(body, bs) > TWO_PI - 1e-3:
                continue
            _, margin = hemisphere_witness(body)
            if margin < 1e-3:
                continue
            return body
        except GeometryError:
            continue
    raise GeometryError(f"random_body(seed={seed}, k={k}) found no valid body")


def corpus_bodies(count: int, spread: float = 0.4) -> list[tuple[str, CapBody]]:
    """The reference corpus: seeds 1..count with cap counts cycling over 3..8."""
    out = []
    for seed in range(1, count + 1):
        k = 3 + (seed - 1) % 6
        out.append((f"random-{seed:03d}-k{k}", random_body(seed, k, spread)))
    return out


# ---------------------------------------------------------------------------
# serialization


def dumps_body(body: CapBody) -> str:
    """One line per cap: pole_x pole_y pole_z rho."""
    lines = [
        f"{c.pole[0]!r} {c.pole[1]!r} {c.pole[2]!r} {c.rho!r}" for c in body.constraints
    ]
    return "\n".join(lines) + "\n"


def loads_body(text: str) -> CapBody:
    poles, radii = [], []
    for line in text.strip().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise GeometryError(f"body record needs 4 fields per line, got: {line!r}")
        poles.append([float(parts[0]), float(parts[1]), float(parts[2])])
        radii.append(float(parts[3]))
    if not poles:
        raise GeometryError("empty body file")
    return make_body(poles, radii)


def save_body(body: CapBody, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_body(body))


def load_body(path) -> CapBody:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_body(fh.read())
