"""Exact moment-polytope and ray combinatorics in Z^2 / Q^2.

Everything here is integer or ``Fraction`` arithmetic; verdicts are discrete
and must not depend on rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from math import gcd
from typing import NamedTuple

from .errors import (
    DiagonalRay,
    InvalidRay,
    MomentHitsZero,
    NotGeneric,
    OnBoundary,
    OutsideImage,
)
from .rep import IndexPair, RepDescriptor, index_set, is_generic, moment_never_zero


class RayDir(NamedTuple):
    x: int
    y: int

    @classmethod
    def of(cls, v) -> "RayDir":
        """Primitive direction of a nonzero integer vector."""
        x, y = int(v[0]), int(v[1])
        if (x, y) == (0, 0):
            raise InvalidRay("the zero vector spans no ray")
        g = gcd(x, y)
        return cls(x // g, y // g)

    def swap(self) -> "RayDir":
        return RayDir(self.y, self.x)


Point = tuple[Fraction, Fraction]


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


@dataclass(frozen=True)
class Polygon2:
    """Convex hull; vertices counterclockwise starting at the lowest (y, x).

    One vertex for a point, two for a segment.
    """

    vertices: tuple[Point, ...]

    def edges(self):
        v = self.vertices
        if len(v) == 1:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, p) -> bool:
        p = (Fraction(p[0]), Fraction(p[1]))
        v = self.vertices
        if len(v) == 1:
            return p == v[0]
        if len(v) == 2:
            return _on_segment(p, v[0], v[1])
        return all(cross(_sub(b, a), _sub(p, a)) >= 0 for a, b in self.edges())

    def to_json(self):
        return {"vertices": [[_frac_json(c) for c in p] for p in self.vertices]}


def _frac_json(q: Fraction) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def _on_segment(p, a, b) -> bool:
    if cross(_sub(b, a), _sub(p, a)) != 0:
        return False
    return dot(_sub(p, a), _sub(p, b)) <= 0


def convex_hull(points) -> Polygon2:
    """Andrew's monotone chain, exact, collinear points dropped."""
    pts = sorted({(Fraction(x), Fraction(y)) for x, y in points})
    if len(pts) <= 2:
        return _canonical(pts)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(_sub(out[-1], out[-2]), _sub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return _canonical(hull)


def _canonical(hull) -> Polygon2:
    if not hull:
        raise ValueError("empty point set")
    start = min(range(len(hull)), key=lambda i: (hull[i][1], hull[i][0]))
    return Polygon2(tuple(hull[start:] + hull[:start]))


def segment_Jkl(k: int, l: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Endpoints of the torus image of one summand."""
    return (k + l, l), (l, k + l)


def critical_vector(k: int, j: int, l: int) -> tuple[int, int]:
    """``(k - j + l, j + l)``, the torus moment value at the j-th basis vector."""
    return (k - j + l, j + l)


def _require_generic(rep):
    if not is_generic(rep):
        raise NotGeneric(f"{rep} has a (l,1) summand of multiplicity one")


def _require_nonzero(rep):
    if not moment_never_zero(rep):
        raise MomentHitsZero(f"{rep}: the values k_a + 2 l_a do not share one strict sign")


@lru_cache(maxsize=1024)
def moment_polytope(rep: RepDescriptor) -> Polygon2:
    _require_generic(rep)
    pts = []
    for s in rep.summands:
        pts.extend(segment_Jkl(s.k, s.l))
    return convex_hull(pts)


def _angle_cmp(u, v):
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


@lru_cache(maxsize=1024)
def _critical_rays(rep: RepDescriptor):
    _require_nonzero(rep)
    groups: dict[RayDir, list[IndexPair]] = {}
    for idx in index_set(rep):
        s = rep.summand(idx.a)
        v = critical_vector(s.k, idx.j, s.l)
        # (0,0) would need k_a + 2 l_a = 0, excluded above
        assert v != (0, 0)
        groups.setdefault(RayDir.of(v), []).append(idx)
    # every ray lies in the open half plane {x + y > 0} or {x + y < 0},
    # where the sign of the cross product is a total angular order
    order = sorted(groups, key=cmp_to_key(_angle_cmp))
    return tuple((ray, tuple(groups[ray])) for ray in order)


def critical_rays(rep: RepDescriptor) -> dict[RayDir, tuple[IndexPair, ...]]:
    """Primitive critical directions in counterclockwise order, with the
    coordinates whose basis vectors map onto each."""
    return dict(_critical_rays(rep))


def _ray_hits_segment(nu, p, q) -> bool:
    d = _sub(q, p)
    den = cross(nu, d)
    if den == 0:
        if cross(nu, p) != 0:
            return False
        return max(dot(p, nu), dot(q, nu)) > 0
    s = Fraction(-cross(nu, p)) / den
    if not 0 <= s <= 1:
        return False
    x = (p[0] + s * d[0], p[1] + s * d[1])
    return dot(x, nu) > 0


def ray_polygon_intersection(poly: Polygon2, nu) -> bool:
    """Does ``{t nu : t > 0}`` meet the polygon?"""
    v = poly.vertices
    if len(v) == 1:
        p = v[0]
        return cross(nu, p) == 0 and dot(nu, p) > 0
    # a compact convex set met by the open ray is also met on its boundary
    return any(_ray_hits_segment(nu, a, b) for a, b in poly.edges())


def ray_meets_image(rep: RepDescriptor, nu) -> bool:
    return ray_polygon_intersection(moment_polytope(rep), RayDir.of(nu))


@dataclass(frozen=True)
class Verdict:
    kind: str  # "transverse" | "critical" | "misses_image"
    witnesses: tuple[IndexPair, ...] = field(default=())

    @property
    def transverse(self) -> bool:
        return self.kind == "transverse"

    def to_json(self):
        out = {"verdict": self.kind}
        if self.kind == "critical":
            out["witnesses"] = [list(w) for w in self.witnesses]
        return out


def psi_transverse(rep: RepDescriptor, nu) -> Verdict:
    """Transversality of the torus moment map to the ray through ``nu``."""
    nu = RayDir.of(nu)
    _require_nonzero(rep)
    _require_generic(rep)
    witnesses = critical_rays(rep).get(nu)
    if witnesses:
        return Verdict("critical", witnesses)
    if not ray_meets_image(rep, nu):
        return Verdict("misses_image")
    return Verdict("transverse")


def phi_transverse(rep: RepDescriptor, nu) -> Verdict:
    """Transversality of the full moment map to the cone over the orbit of
    ``i diag(nu)``; undefined on the diagonal ``nu1 = nu2``."""
    nu = RayDir.of(nu)
    if nu.x == nu.y:
        raise DiagonalRay("nu1 = nu2 lies outside the transversality criterion")
    _require_nonzero(rep)
    _require_generic(rep)
    # the orbit of i diag(nu) meets the torus in diag(nu) and diag(nu swapped)
    poly = moment_polytope(rep)
    if not (ray_polygon_intersection(poly, nu) or ray_polygon_intersection(poly, nu.swap())):
        return Verdict("misses_image")
    # a basis vector is a non-free point of the cone iff its moment value
    # is a positive multiple of nu
    witnesses = []
    for idx in index_set(rep):
        s = rep.summand(idx.a)
        v = critical_vector(s.k, idx.j, s.l)
        if cross(nu, v) == 0 and dot(nu, v) > 0:
            witnesses.append(idx)
    if witnesses:
        return Verdict("critical", tuple(witnesses))
    return Verdict("transverse")


class Wedge(NamedTuple):
    lo: RayDir
    hi: RayDir

    def contains(self, nu) -> bool:
        """Strict interior test."""
        return cross(self.lo, nu) > 0 and cross(nu, self.hi) > 0

    def to_json(self):
        return {"lo": list(self.lo), "hi": list(self.hi)}


@lru_cache(maxsize=1024)
def _wedges(rep: RepDescriptor) -> tuple[Wedge, ...]:
    _require_nonzero(rep)
    poly = moment_polytope(rep)
    rays = [ray for ray, _ in _critical_rays(rep)]
    out = []
    for lo, hi in zip(rays, rays[1:]):
        mid = (lo.x + hi.x, lo.y + hi.y)
        if ray_polygon_intersection(poly, mid):
            out.append(Wedge(lo, hi))
    return tuple(out)


def wedges(rep: RepDescriptor) -> list[Wedge]:
    return list(_wedges(rep))


def wedge_of(rep: RepDescriptor, nu) -> int:
    verdict = psi_transverse(rep, nu)
    if verdict.kind == "critical":
        raise OnBoundary(f"{tuple(RayDir.of(nu))} is a critical ray")
    if verdict.kind == "misses_image":
        raise OutsideImage(f"{tuple(RayDir.of(nu))} misses the moment image")
    nu = RayDir.of(nu)
    for i, w in enumerate(_wedges(rep)):
        if w.contains(nu):
            return i
    raise OutsideImage(f"{tuple(nu)} lies in no wedge")  # unreachable for valid input
