"""Seeded Monte-Carlo checks of the closed-form moment-map identities.

Randomness: property number ``p`` (1-based, fixed order below) draws from
``np.random.default_rng(SeedSequence(seed, spawn_key=(p,)))``. Streams are
independent of each other and of execution order, so properties can be run
in any order or in parallel and still reproduce bit for bit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

from . import reduction as dh
from . import geometry as geo
from . import moment as mm
from .errors import CriticalRay, MaxResamplesExceeded, U2Error
from .rep import RepDescriptor, index_set, moment_never_zero

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampleConfig:
    samples: int = 1000
    seed: int = 0
    tol_alg: float = 1e-12
    tol_eig: float = 1e-9
    fd_step: float = 1e-4
    rank_rel_tol: float = 1e-8
    fd_tol: float = 1e-6

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be positive")
        for name in ("tol_alg", "tol_eig", "fd_step", "rank_rel_tol", "fd_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class PropertyReport:
    name: str
    passed: bool
    samples: int
    max_residual: float
    witness: Optional[object] = None
    status: str = "pass"  # pass | fail | error | skipped
    detail: Optional[str] = None

    def to_json(self):
        return {
            "property": self.name,
            "pass": self.passed,
            "status": self.status,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "witness": self.witness,
            "detail": self.detail,
        }


def property_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_unit(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the unit sphere of C^dim."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    while True:
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        n = np.linalg.norm(z)
        if n > 0:
            return z / n


def sample_mtnu(
    rep: RepDescriptor,
    nu,
    rng: np.random.Generator,
    max_resamples: int = 100,
    draw: Callable[[int, np.random.Generator], np.ndarray] = sample_unit,
) -> np.ndarray:
    """Unit vector on the zero set of ``sum n_nu(a,j) |z_aj|^2``."""
    nu = geo.RayDir.of(nu)
    pos, neg = dh.partition(rep, nu)
    n = np.array([dh.n_weight(rep, nu, idx) for idx in index_set(rep)], dtype=float)
    is_pos = n > 0
    for _ in range(max_resamples):
        z = np.asarray(draw(rep.dim, rng), dtype=complex)
        m = np.abs(z) ** 2
        mass_p = float(np.sum(n[is_pos] * m[is_pos]))
        mass_n = float(-np.sum(n[~is_pos] * m[~is_pos]))
        if mass_p < 1e-8 or mass_n < 1e-8:
            continue
        z = z.copy()
        z[is_pos] *= np.sqrt(mass_n / mass_p)
        return z / np.linalg.norm(z)
    raise MaxResamplesExceeded(f"no admissible draw in {max_resamples} attempts")


def mtnu_residual(rep: RepDescriptor, nu, Z) -> float:
    n = np.array([dh.n_weight(rep, nu, idx) for idx in index_set(rep)], dtype=float)
    return abs(float(np.sum(n * np.abs(np.asarray(Z)) ** 2)))


def sample_weighted_sphere(weights, rng: np.random.Generator) -> np.ndarray:
    """Point with ``sum w_j |v_j|^2 = 1``."""
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    v = rng.standard_normal(w.shape[0]) + 1j * rng.standard_normal(w.shape[0])
    return v / np.sqrt(np.sum(w * np.abs(v) ** 2))


def realify(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag], axis=-1)


def fundamental_fields(rep: RepDescriptor, Z) -> np.ndarray:
    """Rows: realified infinitesimal action of eta, xi, rho, gamma at ``Z``."""
    Z = np.asarray(Z, dtype=complex)
    return np.array([realify(mm.lie_action_matrix(rep, b) @ Z) for b in (mm.ETA, mm.XI, mm.RHO, mm.GAMMA)])


def numeric_rank(vectors, rank_rel_tol: float = 1e-8) -> int:
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    s = np.linalg.svd(V, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_rel_tol * s[0]))


def random_lie_element(rng: np.random.Generator) -> np.ndarray:
    """Uniform direction in u(2), unit Frobenius norm.

    The difference-quotient error grows like ``|alpha|^3 h^2``, so fixing the
    scale keeps the step size meaningful.
    """
    X = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    A = (X - X.conj().T) / 2
    return A / np.linalg.norm(A)


def polygon_distance(poly: geo.Polygon2, p) -> float:
    """Euclidean distance from a float point to an exact polygon (0 inside)."""
    verts = [(float(x), float(y)) for x, y in poly.vertices]
    p = np.asarray(p, dtype=float)
    if len(verts) == 1:
        return float(np.linalg.norm(p - verts[0]))
    if len(verts) > 2:
        inside = all(
            geo.cross(np.subtract(b, a), p - np.asarray(a)) >= 0
            for a, b in zip(verts, verts[1:] + verts[:1])
        )
        if inside:
            return 0.0
        pairs = zip(verts, verts[1:] + verts[:1])
    else:
        pairs = [(verts[0], verts[1])]
    best = np.inf
    for a, b in pairs:
        a, b = np.asarray(a), np.asarray(b)
        d = b - a
        t = np.clip(np.dot(p - a, d) / np.dot(d, d), 0.0, 1.0)
        best = min(best, float(np.linalg.norm(p - (a + t * d))))
    return best


def norm_bound_residuals(k: int, nu, samples: int, rng) -> np.ndarray:
    """``|V|^2 - 2/nu1`` over weighted-sphere samples for the mu_k weights."""
    if not nu[0] >= 2 * (k - 1) * nu[1]:
        raise ValueError("norm bound needs nu1 >= 2 (k-1) nu2")
    w = dh.mu_k_weights(k, nu)
    out = np.empty(samples)
    for i in range(samples):
        V = sample_weighted_sphere(w, rng)
        out[i] = float(np.vdot(V, V).real) - 2.0 / nu[0]
    return out


def mg_point(k: int, l: int, nu) -> np.ndarray | None:
    """A point of one block whose moment value is diagonal and proportional to nu.

    Returns None when nu is outside that block's cone.
    """
    nu1, nu2 = nu
    if nu1 + nu2 == 0:
        return None
    t = (k + 2 * l) / (nu1 + nu2)
    lam = t * nu1 - l
    if t <= 0 or not (0 <= lam <= k):
        return None
    Z = np.zeros(k + 1, dtype=complex)
    Z[0] = np.sqrt(lam / k)
    Z[k] = np.sqrt((k - lam) / k)
    return Z


# Each property returns (samples, state, ok, detail); state holds the max
# residual and the input attaining it. Rank checks count violations instead.


def _track(state, residual, witness):
    if state["witness"] is None or residual > state["max"]:
        state["max"] = max(state["max"], float(residual))
        state["witness"] = witness


def _psd_trace(rep, nu, cfg, rng):
    blocks = [(a, s) for a, s in enumerate(rep.summands, 1) if s.k >= 2]
    if not blocks:
        return _skip("no summand with k >= 2")
    st = {"max": 0.0, "witness": None}
    ok = True
    for i in range(cfg.samples):
        a, s = blocks[i % len(blocks)]
        Zb = sample_unit(s.k + 1, rng)
        H = mm.phi_block(s.k, s.l, Zb)
        shifted = H.matrix() - s.l * np.eye(2)
        lo = float(np.linalg.eigvalsh(shifted)[0])
        tr_err = abs(H.trace - 2 * s.l - s.k)
        ok &= lo >= -cfg.tol_eig and tr_err <= cfg.tol_alg
        _track(st, max(tr_err, -lo), {"summand": a, "Z": _cjson(Zb)})
    return cfg.samples, st, ok, None


def _hull_containment(rep, nu, cfg, rng):
    poly = geo.moment_polytope(rep)
    st = {"max": 0.0, "witness": None}
    for _ in range(cfg.samples):
        Z = sample_unit(rep.dim, rng)
        H = mm.phi_rep(rep, Z)
        r = max(polygon_distance(poly, H.diag()), polygon_distance(poly, H.eigvals()))
        _track(st, r, {"Z": _cjson(Z)})
    return cfg.samples, st, st["max"] <= cfg.tol_eig, None


def _trace_formula(rep, nu, cfg, rng):
    weights = np.array([s.trace_weight for s in rep.summands], dtype=float)
    bound = float(np.min(np.abs(weights))) if moment_never_zero(rep) else None
    st = {"max": 0.0, "witness": None}
    for _ in range(cfg.samples):
        Z = sample_unit(rep.dim, rng)
        masses = np.array([np.vdot(b, b).real for b in rep.split(Z)])
        expected = float(np.dot(weights, masses) / masses.sum())
        tr = mm.phi_rep(rep, Z).trace
        r = abs(tr - expected)
        if bound is not None:
            r = max(r, bound - abs(tr))
        _track(st, r, {"Z": _cjson(Z)})
    detail = None if bound is not None else "moment may vanish; only the trace identity checked"
    return cfg.samples, st, st["max"] <= cfg.tol_alg, detail


def _equivariance(rep, nu, cfg, rng):
    st = {"max": 0.0, "witness": None}
    ok = True
    h = cfg.fd_step
    for _ in range(cfg.samples):
        Z = sample_unit(rep.dim, rng)
        alpha = random_lie_element(rng)
        r1 = mm.equivariance_residual(rep, Z, alpha, h)
        r2 = mm.equivariance_residual(rep, Z, alpha, 2 * h)
        bad = r1 > cfg.fd_tol
        if r1 > 1e-10:
            ratio = r2 / r1
            bad |= not (3.5 <= ratio <= 4.5)
        ok &= not bad
        _track(st, r1, {"Z": _cjson(Z), "alpha": _cjson(alpha)})
    return cfg.samples, st, ok, None


def _exp_oracle(rep, nu, cfg, rng):
    st = {"max": 0.0, "witness": None}
    for _ in range(cfg.samples):
        z = complex(rng.uniform(0, np.pi) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        E = mm.exp_antidiag(z)
        err = float(np.max(np.abs(E - mm.exp_antidiag_series(z, 40))))
        unit = float(np.max(np.abs(E @ E.conj().T - np.eye(2))))
        det = abs(np.linalg.det(E) - 1)
        _track(st, max(err, unit, det), {"z": [z.real, z.imag]})
    return cfg.samples, st, st["max"] <= cfg.tol_alg, None


def _conjugation(rep, nu, cfg, rng):
    st = {"max": 0.0, "witness": None}
    for _ in range(cfg.samples):
        z = complex(rng.uniform(0, np.pi) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
        v = rng.integers(-5, 6, size=2).astype(float)
        H = mm.conjugate_diag(z, v)
        r, c, s = abs(z), np.cos(abs(z)), np.sin(abs(z))
        direct = expm(mm.b_matrix(z)) @ np.diag(v) @ expm(-mm.b_matrix(z))
        res = max(
            float(np.max(np.abs(H.matrix() - direct))),
            abs(H.trace - v.sum()),
            abs(H.det - v[0] * v[1]),
            abs(abs(H.h12) - abs(v[0] - v[1]) * abs(c * s)),
            abs(mm.nu_perp_pairing(H, v) - (v[0] ** 2 - v[1] ** 2) * s * s),
        )
        _track(st, res, {"z": [z.real, z.imag], "nu": v.tolist(), "abs_z": r})
    return cfg.samples, st, st["max"] <= cfg.tol_alg, None


def _mtnu_membership(rep, nu, cfg, rng):
    nu = _need_nu(nu)
    nrm = np.hypot(*nu)
    st = {"max": 0.0, "witness": None}
    ok = True
    for _ in range(cfg.samples):
        Z = sample_mtnu(rep, nu, rng)
        h11, h22 = mm.psi_rep(rep, Z)
        # distance of (h11, h22) from the open ray through nu
        off_ray = abs(nu[0] * h22 - nu[1] * h11) / nrm
        along = (nu[0] * h11 + nu[1] * h22) / nrm
        eq = mtnu_residual(rep, nu, Z)
        ok &= off_ray <= cfg.tol_eig and along > 0 and eq <= cfg.tol_alg
        _track(st, max(off_ray, eq, -along), {"Z": _cjson(Z)})
    return cfg.samples, st, ok, None


def _torus_freeness(rep, nu, cfg, rng):
    st = {"max": 0.0, "witness": None}
    violations = 0
    count = 0
    for idx in index_set(rep):
        e = rep.basis_vector(idx)
        F = fundamental_fields(rep, e)
        bad = numeric_rank(F, cfg.rank_rel_tol) > 3 or numeric_rank(F[2:], cfg.rank_rel_tol) > 1
        violations += bad
        count += 1
        if bad:
            st["witness"] = {"basis": list(idx)}
    detail = None
    if nu is None:
        detail = "no nu given; basis-vector check only"
    else:
        for _ in range(cfg.samples):
            Z = sample_mtnu(rep, nu, rng)
            F = fundamental_fields(rep, Z)
            if numeric_rank(F[2:], cfg.rank_rel_tol) != 2:
                violations += 1
                st["witness"] = {"Z": _cjson(Z)}
            count += 1
    st["max"] = float(violations)
    return count, st, violations == 0, detail


def _group_freeness(rep, nu, cfg, rng):
    nu = _need_nu(nu)
    verdict = geo.phi_transverse(rep, nu)
    if verdict.kind == "critical":
        raise CriticalRay(verdict.witnesses)
    if verdict.kind == "misses_image":
        return _skip("ray misses the moment image")
    st = {"max": 0.0, "witness": None}
    violations = count = 0
    for a, s in enumerate(rep.summands, 1):
        if s.k < 2:
            continue
        Zb = mg_point(s.k, s.l, nu)
        if Zb is None:
            continue
        blocks = [np.zeros(t.k + 1, complex) for t in rep.summands]
        blocks[a - 1] = Zb
        Z = rep.join(blocks)
        H = mm.phi_rep(rep, Z)
        off = max(abs(H.h12), abs(nu[0] * H.h22 - nu[1] * H.h11))
        rank = numeric_rank(fundamental_fields(rep, Z), cfg.rank_rel_tol)
        bad = rank != 4 or off > cfg.tol_eig
        violations += bad
        count += 1
        if bad or st["witness"] is None:
            st["witness"] = {"summand": a, "rank": rank, "Z": _cjson(Z)}
    if count == 0:
        return _skip("no summand with k >= 2 whose cone contains nu")
    st["max"] = float(violations)
    return count, st, violations == 0, None


def _norm_bound(rep, nu, cfg, rng):
    nu = _need_nu(nu)
    if rep.r != 1 or rep.summands[0].l != 0 or rep.summands[0].k < 2:
        return _skip("norm bound applies to a single Sym^k summand, k >= 2")
    k = rep.summands[0].k
    if not (nu[1] > 0 and nu[0] >= 2 * (k - 1) * nu[1]):
        return _skip("norm bound needs nu1 >= 2 (k-1) nu2 > 0")
    r = norm_bound_residuals(k, nu, cfg.samples, rng)
    worst = float(max(r.max(), 0.0))
    st = {"max": worst, "witness": {"excess": float(r.max())}}
    return cfg.samples, st, float(r.max()) <= cfg.tol_alg, None


def _upsilon_covariance(rep, nu, cfg, rng):
    st = {"max": 0.0, "witness": None}
    for _ in range(cfg.samples):
        Z = sample_unit(rep.dim, rng)
        t1, t2 = rng.uniform(-np.pi, np.pi, size=2)
        # psi_{D^{-1}}: flow by -(t1 rho + t2 gamma)
        D_inv = mm.group_action(rep, t1 * mm.RHO + t2 * mm.GAMMA, -1.0)
        lhs = mm.upsilon(rep, D_inv @ Z)
        rhs = np.exp(-1j * (t1 - t2)) * mm.upsilon(rep, Z)
        _track(st, abs(lhs - rhs), {"Z": _cjson(Z), "theta": [float(t1), float(t2)]})
    return cfg.samples, st, st["max"] <= cfg.tol_eig, None


def _weighted_homogeneity(rep, nu, cfg, rng):
    st = {"max": 0.0, "witness": None}
    for _ in range(cfg.samples):
        n = int(rng.integers(1, 8))
        a = rng.integers(1, 20, size=n)
        d = rng.integers(1, 20, size=n)
        Z = sample_unit(n, rng)
        base = mm.weighted_moment(a, d, Z)
        r = max(abs(mm.weighted_moment(a, m * d, Z) - base) for m in (2, 3))
        r = max(r, a.min() - base - cfg.tol_alg, base - a.max() - cfg.tol_alg, 0.0)
        _track(st, r, {"a": a.tolist(), "d": d.tolist()})
    return cfg.samples, st, st["max"] <= cfg.tol_alg, None


def _skip(reason):
    raise _Skip(reason)


class _Skip(Exception):
    pass


def _need_nu(nu):
    if nu is None:
        raise _Skip("requires nu")
    return nu


def _cjson(z):
    z = np.asarray(z, dtype=complex)
    return [[float(x.real), float(x.imag)] for x in z.ravel()]


PROPERTIES = [
    ("psd_trace", _psd_trace),
    ("hull_containment", _hull_containment),
    ("trace_formula", _trace_formula),
    ("equivariance", _equivariance),
    ("exp_oracle", _exp_oracle),
    ("conjugation", _conjugation),
    ("mtnu_membership", _mtnu_membership),
    ("torus_local_freeness", _torus_freeness),
    ("group_local_freeness", _group_freeness),
    ("norm_bound", _norm_bound),
    ("upsilon_covariance", _upsilon_covariance),
    ("weighted_moment_homogeneity", _weighted_homogeneity),
]


def run_property(index: int, rep: RepDescriptor, nu, config: SampleConfig) -> PropertyReport:
    name, fn = PROPERTIES[index - 1]
    rng = property_rng(config.seed, index)
    try:
        n, st, ok, detail = fn(rep, nu, config, rng)
    except _Skip as exc:
        return PropertyReport(name, True, 0, 0.0, status="skipped", detail=str(exc))
    except U2Error as exc:
        return PropertyReport(name, False, 0, 0.0, status="error", detail=exc.code)
    status = "pass" if ok else "fail"
    if not ok:
        log.warning("property %s failed, max residual %.3g", name, st["max"])
    return PropertyReport(name, bool(ok), n, float(st["max"]), st["witness"], status, detail)


def run_suite(rep: RepDescriptor, nu=None, config: SampleConfig | None = None) -> list[PropertyReport]:
    config = config or SampleConfig()
    if nu is not None:
        nu = geo.RayDir.of(nu)
    return [run_property(i, rep, nu, config) for i in range(1, len(PROPERTIES) + 1)]
