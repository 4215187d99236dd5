"""Conic reductions of P(W) as weighted projective varieties.

For a transverse ray ``nu`` the coordinates split by the sign of the integer
weight ``n_nu(a, j)`` into a positive side P and a negative side N. The
reduction is the Segre-type quotient P(a, -b) built from the absolute
weights, or a plain weighted projective space when one side is a singleton.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb, gcd
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import (
    CriticalRay,
    EmptySide,
    NotGeneric,
    NotUniform,
    OutOfRange,
    ProbeOutsideWedge,
    TooSmall,
)
from .geometry import RayDir, Wedge, psi_transverse
from .rep import IndexPair, RepDescriptor, index_set, is_generic, is_uniform, validate


def n_weight(rep: RepDescriptor, nu, idx: IndexPair) -> int:
    s = rep.summand(idx[0])
    j = idx[1]
    return -nu[1] * (s.k - j + s.l) + nu[0] * (s.l + j)


def partition(rep: RepDescriptor, nu) -> tuple[tuple[IndexPair, ...], tuple[IndexPair, ...]]:
    """Split the coordinates into (P, N) by the sign of ``n_nu``."""
    nu = RayDir.of(nu)
    verdict = psi_transverse(rep, nu)
    if verdict.kind == "critical":
        raise CriticalRay(verdict.witnesses)
    if verdict.kind == "misses_image":
        raise EmptySide(f"ray {tuple(nu)} lies outside the moment image")
    pos, neg = [], []
    for idx in index_set(rep):
        n = n_weight(rep, nu, idx)
        if n == 0:  # pragma: no cover - excluded by the transversality verdict
            raise CriticalRay([idx])
        (pos if n > 0 else neg).append(idx)
    if not pos or not neg:
        raise EmptySide(f"ray {tuple(nu)} leaves one side of the partition empty")
    return tuple(pos), tuple(neg)


@dataclass(frozen=True)
class WeightVectorPair:
    a: tuple[int, ...]
    b: tuple[int, ...]
    a_index: tuple[IndexPair, ...]
    b_index: tuple[IndexPair, ...]


def weight_vectors(rep: RepDescriptor, nu) -> WeightVectorPair:
    nu = RayDir.of(nu)
    pos, neg = partition(rep, nu)
    return WeightVectorPair(
        a=tuple(abs(n_weight(rep, nu, i)) for i in pos),
        b=tuple(abs(n_weight(rep, nu, i)) for i in neg),
        a_index=pos,
        b_index=neg,
    )


def _gcd_all(xs) -> int:
    return reduce(gcd, xs, 0)


@dataclass(frozen=True)
class PlainWPS:
    raw_weights: tuple[int, ...]

    @property
    def weights(self) -> tuple[int, ...]:
        g = _gcd_all(self.raw_weights)
        return tuple(w // g for w in self.raw_weights)

    @property
    def complex_dim(self) -> int:
        return len(self.raw_weights) - 1

    def to_json(self):
        return {"kind": "wps", "weights": list(self.weights), "raw_weights": list(self.raw_weights)}


@dataclass(frozen=True)
class SegreQuotient:
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        if len(self.a) < 2 or len(self.b) < 2:
            raise TooSmall("Segre quotient needs at least two weights on each side")

    @property
    def c(self) -> np.ndarray:
        return np.add.outer(np.array(self.a, dtype=np.int64), np.array(self.b, dtype=np.int64))

    @property
    def d(self) -> np.ndarray:
        return np.multiply.outer(np.array(self.a, dtype=np.int64), np.array(self.b, dtype=np.int64))

    @property
    def complex_dim(self) -> int:
        return len(self.a) + len(self.b) - 2

    @property
    def generator_count(self) -> int:
        return comb(len(self.a), 2) * comb(len(self.b), 2)

    def to_json(self):
        return {
            "kind": "segre",
            "a": list(self.a),
            "b": list(self.b),
            "c": self.c.tolist(),
            "d": self.d.tolist(),
            "generators": self.generator_count,
            "complex_dim": self.complex_dim,
        }


def classify(rep: RepDescriptor, nu):
    """The nu-th reduction as ``PlainWPS`` or ``SegreQuotient``."""
    if not is_generic(rep):
        raise NotGeneric(f"{rep} is not generic; classification refused")
    wv = weight_vectors(rep, nu)
    a, b = wv.a, wv.b
    if min(len(a), len(b)) == 1:
        short, long_ = (a, b) if len(a) == 1 else (b, a)
        w = short[0]
        return PlainWPS(tuple(x + w for x in long_))
    return SegreQuotient(a, b)


@dataclass(frozen=True)
class SegreGenerator:
    """``T_ij T_ab - T_ib T_aj`` with the degree of each monomial."""

    i: int
    j: int
    a: int
    b: int
    lhs_degree: int
    rhs_degree: int

    @property
    def homogeneous(self) -> bool:
        return self.lhs_degree == self.rhs_degree


def segre_generators(
    p: int, q: int, a: Sequence[int] | None = None, b: Sequence[int] | None = None
) -> list[SegreGenerator]:
    """2x2 minors of a p x q matrix of variables, graded by ``c_ij = a_i + b_j``.

    Without weights the standard grading (all ones) is used.
    """
    if p < 2 or q < 2:
        raise TooSmall("need p, q >= 2")
    a = tuple(a) if a is not None else (1,) * p
    b = tuple(b) if b is not None else (1,) * q
    if len(a) != p or len(b) != q:
        raise ValueError("weight lengths must match p and q")

    def deg(i, j):
        return a[i] + b[j]

    return [
        SegreGenerator(i, j, i2, j2, deg(i, j) + deg(i2, j2), deg(i, j2) + deg(i2, j))
        for i, i2 in combinations(range(p), 2)
        for j, j2 in combinations(range(q), 2)
    ]


def quotient_weights_uniform(rep: RepDescriptor) -> dict[IndexPair, int]:
    """Circle weights ``l_a + j`` of the reduced action (independent of nu)."""
    if not is_uniform(rep):
        raise NotUniform(f"{rep} is not uniform")
    return {idx: rep.summand(idx.a).l + idx.j for idx in index_set(rep)}


def wedge_partition_constant(rep: RepDescriptor, wedge: Wedge, probes) -> bool:
    if not is_uniform(rep):
        raise NotUniform(f"{rep} is not uniform")
    probes = [RayDir.of(p) for p in probes]
    for p in probes:
        if not wedge.contains(p):
            raise ProbeOutsideWedge(f"probe {tuple(p)} is not inside {tuple(wedge.lo)}..{tuple(wedge.hi)}")
    parts = {partition(rep, p) for p in probes}
    return len(parts) <= 1


def mu_k_weights(k: int, nu) -> tuple[int, ...]:
    """``(nu1 j - nu2 (k - j))_{j=1..k}``, positive when ``nu1 > (k-1) nu2 > 0``."""
    nu1, nu2 = int(nu[0]), int(nu[1])
    if k < 2 or not (nu1 > (k - 1) * nu2 > 0):
        raise OutOfRange(f"need k >= 2 and nu1 > (k-1) nu2 > 0, got k={k}, nu={(nu1, nu2)}")
    return tuple(nu1 * j - nu2 * (k - j) for j in range(1, k + 1))


@dataclass(frozen=True)
class IsotopyEndpoints:
    ambient: PlainWPS
    divisor: PlainWPS
    divisor_asymptotic: bool = field(default=True)

    def to_json(self):
        return {
            "ambient": self.ambient.to_json(),
            "divisor": self.divisor.to_json(),
            "divisor_note": "valid for nu1/nu2 sufficiently large" if self.divisor_asymptotic else None,
        }


def isotopy_endpoints(k: int, nu) -> IsotopyEndpoints:
    """Endpoints for ``Sym^k``: the reduction is P(1..k); the group reduction
    is isotopic to the divisor P(2..k) for nu1 >> nu2 (no effective bound)."""
    mu_k_weights(k, nu)
    ambient = classify(validate([(0, k)]), nu)
    assert isinstance(ambient, PlainWPS) and ambient.weights == tuple(range(1, k + 1))
    return IsotopyEndpoints(ambient=ambient, divisor=PlainWPS(tuple(range(2, k + 1))))


def betti_conic_reduction(base: Sequence[int]) -> list[int]:
    """``out_q = base_q + base_{q-2}``."""
    base = list(base)
    if not base:
        return []
    out = base + [0, 0]
    for q, v in enumerate(base):
        out[q + 2] += v
    return out


def betti_product_P1(base: Sequence[int]) -> list[int]:
    """Kunneth with P^1: convolve with ``[1, 0, 1]``."""
    if not len(base):
        return []
    return [int(x) for x in np.convolve(np.asarray(base, dtype=np.int64), [1, 0, 1])]


def betti_wps(complex_dim: int) -> list[int]:
    if complex_dim < 0:
        raise ValueError("dimension must be nonnegative")
    out = [0] * (2 * complex_dim + 1)
    out[::2] = [1] * (complex_dim + 1)
    return out
