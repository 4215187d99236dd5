"""Representation descriptors for sums of twisted symmetric powers of C^2.

A descriptor is an ordered sequence of summands ``(l, k)``, each standing for
``det^l (x) Sym^k(C^2)``. Summand order is kept exactly as given, and all
index maps downstream (coordinates, weight vectors) follow it.
"""

from __future__ import annotations

import json
import numbers
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import EmptyDescriptor, MalformedInput, NegativeSymmetricDegree, BadLength


class Summand(NamedTuple):
    l: int
    k: int

    @property
    def trace_weight(self) -> int:
        """``k + 2l``, the trace of the block's moment map (constant on the block)."""
        return self.k + 2 * self.l


class IndexPair(NamedTuple):
    """Coordinate label ``(a, j)``; ``a`` is 1-based, ``0 <= j <= k_a``."""

    a: int
    j: int


@dataclass(frozen=True)
class RepDescriptor:
    summands: tuple[Summand, ...]

    @property
    def r(self) -> int:
        return len(self.summands)

    @property
    def dim(self) -> int:
        return sum(s.k + 1 for s in self.summands)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, pos = [], 0
        for s in self.summands:
            out.append(pos)
            pos += s.k + 1
        return tuple(out)

    def summand(self, a: int) -> Summand:
        return self.summands[a - 1]

    def flat_index(self, idx) -> int:
        a, j = idx
        return self.offsets[a - 1] + j

    def split(self, Z) -> list[np.ndarray]:
        """Cut a flat coordinate vector into per-summand blocks."""
        Z = np.asarray(Z, dtype=complex).ravel()
        if Z.shape[0] != self.dim:
            raise BadLength(f"expected {self.dim} coordinates, got {Z.shape[0]}")
        return [Z[o:o + s.k + 1] for o, s in zip(self.offsets, self.summands)]

    def join(self, blocks) -> np.ndarray:
        blocks = [np.asarray(b, dtype=complex).ravel() for b in blocks]
        if len(blocks) != self.r or any(
            b.shape[0] != s.k + 1 for b, s in zip(blocks, self.summands)
        ):
            raise BadLength("block shapes do not match the descriptor")
        return np.concatenate(blocks)

    def basis_vector(self, idx: IndexPair) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[self.flat_index(idx)] = 1.0
        return e

    def to_json(self) -> dict:
        return {"summands": [{"l": s.l, "k": s.k} for s in self.summands]}

    def __str__(self) -> str:
        return "[" + ", ".join(f"({s.l},{s.k})" for s in self.summands) + "]"


def validate(raw: Iterable) -> RepDescriptor:
    """Build a descriptor from ``(l, k)`` pairs."""
    pairs = []
    for a, item in enumerate(raw, start=1):
        try:
            l, k = item
        except (TypeError, ValueError):
            raise MalformedInput(f"summand {a} is not an (l, k) pair") from None
        if not all(isinstance(x, numbers.Integral) and not isinstance(x, bool) for x in (l, k)):
            raise MalformedInput(f"summand {a} has non-integer entries")
        if k < 0:
            raise NegativeSymmetricDegree(a)
        pairs.append(Summand(int(l), int(k)))
    if not pairs:
        raise EmptyDescriptor("descriptor has no summands")
    return RepDescriptor(tuple(pairs))


def from_json(obj) -> RepDescriptor:
    """Parse ``{"summands": [{"l": .., "k": ..}, ...]}`` (dict or JSON text)."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("summands"), list):
        raise MalformedInput('descriptor must be an object with a "summands" list')
    raw = []
    for a, s in enumerate(obj["summands"], start=1):
        if not isinstance(s, dict) or "l" not in s or "k" not in s:
            raise MalformedInput(f'summand {a} must have integer "l" and "k"')
        if not all(isinstance(s[key], int) and not isinstance(s[key], bool) for key in "lk"):
            raise MalformedInput(f'summand {a} must have integer "l" and "k"')
        raw.append((s["l"], s["k"]))
    return validate(raw)


def is_generic(rep: RepDescriptor) -> bool:
    """Every ``(l, 1)`` summand must occur with multiplicity at least two."""
    counts = Counter(s for s in rep.summands if s.k == 1)
    return all(c >= 2 for c in counts.values())


def is_uniform(rep: RepDescriptor) -> bool:
    return is_generic(rep) and len({s.trace_weight for s in rep.summands}) == 1


def moment_never_zero(rep: RepDescriptor) -> bool:
    """True iff all ``k_a + 2 l_a`` share one strict sign."""
    w = [s.trace_weight for s in rep.summands]
    return all(x > 0 for x in w) or all(x < 0 for x in w)


def index_set(rep: RepDescriptor) -> list[IndexPair]:
    return [
        IndexPair(a, j)
        for a, s in enumerate(rep.summands, start=1)
        for j in range(s.k + 1)
    ]
