"""Countable partition of the ordering into classes without infinite
antichains, and the pair coloring used to analyse antichains in one class.

Every condition ``F`` gets a signature ``(k, n, m)``:

* ``k`` is the least natural such that no interval ``(s, s+(k,))`` with
  ``s`` a limit of ``F`` contains another limit of ``F``;
* ``n`` is the number of limits;
* ``m`` is the size of the finite remainder: members of ``F`` that are
  neither limits nor inside one of those intervals.

Within a class the isolated points of ``F`` split into the interval pieces
``F ∩ (s, s+(k,))`` and the remainder, which is what the four color
families compare.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from sigmacc import kernels
from sigmacc.conditions import Condition, intersect_interval
from sigmacc.errors import NoLimits, SignatureMismatch
from sigmacc.order import orthogonal
from sigmacc.tree import lin_sorted


class Signature(NamedTuple):
    k: int
    n: int
    m: int

    def __str__(self) -> str:
        return f"({self.k},{self.n},{self.m})"


class Color(NamedTuple):
    family: int
    n: int
    second: int

    def __str__(self) -> str:
        return f"{self.family}:{self.n}/{self.second}"


def k_of(F: Condition, strict: bool = False) -> int:
    """Least ``k`` making the intervals above the limits free of limits.

    A condition without limits gets ``k = 0`` unless ``strict`` is set.
    """
    if not F.limits:
        if strict:
            raise NoLimits("condition has no accumulation points")
        return 0
    cached = F._cache.get("k")
    if cached is not None:
        return cached
    k = 0
    for s in F.limits:
        ls = len(s)
        for t in F.limits:
            if len(t) > ls and t[:ls] == s and t[ls] > k:
                k = t[ls]
    F._cache["k"] = k
    return k


def _in_some_interval(t, limits, k) -> bool:
    for s in limits:
        ls = len(s)
        if len(t) > ls and t[:ls] == s and t[ls] > k:
            return True
    return False


def r_set(F: Condition) -> frozenset:
    """Members that are neither limits nor inside an interval above a limit."""
    cached = F._cache.get("r")
    if cached is not None:
        return cached
    k = k_of(F)
    candidates = set(F.explicit)
    for r in F.rays:
        # indices above k sit inside the ray's own interval
        for i in range(r.index_from, k + 1):
            candidates.add(r.point(i))
    out = frozenset(t for t in candidates if t not in F.limit_set and not _in_some_interval(t, F.limits, k))
    F._cache["r"] = out
    return out


def signature(F: Condition) -> Signature:
    return Signature(k_of(F), len(F.limit_set), len(r_set(F)))


def _profile(F: Condition):
    cached = F._cache.get("profile")
    if cached is None:
        k = k_of(F)
        limits = lin_sorted(F.limit_set)
        remainder = lin_sorted(r_set(F))
        pieces = [intersect_interval(F, s, k) for s in limits]
        cached = (limits, {x: i for i, x in enumerate(remainder)}, pieces)
        F._cache["profile"] = cached
    return cached


def color_pair(Fi: Condition, Fj: Condition) -> frozenset:
    """All colors of the ordered pair ``(Fi, Fj)``; both must share a signature."""
    sig = signature(Fi)
    if signature(Fj) != sig:
        raise SignatureMismatch(f"signatures differ: {sig} vs {signature(Fj)}")
    lim_i, rem_i, pieces_i = _profile(Fi)
    lim_j, rem_j, pieces_j = _profile(Fj)
    colors = set()
    for n, s in enumerate(lim_i):
        for n2, piece in enumerate(pieces_j):
            if s in piece:
                colors.add(Color(1, n, n2))
        if s in rem_j:
            colors.add(Color(2, n, rem_j[s]))
    for n, s in enumerate(lim_j):
        for n2, piece in enumerate(pieces_i):
            if s in piece:
                colors.add(Color(3, n, n2))
        if s in rem_i:
            colors.add(Color(4, n, rem_i[s]))
    return frozenset(colors)


def format_colors(colors) -> str:
    return "{" + ",".join(str(c) for c in sorted(colors)) + "}"


def _common_signature(family: Sequence[Condition]):
    sigs = {signature(F) for F in family}
    if len(sigs) > 1:
        raise SignatureMismatch("family mixes signatures: " + " ".join(str(s) for s in sorted(sigs)))
    return next(iter(sigs), None)


@dataclass
class CoverageReport:
    signature: Signature | None
    pairs: int = 0
    orthogonal_pairs: int = 0
    violations: list = field(default_factory=list)
    color_counts: Counter = field(default_factory=Counter)
    pair_colors: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def coverage_check(family: Sequence[Condition]) -> CoverageReport:
    """Check that every orthogonal pair of one class receives a color."""
    report = CoverageReport(_common_signature(family))
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            report.pairs += 1
            colors = color_pair(family[i], family[j])
            report.pair_colors[(i, j)] = colors
            report.color_counts.update(c.family for c in colors)
            if orthogonal(family[i], family[j])[0]:
                report.orthogonal_pairs += 1
                if not colors:
                    report.violations.append((i, j))
    return report


@dataclass
class HomogeneousResult:
    indices: list
    members: list
    exact: bool


def max_homogeneous(
    family: Sequence[Condition], color: Color, exact_limit: int = 20, budget: int = 200_000
) -> HomogeneousResult:
    """Largest sub-family (kept in family order) all of whose pairs carry ``color``.

    Exact up to ``exact_limit`` members; beyond that a node-budgeted search
    seeded greedily, with ``exact`` telling whether it finished.
    """
    _common_signature(family)
    n = len(family)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if color in color_pair(family[i], family[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    mask, exact = kernels.max_clique(adj, 0 if n <= exact_limit else budget)
    idx = [i for i in range(n) if mask >> i & 1]
    return HomogeneousResult(idx, [family[i] for i in idx], exact)
