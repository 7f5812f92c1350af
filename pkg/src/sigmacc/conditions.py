"""Finitely represented conditions: finite unions of convergent sequences.

A condition is given by its limit nodes, a list of rays and finitely many
explicit points.  A ray ``(limit, K, c)`` stands for the infinite sequence
``limit + (k,) + c`` for ``k >= K``, which converges down to ``limit`` in the
interval topology.  The represented set is

    limits  U  (points of all rays)  U  explicit points

and its accumulation set is exactly ``limits``.

Canonical form is the equality notion: limits, rays and explicit points are
sorted by the linear order, rays sharing ``(limit, suffix)`` are merged,
each ray's start index is lowered as far as the represented set allows, and
explicit points that are limits or ray points are dropped.  Two valid
conditions represent the same set iff their canonical forms are equal.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional

from sigmacc.errors import CapExceeded, InvalidCondition, InvalidParams, ParseError
from sigmacc.tree import DEFAULT_CAPS, Caps, Node, format_node, lin_key, parse_node


class Ray(NamedTuple):
    limit: Node
    index_from: int
    suffix: Node = ()

    def point(self, k: int) -> Node:
        return self.limit + (k,) + self.suffix

    def index_of(self, t: Node) -> Optional[int]:
        """Index ``k`` with ``point(k) == t`` (ignoring ``index_from``), if any."""
        ll = len(self.limit)
        if len(t) != ll + 1 + len(self.suffix):
            return None
        if t[:ll] != self.limit or t[ll + 1 :] != self.suffix:
            return None
        return t[ll]

    def generates(self, t: Node) -> bool:
        k = self.index_of(t)
        return k is not None and k >= self.index_from

    @property
    def depth(self) -> int:
        return len(self.limit) + 1 + len(self.suffix)


def _ray_key(r: Ray):
    return (lin_key(r.limit), lin_key(r.suffix), r.index_from)


@dataclass(frozen=True)
class Condition:
    limits: tuple = ()
    rays: tuple = ()
    explicit: tuple = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def make(cls, limits: Iterable[Node] = (), rays: Iterable = (), explicit: Iterable[Node] = ()) -> "Condition":
        """Build a condition in canonical form."""
        raw = cls(tuple(limits), tuple(Ray(*r) for r in rays), tuple(explicit))
        return canonicalize(raw)

    @cached_property
    def limit_set(self) -> frozenset:
        return frozenset(self.limits)

    @cached_property
    def explicit_set(self) -> frozenset:
        return frozenset(self.explicit)

    @cached_property
    def ray_index(self) -> dict:
        out: dict = {}
        for r in self.rays:
            key = (r.limit, r.suffix)
            if key not in out or r.index_from < out[key]:
                out[key] = r.index_from
        return out

    @property
    def depth(self) -> int:
        """Length of the longest node the condition mentions or generates."""
        lengths = [len(x) for x in self.limits] + [len(x) for x in self.explicit]
        lengths += [r.depth for r in self.rays]
        return max(lengths, default=0)

    def __contains__(self, t: Node) -> bool:
        return member(self, t)

    def __str__(self) -> str:
        return format_condition(self)


# -- membership and structure ------------------------------------------------


def _ray_start(index: dict, t: Node, skip=None) -> bool:
    """Whether a ray in ``index`` ((limit, suffix) -> start) generates ``t``."""
    for j in range(len(t)):
        key = (t[:j], t[j + 1 :])
        start = index.get(key)
        if start is not None and t[j] >= start and key != skip:
            return True
    return False


def member(F: Condition, t: Node) -> bool:
    if t in F.limit_set or t in F.explicit_set:
        return True
    return _ray_start(F.ray_index, t)


def d_set(F: Condition) -> frozenset:
    return F.limit_set


def members_upto(F: Condition, max_index: int) -> set:
    """All members, with every ray enumerated up to index ``max_index``."""
    out = set(F.limits) | set(F.explicit)
    for r in F.rays:
        for k in range(r.index_from, max_index + 1):
            out.add(r.point(k))
    return out


def validate(F: Condition, caps: Caps = DEFAULT_CAPS) -> None:
    """Raise :class:`InvalidCondition` naming the first violated invariant."""
    for r in F.rays:
        if r.limit not in F.limit_set:
            raise InvalidCondition("RayLimitNotDeclared", format_node(r.limit))
        if r.index_from < 0 or any(x < 0 for x in r.suffix):
            raise InvalidCondition("RayLimitNotDeclared", "negative ray entry")
    with_ray = {r.limit for r in F.rays}
    for s in F.limits:
        if s not in with_ray:
            raise InvalidCondition("LimitWithoutRay", format_node(s))
    for x in F.explicit:
        if x in F.limit_set:
            raise InvalidCondition("ExplicitEqualsLimit", format_node(x))
    if not F.limits and not F.explicit:
        raise InvalidCondition("Empty", "a condition must have a limit or an explicit point")
    try:
        for x in F.limits + F.explicit:
            if not x:
                raise CapExceeded("the root sentinel is not a tree node")
            caps.check(x)
        for r in F.rays:
            if caps.height is not None and r.depth > caps.height:
                raise CapExceeded(f"ray at {format_node(r.limit)} exceeds height cap {caps.height}")
            if caps.width is not None and any(x >= caps.width for x in r.suffix):
                raise CapExceeded(f"ray suffix at {format_node(r.limit)} exceeds width cap {caps.width}")
    except CapExceeded as exc:
        raise InvalidCondition("CapExceeded", str(exc)) from None


def is_valid(F: Condition, caps: Caps = DEFAULT_CAPS) -> bool:
    try:
        validate(F, caps)
    except InvalidCondition:
        return False
    return True


# -- canonical form ----------------------------------------------------------


def canonicalize(F: Condition) -> Condition:
    if F._cache.get("canonical"):
        return F
    limit_set = set(F.limits)
    explicit = set(F.explicit)
    index = dict(F.ray_index)
    for key, k in index.items():
        lim, suf = key
        while k > 0:
            p = lim + (k - 1,) + suf
            if p in limit_set or p in explicit or _ray_start(index, p, skip=key):
                k -= 1
            else:
                break
        index[key] = k
    explicit = [x for x in explicit if x not in limit_set and not _ray_start(index, x)]
    rays = sorted((Ray(lim, k, suf) for (lim, suf), k in index.items()), key=_ray_key)
    out = Condition(tuple(sorted(limit_set, key=lin_key)), tuple(rays), tuple(sorted(explicit, key=lin_key)))
    out._cache["canonical"] = True
    return out


def union(F: Condition, G: Condition) -> Condition:
    return canonicalize(Condition(F.limits + G.limits, F.rays + G.rays, F.explicit + G.explicit))


def subset(F: Condition, G: Condition) -> bool:
    """Whether the set represented by ``F`` is contained in that of ``G``."""
    for x in F.limits:
        if not member(G, x):
            return False
    for x in F.explicit:
        if not member(G, x):
            return False
    for r in F.rays:
        best = G.ray_index.get((r.limit, r.suffix))
        if best is None:
            # no ray of G shares (limit, suffix); other parts of G are finite
            # on this sequence, so an infinite tail cannot be covered
            return False
        for k in range(r.index_from, best):
            if not member(G, r.point(k)):
                return False
    return True


def transplant(F: Condition, stem: Node) -> Condition:
    """Prepend ``stem`` to every node of ``F``."""
    out = Condition(
        tuple(stem + x for x in F.limits),
        tuple(Ray(stem + r.limit, r.index_from, r.suffix) for r in F.rays),
        tuple(stem + x for x in F.explicit),
    )
    if F._cache.get("canonical"):
        out._cache["canonical"] = True
    return out


def relocate(F: Condition, old: Node, new: Node) -> Condition:
    """Replace the prefix ``old`` (shared by every node of ``F``) by ``new``."""
    n = len(old)

    def move(x):
        if x[:n] != old:
            raise ValueError(f"{format_node(x)} does not extend {format_node(old)}")
        return new + x[n:]

    out = Condition(
        tuple(move(x) for x in F.limits),
        tuple(Ray(move(r.limit), r.index_from, r.suffix) for r in F.rays),
        tuple(move(x) for x in F.explicit),
    )
    return canonicalize(out)


# -- interval intersection ---------------------------------------------------


@dataclass(frozen=True)
class Fragment:
    """``F`` intersected with an open interval: finitely many points plus
    truncated rays."""

    points: frozenset = frozenset()
    rays: tuple = ()

    def __bool__(self) -> bool:
        return bool(self.points) or bool(self.rays)

    def __contains__(self, t: Node) -> bool:
        return t in self.points or any(r.generates(t) for r in self.rays)


def intersect_interval(F: Condition, s: Node, k: int) -> Fragment:
    """Exact description of ``F`` intersected with ``(s, s+(k,))``."""
    ls = len(s)

    def inside(t):
        return len(t) > ls and t[:ls] == s and t[ls] > k

    points = {x for x in F.limits if inside(x)} | {x for x in F.explicit if inside(x)}
    rays = []
    for r in F.rays:
        ll = len(r.limit)
        if r.limit == s:
            rays.append(Ray(r.limit, max(r.index_from, k + 1), r.suffix))
        elif ll > ls:
            if r.limit[:ls] == s and r.limit[ls] > k:
                rays.append(r)
        elif r.limit == s[:ll]:
            # ray points limit+(m,)+suffix extend s only for m = s[ll]
            m = s[ll]
            if m >= r.index_from:
                t = r.point(m)
                if inside(t):
                    points.add(t)
    return Fragment(frozenset(points), tuple(rays))


# -- text format -------------------------------------------------------------


def format_condition(F: Condition) -> str:
    F = canonicalize(F)
    limits = ",".join(format_node(x) for x in F.limits)
    rays = ",".join(
        f"({format_node(r.limit)};{r.index_from};{format_node(r.suffix) if r.suffix else '-'})" for r in F.rays
    )
    explicit = ",".join(format_node(x) for x in F.explicit)
    return f"{{L:[{limits}];R:[{rays}];X:[{explicit}]}}"


_COND_RE = re.compile(r"\{L:\[(?P<L>[^\]]*)\];R:\[(?P<R>[^\]]*)\];X:\[(?P<X>[^\]]*)\]\}\Z")
_RAY_RE = re.compile(r"\(([^;()]+);([^;()]+);([^;()]+)\)")


def _nodelist(text: str) -> list:
    return [parse_node(x) for x in text.split(",")] if text else []


def parse_condition(text: str) -> Condition:
    """Parse the text form.  The result is *not* canonicalized or validated."""
    compact = re.sub(r"\s+", "", text)
    m = _COND_RE.match(compact)
    if not m:
        raise ParseError(f"malformed condition {text.strip()!r}")
    rays = []
    body = m.group("R")
    pos = 0
    while pos < len(body):
        rm = _RAY_RE.match(body, pos)
        if not rm:
            raise ParseError(f"malformed ray list {body!r}")
        limit = parse_node(rm.group(1))
        if not re.fullmatch(r"0|[1-9][0-9]*", rm.group(2)):
            raise ParseError(f"malformed ray index {rm.group(2)!r}")
        suffix = () if rm.group(3) == "-" else parse_node(rm.group(3))
        rays.append(Ray(limit, int(rm.group(2)), suffix))
        pos = rm.end()
        if pos < len(body):
            if body[pos] != ",":
                raise ParseError(f"malformed ray list {body!r}")
            pos += 1
            if pos == len(body):
                raise ParseError(f"trailing comma in ray list {body!r}")
    return Condition(tuple(_nodelist(m.group("L"))), tuple(rays), tuple(_nodelist(m.group("X"))))


def iter_condition_lines(lines: Iterable[str]) -> Iterator[tuple]:
    """Yield ``(line_number, condition)`` for a file of one condition per line."""
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if text:
            yield lineno, parse_condition(text)


# -- random generation -------------------------------------------------------


@dataclass(frozen=True)
class RandomParams:
    min_limits: int = 1
    max_limits: int = 3
    max_rays: int = 2
    max_explicit: int = 3
    height: int = 4
    width: int = 6
    max_index_from: int = 3
    suffix_prob: float = 0.3


def _random_node(rng: random.Random, max_len: int, width: int) -> Node:
    n = rng.randint(1, max_len)
    return tuple(rng.randrange(width) for _ in range(n))


def random_condition(params: RandomParams = RandomParams(), rng: random.Random | int = 0) -> Condition:
    """A random valid canonical condition; deterministic in ``rng``."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    p = params
    if p.max_limits < 1 or p.min_limits < 1 or p.min_limits > p.max_limits:
        raise InvalidParams("a generated condition needs at least one limit")
    if p.height < 2 or p.width < 1 or p.max_rays < 1 or p.max_explicit < 0 or p.max_index_from < 0:
        raise InvalidParams("height >= 2, width >= 1 and max_rays >= 1 are required")
    n_limits = rng.randint(p.min_limits, p.max_limits)
    limits: list = []
    attempts = 0
    while len(limits) < n_limits and attempts < 100:
        attempts += 1
        s = _random_node(rng, p.height - 1, p.width)
        if s not in limits:
            limits.append(s)
    rays = []
    for s in limits:
        for _ in range(rng.randint(1, p.max_rays)):
            room = p.height - 1 - len(s)
            suffix: Node = ()
            if room > 0 and rng.random() < p.suffix_prob:
                suffix = _random_node(rng, room, p.width)
            rays.append(Ray(s, rng.randint(0, p.max_index_from), suffix))
    explicit = []
    for _ in range(rng.randint(0, p.max_explicit)):
        x = _random_node(rng, p.height, p.width)
        if x not in limits:
            explicit.append(x)
    return canonicalize(Condition(tuple(limits), tuple(rays), tuple(explicit)))
