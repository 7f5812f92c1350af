"""The tree of nonempty finite sequences of naturals and its linear order.

Nodes are plain tuples of non-negative ints.  ``ROOT`` (the empty tuple) is
only a stem seed and never a member of the tree.

The linear order puts ``s`` below ``t`` when ``s`` is a proper prefix of
``t``, or when at the first position where they differ ``s`` carries the
*larger* entry.  So the immediate successors ``s+(0,), s+(1,), ...`` of a
node form a decreasing sequence converging down to ``s``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Tuple

from sigmacc import kernels
from sigmacc.errors import CapExceeded, ParseError

Node = Tuple[int, ...]
ROOT: Node = ()


class Ordering3(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class Caps:
    """Universe caps: node length ``height`` and entry bound ``width``.

    ``None`` disables a cap.  Entries must be ``< width``.
    """

    height: Optional[int] = 8
    width: Optional[int] = None

    def check(self, node: Node, what: str = "node") -> None:
        if self.height is not None and len(node) > self.height:
            raise CapExceeded(f"{what} {format_node(node)} longer than height cap {self.height}")
        if self.width is not None and any(x >= self.width for x in node):
            raise CapExceeded(f"{what} {format_node(node)} has an entry >= width cap {self.width}")

    def allows(self, node: Node) -> bool:
        if self.height is not None and len(node) > self.height:
            return False
        return self.width is None or all(x < self.width for x in node)


DEFAULT_CAPS = Caps()
UNCAPPED = Caps(height=None, width=None)


def tree_leq(s: Node, t: Node) -> bool:
    return len(s) <= len(t) and t[: len(s)] == s


def lin_cmp(s: Node, t: Node) -> Ordering3:
    return Ordering3(kernels.lin_cmp(s, t))


def lin_key(s: Node) -> tuple:
    """Sort key realising the linear order with plain tuple comparison."""
    return tuple(-x for x in s)


def lin_sorted(nodes: Iterable[Node]) -> list:
    return sorted(nodes, key=lin_key)


def succ(s: Node, k: int, caps: Caps = DEFAULT_CAPS) -> Node:
    if k < 0:
        raise ValueError("sibling index must be a natural number")
    t = s + (k,)
    caps.check(t)
    return t


def interval_contains(s: Node, k: int, t: Node) -> bool:
    """Whether ``t`` lies in the open interval ``(s, s+(k,))``.

    Equivalent to: ``t`` strictly extends ``s`` and ``t[len(s)] > k``.
    """
    return kernels.interval_contains(s, k, t)


def interval_contains_by_cmp(s: Node, k: int, t: Node) -> bool:
    """Same predicate as :func:`interval_contains`, by two comparisons."""
    return kernels.lin_cmp(s, t) < 0 and kernels.lin_cmp(t, s + (k,)) < 0


def meet(s: Node, t: Node) -> Node:
    i = 0
    n = min(len(s), len(t))
    while i < n and s[i] == t[i]:
        i += 1
    return s[:i]


def transplant(stem: Node, node: Node) -> Node:
    return stem + node


_NODE_RE = re.compile(r"(0|[1-9][0-9]*)(\.(0|[1-9][0-9]*))*\Z")


def format_node(s: Node) -> str:
    if not s:
        return "^"
    return ".".join(str(x) for x in s)


def parse_node(text: str, allow_root: bool = False) -> Node:
    text = text.strip()
    if text == "^":
        if allow_root:
            return ROOT
        raise ParseError("the root sentinel '^' is not a tree node")
    if not _NODE_RE.match(text):
        raise ParseError(f"malformed node {text!r}")
    return tuple(int(x) for x in text.split("."))
