"""The ordering on conditions and its compatibility relation.

``F1`` extends ``F2`` when ``F1`` contains ``F2`` and adds no new
accumulation point inside ``F2``: every isolated point of ``F2`` stays
isolated.  Two conditions are compatible exactly when neither has an
accumulation point that is an isolated member of the other; in that case
their union is a common extension.
"""

from __future__ import annotations

from typing import Optional

from sigmacc.conditions import Condition, d_set, member, subset, union
from sigmacc.errors import Incompatible
from sigmacc.tree import Node, lin_key


def extends(F1: Condition, F2: Condition) -> bool:
    if not subset(F2, F1):
        return False
    kept = {s for s in F1.limits if member(F2, s)}
    return kept == d_set(F2)


def _blocking(F: Condition, G: Condition) -> list:
    """Limits of ``G`` that are isolated members of ``F``."""
    return [s for s in G.limits if s not in F.limit_set and member(F, s)]


def compatible(F: Condition, G: Condition) -> bool:
    return not _blocking(F, G) and not _blocking(G, F)


def blocking_witness(F: Condition, G: Condition) -> Optional[Node]:
    """A node isolated in one condition and accumulating in the other.

    Witnesses isolated in ``F`` are preferred; ties go to the linearly least
    node.  Returns ``None`` for compatible pairs.
    """
    for a, b in ((F, G), (G, F)):
        found = _blocking(a, b)
        if found:
            return min(found, key=lin_key)
    return None


def orthogonal(F: Condition, G: Condition) -> tuple:
    """``(True, witness)`` for orthogonal pairs, ``(False, None)`` otherwise."""
    w = blocking_witness(F, G)
    return (w is not None, w)


def is_blocking(t: Node, F: Condition, G: Condition) -> bool:
    """Re-check a witness using only membership and accumulation sets."""
    return (member(F, t) and t in d_set(G) and t not in d_set(F)) or (
        member(G, t) and t in d_set(F) and t not in d_set(G)
    )


def common_extension(F: Condition, G: Condition) -> Condition:
    w = blocking_witness(F, G)
    if w is not None:
        raise Incompatible(w)
    return union(F, G)
