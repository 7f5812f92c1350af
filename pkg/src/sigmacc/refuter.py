"""Refuting bounded chain-condition decompositions by diagonalisation.

Given an oracle that splits conditions into finitely many classes and claims
class ``i`` has no antichain of size ``b_i``, the engine

1. picks a stem ``s`` where the per-class antichain estimates no longer drop
   along sampled extensions;
2. for every class gathers its best known antichain above a fresh child
   ``s+(n,)``;
3. builds the diagonal condition: the fan at ``s`` plus, as isolated
   points, one limit of every gathered member, which makes it orthogonal to
   all of them;
4. asks the oracle for the diagonal's class ``j``: the gathered class-``j``
   antichain plus the diagonal is a larger class-``j`` antichain;
5. stops once some class reaches its claimed bound, otherwise moves the
   grown antichain under a fresh child and repeats.

Only finitely many classes are handled, so finite tree height suffices.
Estimates are lower bounds from searching a finite universe of gadgets, and
stability is sampled rather than proved.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import count
from typing import Optional, Sequence

from sigmacc.antichains import is_antichain, max_antichain, pair_lines
from sigmacc.conditions import Condition, Ray, canonicalize, format_condition, is_valid, relocate
from sigmacc.errors import BudgetExhausted, NoWitness, OracleViolation
from sigmacc.oracles import Oracle
from sigmacc.order import is_blocking, orthogonal
from sigmacc.tree import ROOT, Caps, Node, format_node, lin_key, tree_leq

GADGET_DEPTH = 2


@dataclass(frozen=True)
class RefuterConfig:
    caps: Caps = Caps(height=8, width=None)
    gadget_width: int = 3
    probe_width: int = 3
    probe_depth: int = 2
    probe_samples: int = 6
    max_rounds: int = 32
    search_budget: int = 200_000
    seed: int = 0
    stem: Node = (0,)

    def __post_init__(self):
        if min(self.gadget_width, self.probe_width, self.probe_samples, self.max_rounds, self.search_budget) < 1:
            raise ValueError("refuter budgets must be positive")
        if self.probe_depth < 1:
            raise ValueError("probe_depth must be positive")


class OracleSession:
    """Serial, logged and memoised access to an oracle, with range checks."""

    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.class_count = int(oracle.class_count)
        self.bounds = tuple(oracle.bounds)
        if self.class_count < 1 or len(self.bounds) != self.class_count or any(b < 2 for b in self.bounds):
            raise OracleViolation("oracle must declare N >= 1 classes with bounds >= 2")
        self.answers: dict = {}
        self.queries = 0

    def _ask(self, F: Condition) -> int:
        self.queries += 1
        i = self.oracle.classify(F)
        if not isinstance(i, int) or not 0 <= i < self.class_count:
            raise OracleViolation(f"class {i!r} out of range for {format_condition(F)}")
        return i

    def classify(self, F: Condition) -> int:
        key = format_condition(F)
        if key not in self.answers:
            self.answers[key] = self._ask(F)
        return self.answers[key]

    def reconfirm(self, F: Condition) -> int:
        """Ask again, bypassing the memo; a different answer is a violation."""
        key = format_condition(F)
        fresh = self._ask(F)
        if key in self.answers and self.answers[key] != fresh:
            raise OracleViolation(f"inconsistent answers for {key}: {self.answers[key]} then {fresh}")
        self.answers[key] = fresh
        return fresh


def _session(oracle) -> OracleSession:
    return oracle if isinstance(oracle, OracleSession) else OracleSession(oracle)


def gadget_universe(stem: Node, width: int) -> list:
    """Fans above the children of ``stem``, decorated with sibling points.

    ``F(x, B)`` has limit ``stem+(x,)`` and isolated points ``stem+(b,)``
    for ``b`` in ``B``; ``x < width`` and ``B`` ranges over subsets of the
    other indices.  Every ladder of size ``<= width`` at ``stem`` occurs.
    """
    out = []
    for x in range(width):
        others = [b for b in range(width) if b != x]
        lim = stem + (x,)
        for mask in range(1 << len(others)):
            chosen = tuple(stem + (others[i],) for i in range(len(others)) if mask >> i & 1)
            out.append(canonicalize(Condition((lim,), (Ray(lim, 0, ()),), chosen)))
    return out


@dataclass
class Estimate:
    value: int
    members: list


def _has_room(s: Node, extra: int, caps: Caps) -> bool:
    if caps.height is not None and len(s) + extra > caps.height:
        return False
    return caps.width is None or all(x < caps.width for x in s)


def estimate_f(
    oracle,
    cls: int,
    stem: Node,
    config: RefuterConfig = RefuterConfig(),
    universe: Optional[Sequence[Condition]] = None,
) -> Estimate:
    """Largest class-``cls`` antichain found among universe members having a
    limit that extends ``stem``.  A lower bound on the true value."""
    session = _session(oracle)
    if not 0 <= cls < session.class_count:
        raise OracleViolation(f"class {cls} out of range")
    if universe is None:
        if not _has_room(stem, GADGET_DEPTH, config.caps):
            return Estimate(0, [])
        universe = gadget_universe(stem, config.gadget_width)
    pool = [
        F
        for F in universe
        if any(tree_leq(stem, t) for t in F.limits) and is_valid(F, config.caps) and session.classify(F) == cls
    ]
    best = max_antichain(pool, config.search_budget)
    return Estimate(len(best.members), best.members)


def _estimates(session, stem, config) -> dict:
    return {
        i: min(estimate_f(session, i, stem, config).value, session.bounds[i]) for i in range(session.class_count)
    }


def _room_for_round(s: Node, config: RefuterConfig) -> bool:
    # a child s+(n,) plus a gadget above it
    return _has_room(s, 1 + GADGET_DEPTH, config.caps)


def _sample_extensions(s: Node, config: RefuterConfig, rng: random.Random) -> list:
    out = [s + (n,) for n in range(config.probe_width)]
    for _ in range(config.probe_samples):
        depth = rng.randint(1, config.probe_depth)
        out.append(s + tuple(rng.randrange(config.probe_width + 2) for _ in range(depth)))
    seen = set()
    return [t for t in out if not (t in seen or seen.add(t)) and _room_for_round(t, config)]


def find_stable_stem(oracle, s0: Node, config: RefuterConfig = RefuterConfig()) -> tuple:
    """Descend from ``s0`` while some class estimate drops on a sampled
    extension.  Returns ``(stem, estimates)``."""
    session = _session(oracle)
    if not s0 or not _room_for_round(s0, config):
        raise BudgetExhausted(f"no room below the height cap at {format_node(s0)}", deepest=s0)
    rng = random.Random(config.seed)
    s = s0
    est = _estimates(session, s, config)
    descents = 0
    limit = sum(session.bounds)
    while True:
        for t in _sample_extensions(s, config, rng):
            et = _estimates(session, t, config)
            if any(et[i] < est[i] for i in est):
                s, est = t, et
                descents += 1
                if descents > limit:
                    raise BudgetExhausted("estimates kept dropping", deepest=s)
                break
        else:
            return s, est


def build_diagonal(s: Node, members: Sequence[tuple]) -> Condition:
    """Fan at ``s`` with one limit above ``s+(n,)`` of each ``(member, n)``
    added as an isolated point."""
    witnesses = []
    for F, n in members:
        above = [t for t in F.limits if tree_leq(s + (n,), t)]
        if not above:
            raise NoWitness(f"member has no limit above {format_node(s + (n,))}: {format_condition(F)}")
        witnesses.append(min(above, key=lin_key))
    D = canonicalize(Condition((s,), (Ray(s, 0, ()),), tuple(witnesses)))
    for F, _ in members:
        if not orthogonal(D, F)[0]:
            raise AssertionError(f"diagonal not orthogonal to {format_condition(F)}")
    return D


@dataclass
class RefutationReport:
    status: str
    class_count: int
    bounds: tuple
    rounds: int
    stem: Node
    caps: Caps
    cls: Optional[int] = None
    members: list = field(default_factory=list)
    best: dict = field(default_factory=dict)
    queries: int = 0

    @property
    def violation(self) -> bool:
        return self.status == "VIOLATION"

    def to_text(self) -> str:
        if self.violation:
            lines = [f"VIOLATION class={self.cls} bound={self.bounds[self.cls]} size={len(self.members)}"]
        else:
            lines = [f"BUDGET_EXHAUSTED rounds={self.rounds}"]
        height = "none" if self.caps.height is None else self.caps.height
        lines.append(
            f"# decomposition into {self.class_count} classes, bounds "
            + ",".join(str(b) for b in self.bounds)
            + f"; finite-class engine, tree height cap {height}"
        )
        lines.append(f"# stem={format_node(self.stem)} rounds={self.rounds} queries={self.queries}")
        lines.append("# best " + " ".join(f"{i}:{self.best.get(i, 0)}" for i in range(self.class_count)))
        if self.violation:
            for i, F in enumerate(self.members):
                lines.append(f"MEMBER {i} {format_condition(F)}")
            lines.append(f"ANTICHAIN size={len(self.members)}")
            lines.extend(pair_lines(list(range(len(self.members))), self.members))
        return "\n".join(lines) + "\n"


def verify_violation(oracle, cls: int, members: Sequence[Condition]) -> None:
    """Re-check a claimed violation from scratch: witnesses and fresh classes."""
    session = _session(oracle)
    if len(members) < session.bounds[cls]:
        raise AssertionError("antichain smaller than the claimed bound")
    check = is_antichain(members)
    if not check.ok:
        raise AssertionError(f"not an antichain: compatible pairs {check.compatible_pairs}")
    for (i, j), w in check.witnesses.items():
        if not is_blocking(w, members[i], members[j]):
            raise AssertionError(f"witness {format_node(w)} does not separate {i} and {j}")
    for F in members:
        if session.reconfirm(F) != cls:
            raise OracleViolation(f"member reclassified out of class {cls}: {format_condition(F)}")


def refute(oracle, config: RefuterConfig = RefuterConfig()) -> RefutationReport:
    session = _session(oracle)
    N, bounds = session.class_count, session.bounds
    caps = config.caps

    def report(status, rounds, stem, cls=None, members=(), best=None):
        return RefutationReport(
            status, N, bounds, rounds, stem, caps, cls, list(members), dict(best or {}), session.queries
        )

    def found(cls, members, rounds, stem, best):
        members = list(members)[: bounds[cls]]
        verify_violation(session, cls, members)
        best = dict(best)
        best[cls] = len(members)
        return report("VIOLATION", rounds, stem, cls, members, best)

    try:
        s, _ = find_stable_stem(session, config.stem, config)
    except BudgetExhausted as exc:
        return report("BUDGET_EXHAUSTED", 0, exc.deepest or config.stem)

    evidence: dict = {i: [] for i in range(N)}
    fresh = count()
    rounds = 0
    while rounds < config.max_rounds:
        gathered = []
        for i in range(N):
            n = next(fresh)
            child = s + (n,)
            if not _has_room(child, GADGET_DEPTH, caps):
                return report("BUDGET_EXHAUSTED", rounds, s, best={c: len(e) for c, e in evidence.items()})
            searched = estimate_f(session, i, child, config).members
            moved = []
            for E in evidence[i]:
                F = relocate(E, s, child)
                if is_valid(F, caps) and session.classify(F) == i:
                    moved.append(F)
            best_i = moved if len(moved) >= len(searched) else searched
            if len(best_i) >= bounds[i]:
                return found(i, best_i, rounds, s, {c: len(e) for c, e in evidence.items()})
            gathered.append((i, n, best_i))
        D = build_diagonal(s, [(F, n) for _, n, fam in gathered for F in fam])
        rounds += 1
        if not is_valid(D, caps):
            return report("BUDGET_EXHAUSTED", rounds, s, best={c: len(e) for c, e in evidence.items()})
        j = session.classify(D)
        grown = [F for i, _, fam in gathered if i == j for F in fam] + [D]
        if len(grown) > len(evidence[j]):
            evidence[j] = grown
        if len(grown) >= bounds[j]:
            return found(j, grown, rounds, s, {c: len(e) for c, e in evidence.items()})
    return report("BUDGET_EXHAUSTED", rounds, s, best={c: len(e) for c, e in evidence.items()})
