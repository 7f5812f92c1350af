"""Acceptance criteria, each at its stated scale and zero tolerance.

Every test records one PASS/FAIL line (shown in the pytest summary under
"acceptance criteria") and then asserts.
"""

import functools
import itertools
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from brute import (
    MEDIUM,
    SMALL,
    brute_k,
    brute_r_set,
    by_signature,
    closed_corpus,
    corpus,
    exhaustive_max_clique,
    nested_chain_family,
    orthogonal_partner,
    probe_accumulation,
)
from sigmacc._kernels_py import lin_cmp as py_lin_cmp
from sigmacc.antichains import is_antichain, ladder, max_antichain
from sigmacc.conditions import canonicalize, d_set, member, parse_condition, random_condition, transplant, union
from sigmacc.oracles import ConstantOracle, SignatureOracle, builtin_oracle
from sigmacc.order import blocking_witness, compatible, extends, orthogonal
from sigmacc.partition import color_pair, k_of, max_homogeneous, r_set, signature
from sigmacc.refuter import refute
from sigmacc.tree import interval_contains, interval_contains_by_cmp, lin_cmp, succ

PY = sys.executable
pytestmark = pytest.mark.slow


def random_node(rng, height, width):
    return tuple(rng.randrange(width) for _ in range(rng.randint(0, height)))


def separates(w, A, B):
    """Blocking predicate from ``member`` and ``d_set`` alone."""
    return any(member(X, w) and w not in d_set(X) and w in d_set(Y) for X, Y in ((A, B), (B, A)))


# 1 -------------------------------------------------------------------------


def test_c01_linear_order_laws(verdict):
    rng = random.Random(1)
    failures = 0
    for _ in range(10_000):
        a, b, c = (random_node(rng, 8, 32) for _ in range(3))
        ab, ba = lin_cmp(a, b), lin_cmp(b, a)
        failures += ab != -ba
        failures += (ab == 0) != (a == b)
        failures += ab != py_lin_cmp(a, b)
        bc, ac = lin_cmp(b, c), lin_cmp(a, c)
        if ab < 0 and bc < 0:
            failures += ac >= 0
        if ab > 0 and bc > 0:
            failures += ac <= 0
    for _ in range(1_000):
        s = random_node(rng, 7, 32)
        k = rng.randrange(31)
        failures += not lin_cmp(succ(s, k + 1), succ(s, k)) < 0
    verdict(1, failures == 0, f"10^4 triples + 10^3 sibling pairs, failures={failures}")
    assert failures == 0


# 2 -------------------------------------------------------------------------


def test_c02_interval_forms_exhaustive(verdict):
    nodes = [()]
    for h in range(1, 5):
        nodes += list(itertools.product(range(6), repeat=h))
    # independent rank oracle: every node and every s+(k,) placed on one line
    # by the pure-Python comparison
    universe = set(nodes) | {s + (k,) for s in nodes for k in range(7)}
    ranked = sorted(universe, key=functools.cmp_to_key(py_lin_cmp))
    rank = {u: i for i, u in enumerate(ranked)}
    t_rank = np.array([rank[t] for t in nodes])
    mismatches = triples = 0
    for s in nodes:
        for k in range(7):
            closed = np.fromiter((interval_contains(s, k, t) for t in nodes), bool, len(nodes))
            by_cmp = np.fromiter((interval_contains_by_cmp(s, k, t) for t in nodes), bool, len(nodes))
            direct = (t_rank > rank[s]) & (t_rank < rank[s + (k,)])
            mismatches += int(np.count_nonzero(closed != direct) + np.count_nonzero(by_cmp != direct))
            triples += len(nodes)
    verdict(2, mismatches == 0, f"{len(nodes)} nodes, {triples} (s,k,t) triples, mismatches={mismatches}")
    assert mismatches == 0


# 3 -------------------------------------------------------------------------


def test_c03_topology_probe(verdict):
    mismatches = 0
    for F in corpus(1_000, 3, MEDIUM):
        mismatches += probe_accumulation(F, 20) != set(d_set(F))
    verdict(3, mismatches == 0, f"10^3 conditions, probe bound 20, mismatches={mismatches}")
    assert mismatches == 0


# 4 -------------------------------------------------------------------------


def test_c04_extension_order_laws(verdict):
    rng = random.Random(4)
    chains = closed_corpus(600, 4, length=4)
    pool = [F for chain in chains for F in chain]
    failures = premises = 0
    for _ in range(10_000):
        F = rng.choice(pool)
        failures += not extends(F, F)
        chain = rng.choice(chains)
        # mostly same-chain triples so the premises fire, some mixed
        X, Y, Z = (rng.choice(chain) if rng.random() < 0.8 else rng.choice(pool) for _ in range(3))
        if extends(X, Y) and extends(Y, Z):
            premises += 1
            failures += not extends(X, Z)
        if extends(X, Y) and extends(Y, X):
            failures += X != Y
    ok = failures == 0 and premises > 1_000
    verdict(4, ok, f"10^4 reflexive pairs + triples, transitive premises={premises}, failures={failures}")
    assert ok


# 5 -------------------------------------------------------------------------


def test_c05_compatibility_contract(verdict):
    rng = random.Random(5)
    mismatches = orth = 0
    for i in range(10_000):
        F = random_condition(SMALL, rng)
        G = random_condition(SMALL, rng) if i % 2 else orthogonal_partner(F, rng)
        U = union(F, G)
        c = compatible(F, G)
        orth += not c
        mismatches += c != (extends(U, F) and extends(U, G))
        mismatches += (blocking_witness(F, G) is None) != c
    contract_ok = mismatches == 0 and 2_000 < orth < 8_000

    # extensions: unions with pool conditions whose limits are not already
    # members, some of them transplanted next to the witness
    pool = [random_condition(SMALL, rng) for _ in range(6_000)]
    failures = pairs = 0
    drawn = 0
    while pairs < 1_000:
        F = random_condition(SMALL, rng)
        G = orthogonal_partner(F, rng)
        blocked, w = orthogonal(F, G)
        if not blocked:
            continue
        pairs += 1
        failures += not separates(w, F, G)
        iso, acc = (F, G) if member(F, w) and w not in d_set(F) else (G, F)
        local = [transplant(R, w[:j]) for R in rng.sample(pool, 20) for j in range(1, len(w) + 1)]
        for side, want in ((iso, False), (acc, True)):
            got = 0
            while got < 1_000:
                drawn += 1
                R = rng.choice(local) if local and rng.random() < 0.3 else rng.choice(pool)
                if any(member(side, s) for s in R.limits):
                    continue
                H = union(side, R)
                got += 1
                failures += not extends(H, side)
                failures += (w in d_set(H)) != want
    ok = contract_ok and failures == 0
    verdict(
        5,
        ok,
        f"10^4 pairs ({orth} orthogonal) mismatches={mismatches}; "
        f"10^3 orthogonal pairs x 10^3 extensions per side, failures={failures}",
    )
    assert ok


# 6 -------------------------------------------------------------------------


def test_c06_partition(verdict):
    failures = positive_k = 0
    for F in corpus(1_000, 6, MEDIUM):
        R = r_set(F)
        k = k_of(F)
        failures += not isinstance(R, (set, frozenset)) or R != brute_r_set(F, 20)
        failures += k != brute_k(F)
        failures += any(interval_contains(s, k, t) for s in F.limits for t in F.limits)
        if k > 0:
            positive_k += 1
            failures += not any(interval_contains(s, k - 1, t) for s in F.limits for t in F.limits)
    ok = failures == 0 and positive_k > 0
    verdict(6, ok, f"10^3 conditions ({positive_k} with k>0), failures={failures}")
    assert ok


# 7 -------------------------------------------------------------------------


def test_c07_coloring_coverage(verdict):
    rng = random.Random(7)
    buckets = [b for b in by_signature(corpus(6_000, 7, SMALL), signature).values() if len(b) > 1]
    seen = set()
    uncovered = errors = 0
    while len(seen) < 10_000:
        bucket = rng.choice(buckets)
        i, j = sorted(rng.sample(range(len(bucket)), 2))
        F, G = bucket[i], bucket[j]
        if (id(F), id(G)) in seen or F == G or not orthogonal(F, G)[0]:
            continue
        seen.add((id(F), id(G)))
        try:
            uncovered += not color_pair(F, G)
        except Exception:
            errors += 1
    ok = uncovered == 0 and errors == 0
    verdict(7, ok, f"{len(seen)} same-signature orthogonal pairs, uncolored={uncovered}, exceptions={errors}")
    assert ok


# 8 -------------------------------------------------------------------------


def _color_matrix(family, color):
    n = len(family)
    return [[i != j and color in color_pair(family[min(i, j)], family[max(i, j)]) for j in range(n)] for i in range(n)]


def test_c08_homogeneity(verdict):
    rng = random.Random(8)
    families = [fam[:30] for fam in by_signature(corpus(1_500, 8, SMALL), signature).values()]
    families += [fam[:30] for fam in by_signature(corpus(1_500, 9, MEDIUM), signature).values()]
    families += [ladder((), 6), ladder((2,), 5)]
    families += [
        [F for F in nested_chain_family(h, rng) if signature(F) == (0, 1, 1)] for h in (3, 4, 5) for _ in range(30)
    ]
    bad_triples = triples = 0
    for fam in families:
        n = len(fam)
        col = {(i, j): color_pair(fam[i], fam[j]) for i in range(n) for j in range(n) if i != j}
        for i, j, k in itertools.permutations(range(n), 3):
            triples += 1
            common = col[(i, j)] & col[(i, k)] & col[(j, k)]
            bad_triples += any(c.family in (2, 4) for c in common)

    largest = mismatches = 0
    height4 = [[F for F in nested_chain_family(4, rng) if signature(F) == (0, 1, 1)][:20] for _ in range(300)]
    height4 += [fam[:18] for fam in by_signature(corpus(2_000, 10, MEDIUM), signature).values()]
    for fam in height4:
        colors = {c for i, j in itertools.combinations(range(len(fam)), 2) for c in color_pair(fam[i], fam[j])}
        for c in colors:
            if c.family != 1:
                continue
            res = max_homogeneous(fam, c)
            brute = exhaustive_max_clique(_color_matrix(fam, c))
            mismatches += len(res.indices) != brute
            largest = max(largest, brute)
    ok = bad_triples == 0 and mismatches == 0 and 2 <= largest <= 5
    verdict(
        8,
        ok,
        f"{triples} ordered triples, (2|4)-homogeneous={bad_triples}; "
        f"height-4 largest (1)-homogeneous={largest} (bound 5), solver/brute mismatches={mismatches}",
    )
    assert ok


# 9 -------------------------------------------------------------------------


def test_c09_antichain_search(verdict):
    mismatches = 0
    sizes = []
    for seed in range(50):
        fam = corpus(20, 900 + seed, SMALL)
        n = len(fam)
        matrix = [[i != j and not compatible(fam[i], fam[j]) for j in range(n)] for i in range(n)]
        res = max_antichain(fam)
        best = exhaustive_max_clique(matrix)
        sizes.append(best)
        mismatches += not res.exact or len(res.indices) != best or not is_antichain(res.members).ok
    ladder_fail = 0
    for A in range(2, 13):
        fam = ladder((), A)
        check = is_antichain(fam)
        ladder_fail += not check.ok or len(fam) != A
        ladder_fail += not all(separates(w, fam[i], fam[j]) for (i, j), w in check.witnesses.items())
    ok = mismatches == 0 and ladder_fail == 0
    verdict(
        9,
        ok,
        f"50 x 20-vertex families vs 2^20 oracle (sizes {min(sizes)}..{max(sizes)}), "
        f"mismatches={mismatches}; ladders A=2..12 failures={ladder_fail}",
    )
    assert ok


# 10 ------------------------------------------------------------------------


def reverify_report(text, oracle):
    """Re-check a VIOLATION report from its text: parse the members, check the
    printed witnesses and antichain, and reclassify every member."""
    lines = text.splitlines()
    head = dict(kv.split("=") for kv in lines[0].split()[1:])
    cls, bound, size = int(head["class"]), int(head["bound"]), int(head["size"])
    members = [canonicalize(parse_condition(line.split(" ", 2)[2])) for line in lines if line.startswith("MEMBER ")]
    problems = (len(members) != size) + (size < bound) + (not is_antichain(members).ok)
    pairs = [line.split() for line in lines if line[:1].isdigit()]
    problems += len(pairs) != size * (size - 1) // 2
    for i, j, kind, *rest in pairs:
        w = tuple(int(x) for x in rest[0].removeprefix("witness=").split(".")) if kind == "ORTHO" else None
        problems += w is None or not separates(w, members[int(i)], members[int(j)])
    problems += sum(oracle.classify(F) != cls for F in members)
    return problems


def test_c10_refuter_end_to_end(verdict):
    details = []
    problems = 0

    t0 = time.perf_counter()
    rep_a = refute(ConstantOracle((6,)))
    ta = time.perf_counter() - t0
    a_ok = rep_a.violation and len(rep_a.members) == 6 and ta < 10
    problems += reverify_report(rep_a.to_text(), ConstantOracle((6,))) if rep_a.violation else 1
    details.append(f"(a) {'VIOLATION' if rep_a.violation else 'none'} size={len(rep_a.members)} {ta:.2f}s")

    t0 = time.perf_counter()
    rep_b = refute(builtin_oracle("m-mod", (4, 4)))
    tb = time.perf_counter() - t0
    b_ok = rep_b.violation and tb < 120
    problems += reverify_report(rep_b.to_text(), SignatureOracle("m", (4, 4))) if rep_b.violation else 1
    details.append(f"(b) class={rep_b.cls} {tb:.2f}s")

    argv = [PY, "-m", "sigmacc", "refute", "--bounds", "4,4"]
    local = subprocess.run(argv + ["--oracle", "builtin:m-mod"], capture_output=True)
    served = f"exec:{PY} -m sigmacc oracle-serve builtin:m-mod --bounds 4,4"
    remote = subprocess.run(argv[:-2] + ["--oracle", served], capture_output=True)
    c_ok = local.returncode == remote.returncode == 0 and local.stdout == remote.stdout == rep_b.to_text().encode()
    details.append(f"(c) byte-identical={c_ok}")

    for name, bounds in (("k-mod", (5, 5)), ("n-mod", (5, 5)), ("sig-mod", (4, 4, 4)), ("random", (4, 4))):
        rep = refute(builtin_oracle(name, bounds, 1))
        if rep.violation:
            problems += reverify_report(rep.to_text(), builtin_oracle(name, bounds, 1))
    details.append(f"(d) re-verification problems={problems}")
    ok = a_ok and b_ok and c_ok and problems == 0
    verdict(10, ok, "; ".join(details))
    assert ok


# 11 ------------------------------------------------------------------------


@pytest.fixture
def corpus_files(tmp_path):
    def write(name, lines):
        p = tmp_path / name
        p.write_text("\n".join(lines) + "\n")
        return str(p)

    fams = by_signature(corpus(400, 11, SMALL), signature)
    same_sig = max(fams.values(), key=len)[:12]
    return {
        "mixed": write("mixed.txt", [str(F) for F in corpus(25, 12, SMALL)]),
        "pair": write("pair.txt", [str(F) for F in ladder((3,), 2)]),
        "same": write("same.txt", [str(F) for F in same_sig]),
    }


def test_c11_determinism(verdict, corpus_files):
    f = corpus_files
    commands = [
        ["gen", "--kind", "random", "--count", "50", "--seed", "11"],
        ["gen", "--kind", "ladder", "--size", "7", "--stem", "1.2"],
        ["validate", f["mixed"]],
        ["compat", f["pair"]],
        ["classify", f["mixed"]],
        ["color", f["same"]],
        ["antichain", f["mixed"]],
        ["refute", "--oracle", "builtin:random", "--bounds", "4,4", "--seed", "3"],
        ["refute", "--oracle", "builtin:constant", "--bounds", "12"],
    ]
    served = "HELLO\nCLASSIFY {L:[0];R:[(0;0;-)];X:[4]}\nBYE\n"
    differing = []
    for argv in commands + [["oracle-serve", "builtin:random", "--bounds", "3,3", "--seed", "2"]]:
        stdin = served if argv[0] == "oracle-serve" else None
        runs = [
            subprocess.run([PY, "-m", "sigmacc", *argv], input=stdin, capture_output=True, text=True) for _ in range(2)
        ]
        if (runs[0].returncode, runs[0].stdout) != (runs[1].returncode, runs[1].stdout) or not runs[0].stdout:
            differing.append(argv[0])
    ok = not differing
    verdict(11, ok, f"{len(commands) + 1} command runs repeated, differing={differing or 'none'}")
    assert ok
