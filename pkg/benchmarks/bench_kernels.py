"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels on fixed random inputs and checks that both
backends return identical results before reporting.
"""

import argparse
import random
import timeit

from sigmacc import _kernels_py

try:
    from sigmacc import _ckernels
except ImportError:
    _ckernels = None


def nodes(n, rng):
    return [tuple(rng.randrange(8) for _ in range(rng.randint(0, 8))) for _ in range(n)]


def graph(n, p, rng):
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def workloads(rng):
    pairs = list(zip(nodes(20_000, rng), nodes(20_000, rng)))
    triples = [(s, rng.randrange(8), t) for s, t in pairs]
    graphs = [graph(n, p, rng) for n, p in ((30, 0.5), (40, 0.7), (50, 0.8), (60, 0.9), (64, 0.9))]
    return {
        "lin_cmp x20000": lambda k: [k.lin_cmp(s, t) for s, t in pairs],
        "interval_contains x20000": lambda k: [k.interval_contains(s, j, t) for s, j, t in triples],
        "max_clique n=30..64": lambda k: [k.max_clique(g) for g in graphs],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; install with the extension to compare")
        return
    jobs = workloads(random.Random(args.seed))
    print(f"{'kernel':<28}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, job in jobs.items():
        if job(_kernels_py) != job(_ckernels):
            raise SystemExit(f"backends disagree on {name}")
        py = min(timeit.repeat(lambda: job(_kernels_py), number=1, repeat=args.repeat))
        cy = min(timeit.repeat(lambda: job(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<28}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
