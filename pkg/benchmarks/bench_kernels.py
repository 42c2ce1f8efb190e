#!/usr/bin/env python3
"""Compare the pure-Python and compiled kernel backends.

Times the three hot kernels on synthetic inputs, then two full algorithm
runs (ac3 on domains, path on pair relations) on larger random instances
than the test suite uses.  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

import argparse
import itertools
import random
import time

from fixprop import kernels
from fixprop.algorithms import ac3, path
from fixprop.model import Constraint, Csp, normalize


def random_binary_csp(rng, n_vars, dom_size, density):
    variables = tuple(f"v{i}" for i in range(n_vars))
    domains = tuple(frozenset(range(dom_size)) for _ in range(n_vars))
    constraints = []
    for i, j in itertools.combinations(range(n_vars), 2):
        space = itertools.product(range(dom_size), repeat=2)
        tuples = [t for t in space if rng.random() < density]
        constraints.append(Constraint.on((i, j), tuples, f"c{len(constraints)}"))
    return Csp(variables, domains, tuple(constraints))


def best_of(fn, repeat, number):
    timings = []
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(number):
            fn()
        timings.append((time.perf_counter() - start) / number)
    return min(timings)


def micro_cases(rng):
    n = 40
    pairs = tuple(
        sorted(
            t
            for t in itertools.product(range(n), repeat=2)
            if rng.random() < 0.5
        )
    )
    x = frozenset(range(n))
    y = frozenset(range(0, n, 2))

    m = 12
    triples = tuple(
        sorted(
            t
            for t in itertools.product(range(m), repeat=3)
            if rng.random() < 0.3
        )
    )
    sets3 = tuple(frozenset(range(m)) for _ in range(3))

    k = 25
    rel = lambda d: frozenset(
        t for t in itertools.product(range(k), repeat=2) if rng.random() < d
    )
    p, q, r = rel(0.5), rel(0.5), rel(0.5)

    return [
        (
            f"restrict_pairs  ({len(pairs)} pairs, side 1)",
            lambda: kernels.restrict_pairs(pairs, x, y, 1),
            2000,
        ),
        (
            f"project_tuples  ({len(triples)} triples, coord 0)",
            lambda: kernels.project_tuples(triples, sets3, 0),
            500,
        ),
        (
            f"witness_filter  ({len(p)}/{len(q)}/{len(r)} pairs)",
            lambda: kernels.witness_filter(p, q, r),
            50,
        ),
    ]


def macro_cases(rng):
    big = random_binary_csp(rng, 12, 18, 0.55)
    np = normalize(random_binary_csp(rng, 8, 8, 0.65))
    return [
        ("ac3   (12 vars, 18 values)", lambda: ac3(big), 3),
        ("path  (8 vars, 8 values)", lambda: path(np), 1),
    ]


def fmt(seconds):
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.2f} s "


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="best-of repetitions")
    ap.add_argument("--seed", type=int, default=2026)
    args = ap.parse_args()

    backends = kernels.available_backends()
    print(f"backends available: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled extension not built; timing the python backend only")

    rng = random.Random(args.seed)
    cases = [("micro", micro_cases(rng)), ("macro", macro_cases(rng))]

    header = f"{'case':44s}" + "".join(f"{b:>14s}" for b in backends)
    if len(backends) > 1:
        header += f"{'speedup':>10s}"

    for section, rows in cases:
        print(f"\n{section} (best of {args.repeat})")
        print(header)
        for name, fn, number in rows:
            results = {}
            for backend in backends:
                previous = kernels.use_backend(backend)
                try:
                    results[backend] = best_of(fn, args.repeat, number)
                finally:
                    kernels.use_backend(previous)
            line = f"{name:44s}" + "".join(
                f"{fmt(results[b]):>14s}" for b in backends
            )
            if len(backends) > 1:
                line += f"{results['python'] / results['compiled']:>9.1f}x"
            print(line)


if __name__ == "__main__":
    main()
