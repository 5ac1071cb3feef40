#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Runs the same seeded sparse networks through every available backend,
verifies the traces agree byte-for-byte, and prints wall times. Usage:

    python benchmarks/bench_engines.py [--neurons N] [--steps N] [--seed S] [--repeat R]
"""

import argparse
import time

from snnkit.engine import RunLimits, available_backends, run
from snnkit.randnet import sparse_benchmark_network


def time_backend(network, steps, backend, repeat):
    best = float("inf")
    checksum = None
    for _ in range(repeat):
        started = time.perf_counter()
        report, trace = run(network, RunLimits(steps), trace=True, backend=backend)
        elapsed = time.perf_counter() - started
        best = min(best, elapsed)
        checksum = hash(trace.render())
    return best, report, checksum


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--neurons", type=int, default=1000)
    parser.add_argument("--steps", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=5)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    network = sparse_benchmark_network(args.neurons, seed=args.seed)
    backends = available_backends()
    print(
        f"network: {network.size()} neurons, {len(network.synapses)} synapses,"
        f" {args.steps} steps, best of {args.repeat}"
    )
    results = {}
    for backend in backends:
        best, report, checksum = time_backend(network, args.steps, backend, args.repeat)
        results[backend] = (best, checksum)
        rate = report.energy / best / 1e6
        print(
            f"{backend:>9}: {best:7.3f} s   {report.energy} spikes"
            f"   {rate:5.2f} M spike-events/s"
        )
    checksums = {checksum for _, checksum in results.values()}
    if len(checksums) != 1:
        raise SystemExit("backends disagree: traces differ")
    print("traces identical across backends")
    if "compiled" in results and "pure" in results:
        speedup = results["pure"][0] / results["compiled"][0]
        print(f"compiled speedup over pure: {speedup:.2f}x")


if __name__ == "__main__":
    main()
