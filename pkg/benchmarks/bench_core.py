"""Time the compiled and pure-Python kernels on the same workloads.

    python benchmarks/bench_core.py [--repeat 5] [--json]
"""
import argparse
import json
import math
import timeit

from hamspec import _backend

# Instance A in reduced form: q = -1 at rho = 0, p = 0, r = -1, T = pi
MARCH_ARGS = (-1.0, 0.0, -1.0, 50.0 * math.pi, 1e-10, 1e-12, 1e3, 10**7, 1e-10 * math.pi, False)
# Instance B counting root for n = 50
BISECT_ARGS = (50, 1.0, -1.0, -0.65, -1.0, -0.25, -1e4, 0.1443, 1e-12, 1e-10, 2000)
COUNTING_ARGS = (50, 1.0, -1.0, -0.65, -1.0, -0.25, -3.0)

WORKLOADS = {
    "march to first pole (Instance A)": ("march", MARCH_ARGS, 20),
    "bisect_counting (Instance B, n=50)": ("bisect_counting", BISECT_ARGS, 200),
    "counting (single evaluation)": ("counting", COUNTING_ARGS, 100_000),
}


def bench(repeat):
    results = {}
    for label, (fn_name, args, number) in WORKLOADS.items():
        row = {}
        for name in _backend.available():
            fn = getattr(_backend.load(name), fn_name)
            best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat))
            row[name] = best / number
        results[label] = row
    return results


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true", help="print raw seconds per call as JSON")
    args = parser.parse_args(argv)
    results = bench(args.repeat)
    if args.json:
        print(json.dumps(results, indent=2))
        return
    for label, row in results.items():
        cells = "  ".join(f"{name}={sec * 1e6:10.2f} us" for name, sec in row.items())
        speedup = ""
        if "cython" in row and "python" in row:
            speedup = f"  speedup x{row['python'] / row['cython']:.1f}"
        print(f"{label:38s} {cells}{speedup}")


if __name__ == "__main__":
    main()
