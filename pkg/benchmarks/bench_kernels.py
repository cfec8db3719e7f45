"""Timing comparison of the compiled and reference kernel backends.

Runs the two hot kernels (batch evaluation and axis restriction) on a
grid of problem sizes under each available backend and prints the
per-call times with the speedup.  Sizes are chosen so the largest case
mirrors a sup-norm grid sweep at degree 4.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import math
import time

import numpy as np

from bhkit import kernels
from bhkit.polynomials import exponent_matrix, random_polynomial

# (m, n, batch size): small ascent steps up to a dense grid sweep.
CASES = (
    (2, 3, 256),
    (3, 4, 1024),
    (4, 5, 4096),
    (4, 8, 16384),
)


def _time_call(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_case(m, n, batch, repeats):
    P = random_polynomial(n, m, 1, "gaussian", 0)
    expo = exponent_matrix(m, n)
    rng = np.random.default_rng(1)
    points = np.exp(2j * np.pi * rng.random((batch, n)))
    z = points[0]
    rows = []
    for backend in kernels.available_backends():
        kernels.use(backend)
        t_eval = _time_call(
            lambda: kernels.eval_poly_batch(expo, P.coefficients, points), repeats
        )
        t_restrict = _time_call(
            lambda: kernels.restriction_coeffs(expo, P.coefficients, z, 0), repeats
        )
        rows.append((backend, t_eval, t_restrict))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repeats per case; the best is kept")
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled backend not built; timing the reference only")
    header = f"{'case':>18}  {'backend':>9}  {'eval':>12}  {'restrict':>12}"
    print(header)
    print("-" * len(header))
    for m, n, batch in CASES:
        rows = bench_case(m, n, batch, args.repeats)
        label = f"m={m} n={n} S={batch}"
        for backend, t_eval, t_restrict in rows:
            print(
                f"{label:>18}  {backend:>9}  {t_eval * 1e3:>10.3f}ms"
                f"  {t_restrict * 1e6:>10.1f}us"
            )
        if len(rows) == 2:
            (_, fast_eval, fast_res), (_, ref_eval, ref_res) = (
                rows if rows[0][0] == "compiled" else rows[::-1]
            )
            print(
                f"{'':>18}  {'speedup':>9}  {ref_eval / fast_eval:>11.2f}x"
                f"  {ref_res / fast_res:>11.2f}x"
            )
    kernels.use(backends[0])


if __name__ == "__main__":
    main()
