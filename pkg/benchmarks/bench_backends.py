"""Compare the compiled and numpy kernels on representative workloads.

Three workloads, timed under each available backend:

* ``mul``   — one dense max-plus matrix product
* ``star``  — Kleene star of a matrix with non-positive circuits
* ``sweep`` — analyze every gait on 2..5 legs (eigenvalue, eigenvector,
  verification), the hot path of the CLI sweep

Run as ``python3 benchmarks/bench_backends.py``.
"""

from __future__ import annotations

import time

import click
import numpy as np

from tropigait import (
    GaitParams,
    MaxPlusMatrix,
    closed_form_eigenpair,
    enumerate_gaits,
    kleene_star,
    max_cycle_mean,
    system_matrix,
    verify_eigenpair,
)
from tropigait import _backend


def _random_square(rng, n: int, high: float = 10.0) -> np.ndarray:
    vals = rng.uniform(-high, high, size=(n, n))
    vals[rng.random((n, n)) < 0.3] = float("-inf")
    return vals


def _bench(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _mul_workload(rng, n: int):
    a = _random_square(rng, n)
    b = _random_square(rng, n)

    def run():
        _backend.mul(a, b)

    return run


def _star_workload(rng, n: int):
    vals = np.minimum(_random_square(rng, n), 0.0)
    m = MaxPlusMatrix(vals)

    def run():
        kleene_star(m)

    return run


def _sweep_workload():
    params = GaitParams(1.0, 3.0, 2.0)
    gaits = [g for n in range(2, 6) for g in enumerate_gaits(n)]

    def run():
        for g in gaits:
            mats = system_matrix(g, params)
            lam, v = closed_form_eigenpair(g, params)
            assert max_cycle_mean(mats.A) == lam
            assert verify_eigenpair(mats.A, lam, v, tol=0.0)

    return run


@click.command()
@click.option("--sizes", default="8,16,32,64", show_default=True,
              help="comma-separated matrix sizes for mul and star")
@click.option("--repeats", default=20, show_default=True,
              help="timing repetitions per workload (best is reported)")
@click.option("--seed", default=20260822, show_default=True)
def main(sizes: str, repeats: int, seed: int) -> None:
    dims = [int(s) for s in sizes.split(",") if s.strip()]
    backends = _backend.available_backends()
    if "cython" not in backends:
        click.echo("note: compiled kernel unavailable, timing numpy only")

    rows = []
    for label, factory in (
        *((f"mul {n}x{n}", lambda n=n: _mul_workload(np.random.default_rng(seed), n))
          for n in dims),
        *((f"star {n}x{n}", lambda n=n: _star_workload(np.random.default_rng(seed), n))
          for n in dims),
        ("gait sweep n=2..5", lambda: _sweep_workload()),
    ):
        timings = {}
        for name, cls in backends.items():
            saved = _backend.mul
            _backend.mul = cls.mul
            try:
                run = factory()
                run()  # warm up
                timings[name] = _bench(run, repeats)
            finally:
                _backend.mul = saved
        rows.append((label, timings))

    width = max(len(r[0]) for r in rows)
    header = f"{'workload':<{width}}  {'numpy':>12}"
    if "cython" in backends:
        header += f"  {'cython':>12}  {'speedup':>8}"
    click.echo(header)
    click.echo("-" * len(header))
    for label, timings in rows:
        line = f"{label:<{width}}  {timings['numpy'] * 1e6:>10.1f}us"
        if "cython" in timings:
            ratio = timings["numpy"] / timings["cython"]
            line += f"  {timings['cython'] * 1e6:>10.1f}us  {ratio:>7.2f}x"
        click.echo(line)


if __name__ == "__main__":
    main()
