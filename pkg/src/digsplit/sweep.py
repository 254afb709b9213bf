"""Grid experiments: analytic bounds against Monte Carlo, written as CSV."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .generators import make_family
from .pairing import _trial, monte_carlo_bad_events, random_pairing
from .probability import (BadThreshold, BoundNotValid, as_epsilon, expected_bad_exact,
                          expected_bad_upper)

COLUMNS = ("epsilon", "n", "seed", "trials", "mean_bad", "stderr_bad", "exact_EX",
           "analytic_bound", "success_rate")


def cell_seed(seed: int, index: int) -> int:
    """Per-cell seed derived from the run seed and the cell's grid position."""
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _instance(family: str, n: int, seed: int, d: int | None = None):
    if family == "kpartite":
        return make_family(family, parts=(n // 2, n - n // 2), seed=[seed, 0])
    return make_family(family, n=n, seed=[seed, 0], d=d)


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _bound(D, eps):
    try:
        return expected_bad_upper(D, eps)
    except BoundNotValid:
        return None


def _check_grid(eps_list, n_list):
    if not eps_list or not n_list:
        raise ValueError("the grid needs at least one epsilon and one n")
    for e in eps_list:
        as_epsilon(e)
    for n in n_list:
        if int(n) < 1:
            raise ValueError(f"invalid n = {n}")


def _map(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(jobs) as pool:
        return list(pool.map(fn, items))


def sweep_expected_bad(family: str, eps_list: Sequence, n_list: Sequence[int], trials: int,
                       seed: int = 0, *, jobs: int = 1, d: int | None = None) -> list[dict]:
    """One row per ``(epsilon, n)``: bound, exact ``E(X)`` for one pairing, and Monte Carlo.

    The Monte Carlo samples re-split that same pairing, so ``exact_EX`` and
    ``mean_bad`` estimate the same quantity.
    """
    _check_grid(eps_list, n_list)
    cells = [(i, e, int(n)) for i, (e, n) in
             enumerate((e, n) for e in eps_list for n in n_list)]

    def run(cell):
        i, eps, n = cell
        cs = cell_seed(seed, i)
        D = _instance(family, n, cs, d)
        pairing = random_pairing(D.n, [cs, 1])
        spec = BadThreshold.relative(eps)
        mc = monte_carlo_bad_events(D, pairing, spec, trials, seed=[cs, 2])
        return {
            "epsilon": str(eps), "n": str(n), "seed": str(cs), "trials": str(trials),
            "mean_bad": _fmt(mc.mean_bad), "stderr_bad": _fmt(mc.stderr_bad),
            "exact_EX": _fmt(expected_bad_exact(D, pairing, spec)),
            "analytic_bound": _fmt(_bound(D, eps)),
            "success_rate": _fmt((mc.bad_per_sample == 0).mean()),
        }

    return _map(run, cells, jobs)


def sweep_success_threshold(family: str, eps, n_list: Sequence[int], trials: int,
                            seed: int = 0, *, jobs: int = 1, d: int | None = None) -> list[dict]:
    """Single-sample success rate of the pairing bisection for each ``n``.

    Each trial draws a fresh pairing and fresh coins, exactly like one round
    of :func:`~digsplit.pairing.find_good_bisection`.
    """
    _check_grid([eps], n_list)
    spec = BadThreshold.relative(eps)

    def run(cell):
        i, n = cell
        cs = cell_seed(seed, i)
        D = _instance(family, n, cs, d)
        t = spec.thresholds(D.out_degrees)
        bad = np.array([int(_trial(D, t, cs, j)[2].sum()) for j in range(trials)])
        stderr = bad.std(ddof=1) / np.sqrt(trials) if trials > 1 else None
        return {
            "epsilon": str(eps), "n": str(n), "seed": str(cs), "trials": str(trials),
            "mean_bad": _fmt(bad.mean()), "stderr_bad": _fmt(stderr), "exact_EX": "",
            "analytic_bound": _fmt(_bound(D, eps)),
            "success_rate": _fmt((bad == 0).mean()),
        }

    return _map(run, list(enumerate(int(n) for n in n_list)), jobs)


def empirical_frontier(rows: Iterable[dict], level: float = 0.99) -> int | None:
    """Smallest ``n`` from which every larger grid point reaches ``level`` success."""
    pts = sorted((int(r["n"]), float(r["success_rate"])) for r in rows)
    frontier = None
    for n, rate in reversed(pts):
        if rate < level:
            break
        frontier = n
    return frontier


def write_csv(rows: Iterable[dict], out=None) -> str | None:
    """Write rows with the fixed column set; returns the text when ``out`` is None."""
    buf = io.StringIO() if out is None else out
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in COLUMNS})
    return buf.getvalue() if out is None else None


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
