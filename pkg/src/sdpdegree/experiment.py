"""Monte-Carlo distribution of the optimal rank on random SDP instances.

Each trial draws Gaussian constraint matrices ``A_i`` and cost ``C`` (both
symmetrized as ``(G + G^T)/2``), a right-hand side ``b_i = A_i . X0`` with
``X0 = G^T G``, solves the pair and records the numerical rank of the optimal
dual slack ``Z = C - sum y_i A_i``.  Trial ``t`` of cell ``(m, n)`` is seeded
from ``(base_seed, m, n, t)`` alone, so results do not depend on execution
order or on how trials are split across workers.

With ``fixed_constraints=True`` the constraints ``A_i`` and ``b`` are drawn
once per cell and only ``C`` varies between trials.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

from .degree import pataki_check
from .sdp import SdpInstance, SolverOptions, solve_sdp

# Rank percentages of the optimal dual slack, as published; keyed by (m, n).
PUBLISHED_RANKS: dict[tuple[int, int], dict[int, float]] = {
    (3, 3): {2: 24.00, 1: 76.00},
    (4, 3): {1: 100.00},
    (5, 3): {1: 100.00},
    (3, 4): {3: 35.34, 2: 64.66},
    (4, 4): {3: 23.22, 2: 76.78},
    (5, 4): {2: 100.00},
    (6, 4): {2: 67.24, 1: 32.76},
    (7, 4): {2: 52.94, 1: 47.06},
    (8, 4): {1: 100.00},
    (9, 4): {1: 100.00},
    (3, 5): {4: 79.18, 3: 20.82},
    (4, 5): {4: 16.96, 3: 83.04},
    (5, 5): {4: 5.90, 3: 94.10},
    (6, 5): {3: 93.50, 2: 6.50},
    (7, 5): {3: 82.64, 2: 17.36},
    (8, 5): {3: 34.64, 2: 65.36},
    (9, 5): {3: 7.60, 2: 92.40},
    (3, 6): {5: 82.78, 4: 17.22},
    (4, 6): {5: 37.42, 4: 62.58},
    (5, 6): {5: 38.42, 4: 61.58},
    (6, 6): {5: 1.32, 4: 93.36, 3: 5.32},
    (7, 6): {4: 78.82, 3: 21.18},
    (8, 6): {4: 45.62, 3: 54.38},
    (9, 6): {4: 23.50, 3: 76.50},
}


def trial_seed(base_seed: int, m: int, n: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed & (2**64 - 1), m, n, trial])


def constraints_seed(base_seed: int, m: int, n: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed & (2**64 - 1), m, n, 0, 2])


def cost_seed(base_seed: int, m: int, n: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed & (2**64 - 1), m, n, trial, 1])


def _gaussian_sym(rng: np.random.Generator, n: int) -> np.ndarray:
    G = rng.standard_normal((n, n))
    return (G + G.T) * 0.5


def _draw_constraints(rng: np.random.Generator, m: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    A = np.stack([_gaussian_sym(rng, n) for _ in range(m)])
    G = rng.standard_normal((n, n))
    X0 = G.T @ G
    return A, np.einsum("kij,ij->k", A, X0)


def _check_sizes(m: int, n: int) -> None:
    if m < 1 or n < 2:
        raise ValueError(f"need m >= 1 and n >= 2, got m={m}, n={n}")


def generate_instance(m: int, n: int, seed) -> SdpInstance:
    """Random instance; a deterministic function of ``seed``.

    ``seed`` may be an int or a :class:`numpy.random.SeedSequence`.  Draw
    order: ``A_1..A_m``, then ``G`` for ``X0``, then ``C``.
    """
    _check_sizes(m, n)
    rng = np.random.default_rng(seed)
    A, b = _draw_constraints(rng, m, n)
    C = _gaussian_sym(rng, n)
    return SdpInstance(C, A, b)


def generate_constraints(m: int, n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Only the ``(A, b)`` part of :func:`generate_instance`."""
    _check_sizes(m, n)
    return _draw_constraints(np.random.default_rng(seed), m, n)


def generate_cost(n: int, seed) -> np.ndarray:
    return _gaussian_sym(np.random.default_rng(seed), n)


@dataclass(frozen=True)
class ExperimentConfig:
    m: int
    n: int
    trials: int
    base_seed: int = 0
    rank_rel_tol: float = 1e-6
    solver: SolverOptions = field(default_factory=SolverOptions)
    fixed_constraints: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass
class RankHistogram:
    m: int
    n: int
    trials: int = 0
    counts: Counter = field(default_factory=Counter)
    ambiguous: int = 0
    solver_failures: int = 0
    pataki_violations: int = 0
    strict_comp_violations: int = 0

    @property
    def counted(self) -> int:
        return sum(self.counts.values())

    def percentages(self) -> dict[int, float]:
        total = self.counted
        if not total:
            return {}
        return {r: 100.0 * c / total for r, c in sorted(self.counts.items(), reverse=True)}

    def merge(self, other: "RankHistogram") -> "RankHistogram":
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("cannot merge histograms of different cells")
        return RankHistogram(
            self.m, self.n,
            self.trials + other.trials,
            self.counts + other.counts,
            self.ambiguous + other.ambiguous,
            self.solver_failures + other.solver_failures,
            self.pataki_violations + other.pataki_violations,
            self.strict_comp_violations + other.strict_comp_violations,
        )

    def as_dict(self) -> dict:
        published = PUBLISHED_RANKS.get((self.m, self.n), {})
        pct = self.percentages()
        ranks = sorted(set(pct) | set(published), reverse=True)
        return {
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "ranks": [
                {
                    "rank": r,
                    "count": self.counts.get(r, 0),
                    "percent": round(pct.get(r, 0.0), 4),
                    "published_percent": published.get(r),
                }
                for r in ranks
            ],
            "ambiguous": self.ambiguous,
            "solver_failures": self.solver_failures,
            "pataki_violations": self.pataki_violations,
            "strict_comp_violations": self.strict_comp_violations,
        }


# Tolerance factor for the second solve when the first leaves an unresolved pair.
REFINE_FACTOR = 1e-2


def classify_solution(inst: SdpInstance, rel_tol: float, opts: SolverOptions) -> Optional[tuple]:
    """Solve and rank: ``None`` on solver failure, else ``(rank_Z, rank_X, ambiguous)``.

    An exact optimal pair has ``XZ = 0``, hence ``rank X + rank Z <= n``.  A
    larger sum means some eigen-direction has not yet separated, so the
    instance is re-solved once at a tighter tolerance; if the sum is still too
    large the trial is reported ambiguous.
    """
    sol = solve_sdp(inst, opts)
    if not sol.optimal:
        return None
    rx, rz = sol.ranks(rel_tol)
    if rx.rank + rz.rank > inst.n:
        fine = solve_sdp(inst, replace(opts, tol=opts.tol * REFINE_FACTOR, max_iter=2 * opts.max_iter))
        if fine.optimal:
            rx, rz = fine.ranks(rel_tol)
    unresolved = rx.rank + rz.rank > inst.n
    return rz.rank, rx.rank, rx.ambiguous or rz.ambiguous or unresolved


def run_trial(m: int, n: int, seed, rel_tol: float, opts: SolverOptions) -> Optional[tuple]:
    """One fresh-instance trial; see :func:`classify_solution`."""
    return classify_solution(generate_instance(m, n, seed), rel_tol, opts)


def rank_distribution(cfg: ExperimentConfig, trial_indices: Optional[Iterable[int]] = None) -> RankHistogram:
    """Histogram of the optimal dual-slack rank over ``cfg.trials`` random instances."""
    hist = RankHistogram(cfg.m, cfg.n)
    indices = range(cfg.trials) if trial_indices is None else trial_indices
    fixed = None
    if cfg.fixed_constraints:
        fixed = generate_constraints(cfg.m, cfg.n, constraints_seed(cfg.base_seed, cfg.m, cfg.n))
    for t in indices:
        hist.trials += 1
        if fixed is None:
            out = run_trial(cfg.m, cfg.n, trial_seed(cfg.base_seed, cfg.m, cfg.n, t),
                            cfg.rank_rel_tol, cfg.solver)
        else:
            C = generate_cost(cfg.n, cost_seed(cfg.base_seed, cfg.m, cfg.n, t))
            out = classify_solution(SdpInstance(C, *fixed), cfg.rank_rel_tol, cfg.solver)
        if out is None:
            hist.solver_failures += 1
            continue
        rank_z, rank_x, ambiguous = out
        if ambiguous:
            hist.ambiguous += 1
            continue
        hist.counts[rank_z] += 1
        if not 1 <= rank_z <= cfg.n - 1 or not pataki_check(cfg.m, cfg.n, rank_z):
            hist.pataki_violations += 1
        if rank_x + rank_z != cfg.n:
            hist.strict_comp_violations += 1
    return hist


def rank_table_cells() -> list[tuple[int, int]]:
    """Published cells ordered by ``n`` then ``m``."""
    return sorted(PUBLISHED_RANKS, key=lambda k: (k[1], k[0]))


def reproduce_rank_table(trials_per_cell: int, base_seed: int = 0,
                     cells: Optional[Iterable[tuple[int, int]]] = None,
                     rank_rel_tol: float = 1e-6,
                     fixed_constraints: bool = False) -> list[RankHistogram]:
    """Run every (m, n) cell of the published rank table."""
    if trials_per_cell < 1:
        raise ValueError("trials_per_cell must be >= 1")
    keys = rank_table_cells() if cells is None else list(cells)
    return [
        rank_distribution(ExperimentConfig(m, n, trials_per_cell, base_seed, rank_rel_tol,
                                           fixed_constraints=fixed_constraints))
        for m, n in keys
    ]


def tolerance_points(p: float, trials: int) -> float:
    """Allowed deviation in percentage points from a published percentage ``p``."""
    return max(4.0, 3.0 * math.sqrt(p * (100.0 - p) / trials))


def compare_to_published(hist: RankHistogram, trials: Optional[int] = None) -> list[dict]:
    """Per-rank comparison rows against the published percentages."""
    published = PUBLISHED_RANKS.get((hist.m, hist.n))
    if published is None:
        return []
    N = trials or hist.trials
    pct = hist.percentages()
    rows = []
    for r in sorted(set(published) | set(pct), reverse=True):
        p = published.get(r, 0.0)
        got = pct.get(r, 0.0)
        tol = tolerance_points(p, N)
        rows.append({"rank": r, "published": p, "empirical": got, "tolerance": tol,
                     "ok": abs(got - p) <= tol})
    return rows


CSV_COLUMNS = ["m", "n", "rank", "count", "percent", "published_percent", "ambiguous", "failures"]


def histograms_to_csv(hists: Iterable[RankHistogram]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for h in hists:
        d = h.as_dict()
        for row in d["ranks"]:
            published = "" if row["published_percent"] is None else f"{row['published_percent']:.2f}"
            w.writerow([h.m, h.n, row["rank"], row["count"], f"{row['percent']:.2f}",
                        published, h.ambiguous, h.solver_failures])
    return buf.getvalue()


def histograms_to_json(hists: Iterable[RankHistogram]) -> str:
    return json.dumps([h.as_dict() for h in hists], indent=2, sort_keys=True)
