"""The algebraic degree delta(m, n, r) of semidefinite programming.

``m`` is the number of linear constraints, ``n`` the matrix size and ``r`` the
rank of the optimal dual slack matrix.  Several independent routes are
provided, and :func:`delta` evaluates every route that applies and insists they
agree:

* ``smooth``: the partition-sum formula, proven when
  ``C(n-r+1, 2) <= m < C(n-r+2, 2)``;
* ``dual_smooth``: the same formula on ``(C(n+1,2) - m, n, n - r)``;
* ``conjecture``: the partition-sum formula outside both ranges (flagged);
* ``class``: second difference of Euler numbers of determinantal loci;
* ``closed_form`` / ``complementary_dim``: explicit row formulas and the
  determinantal degree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

from .exact import binomial
from .partitions import add, enumerate_partitions, rho, rho0
from .schur import bracket, b_value

log = logging.getLogger(__name__)

METHODS = ("closed_form", "smooth", "dual_smooth", "complementary_dim", "conjecture")


class CrossCheckError(ArithmeticError):
    """Two evaluation routes for the same degree disagreed."""

    def __init__(self, m: int, n: int, r: int, routes: list[tuple[str, int]]):
        self.query = (m, n, r)
        self.routes = routes
        detail = ", ".join(f"{name}={value}" for name, value in routes)
        super().__init__(f"cross-check mismatch for delta({m},{n},{r}): {detail}")


class IntegralityError(ArithmeticError):
    """A partition sum that must be an integer came out fractional."""


@dataclass(frozen=True)
class DegreeQuery:
    m: int
    n: int
    r: int

    def __post_init__(self):
        validate_query(self.m, self.n, self.r)

    @property
    def codim(self) -> int:
        return binomial(self.n - self.r + 1, 2)

    @property
    def d(self) -> int:
        return self.m - self.codim


@dataclass(frozen=True)
class DegreeResult:
    m: int
    n: int
    r: int
    value: int
    pataki_ok: bool
    method: Optional[str]
    conjectural: bool
    cross_checks: tuple[tuple[str, int], ...] = field(default=())


def validate_query(m: int, n: int, r: int) -> None:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1 <= r <= n - 1:
        raise ValueError(f"r must lie in [1, n-1], got r={r} for n={n}")
    if not 1 <= m <= binomial(n + 1, 2) - 1:
        raise ValueError(f"m must lie in [1, {binomial(n + 1, 2) - 1}] for n={n}, got {m}")


def pataki_check(m: int, n: int, r: int) -> bool:
    """Pataki's inequalities for optimal rank ``r``."""
    return binomial(n - r + 1, 2) <= m and binomial(r + 1, 2) <= binomial(n + 1, 2) - m


def dual_query(m: int, n: int, r: int) -> tuple[int, int, int]:
    return binomial(n + 1, 2) - m, n, n - r


def in_smooth_range(m: int, n: int, r: int) -> bool:
    return binomial(n - r + 1, 2) <= m < binomial(n - r + 2, 2)


def determinantal_degree(n: int, r: int) -> int:
    """Degree of the variety of symmetric n x n matrices of rank <= r."""
    if not 1 <= r <= n - 1:
        raise ValueError(f"need 1 <= r <= n-1, got n={n}, r={r}")
    value = Fraction(1)
    for j in range(n - r):
        value *= Fraction(binomial(n + j, n - r - j), binomial(2 * j + 1, j))
    if value.denominator != 1:
        raise IntegralityError(f"determinantal degree ({n},{r}) not integral: {value}")
    return int(value)


@lru_cache(maxsize=None)
def _intersection_terms(n: int, r: int, max_weight: int) -> tuple[tuple[int, Fraction], ...]:
    """``(|lam|, ((lam + rho0)) * b_(lam + rho)(n))`` over the partition index set."""
    length = n - r
    shift0, shift = rho0(length - 1), rho(length)
    out = []
    for lam in enumerate_partitions(length, max_weight):
        w = lam.weight
        out.append((w, bracket(add(lam, shift0)) * b_value(add(lam, shift), n)))
    return tuple(out)


def _as_int(total: Fraction, what: str) -> int:
    if total.denominator != 1:
        raise IntegralityError(f"{what} evaluated to non-integer {total}")
    return int(total)


def euler_number(m: int, n: int, r: int) -> int:
    """Intersection number e(m, n, r); zero when ``m < C(n-r+1, 2)``."""
    c = binomial(n - r + 1, 2)
    if m < c:
        return 0
    total = Fraction(0)
    for w, t in _intersection_terms(n, r, m - c):
        term = t * binomial(m + 1, m - c - w)
        total += -term if w % 2 else term
    return _as_int(total, f"e({m},{n},{r})")


def general_formula(m: int, n: int, r: int) -> int:
    """The partition-sum degree formula, evaluated without any range check."""
    c = binomial(n - r + 1, 2)
    d = m - c
    if d < 0:
        return 0
    total = Fraction(0)
    for w, t in _intersection_terms(n, r, d):
        term = t * binomial(m - 1, d - w)
        total += -term if w % 2 else term
    if d % 2:
        total = -total
    return _as_int(total, f"delta({m},{n},{r})")


def _require_smooth(m: int, n: int, r: int) -> None:
    if not in_smooth_range(m, n, r):
        raise ValueError(f"({m},{n},{r}) not in smooth range")


def delta_smooth(m: int, n: int, r: int) -> int:
    _require_smooth(m, n, r)
    return general_formula(m, n, r)


def delta_via_class(m: int, n: int, r: int) -> int:
    """Degree from the class formula: second difference of Euler numbers."""
    _require_smooth(m, n, r)
    d = m - binomial(n - r + 1, 2)
    value = euler_number(m, n, r) - 2 * euler_number(m - 1, n, r) + euler_number(m - 2, n, r)
    return -value if d % 2 else value


def delta_conjecture(m: int, n: int, r: int) -> int:
    """The partition-sum formula applied outside the proven range."""
    if not pataki_check(m, n, r):
        raise ValueError(f"({m},{n},{r}) violates Pataki's inequalities")
    return general_formula(m, n, r)


def closed_form_family(m: int, n: int, r: int) -> Optional[tuple[str, int]]:
    """Name and value of the explicit row formula covering (m, n, r), if any."""
    if not (1 <= r <= n - 1 and pataki_check(m, n, r)):
        return None
    C = binomial
    k = n - r
    if k == 1 and m <= n:
        return "rank n-1", 2 ** (m - 1) * C(n, m)
    if k == 2:
        if m == 3:
            return "rank n-2, m=3", C(n + 1, 3)
        if m == 4:
            return "rank n-2, m=4", 6 * C(n + 1, 4)
        if m == 5:
            return "rank n-2, m=5", 27 * C(n + 1, 5) + 3 * C(n + 1, 4)
    if k == 3:
        if m == 6:
            return "rank n-3, m=6", 2 * C(n + 2, 6) + C(n + 2, 5)
        if m == 7:
            return "rank n-3, m=7", 28 * C(n + 3, 7) - 12 * C(n + 2, 6)
        if m == 8:
            return "rank n-3, m=8", 248 * C(n + 4, 8) - 320 * C(n + 3, 7) + 84 * C(n + 2, 6)
        if m == 9:
            return ("rank n-3, m=9",
                    1794 * C(n + 5, 9) - 3778 * C(n + 4, 8) + 2436 * C(n + 3, 7) - 448 * C(n + 2, 6))
    if m == binomial(k + 1, 2):
        return "complementary dimension", determinantal_degree(n, r)
    return None


def delta_closed(m: int, n: int, r: int) -> Optional[int]:
    hit = closed_form_family(m, n, r)
    return None if hit is None else hit[1]


def _routes(m: int, n: int, r: int) -> Iterator[tuple[str, int]]:
    dm, _, dr = dual_query(m, n, r)
    primal_smooth = in_smooth_range(m, n, r)
    dual_smooth = in_smooth_range(dm, n, dr)
    if primal_smooth:
        yield "smooth", delta_smooth(m, n, r)
    if dual_smooth:
        yield "dual_smooth", delta_smooth(dm, n, dr)
    if not (primal_smooth or dual_smooth):
        yield "conjecture", delta_conjecture(m, n, r)
    hit = closed_form_family(m, n, r)
    if hit is not None:
        yield ("complementary_dim" if hit[0] == "complementary dimension" else "closed_form"), hit[1]
    if m == binomial(n - r + 1, 2) and (hit is None or hit[0] != "complementary dimension"):
        yield "complementary_dim", determinantal_degree(n, r)
    if primal_smooth:
        yield "class", delta_via_class(m, n, r)
    if dual_smooth:
        yield "dual_class", delta_via_class(dm, n, dr)


@lru_cache(maxsize=None)
def delta(m: int, n: int, r: int) -> DegreeResult:
    """Algebraic degree with every applicable route cross-checked.

    Raises :class:`CrossCheckError` if any two routes disagree.
    """
    validate_query(m, n, r)
    if not pataki_check(m, n, r):
        return DegreeResult(m, n, r, 0, False, None, False, ())
    routes = tuple(_routes(m, n, r))
    values = {v for _, v in routes}
    if len(values) != 1:
        raise CrossCheckError(m, n, r, list(routes))
    method = routes[0][0]
    value = routes[0][1]
    if value <= 0:
        raise CrossCheckError(m, n, r, list(routes))
    return DegreeResult(m, n, r, value, True, method, method == "conjecture", routes)


@dataclass(frozen=True)
class DegreeTable:
    n_max: int
    m_max: Optional[int]
    cells: tuple[DegreeResult, ...]
    row_sums: dict[tuple[int, int], int]

    def lookup(self, m: int, n: int, r: int) -> int:
        for cell in self.cells:
            if (cell.m, cell.n, cell.r) == (m, n, r):
                return cell.value
        return 0


def feasible_ranks(m: int, n: int) -> list[int]:
    """Pataki-feasible ranks, highest first."""
    return [r for r in range(n - 1, 0, -1) if pataki_check(m, n, r)]


def row_sum(n: int, r: int) -> int:
    """Sum of delta(m, n, r) over every m; the total degree of the bidegree."""
    return sum(delta(m, n, r).value for m in range(1, binomial(n + 1, 2)) if pataki_check(m, n, r))


def table(n_max: int, m_max: Optional[int] = None) -> DegreeTable:
    """All nonzero delta(m, n, r) with ``2 <= n <= n_max`` and ``m <= m_max``.

    ``m_max=None`` means each column runs to ``C(n+1, 2) - 1``.  Row sums are
    always taken over the full range of ``m``.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if n_max > 8:
        log.warning("n_max=%d exceeds the tested range; expect long runtimes", n_max)
    cells = []
    sums: dict[tuple[int, int], int] = {}
    for n in range(2, n_max + 1):
        top = binomial(n + 1, 2) - 1
        for m in range(1, top + 1):
            for r in feasible_ranks(m, n):
                res = delta(m, n, r)
                sums[(n, r)] = sums.get((n, r), 0) + res.value
                if m_max is None or m <= m_max:
                    cells.append(res)
    return DegreeTable(n_max, m_max, tuple(cells), sums)
