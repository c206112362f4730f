"""Consistency suites over ranges of (m, n, r).

Each suite returns a :class:`CheckReport`; a suite passes when ``failures`` is
empty.  Comparisons between two conjectural evaluations are counted
separately in ``conjectural``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .degree import (
    closed_form_family,
    delta,
    delta_smooth,
    delta_via_class,
    dual_query,
    feasible_ranks,
    general_formula,
    in_smooth_range,
)
from .exact import binomial


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    conjectural: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "checked": self.checked,
            "passed": self.passed,
            "failures": self.failures,
            "conjectural_confirmations": self.conjectural,
        }


def _queries(n_max: int):
    for n in range(2, n_max + 1):
        for m in range(1, binomial(n + 1, 2)):
            for r in feasible_ranks(m, n):
                yield m, n, r


def check_duality(n_max: int = 6) -> CheckReport:
    """The partition-sum formula is invariant under ``(m, r) -> (C(n+1,2)-m, n-r)``.

    The formula is evaluated directly on both sides, so pairs where neither
    side is in the proven range test the conjecture itself.
    """
    rep = CheckReport("duality")
    for m, n, r in _queries(n_max):
        dm, _, dr = dual_query(m, n, r)
        if (dm, dr) < (m, r):
            continue
        lhs, rhs = general_formula(m, n, r), general_formula(dm, n, dr)
        rep.checked += 1
        row = {"query": [m, n, r], "dual": [dm, n, dr], "values": [lhs, rhs]}
        if lhs != rhs:
            rep.failures.append(row)
        elif not (in_smooth_range(m, n, r) or in_smooth_range(dm, n, dr)):
            rep.conjectural.append(row)
    return rep


def check_class(n_max: int = 6) -> CheckReport:
    """Class-formula route equals the smooth partition sum on the smooth range."""
    rep = CheckReport("class")
    for m, n, r in _queries(n_max):
        if not in_smooth_range(m, n, r):
            continue
        a, b = delta_smooth(m, n, r), delta_via_class(m, n, r)
        rep.checked += 1
        if a != b:
            rep.failures.append({"query": [m, n, r], "smooth": a, "class": b})
    return rep


def check_closed(n_max: int = 6) -> CheckReport:
    """Every explicit row formula equals the general-formula route."""
    rep = CheckReport("closed")
    for m, n, r in _queries(n_max):
        hit = closed_form_family(m, n, r)
        if hit is None:
            continue
        family, closed = hit
        dm, _, dr = dual_query(m, n, r)
        if in_smooth_range(m, n, r):
            general = delta_smooth(m, n, r)
        elif in_smooth_range(dm, n, dr):
            general = delta_smooth(dm, n, dr)
        else:
            general = general_formula(m, n, r)
        rep.checked += 1
        if general != closed:
            rep.failures.append({"query": [m, n, r], "family": family,
                                 "closed": closed, "general": general})
    return rep


def check_dispatch(n_max: int = 6) -> CheckReport:
    """Run the cross-checking dispatcher over the whole range."""
    rep = CheckReport("dispatch")
    for m, n, r in _queries(n_max):
        rep.checked += 1
        try:
            delta(m, n, r)
        except ArithmeticError as exc:
            rep.failures.append({"query": [m, n, r], "error": str(exc)})
    return rep


SUITES = {
    "duality": check_duality,
    "class": check_class,
    "closed": check_closed,
}


def run_checks(scope: str, n_max: int) -> list[CheckReport]:
    if scope == "all":
        return [fn(n_max) for fn in SUITES.values()] + [check_dispatch(n_max)]
    if scope not in SUITES:
        raise ValueError(f"unknown scope {scope!r}")
    return [SUITES[scope](n_max)]
