"""Integer weights ((lambda)) and diagonal Schur Q specializations b_lambda(n).

``bracket`` gives the integer attached to a strict partition in the
intersection number.  ``b_single``/``b_pair``/``b_general`` give the
polynomials b_lambda(n) obtained when all Chern roots equal h/2, with
b_i(n) the coefficient of h^i in ``(1 + h/2)^n / (1 - h/2)^n``.

Every value is cached; caches are thread-safe (``functools.lru_cache`` and a
lock around the lazily extended series).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .exact import SkewMatrix, UniPoly, binomial, pfaffian, poly_binomial_shifted
from .partitions import Partition

PartitionLike = Union[Partition, Sequence[int]]


def _strict_key(lam: PartitionLike, what: str) -> tuple[int, ...]:
    p = lam if isinstance(lam, Partition) else Partition(lam)
    if not p.is_strict():
        raise ValueError(f"{what} requires strict partition, got {p}")
    return p.parts


def bracket(lam: PartitionLike) -> int:
    """The integer ((lambda)) of a strict partition (length-sensitive)."""
    return _bracket(_strict_key(lam, "bracket"))


@lru_cache(maxsize=None)
def _bracket(parts: tuple[int, ...]) -> int:
    k = len(parts)
    if k == 0:
        return 1
    if k == 1:
        return 2 ** parts[0]
    if k == 2:
        i, j = parts
        return sum(binomial(i + j, t) for t in range(j + 1, i + 1))
    if k % 2 == 0:
        M = SkewMatrix.from_function(k, lambda s, t: _bracket((parts[s], parts[t])))
        return pfaffian(M)
    total = 0
    for j in range(k):
        term = 2 ** parts[j] * _bracket(parts[:j] + parts[j + 1:])
        total += term if j % 2 == 0 else -term
    return total


class BSeries:
    """Lazily extended coefficients of ``(1 + h/2)^n / (1 - h/2)^n``.

    The numerator contributes ``C(n, k) / 2^k`` and the inverted denominator
    ``C(n + k - 1, k) / 2^k``; both are polynomials in ``n``.
    """

    def __init__(self):
        self._num: list[UniPoly] = []
        self._den: list[UniPoly] = []
        self._coef: list[UniPoly] = []
        self._lock = threading.Lock()

    @property
    def order(self) -> int:
        return len(self._coef) - 1

    def _extend(self, upto: int) -> None:
        while len(self._coef) <= upto:
            i = len(self._coef)
            scale = Fraction(1, 2 ** i)
            self._num.append(poly_binomial_shifted(0, i) * scale)
            self._den.append(poly_binomial_shifted(i - 1, i) * scale)
            c = UniPoly()
            for k in range(i + 1):
                c = c + self._num[k] * self._den[i - k]
            self._coef.append(c)

    def __getitem__(self, i: int) -> UniPoly:
        if i < 0:
            raise IndexError(i)
        if i >= len(self._coef):
            with self._lock:
                self._extend(i)
        return self._coef[i]

    def coefficients(self, order: int) -> list[UniPoly]:
        self[order]
        return list(self._coef[: order + 1])


_SERIES = BSeries()


def b_single(i: int) -> UniPoly:
    """b_i(n), a degree-``i`` polynomial in ``n``."""
    if i < 0:
        raise ValueError(f"b_single requires i >= 0, got {i}")
    return _SERIES[i]


@lru_cache(maxsize=None)
def b_pair(i: int, j: int) -> UniPoly:
    """b_(i,j)(n) for ``i > j >= 0``."""
    if not i > j >= 0:
        raise ValueError(f"b_pair requires i > j >= 0, got ({i}, {j})")
    if j == 0:
        return b_single(i)
    acc = b_single(i) * b_single(j)
    for k in range(1, j + 1):
        term = b_single(i + k) * b_single(j - k) * 2
        acc = acc - term if k % 2 == 1 else acc + term
    return acc


def _normalize_b(parts: tuple[int, ...]) -> tuple[int, ...]:
    # odd length: append a zero part, or drop a trailing one
    if len(parts) % 2 == 1:
        return parts + (0,) if parts[-1] > 0 else parts[:-1]
    return parts


def b_general(lam: PartitionLike) -> UniPoly:
    """b_lambda(n) for any strict partition, as a polynomial in ``n``."""
    return _b_general(_normalize_b(_strict_key(lam, "b_general")))


@lru_cache(maxsize=None)
def _b_general(parts: tuple[int, ...]) -> UniPoly:
    k = len(parts)
    if k == 0:
        return UniPoly.one()
    if k == 2:
        return b_pair(*parts)
    M = SkewMatrix.from_function(k, lambda s, t: b_pair(parts[s], parts[t]), zero=UniPoly())
    return pfaffian(M, one=UniPoly.one())


def b_value(lam: PartitionLike, n: int) -> Fraction:
    """b_lambda evaluated at an integer ``n``.

    Agrees with ``b_general(lam)(n)`` but evaluates the pair entries first and
    takes the Pfaffian over the rationals, which is far cheaper for long
    partitions.
    """
    return _b_value(_normalize_b(_strict_key(lam, "b_value")), n)


@lru_cache(maxsize=None)
def _b_single_value(i: int, n: int) -> Fraction:
    return b_single(i)(n)


@lru_cache(maxsize=None)
def _b_pair_value(i: int, j: int, n: int) -> Fraction:
    if j == 0:
        return _b_single_value(i, n)
    acc = _b_single_value(i, n) * _b_single_value(j, n)
    for k in range(1, j + 1):
        term = 2 * _b_single_value(i + k, n) * _b_single_value(j - k, n)
        acc += -term if k % 2 == 1 else term
    return acc


@lru_cache(maxsize=None)
def _b_value(parts: tuple[int, ...], n: int) -> Fraction:
    k = len(parts)
    if k == 0:
        return Fraction(1)
    M = SkewMatrix.from_function(k, lambda s, t: _b_pair_value(parts[s], parts[t], n))
    return Fraction(pfaffian(M, one=Fraction(1)))
