"""Exact integer, rational and univariate-polynomial arithmetic.

Integers are Python ints and rationals are :class:`fractions.Fraction`, so
nothing here ever rounds.  :class:`UniPoly` is a small dense polynomial type
over the rationals, and :func:`pfaffian` works over any commutative ring whose
elements support ``+``, ``-`` and ``*``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Rat = Fraction
Scalar = Union[int, Fraction]


def binomial(a: int, k: int) -> int:
    """Binomial coefficient ``a(a-1)...(a-k+1) / k!`` for any integer ``a``.

    Negative ``a`` is allowed through the falling-factorial definition, which
    keeps integer evaluation consistent with :func:`poly_binomial_shifted`.
    """
    if k < 0:
        raise ValueError(f"binomial requires k >= 0, got {k}")
    if a >= 0:
        return math.comb(a, k)
    num = 1
    for i in range(k):
        num *= a - i
    return num // math.factorial(k)


def _trim(coeffs: Iterable[Scalar]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class UniPoly:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``.  The zero polynomial has an
    empty coefficient tuple and degree ``-1``.  Instances are immutable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        self._c = _trim(coeffs)

    @classmethod
    def constant(cls, c: Scalar) -> "UniPoly":
        return cls((c,))

    @classmethod
    def one(cls) -> "UniPoly":
        return cls((1,))

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def coefficient(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    @staticmethod
    def _coerce(other) -> "UniPoly | None":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        return UniPoly(x + y for x, y in zip(a, b + (0,) * (len(a) - len(b))))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self._c)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self._c)
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result, base = UniPoly.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"UniPoly({self})"

    def format(self, var: str = "n") -> str:
        if not self._c:
            return "0"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    __str__ = format


def poly_binomial_shifted(offset: int, k: int) -> UniPoly:
    """The polynomial ``C(n + offset, k)`` in the variable ``n``."""
    if k < 0:
        raise ValueError(f"poly_binomial_shifted requires k >= 0, got {k}")
    p = UniPoly.one()
    for i in range(k):
        p = p * UniPoly((offset - i, 1))
    return p * Fraction(1, math.factorial(k))


class SkewMatrix:
    """Skew-symmetric matrix of even size stored by its strict upper triangle.

    Entries below the diagonal are the negated mirror entries and the diagonal
    is zero; neither is stored.
    """

    __slots__ = ("size", "_upper", "_zero")

    def __init__(self, size: int, upper: dict[tuple[int, int], object], zero=0):
        if size < 0:
            raise ValueError("size must be nonnegative")
        self.size = size
        self._upper = dict(upper)
        self._zero = zero
        for (i, j) in self._upper:
            if not 0 <= i < j < size:
                raise ValueError(f"({i}, {j}) is not a strict upper-triangle index")

    @classmethod
    def from_function(cls, size: int, f: Callable[[int, int], object], zero=0):
        return cls(size, {(i, j): f(i, j) for i in range(size) for j in range(i + 1, size)}, zero)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], zero=0):
        size = len(rows)
        for i in range(size):
            if rows[i][i] != 0:
                raise ValueError("diagonal of a skew matrix must vanish")
            for j in range(i + 1, size):
                if rows[j][i] != -rows[i][j]:
                    raise ValueError("matrix is not skew-symmetric")
        return cls.from_function(size, lambda i, j: rows[i][j], zero)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        if i == j:
            return self._zero
        if i < j:
            return self._upper.get((i, j), self._zero)
        return -self._upper.get((j, i), self._zero)

    def to_dense(self) -> list[list]:
        return [[self[i, j] for j in range(self.size)] for i in range(self.size)]


def pfaffian(M: SkewMatrix, one=1):
    """Pfaffian by recursive expansion along the first remaining row.

    ``one`` is the multiplicative identity of the coefficient ring, returned
    for the empty matrix.  Minors are memoized by their surviving index set so
    an ``2k x 2k`` matrix costs ``O(2^(2k))`` ring operations at worst.
    """
    if M.size % 2:
        raise ValueError("pfaffian requires even size")
    memo: dict[tuple[int, ...], object] = {}

    def pf(idx: tuple[int, ...]):
        if not idx:
            return one
        hit = memo.get(idx)
        if hit is not None:
            return hit
        first, rest = idx[0], idx[1:]
        total = None
        for pos, j in enumerate(rest):
            a = M[first, j]
            if a == 0:
                continue
            term = a * pf(rest[:pos] + rest[pos + 1:])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = one * 0
        memo[idx] = total
        return total

    return pf(tuple(range(M.size)))
