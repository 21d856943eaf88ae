"""Exact rational scalars, vectors and matrices.

Scalars are ``gmpy2.mpq`` values, which are always stored in lowest terms
with a positive denominator. Vectors are tuples of scalars and matrices are
tuples of row vectors, so every value is immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

Rational = type(mpq())
RatVector = tuple
RatMatrix = tuple

ZERO = mpq(0)
ONE = mpq(1)


class RationalParseError(ValueError):
    """A string or number could not be read as an exact rational."""


def Q(value) -> Rational:
    """Convert ``value`` to an exact rational.

    Accepts ints, ``Fraction``/``mpq`` values and strings of the form
    ``"p/q"`` or ``"p"``. Floats are rejected: they would silently smuggle
    rounding error into exact predicates.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise RationalParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, _, den = text.partition("/")
            if not den:
                return mpq(int(num))
            d = int(den)
            if d == 0:
                raise ZeroDivisionError
            return mpq(int(num), d)
        except (ValueError, ZeroDivisionError):
            raise RationalParseError(f"not a rational: {value!r}") from None
    if type(value).__name__ == "mpz":
        return mpq(value)
    raise RationalParseError(f"not a rational: {value!r}")


def vec(entries: Iterable) -> RatVector:
    return tuple(Q(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> RatMatrix:
    out = tuple(vec(r) for r in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("matrix rows have unequal length")
    return out


def zeros(n: int) -> RatVector:
    return (ZERO,) * n


def unit(n: int, i: int) -> RatVector:
    """The ``i``-th standard basis vector of length ``n`` (0-based)."""
    return tuple(ONE if k == i else ZERO for k in range(n))


def dot(a: Sequence, b: Sequence) -> Rational:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def add(a: Sequence, b: Sequence) -> RatVector:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> RatVector:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def smul(lam, a: Sequence) -> RatVector:
    lam = Q(lam)
    return tuple(lam * x for x in a)


def neg(a: Sequence) -> RatVector:
    return tuple(-x for x in a)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], n: int) -> RatVector:
    acc = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for k, x in enumerate(v):
                if x:
                    acc[k] += c * x
    return tuple(acc)


def support(a: Sequence) -> frozenset:
    """Indices of the nonzero entries of ``a``."""
    return frozenset(i for i, x in enumerate(a) if x)


def _integer_rows(rows: Iterable[Sequence]) -> list[list]:
    out = []
    for r in rows:
        m = lcm(*(int(Q(x).denominator) for x in r)) if len(r) else 1
        out.append([mpz(Q(x).numerator) * (m // int(Q(x).denominator)) for x in r])
    return out


def rank(rows: Iterable[Sequence]) -> int:
    """Exact rank over the rationals by fraction-free (Bareiss) elimination.

    Each row is first cleared of denominators, which does not change the
    rank; elimination then runs entirely over the integers.
    """
    m = [r for r in _integer_rows(rows) if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    nrows = len(m)
    r = 0
    prev = mpz(1)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            mi = m[i]
            f = mi[c]
            # Bareiss step: the division by the previous pivot is exact.
            m[i] = [(p * mi[k] - f * m[r][k]) // prev for k in range(ncols)]
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def rref(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over the rationals and the pivot columns."""
    m = [list(map(Q, r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[RatVector]:
    """Basis of ``{x : row . x = 0 for every row}``, one vector per free column."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [unit(ncols, i) for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def in_span(v: Sequence, rows: Sequence[Sequence]) -> bool:
    return rank(list(rows) + [v]) == rank(rows)


def fmt(x) -> str:
    """Wire format of a rational: ``"p/q"``, with ``q`` omitted when 1."""
    return str(Q(x))


def fmt_vec(v: Sequence) -> list[str]:
    return [fmt(x) for x in v]


def parse_vec(items) -> RatVector:
    if not isinstance(items, (list, tuple)):
        raise RationalParseError(f"expected a list of rationals, got {type(items).__name__}")
    return vec(items)
