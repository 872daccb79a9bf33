"""Exact rational helpers shared by the geometry kernel.

Everything here works on :class:`fractions.Fraction` or plain Python ints.
Integer-only routines (Bareiss determinant, primitive vectors) are used on the
hot paths because they are several times faster than Fraction arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

Vec = tuple  # tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, floats (exactly) and ``"p/q"`` strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def vec(values: Iterable) -> Vec:
    return tuple(to_fraction(v) for v in values)


def fraction_to_json(q: Fraction):
    """Integers stay integers; everything else becomes a ``"p/q"`` string."""
    q = to_fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def smul(s, a: Sequence) -> Vec:
    return tuple(s * x for x in a)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v.denominator)
    return out


def primitive(row: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = 0
    for x in row:
        g = math.gcd(g, x)
    if g <= 1:
        return tuple(row)
    return tuple(x // g for x in row)


def integer_row(row: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    m = lcm_of_denominators(row)
    return primitive([int(x * m) for x in row])


def det_int(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    a = [list(r) for r in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    rows = [list(r) for r in matrix]
    if not rows:
        return Fraction(1)
    scale = 1
    int_rows = []
    for r in rows:
        m = lcm_of_denominators(r)
        scale *= m
        int_rows.append([int(x * m) for x in r])
    return Fraction(det_int(int_rows), scale)


def rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form. Returns ``(rows, pivot_columns)``."""
    a = [list(map(to_fraction, r)) for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Basis of ``{x : A x = 0}``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -red[r][f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vec:
    """Solve a square nonsingular system exactly."""
    n = len(a)
    aug = [list(map(to_fraction, row)) + [to_fraction(bi)] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(red[i][n] for i in range(n))


def inverse(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(map(to_fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def sqrt_bounds(q, bits: int = 60) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2**-bits`` (roughly)."""
    q = to_fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    num, den = q.numerator, q.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    m = num * den
    s = math.isqrt(m)
    if s * s == m:
        exact = Fraction(s, den)
        return exact, exact
    scale = 1 << bits
    t = math.isqrt(m * scale * scale)
    return Fraction(t, den * scale), Fraction(t + 1, den * scale)


def sqrt_upper(q, bits: int = 60) -> Fraction:
    return sqrt_bounds(q, bits)[1]


def sqrt_lower(q, bits: int = 60) -> Fraction:
    return sqrt_bounds(q, bits)[0]


def root_bounds(q, k: int, bits: int = 60) -> tuple[Fraction, Fraction]:
    """Rational bounds on the positive real k-th root of ``q >= 0``."""
    q = to_fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return Fraction(0), Fraction(0)
    approx = Fraction(float(q) ** (1.0 / k)).limit_denominator(1 << bits)
    if approx ** k == q:
        return approx, approx
    step = max(approx, Fraction(1)) / (1 << bits)
    lo = approx
    while lo > 0 and lo ** k > q:
        lo -= step
        step *= 2
    lo = max(lo, Fraction(0))
    step = max(approx, Fraction(1)) / (1 << bits)
    hi = approx
    while hi ** k < q:
        hi += step
        step *= 2
    return lo, hi


def as_float_array(points: Sequence[Sequence[Fraction]]) -> np.ndarray:
    return np.array([[float(x) for x in p] for p in points], dtype=float)
