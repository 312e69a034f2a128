"""Exact univariate polynomial arithmetic over the rationals.

Coefficient vectors are tuples of Fraction in ascending degree order.  All
predicates downstream (admissibility, bad sets) need reproducible answers,
so root isolation is done with Sturm sequences and dyadic bisection on
exact polynomials; floats only ever enter through exact conversion.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

Coeffs = tuple[Fraction, ...]
Rational = Union[int, float, str, Fraction]

_ZERO = Fraction(0)


def as_fraction(x: Rational) -> Fraction:
    """Convert to Fraction exactly; floats use their binary value."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def normalize(coeffs: Iterable[Rational]) -> Coeffs:
    cs = [as_fraction(c) for c in coeffs]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    if not cs:
        cs = [_ZERO]
    return tuple(cs)


def degree(coeffs: Coeffs) -> int:
    return len(coeffs) - 1


def is_zero(coeffs: Coeffs) -> bool:
    return all(c == 0 for c in coeffs)


def evaluate(coeffs: Coeffs, x: Fraction) -> Fraction:
    acc = _ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def evaluate_float(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def derivative(coeffs: Coeffs, order: int = 1) -> Coeffs:
    cs = coeffs
    for _ in range(order):
        if len(cs) == 1:
            return (_ZERO,)
        cs = tuple(k * cs[k] for k in range(1, len(cs)))
    return normalize(cs)


def add(a: Coeffs, b: Coeffs) -> Coeffs:
    n = max(len(a), len(b))
    return normalize(
        (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)
    )


def sub(a: Coeffs, b: Coeffs) -> Coeffs:
    return add(a, scale(b, Fraction(-1)))


def scale(a: Coeffs, factor: Fraction) -> Coeffs:
    return normalize(c * factor for c in a)


def shift_const(a: Coeffs, amount: Fraction) -> Coeffs:
    return normalize((a[0] + amount,) + a[1:])


def mul(a: Coeffs, b: Coeffs) -> Coeffs:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return normalize(out)


def compose_affine(a: Coeffs, off: Fraction, slope: Fraction) -> Coeffs:
    """Coefficients of s -> p(off + slope*s), exactly (Horner in poly ring)."""
    lin = normalize((off, slope))
    out: Coeffs = (_ZERO,)
    for c in reversed(a):
        out = add(mul(out, lin), (as_fraction(c),))
    return out


def _poly_divmod(a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    if is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quot = [_ZERO] * max(len(a) - len(b) + 1, 1)
    db, lead = degree(b), b[-1]
    while len(rem) - 1 >= db and any(c != 0 for c in rem):
        while len(rem) > 1 and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < db:
            break
        k = len(rem) - 1 - db
        q = rem[-1] / lead
        quot[k] = q
        for j in range(len(b)):
            rem[k + j] -= q * b[j]
        rem.pop()
    return normalize(quot), normalize(rem)


def poly_gcd(a: Coeffs, b: Coeffs) -> Coeffs:
    while not is_zero(b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if is_zero(a):
        return a
    return scale(a, 1 / a[-1])


def squarefree_part(a: Coeffs) -> Coeffs:
    if degree(a) <= 1:
        return a
    g = poly_gcd(a, derivative(a))
    if degree(g) == 0:
        return a
    q, _ = _poly_divmod(a, g)
    return q


def sturm_chain(a: Coeffs) -> list[Coeffs]:
    """Sturm sequence of the squarefree part of ``a``."""
    p = squarefree_part(a)
    chain = [p, derivative(p)]
    while not is_zero(chain[-1]) and degree(chain[-1]) > 0:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if is_zero(r):
            break
        chain.append(scale(r, Fraction(-1)))
    return [c for c in chain if not is_zero(c)]


def _variations(vals: Sequence[Fraction]) -> int:
    signs = [v for v in vals if v != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if (x > 0) != (y > 0))


def count_roots_halfopen(chain: Sequence[Coeffs], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b], by Sturm's theorem."""
    va = _variations([evaluate(c, a) for c in chain])
    vb = _variations([evaluate(c, b) for c in chain])
    return va - vb


def isolate_roots(coeffs: Coeffs, lo: Rational, hi: Rational) -> list[tuple[Fraction, Fraction]]:
    """Disjoint enclosures for every distinct real root of ``coeffs`` in [lo, hi].

    Exact rational roots hit by bisection come back as degenerate pairs
    (r, r); every other enclosure (u, v) has sign(p(u)) != sign(p(v)) on the
    squarefree part, so plain bisection refines it.
    """
    a, b = as_fraction(lo), as_fraction(hi)
    if a > b:
        raise ValueError("empty isolation interval")
    if is_zero(coeffs):
        raise ValueError("cannot isolate roots of the zero polynomial")
    p = squarefree_part(coeffs)
    if degree(p) == 0:
        return []
    if degree(p) == 1:
        root = -p[0] / p[1]
        return [(root, root)] if a <= root <= b else []
    out: list[tuple[Fraction, Fraction]] = []
    if evaluate(p, a) == 0:
        out.append((a, a))
    if b != a and evaluate(p, b) == 0:
        out.append((b, b))
    chain = sturm_chain(coeffs)

    def interior_count(u: Fraction, v: Fraction) -> int:
        n = count_roots_halfopen(chain, u, v)
        if evaluate(p, v) == 0:
            n -= 1
        return n

    stack = [(a, b, interior_count(a, b))]
    while stack:
        u, v, n = stack.pop()
        if n <= 0:
            continue
        pu, pv = evaluate(p, u), evaluate(p, v)
        if n == 1 and pu != 0 and pv != 0 and (pu > 0) != (pv > 0):
            out.append((u, v))
            continue
        m = (u + v) / 2
        if evaluate(p, m) == 0:
            out.append((m, m))
        nl = interior_count(u, m)
        nr = interior_count(m, v)
        if nl > 0:
            stack.append((u, m, nl))
        if nr > 0:
            stack.append((m, v, nr))
    out.sort()
    return out


def refine_enclosure(
    coeffs: Coeffs, lo: Fraction, hi: Fraction, width: Fraction
) -> tuple[Fraction, Fraction]:
    """Bisect a sign-change enclosure of the squarefree part down to ``width``."""
    if lo == hi:
        return lo, hi
    p = squarefree_part(coeffs)
    flo = evaluate(p, lo)
    if flo == 0:
        return lo, lo
    if evaluate(p, hi) == 0:
        return hi, hi
    neg = flo < 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = evaluate(p, mid)
        if fm == 0:
            return mid, mid
        if (fm < 0) == neg:
            lo = mid
        else:
            hi = mid
    return lo, hi


def sqrt_enclosure(x: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Dyadic enclosure of sqrt(x) of length at most ``width``, via isqrt."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0), Fraction(0)
    bits = max(1, (width.denominator // max(width.numerator, 1)).bit_length() + 2)
    m = x.numerator * x.denominator
    r = math.isqrt(m)
    if r * r == m:
        exact = Fraction(r, x.denominator)
        return exact, exact
    while True:
        s = math.isqrt(m << (2 * bits))
        den = x.denominator << bits
        lo, hi = Fraction(s, den), Fraction(s + 1, den)
        if hi - lo <= width:
            return lo, hi
        bits += 8


def _quadratic_roots(
    coeffs: Coeffs, lo: Fraction, hi: Fraction, width: Fraction
) -> list[tuple[Fraction, Fraction]]:
    c, b, a = coeffs[0], coeffs[1], coeffs[2]
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    if disc == 0:
        r = -b / (2 * a)
        return [(r, r)] if lo <= r <= hi else []
    su, sv = sqrt_enclosure(disc, width * 2 * abs(a))
    if su * su == disc:
        sv = su
    roots = []
    for sign in (-1, 1):
        u, v = (sign * su, sign * sv) if sign > 0 else (sign * sv, sign * su)
        r_lo, r_hi = (-b + u) / (2 * a), (-b + v) / (2 * a)
        if r_lo > r_hi:
            r_lo, r_hi = r_hi, r_lo
        if r_hi < lo or r_lo > hi:
            continue
        roots.append((max(r_lo, lo), min(r_hi, hi)))
    roots.sort()
    return roots


def real_roots(
    coeffs: Coeffs, lo: Rational, hi: Rational, width: Rational = Fraction(1, 10**12)
) -> list[tuple[Fraction, Fraction]]:
    w = as_fraction(width)
    a, b = as_fraction(lo), as_fraction(hi)
    p = squarefree_part(coeffs)
    if degree(p) == 2:
        return _quadratic_roots(p, a, b, w)
    return [refine_enclosure(coeffs, u, v, w) for u, v in isolate_roots(coeffs, a, b)]


def lipschitz_bound(coeffs: Coeffs, lo: Fraction, hi: Fraction) -> Fraction:
    """Coarse bound on sup |p'| over [lo, hi] via coefficient sums."""
    m = max(abs(lo), abs(hi), Fraction(1))
    d = derivative(coeffs)
    return sum((abs(c) * m**k for k, c in enumerate(d)), _ZERO)
