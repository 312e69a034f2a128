"""Polynomial phases: exact derivatives, sup-norms, sublevel bad sets,
class-membership checks, and the vertical/horizontal normalization maps."""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import polynomials as poly
from ._coeff_table import COEFF_SUM_BOUND
from .errors import DecoupError, LinearPhaseError
from .intervals import Interval
from .polynomials import Coeffs, Rational, as_fraction

_TERM_RE = re.compile(
    r"^\s*(?P<coeff>[+-]?\s*(?:\d+/\d+|\d*\.\d+|\d+)?)\s*"
    r"(?:\*?\s*s(?:\s*(?:\^|\*\*)\s*(?P<power>\d+))?)?\s*$"
)


@dataclass(frozen=True)
class PolyPhase:
    """A polynomial phase with exact rational coefficients (ascending order)."""

    coeffs: Coeffs

    def __init__(self, coeffs: Iterable[Rational]):
        object.__setattr__(self, "coeffs", poly.normalize(coeffs))
        object.__setattr__(self, "_hash", hash(self.coeffs))

    def __hash__(self) -> int:
        return self._hash  # precomputed; phases key several hot caches

    @classmethod
    def monomial(cls, power: int, scale: Rational = 1) -> "PolyPhase":
        return cls([0] * power + [scale])

    @classmethod
    def from_string(cls, text: str) -> "PolyPhase":
        """Parse phase literals like ``"1/6*s^3 - 0.5*s + 2"``."""
        chunks = re.findall(r"[+-]?[^+-]+", text.replace(" ", ""))
        if not chunks:
            raise ValueError(f"cannot parse phase literal {text!r}")
        coeffs: dict[int, Fraction] = {}
        for chunk in chunks:
            m = _TERM_RE.match(chunk)
            if not m:
                raise ValueError(f"cannot parse term {chunk!r} in {text!r}")
            raw = m.group("coeff").replace(" ", "")
            has_s = "s" in chunk
            power = int(m.group("power")) if m.group("power") else (1 if has_s else 0)
            if raw in ("", "+"):
                c = Fraction(1)
            elif raw == "-":
                c = Fraction(-1)
            else:
                c = Fraction(raw)
            if not has_s and raw in ("", "+", "-"):
                raise ValueError(f"cannot parse term {chunk!r} in {text!r}")
            coeffs[power] = coeffs.get(power, Fraction(0)) + c
        top = max(coeffs)
        return cls([coeffs.get(k, Fraction(0)) for k in range(top + 1)])

    @property
    def degree(self) -> int:
        return poly.degree(self.coeffs)

    @property
    def is_linear(self) -> bool:
        return self.degree <= 1

    def derivative(self, order: int = 1) -> "PolyPhase":
        return PolyPhase(poly.derivative(self.coeffs, order))

    def eval_exact(self, x: Rational) -> Fraction:
        return poly.evaluate(self.coeffs, as_fraction(x))

    def __call__(self, x: float) -> float:
        return poly.evaluate_float(self.float_coeffs, x)

    @property
    def float_coeffs(self) -> tuple[float, ...]:
        return _float_coeffs(self.coeffs)

    def scaled(self, factor: Rational) -> "PolyPhase":
        return PolyPhase(poly.scale(self.coeffs, as_fraction(factor)))

    def plus_linear(self, slope: Rational = 0, offset: Rational = 0) -> "PolyPhase":
        return PolyPhase(poly.add(self.coeffs, poly.normalize((offset, slope))))

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0 and self.degree > 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*s" if abs(c) != 1 else ("-s" if c < 0 else "s"))
            else:
                parts.append(f"{c}*s^{k}" if abs(c) != 1 else ("-" if c < 0 else "") + f"s^{k}")
        out = " + ".join(parts) if parts else "0"
        return out.replace("+ -", "- ")


@functools.lru_cache(maxsize=512)
def _float_coeffs(coeffs: Coeffs) -> tuple[float, ...]:
    return tuple(float(c) for c in coeffs)


@dataclass(frozen=True)
class SupBound:
    """Certified enclosure [lo, hi] for a sup, with an (approximate) argmax."""

    lo: Fraction
    hi: Fraction
    at: Fraction

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def exact(self) -> Fraction:
        """Midpoint of the enclosure; equals the sup when lo == hi."""
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class SublevelParams:
    """Parameters (d, C, sigma) of the small-curvature sublevel criterion.

    Requires C > 1 and 0 < sigma < C**(-d); phases in the class have bad sets
    with at most C components and measure at most C * sigma**(1/d) * |J|.
    """

    d: int
    const: float
    sigma: Fraction

    def __init__(self, d: int, const: float, sigma: Rational):
        if d < 1:
            raise ValueError("d must be >= 1")
        if const <= 1:
            raise ValueError("const must exceed 1")
        sig = as_fraction(sigma)
        if not 0 < sig < as_fraction(const) ** (-d):
            raise ValueError(f"sigma must lie in (0, {const}^-{d})")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "const", float(const))
        object.__setattr__(self, "sigma", sig)

    def with_sigma(self, sigma: Rational) -> "SublevelParams":
        return SublevelParams(self.d, self.const, sigma)


@dataclass(frozen=True)
class BadSet:
    """Connected components of {s in J : |phi''(s)| < threshold}.

    Components are relatively open in the parent interval: open at interior
    endpoints, closed where they meet the parent's boundary.
    """

    parent: Interval
    components: tuple[Interval, ...]
    threshold: Fraction

    @property
    def measure(self) -> Fraction:
        return sum((c.length for c in self.components), Fraction(0))

    @property
    def count(self) -> int:
        return len(self.components)

    def component_closed_sides(self, idx: int) -> tuple[bool, bool]:
        c = self.components[idx]
        return c.lo == self.parent.lo, c.hi == self.parent.hi


@dataclass(frozen=True)
class AffineNormalization:
    """Vertical dilation by lam composed with the frequency shear t -> t + c*s + d."""

    lam: float
    shear_c: float
    shift_d: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("vertical dilation must be positive")


def eval_deriv(phase: PolyPhase, s: float, order: int = 0) -> float:
    """Evaluate the order-th derivative at s (Horner on exact coefficients)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return float(poly.evaluate(poly.derivative(phase.coeffs, order), as_fraction(s)))


@functools.lru_cache(maxsize=4096)
def _sup_abs_cached(coeffs: Coeffs, lo: Fraction, hi: Fraction, width: Fraction) -> SupBound:
    if lo == hi:
        v = abs(poly.evaluate(coeffs, lo))
        return SupBound(v, v, lo)
    cands: list[tuple[Fraction, Fraction, Fraction]] = []
    for endpoint in (lo, hi):
        v = abs(poly.evaluate(coeffs, endpoint))
        cands.append((v, v, endpoint))
    if poly.degree(coeffs) >= 2:
        lip = poly.lipschitz_bound(coeffs, lo, hi)
        for u, v in poly.real_roots(poly.derivative(coeffs), lo, hi, width):
            base = max(abs(poly.evaluate(coeffs, u)), abs(poly.evaluate(coeffs, v)))
            cands.append((base, base + lip * (v - u), (u + v) / 2))
    best_lo = max(c[0] for c in cands)
    best_hi = max(c[1] for c in cands)
    at = max(cands, key=lambda c: c[0])[2]
    return SupBound(best_lo, best_hi, at)


def sup_abs_deriv(
    phase: PolyPhase,
    interval: Interval,
    order: int,
    width: Rational = Fraction(1, 10**12),
) -> SupBound:
    """Certified sup of |phase^(order)| over the interval.

    Candidates are the endpoints plus the isolated real critical points of
    the next derivative; no sampling is involved.  The returned enclosure
    collapses to an exact rational whenever the sup is attained at an
    endpoint or a rational critical point.
    """
    d = poly.derivative(phase.coeffs, order)
    w = as_fraction(width) * max(interval.length, Fraction(1))
    return _sup_abs_cached(d, interval.lo, interval.hi, w)


def bad_set(
    phase: PolyPhase,
    parent: Interval,
    params: SublevelParams,
    width: Rational = Fraction(1, 10**12),
) -> BadSet:
    """Sublevel region where |phi''| drops below sigma*(sup|phi''| + |J| sup|phi'''|).

    Component endpoints are isolated roots of phi'' -+ threshold refined to
    ``width * |J|``; classification of each gap is by exact midpoint sign.
    """
    second = poly.derivative(phase.coeffs, 2)
    if poly.is_zero(second):
        return BadSet(parent, (), Fraction(0))
    sup2 = _sup_abs_cached(second, parent.lo, parent.hi, as_fraction(width) * parent.length)
    third = poly.derivative(second)
    if poly.is_zero(third):
        sup3 = SupBound(Fraction(0), Fraction(0), parent.lo)
    else:
        sup3 = _sup_abs_cached(third, parent.lo, parent.hi, as_fraction(width) * parent.length)
    threshold = params.sigma * (sup2.exact + parent.length * sup3.exact)
    if threshold == 0:
        return BadSet(parent, (), Fraction(0))

    w = as_fraction(width) * parent.length
    boundary: set[Fraction] = {parent.lo, parent.hi}
    for shifted in (poly.shift_const(second, -threshold), poly.shift_const(second, threshold)):
        for u, v in poly.real_roots(shifted, parent.lo, parent.hi, w):
            boundary.add((u + v) / 2)
    pts = sorted(boundary)
    comps: list[Interval] = []
    for a, b in zip(pts, pts[1:]):
        mid = (a + b) / 2
        inside = abs(poly.evaluate(second, mid)) < threshold
        if inside:
            if comps and comps[-1].hi == a:
                comps[-1] = Interval(comps[-1].lo, b)
            else:
                comps.append(Interval(a, b))
    return BadSet(parent, tuple(comps), threshold)


@dataclass(frozen=True)
class SampleCheck:
    sigma: Fraction
    interval: Interval
    count: int
    measure: float
    count_bound: float
    measure_bound: float

    @property
    def ok(self) -> bool:
        return self.count <= self.count_bound and self.measure <= self.measure_bound


@dataclass(frozen=True)
class MembershipReport:
    params_d: int
    params_const: float
    checks: tuple[SampleCheck, ...]

    @property
    def violations(self) -> tuple[SampleCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_class_membership(
    phase: PolyPhase,
    params: SublevelParams,
    sample_sigmas: Sequence[Rational],
    sample_intervals: Sequence[Interval],
    width: Rational = Fraction(1, 10**9),
) -> MembershipReport:
    """Check the sublevel-class bounds over sampled (sigma, J) pairs.

    Violations are recorded in the report, not raised: they are data about
    the calibration of the class constant.
    """
    checks = []
    for sigma in sample_sigmas:
        p = params.with_sigma(sigma)
        for j in sample_intervals:
            b = bad_set(phase, j, p, width)
            measure_bound = params.const * float(p.sigma) ** (1 / params.d) * float(j.length)
            checks.append(
                SampleCheck(
                    sigma=p.sigma,
                    interval=j,
                    count=b.count,
                    measure=float(b.measure),
                    count_bound=params.const,
                    measure_bound=measure_bound,
                )
            )
    return MembershipReport(params.d, params.const, tuple(checks))


def markov_coeff_bound(phase: PolyPhase) -> Fraction:
    """Sum of |coefficients| of phi'', for phases with sup_{[0,1]}|phi''| = 1.

    The result is checked against the tabulated degree-only bound (extremal
    values come from Chebyshev polynomials shifted to [0,1]; the table is
    produced by scripts/gen_coeff_table.py).
    """
    second = poly.derivative(phase.coeffs, 2)
    lam = sum((abs(c) for c in second), Fraction(0))
    deg = poly.degree(second)
    if deg not in COEFF_SUM_BOUND:
        raise DecoupError(f"no coefficient bound tabulated for degree {deg}")
    if lam > COEFF_SUM_BOUND[deg]:
        raise DecoupError(
            f"coefficient sum {lam} exceeds the degree-{deg} bound "
            f"{COEFF_SUM_BOUND[deg]}; is the phase sup-normalized?"
        )
    return lam


def normalize_vertical(phase: PolyPhase, width: Rational = Fraction(1, 10**12)) -> tuple[PolyPhase, float]:
    """Divide by sup_{[0,1]}|phi''| so the image has unit curvature sup."""
    if phase.derivative(2).degree == 0 and phase.derivative(2).coeffs[0] == 0:
        raise LinearPhaseError("phase has no curvature to normalize")
    sup = sup_abs_deriv(phase, Interval(0, 1), 2, width)
    factor = sup.exact
    if factor == 0:
        raise LinearPhaseError("phase has no curvature to normalize")
    return phase.scaled(1 / factor), float(factor)


def rescale_to_unit(phase: PolyPhase, j: Interval) -> PolyPhase:
    """Pull the phase over J = [alpha, beta] back to [0,1]:
    s' -> (beta-alpha)^{-1} * phi(alpha + (beta-alpha) s'), exactly."""
    if j.length == 0:
        raise ValueError("cannot rescale over an empty interval")
    composed = poly.compose_affine(phase.coeffs, j.lo, j.length)
    return PolyPhase(poly.scale(composed, 1 / j.length))


def taylor_quadratic(phase: PolyPhase, c: Rational) -> PolyPhase:
    """Quadratic Taylor polynomial of the phase at c, expanded exactly."""
    fc = as_fraction(c)
    v0 = poly.evaluate(phase.coeffs, fc)
    v1 = poly.evaluate(poly.derivative(phase.coeffs), fc)
    v2 = poly.evaluate(poly.derivative(phase.coeffs, 2), fc)
    # v0 + v1 (s-c) + v2/2 (s-c)^2
    out = poly.add(
        poly.normalize((v0 - v1 * fc + v2 * fc * fc / 2, v1 - v2 * fc, v2 / 2)),
        (Fraction(0),),
    )
    return PolyPhase(out)


@dataclass(frozen=True)
class TaylorCheck:
    sup_error: float
    bound: float
    ok: bool


def taylor_remainder_check(
    phase: PolyPhase, c: Rational, h: Rational, width: Rational = Fraction(1, 10**12)
) -> TaylorCheck:
    """Verify sup_{|s-c|<=h} |phi - p_c| <= sup|phi'''| h^3 / 6 for the
    quadratic Taylor polynomial p_c."""
    fc, fh = as_fraction(c), as_fraction(h)
    window = Interval(fc - fh, fc + fh)
    diff = poly.sub(phase.coeffs, taylor_quadratic(phase, fc).coeffs)
    if poly.is_zero(diff):
        return TaylorCheck(0.0, 0.0, True)
    err = _sup_abs_cached(diff, window.lo, window.hi, as_fraction(width) * max(fh, Fraction(1)))
    sup3 = sup_abs_deriv(phase, window, 3, width)
    bound = sup3.hi * fh**3 / 6
    return TaylorCheck(float(err.exact), float(bound), err.lo <= bound)
