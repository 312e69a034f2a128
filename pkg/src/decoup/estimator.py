"""Empirical decoupling-ratio estimation, the exact mean-value oracle for
exponential-sum moments, and bad-set partition splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, InternalInvariantError, NotSubAdmissible
from .fields import (
    GridField,
    GridSpec,
    _field_from_atoms,
    default_grid,
    lp_norms,
    sample_extension,
)
from .intervals import Interval
from .partitions import Mode, Partition, is_sub_admissible
from .phases import BadSet, PolyPhase
from .polynomials import Rational, as_fraction

COEFF_MODELS = ("unimodular", "gaussian", "ones")


@dataclass(frozen=True)
class TrialSpec:
    """Coefficient model and resolution knobs for ratio trials."""

    model: str = "unimodular"
    nodes_per_cell: int = 4
    box_mult: float = 1.0

    def __post_init__(self):
        if self.model not in COEFF_MODELS:
            raise ValueError(f"unknown coefficient model {self.model!r}")
        if self.nodes_per_cell < 4:
            raise ValueError("at least 4 nodes per cell are required")


@dataclass(frozen=True)
class DecouplingReport:
    phase: str
    partition: str
    p: float
    delta: float
    trials: int
    ratios: tuple[float, ...]
    max_ratio: float
    mean_ratio: float
    seed: int
    model: str
    grid: tuple[int, int]
    box: tuple[float, float]
    oversampling: tuple[float, float]

    def __post_init__(self):
        if any(r < 0 for r in self.ratios):
            raise ValueError("ratios must be nonnegative")
        if self.max_ratio < self.mean_ratio - 1e-12:
            raise ValueError("max ratio below mean ratio")


def _draw_coeffs(model: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if model == "unimodular":
        return np.exp(2j * np.pi * rng.random(n))
    if model == "gaussian":
        return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2)
    return np.ones(n, dtype=complex)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(trial,)))


def decoupling_ratios(
    phase: PolyPhase,
    partition: Partition,
    ps: Sequence[float],
    delta: Rational,
    trials: int = 16,
    spec: TrialSpec = TrialSpec(),
    seed: int = 0,
    grid: GridSpec | None = None,
    check: bool = True,
    mode: Mode = "taylor",
) -> dict[float, DecouplingReport]:
    """Per-trial ratios ||f||_p / (sum_I ||f_I||_p^2)^(1/2) for each p.

    Per-cell norms come from the unit-coefficient cell fields (the
    coefficient profile is constant per cell, so ||f_I||_p scales by
    |c_I|); the left side is one lattice synthesis per trial.  Trials are
    reproducible bit for bit: trial t uses the stream spawned from
    (seed, t), independent of execution order.
    """
    d = as_fraction(delta)
    if not all(1 <= p <= 6 for p in ps):
        raise ValueError("p values must lie in [1, 6]")
    if check:
        flag = partition.sub_admissible
        if flag is None:
            flag = is_sub_admissible(phase, partition, d, mode)
        if not flag:
            raise NotSubAdmissible(
                "partition is not sub-admissible at delta; pass check=False "
                "to run a negative control"
            )
    if grid is None:
        grid = default_grid(phase, d, spec.box_mult)

    base = sample_extension(phase, partition, np.ones(partition.n_cells),
                            grid, spec.nodes_per_cell, probe=False)
    meta = base.freq
    n_cells = partition.n_cells

    unit_norms = {p: np.zeros(n_cells) for p in ps}
    for i in range(n_cells):
        sel = meta.cells == i
        cell_field = GridField(
            _field_from_atoms(grid, meta.sbins[sel], meta.tbins[sel], meta.amps[sel]),
            grid,
        )
        for p, val in zip(ps, lp_norms(cell_field, ps)):
            unit_norms[p][i] = val

    ratios: dict[float, list[float]] = {p: [] for p in ps}
    for t in range(trials):
        rng = _trial_rng(seed, t)
        cvec = _draw_coeffs(spec.model, n_cells, rng)
        amps = cvec[meta.cells] * meta.amps
        field = GridField(_field_from_atoms(grid, meta.sbins, meta.tbins, amps), grid)
        mags = np.abs(cvec)
        lhs_all = lp_norms(field, ps)
        for p, lhs in zip(ps, lhs_all):
            rhs = math.sqrt(float(np.sum((mags * unit_norms[p]) ** 2)))
            ratios[p].append(lhs / rhs if rhs > 0 else 0.0)

    out = {}
    for p in ps:
        rs = tuple(ratios[p])
        out[p] = DecouplingReport(
            phase=str(phase),
            partition=partition.label or f"{n_cells}-cells",
            p=float(p),
            delta=float(d),
            trials=trials,
            ratios=rs,
            max_ratio=max(rs),
            mean_ratio=sum(rs) / len(rs),
            seed=seed,
            model=spec.model,
            grid=(grid.n_x, grid.n_y),
            box=(float(grid.box_x), float(grid.box_y)),
            oversampling=base.oversampling,
        )
    return out


def decoupling_ratio(
    phase: PolyPhase,
    partition: Partition,
    p: float,
    delta: Rational,
    trials: int = 16,
    spec: TrialSpec = TrialSpec(),
    seed: int = 0,
    grid: GridSpec | None = None,
    check: bool = True,
    mode: Mode = "taylor",
) -> DecouplingReport:
    return decoupling_ratios(phase, partition, (p,), delta, trials, spec, seed,
                             grid, check, mode)[p]


def mean_value_count(n: int, d: int, k: int) -> int:
    """Exact number of 2k-tuples in [1, n]^(2k) whose first and k-th power
    sums agree between the two halves; brute force over k-tuples hashed by
    their power-sum pair."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > 128 or k not in (2, 3):
        raise BudgetExceeded(f"mean value count supports n <= 128, k in {{2,3}}")
    if d < 1 or n**d * k > 2**62:
        raise BudgetExceeded(f"power sums overflow for d = {d}")
    vals = np.arange(1, n + 1, dtype=np.int64)
    pows = vals**d
    if k == 2:
        s1 = (vals[:, None] + vals[None, :]).ravel()
        sd = (pows[:, None] + pows[None, :]).ravel()
    else:
        s1 = (vals[:, None, None] + vals[None, :, None] + vals[None, None, :]).ravel()
        sd = (pows[:, None, None] + pows[None, :, None] + pows[None, None, :]).ravel()
    key = s1 * (int(sd.max()) + 1) + sd
    _, counts = np.unique(key, return_counts=True)
    return int(np.sum(counts.astype(object) ** 2))


@dataclass(frozen=True)
class BadSetSplit:
    """Cells inside the bad set, outside it, and straddling its boundary."""

    inside: tuple[int, ...]
    outside: tuple[int, ...]
    straddle: tuple[int, ...]


def split_by_badset(partition: Partition, badset: BadSet) -> BadSetSplit:
    """Classify cells against the bad-set components.

    Components are relatively open in the parent: a cell lies inside only
    if a single component contains it (openness checked except where the
    component meets the parent boundary); it is outside when no component
    meets its interior.  The straddler count is at most two per component.
    """
    inside, outside, straddle = [], [], []
    parent = badset.parent
    for idx, cell in enumerate(partition.cells):
        contained = False
        touched = False
        for comp in badset.components:
            closed_lo = comp.lo == parent.lo
            closed_hi = comp.hi == parent.hi
            if comp.overlaps_interior(cell):
                touched = True
            lo_ok = comp.lo < cell.lo or (comp.lo == cell.lo and closed_lo)
            hi_ok = cell.hi < comp.hi or (cell.hi == comp.hi and closed_hi)
            if lo_ok and hi_ok:
                contained = True
        if contained:
            inside.append(idx)
        elif touched:
            straddle.append(idx)
        else:
            outside.append(idx)
    if len(straddle) > 2 * badset.count:
        raise InternalInvariantError(
            f"{len(straddle)} straddling cells exceed twice the component "
            f"count {badset.count}"
        )
    return BadSetSplit(tuple(inside), tuple(outside), tuple(straddle))


@dataclass(frozen=True)
class CalibrationResult:
    d: int
    suggested_const: float
    max_components: int
    max_measure_ratio: float
    samples: int


def calibrate_const(
    phases: Sequence[PolyPhase],
    d: int,
    samples_per_phase: int = 20,
    seed: int = 0,
    provisional: float = 64.0,
) -> CalibrationResult:
    """Empirical calibration of the sublevel-class constant: observe the
    worst component count and measure ratio |B| / (sigma^(1/d) |J|) over a
    random (sigma, J) corpus and suggest twice the observed worst."""
    from .phases import SublevelParams, bad_set

    rng = np.random.default_rng(seed)
    worst_count = 0
    worst_ratio = 0.0
    total = 0
    sigma_cap = Fraction(1, int(provisional)) ** d
    for phase in phases:
        if phase.derivative(2).coeffs == (Fraction(0),):
            continue
        for _ in range(samples_per_phase):
            sigma = sigma_cap * Fraction(int(rng.integers(1, 2**20)), 2**20)
            lo = Fraction(int(rng.integers(0, 2**10)), 2**11)
            hi = Fraction(int(rng.integers(2**10, 2**11 + 1)), 2**11)
            j = Interval(lo, hi)
            b = bad_set(phase, j, SublevelParams(d, provisional, sigma),
                        Fraction(1, 10**9))
            worst_count = max(worst_count, b.count)
            ratio = float(b.measure) / (float(sigma) ** (1 / d) * float(j.length))
            worst_ratio = max(worst_ratio, ratio)
            total += 1
    suggested = max(2.0, 2 * worst_count, 2 * worst_ratio)
    return CalibrationResult(d, suggested, worst_count, worst_ratio, total)
