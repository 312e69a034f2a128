#!/usr/bin/env python3
"""Generate the per-degree coefficient-sum bounds used by markov_coeff_bound.

For each degree n we bound  max { sum_k |a_k| : deg q <= n, sup_{[0,1]}|q| <= 1 }.
The sup-norm ball is relaxed to finitely many grid constraints |q(s_i)| <= 1,
which can only enlarge the feasible set, so the LP value is a safe upper
bound.  For every fixed sign pattern sigma the objective sigma . a is linear,
so the max over the ball is the max of 2^n LPs (sigma and -sigma coincide).

The extremal polynomials are the Chebyshev polynomials shifted to [0,1]; the
LP values reproduce their coefficient sums, which we also compute exactly as
a cross-check.  Output is written to src/decoup/_coeff_table.py.
"""

from __future__ import annotations

import itertools
import math
import pathlib

import numpy as np
from scipy.optimize import linprog

MAX_DEGREE = 10
GRID = 4097


def shifted_chebyshev(n: int) -> list[int]:
    """Integer coefficients of T_n(2s-1), ascending."""
    t_prev, t_cur = [1], [-1, 2]
    if n == 0:
        return t_prev
    for _ in range(n - 1):
        # T_{k+1} = 2(2s-1) T_k - T_{k-1}
        doubled = [0] + [4 * c for c in t_cur]
        for i, c in enumerate(t_cur):
            doubled[i] -= 2 * c
        nxt = doubled
        for i, c in enumerate(t_prev):
            nxt[i] -= c
        t_prev, t_cur = t_cur, nxt
    return t_cur


def lp_bound(n: int) -> float:
    # Chebyshev-distributed grid keeps the relaxation tight near the endpoints.
    theta = np.linspace(0.0, math.pi, GRID)
    s = 0.5 * (1.0 - np.cos(theta))
    vander = np.vander(s, n + 1, increasing=True)
    a_ub = np.vstack([vander, -vander])
    b_ub = np.ones(2 * GRID)
    best = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=n):
        sigma = np.array((1.0,) + signs)
        res = linprog(-sigma, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * (n + 1),
                      method="highs")
        if not res.success:
            raise RuntimeError(f"LP failed at degree {n}: {res.message}")
        best = max(best, -res.fun)
    return best


def main() -> None:
    rows = []
    for n in range(MAX_DEGREE + 1):
        cheb = sum(abs(c) for c in shifted_chebyshev(n))
        lp = lp_bound(n)
        bound = max(int(math.ceil(lp - 1e-6)), cheb)
        rows.append((n, bound, cheb, lp))
        print(f"degree {n:2d}: bound {bound}, chebyshev sum {cheb}, lp {lp:.6f}")

    out = pathlib.Path(__file__).resolve().parents[1] / "src" / "decoup" / "_coeff_table.py"
    lines = [
        '"""Coefficient-sum bounds per degree for sup-normalized polynomials on [0,1].',
        "",
        "Generated by scripts/gen_coeff_table.py; do not edit by hand.",
        '"""',
        "",
        "COEFF_SUM_BOUND = {",
    ]
    for n, bound, _, _ in rows:
        lines.append(f"    {n}: {bound},")
    lines.append("}")
    lines.append("")
    out.write_text("\n".join(lines))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
