"""Coefficient-sum bounds per degree for sup-normalized polynomials on [0,1].

Generated by scripts/gen_coeff_table.py; do not edit by hand.
"""

COEFF_SUM_BOUND = {
    0: 1,
    1: 3,
    2: 17,
    3: 100,
    4: 577,
    5: 3364,
    6: 19602,
    7: 114244,
    8: 665859,
    9: 3880899,
    10: 22619537,
}
