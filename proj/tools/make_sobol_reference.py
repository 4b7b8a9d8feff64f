#!/usr/bin/env python3
"""Unscrambled Sobol' points from scipy, for checking the direction-number loader."""
import sys

from scipy.stats import qmc

DIMS, M = 32, 8

pts = qmc.Sobol(d=DIMS, scramble=False).random_base2(M)
path = sys.argv[1] if len(sys.argv) > 1 else "tests/data/sobol_reference.txt"
with open(path, "w") as f:
    f.write(f"# scipy.stats.qmc.Sobol(d={DIMS}, scramble=False).random_base2({M}), Gray-code order\n")
    for row in pts:
        f.write(" ".join(str(int(round(x * 2**M))) for x in row) + "\n")
