"""Averaging and maximal operators in action.

The window average of a point mass at 1 under the exponential law has two
analytic branches; the centered maximal function on finite spaces is an
exact enumeration over the distinct balls.
"""
import math

import numpy as np

from mmslab import (DiracFunction, average, counting_measure,
                    directional_average_right, exponential_measure,
                    maximal_centered, maximal_uncentered)
from mmslab.gallery import BroomSpace, onedir_measure
from mmslab.spaces import EuclideanSpace

exp_m = exponential_measure()
line = EuclideanSpace(1)
probe = DiracFunction(1.0)

print("== A_1 of a point mass at 1, exponential law ==")
for x in (0.25, 0.5, 0.99, 1.01, 1.5, 1.9):
    v = average(exp_m, line, 1.0, probe, x)
    branch = 1 / (1 - math.exp(-1 - x)) if x < 1 else math.exp(x) / (math.e - math.exp(-1))
    print(f"  x={x:4.2f}: A_1 delta_1 = {v:.6f}   (branch formula {branch:.6f})")

print("\n== centered maximal function on the broom ==")
b = BroomSpace(4)
cnt = counting_measure(b)
f = DiracFunction(b.index(4, 0))
for lab in [(4, 1), (4, 0), (3, 1), (1, 0)]:
    x = b.index(*lab)
    print(f"  M(delta_center4) at {lab}: {maximal_centered(cnt, b, f, x):.4f}"
          f"   uncentered {maximal_uncentered(cnt, b, f, x):.4f}")

print("\n== one-directional window averages ==")
nu = onedir_measure(10)
n = 5
for x in (10.0, 10.5, 10.9):
    v = directional_average_right(nu, 1.0, DiracFunction(2 * n + 1.0), x)
    print(f"  x={x}: window [x, x+1] average of delta_11 = {v:.4f} "
          f">= {1 / (2 * n + 1 - x + math.exp(-2 * n)):.4f}")
