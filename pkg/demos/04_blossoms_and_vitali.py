"""Blossoms (neighborhood enlargements) and the greedy covering argument.

On the line Bl(x,r,r) and Blu(x,r,r) are just the 2r and 3r balls; the
greedy disjointification then loses at most the blossom-constant factor of
mass, which the random-family sweep visibly respects.
"""
import numpy as np

from mmslab import (Ball, blossom_constant, blossom_mass, counting_measure,
                    lebesgue_measure, vitali_select)
from mmslab.gallery import BroomSpace
from mmslab.spaces import EuclideanSpace

leb = lebesgue_measure()
line = EuclideanSpace(1)

print("== blossoms on the line ==")
print("  |Bl(B(0,1), 1)|  =", blossom_mass(leb, line, Ball(0.0, 1.0), 1.0))
print("  |Blu(B(0,1), 1)| =", blossom_mass(leb, line, Ball(0.0, 1.0), 1.0, uncentered=True))
est = blossom_constant(leb, line, centers=[0.0, 2.0], radii=[0.5, 1.0, 3.0])
print("  blossom constant on probes:", est.value)

print("\n== greedy selection on a hand-made family ==")
balls = [Ball(0.0, 1.0), Ball(3.0, 1.0), Ball(1.5, 0.9)]
res = vitali_select(leb, line, balls)
print(f"  kept {res.selected}, union ratio {res.ratio:.4f} <= reference {res.k_reference}")

print("\n== random families on the broom ==")
s = BroomSpace(6)
cnt = counting_measure(s)
rng = np.random.default_rng(1)
worst = 0.0
for _ in range(50):
    fam = [Ball(int(rng.integers(0, len(s.universe))), float(rng.uniform(0.3, 5.0)))
           for _ in range(25)]
    r = vitali_select(cnt, s, fam)
    worst = max(worst, r.ratio / r.k_reference)
print(f"  worst ratio/reference over 50 seeds: {worst:.3f} (must stay <= 1)")
