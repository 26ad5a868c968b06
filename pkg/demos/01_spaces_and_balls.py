"""Tour of the point universes: distances, balls, intersection oracles.

Run:  python demos/01_spaces_and_balls.py
"""
import numpy as np

from mmslab import (Ball, EuclideanSpace, PathGraphSpace, UltrametricSpace,
                    balls_intersect, contains, distance)
from mmslab.gallery import BroomSpace

print("== euclidean l_q spaces ==")
for q in (1, 2, np.inf):
    s = EuclideanSpace(2, q=q)
    print(f"  l_{q}: d((0,0),(3,4)) = {distance(s, (0, 0), (3, 4))}")

print("\n== open versus closed balls ==")
line = EuclideanSpace(1)
print("  1.0 in open B(0,1):  ", contains(line, Ball(0.0, 1.0), 1.0))
print("  1.0 in closed B(0,1):", contains(line, Ball(0.0, 1.0, closed=True), 1.0))

print("\n== a path-metric graph ==")
g = PathGraphSpace(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 2.2)])
print("  d(0,3) routes through the shortcut edge:", distance(g, 0, 3))

print("\n== the broom: spikes meet only at their center ==")
b = BroomSpace(5)
print("  tip to own center:     ", distance(b, b.index(4, 1), b.index(4, 0)))
print("  tip to sibling tip:    ", distance(b, b.index(4, 1), b.index(4, 2)))
print("  tip to next-group tip: ", distance(b, b.index(4, 1), b.index(5, 1)))

print("\n== ultrametric balls are equivalence classes ==")
u = UltrametricSpace(5, 1.0)
ball = Ball(0, 1.5)
print("  members of B(0, 1.5):", np.nonzero(u.members(ball))[0].tolist())
print("  members of B(3, 1.5):", np.nonzero(u.members(Ball(3, 1.5)))[0].tolist())

print("\n== intersection oracle with provenance ==")
res = balls_intersect(line, Ball(0.0, 1.0), Ball(1.5, 0.9))
print(f"  B(0,1) meets B(1.5,0.9): hit={bool(res)} exact={res.exact}")
res = balls_intersect(line, Ball(0.0, 1.0), Ball(3.0, 1.0))
print(f"  B(0,1) meets B(3,1):     hit={bool(res)} exact={res.exact}")
