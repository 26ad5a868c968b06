"""Local comparability versus doubling across the measure gallery.

The exponential law is comparable at each fixed radius (constant e^r) but
not uniformly; the ultrametric case is trivially comparable with constant 1;
the arc-connected curve is comparable (constant 2) yet fails doubling.
"""
import math

import numpy as np

from mmslab import (comparability_sup, counting_measure, doubling_constant,
                    exponential_measure, local_comparability)
from mmslab.gallery import CurveMeasure, CurveSpace, build_infinite_broom
from mmslab.measures import Ball
from mmslab.spaces import EuclideanSpace, UltrametricSpace

exp_m = exponential_measure()
line = EuclideanSpace(1)

print("== exponential: C(r) = e^r blows up with the radius ==")
for r in (0.5, 1.0, 2.0, 3.0):
    est = local_comparability(exp_m, line, r)
    print(f"  r={r}: estimate {est.value:10.4f}   e^r = {math.exp(r):10.4f}")

print("\n== ultrametric: comparability is free ==")
u = UltrametricSpace(6, 1.0)
est = comparability_sup(counting_measure(u), u, [0.5, 1.0 + 1e-9, 2.0])
print(f"  C(mu) = {est.value} ({est.direction})")

print("\n== the curve with the growing density: comparable, not doubling ==")
xm = 60.0
cm, cs = CurveMeasure(xm), CurveSpace(xm)
for x in (10.0, 20.0, 40.0):
    ratio = cm.ball_mass(cs, Ball((x, 0.0), 2.0)) / cm.ball_mass(cs, Ball((x, 0.0), 1.0))
    print(f"  doubling ratio at ({x:.0f},0), r=1: {ratio:.1f}")
edge = []
for r in (0.25, 0.5, 1.0):
    a, bpt = (xm, 1.0), (xm - r * (1 - 1e-9), 1.0)
    edge.append(cm.ball_mass(cs, Ball(bpt, r)) / cm.ball_mass(cs, Ball(a, r)))
print(f"  comparability witnesses near the edge: {[round(v, 4) for v in edge]} (toward 2)")

print("\n== the point broom: comparable with constant 1, not geometrically doubling ==")
e = build_infinite_broom(24)
table = e.verify()
for row in table:
    print(f"  {row['expectation']}: {row['value']} (pass={row['passed']})")
