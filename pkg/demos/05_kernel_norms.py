"""Exact operator norms on finite spaces via the kernel matrix.

The broom shows the radius-3/2 averaging operator with L1 norm growing
linearly in the spike count; the weak-type sweep sees the same blow-up.
"""
import numpy as np

from mmslab import (build_kernel, counting_measure, op_norm_l1, op_norm_lp,
                    riesz_interpolate, weak_type_constant)
from mmslab.gallery import BroomSpace

print("== broom kernels at radius 3/2 ==")
print("  n    L1 norm       weak(1,1)    L2 lower   interpolated L2 cap")
for n in (2, 4, 8, 16):
    s = BroomSpace(n)
    kern = build_kernel(counting_measure(s), s, 1.5)
    l1 = op_norm_l1(kern).value
    wk = weak_type_constant(kern, 1.0).value
    l2 = op_norm_lp(kern, 2.0).value
    cap = riesz_interpolate(l1, 1.0, 2.0)
    print(f"  {n:2d}   {l1:9.4f}   {wk:9.4f}   {l2:8.4f}   {cap:8.4f}")

print("\nThe L1 norm is n/2 + 1/(n+1): one dirac at a group center is spread")
print("over its n spikes, each of which averages it with weight 1/2.")
