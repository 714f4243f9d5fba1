"""Scalability in the plane by a direct construction.

In R^2 a unit-norm frame is scalable exactly when no unit vector lies in
every double cone |<g, f_i>| >= 1/sqrt(2) with one inequality strict.
When that holds, orthogonal pairs and feasible triples are combined into
explicit weights without any eigensolver.
"""
import math

import numpy as np

from tfscale import Frame, cone_violation_r2, decide_scaling, planar_scaling, property_q, verify_scaling


def frame_at(angles) -> Frame:
    a = np.asarray(angles, dtype=float)
    return Frame.create(np.column_stack([np.cos(a), np.sin(a)]), unit_norm=True)


cases = {
    "three at 60 degrees": [0, math.pi / 3, 2 * math.pi / 3],
    "orthogonal pair": [0, math.pi / 2],
    "narrow fan": [0.1, 0.3, 0.5],
    "five spread out": [0.1, 0.9, 1.7, 2.4, 2.9],
}

for name, angles in cases.items():
    f = frame_at(angles)
    q = property_q(f)
    print(f"{name}: cone condition holds = {q}, general solver says {decide_scaling(f).verdict.value}")
    if q:
        dec = planar_scaling(f)
        rep = verify_scaling(f, dec.coefficients, dec.lam)
        print(f"  pairs {dec.pairs}, triples {[t for t, _ in dec.triples]}")
        print(f"  squared weights {np.array2string(dec.accumulated, precision=4)}, residual {rep.gdg_residual:.1e}")
    else:
        rep = cone_violation_r2(f)
        deg = math.degrees(math.atan2(rep.f[1], rep.f[0]))
        print(f"  unit vector at {deg:.2f} degrees sits inside every cone")
    print()

# Agreement over a random population.
rng = np.random.default_rng(0)
agree = 0
for _ in range(300):
    f = frame_at(rng.uniform(0, math.pi, int(rng.integers(3, 9))))
    agree += property_q(f) == (decide_scaling(f).verdict.value == "StrictlyScalable")
print(f"cone condition matches the general solver on {agree}/300 random planar frames")
