"""Walk through scalability decisions on three small frames.

A unit-norm frame is scalable when positive weights make it tight.  The
decision reduces to a null-space computation on the diagram Gramian and a
convex-hull membership test on the rows of the null basis.
"""
import math

import numpy as np

from tfscale import Frame, decide_scaling, perturbed_frame, two_bases_frame, validate_certificate


def show(name: str, frame: Frame) -> None:
    res = decide_scaling(frame)
    print(f"{name}: {frame.k} vectors in dimension {frame.n}")
    print(f"  verdict      {res.verdict.value}")
    print(f"  nullity      {res.diagnostics.get('nullity')}")
    if res.coefficients is not None:
        print(f"  coefficients {np.array2string(res.coefficients, precision=6)}")
        print(f"  lambda       {res.lam:.6f}")
        s = (frame.vectors * res.coefficients[:, None] ** 2).T @ frame.vectors
        print(f"  max |S - lambda I| = {np.max(np.abs(s - res.lam * np.eye(frame.n))):.2e}")
    else:
        print(f"  certificate  {res.certificate.kind.value}, valid: {validate_certificate(frame, res)}")
    print()


# Two orthogonal vectors plus a repeat of the first with its sign flipped.
# The repeated direction must share weight with the lone one.
show("e1, e2, -e1", Frame.create(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]), unit_norm=True))

# Two orthonormal bases of R^3 glued along the third axis.
show("two glued bases", two_bases_frame())

# Tilting the shared vector off the axis breaks scalability.
show("tilted, v = 1/8", perturbed_frame(1 / 8))

# The tilt only matters once it is nonzero.
for v in (1e-3, 0.05, 0.3, 0.6):
    print(f"v = {v:<6} -> {decide_scaling(perturbed_frame(v)).verdict.value}")
print(f"(valid tilts satisfy 0 < v < {1 / math.sqrt(2):.6f})")
