import math

import numpy as np

from tfscale import Frame

SQ2 = 1 / math.sqrt(2)

# filled by the acceptance suite, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def unit_frame(rows, field=None):
    return Frame.create(np.array(rows), field, unit_norm=True)


def angle_frame(angles):
    a = np.asarray(angles, dtype=float)
    return unit_frame(np.column_stack([np.cos(a), np.sin(a)]))


def random_unit_frame(rng, k, n, complex_field=False):
    v = rng.normal(size=(k, n))
    if complex_field:
        v = v + 1j * rng.normal(size=(k, n))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return unit_frame(v)
