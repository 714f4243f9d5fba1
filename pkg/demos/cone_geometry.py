"""Cone intersections in R^3 for the two-glued-bases frame.

Every vector of a scalable frame in R^3 leaves no unit vector strictly
inside all the cones |<g, f_i>| >= 1/sqrt(3).  For the glued bases frame
the intersections of the cones of each basis are eight isolated points.
"""
import numpy as np

from tfscale import cone_violation_search, export_cone_samples, perturbed_frame, two_bases_frame
from tfscale.cones import cluster_centers

f = two_bases_frame()
for subset in ((0, 1, 2), (2, 3, 4)):
    pts = export_cone_samples(f, subset, resolution=180)
    centers = cluster_centers(pts, 0.3)
    print(f"vectors {[i + 1 for i in subset]}: {len(pts)} grid points meet every cone, {len(centers)} clusters")
    for c in centers:
        print("   ", np.array2string(c, precision=4, suppress_small=True))
    print()

print("searching for a unit vector strictly inside all cones")
for name, frame in (("glued bases", f), ("tilted v=1/8", perturbed_frame(1 / 8))):
    rep = cone_violation_search(frame, seed=0)
    print(f"  {name}: {rep.label}; best smallest margin {rep.margins.min():+.3e}")

rng = np.random.default_rng(1)
v = rng.normal(size=(4, 3)) + np.array([2.0, 2.0, 2.0])
clustered = type(f).create(v / np.linalg.norm(v, axis=1, keepdims=True), unit_norm=True)
rep = cone_violation_search(clustered, seed=0)
print(f"  clustered random frame: {rep.label}; witness {np.array2string(rep.f, precision=4)}")
