"""Commuting normal pairs are never orthogonal in finite dimension; show why."""

import numpy as np

from orthokit import check_normal_pair, cone_refuter, generate, joint_spectrum

a, b = np.diag([1j, 0.5]), np.diag([0, 0.8])
print("joint spectrum:", joint_spectrum(a, b).points)
v = check_normal_pair(a, b)
print(v.status.value, "-", v.reason.value, v.details)

a, b = generate("square3x3")
v, pts = cone_refuter(a, b)
print(f"cone refuter on an orthogonal pair: {v.status.value} after {len(pts)} states")
v, pts = cone_refuter(np.eye(2), np.eye(2))
print(f"cone refuter on (I, I): {v.status.value}, point {pts[-1]}")
