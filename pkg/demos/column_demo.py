"""Exact column orthonormality decision, cross-checked by the tensor-norm identity."""

import numpy as np

from orthokit import check_column_orthonormal, column_canonical

families = {
    "matrix units e_j e_1*, k=3, d=4": column_canonical(3, 4),
    "diag(1,0), diag(0,1)": [np.diag([1.0, 0]), np.diag([0, 1.0])],
    "I, I": [np.eye(2), np.eye(2)],
}
for name, fam in families.items():
    r = check_column_orthonormal(fam, trials=50)
    print(f"{name}: {r.verdict.status.value} ({r.verdict.reason.value})")
    print(f"  row norm {r.row_norm:.3f}, common norming dim {r.norming_intersection_dim}, identity err {r.identity_max_rel_err:.2e}")
