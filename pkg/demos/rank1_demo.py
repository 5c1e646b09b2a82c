"""Operators orthogonal to a rank-one projection: block data, conditions, and construction."""

import numpy as np

from orthokit import construct_partner, decompose_rank1, family_rank1_partner, rank1_certify, rank1_conditions

for alpha in (0.6, 0.5):
    a = np.array([[0, 0.8, 0], [0, alpha, 0], [0.6, 0, 0]])
    b = np.diag([1.0, 0, 0])
    c = rank1_conditions(decompose_rank1(a, b))
    v = rank1_certify(a, b)
    print(f"alpha={alpha}: {v.status.value}; norm identity residual {c.derived['norm_sq']:.4f}")
    if c.first_failure:
        print("  first failed condition:", c.first_failure)

built = construct_partner([0.8, 0], np.diag([0.6, 0]), np.eye(2))
print("constructed operator:\n", built.real)
print("matches the family up to signs:", np.allclose(np.abs(built), np.abs(family_rank1_partner(2, a1=0.8, alpha=0.6, b2=0.6)[0])))
