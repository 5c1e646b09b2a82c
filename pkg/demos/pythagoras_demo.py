"""Decide orthogonality for a few pairs and print the verdict and defect summary."""

import numpy as np

from orthokit import check_pythagoras, family_square3x3, generate

pairs = {
    "canonical 2x2 pair": generate("canonical2x2"),
    "3x3 family, admissible parameters": family_square3x3(0.5, 0.5, 0.6),
    "3x3 family, parameters out of range": family_square3x3(0.5, 0.8, 0.6, strict=False),
    "diag(1,0) vs diag(0,1)": (np.diag([1.0, 0]), np.diag([0, 1.0])),
}

for name, (a, b) in pairs.items():
    v = check_pythagoras(a, b)
    print(f"{name}\n  {v.status.value}: {v.reason.value}")
    print(f"  grid: {v.profile.summary()}")
    if "lambda_witness" in v.details:
        print(f"  lambda witness {v.details['lambda_witness']:.4g}, defect {v.details['lambda_witness_defect']:.3g}")
