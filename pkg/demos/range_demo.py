"""Range orthogonality: metric inequality, positive-part witness, and the norming-state verdict."""

import numpy as np

from orthokit import majorization_test, metric_inequality_test, partial_isometry_pair, pythagoras_via_state

a, b = partial_isometry_pair(4, seed=2)
m = metric_inequality_test(a, b)
print(f"partial isometry pair: inequality holds={m.all_hold}, worst slack {m.worst_slack:.2e}")
print("  verdict:", pythagoras_via_state(a, b).status.value)

d1, d2 = np.diag([1.0, 0]), np.diag([0, 1.0])
print("diag pair verdict:", pythagoras_via_state(d1, d2).status.value)
r = majorization_test(d1, d2)
print(f"B*B <= A*A fails; witness at t={r.t} with gap {r.gap:.3f}:\n{r.witness.real}")
