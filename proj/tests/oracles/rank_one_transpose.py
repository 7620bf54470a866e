#!/usr/bin/env python3
"""Spectrum of the partial transpose of the rank-one 2x2x2 state built on
v = e0 + e6. Freezes the most negative eigenvalue over the single-subsystem
transposes as a golden value."""
import json
import sys
from pathlib import Path

import numpy as np

v = np.zeros(8)
v[0] = 1.0
v[6] = 1.0
rho = np.outer(v, v) / 2.0


def pt(m, axis):
    t = m.reshape(2, 2, 2, 2, 2, 2)
    perm = list(range(6))
    perm[axis], perm[axis + 3] = perm[axis + 3], perm[axis]
    return t.transpose(perm).reshape(8, 8)


mins = {f"T{k + 1}": float(np.linalg.eigvalsh(pt(rho, k)).min()) for k in range(3)}
worst = min(mins.values())
assert abs(worst + 0.5) < 1e-14, mins

out = {"family": "yuzhao", "min_eigenvalue_by_transpose": mins,
       "most_negative": worst}
dest = Path(sys.argv[1] if len(sys.argv) > 1 else
            Path(__file__).resolve().parent.parent / "golden" / "yuzhao_transpose.json")
dest.write_text(json.dumps(out, indent=1) + "\n")
print(f"wrote {dest}  most negative {worst}")
