"""Numerical tolerances shared by the kernel.

``CAT0_EPS`` may override the (length, angle) pair, e.g. ``CAT0_EPS="1e-8,1e-8"``.
"""

import os

EPS_LEN = 1e-9
EPS_ANGLE = 1e-9
# acceptance threshold for theta(v) >= 2*pi at inner vertices
EPS_CURVATURE = 1e-7


def _from_env():
    raw = os.environ.get("CAT0_EPS")
    if not raw:
        return EPS_LEN, EPS_ANGLE
    try:
        a, b = (float(s) for s in raw.split(","))
    except ValueError as exc:
        raise ValueError(f"CAT0_EPS must look like '1e-9,1e-9', got {raw!r}") from exc
    if a <= 0 or b <= 0:
        raise ValueError("CAT0_EPS entries must be positive")
    return a, b


EPS_LEN, EPS_ANGLE = _from_env()
