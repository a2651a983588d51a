"""Independent reference implementations used only by the tests."""

import math

import numpy as np


def neumaier_sum(values):
    """Left-to-right compensated sum, returned as ``s + c``."""
    s = 0.0
    c = 0.0
    for v in values:
        v = float(v)
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
    return s + c


def naive_cusum(z):
    """O(n^2) CUSUM: every partial sum is re-summed from scratch."""
    z = [float(v) for v in z]
    n = len(z)
    shifted = [v - z[0] for v in z]
    total = neumaier_sum(shifted)
    out = []
    for j in range(n):
        partial = neumaier_sum(shifted[:j])
        out.append(partial / n - (j * total) / (n * n))
    return np.array(out)


def kernel(s, t):
    return np.minimum(s, t) - s * t


def grid_integral_cusum_kernel(u, t, points=10**6):
    """Midpoint rule for int U(s) k(s, t) ds; ``points`` must be a multiple of n."""
    n = len(u)
    assert points % n == 0
    s = (np.arange(points) + 0.5) / points
    U = np.repeat(np.asarray(u, dtype=np.float64), points // n)
    return float(np.sum(U * kernel(s, t)) / points)


def tau_closed(t):
    v = t * (1 - t)
    return 2 * math.sqrt(1 + 2 * v) / (math.sqrt(5) * v)
