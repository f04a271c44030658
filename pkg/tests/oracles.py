"""Independent reference computations used to check the library.

Nothing here imports hpcfabric; each oracle takes the slow, obvious route.
"""

import math
from collections import Counter

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq


def brute_force_histogram(rows, cols, pitch):
    """Double loop over every ordered pair of distinct nodes."""
    nodes = [(r, c) for r in range(rows) for c in range(cols)]
    counts = Counter()
    for a in nodes:
        for b in nodes:
            if a != b:
                counts[(abs(a[0] - b[0]) + abs(a[1] - b[1])) * pitch] += 1
    return dict(sorted(counts.items()))


def gaussian_tail(q):
    """P(X > q) for standard normal X, by numerical quadrature of the density."""
    density = lambda x: math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    value, _ = quad(density, q, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return value


def q_for_tail(ber):
    return brentq(lambda q: gaussian_tail(q) - ber, 0.0, 12.0, xtol=1e-12)


def solve_levels(average_mw, ratio):
    """Solve P1 + P0 = 2*Pavg, P1 - r*P0 = 0 as a linear system."""
    a = np.array([[1.0, 1.0], [1.0, -ratio]])
    b = np.array([2.0 * average_mw, 0.0])
    p1, p0 = np.linalg.solve(a, b)
    return p1, p0
