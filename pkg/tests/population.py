"""Seeded random populations of finite sequences shared by the test modules."""

import numpy as np


def _complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_synthesis(rng, max_n=8, max_m=16):
    """One synthesis matrix; about half the draws are rank deficient on purpose."""
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    kind = int(rng.integers(0, 6))
    if kind <= 2:
        D = _complex(rng, (n, m))
        if kind == 1:
            D = D.real + 0j
    elif kind == 3:
        r = int(rng.integers(1, min(n, m) + 1))
        D = _complex(rng, (n, r)) @ _complex(rng, (r, m))
    elif kind == 4:
        D = _complex(rng, (n, m))
        if m > 1:
            j, k = rng.choice(m, size=2, replace=False)
            D[:, j] = (0.5 - 2j) * D[:, k]
    else:
        D = _complex(rng, (n, m))
        D[:, int(rng.integers(0, m))] = 0
    return D


def population(seed, count, max_n=8, max_m=16):
    rng = np.random.default_rng(seed)
    return [random_synthesis(rng, max_n, max_m) for _ in range(count)]


def random_matrices(seed, count, max_dim=12):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        r, c = (int(x) for x in rng.integers(1, max_dim + 1, size=2))
        M = _complex(rng, (r, c))
        if rng.random() < 0.3:
            k = int(rng.integers(1, min(r, c) + 1))
            M = _complex(rng, (r, k)) @ _complex(rng, (k, c))
        out.append(M)
    return out


def square_population(seed, count, max_n=8):
    """Square synthesis matrices, so that complete instances are often injective too."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        D = _complex(rng, (n, n))
        if n > 1 and rng.random() < 0.3:
            D[:, -1] = D[:, :-1] @ _complex(rng, n - 1)
        out.append(D)
    return out
