"""Planar rooted binary trees with n leaves; there are Catalan(n-1) shapes."""

from functools import lru_cache


LEAF = "*"


def node(left, right):
    return (left, right)


def leaves(shape):
    if shape == LEAF:
        return 1
    return leaves(shape[0]) + leaves(shape[1])


@lru_cache(maxsize=None)
def enumerate_trees(n):
    """All planar rooted binary shapes with n leaves, left size ascending."""
    if n < 2:
        raise ValueError("need at least 2 leaves")
    return tuple(_shapes(n))


@lru_cache(maxsize=None)
def _shapes(n):
    if n == 1:
        return (LEAF,)
    out = []
    for k in range(1, n):
        for left in _shapes(k):
            for right in _shapes(n - k):
                out.append((left, right))
    return tuple(out)


def catalan(n):
    """Catalan number C_n via the recurrence (the independent count)."""
    c = [0] * (n + 1)
    c[0] = 1
    for m in range(1, n + 1):
        c[m] = sum(c[k] * c[m - 1 - k] for k in range(m))
    return c[n]
