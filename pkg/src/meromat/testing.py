"""Random matrices with a planted Jordan structure, for tests and checks."""

import numpy as np

__all__ = ["planted_matrix", "jordan_matrix"]


def jordan_matrix(blocks):
    """Block diagonal Jordan matrix from ``[(lam, size), ...]``."""
    n = sum(m for _, m in blocks)
    J = np.zeros((n, n), dtype=complex)
    i = 0
    for lam, m in blocks:
        for k in range(m):
            J[i + k, i + k] = lam
            if k < m - 1:
                J[i + k, i + k + 1] = 1.0
        i += m
    return J


def planted_matrix(rng, dim=None, dim_max=12, max_index=4, separation=0.5,
                   max_cond=1e3, box=3.0, zero_blocks=None):
    """Draw ``A = Y J Y^{-1}`` with known Jordan blocks.

    Parameters
    ----------
    rng : numpy.random.Generator
    dim : int, optional
        Matrix size; drawn from ``1..dim_max`` when omitted.
    max_index : int
        Largest Jordan block.
    separation : float
        Minimum distance between distinct eigenvalues.
    max_cond : float
        Upper bound on the condition number of the similarity ``Y``.
    box : float
        Eigenvalues are drawn from the square ``[-box, box]^2``; about
        40% are real.
    zero_blocks : sequence of int, optional
        Jordan block sizes for a planted zero eigenvalue.

    Returns
    -------
    A : ndarray
    blocks : list of (complex, int)
    Y : ndarray
    """
    n = int(dim) if dim is not None else int(rng.integers(1, dim_max + 1))
    blocks, eigs, left = [], [], n
    if zero_blocks:
        if sum(zero_blocks) > n:
            raise ValueError("zero blocks exceed the dimension")
        eigs.append(0j)
        blocks += [(0j, int(m)) for m in zero_blocks]
        left -= sum(zero_blocks)
    while left > 0:
        while True:
            if rng.random() < 0.6:
                lam = complex(*rng.uniform(-box, box, 2))
            else:
                lam = complex(rng.uniform(-box, box), 0.0)
            if all(abs(lam - e) >= separation for e in eigs):
                break
        eigs.append(lam)
        for _ in range(int(rng.integers(1, 3))):
            if left == 0:
                break
            m = int(rng.integers(1, min(max_index, left) + 1))
            blocks.append((lam, m))
            left -= m
    J = jordan_matrix(blocks)
    while True:
        Y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if np.linalg.cond(Y) <= max_cond:
            break
    return Y @ J @ np.linalg.inv(Y), blocks, Y
