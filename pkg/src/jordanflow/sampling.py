"""Seeded random generators for tensors, unitaries and basis changes."""

from __future__ import annotations

import numpy as np

from .algebra import StructureTensor, act
from .catalog import builtin, names

__all__ = [
    "random_symmetric_tensor",
    "random_hermitian",
    "random_unitary",
    "random_group_element",
    "random_jordan",
]


def random_symmetric_tensor(rng: np.random.Generator, n: int) -> StructureTensor:
    t = rng.normal(size=(n, n, n)) + 1j * rng.normal(size=(n, n, n))
    return StructureTensor(0.5 * (t + np.swapaxes(t, 0, 1)))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_group_element(rng: np.random.Generator, n: int, cond_max: float = 50.0) -> np.ndarray:
    while True:
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if np.linalg.cond(g) <= cond_max:
            return g


def random_jordan(rng: np.random.Generator, dim: int, cond_max: float = 50.0) -> StructureTensor:
    """Random point of a random catalog orbit: act(g, catalog entry) for generic g."""
    pool = names(dim)
    if not pool:
        raise ValueError(f"no catalog entries of dimension {dim}")
    entry = builtin(pool[int(rng.integers(len(pool)))])
    return act(random_group_element(rng, dim, cond_max), entry.tensor)
