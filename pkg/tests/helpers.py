"""Shared random-instance generators for the test suite."""

from __future__ import annotations

import numpy as np

from povm_forge import Ensemble, Povm, inv_sqrt_psd


def random_unit_vector(rng, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_state(rng, d: int, pure: bool = True) -> np.ndarray:
    if pure:
        v = random_unit_vector(rng, d)
        return np.outer(v, v.conj())
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_ensemble(rng, d: int, m: int, pure: bool = True) -> Ensemble:
    states = [random_state(rng, d, pure) for _ in range(m)]
    priors = rng.uniform(0.1, 1.0, size=m)
    return Ensemble(states, priors / priors.sum())


def random_povm(rng, d: int, n: int, rank_one: bool = False) -> Povm:
    """Random POVM: draw positive operators and conjugate by the inverse square
    root of their sum.  Rank-one inputs stay rank one under that conjugation."""
    if rank_one:
        ops = [
            rng.uniform(0.2, 1.0) * random_state(rng, d, pure=True) for _ in range(n)
        ]
    else:
        ops = []
        for _ in range(n):
            g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            ops.append(g @ g.conj().T)
    total = sum(ops)
    n_inv = inv_sqrt_psd(total)
    return Povm([n_inv @ op @ n_inv for op in ops])


def random_real_povm(rng, d: int, n: int) -> Povm:
    ops = []
    for _ in range(n):
        g = rng.normal(size=(d, d))
        ops.append((g @ g.T).astype(complex))
    total = sum(ops)
    n_inv = inv_sqrt_psd(total).real.astype(complex)
    return Povm([n_inv @ op @ n_inv for op in ops])


def planar_rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])
