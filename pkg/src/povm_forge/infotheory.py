"""Mutual information of an ensemble and a measurement, in bits.

The core quantity is I = sum_ij H(p_ij) - sum_i H(row_i) - sum_j H(col_j) with
H(u) = u log2 u and H(0) = 0, where p_ij = p(i) tr(Pi_j rho_i).  For operator
sets that do not sum to the identity (single orbits, for instance) the formal
variant replaces the row marginals by the priors; for a complete POVM the two
definitions coincide.
"""

from __future__ import annotations

import numpy as np

from .quantum import Ensemble, Povm, StructuralError, validate_povm

NEGATIVE_PROB_TOL = 1e-12


def _operators(p) -> list[np.ndarray]:
    if isinstance(p, Povm):
        return p.operators
    if hasattr(p, "elements") and hasattr(p, "multiplicities"):
        # Orbit: expand multiplicities so columns line up with group elements.
        ops = []
        for op, mult in zip(p.elements, p.multiplicities):
            ops.extend([op] * mult)
        return ops
    return [np.asarray(op, dtype=complex) for op in p]


def plogp(u: np.ndarray) -> np.ndarray:
    """Elementwise u * log2(u) with the continuity convention at 0."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    positive = u > 0
    out[positive] = u[positive] * np.log2(u[positive])
    return out


def joint_distribution(s: Ensemble, p) -> np.ndarray:
    """Joint probabilities p_ij = p(i) tr(Pi_j rho_i) as an m x n matrix.

    Tiny negative values (>= -1e-12, from rounding in PSD operators) are
    clamped to zero; anything more negative raises, since it signals a genuine
    positivity violation rather than noise.
    """
    ops = _operators(p)
    if ops[0].shape[0] != s.dim:
        raise StructuralError(f"dimension mismatch: ensemble {s.dim} vs operators {ops[0].shape[0]}")
    probs = np.empty((len(s), len(ops)))
    for i, (prior, rho) in enumerate(zip(s.priors, s.states)):
        for j, op in enumerate(ops):
            probs[i, j] = prior * np.trace(op @ rho).real
    low = probs.min()
    if low < -NEGATIVE_PROB_TOL:
        raise ValueError(f"joint probability {low:.3e} is negative beyond tolerance")
    np.clip(probs, 0.0, None, out=probs)
    return probs


def mutual_information(s: Ensemble, p: Povm, tol: float = 1e-9) -> float:
    """Mutual information I(S, P) in bits; the POVM is validated first."""
    report = validate_povm(p, tol=tol, allow_zero=True)
    if not report.ok:
        raise ValueError("invalid POVM: " + "; ".join(report.violations))
    probs = joint_distribution(s, p)
    return float(
        plogp(probs).sum() - plogp(probs.sum(axis=1)).sum() - plogp(probs.sum(axis=0)).sum()
    )


def orbit_information(s: Ensemble, c) -> float:
    """Formal information of an operator set that need not sum to the identity.

    The row-marginal term uses the priors p(i) instead of sum_j p_ij.  For a
    complete POVM this equals mutual_information; for an incomplete orbit it
    is the quantity whose convex combinations reproduce the information of
    orbit-union POVMs, and it can be negative.
    """
    probs = joint_distribution(s, c)
    return float(
        plogp(probs).sum() - plogp(s.priors).sum() - plogp(probs.sum(axis=0)).sum()
    )


def equality_condition(s: Ensemble, p, q, j: int, tol: float = 1e-9) -> bool:
    """Proportionality test for the probability vectors of column j.

    True iff p_ij * sum_k q_kj == q_ij * sum_k p_kj for all i, i.e. the two
    operators induce the same outcome statistics up to a constant factor.
    Mixing operators column-wise loses no information exactly in that case.
    """
    p_ops = _operators(p)
    q_ops = _operators(q)
    if len(p_ops) != len(q_ops):
        raise StructuralError(f"operator count mismatch: {len(p_ops)} vs {len(q_ops)}")
    if not 0 <= j < len(p_ops):
        raise IndexError(f"column {j} out of range for {len(p_ops)} operators")
    pj = joint_distribution(s, [p_ops[j]])[:, 0]
    qj = joint_distribution(s, [q_ops[j]])[:, 0]
    return bool(np.max(np.abs(pj * qj.sum() - qj * pj.sum())) <= tol)
