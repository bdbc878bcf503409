"""Convex decomposition of the identity and measurement pruning.

Writing a POVM as sum_i lambda_i Pi'_i = I with tr(Pi'_i) = d turns the weight
vector into a solution of a linear system D lambda = c.  The feasible set is a
compact polytope, so lambda is a convex combination of basic feasible
solutions, each supported on at most rank(D) operators.  Decomposing down to
those extreme points and keeping the most informative one prunes a measurement
to at most d^2 rank-one operators (or fewer under symmetry) without losing
mutual information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermitian import coords, eig_hermitian, hermitian_part
from .infotheory import mutual_information
from .quantum import Ensemble, NormalizedPovm, Povm, normalize_povm, validate_povm
from .symmetry import (
    FiniteRep,
    NotSymmetricError,
    RealRepRequiredError,
    complex_orbit_bound,
    is_symmetric_ensemble,
    orbit_sum,
    real_orbit_bound,
)

RANK_TOL = 1e-10
EIGENVALUE_CUTOFF = 1e-12
SUPPORT_TOL = 1e-13


class NormalizationError(ValueError):
    """Raised when operators do not carry the required trace."""


class InfeasibleError(ValueError):
    """Raised when the given weights do not reproduce the identity."""


class InternalLogicError(RuntimeError):
    """Raised when the reduction recursion misbehaves; indicates numerical trouble."""


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Coefficient matrix of the identity-decomposition equation D lambda = c.

    Row 0 is all ones (the weights are a convex combination); rows 1..d^2 hold
    the real basis coordinates of each trace-d operator, one operator per
    column.  The target c is (1, then d ones for the diagonal block, then
    zeros).
    """

    matrix: np.ndarray
    target: np.ndarray
    dim: int

    @property
    def n_columns(self) -> int:
        return self.matrix.shape[1]


def build_design_matrix(normalized_ops) -> DesignMatrix:
    """Assemble the design matrix from operators with trace d."""
    ops = list(normalized_ops)
    if not ops:
        raise NormalizationError("need at least one operator")
    d = ops[0].shape[0]
    columns = []
    for i, op in enumerate(ops):
        tr = np.trace(op).real
        if abs(tr - d) > 1e-9:
            raise NormalizationError(f"operator {i} has trace {tr:.12g}, expected {d}")
        columns.append(np.concatenate([[1.0], coords(op)]))
    matrix = np.column_stack(columns)
    target = np.zeros(1 + d * d)
    target[: 1 + d] = 1.0
    return DesignMatrix(matrix=matrix, target=target, dim=d)


def _row_echelon(a: np.ndarray, rank_tol: float):
    """Reduced row echelon form with partial pivoting.

    Columns are processed left to right, so pivot columns have the smallest
    possible indices; this makes kernel directions reproducible.  Returns the
    reduced matrix and the list of pivot columns.  The pivot threshold is
    relative to the largest entry of the input.
    """
    r = np.array(a, dtype=float)
    m, n = r.shape
    scale = np.max(np.abs(r)) if r.size else 0.0
    threshold = rank_tol * scale
    pivot_cols = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        pivot = row + int(np.argmax(np.abs(r[row:, col])))
        if np.abs(r[pivot, col]) <= threshold:
            continue
        r[[row, pivot]] = r[[pivot, row]]
        r[row] = r[row] / r[row, col]
        for other in range(m):
            if other != row and r[other, col] != 0.0:
                r[other] -= r[other, col] * r[row]
        pivot_cols.append(col)
        row += 1
    return r, pivot_cols


def numeric_rank(d: DesignMatrix | np.ndarray, rank_tol: float = RANK_TOL) -> int:
    """Rank of a matrix by row-echelon reduction with a relative pivot threshold."""
    matrix = d.matrix if isinstance(d, DesignMatrix) else np.asarray(d, dtype=float)
    _, pivot_cols = _row_echelon(matrix, rank_tol)
    return len(pivot_cols)


def _kernel_direction(a: np.ndarray, rank_tol: float) -> np.ndarray | None:
    """A null vector of ``a`` obtained by freeing the first non-pivot column.

    Returns None when the columns are linearly independent.
    """
    r, pivot_cols = _row_echelon(a, rank_tol)
    n = a.shape[1]
    free = [c for c in range(n) if c not in pivot_cols]
    if not free:
        return None
    j = free[0]
    q = np.zeros(n)
    q[j] = 1.0
    for row, col in enumerate(pivot_cols):
        q[col] = -r[row, j]
    return q


@dataclass(frozen=True, eq=False)
class IdentityDecomposition:
    """Convex split of identity weights into basic feasible solutions.

    ``weights[i]`` is the convex coefficient of leaf ``solutions[i]``; each
    leaf is a nonnegative vector nu with sum(nu) = 1, sum_j nu_j Pi'_j = I,
    and support no larger than the rank of the design matrix.
    """

    weights: np.ndarray
    solutions: list[np.ndarray]
    design: DesignMatrix

    def __len__(self) -> int:
        return len(self.solutions)

    def supports(self) -> list[np.ndarray]:
        return [np.flatnonzero(nu > SUPPORT_TOL) for nu in self.solutions]


def _reduce_to_basic(design: np.ndarray, lam: np.ndarray, rank_tol: float, depth: int):
    """Recursively walk the weight vector to extreme points of the polytope.

    While the support carries a kernel direction q of the design columns, move
    lambda +- t q to the first boundary in each direction (some coordinate hits
    zero, shrinking the support) and recurse; the convex coefficients follow
    from the step lengths.  Every leaf has linearly independent support
    columns, hence support size at most rank(D).
    """
    if depth < 0:
        raise InternalLogicError("reduction recursion exceeded the initial support size")
    support = np.flatnonzero(lam > SUPPORT_TOL)
    q_support = _kernel_direction(design[:, support], rank_tol)
    if q_support is None:
        return [(1.0, lam)]
    q = np.zeros_like(lam)
    q[support] = q_support
    # Row 0 of the design matrix is all ones, so kernel vectors sum to zero and
    # carry both signs: both directions hit a boundary.
    negative = q < -SUPPORT_TOL
    positive = q > SUPPORT_TOL
    if not negative.any() or not positive.any():
        raise InternalLogicError("kernel direction lacks a sign; boundary step undefined")
    t_plus = np.min(lam[negative] / -q[negative])
    t_minus = np.min(lam[positive] / q[positive])
    lam_plus = np.clip(lam + t_plus * q, 0.0, None)
    lam_minus = np.clip(lam - t_minus * q, 0.0, None)
    # Zero out the coordinates that define the step length exactly.
    lam_plus[negative & (lam_plus <= SUPPORT_TOL)] = 0.0
    lam_minus[positive & (lam_minus <= SUPPORT_TOL)] = 0.0
    w_plus = t_minus / (t_plus + t_minus)
    w_minus = t_plus / (t_plus + t_minus)
    leaves = []
    for w_branch, lam_branch in ((w_minus, lam_minus), (w_plus, lam_plus)):
        for w_leaf, nu in _reduce_to_basic(design, lam_branch, rank_tol, depth - 1):
            leaves.append((w_branch * w_leaf, nu))
    return leaves


def _merge_leaves(leaves):
    """Combine repeated leaves; a support with independent columns determines
    its basic solution uniquely, so bucketing by support almost always merges
    exactly."""
    buckets: dict[tuple[int, ...], list[tuple[float, np.ndarray]]] = {}
    order: list[tuple[int, ...]] = []
    for w, nu in leaves:
        key = tuple(np.flatnonzero(nu > SUPPORT_TOL).tolist())
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        for i, (w_seen, nu_seen) in enumerate(buckets[key]):
            if np.max(np.abs(nu - nu_seen)) <= 1e-9:
                buckets[key][i] = (w_seen + w, nu_seen)
                break
        else:
            buckets[key].append((w, nu))
    return [entry for key in order for entry in buckets[key]]


def decompose_identity(normalized: NormalizedPovm, rank_tol: float = RANK_TOL) -> IdentityDecomposition:
    """Rewrite sum_i lambda_i Pi'_i = I as a convex mixture of small solutions.

    Each returned solution uses at most rank(D) of the given operators; rank(D)
    is at most r + 1 when the operators live in an r-dimensional affine slice.
    """
    design = build_design_matrix(normalized.normalized_ops)
    lam = np.asarray(normalized.weights, dtype=float)
    if np.any(lam <= 0):
        raise InfeasibleError("all weights must be positive")
    residual = np.max(np.abs(design.matrix @ lam - design.target))
    if residual > 1e-8:
        raise InfeasibleError(f"weights do not reproduce the identity: residual {residual:.3e}")
    support = int(np.count_nonzero(lam > SUPPORT_TOL))
    leaves = _merge_leaves(_reduce_to_basic(design.matrix, lam, rank_tol, support))
    weights = np.array([w for w, _ in leaves])
    solutions = [nu for _, nu in leaves]
    return IdentityDecomposition(weights=weights, solutions=solutions, design=design)


def split_rank_one(p: Povm, cutoff: float = EIGENVALUE_CUTOFF) -> Povm:
    """Split every operator into its rank-one eigenpieces.

    Refining outcomes this way never decreases the mutual information, and the
    pieces sum to the original operators exactly (up to the discarded
    eigenvalues below ``cutoff``).
    """
    pieces = []
    for op in p.operators:
        w, v = eig_hermitian(op)
        for k in range(len(w)):
            if w[k] > cutoff:
                vec = v[:, k]
                pieces.append(hermitian_part(w[k] * np.outer(vec, vec.conj())))
    return Povm(pieces)


def _leaf_povm(nu: np.ndarray, normalized_ops) -> Povm:
    ops = [nu[j] * normalized_ops[j] for j in np.flatnonzero(nu > SUPPORT_TOL)]
    return Povm(ops)


def prune_povm(s: Ensemble, p: Povm, rank_tol: float = RANK_TOL) -> Povm:
    """Shrink a POVM to at most d^2 rank-one operators without losing information.

    The operators are eigen-split to rank one, the identity decomposition is
    computed, and the leaf with the largest mutual information is returned.
    The mixture of the leaves reproduces the split POVM, so the best leaf is
    at least as informative as the input.
    """
    report = validate_povm(p)
    if not report.ok:
        raise ValueError("invalid POVM: " + "; ".join(report.violations))
    rank_one = split_rank_one(p)
    normalized = normalize_povm(rank_one)
    decomposition = decompose_identity(normalized, rank_tol)
    best = None
    best_info = -np.inf
    for nu in decomposition.solutions:
        candidate = _leaf_povm(nu, normalized.normalized_ops)
        info = mutual_information(s, candidate)
        if info > best_info:
            best = candidate
            best_info = info
    return best


def prune_symmetric_povm(
    s: Ensemble,
    p: Povm,
    rep: FiniteRep,
    real_mode: bool = False,
    rank_tol: float = RANK_TOL,
) -> Povm:
    """Prune a POVM for a symmetric ensemble to a union of few group orbits.

    Symmetrizing leaves the information unchanged, and the orbit sums of the
    rank-one pieces live in the commutant of the representation, so the
    decomposition works in that far smaller slice: the returned POVM is a
    union of at most dim-of-commutant orbits (real symmetric commutant when
    ``real_mode`` and the data are real).  Operators come in |G|-element orbit
    blocks, block j scaled by the leaf weight nu_j.
    """
    if not is_symmetric_ensemble(s, rep):
        raise NotSymmetricError("ensemble is not symmetric under the given representation")
    report = validate_povm(p)
    if not report.ok:
        raise ValueError("invalid POVM: " + "; ".join(report.violations))
    rank_one = split_rank_one(p)
    normalized = normalize_povm(rank_one)
    if real_mode:
        bound = real_orbit_bound(rep)
        for op in normalized.normalized_ops:
            if np.max(np.abs(op.imag)) > 1e-9:
                raise RealRepRequiredError("real_mode requires real POVM operators")
    else:
        bound = complex_orbit_bound(rep)
    sums = [orbit_sum(op, rep) for op in normalized.normalized_ops]
    averaged = NormalizedPovm(weights=normalized.weights, normalized_ops=sums)
    decomposition = decompose_identity(averaged, rank_tol)
    largest = max(len(sup) for sup in decomposition.supports())
    if largest > bound:
        raise InternalLogicError(
            f"decomposition produced {largest} orbits, above the bound {bound}"
        )
    scale = 1.0 / rep.order
    best = None
    best_info = -np.inf
    for nu in decomposition.solutions:
        ops = []
        for j in np.flatnonzero(nu > SUPPORT_TOL):
            base = normalized.normalized_ops[j]
            ops.extend(
                hermitian_part(nu[j] * scale * (u @ base @ u.conj().T))
                for u in rep.elements
            )
        candidate = Povm(ops)
        info = mutual_information(s, candidate)
        if info > best_info:
            best = candidate
            best_info = info
    return best
