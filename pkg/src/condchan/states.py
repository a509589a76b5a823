"""Density operators on an algebra and joint states on tensor products.

States are stored in embedded form (a full matrix supported on the block
diagonal) and validated eagerly at construction; pass ``check=False`` for
intermediate values that are fixed up before observation.  The transpose
below is always taken entry-wise in the standard embedding basis; callers
wanting an eigenbasis variant must rotate explicitly first.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .algebra import AlgebraShape, pair_support_deviation, block_support_deviation
from .errors import InvariantViolation, ShapeMismatch
from .matcore import as_matrix, herm_deviation, hermitize, partial_trace, swap_factors

STATE_HERM_TOL = 1e-10
STATE_PSD_TOL = 1e-10
STATE_TRACE_TOL = 1e-10
STATE_BLOCK_TOL = 1e-12


def _validate_density(matrix: np.ndarray, block_dev: float) -> None:
    if not np.all(np.isfinite(matrix.real) & np.isfinite(matrix.imag)):
        raise InvariantViolation("finite", np.inf, "matrix has non-finite entries")
    dev = herm_deviation(matrix)
    if dev > STATE_HERM_TOL:
        raise InvariantViolation("hermitian", dev)
    if block_dev > STATE_BLOCK_TOL:
        raise InvariantViolation("block_support", block_dev)
    trace_dev = abs(np.trace(matrix).real - 1.0) + abs(np.trace(matrix).imag)
    if trace_dev > STATE_TRACE_TOL:
        raise InvariantViolation("trace", trace_dev)
    w = np.linalg.eigvalsh(hermitize(matrix))
    if w.size and w[0] < -STATE_PSD_TOL:
        raise InvariantViolation("positive", -float(w[0]))


@dataclass(frozen=True, eq=False)
class State:
    """Positive unit-trace element of an algebra, in embedded form."""

    shape: AlgebraShape
    matrix: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        arr = as_matrix(self.matrix)
        d = self.shape.total_dim
        if arr.shape != (d, d):
            raise ShapeMismatch(f"matrix shape {arr.shape} does not match total dim {d}")
        object.__setattr__(self, "matrix", arr)
        if check:
            _validate_density(arr, block_support_deviation(arr, self.shape))


@dataclass(frozen=True, eq=False)
class JointState:
    """State on the tensor product of two algebras, first factor slow."""

    shape_a: AlgebraShape
    shape_b: AlgebraShape
    matrix: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        arr = as_matrix(self.matrix)
        d = self.shape_a.total_dim * self.shape_b.total_dim
        if arr.shape != (d, d):
            raise ShapeMismatch(f"matrix shape {arr.shape} does not match kron dim {d}")
        object.__setattr__(self, "matrix", arr)
        if check:
            _validate_density(arr, pair_support_deviation(arr, self.shape_a, self.shape_b))


def _side(keep: str) -> str:
    k = keep.lower()
    if k not in ("a", "b"):
        raise ShapeMismatch(f"side must be 'a' or 'b', got {keep!r}")
    return k


def reduce(j: JointState, keep: str) -> State:
    """Reduced state of one side: partial trace over the discarded factor."""
    k = _side(keep)
    da, db = j.shape_a.total_dim, j.shape_b.total_dim
    if k == "a":
        return State(j.shape_a, partial_trace(j.matrix, da, db, keep="left"))
    return State(j.shape_b, partial_trace(j.matrix, da, db, keep="right"))


def swap(j: JointState) -> JointState:
    """Exchange the two factors of a joint state."""
    da, db = j.shape_a.total_dim, j.shape_b.total_dim
    return JointState(j.shape_b, j.shape_a, swap_factors(j.matrix, da, db))


def transpose_in_basis(s: State) -> State:
    """Entry-wise transpose in the embedding basis (an involution that
    preserves the spectrum and the algebra support)."""
    return State(s.shape, s.matrix.T)


def is_classical(s: State, tol: float = 1e-12) -> bool:
    """True iff the state is diagonal in the embedding basis within tol."""
    off = s.matrix - np.diag(np.diag(s.matrix))
    return bool(np.max(np.abs(off)) <= tol) if off.size else True


def maximally_mixed(shape: AlgebraShape) -> State:
    """Identity over total dimension."""
    d = shape.total_dim
    return State(shape, np.eye(d, dtype=np.complex128) / d)
