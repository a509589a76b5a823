"""Conditional density operators: the quantum analog of a conditional
probability matrix.

A conditional ``out|in`` carries a conditioning ("in") algebra and a
conditioned ("out") algebra.  Its matrix lives on the kron space with the
conditioning factor SLOW, i.e. the same layout as a joint state on
in (x) out.  With that layout, building a conditional from a joint state
and rebuilding the joint from (marginal, conditional) are plain operator
sandwiches with no index shuffling; only Bayes inversion reorders factors.

The partial trace of a conditional over its conditioned side is a
projector (the support projector of the conditioning marginal when the
conditional came from a joint state), so its trace is an integer rank.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .algebra import AlgebraShape, pair_support_deviation
from .errors import InvariantViolation, ShapeMismatch, SupportMismatch
from .matcore import (
    DEFAULT_RANK_TOL,
    as_matrix,
    gen_inv_sqrt,
    herm_deviation,
    hermitize,
    kron,
    mat_sqrt,
    matrix_rank_psd,
    max_abs,
    partial_trace,
    swap_factors,
)
from .states import JointState, State, _side

COND_PSD_TOL = 1e-10
COND_BLOCK_TOL = 1e-12
COND_PROJECTOR_TOL = 1e-9
COND_RANK_TOL = 1e-6
JOIN_TRACE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ConditionalState:
    """Positive operator whose conditioning partial trace is a projector.

    ``shape_in`` is the conditioning system, ``shape_out`` the conditioned
    one; the label reads out|in.  The matrix lies on kron(in, out) with the
    conditioning factor slow.
    """

    shape_in: AlgebraShape
    shape_out: AlgebraShape
    matrix: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        arr = as_matrix(self.matrix)
        d = self.shape_in.total_dim * self.shape_out.total_dim
        if arr.shape != (d, d):
            raise ShapeMismatch(f"matrix shape {arr.shape} does not match kron dim {d}")
        object.__setattr__(self, "matrix", arr)
        if check:
            self._validate(arr)

    def _validate(self, arr: np.ndarray) -> None:
        if not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
            raise InvariantViolation("finite", np.inf, "matrix has non-finite entries")
        dev = herm_deviation(arr)
        if dev > COND_PSD_TOL:
            raise InvariantViolation("hermitian", dev)
        block_dev = pair_support_deviation(arr, self.shape_in, self.shape_out)
        if block_dev > COND_BLOCK_TOL:
            raise InvariantViolation("block_support", block_dev)
        w = np.linalg.eigvalsh(hermitize(arr))
        if w.size and w[0] < -COND_PSD_TOL:
            raise InvariantViolation("positive", -float(w[0]))
        p = self.conditioning_support()
        proj_dev = max(max_abs(p @ p - p), herm_deviation(p))
        if proj_dev > COND_PROJECTOR_TOL:
            raise InvariantViolation("support_projector", proj_dev)
        trace = float(np.trace(p).real)
        rank_dev = abs(trace - round(trace))
        if rank_dev > COND_RANK_TOL:
            raise InvariantViolation("integer_rank", rank_dev)

    def conditioning_support(self) -> np.ndarray:
        """Partial trace over the conditioned side; a projector on the
        conditioning algebra."""
        din, dout = self.shape_in.total_dim, self.shape_out.total_dim
        return partial_trace(self.matrix, din, dout, keep="left")

    @property
    def rank(self) -> int:
        """Trace of the conditioning support, rounded to the integer it is."""
        return int(round(float(np.trace(self.matrix).real)))


def _sandwich_on_first(factor: np.ndarray, matrix: np.ndarray, dim_other: int) -> np.ndarray:
    op = kron(factor, np.eye(dim_other))
    return op @ matrix @ op


def conditional_from_joint(j: JointState, condition_on: str = "a") -> ConditionalState:
    """Condition a joint state on one side.

    Sandwiches the joint with the generalized inverse square root of the
    conditioning marginal (tensored with the identity).  A rank-deficient
    marginal is handled by restriction to its support.
    """
    side = _side(condition_on)
    da, db = j.shape_a.total_dim, j.shape_b.total_dim
    if side == "a":
        marg = partial_trace(j.matrix, da, db, keep="left")
        inv = gen_inv_sqrt(marg)
        out = _sandwich_on_first(inv, j.matrix, db)
        return ConditionalState(shape_in=j.shape_a, shape_out=j.shape_b, matrix=out)
    marg = partial_trace(j.matrix, da, db, keep="right")
    inv = gen_inv_sqrt(marg)
    swapped = swap_factors(j.matrix, da, db)
    out = _sandwich_on_first(inv, swapped, da)
    return ConditionalState(shape_in=j.shape_b, shape_out=j.shape_a, matrix=out)


def joint_from_conditional(marg: State, cond: ConditionalState) -> JointState:
    """Rebuild a joint state from a conditioning marginal and a conditional.

    The support of the conditional's conditioning projector must contain the
    support of the marginal, otherwise the reconstruction loses trace and a
    ``SupportMismatch`` is raised.
    """
    if marg.shape != cond.shape_in:
        raise ShapeMismatch("marginal shape does not match the conditioning algebra")
    root = mat_sqrt(marg.matrix)
    out = _sandwich_on_first(root, cond.matrix, cond.shape_out.total_dim)
    trace_dev = abs(np.trace(out).real - 1.0)
    if trace_dev > JOIN_TRACE_TOL:
        raise SupportMismatch(
            f"reconstructed joint state has trace deviation {trace_dev:.3e}; "
            "the marginal leaks outside the conditional's conditioning support"
        )
    return JointState(shape_a=cond.shape_in, shape_b=cond.shape_out, matrix=out)


def bayes_invert(cond_ab: ConditionalState, marg_a: State, marg_b: State) -> ConditionalState:
    """Turn a conditional of A given B into the conditional of B given A.

    ``cond_ab`` conditions on B (``shape_in`` = B, ``shape_out`` = A); the
    marginals must be the reduced states of the joint state inducing it.
    The conditioning marginal of the OUTPUT (``marg_b``) must be full rank.
    """
    if cond_ab.shape_out != marg_a.shape:
        raise ShapeMismatch("marg_a must live on the conditioned algebra of cond_ab")
    if cond_ab.shape_in != marg_b.shape:
        raise ShapeMismatch("marg_b must live on the conditioning algebra of cond_ab")
    if matrix_rank_psd(marg_b.matrix, DEFAULT_RANK_TOL) < marg_b.shape.total_dim:
        raise SupportMismatch("marg_b is rank-deficient; Bayes inversion needs full rank")
    op = kron(mat_sqrt(marg_b.matrix), gen_inv_sqrt(marg_a.matrix))
    inverted = op @ cond_ab.matrix @ op
    da, db = marg_a.shape.total_dim, marg_b.shape.total_dim
    reindexed = swap_factors(inverted, db, da)
    return ConditionalState(shape_in=marg_a.shape, shape_out=marg_b.shape, matrix=reindexed)
