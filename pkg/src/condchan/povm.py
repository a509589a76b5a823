"""POVMs, the generalized Born rule, and POVM-driven ensemble preparations.

A POVM both measures a state (outcome j with probability Tr(M_j rho)) and
prepares one: draw j with that probability and emit sqrt(rho) M_j sqrt(rho)
normalized.  The two directions are mutually inverse on full-rank states,
which is what ``prepare`` / ``povm_from_ensemble`` implement.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .algebra import AlgebraShape, block_support_deviation
from .errors import InvariantViolation, ShapeMismatch, SupportViolation
from .matcore import (
    as_matrix,
    gen_inv_sqrt,
    herm_deviation,
    hermitize,
    mat_sqrt,
    max_abs,
    support_projector,
)
from .states import State

POVM_PSD_TOL = 1e-10
POVM_SUM_TOL = 1e-9
POVM_BLOCK_TOL = 1e-12
ENSEMBLE_TOL = 1e-9
# Outcomes below this probability are dropped from ensembles; their
# conditional state is undefined.
ZERO_PROB_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class POVM:
    """Positive elements of an algebra summing to its identity."""

    shape: AlgebraShape
    elements: tuple[np.ndarray, ...]
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        elems = tuple(as_matrix(e) for e in self.elements)
        if not elems:
            raise ShapeMismatch("a POVM needs at least one element")
        d = self.shape.total_dim
        for e in elems:
            if e.shape != (d, d):
                raise ShapeMismatch(f"element shape {e.shape} does not match total dim {d}")
        object.__setattr__(self, "elements", elems)
        if check:
            for e in elems:
                if not np.all(np.isfinite(e.real) & np.isfinite(e.imag)):
                    raise InvariantViolation("finite", np.inf, "element has non-finite entries")
                dev = herm_deviation(e)
                if dev > POVM_PSD_TOL:
                    raise InvariantViolation("hermitian", dev)
                bdev = block_support_deviation(e, self.shape)
                if bdev > POVM_BLOCK_TOL:
                    raise InvariantViolation("block_support", bdev)
                w = np.linalg.eigvalsh(hermitize(e))
                if w.size and w[0] < -POVM_PSD_TOL:
                    raise InvariantViolation("positive", -float(w[0]))
            sum_dev = max_abs(sum(elems) - np.eye(d))
            if sum_dev > POVM_SUM_TOL:
                raise InvariantViolation("povm_sum", sum_dev)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted states decomposing a declared average state."""

    weights: np.ndarray
    members: tuple[State, ...]
    average: State
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        w = np.array(self.weights, dtype=float, copy=True)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if len(members) != w.size:
            raise ShapeMismatch("one weight per member required")
        if check:
            if w.size and float(w.min()) < -ENSEMBLE_TOL:
                raise InvariantViolation("weights_nonnegative", -float(w.min()))
            wsum_dev = abs(float(w.sum()) - 1.0)
            if wsum_dev > ENSEMBLE_TOL:
                raise InvariantViolation("weights_sum", wsum_dev)
            mix = sum(p * m.matrix for p, m in zip(w, members))
            mix_dev = max_abs(mix - self.average.matrix)
            if mix_dev > ENSEMBLE_TOL:
                raise InvariantViolation("mixture", mix_dev)


def measure(m: POVM, s: State) -> np.ndarray:
    """Outcome probabilities Tr(M_j rho) as a real vector."""
    if m.shape != s.shape:
        raise ShapeMismatch("POVM and state live on different algebras")
    return np.array([float(np.trace(e @ s.matrix).real) for e in m.elements])


def prepare(m: POVM, s: State) -> Ensemble:
    """POVM-preparation of a state: weights from the Born rule, members
    sqrt(s) M_j sqrt(s) normalized.  Zero-probability outcomes are dropped."""
    probs = measure(m, s)
    root = mat_sqrt(s.matrix)
    weights = []
    members = []
    for p, e in zip(probs, m.elements):
        if p <= ZERO_PROB_THRESHOLD:
            continue
        weights.append(p)
        members.append(State(s.shape, (root @ e @ root) / p))
    return Ensemble(weights=np.array(weights), members=tuple(members), average=s)


def povm_from_ensemble(e: Ensemble, s: State, tol: float = ENSEMBLE_TOL) -> POVM:
    """POVM whose preparation of ``s`` reproduces the ensemble.

    Elements are inv_sqrt(s) p_j rho_j inv_sqrt(s) with the generalized
    inverse; when ``s`` is rank-deficient a completion element on the null
    space is appended so the elements resolve the identity of the full
    algebra (that element has probability zero under ``s``).
    """
    if e.average.shape != s.shape:
        raise ShapeMismatch("ensemble and state live on different algebras")
    proj = support_projector(s.matrix)
    complement = np.eye(s.shape.total_dim) - proj
    for member in e.members:
        leak = max_abs(complement @ member.matrix @ complement)
        if leak > tol:
            raise SupportViolation(
                f"ensemble member leaks outside the support of the state by {leak:.3e}"
            )
    mix_dev = max_abs(sum(p * m.matrix for p, m in zip(e.weights, e.members)) - s.matrix)
    if mix_dev > tol:
        raise InvariantViolation("mixture", mix_dev)
    inv_root = gen_inv_sqrt(s.matrix)
    elements = [inv_root @ (p * member.matrix) @ inv_root for p, member in zip(e.weights, e.members)]
    remainder = np.eye(s.shape.total_dim) - sum(elements)
    if max_abs(remainder) > POVM_SUM_TOL:
        elements.append(remainder)
    return POVM(shape=s.shape, elements=tuple(elements))


def sample(m: POVM, s: State, rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` outcomes by inverse-CDF over the outcome index order.

    Deterministic given the generator's seed; returns a count per element.
    """
    probs = np.clip(measure(m, s), 0.0, None)
    cdf = np.cumsum(probs)
    if cdf[-1] <= 0.0:
        raise InvariantViolation("probability_mass", 1.0)
    cdf = cdf / cdf[-1]
    draws = rng.random(int(n))
    outcomes = np.searchsorted(cdf, draws, side="right")
    return np.bincount(outcomes, minlength=len(m.elements))
