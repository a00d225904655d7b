"""IRS-user association: matrices, codebook enumeration and max-min solvers.

All solvers rank associations by the closed-form average SINR, so they
operate on large-scale statistics only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytic import SinrEvaluator
from .scenario import DeploymentScenario

__all__ = [
    "AssociationMatrix",
    "SolveResult",
    "CodebookBudgetError",
    "DEFAULT_BUDGET",
    "codebook_users",
    "codebook",
    "exhaustive_search",
    "successive_refinement",
    "nearest_rule",
    "random_assignment",
]

DEFAULT_BUDGET = 1 << 22


class CodebookBudgetError(RuntimeError):
    """The K**L codebook is larger than the enumeration budget."""


class AssociationMatrix:
    """Binary ``K x L`` matrix whose columns are one-hot.

    ``lam[k, l] == 1`` means IRS ``l`` is tuned to user ``k``. Stored
    internally as the tuned-user index of each IRS.
    """

    __slots__ = ("users", "K")

    def __init__(self, users, K: int):
        users = np.asarray(users, dtype=int).reshape(-1)
        if K < 1 or np.any(users < 0) or np.any(users >= K):
            raise ValueError(f"user indices must lie in [0, {K})")
        self.users = users
        self.users.setflags(write=False)
        self.K = int(K)

    @classmethod
    def from_matrix(cls, lam) -> "AssociationMatrix":
        lam = np.asarray(lam)
        if lam.ndim != 2:
            raise ValueError("association matrix must be 2-D")
        if not np.all((lam == 0) | (lam == 1)):
            raise ValueError("association entries must be 0 or 1")
        if not np.all(lam.sum(axis=0) == 1):
            raise ValueError("each IRS must be associated with exactly one user")
        return cls(np.argmax(lam, axis=0), lam.shape[0])

    @property
    def L(self) -> int:
        return self.users.shape[0]

    @property
    def lam(self) -> np.ndarray:
        out = np.zeros((self.K, self.L), dtype=int)
        out[self.users, np.arange(self.L)] = 1
        return out

    def __array__(self, dtype=None, copy=None):
        return self.lam if dtype is None else self.lam.astype(dtype)

    def reassign(self, l: int, k: int) -> "AssociationMatrix":
        users = self.users.copy()
        users[l] = k
        return AssociationMatrix(users, self.K)

    def counts(self) -> np.ndarray:
        """Number of IRSs tuned to each user."""
        return np.bincount(self.users, minlength=self.K)

    def __eq__(self, other):
        if not isinstance(other, AssociationMatrix):
            return NotImplemented
        return self.K == other.K and np.array_equal(self.users, other.users)

    def __hash__(self):
        return hash((self.K, self.users.tobytes()))

    def __repr__(self):
        return f"AssociationMatrix(users={self.users.tolist()}, K={self.K})"


@dataclass(frozen=True, eq=False)
class SolveResult:
    assoc: AssociationMatrix
    min_sinr: float
    per_user: np.ndarray
    iterations: int = 0
    evaluations: int = 0
    trajectory: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "users": self.assoc.users.tolist(),
            "lambda": self.assoc.lam.tolist(),
            "min_sinr": self.min_sinr,
            "per_user": self.per_user.tolist(),
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "trajectory": list(self.trajectory),
        }


def _check_budget(K: int, L: int, budget: int) -> int:
    size = K**L
    if size > budget:
        raise CodebookBudgetError(
            f"codebook has K**L = {size} entries, above the budget of {budget}; "
            "use successive_refinement instead"
        )
    return size


def codebook_users(K: int, L: int, start: int = 1, stop: int | None = None, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Tuned-user indices of codebook entries ``start..stop-1`` (1-based indices).

    Entry ``n`` is read as base-``K`` digits, least significant first; digit
    ``l`` is the (0-based) user of IRS ``l``. Entry ``K**L`` wraps to all
    zeros, i.e. every IRS tuned to the first user.
    """
    size = _check_budget(K, L, budget)
    stop = size + 1 if stop is None else stop
    n = np.arange(start, stop, dtype=np.int64) % size
    powers = K ** np.arange(L, dtype=np.int64)
    return (n[:, None] // powers[None, :]) % K


def codebook(K: int, L: int, budget: int = DEFAULT_BUDGET):
    """Yield all ``K**L`` association matrices in codebook order."""
    size = _check_budget(K, L, budget)
    step = 4096
    for start in range(1, size + 1, step):
        for users in codebook_users(K, L, start, min(start + step, size + 1), budget):
            yield AssociationMatrix(users, K)


def _evaluator(scn, p, evaluator):
    return evaluator if evaluator is not None else SinrEvaluator(scn, p=p)


def exhaustive_search(
    scn: DeploymentScenario, p=None, budget: int = DEFAULT_BUDGET, chunk: int = 4096, evaluator=None
) -> SolveResult:
    """Best max-min association over the whole codebook.

    Ties keep the lowest codebook index.
    """
    K, L = scn.dims.K, scn.dims.L
    size = _check_budget(K, L, budget)
    ev = _evaluator(scn, p, evaluator)
    best_val, best_users, best_gamma = -np.inf, None, None
    for start in range(1, size + 1, chunk):
        users = codebook_users(K, L, start, min(start + chunk, size + 1), budget)
        gamma = ev.batch(users)
        mins = gamma.min(axis=1)
        i = int(np.argmax(mins))  # first maximizer within the chunk
        if mins[i] > best_val:
            best_val, best_users, best_gamma = float(mins[i]), users[i].copy(), gamma[i].copy()
    return SolveResult(
        assoc=AssociationMatrix(best_users, K),
        min_sinr=best_val,
        per_user=best_gamma,
        iterations=1,
        evaluations=size,
    )


def successive_refinement(
    scn: DeploymentScenario, p=None, init: AssociationMatrix | None = None, evaluator=None, max_iter: int | None = None
) -> SolveResult:
    """Greedy bottleneck-lifting search.

    Each round finds the bottleneck user, tries moving every IRS not yet
    tuned to it, and commits the move giving the largest new system
    minimum. A round that does not strictly raise the minimum is undone
    and ends the search. ``trajectory`` records the minimum before each
    round plus the final value.
    """
    K, L = scn.dims.K, scn.dims.L
    ev = _evaluator(scn, p, evaluator)
    assoc = init if init is not None else nearest_rule(scn)
    if assoc.K != K or assoc.L != L:
        raise ValueError("initial association does not match the scenario dimensions")
    evals0 = ev.evaluations
    gamma = ev(assoc.users)
    trajectory = [float(gamma.min())]
    iterations = 0
    max_iter = max_iter if max_iter is not None else L * (K - 1) + 1
    while iterations < max_iter:
        iterations += 1
        k = int(np.argmin(gamma))
        current = float(gamma[k])
        movable = np.flatnonzero(assoc.users != k)
        if movable.size == 0:
            break
        candidates = np.tile(assoc.users, (movable.size, 1))
        candidates[np.arange(movable.size), movable] = k
        trial_gamma = ev.batch(candidates)
        trial_min = trial_gamma.min(axis=1)
        best = int(np.argmax(trial_min))  # lowest IRS index on ties
        if not trial_min[best] > current:
            break
        assoc = assoc.reassign(int(movable[best]), k)
        gamma = trial_gamma[best]
        trajectory.append(float(trial_min[best]))
    return SolveResult(
        assoc=assoc,
        min_sinr=float(gamma.min()),
        per_user=gamma,
        iterations=iterations,
        evaluations=ev.evaluations - evals0,
        trajectory=trajectory,
    )


def nearest_rule(scn: DeploymentScenario) -> AssociationMatrix:
    """Tune each IRS to its closest user (lowest index on ties)."""
    return AssociationMatrix(np.argmin(scn.irs_user_distances(), axis=1), scn.dims.K)


def random_assignment(K: int, L: int, seed) -> AssociationMatrix:
    """Each IRS tuned to a user drawn uniformly and independently."""
    rng = np.random.default_rng(seed)
    return AssociationMatrix(rng.integers(0, K, size=L), K)
