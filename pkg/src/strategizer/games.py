"""Matrix-game fundamentals: payoffs, simplex strategies, game values via LP,
best-response sets, and minmax-strategy structure analysis.

Conventions: the optimizer is the row player (n actions), the learner the
column player (m actions). A is the optimizer's utility matrix, B the
learner's. Zero-sum means B = -A exactly. All indices are 0-based in code;
file formats and labels are 1-based (see fileio).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .errors import CapExceededError, DimensionMismatchError, InputError

DEFAULT_TOL = 1e-7

_LP_OPTS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}

# follow-up LPs pin columns at the float value from game_value; a slightly
# looser tolerance absorbs that value's own LP noise without hurting the
# margin test (tol is 1e-7)
_LP_OPTS_PINNED = {
    "primal_feasibility_tolerance": 1e-9,
    "dual_feasibility_tolerance": 1e-9,
}


def as_matrix(a) -> np.ndarray:
    """Validate and return a finite 2-D float payoff matrix."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.size == 0:
        raise InputError(f"payoff matrix must be 2-D and non-empty, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("payoff matrix contains non-finite entries")
    return m


class SimplexVector:
    """A probability distribution over a finite action set.

    Weights are validated to be non-negative (tiny negative noise up to 1e-9
    is clipped) and renormalized to sum to 1 at construction time.
    """

    __slots__ = ("weights",)

    def __init__(self, values):
        w = np.asarray(values, dtype=float).ravel()
        if w.size == 0:
            raise InputError("simplex vector needs at least one weight")
        if not np.all(np.isfinite(w)):
            raise InputError("simplex vector contains non-finite weights")
        if w.min() < -1e-9:
            raise InputError(f"simplex vector has negative weight {w.min():g}")
        w = np.maximum(w, 0.0)
        s = w.sum()
        if s <= 0.0:
            raise InputError("simplex vector weights sum to zero")
        w = w / s
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, dim: int) -> "SimplexVector":
        return cls(np.full(dim, 1.0 / dim))

    @classmethod
    def pure(cls, index: int, dim: int) -> "SimplexVector":
        w = np.zeros(dim)
        w[index] = 1.0
        return cls(w)

    @property
    def dim(self) -> int:
        return self.weights.size

    def __len__(self) -> int:
        return self.weights.size

    def __setattr__(self, name, value):
        raise AttributeError("SimplexVector is immutable")

    def __repr__(self):
        return f"SimplexVector({np.array2string(self.weights, precision=6)})"


def as_weights(x, dim: int | None = None, what: str = "strategy") -> np.ndarray:
    """Coerce a SimplexVector or array-like to a weight array, checking dim."""
    w = x.weights if isinstance(x, SimplexVector) else np.asarray(x, dtype=float).ravel()
    if dim is not None and w.size != dim:
        raise DimensionMismatchError(f"{what} has dimension {w.size}, expected {dim}")
    return w


class BimatrixGame:
    """A two-player matrix game (optimizer utility A, learner utility B)."""

    __slots__ = ("a", "b", "zero_sum")

    def __init__(self, a, b, zero_sum: bool = False):
        a = as_matrix(a)
        b = as_matrix(b)
        if a.shape != b.shape:
            raise DimensionMismatchError(
                f"utility matrices disagree: A is {a.shape}, B is {b.shape}"
            )
        if zero_sum and np.max(np.abs(a + b)) != 0.0:
            raise InputError("zero_sum flag requires B = -A exactly")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "zero_sum", bool(zero_sum))

    @classmethod
    def from_zero_sum(cls, a) -> "BimatrixGame":
        a = as_matrix(a)
        return cls(a, -a, zero_sum=True)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.a.shape[1]

    def __setattr__(self, name, value):
        raise AttributeError("BimatrixGame is immutable")

    def __repr__(self):
        kind = "zero-sum" if self.zero_sum else "general-sum"
        return f"BimatrixGame({self.n}x{self.m}, {kind})"


@dataclass(frozen=True)
class GameValueResult:
    """Minmax value with bracketing strategy certificates.

    min_j optimizer_strategy' A e_j and max_i e_i' A learner_strategy bracket
    the value within certificate_gap.
    """

    value: float
    optimizer_strategy: SimplexVector
    learner_strategy: SimplexVector
    certificate_gap: float


@dataclass(frozen=True)
class AssumptionWitness:
    """Witness that two best responses differ on the support of a minmax x."""

    x: SimplexVector
    i1: int
    i2: int
    k_action: int


def expected_payoff(x, game: BimatrixGame, y, side: str = "optimizer") -> float:
    """Return x' A y (side="optimizer") or x' B y (side="learner")."""
    xw = as_weights(x, game.n, "optimizer strategy")
    yw = as_weights(y, game.m, "learner strategy")
    if side == "optimizer":
        return float(xw @ game.a @ yw)
    if side == "learner":
        return float(xw @ game.b @ yw)
    raise InputError(f"side must be 'optimizer' or 'learner', got {side!r}")


def _row_player_lp(a: np.ndarray):
    """max_x min_j x'Ae_j over the simplex; variables (x, v), maximize v."""
    n, m = a.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-a.T, np.ones((m, 1))])
    b_ub = np.zeros(m)
    a_eq = np.zeros((1, n + 1))
    a_eq[0, :n] = 1.0
    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
        bounds=[(0, None)] * n + [(None, None)],
        method="highs", options=_LP_OPTS,
    )
    if not res.success:  # the LP is always feasible and bounded on the simplex
        raise RuntimeError(f"minmax LP failed unexpectedly: {res.message}")
    return SimplexVector(res.x[:n])


def game_value(a) -> GameValueResult:
    """Solve Val(A) = max_x min_y x'Ay = min_y max_x x'Ay by linear programming."""
    a = as_matrix(a)
    x = _row_player_lp(a)
    y = _row_player_lp(-a.T)  # the column player of A is the row player of -A'
    lo = float(np.min(x.weights @ a))
    hi = float(np.max(a @ y.weights))
    return GameValueResult(
        value=0.5 * (lo + hi),
        optimizer_strategy=x,
        learner_strategy=y,
        certificate_gap=hi - lo,
    )


def best_response_set(x, game: BimatrixGame, tol: float = DEFAULT_TOL) -> set[int]:
    """Column indices within tol of the learner's best payoff against x.

    Defined as the argmax of x'B; for zero-sum games this equals the argmin
    of x'A because B = -A.
    """
    if tol < 0:
        raise InputError("tol must be non-negative")
    xw = as_weights(x, game.n, "optimizer strategy")
    scores = xw @ game.b
    return set(np.flatnonzero(scores >= scores.max() - tol).tolist())


def _minmax_support_lp(a: np.ndarray, value: float, tight: tuple[int, ...]):
    """Max-margin minmax strategy with columns `tight` pinned at the value.

    Feasible x satisfy x'Ae_j = value for j in tight and
    x'Ae_j >= value + margin elsewhere; the margin is maximized.
    Returns (x, margin) or None if infeasible.
    """
    n, m = a.shape
    rest = [j for j in range(m) if j not in tight]
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.zeros((1 + len(tight), n + 1))
    a_eq[0, :n] = 1.0
    b_eq = np.zeros(1 + len(tight))
    b_eq[0] = 1.0
    for r, j in enumerate(tight):
        a_eq[1 + r, :n] = a[:, j]
        b_eq[1 + r] = value
    if rest:
        a_ub = np.zeros((len(rest), n + 1))
        b_ub = np.zeros(len(rest))
        for r, j in enumerate(rest):
            a_ub[r, :n] = -a[:, j]
            a_ub[r, -1] = 1.0
            b_ub[r] = -value
        t_bound = (0, None)
    else:
        a_ub, b_ub = None, None
        t_bound = (0, 0)  # no slack columns: plain feasibility
    res = linprog(
        c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
        bounds=[(0, None)] * n + [t_bound],
        method="highs", options=_LP_OPTS_PINNED,
    )
    if not res.success:
        return None
    return SimplexVector(res.x[:n]), float(res.x[-1])


def min_br_minmax(
    a, tol: float = DEFAULT_TOL, max_cols: int = 20
) -> tuple[SimplexVector, int]:
    """Minmax strategy with the fewest best responses, and that count k.

    Enumerates candidate best-response sets S in increasing cardinality and
    solves a max-margin feasibility LP for each: the first S whose non-members
    can all be held strictly above the value (margin > tol) is the answer.
    Worst case exponential in the number of columns; intended for small games.
    """
    a = as_matrix(a)
    n, m = a.shape
    if m > max_cols:
        raise CapExceededError(
            f"instance too large for exact min-BR search ({m} columns > cap {max_cols})"
        )
    value = game_value(a).value
    for size in range(1, m):
        for tight in combinations(range(m), size):
            sol = _minmax_support_lp(a, value, tight)
            if sol is not None and sol[1] > tol:
                return sol[0], size
    sol = _minmax_support_lp(a, value, tuple(range(m)))
    if sol is None:
        raise RuntimeError("degenerate minmax tie structure: no exact-BR set found")
    return sol[0], m


def check_assumption_no_pure(
    a, tol: float = DEFAULT_TOL
) -> AssumptionWitness | None:
    """Search for a minmax x with two best responses differing on support(x).

    For every column pair (i1, i2) and the rows where their payoffs differ by
    more than tol, an LP looks for a minmax strategy keeping both columns at
    the value while putting as much mass as possible on those rows. Any
    positive mass yields a witness; exhausting all pairs proves none exists.
    """
    a = as_matrix(a)
    n, m = a.shape
    value = game_value(a).value
    for i1, i2 in combinations(range(m), 2):
        rows = np.flatnonzero(np.abs(a[:, i1] - a[:, i2]) > tol)
        if rows.size == 0:
            continue
        c = np.zeros(n)
        c[rows] = -1.0  # maximize total mass on the differing rows
        a_eq = np.vstack([np.ones(n), a[:, i1], a[:, i2]])
        b_eq = np.array([1.0, value, value])
        others = [j for j in range(m) if j != i1 and j != i2]
        a_ub = -a[:, others].T if others else None
        b_ub = np.full(len(others), -value) if others else None
        res = linprog(
            c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
            bounds=[(0, None)] * n, method="highs", options=_LP_OPTS_PINNED,
        )
        if not res.success:
            continue
        mass = res.x[rows]
        if mass.sum() > tol:
            k = int(rows[np.argmax(mass)])
            return AssumptionWitness(x=SimplexVector(res.x), i1=i1, i2=i2, k_action=k)
    return None


# --- example games -----------------------------------------------------------

def matching_pennies() -> np.ndarray:
    """Optimizer utility of matching pennies: value 0, unique minmax (1/2, 1/2)."""
    return np.array([[1.0, -1.0], [-1.0, 1.0]])


def unique_br_game(n: int) -> np.ndarray:
    """(n+2) x (n+3) zero-sum game with value 1 and many minmax strategies.

    Mixing the first n rows uniformly leaves n+1 best responses, while mixing
    rows n-1 and n (0-based) half-half leaves a single best response (the
    all-ones last column), which is what makes the game useful for studying
    the ln(m/k) surplus. Requires n >= 3 for the single-best-response claim.
    """
    if n < 3:
        raise InputError("unique_br_game needs n >= 3")
    a = np.zeros((n + 2, n + 3))
    a[:n, :n] = n * np.eye(n)
    a[:n, n] = n
    a[:n, n + 1] = n
    a[n:, :n] = n
    a[n, n] = 2.0
    a[n + 1, n + 1] = 2.0
    a[:, n + 2] = 1.0
    return a
