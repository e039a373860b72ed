"""The three learner algorithms behind one interface, plus the round-by-round
simulator.

All learners are functions of the cumulative historical reward vector h:
MWU plays softmax(eta * h), replicator dynamics is its continuous-time
analogue driven by the integrated payoff, and best-response plays the
lexicographically-first argmax of h. The simulator's round convention is
the standard one: the learner commits y(t) from the history through round
t-1, then observes x(t).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import logsumexp

from .errors import DimensionMismatchError, InputError, PreconditionError
from .games import BimatrixGame, SimplexVector, as_weights

MWU = "mwu"
REPLICATOR = "replicator"
BEST_RESPONSE = "best_response"
LEARNER_KINDS = (MWU, REPLICATOR, BEST_RESPONSE)


def softmax(z: np.ndarray) -> np.ndarray:
    """Overflow-safe softmax (max-subtracted before exponentiation)."""
    z = np.asarray(z, dtype=float)
    p = np.exp(z - z.max(axis=-1, keepdims=True))
    return p / p.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class LearnerState:
    """Cumulative historical reward vector plus the step-size parameter.

    For kind="best_response" eta is unused and ignored.
    """

    h: np.ndarray
    eta: float
    kind: str
    round: int = 0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.ndim != 1 or not np.all(np.isfinite(h)):
            raise InputError("historical rewards must be a finite 1-D vector")
        h.flags.writeable = False
        object.__setattr__(self, "h", h)
        if self.kind not in LEARNER_KINDS:
            raise InputError(f"unknown learner kind {self.kind!r}")
        if self.kind != BEST_RESPONSE:
            if not self.eta > 0:
                raise InputError("eta must be positive")
            if self.eta > 0.5:
                warnings.warn(
                    f"step size eta={self.eta:g} exceeds 1/2; MWU guarantees are "
                    "usually stated for eta <= 1/2",
                    stacklevel=2,
                )

    @classmethod
    def initial(cls, kind: str, m: int, eta: float = 1.0, h0=None) -> "LearnerState":
        h = np.zeros(m) if h0 is None else np.asarray(h0, dtype=float)
        if h.shape != (m,):
            raise DimensionMismatchError(f"h0 has dimension {h.size}, expected {m}")
        return cls(h=h, eta=eta, kind=kind)


@dataclass(frozen=True)
class Schedule:
    """The optimizer's plan: piecewise-constant strategies over time segments.

    Discrete mode: each segment is (count, strategy) with a positive integer
    count of rounds. Continuous mode: (duration, strategy) with duration > 0.
    """

    mode: str
    segments: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.mode not in ("discrete", "continuous"):
            raise InputError(f"schedule mode must be discrete or continuous, got {self.mode!r}")
        segs = []
        dim = None
        for length, strategy in self.segments:
            if self.mode == "discrete":
                if int(length) != length or length <= 0:
                    raise InputError(f"discrete segment count must be a positive integer, got {length!r}")
                length = int(length)
            else:
                length = float(length)
                if not length > 0:
                    raise InputError(f"segment duration must be positive, got {length!r}")
            x = strategy if isinstance(strategy, SimplexVector) else SimplexVector(strategy)
            if dim is None:
                dim = x.dim
            elif x.dim != dim:
                raise DimensionMismatchError(
                    f"segment strategy has dimension {x.dim}, expected {dim}"
                )
            segs.append((length, x))
        object.__setattr__(self, "segments", tuple(segs))

    @classmethod
    def constant(cls, strategy, total, mode: str = "discrete") -> "Schedule":
        if total == 0:
            return cls(mode=mode, segments=())
        return cls(mode=mode, segments=((total, strategy),))

    @classmethod
    def from_rounds(cls, strategies) -> "Schedule":
        return cls(mode="discrete", segments=tuple((1, s) for s in strategies))

    @property
    def total(self):
        return sum(length for length, _ in self.segments)

    @property
    def dim(self) -> int | None:
        return self.segments[0][1].dim if self.segments else None

    def round_strategies(self) -> np.ndarray:
        """Expand a discrete schedule to a (T, n) array of per-round strategies."""
        if self.mode != "discrete":
            raise PreconditionError("round_strategies requires a discrete schedule")
        if not self.segments:
            return np.zeros((0, 0))
        return np.concatenate([np.tile(x.weights, (c, 1)) for c, x in self.segments])

    def time_average(self) -> np.ndarray:
        """The schedule's time-average strategy (1/T) * integral of x(s) ds."""
        if not self.segments:
            raise PreconditionError("cannot average an empty schedule")
        acc = sum(length * x.weights for length, x in self.segments)
        return acc / self.total

    def integral_to(self, t: float) -> np.ndarray:
        """Exact integral of x(s) ds over [0, t] for a continuous schedule."""
        if self.mode != "continuous":
            raise PreconditionError("integral_to requires a continuous schedule")
        if t < -1e-12 or t > self.total + 1e-9:
            raise InputError(f"time {t:g} outside the schedule horizon [0, {self.total:g}]")
        dim = self.dim
        acc = np.zeros(dim if dim is not None else 0)
        remaining = max(t, 0.0)
        for length, x in self.segments:
            step = min(length, remaining)
            acc += step * x.weights
            remaining -= step
            if remaining <= 0:
                break
        return acc


@dataclass(frozen=True)
class Trajectory:
    """Per-round record of a simulated play-out plus reward totals."""

    mode: str
    t: np.ndarray
    optimizer_strategy: np.ndarray
    learner_strategy: np.ndarray
    optimizer_reward: np.ndarray
    learner_reward: np.ndarray
    h_after: np.ndarray
    totals: tuple[float, float]

    @property
    def rounds(self) -> int:
        return self.t.size


def mwu_strategy(state: LearnerState) -> SimplexVector:
    """softmax(eta * h): the MWU play given the current historical rewards."""
    if state.kind != MWU:
        raise PreconditionError(f"mwu_strategy needs an MWU state, got kind={state.kind!r}")
    return SimplexVector(softmax(state.eta * state.h))


def learner_update(state: LearnerState, x, game: BimatrixGame) -> LearnerState:
    """Accumulate one round of play: h' = h + B' x. Applies to every kind."""
    xw = as_weights(x, game.n, "optimizer strategy")
    if state.h.size != game.m:
        raise DimensionMismatchError(
            f"history has dimension {state.h.size}, game has {game.m} columns"
        )
    return LearnerState(
        h=state.h + game.b.T @ xw, eta=state.eta, kind=state.kind, round=state.round + 1
    )


def replicator_strategy(
    h0, schedule: Schedule, t: float, eta: float, game: BimatrixGame
) -> SimplexVector:
    """Replicator-dynamics play at time t under a piecewise-constant schedule.

    y_i(t) is proportional to exp(eta * (h0_i + integral_0^t x(s)' B e_i ds));
    the integral is a finite sum over whole and partial segments, so no
    quadrature is involved.
    """
    if schedule.mode != "continuous":
        raise PreconditionError("replicator_strategy requires a continuous schedule")
    h0 = np.zeros(game.m) if h0 is None else as_weights(h0, game.m, "h0")
    xint = schedule.integral_to(t)
    if xint.size != game.n:
        raise DimensionMismatchError(
            f"schedule strategies have dimension {xint.size}, game has {game.n} rows"
        )
    h = h0 + game.b.T @ xint
    return SimplexVector(softmax(eta * h))


def br_action(state: LearnerState) -> int:
    """Lexicographically-first maximizer of h (exact float comparison)."""
    if state.kind != BEST_RESPONSE:
        raise PreconditionError(f"br_action needs a best-response state, got kind={state.kind!r}")
    return int(np.argmax(state.h))


def _simulate_discrete(game, schedule, learner_kind, eta, h0) -> Trajectory:
    x_rounds = schedule.round_strategies()
    big_t = x_rounds.shape[0]
    if big_t and x_rounds.shape[1] != game.n:
        raise DimensionMismatchError(
            f"schedule strategies have dimension {x_rounds.shape[1]}, game has {game.n} rows"
        )
    if big_t == 0:
        empty = np.zeros((0, 0))
        return Trajectory(
            mode="discrete", t=np.zeros(0, dtype=int),
            optimizer_strategy=empty, learner_strategy=empty,
            optimizer_reward=np.zeros(0), learner_reward=np.zeros(0),
            h_after=empty, totals=(0.0, 0.0),
        )
    increments = x_rounds @ game.b  # row t is B' x(t)
    h_after = h0 + np.cumsum(increments, axis=0)
    h_before = np.vstack([h0, h_after[:-1]])
    if learner_kind == MWU:
        y_rounds = softmax(eta * h_before)
    else:  # best response: one-hot first argmax
        y_rounds = np.zeros((big_t, game.m))
        y_rounds[np.arange(big_t), np.argmax(h_before, axis=1)] = 1.0
    r_opt = np.einsum("ti,ij,tj->t", x_rounds, game.a, y_rounds)
    r_lrn = np.einsum("ti,ij,tj->t", x_rounds, game.b, y_rounds)
    return Trajectory(
        mode="discrete", t=np.arange(1, big_t + 1),
        optimizer_strategy=x_rounds, learner_strategy=y_rounds,
        optimizer_reward=r_opt, learner_reward=r_lrn,
        h_after=h_after, totals=(float(r_opt.sum()), float(r_lrn.sum())),
    )


def _simulate_replicator(game, schedule, eta, h0) -> Trajectory:
    """One trajectory row per segment; rewards are exact per segment.

    The learner's segment reward is the log-partition increment
    [lse(eta*h(end)) - lse(eta*h(start))]/eta for any game. The optimizer's
    reward equals minus that in zero-sum games and is integrated numerically
    otherwise.
    """
    segs = schedule.segments
    n_seg = len(segs)
    t_end = np.zeros(n_seg)
    xs = np.zeros((n_seg, game.n))
    ys = np.zeros((n_seg, game.m))
    r_opt = np.zeros(n_seg)
    r_lrn = np.zeros(n_seg)
    h_after = np.zeros((n_seg, game.m))
    h = h0.astype(float).copy()
    clock = 0.0
    for s, (dur, x) in enumerate(segs):
        xw = x.weights
        if xw.size != game.n:
            raise DimensionMismatchError(
                f"segment strategy has dimension {xw.size}, game has {game.n} rows"
            )
        drift = game.b.T @ xw
        h_end = h + dur * drift
        lrn = (logsumexp(eta * h_end) - logsumexp(eta * h)) / eta
        if game.zero_sum:
            opt = -lrn
        else:
            def inst(u, h=h, drift=drift, xw=xw):
                return float(xw @ game.a @ softmax(eta * (h + u * drift)))
            opt, _ = quad(inst, 0.0, dur, limit=200)
        ys[s] = softmax(eta * h)  # the learner's play as the segment begins
        xs[s] = xw
        r_opt[s] = opt
        r_lrn[s] = lrn
        h = h_end
        clock += dur
        t_end[s] = clock
        h_after[s] = h
    return Trajectory(
        mode="continuous", t=t_end,
        optimizer_strategy=xs, learner_strategy=ys,
        optimizer_reward=r_opt, learner_reward=r_lrn,
        h_after=h_after, totals=(float(r_opt.sum()), float(r_lrn.sum())),
    )


def simulate(
    game: BimatrixGame,
    schedule: Schedule,
    learner_kind: str,
    eta: float = 1.0,
    h0=None,
) -> Trajectory:
    """Play a full schedule against a learner and record the trajectory.

    MWU and best-response run on discrete schedules; replicator dynamics on
    continuous ones. The learner's strategy in round t depends on rounds
    1..t-1 only.
    """
    if learner_kind not in LEARNER_KINDS:
        raise InputError(f"unknown learner kind {learner_kind!r}")
    h0 = np.zeros(game.m) if h0 is None else as_weights(h0, game.m, "h0")
    if learner_kind == REPLICATOR:
        if schedule.mode != "continuous":
            raise PreconditionError("replicator dynamics needs a continuous schedule")
        if not eta > 0:
            raise InputError("eta must be positive")
        return _simulate_replicator(game, schedule, eta, h0)
    if schedule.mode != "discrete":
        raise PreconditionError(f"{learner_kind} needs a discrete schedule")
    if learner_kind == MWU and not eta > 0:
        raise InputError("eta must be positive")
    return _simulate_discrete(game, schedule, learner_kind, eta, h0)
