"""Limited-memory quasi-Newton drivers and their shared evaluation accounting.

Three optimizers share the curvature memory, line search, and momentum
schedule:

``lbfgs``
    Classic baseline. Direction ``d = -H g`` from the current gradient via
    the two-loop recursion, Armijo backtracking along ``d``, curvature pair
    ``(alpha d, g_new - g)``.

``lnaq``
    Look-ahead variant. Each iteration first shifts to ``w + mu v`` (``v``
    is the accumulated update vector, ``mu`` the scheduled momentum
    coefficient), evaluates the gradient there, and builds the direction
    from that shifted gradient. Costs two gradient evaluations per
    iteration, except the first, where ``mu_0 = 0`` makes the shift exactly
    zero and the entry gradient is reused.

``lmoq``
    Momentum-approximated variant of ``lnaq``. The shifted gradient is
    replaced by the linear combination ``(1 + mu) g_k - mu g_{k-1}`` of the
    two most recent iterate gradients, which is exact for quadratic
    objectives and removes the extra gradient evaluation: one per iteration,
    the same bill as ``lbfgs``.

Function and gradient evaluations are counted by construction: every
evaluation flows through a wrapper that increments the counters on the
optimizer state, so the ``fev``/``gev`` columns in a trace are exact bills,
not estimates. Each completed iteration appends one row to the trace; row 0
records the state at entry.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

import numpy as np

from .linesearch import LineSearchConfig, LineSearchResult, backtracking_search
from .memory import LmemBuffer
from .momentum import DEFAULT_GAMMA, DEFAULT_MU_CAP, MomentumSchedule
from .validation import (
    check_nonnegative,
    check_positive,
    check_positive_int,
    check_vector,
)

DEFAULT_MEMORY = 16
DEFAULT_KMAX = 10000
DEFAULT_EPSILON = 1e-6


class Objective(Protocol):
    """Anything exposing a scalar loss and its gradient on a flat vector."""

    def loss(self, w: np.ndarray) -> float: ...

    def grad(self, w: np.ndarray) -> np.ndarray: ...


class OptimizerKind(str, Enum):
    LBFGS = "lbfgs"
    LNAQ = "lnaq"
    LMOQ = "lmoq"

    @classmethod
    def from_string(cls, name: str) -> "OptimizerKind":
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown optimizer {name!r}; expected one of {valid}") from None


class DivergenceError(RuntimeError):
    """Loss or gradient went nonfinite; carries the partial run record."""

    def __init__(self, message: str, record: "RunRecord | None" = None):
        super().__init__(message)
        self.record = record


@dataclass(frozen=True)
class StepInfo:
    """Internals of one completed iteration, for tests and diagnostics."""

    alpha: float
    mu: float
    phi0: float
    dphi0: float
    ls_fev: int
    ls_converged: bool
    pair_accepted: bool


@dataclass
class OptimizerState:
    """Mutable per-run state shared by all step functions."""

    w: np.ndarray
    v: np.ndarray
    loss: float
    grad: np.ndarray
    schedule: MomentumSchedule
    memory: LmemBuffer
    grad_prev: np.ndarray | None = None
    k: int = 0
    fev: int = 0
    gev: int = 0
    terminated: bool = False
    last_step: StepInfo | None = None


class _CountedObjective:
    """Routes every evaluation through the state's fev/gev counters."""

    __slots__ = ("_objective", "_state")

    def __init__(self, objective: Objective, state: OptimizerState):
        self._objective = objective
        self._state = state

    def loss(self, w: np.ndarray) -> float:
        self._state.fev += 1
        return float(self._objective.loss(w))

    def grad(self, w: np.ndarray) -> np.ndarray:
        self._state.gev += 1
        return np.asarray(self._objective.grad(w), dtype=float)


def init_state(
    objective: Objective,
    w0,
    *,
    m: int = DEFAULT_MEMORY,
    schedule: MomentumSchedule | None = None,
) -> OptimizerState:
    """Evaluate the objective at the start point and assemble fresh state.

    Bills exactly one function and one gradient evaluation.
    """
    w0 = check_vector(w0, "w0")
    state = OptimizerState(
        w=w0.copy(),
        v=np.zeros_like(w0),
        loss=np.nan,
        grad=np.empty(0),
        schedule=schedule if schedule is not None else MomentumSchedule(),
        memory=LmemBuffer(m),
    )
    counted = _CountedObjective(objective, state)
    state.loss = counted.loss(state.w)
    state.grad = counted.grad(state.w)
    if state.grad.shape != state.w.shape:
        raise ValueError(
            f"gradient shape {state.grad.shape} does not match parameters {state.w.shape}"
        )
    return state


def _finish_step(
    state: OptimizerState,
    base: np.ndarray,
    direction: np.ndarray,
    direction_grad: np.ndarray,
    result: LineSearchResult,
    counted: _CountedObjective,
    mu: float,
    phi0: float,
    dphi0: float,
) -> OptimizerState:
    """Common tail of every step: move, refresh gradient, store the pair."""
    w_new = base + result.alpha * direction
    g_new = counted.grad(w_new)
    s = result.alpha * direction
    y = g_new - direction_grad
    accepted = state.memory.push_pair(s, y)
    # v is the realized update vector w_{k+1} - w_k, stored exactly.
    state.v = w_new - state.w
    state.grad_prev = state.grad
    state.w = w_new
    state.grad = g_new
    state.loss = result.phi_alpha
    state.k += 1
    state.last_step = StepInfo(
        alpha=result.alpha,
        mu=mu,
        phi0=phi0,
        dphi0=dphi0,
        ls_fev=result.fev_used,
        ls_converged=result.converged,
        pair_accepted=accepted,
    )
    return state


def _gate(state: OptimizerState, epsilon: float) -> bool:
    """Convergence gate: flag termination when the gradient norm is at most epsilon."""
    if float(np.linalg.norm(state.grad)) <= epsilon:
        state.terminated = True
        return True
    return False


def step_lbfgs(
    state: OptimizerState,
    objective: Objective,
    *,
    line_search: LineSearchConfig = LineSearchConfig(),
    epsilon: float = DEFAULT_EPSILON,
) -> OptimizerState:
    """One iteration of the baseline driver; mutates and returns ``state``."""
    if _gate(state, epsilon):
        return state
    counted = _CountedObjective(objective, state)
    g = state.grad
    d = -state.memory.two_loop(g)
    dphi0 = float(g @ d)
    phi0 = state.loss
    result = backtracking_search(
        lambda a: counted.loss(state.w + a * d), phi0, dphi0, line_search
    )
    return _finish_step(state, state.w, d, g, result, counted, 0.0, phi0, dphi0)


def step_lnaq(
    state: OptimizerState,
    objective: Objective,
    *,
    line_search: LineSearchConfig = LineSearchConfig(),
    epsilon: float = DEFAULT_EPSILON,
) -> OptimizerState:
    """One look-ahead iteration: gradient evaluated at the shifted point."""
    if _gate(state, epsilon):
        return state
    counted = _CountedObjective(objective, state)
    mu = state.schedule.next_mu()
    shift = mu * state.v
    if np.any(shift):
        base = state.w + shift
        phi0 = counted.loss(base)
        g_base = counted.grad(base)
        if not np.all(np.isfinite(g_base)):
            raise DivergenceError("gradient at shifted point is nonfinite")
    else:
        # Zero shift (always the case on the first iteration, where mu is 0):
        # the entry gradient IS the shifted-point gradient, no new evaluation.
        base = state.w
        phi0 = state.loss
        g_base = state.grad
    d = -state.memory.two_loop(g_base)
    dphi0 = float(g_base @ d)
    result = backtracking_search(
        lambda a: counted.loss(base + a * d), phi0, dphi0, line_search
    )
    return _finish_step(state, base, d, g_base, result, counted, mu, phi0, dphi0)


def step_lmoq(
    state: OptimizerState,
    objective: Objective,
    *,
    line_search: LineSearchConfig = LineSearchConfig(),
    epsilon: float = DEFAULT_EPSILON,
) -> OptimizerState:
    """One momentum-approximated iteration: no gradient at the shifted point.

    The combination ``(1 + mu) g_k - mu g_{k-1}`` stands in for the shifted
    gradient everywhere the look-ahead variant would use it: direction,
    directional derivative, and the ``y`` vector of the stored pair.
    """
    if _gate(state, epsilon):
        return state
    counted = _CountedObjective(objective, state)
    mu = state.schedule.next_mu()
    shift = mu * state.v
    g_prev = state.grad_prev if state.grad_prev is not None else state.grad
    r = (1.0 + mu) * state.grad - mu * g_prev
    if not np.all(np.isfinite(r)):
        raise DivergenceError("combined gradient is nonfinite")
    if np.any(shift):
        base = state.w + shift
        phi0 = counted.loss(base)
    else:
        base = state.w
        phi0 = state.loss
    d = -state.memory.two_loop(r)
    dphi0 = float(r @ d)
    result = backtracking_search(
        lambda a: counted.loss(base + a * d), phi0, dphi0, line_search
    )
    return _finish_step(state, base, d, r, result, counted, mu, phi0, dphi0)


_STEP_FUNCTIONS = {
    OptimizerKind.LBFGS: step_lbfgs,
    OptimizerKind.LNAQ: step_lnaq,
    OptimizerKind.LMOQ: step_lmoq,
}


@dataclass(frozen=True)
class TraceRow:
    """One trace line: iteration index, loss, gradient norm, cumulative bills."""

    k: int
    loss: float
    grad_norm: float
    fev: int
    gev: int
    elapsed_ms: float


@dataclass
class RunRecord:
    """Everything one run produced: the trace plus summary and diagnostics.

    ``rows`` has ``iterations + 1`` entries (row 0 is the entry state).
    ``alphas``/``mus``/``phi0s``/``dphi0s`` hold per-iteration internals for
    analysis; they are not part of the CSV serialization. ``iterates`` is
    populated only when the run was asked to keep parameter snapshots.
    """

    optimizer: str
    rows: list[TraceRow] = field(default_factory=list)
    iterations: int = 0
    final_loss: float = np.nan
    final_grad_norm: float = np.nan
    final_params: np.ndarray | None = None
    fev: int = 0
    gev: int = 0
    wall_seconds: float = 0.0
    converged: bool = False
    diverged: bool = False
    ls_exhaustions: int = 0
    alphas: list[float] = field(default_factory=list)
    mus: list[float] = field(default_factory=list)
    phi0s: list[float] = field(default_factory=list)
    dphi0s: list[float] = field(default_factory=list)
    seed: int | None = None
    meta: dict = field(default_factory=dict)
    iterates: list[np.ndarray] | None = None


def run(
    kind: OptimizerKind | str,
    objective: Objective,
    w0,
    *,
    m: int = DEFAULT_MEMORY,
    k_max: int = DEFAULT_KMAX,
    epsilon: float = DEFAULT_EPSILON,
    line_search: LineSearchConfig | None = None,
    gamma: float = DEFAULT_GAMMA,
    mu_cap: float = DEFAULT_MU_CAP,
    literal_theta: bool = False,
    keep_params: bool = False,
    seed: int | None = None,
    meta: dict | None = None,
) -> RunRecord:
    """Drive one optimizer until the gradient norm reaches ``epsilon`` or ``k_max`` iterations.

    Returns the full :class:`RunRecord`. A nonfinite loss or gradient on any
    iterate raises :class:`DivergenceError` whose ``record`` attribute holds
    the partial trace (flagged ``diverged=True``), including the offending
    row.
    """
    kind = OptimizerKind.from_string(kind) if isinstance(kind, str) else kind
    check_positive_int(k_max, "k_max")
    check_nonnegative(epsilon, "epsilon")
    ls = line_search if line_search is not None else LineSearchConfig()
    step = _STEP_FUNCTIONS[kind]
    schedule = MomentumSchedule(gamma=gamma, mu_cap=mu_cap, literal=literal_theta)

    t0 = time.perf_counter()
    state = init_state(objective, w0, m=m, schedule=schedule)
    record = RunRecord(optimizer=kind.value, seed=seed, meta=dict(meta or {}))
    if keep_params:
        record.iterates = [state.w.copy()]

    def append_row() -> TraceRow:
        row = TraceRow(
            k=state.k,
            loss=state.loss,
            grad_norm=float(np.linalg.norm(state.grad)),
            fev=state.fev,
            gev=state.gev,
            elapsed_ms=(time.perf_counter() - t0) * 1e3,
        )
        record.rows.append(row)
        return row

    def finalize(diverged: bool) -> None:
        record.iterations = state.k
        record.final_loss = state.loss
        record.final_grad_norm = float(np.linalg.norm(state.grad))
        record.final_params = state.w.copy()
        record.fev = state.fev
        record.gev = state.gev
        record.wall_seconds = time.perf_counter() - t0
        record.converged = state.terminated and not diverged
        record.diverged = diverged

    def check_finite() -> None:
        if not (np.isfinite(state.loss) and np.all(np.isfinite(state.grad))):
            finalize(diverged=True)
            raise DivergenceError(
                f"nonfinite loss or gradient at iteration {state.k}", record
            )

    append_row()
    check_finite()
    while not state.terminated and state.k < k_max:
        try:
            step(state, objective, line_search=ls, epsilon=epsilon)
        except DivergenceError as err:
            finalize(diverged=True)
            err.record = record
            raise
        if state.terminated:
            break
        info = state.last_step
        record.alphas.append(info.alpha)
        record.mus.append(info.mu)
        record.phi0s.append(info.phi0)
        record.dphi0s.append(info.dphi0)
        if not info.ls_converged:
            record.ls_exhaustions += 1
        if keep_params:
            record.iterates.append(state.w.copy())
        append_row()
        check_finite()
    finalize(diverged=False)
    return record


@dataclass(frozen=True)
class CostModel:
    """Inputs of the per-iteration arithmetic model: samples, parameters, memory, extra passes."""

    n: int
    d: int
    m: int
    zeta: float

    def __post_init__(self) -> None:
        check_positive_int(self.n, "n")
        check_positive_int(self.d, "d")
        check_positive_int(self.m, "m")
        check_nonnegative(self.zeta, "zeta")


@dataclass(frozen=True)
class CostEstimate:
    flops_per_iteration: float
    storage_floats: int


def theoretical_cost(model: CostModel) -> CostEstimate:
    """Arithmetic and storage bill of one limited-memory iteration.

    Flops: one gradient pass (n d), the two-loop recursion (4 m d), the
    update and pair bookkeeping (2 d), plus ``zeta`` extra function passes
    (zeta n d). Storage: the m pairs plus the iterate, (2 m + 1) d floats.
    """
    n, d, m, zeta = model.n, model.d, model.m, model.zeta
    flops = n * d + 4 * m * d + 2 * d + zeta * n * d
    storage = (2 * m + 1) * d
    return CostEstimate(flops_per_iteration=float(flops), storage_floats=storage)


class QuadraticObjective:
    """Convex quadratic ``0.5 (w - c)^T A (w - c)`` with SPD matrix ``A``.

    Smoke-test objective: the gradient is affine in ``w``, which makes the
    momentum-approximated and look-ahead drivers mathematically identical,
    so their trajectories must coincide to rounding error.
    """

    def __init__(self, A, center=None):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        if not np.allclose(A, A.T, rtol=1e-12, atol=1e-12):
            raise ValueError("A must be symmetric")
        self.A = A
        self.center = (
            np.zeros(A.shape[0]) if center is None else check_vector(center, "center", A.shape[0])
        )

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def loss(self, w: np.ndarray) -> float:
        r = np.asarray(w, dtype=float) - self.center
        return 0.5 * float(r @ (self.A @ r))

    def grad(self, w: np.ndarray) -> np.ndarray:
        r = np.asarray(w, dtype=float) - self.center
        return self.A @ r

    @classmethod
    def random(cls, dim: int, seed: int, condition: float = 10.0) -> "QuadraticObjective":
        """SPD quadratic with eigenvalues log-spaced in [1, condition]."""
        check_positive_int(dim, "dim")
        check_positive(condition, "condition")
        rng = np.random.default_rng(seed)
        Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        eigs = np.geomspace(1.0, condition, dim)
        A = (Q * eigs) @ Q.T
        A = 0.5 * (A + A.T)
        return cls(A, center=rng.standard_normal(dim))
