"""Limited-memory quasi-Newton optimizers with Nesterov momentum.

Three drivers built on one shared kernel (curvature-pair memory, two-loop
recursion, Armijo backtracking, momentum schedule):

- ``lbfgs``: the classic limited-memory baseline;
- ``lnaq``: look-ahead variant, gradient taken at the momentum-shifted point;
- ``lmoq``: momentum-approximated variant of ``lnaq`` that replaces the
  shifted gradient with a combination of past gradients, halving the
  gradient bill.

The package also ships the feed-forward network objective, the Levy
regression benchmark, a scikit-learn estimator facade, and the ``lmqn-bench``
CLI harness with exact function/gradient evaluation accounting.
"""

from .estimator import QuasiNewtonMLPRegressor
from .harness import BenchmarkResult, RunConfig, run_benchmark
from .levy import LevySpec, generate_dataset, levy_value, levy_values
from .linesearch import (
    LineSearchConfig,
    LineSearchResult,
    NondescentDirectionError,
    backtracking_search,
)
from .memory import CurvaturePair, LmemBuffer
from .mlp import Dataset, Network, NetworkObjective, init_params
from .momentum import MomentumSchedule, advance_theta, compute_mu
from .optim import (
    CostEstimate,
    CostModel,
    DivergenceError,
    OptimizerKind,
    OptimizerState,
    QuadraticObjective,
    RunRecord,
    TraceRow,
    init_state,
    run,
    step_lbfgs,
    step_lmoq,
    step_lnaq,
    theoretical_cost,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkResult",
    "CostEstimate",
    "CostModel",
    "CurvaturePair",
    "Dataset",
    "DivergenceError",
    "LevySpec",
    "LineSearchConfig",
    "LineSearchResult",
    "LmemBuffer",
    "MomentumSchedule",
    "Network",
    "NetworkObjective",
    "NondescentDirectionError",
    "OptimizerKind",
    "OptimizerState",
    "QuadraticObjective",
    "QuasiNewtonMLPRegressor",
    "RunConfig",
    "RunRecord",
    "TraceRow",
    "advance_theta",
    "backtracking_search",
    "compute_mu",
    "generate_dataset",
    "init_params",
    "init_state",
    "levy_value",
    "levy_values",
    "run",
    "run_benchmark",
    "step_lbfgs",
    "step_lmoq",
    "step_lnaq",
    "theoretical_cost",
    "__version__",
]
