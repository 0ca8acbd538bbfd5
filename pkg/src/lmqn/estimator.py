"""Scikit-learn estimator facade over the quasi-Newton drivers.

:class:`QuasiNewtonMLPRegressor` trains the package's feed-forward network
(sigmoid hidden layer, linear output) on tabular regression data with any of
the three optimizers. It follows the scikit-learn contract: constructor
arguments are stored verbatim, validation happens in ``fit``, fitted
attributes carry a trailing underscore, and ``get_params``/``set_params``/
``clone``/``GridSearchCV`` all compose.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .linesearch import LineSearchConfig
from .mlp import Dataset, Network, NetworkObjective, forward, init_params
from .momentum import DEFAULT_GAMMA, DEFAULT_MU_CAP
from .optim import DEFAULT_EPSILON, DEFAULT_KMAX, DEFAULT_MEMORY, OptimizerKind, run
from .validation import check_positive_int


class QuasiNewtonMLPRegressor(RegressorMixin, BaseEstimator):
    """Single-hidden-layer network regressor trained by a limited-memory quasi-Newton solver.

    Parameters
    ----------
    hidden_units : int, default=50
        Width of the sigmoid hidden layer.
    solver : {'lbfgs', 'lnaq', 'lmoq'}, default='lmoq'
        Which driver performs the training run.
    memory : int, default=16
        Number of curvature pairs kept by the limited-memory approximation.
    max_iter : int, default=10000
        Iteration budget.
    tol : float, default=1e-6
        Training stops once the gradient norm is at most this.
    gamma, mu_cap, literal_theta
        Momentum-schedule constants; see :mod:`lmqn.momentum`.
    armijo_c, backtrack_factor, alpha_init, max_backtracks
        Line-search constants; see :mod:`lmqn.linesearch`.
    random_state : int, RandomState instance or None, default=None
        Seeds the weight initialization. Two estimators given the same
        integer here start from identical weights regardless of ``solver``,
        which is what makes paired solver comparisons meaningful.

    Attributes
    ----------
    params_ : ndarray
        Trained flat parameter vector.
    initial_params_ : ndarray
        The starting weights (for paired-run verification).
    record_ : RunRecord
        Full optimization trace and evaluation bills.
    n_iter_ : int
        Iterations actually performed.
    loss_ : float
        Final training loss.
    """

    def __init__(
        self,
        hidden_units: int = 50,
        solver: str = "lmoq",
        memory: int = DEFAULT_MEMORY,
        max_iter: int = DEFAULT_KMAX,
        tol: float = DEFAULT_EPSILON,
        gamma: float = DEFAULT_GAMMA,
        mu_cap: float = DEFAULT_MU_CAP,
        literal_theta: bool = False,
        armijo_c: float = 1e-3,
        backtrack_factor: float = 0.5,
        alpha_init: float = 1.0,
        max_backtracks: int = 30,
        random_state=None,
    ):
        self.hidden_units = hidden_units
        self.solver = solver
        self.memory = memory
        self.max_iter = max_iter
        self.tol = tol
        self.gamma = gamma
        self.mu_cap = mu_cap
        self.literal_theta = literal_theta
        self.armijo_c = armijo_c
        self.backtrack_factor = backtrack_factor
        self.alpha_init = alpha_init
        self.max_backtracks = max_backtracks
        self.random_state = random_state

    def fit(self, X, y):
        """Train the network; raises DivergenceError if the run goes nonfinite."""
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        kind = OptimizerKind.from_string(self.solver)
        hidden = check_positive_int(self.hidden_units, "hidden_units")
        line_search = LineSearchConfig(
            armijo_c=self.armijo_c,
            backtrack_factor=self.backtrack_factor,
            alpha_init=self.alpha_init,
            max_backtracks=self.max_backtracks,
        )
        net = Network((X.shape[1], hidden, 1))
        data = Dataset(inputs=X, targets=y.reshape(-1, 1))
        rs = check_random_state(self.random_state)
        init_seed = int(rs.randint(np.iinfo(np.int32).max))
        w0 = init_params(net, init_seed)
        record = run(
            kind,
            NetworkObjective(net, data),
            w0,
            m=self.memory,
            k_max=self.max_iter,
            epsilon=self.tol,
            line_search=line_search,
            gamma=self.gamma,
            mu_cap=self.mu_cap,
            literal_theta=self.literal_theta,
            seed=init_seed,
        )
        self.network_ = net
        self.params_ = record.final_params
        self.initial_params_ = w0.copy()
        self.record_ = record
        self.n_iter_ = record.iterations
        self.loss_ = record.final_loss
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """Network outputs for each row of X, as a 1-D array."""
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, but the model was fit with {self.n_features_in_}"
            )
        return forward(self.network_, self.params_, X).ravel()
