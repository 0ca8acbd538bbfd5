"""Bounded curvature-pair memory and the two-loop recursion.

Instead of storing a dense inverse-Hessian approximation, the limited-memory
optimizers keep only the last ``m`` accepted curvature pairs ``(s, y)``,
where ``s`` is a parameter displacement and ``y`` the matching gradient
difference. The product of the implicit inverse Hessian with an arbitrary
vector is then computed in O(m d) time by the classic two-loop recursion,
seeded with a diagonal matrix ``h0_scale * I`` whose scale
``(s.y) / (y.y)`` comes from the most recent accepted pair.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .validation import check_positive, check_positive_int, check_vector

# Pairs with y.s <= CURVATURE_FLOOR * |s| * |y| are rejected: their rho would
# be huge or negative and would destroy positive definiteness.
CURVATURE_FLOOR = 1e-10


@dataclass(frozen=True)
class CurvaturePair:
    """One accepted displacement/gradient-difference pair with its rho = 1/(y.s)."""

    s: np.ndarray
    y: np.ndarray
    rho: float


class LmemBuffer:
    """FIFO store of at most ``m`` curvature pairs plus the diagonal seed scale.

    Pushing an (m+1)-th pair evicts the oldest. Rejected pairs (curvature too
    small relative to |s||y|) consume no slot and leave ``h0_scale``
    untouched, so a run can survive occasional bad steps without corrupting
    the approximation.
    """

    def __init__(self, m: int, *, curvature_floor: float = CURVATURE_FLOOR):
        self.m = check_positive_int(m, "m")
        self.curvature_floor = check_positive(curvature_floor, "curvature_floor")
        self.h0_scale: float = 1.0
        self._pairs: deque[CurvaturePair] = deque(maxlen=self.m)

    def __len__(self) -> int:
        return len(self._pairs)

    @property
    def pairs(self) -> tuple[CurvaturePair, ...]:
        """Stored pairs, oldest first."""
        return tuple(self._pairs)

    @property
    def dim(self) -> int | None:
        """Dimension of the stored vectors, or None while empty."""
        return None if not self._pairs else self._pairs[-1].s.shape[0]

    def push_pair(self, s, y) -> bool:
        """Offer a pair for storage; return True if it was accepted.

        Acceptance requires ``y.s > curvature_floor * |s| * |y|``. On
        acceptance the pair enters the FIFO (evicting the oldest if full) and
        ``h0_scale`` is updated to ``(y.s) / (y.y)``.
        """
        s = check_vector(s, "s")
        y = check_vector(y, "y", expected_len=s.shape[0])
        if self.dim is not None and s.shape[0] != self.dim:
            raise ValueError(f"pair has dimension {s.shape[0]}, buffer holds {self.dim}")
        ys = float(y @ s)
        threshold = self.curvature_floor * float(np.linalg.norm(s)) * float(np.linalg.norm(y))
        if not ys > threshold:
            return False
        self._pairs.append(CurvaturePair(s=s.copy(), y=y.copy(), rho=1.0 / ys))
        self.h0_scale = ys / float(y @ y)
        return True

    def two_loop(self, r) -> np.ndarray:
        """Return the product of the implicit inverse Hessian with ``r``.

        Never mutates the buffer. With no stored pairs this is just
        ``h0_scale * r`` (identity scaling before the first acceptance).
        The operator is linear in ``r`` and positive definite as long as
        every stored pair has positive curvature, which acceptance enforces.
        """
        r = check_vector(r, "r")
        if self.dim is not None and r.shape[0] != self.dim:
            raise ValueError(f"r has dimension {r.shape[0]}, buffer holds {self.dim}")
        q = r.copy()
        pairs = self._pairs
        alphas = np.empty(len(pairs))
        # Backward pass, newest pair first.
        for i in range(len(pairs) - 1, -1, -1):
            p = pairs[i]
            alphas[i] = p.rho * float(p.s @ q)
            q -= alphas[i] * p.y
        q *= self.h0_scale
        # Forward pass, oldest pair first.
        for i in range(len(pairs)):
            p = pairs[i]
            beta = p.rho * float(p.y @ q)
            q += (alphas[i] - beta) * p.s
        return q
