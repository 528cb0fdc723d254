"""
Reconstruction error accounting for a single (alpha, T) fit.

Only the support-restricted form is checked:
``||W_s - alpha*T_s||^2 <= ||W_s||^2 * (1 - 1/|s|)``. It holds for every input
because alpha*T is the projection of W_s onto a sign pattern, and the
off-support energy is excluded since it can exceed the bound on tiny tensors.
"""

from typing import NamedTuple

import numpy as np

from dftn.constants import BOUND_SLACK
from dftn.errors import DegenerateInputError

from .config import QuantResult


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def reconstruction_bound_check(W: np.ndarray, result: QuantResult) -> BoundCheck:
    support = result.support_set
    if len(support) == 0:
        raise DegenerateInputError("reconstruction bound needs a nonempty support set")
    w = np.asarray(W, dtype=np.float64).ravel()[support]
    t = np.asarray(result.ternary, dtype=np.float64).ravel()[support]
    lhs = float(np.sum((w - result.alpha * t) ** 2))
    rhs = float(np.sum(w**2) * (1.0 - 1.0 / len(support)))
    return BoundCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs + BOUND_SLACK)
