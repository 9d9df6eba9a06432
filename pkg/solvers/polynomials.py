"""
Exponential and rational sums P1..P4 whose roots fix the SNR thresholds.

P2' = -P1/x^2, so roots of P1 are the turning points of P2. P3 and P4 are the
Cauchy-noise counterparts; cauchy_cross is the Cauchy analogue of P2.
"""
import math
from typing import Callable

import numpy as np

from core.analytic_mse import UNDERFLOW_EXPONENT
from core.errors import DomainError
from core.model import CoefficientTable, coefficient_table

_CHUNK_ELEMENTS = 2_000_000


def _evaluate(x, table: CoefficientTable, kernel: Callable, decays: bool):
    """sum_m gamma_m * kernel(theta_m, x^2) for each x, chunked to bound memory."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr <= 0):
        raise DomainError("polynomial sums are defined for x > 0")
    theta, gamma = table.theta, table.gamma
    if decays:
        active = int(np.searchsorted(theta, UNDERFLOW_EXPONENT / arr.min() ** 2, side="right"))
        theta, gamma = theta[:active], gamma[:active]
    out = np.zeros_like(arr)
    if len(theta):
        step = max(1, _CHUNK_ELEMENTS // len(theta))
        for start in range(0, arr.size, step):
            x2 = arr[start:start + step, None] ** 2
            out[start:start + step] = (gamma * kernel(theta, x2)).sum(axis=1)
    return float(out[0]) if np.ndim(x) == 0 else out


def _p1_kernel(theta, x2):
    return np.exp(-theta * x2) * (1.0 + 2.0 * theta * x2)


def _p2_kernel(theta, x2):
    return np.exp(-theta * x2)


def _p3_kernel(theta, x2):
    return (1.0 + 3.0 * theta * x2) / (1.0 + theta * x2) ** 2


def _p4_kernel(theta, x2):
    return 1.0 / (1.0 + theta * x2) ** 2


def _cross_kernel(theta, x2):
    return 1.0 / (1.0 + theta * x2)


def p1_values(table: CoefficientTable, x):
    return _evaluate(x, table, _p1_kernel, decays=True)


def p2_values(table: CoefficientTable, x):
    return _evaluate(x, table, _p2_kernel, decays=True) / np.asarray(x, dtype=float)


def p3_values(table: CoefficientTable, x):
    return _evaluate(x, table, _p3_kernel, decays=False)


def p4_values(table: CoefficientTable, x):
    return _evaluate(x, table, _p4_kernel, decays=False)


def cauchy_cross_values(table: CoefficientTable, x):
    return _evaluate(x, table, _cross_kernel, decays=False) / np.asarray(x, dtype=float)


def poly_p1(N: int, x):
    return p1_values(coefficient_table(N), x)


def poly_p2(N: int, x):
    return p2_values(coefficient_table(N), x)


def poly_p3(N: int, x):
    return p3_values(coefficient_table(N), x)


def poly_p4(N: int, x):
    return p4_values(coefficient_table(N), x)


def p1_root_bound(N: int) -> float:
    """Every positive root of P1 lies below sqrt(3.96/(2N-3))."""
    return math.sqrt(3.96 / (2 * N - 3))
