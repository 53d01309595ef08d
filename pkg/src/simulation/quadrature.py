"""
Adaptive Simpson quadrature

Iterative (explicit stack) form so deep subdivision near a curved endpoint
cannot hit the interpreter recursion limit.
"""
import logging
from typing import Callable

logger = logging.getLogger(__name__)

DEFAULT_MAX_EVALUATIONS = 10 ** 6
# Panels evaluated up front before adapting, keeps the first error estimate honest
INITIAL_PANELS = 8
MAX_DEPTH = 60


class QuadratureError(RuntimeError):
    """Adaptive quadrature exhausted its evaluation budget"""


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     rel_tol: float = 1e-8,
                     max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> float:
    """
    Integrate f over [a, b] to a relative tolerance

    Args:
        f: Smooth integrand, finite on the closed interval
        a: Lower limit
        b: Upper limit
        rel_tol: Relative tolerance on the integral, in (0, 1e-3]
        max_evaluations: Budget of integrand evaluations

    Returns:
        The integral; 0 for an empty interval and negated for a > b

    Raises:
        QuadratureError: If the budget runs out before convergence
    """
    if not 0 < rel_tol <= 1e-3:
        raise ValueError(f"Relative tolerance must be in (0, 1e-3], got {rel_tol}")
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, rel_tol, max_evaluations)

    evaluations = 0

    def evaluate(x: float) -> float:
        nonlocal evaluations
        evaluations += 1
        if evaluations > max_evaluations:
            raise QuadratureError(
                f"Adaptive Simpson exceeded {max_evaluations} evaluations on [{a}, {b}]"
            )
        return float(f(x))

    # ---------- INITIAL PARTITION ----------
    width = (b - a) / INITIAL_PANELS
    nodes = [a + i * width for i in range(INITIAL_PANELS)] + [b]
    values = [evaluate(x) for x in nodes]
    stack = []
    estimate = 0.0
    for i in range(INITIAL_PANELS):
        left, right = nodes[i], nodes[i + 1]
        middle = 0.5 * (left + right)
        fm = evaluate(middle)
        whole = _simpson(values[i], fm, values[i + 1], right - left)
        estimate += whole
        stack.append((left, right, values[i], fm, values[i + 1], whole, 0))

    abs_tol = rel_tol * abs(estimate)

    # ---------- ADAPTIVE REFINEMENT ----------
    total = 0.0
    while stack:
        left, right, fa, fm, fb, whole, depth = stack.pop()
        middle = 0.5 * (left + right)
        f_left = evaluate(0.5 * (left + middle))
        f_right = evaluate(0.5 * (middle + right))
        s_left = _simpson(fa, f_left, fm, middle - left)
        s_right = _simpson(fm, f_right, fb, right - middle)
        error = (s_left + s_right - whole) / 15.0

        share = abs_tol * (right - left) / (b - a)
        if abs(error) <= share or depth >= MAX_DEPTH:
            if depth >= MAX_DEPTH:
                logger.warning("Quadrature hit depth %d near x=%.6g", MAX_DEPTH, middle)
            total += s_left + s_right + error
            continue
        stack.append((left, middle, fa, f_left, fm, s_left, depth + 1))
        stack.append((middle, right, fm, f_right, fb, s_right, depth + 1))

    logger.debug("Quadrature on [%.6g, %.6g] used %d evaluations", a, b, evaluations)
    return total
