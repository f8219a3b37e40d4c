"""Solutions of the constant-coefficient ODE ``y'' = rate * y``."""

from __future__ import annotations

import numpy as np

from .jets import XJet


def harmonic(rate: float, c_a: float, c_b: float, x) -> XJet:
    """General solution of ``y'' = rate * y`` with its first two derivatives.

    ``rate > 0``: ``c_a exp(k x) + c_b exp(-k x)`` with ``k = sqrt(rate)``;
    ``rate < 0``: ``c_a cos(k x) + c_b sin(k x)`` with ``k = sqrt(-rate)``;
    ``rate == 0``: ``c_a + c_b x``.
    """
    x = np.asarray(x, dtype=float)
    if rate > 0:
        k = np.sqrt(rate)
        ep, em = np.exp(k * x), np.exp(-k * x)
        f = c_a * ep + c_b * em
        return XJet(f, k * (c_a * ep - c_b * em), rate * f)
    if rate < 0:
        k = np.sqrt(-rate)
        c, s = np.cos(k * x), np.sin(k * x)
        f = c_a * c + c_b * s
        return XJet(f, k * (c_b * c - c_a * s), rate * f)
    return XJet(c_a + c_b * x, c_b + 0.0 * x, 0.0 * x)


def eval_f(b2: float, alpha1: float, alpha2: float, x):
    """The function ``f`` appearing in several operators: ``f'' - b2 f = 0``.

    The branch follows ``sign(b2)``: exponentials, trigonometric functions, or
    an affine function when ``b2 == 0``.

    >>> float(eval_f(0.0, 1.0, 2.0, 3.0))
    7.0
    """
    return harmonic(b2, alpha1, alpha2, x).f


def f_jet(b2: float, alpha1: float, alpha2: float, x) -> XJet:
    return harmonic(b2, alpha1, alpha2, x)
