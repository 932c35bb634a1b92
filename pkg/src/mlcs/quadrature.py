"""Quadrature helpers shared by the measure, thermal and continuum modules.

Two schemes are kept deliberately distinct: an adaptive QUADPACK route
(scipy.integrate.quad, whose extrapolation also absorbs integrable endpoint
singularities) and a hand-assembled composite Gauss-Legendre rule.  Identity
checks that claim scheme independence run one integrand through both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "improper_quad",
    "gauss_legendre",
    "gauss_legendre_panels",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Improper-integral controls: fixed or auto-doubled cutoff, tolerance,
    node budget."""

    upper_cutoff: float | None = None
    abs_tol: float = 1e-10
    max_nodes: int = 100000

    def __post_init__(self):
        if self.upper_cutoff is not None and not (
            isinstance(self.upper_cutoff, (int, float)) and self.upper_cutoff > 0
        ):
            raise DomainError(f"upper_cutoff must be positive, got {self.upper_cutoff!r}")
        if not (self.abs_tol > 0.0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if not (isinstance(self.max_nodes, int) and self.max_nodes >= 100):
            raise DomainError(f"max_nodes must be an integer >= 100, got {self.max_nodes!r}")


_DEFAULT_SPEC = QuadratureSpec()


def resolve_cutoff(f, spec: QuadratureSpec, start: float = 32.0) -> float:
    """Upper limit for an integrand decaying at least exponentially past its
    bulk: double until |f(X)| * X drops under abs_tol (crude but safe bound
    on the remaining tail for such decay)."""
    if spec.upper_cutoff is not None:
        return float(spec.upper_cutoff)
    upper = float(start)
    while True:
        probe = abs(f(upper)) * upper
        if math.isnan(probe):
            raise ConvergenceError(f"integrand is NaN at x={upper}")
        if probe <= spec.abs_tol:
            return upper
        upper *= 2.0
        if upper > 1e9:
            raise ConvergenceError("cutoff search exceeded 1e9; integrand not decaying?")


def improper_quad(
    f,
    spec: QuadratureSpec | None = None,
    start: float = 32.0,
    rel_tol: float = 1e-10,
) -> tuple[float, float]:
    """Integrate f over [0, inf) as [0, cutoff]; returns (value, error estimate).

    The first unit panel is integrated separately so QUADPACK's extrapolation
    concentrates on any x**(p-1) behavior at the origin.
    """
    spec = spec or _DEFAULT_SPEC
    upper = resolve_cutoff(f, spec, start)
    limit = max(50, spec.max_nodes // 42)
    split = min(1.0, upper / 2.0)
    v1, e1 = integrate.quad(f, 0.0, split, epsabs=spec.abs_tol, epsrel=rel_tol, limit=limit)
    v2, e2 = integrate.quad(f, split, upper, epsabs=spec.abs_tol, epsrel=rel_tol, limit=limit)
    return v1 + v2, e1 + e2


def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    if order < 2:
        raise DomainError(f"order must be >= 2, got {order}")
    return np.polynomial.legendre.leggauss(order)


def gauss_legendre_panels(
    f,
    a: float,
    b: float,
    panels: int = 16,
    order: int = 32,
    vectorized: bool = True,
) -> float:
    """Composite fixed-order Gauss-Legendre over equal panels of [a, b].

    f is called on node arrays when vectorized, else per scalar node.
    """
    if not (b > a):
        raise DomainError(f"need b > a, got a={a}, b={b}")
    if panels < 1:
        raise DomainError(f"panels must be >= 1, got {panels}")
    nodes, weights = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        half = 0.5 * (right - left)
        xs = left + half * (nodes + 1.0)
        if vectorized:
            ys = np.asarray(f(xs), dtype=float)
        else:
            ys = np.array([f(x) for x in xs], dtype=float)
        total += half * float(np.dot(weights, ys))
    return total
