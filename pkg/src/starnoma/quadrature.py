"""Gauss-Chebyshev and Gauss-Laguerre rules at the orders the outage/rate
formulas consume (U = 50 Chebyshev nodes, P = 300 Laguerre nodes).

Chebyshev nodes/weights are closed-form.  Laguerre rules come from the
Golub-Welsch eigenproblem of the Jacobi matrix (diagonal 2k+1, off-diagonal
k): the textbook factorial weight formula overflows catastrophically at
P = 300, the eigen-decomposition form does not.  The symmetric-tridiagonal
QL solver is implemented here so rule generation has no external
dependencies and is bit-reproducible.

Note on weight range: true Laguerre weights decay like e^{-node}; above
order ~185 the largest-node weights fall below the double-precision
denormal floor and are stored as 0.0.  Their contribution to any bounded
integrand is below 1e-300, so rule accuracy is unaffected.
"""

from __future__ import annotations

import csv
import enum
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergenceError


class Family(enum.Enum):
    CHEBYSHEV_FIRST_KIND = "chebyshev"
    LAGUERRE = "laguerre"


@dataclass(frozen=True)
class QuadratureRule:
    """An immutable Gauss rule: strictly increasing nodes, matched weights.

    For the Laguerre family, ``sum(w * f(x))`` approximates
    ``int_0^inf f(x) e^-x dx``.  For Chebyshev (first kind), the stored
    weights are the b_u = (pi/2U) sqrt(1 - x_u^2) factors the closed-form
    outage sums consume; the plain integral int_{-1}^{1} f dx is
    ``sum(2 * w * f(x))`` (see :meth:`integrate`).
    """

    family: Family
    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if len(nodes) != self.order or len(weights) != self.order:
            raise ValueError("nodes/weights length must equal order")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        if self.family is Family.LAGUERRE and np.any(nodes <= 0):
            raise ValueError("Laguerre nodes must be positive")
        if self.family is Family.CHEBYSHEV_FIRST_KIND and (
                nodes[0] <= -1 or nodes[-1] >= 1):
            raise ValueError("Chebyshev nodes must lie in (-1, 1)")

    def integrate(self, f) -> float:
        """Apply the rule to a vectorized callable.

        Laguerre: int_0^inf f(x) e^-x dx; Chebyshev: int_{-1}^{1} f(x) dx.
        """
        values = np.asarray(f(self.nodes), dtype=float)
        if self.family is Family.CHEBYSHEV_FIRST_KIND:
            return float(np.sum(2.0 * self.weights * values))
        return float(np.sum(self.weights * values))

    def dump_csv(self, path) -> None:
        """Write the rule as index,node,weight rows for auditing."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "node", "weight"])
            for i, (x, w) in enumerate(zip(self.nodes, self.weights)):
                writer.writerow([i, repr(float(x)), repr(float(w))])


def chebyshev_rule(order: int) -> QuadratureRule:
    """Gauss-Chebyshev (first kind) rule:
    x_u = cos((2u - 1) pi / 2U), b_u = (pi / 2U) sqrt(1 - x_u^2)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    u = np.arange(1, order + 1, dtype=float)
    nodes = np.cos((2.0 * u - 1.0) * math.pi / (2.0 * order))
    weights = (math.pi / (2.0 * order)) * np.sqrt(1.0 - nodes**2)
    idx = np.argsort(nodes)
    return QuadratureRule(Family.CHEBYSHEV_FIRST_KIND, order,
                          nodes[idx], weights[idx])


def _tridiag_ql(diag, offdiag, max_iter: int = 50):
    """Implicit-shift QL for a symmetric tridiagonal matrix.

    Returns (eigenvalues, first_row) where first_row holds the first
    component of each normalized eigenvector -- all Golub-Welsch needs.
    ``offdiag[i]`` couples rows i and i+1.
    """
    d = [float(v) for v in diag]
    n = len(d)
    e = [float(v) for v in offdiag] + [0.0]
    if len(e) != n:
        raise ValueError("offdiag must have length n - 1")
    v0 = [0.0] * n
    v0[0] = 1.0
    tol = 1e-14

    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > max_iter:
                raise NonConvergenceError(
                    f"QL iteration failed to converge at eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                f = v0[i + 1]
                v0[i + 1] = s * v0[i] + c * f
                v0[i] = c * v0[i] - s * f
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0

    order = sorted(range(n), key=lambda i: d[i])
    eigvals = np.array([d[i] for i in order])
    first_row = np.array([v0[i] for i in order])
    return eigvals, first_row


def _laguerre_compute(order: int, max_iter: int = 50) -> QuadratureRule:
    diag = [2.0 * k + 1.0 for k in range(order)]
    offdiag = [float(k) for k in range(1, order)]
    nodes, first_row = _tridiag_ql(diag, offdiag, max_iter=max_iter)
    weights = first_row**2  # zeroth moment of e^-x is 1
    return QuadratureRule(Family.LAGUERRE, order, nodes, weights)


def laguerre_rule(order: int) -> QuadratureRule:
    """Gauss-Laguerre rule: exact for polynomials of degree <= 2P - 1
    against the e^-x weight."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return _laguerre_compute(order)


_cache: dict[tuple[Family, int], QuadratureRule] = {}
_cache_lock = threading.Lock()


def get_rule(family: Family, order: int) -> QuadratureRule:
    """Memoized rule lookup; generation runs at most once per (family, order)."""
    key = (family, order)
    with _cache_lock:
        rule = _cache.get(key)
    if rule is not None:
        return rule
    if family is Family.CHEBYSHEV_FIRST_KIND:
        rule = chebyshev_rule(order)
    elif family is Family.LAGUERRE:
        rule = laguerre_rule(order)
    else:
        raise ValueError(f"unknown family {family}")
    with _cache_lock:
        return _cache.setdefault(key, rule)
