"""Inverse Hermite interpolation and multistep coefficient sets.

Every step of every solver in this package is, one way or another, the
evaluation at y = 0 of a polynomial interpolating the inverse function
x = f^{-1}(y). This module builds those interpolants in Newton
divided-difference form and, equivalently, produces the per-step
coefficient sets {a_k}, {b_k} of the multistep update

    x_new = -sum_k a_k x_k + h * sum_k b_k / f'(x_k),      h = -f(x_last),

parameterised by the value ratios q_k = f(x_k) / f(x_last). Closed forms
are provided for the two- and three-point methods; a generic linear-system
path covers arbitrary history lengths and constrained variants such as the
Adams-Bashforth family. The two routes agree to rounding error on the same
data, which the test suite exercises heavily.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import DegenerateNodes, DegenerateRatio, InvalidNode
from .precision import is_finite, machine_eps


@dataclass(frozen=True)
class InverseNode:
    """One interpolation node of the inverse function.

    y is the abscissa (a function value), x the interpolated value (a root
    estimate) and slope the optional inverse derivative 1/f'(x). A slope of
    zero is legitimate: it encodes an infinite f'.
    """

    y: object
    x: object
    slope: object = None

    def data_count(self) -> int:
        return 1 if self.slope is None else 2


def coincident(y1, y2, eps=None) -> bool:
    """Whether two abscissae are too close to separate at the working precision."""
    if eps is None:
        eps = machine_eps(y1, y2)
    return abs(y1 - y2) <= 4 * eps * max(abs(y1), abs(y2))


@dataclass(frozen=True)
class Interpolant:
    """Newton-form polynomial: coeffs over the leading abscissae."""

    abscissae: tuple
    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, y):
        acc = self.coeffs[-1]
        for k in range(len(self.coeffs) - 2, -1, -1):
            acc = self.coeffs[k] + (y - self.abscissae[k]) * acc
        return acc


def build_inverse_hermite(nodes: Sequence[InverseNode]) -> Interpolant:
    """Interpolate the inverse function through the given nodes.

    Matches H(y_k) = x_k at every node and H'(y_k) = slope_k wherever a
    slope is present, using the divided-difference tableau with duplicated
    abscissae. Needs at least two data in total and pairwise-distinct y
    values.
    """
    if not nodes:
        raise InvalidNode("no interpolation nodes")
    for n in nodes:
        if not (is_finite(n.y) and is_finite(n.x)):
            raise InvalidNode(f"non-finite node (y={n.y!r}, x={n.x!r})")
        if n.slope is not None and not is_finite(n.slope):
            raise InvalidNode(f"non-finite slope at y={n.y!r}")
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if coincident(nodes[i].y, nodes[j].y):
                raise DegenerateNodes(
                    f"abscissae {nodes[i].y!r} and {nodes[j].y!r} coincide")
    if sum(n.data_count() for n in nodes) < 2:
        raise InvalidNode("need at least two data (values plus slopes)")

    # Expand to the duplicated-abscissa tableau. Slots of a node with a
    # slope share the node id, so repeated-abscissa detection is exact.
    zs, vals, slopes, ids = [], [], [], []
    for i, n in enumerate(nodes):
        for _ in range(n.data_count()):
            zs.append(n.y)
            vals.append(n.x)
            slopes.append(n.slope)
            ids.append(i)

    m = len(zs)
    coeffs = [vals[0]]
    prev = list(vals)
    for order in range(1, m):
        cur = []
        for i in range(m - order):
            if ids[i + order] == ids[i]:
                # repeated abscissa: first divided difference is the slope
                cur.append(slopes[i])
            else:
                cur.append((prev[i + 1] - prev[i]) / (zs[i + order] - zs[i]))
        coeffs.append(cur[0])
        prev = cur
    return Interpolant(abscissae=tuple(zs[:-1]), coeffs=tuple(coeffs))


def eval_interpolant_at_zero(h: Interpolant):
    """The root estimate proposed by an inverse interpolant: H(0)."""
    return h(0 * h.coeffs[0])


@dataclass(frozen=True)
class LmmCoefficients:
    """Per-step multistep coefficients for s history points.

    q holds the s-1 leading value ratios q_k = f(x_{n+k}) / f(x_{n+s-1});
    the trailing ratio is identically 1 and is appended by full_q().
    """

    s: int
    a: tuple
    b: tuple
    q: tuple

    def full_q(self) -> tuple:
        one = 1 + 0 * self.q[0] if self.q else 1.0
        return self.q + (one,)

    def consistency_residuals(self):
        """Residuals of the two consistency conditions (should vanish)."""
        qs = self.full_q()
        r0 = sum(self.a) + 1
        r1 = sum(ak * qk + bk for ak, qk, bk in zip(self.a, qs, self.b))
        return r0, r1

    def order_residual(self, m: int):
        """Residual of the order-m elimination condition."""
        qs = self.full_q()
        return sum(qk ** m / m * ak + qk ** (m - 1) * bk
                   for ak, qk, bk in zip(self.a, qs, self.b))


def _check_ratio(q, *others):
    vals = (1 + 0 * q,) + others
    for v in vals:
        if coincident(q, v):
            raise DegenerateRatio(f"ratio {q!r} coincides with {v!r}")


def lmm_coefficients_s2(q) -> LmmCoefficients:
    """Closed-form coefficients of the two-point method.

    Solves the 4x4 consistency/order system for s = 2 in closed form;
    requires q != 1, i.e. distinct function values at the two nodes.
    """
    _check_ratio(q)
    a0 = (1 - 3 * q) / (q - 1) ** 3
    a1 = -1 - a0
    b0 = q / (q - 1) ** 2
    b1 = q * b0
    return LmmCoefficients(s=2, a=(a0, a1), b=(b0, b1), q=(q,))


def lmm_coefficients_s3(q0, q1) -> LmmCoefficients:
    """Closed-form coefficients of the three-point method.

    Requires q0, q1 and 1 pairwise distinct (all function values unique).
    """
    _check_ratio(q0)
    _check_ratio(q1, q0)
    d01 = (q0 - q1) ** 3
    a0 = q1 ** 2 * (q0 * (3 + 3 * q1 - 5 * q0) - q1) / ((q0 - 1) ** 3 * d01)
    a1 = q0 ** 2 * (q1 * (5 * q1 - 3 * q0 - 3) + q0) / ((q1 - 1) ** 3 * d01)
    a2 = q0 ** 2 * q1 ** 2 * (3 * q1 - q0 * (q1 - 3) - 5) \
        / ((q0 - 1) ** 3 * (q1 - 1) ** 3)
    b0 = q0 * q1 ** 2 / ((q0 - 1) ** 2 * (q0 - q1) ** 2)
    b1 = q0 ** 2 * q1 / ((q0 - q1) ** 2 * (q1 - 1) ** 2)
    b2 = q0 ** 2 * q1 ** 2 / ((q0 - 1) ** 2 * (q1 - 1) ** 2)
    return LmmCoefficients(s=3, a=(a0, a1, a2), b=(b0, b1, b2), q=(q0, q1))


@dataclass(frozen=True)
class SigmaMask:
    """Which history coefficients are free and which slopes participate.

    sigma[k] = 1 leaves a_k free to maximise the order; sigma[k] = 0 pins
    a_k to zero. deriv[k] = 1 includes the inverse derivative at node k
    (b_k free); deriv[k] = 0 pins b_k to zero.
    """

    sigma: tuple
    deriv: tuple

    def __post_init__(self):
        if len(self.sigma) != len(self.deriv):
            raise ValueError("sigma and deriv masks must have equal length")
        if not any(self.sigma) and not any(self.deriv):
            raise ValueError("mask provides no information source")

    @property
    def s(self) -> int:
        return len(self.sigma)

    @classmethod
    def full(cls, s: int) -> "SigmaMask":
        return cls(sigma=(1,) * s, deriv=(1,) * s)

    @classmethod
    def derivative_free(cls, s: int) -> "SigmaMask":
        return cls(sigma=(1,) * s, deriv=(0,) * s)

    @classmethod
    def adams_bashforth(cls, s: int) -> "SigmaMask":
        return cls(sigma=(0,) * (s - 1) + (1,), deriv=(1,) * s)


def _solve_dense(rows, rhs):
    """Gaussian elimination with partial pivoting, generic over scalar type.

    The coefficient systems are tiny (at most ~2s equations) but must run
    at whatever precision the q values carry, which rules out numpy.
    """
    n = len(rows)
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[piv][col] == 0:
            raise DegenerateRatio("singular coefficient system")
        a[col], a[piv] = a[piv], a[col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            if factor != 0:
                for c in range(col, n + 1):
                    a[r][c] -= factor * a[col][c]
    x = [None] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n]
        for c in range(r + 1, n):
            acc -= a[r][c] * x[c]
        x[r] = acc / a[r][r]
    return x


def solve_lmm_coefficients(q: Sequence, mask: SigmaMask) -> LmmCoefficients:
    """Coefficients for an arbitrary mask by direct linear solve.

    Builds the two consistency rows plus order rows m = 2, 3, ... from the
    lowest order upward until the system is square in the free unknowns.
    Reproduces the closed forms for the full two- and three-point masks and
    the Adams-Bashforth weights for the AB mask.
    """
    s = mask.s
    if len(q) != s - 1:
        raise ValueError(f"expected {s - 1} ratios for s={s}, got {len(q)}")
    if not any(mask.sigma):
        raise DegenerateRatio("no free a_k: consistency cannot hold")
    one = 1 + 0 * q[0] if s > 1 else 1.0
    qs = tuple(q) + (one,)
    for i in range(s):
        for j in range(i + 1, s):
            if coincident(qs[i], qs[j]):
                raise DegenerateRatio(
                    f"ratios q[{i}] and q[{j}] coincide")

    free_a = [k for k in range(s) if mask.sigma[k]]
    free_b = [k for k in range(s) if mask.deriv[k]]
    n_unknown = len(free_a) + len(free_b)
    zero = 0 * one

    def row(ca, cb, rhs):
        return [ca(k) for k in free_a] + [cb(k) for k in free_b], rhs

    rows, rhss = [], []
    r, v = row(lambda k: one, lambda k: zero, -one)
    rows.append(r); rhss.append(v)
    if n_unknown >= 2:
        r, v = row(lambda k: qs[k], lambda k: one, zero)
        rows.append(r); rhss.append(v)
    m = 2
    while len(rows) < n_unknown:
        r, v = row(lambda k, m=m: qs[k] ** m / m,
                   lambda k, m=m: qs[k] ** (m - 1), zero)
        rows.append(r); rhss.append(v)
        m += 1
    if len(rows) != n_unknown:
        raise DegenerateRatio("over-constrained mask: no such method")

    sol = _solve_dense(rows, rhss)
    a = [zero] * s
    b = [zero] * s
    for i, k in enumerate(free_a):
        a[k] = sol[i]
    for i, k in enumerate(free_b):
        b[k] = sol[len(free_a) + i]
    return LmmCoefficients(s=s, a=tuple(a), b=tuple(b), q=tuple(q))


@dataclass(frozen=True)
class StabilityReport:
    """Parasitic-mode analysis of the two-point method at ratio q."""

    q: object
    a0: object
    roots: tuple  # characteristic roots (1, a0)
    stable: bool
    condition: object  # sum of coefficient magnitudes, blows up as q -> 1


def parasitic_analysis_s2(q) -> StabilityReport:
    """Stability of the two-point recurrence under perturbations.

    The parasitic mode is suppressed iff the secondary characteristic root
    a0 satisfies |a0| < 1, which holds exactly for q < 0 or q > 3.
    """
    coeff = lmm_coefficients_s2(q)
    a0 = coeff.a[0]
    cond = sum(abs(c) for c in coeff.a + coeff.b)
    return StabilityReport(q=q, a0=a0, roots=(1 + 0 * a0, a0),
                           stable=abs(a0) < 1, condition=cond)
