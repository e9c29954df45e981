"""Gauss-Jacobi evaluation of T f0(x) = integral_0^x K(x,t) f0(t) dt.

The integrand carries algebraic endpoint factors (x-t)^p_diag and
t^p_zero. Substituting t = x(1+s)/2 turns them into the Jacobi weight
(1-s)^alpha_w (1+s)^beta_w on [-1,1]:

    T f0(x) = (x/2)^(alpha_w+beta_w+1) * sum_i w_i S(x, t_i)

where S is the product of the case's pre-factored smooth parts, so no
numeric cancellation of singular terms ever occurs. Custom cases must
declare their exponents explicitly for the same reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, UsageError
from .expr import evaluate

__all__ = [
    "JacobiRule",
    "jacobi_rule",
    "transform",
    "apply_transmutation",
    "identity_error",
]


@dataclass(frozen=True)
class JacobiRule:
    """Nodes/weights for the weight (1-s)^alpha (1+s)^beta on [-1,1]."""

    n: int
    alpha: float
    beta: float
    nodes: tuple
    weights: tuple


def _jacobi_value(n, alpha, beta, x):
    """P_n^(alpha,beta)(x) by the three-term recurrence."""
    if n == 0:
        return 1.0
    apb = alpha + beta
    pm1 = 1.0
    p = 0.5 * ((alpha - beta) + (apb + 2.0) * x)
    for k in range(2, n + 1):
        a1 = 2.0 * k * (k + apb) * (2.0 * k + apb - 2.0)
        a2 = (2.0 * k + apb - 1.0) * (alpha * alpha - beta * beta)
        a3 = (2.0 * k + apb - 2.0) * (2.0 * k + apb - 1.0) * (2.0 * k + apb)
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * (2.0 * k + apb)
        p, pm1 = ((a2 + a3 * x) * p - a4 * pm1) / a1, p
    return p


def _jacobi_deriv(n, alpha, beta, x):
    return 0.5 * (alpha + beta + n + 1.0) * _jacobi_value(
        n - 1, alpha + 1.0, beta + 1.0, x
    )


_RULE_CACHE = {}


def jacobi_rule(n, alpha, beta):
    """Gauss-Jacobi rule: Newton on the recurrence with root suppression."""
    if int(n) != n or n < 1:
        raise UsageError(f"rule order must be a positive integer, got {n!r}")
    n = int(n)
    if alpha <= -1.0 or beta <= -1.0:
        raise UsageError(
            f"Jacobi exponents must exceed -1, got ({alpha!r}, {beta!r})"
        )
    key = (n, float(alpha), float(beta))
    cached = _RULE_CACHE.get(key)
    if cached is not None:
        return cached

    nodes = []
    for k in range(n):
        r = -math.cos(math.pi * (2.0 * k + 1.0) / (2.0 * n))
        if k > 0:
            r = 0.5 * (r + nodes[k - 1])
        for _ in range(100):
            f = _jacobi_value(n, alpha, beta, r)
            fp = _jacobi_deriv(n, alpha, beta, r)
            suppress = math.fsum(1.0 / (r - xj) for xj in nodes)
            denom = fp - f * suppress
            if denom == 0.0:
                raise ConvergenceError(
                    f"Newton stalled on Jacobi({alpha}, {beta}) root {k} of {n}"
                )
            delta = f / denom
            r -= delta
            if abs(delta) <= 1e-15 * (1.0 + abs(r)):
                break
        else:
            raise ConvergenceError(
                f"Jacobi({alpha}, {beta}) root {k} of {n} did not converge"
            )
        nodes.append(r)

    log_coef = (
        (alpha + beta + 1.0) * math.log(2.0)
        + math.lgamma(n + alpha + 1.0)
        + math.lgamma(n + beta + 1.0)
        - math.lgamma(n + alpha + beta + 1.0)
        - math.lgamma(n + 1.0)
    )
    coef = math.exp(log_coef)
    weights = []
    for r in nodes:
        dp = _jacobi_deriv(n, alpha, beta, r)
        weights.append(coef / ((1.0 - r * r) * dp * dp))

    rule = JacobiRule(n, float(alpha), float(beta), tuple(nodes), tuple(weights))
    _RULE_CACHE[key] = rule
    return rule


def transform(case, f_smooth, t_exponent, x, n=64):
    """integral_0^x K(x,t) t^t_exponent f_smooth(t) dt.

    ``f_smooth`` is an expression in t (plus case parameters); its
    declared power of t folds into the Jacobi weight together with the
    kernel's own endpoint exponents.
    """
    if not (isinstance(x, (int, float)) and x > 0.0 and math.isfinite(x)):
        raise UsageError(f"transform needs x > 0, got {x!r}")
    alpha_w = case.p_diag
    beta_w = case.kernel_t_exponent + t_exponent
    if alpha_w <= -1.0 or beta_w <= -1.0:
        raise UsageError(
            f"non-integrable endpoint exponents ({alpha_w!r}, {beta_w!r})"
        )
    rule = jacobi_rule(n, alpha_w, beta_w)
    params = case.params
    terms = []
    for s, w in zip(rule.nodes, rule.weights):
        t = x * (1.0 + s) / 2.0
        bindings = {**params, "x": x, "t": t}
        smooth = evaluate(case.kernel_smooth, bindings) * evaluate(
            f_smooth, bindings
        )
        terms.append(w * smooth)
    return (x / 2.0) ** (alpha_w + beta_w + 1.0) * math.fsum(terms)


def apply_transmutation(case, x, n=64):
    """T f0 at one abscissa, using the case's declared smooth factors."""
    if n < 8:
        raise UsageError(f"quadrature order must be at least 8, got {n!r}")
    return transform(case, case.f0_smooth, case.f0_t_exponent, x, n)


def identity_error(case, xs=None, n=64):
    """max over xs of |T f0(x) - f1(x)| / (1 + |f1(x)|)."""
    if xs is None:
        from .conditions import sample_points

        xs = sample_points(case, 20)
    xs = list(xs)
    if not xs:
        raise UsageError("identity check needs at least one abscissa")
    worst = 0.0
    for x in xs:
        lhs = apply_transmutation(case, x, n)
        f1 = evaluate(case.f1, {**case.params, "x": x})
        worst = max(worst, abs(lhs - f1) / (1.0 + abs(f1)))
    return worst
