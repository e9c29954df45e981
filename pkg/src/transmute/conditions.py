"""Existence conditions for a transmutation kernel.

Four numeric checks decide whether a (K, A, B) triple is consistent:

* 4a   K solves the hyperbolic equation tying A (in t) to B (in x),
* 4b1  the two leading coefficients agree as functions,
* 4b2  the diagonal transport relation 2a K' + (b1-b0) K = 0 holds
       in the limit t -> x-,
* 4c   the boundary bracket at t = 0 annihilates f0,
* 4d   K f0 vanishes at the vertex (or tends to a finite limit, which
       is recorded and treated as informational).

Plus the eigen-relations A f0 = lam f0 and B f1 = lam f1 (and their
shifted variants when the case defines them).

All derivatives come from jet arithmetic, never finite differences, so
the 4a residual floor is rounding noise and tolerances can stay tight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import NumericalError, TransmuteError, UsageError
from .expr import evaluate, evaluate_jet
from .operators import eigen_residual

__all__ = [
    "VerifyConfig",
    "ConditionRecord",
    "VerificationReport",
    "CONDITION_IDS",
    "triangle_grid",
    "sample_points",
    "hyperbolic_terms",
    "transport_residual",
    "check_hyperbolic",
    "check_diagonal",
    "check_boundary_t0",
    "check_vertex",
    "check_eigen",
    "verify_all",
]

CONDITION_IDS = ("4a", "4b1", "4b2", "4c", "4d", "eigenA", "eigenB")


@dataclass(frozen=True)
class VerifyConfig:
    """Grids, limit sequences, and tolerances for one verification run."""

    nx: int = 20
    nt: int = 20
    n_samples: int = 20
    x_max: float = 2.0
    tol_4a: float = 1e-8
    tol_4b1: float = 1e-12
    tol_eigen: float = 1e-8
    # relative diagonal offsets, largest first
    delta_rel: Sequence[float] = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    # t = eps sequence, largest first
    eps_seq: Sequence[float] = tuple(0.1 * 2.0 ** (-k) for k in range(13))
    min_slope: float = 0.1
    transport_drop: float = 0.1
    decay_drop: float = 1e-3
    tiny: float = 1e-12

    def __post_init__(self):
        if self.nx < 1 or self.nt < 1:
            raise UsageError("hyperbolic grid must have at least one point per axis")
        if self.n_samples < 2:
            raise UsageError("need at least two sample points")
        if len(self.delta_rel) < 2 or any(
            b >= a for a, b in zip(self.delta_rel, self.delta_rel[1:])
        ):
            raise UsageError("delta_rel must be a decreasing sequence")
        if len(self.eps_seq) < 2 or any(
            b >= a for a, b in zip(self.eps_seq, self.eps_seq[1:])
        ):
            raise UsageError("eps_seq must be a decreasing sequence")


@dataclass(frozen=True)
class ConditionRecord:
    id: str
    grid: str
    max_residual: float
    mean_residual: float
    tolerance: float
    passed: bool
    decay_slope: Optional[float] = None
    informational: bool = False
    limit: Optional[float] = None
    detail: str = ""

    def __post_init__(self):
        if self.id not in CONDITION_IDS:
            raise UsageError(f"unknown condition id {self.id!r}")
        if not (math.isfinite(self.max_residual) and self.max_residual >= 0.0):
            raise NumericalError(
                f"condition {self.id}: non-finite or negative residual"
            )


@dataclass(frozen=True)
class VerificationReport:
    case: str
    params: dict
    records: tuple
    overall_pass: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "overall_pass", all(r.passed for r in self.records)
        )

    def record(self, cond_id):
        for r in self.records:
            if r.id == cond_id:
                return r
        raise UsageError(f"report has no record for {cond_id!r}")


def triangle_grid(nx=20, nt=20, x_max=2.0):
    """Interior points of {0 < t < x <= x_max}, nt per column."""
    pts = []
    for i in range(1, nx + 1):
        x = x_max * i / nx
        for j in range(1, nt + 1):
            pts.append((x, x * j / (nt + 1)))
    return pts


def sample_points(case, n=20):
    """Evenly spaced abscissae across the case's working interval."""
    lo, hi = case.x_range
    if n == 1:
        return [0.5 * (lo + hi)]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def hyperbolic_terms(case, kernel_jets, x, t):
    """The six terms of the hyperbolic identity at one point.

    Returns (lhs, rhs, terms) where
      lhs = d/dt(a0 dK/dt) - b0 dK/dt + c0 K   (divergence side, in t)
      rhs = a1 d2K/dx2 + b1 dK/dx + c1 K       (non-divergence side, in x)
    and terms collects the six magnitudes used for relative scaling.
    ``kernel_jets(x, t)`` must return a second-order jet of K.
    """
    params = case.params
    jk = kernel_jets(x, t)
    ja0 = evaluate_jet(case.opA.a, 0.0, t, params)
    b0, c0 = case.opA.coefficient_values(t, params)[1:]
    a1, b1, c1 = case.opB.coefficient_values(x, params)
    div_term = ja0.dt * jk.dt + ja0.value * jk.dtt
    terms = (
        div_term,
        b0 * jk.dt,
        c0 * jk.value,
        a1 * jk.dxx,
        b1 * jk.dx,
        c1 * jk.value,
    )
    lhs = terms[0] - terms[1] + terms[2]
    rhs = terms[3] + terms[4] + terms[5]
    return lhs, rhs, terms


def check_hyperbolic(case, grid=None, tol=1e-8, kernel_jets=None):
    """Residual of the hyperbolic identity over a triangle grid.

    Per-point residual is |lhs - rhs| / (1 + max|term|); domain errors
    at individual points are collected, and only an all-points failure
    raises.
    """
    if grid is None:
        grid = triangle_grid()
    grid = list(grid)
    if not grid:
        raise UsageError("hyperbolic check needs a non-empty grid")
    if kernel_jets is None:
        kernel_jets = lambda x, t: evaluate_jet(case.kernel, x, t, case.params)
    residuals = []
    raw = []
    failures = []
    for x, t in grid:
        if not 0.0 < t < x:
            raise UsageError(f"grid point ({x!r}, {t!r}) outside 0 < t < x")
        try:
            lhs, rhs, terms = hyperbolic_terms(case, kernel_jets, x, t)
        except TransmuteError as exc:
            failures.append((x, t, str(exc)))
            continue
        diff = abs(lhs - rhs)
        scale = 1.0 + max(abs(v) for v in terms)
        if not math.isfinite(diff / scale):
            failures.append((x, t, "non-finite residual"))
            continue
        raw.append(diff)
        residuals.append(diff / scale)
    if not residuals:
        first = failures[0] if failures else ("?", "?", "empty grid")
        raise NumericalError(
            f"hyperbolic residual failed at every grid point;"
            f" first error at ({first[0]!r}, {first[1]!r}): {first[2]}"
        )
    return {
        "max": max(residuals),
        "mean": math.fsum(residuals) / len(residuals),
        "max_raw": max(raw),
        "count": len(residuals),
        "failures": failures,
    }


def _loglog_slope(xs, ys, last_n=6):
    """Least-squares slope of log y against log x over the tail."""
    pairs = [(x, y) for x, y in zip(xs, ys) if y > 0.0 and x > 0.0]
    pairs = pairs[-last_n:]
    if len(pairs) < 2:
        return None
    lx = [math.log(x) for x, _ in pairs]
    ly = [math.log(y) for _, y in pairs]
    mx = math.fsum(lx) / len(lx)
    my = math.fsum(ly) / len(ly)
    den = math.fsum((u - mx) ** 2 for u in lx)
    if den == 0.0:
        return None
    return math.fsum((u - mx) * (v - my) for u, v in zip(lx, ly)) / den


def _decay_verdict(seq_vals, values, *, tiny, min_slope, drop):
    """Shared decreasing-sequence verdict for limit checks.

    Pass if everything already sits at the rounding floor, or if the
    tail decreases with a positive log-log slope down to ``drop`` times
    the initial scale.
    """
    slope = _loglog_slope(seq_vals, values)
    if all(v <= tiny for v in values):
        return True, slope, "at rounding floor"
    tail = values[-6:]
    decreasing = all(b <= a * (1.0 + 1e-9) + tiny for a, b in zip(tail, tail[1:]))
    small_enough = values[-1] <= max(drop * values[0], tiny)
    sloped = slope is not None and slope > min_slope
    if decreasing and small_enough and sloped:
        return True, slope, ""
    reasons = []
    if not decreasing:
        reasons.append("tail not decreasing")
    if not small_enough:
        reasons.append(
            f"final {values[-1]:.3e} above {drop:g} x initial {values[0]:.3e}"
        )
    if not sloped:
        reasons.append(f"slope {slope!r} <= {min_slope:g}")
    return False, slope, "; ".join(reasons)


def transport_residual(case, x, delta):
    """(raw, scaled) diagonal transport residual at one (x, delta).

    raw = |2 a(x) dK(x, x-delta)/dx + (b1(x) - b0(x)) K(x, x-delta)|
    with dK/dx taken along the diagonal direction (d/dx + d/dt) and b0
    evaluated at t = x; scaled divides by (1 + |K|).
    """
    params = case.params
    jk = evaluate_jet(case.kernel, x, x - delta, params)
    a = evaluate(case.opA.a, {**params, "t": x})
    b0_at_x = evaluate(case.opA.b, {**params, "t": x})
    b1 = evaluate(case.opB.b, {**params, "x": x})
    dk_diag = jk.dx + jk.dt
    raw = abs(2.0 * a * dk_diag + (b1 - b0_at_x) * jk.value)
    return raw, raw / (1.0 + abs(jk.value))


def check_diagonal(case, xs=None, config=None):
    """Conditions 4b1 and 4b2, returned as two ConditionRecords."""
    cfg = config or VerifyConfig()
    if xs is None:
        xs = sample_points(case, cfg.n_samples)
    xs = list(xs)
    if not xs:
        raise UsageError("diagonal check needs sample points")
    params = case.params

    coeff_gaps = []
    for s in xs:
        a0 = evaluate(case.opA.a, {**params, "t": s})
        a1 = evaluate(case.opB.a, {**params, "x": s})
        coeff_gaps.append(abs(a0 - a1))
    rec_4b1 = ConditionRecord(
        id="4b1",
        grid=f"{len(xs)} shared samples in [{xs[0]:g}, {xs[-1]:g}]",
        max_residual=max(coeff_gaps),
        mean_residual=math.fsum(coeff_gaps) / len(coeff_gaps),
        tolerance=cfg.tol_4b1,
        passed=max(coeff_gaps) <= cfg.tol_4b1,
    )

    # 4b2: scan t = x - delta for a shrinking sequence of relative deltas
    per_delta = []
    raw_per_delta = []
    for rel in cfg.delta_rel:
        pointwise = [transport_residual(case, x, rel * x) for x in xs]
        per_delta.append(max(scaled for _, scaled in pointwise))
        raw_per_delta.append(max(raw for raw, _ in pointwise))
    passed, slope, why = _decay_verdict(
        list(cfg.delta_rel),
        per_delta,
        tiny=cfg.tiny,
        min_slope=cfg.min_slope,
        drop=cfg.transport_drop,
    )
    rec_4b2 = ConditionRecord(
        id="4b2",
        grid=(
            f"{len(xs)} abscissae, delta/x in"
            f" [{cfg.delta_rel[-1]:g}, {cfg.delta_rel[0]:g}];"
            f" raw final {raw_per_delta[-1]:.3e}"
        ),
        max_residual=per_delta[-1],
        mean_residual=math.fsum(per_delta) / len(per_delta),
        tolerance=cfg.transport_drop,
        passed=passed,
        decay_slope=slope,
        detail=why,
    )
    return rec_4b1, rec_4b2


def check_boundary_t0(case, xs=None, eps_seq=None, config=None):
    """Condition 4c: the t = 0 bracket times f0 must vanish as eps -> 0."""
    cfg = config or VerifyConfig()
    if xs is None:
        xs = sample_points(case, cfg.n_samples)
    xs = list(xs)
    if eps_seq is None:
        eps_seq = list(cfg.eps_seq)
    if not xs or not eps_seq:
        raise UsageError("boundary check needs sample points and an eps sequence")
    params = case.params
    values = []
    for eps in eps_seq:
        f0 = evaluate(case.f0, {**params, "t": eps})
        a = evaluate(case.opA.a, {**params, "t": eps})
        b0 = evaluate(case.opA.b, {**params, "t": eps})
        worst = 0.0
        for x in xs:
            jk = evaluate_jet(case.kernel, x, eps, params)
            bracket = a * jk.dt - b0 * jk.value - case.opA.h * a * jk.value
            worst = max(worst, abs(bracket * f0))
        values.append(worst)
    passed, slope, why = _decay_verdict(
        eps_seq,
        values,
        tiny=cfg.tiny,
        min_slope=cfg.min_slope,
        drop=cfg.decay_drop,
    )
    return ConditionRecord(
        id="4c",
        grid=f"{len(xs)} abscissae, eps in [{eps_seq[-1]:.3e}, {eps_seq[0]:.3e}]",
        max_residual=values[-1],
        mean_residual=math.fsum(values) / len(values),
        tolerance=cfg.decay_drop,
        passed=passed,
        decay_slope=slope,
        detail=why,
    )


def check_vertex(case, pairs=None, config=None):
    """Condition 4d: K(eps, eps-delta) f0(eps) along delta = eps^2.

    A finite nonzero limit does not fail the check; the record is
    marked informational and carries the limit.
    """
    cfg = config or VerifyConfig()
    if pairs is None:
        pairs = [(eps, eps * eps) for eps in cfg.eps_seq]
    pairs = list(pairs)
    if not pairs:
        raise UsageError("vertex check needs (eps, delta) pairs")
    params = case.params
    values = []
    for eps, delta in pairs:
        if not 0.0 < delta < eps:
            raise UsageError(f"vertex pair needs 0 < delta < eps, got ({eps}, {delta})")
        k = evaluate(case.kernel, {**params, "x": eps, "t": eps - delta})
        f0 = evaluate(case.f0, {**params, "t": eps})
        values.append(abs(k * f0))
    eps_vals = [eps for eps, _ in pairs]
    passed, slope, why = _decay_verdict(
        eps_vals,
        values,
        tiny=cfg.tiny,
        min_slope=cfg.min_slope,
        drop=cfg.decay_drop,
    )
    grid = f"{len(pairs)} pairs, delta = eps^2, eps down to {eps_vals[-1]:.3e}"
    if passed:
        return ConditionRecord(
            id="4d",
            grid=grid,
            max_residual=values[-1],
            mean_residual=math.fsum(values) / len(values),
            tolerance=cfg.decay_drop,
            passed=True,
            decay_slope=slope,
            detail=why,
        )
    # no decay: accept a converged finite limit, but say so
    tail = values[-3:]
    settled = len(tail) == 3 and all(
        abs(a - b) <= 1e-6 * (1.0 + abs(tail[-1])) for a, b in zip(tail, tail[1:])
    )
    if settled and tail[-1] > cfg.tiny:
        return ConditionRecord(
            id="4d",
            grid=grid,
            max_residual=values[-1],
            mean_residual=math.fsum(values) / len(values),
            tolerance=cfg.decay_drop,
            passed=True,
            decay_slope=slope,
            informational=True,
            limit=tail[-1],
            detail=f"vertex product tends to {tail[-1]!r}, not 0",
        )
    return ConditionRecord(
        id="4d",
        grid=grid,
        max_residual=values[-1],
        mean_residual=math.fsum(values) / len(values),
        tolerance=cfg.decay_drop,
        passed=False,
        decay_slope=slope,
        detail=why,
    )


def check_eigen(case, xs=None, config=None):
    """Eigen-relations on both sides, folding in shifted variants."""
    cfg = config or VerifyConfig()
    if xs is None:
        xs = sample_points(case, cfg.n_samples)
    xs = list(xs)
    records = []
    for cond_id, op, f, lam, shift_op, shift_lam in (
        (
            "eigenA",
            case.opA,
            case.f0,
            case.lam,
            case.eigen_shift.opA if case.eigen_shift else None,
            case.eigen_shift.lam_a if case.eigen_shift else None,
        ),
        (
            "eigenB",
            case.opB,
            case.f1,
            case.lam,
            case.eigen_shift.opB if case.eigen_shift else None,
            case.eigen_shift.lam_b if case.eigen_shift else None,
        ),
    ):
        stats = eigen_residual(op, f, lam, xs, case.params)
        worst, mean = stats["max"], stats["mean"]
        desc = f"lambda={lam:g}"
        if shift_op is not None:
            shifted = eigen_residual(shift_op, f, shift_lam, xs, case.params)
            worst = max(worst, shifted["max"])
            mean = 0.5 * (mean + shifted["mean"])
            desc += f", shifted lambda={shift_lam:g}"
        records.append(
            ConditionRecord(
                id=cond_id,
                grid=f"{len(xs)} points in [{xs[0]:g}, {xs[-1]:g}]; {desc}",
                max_residual=worst,
                mean_residual=mean,
                tolerance=cfg.tol_eigen,
                passed=worst <= cfg.tol_eigen,
            )
        )
    return tuple(records)


def verify_all(case, config=None):
    """Run every condition and assemble a VerificationReport."""
    cfg = config or VerifyConfig()
    xs = sample_points(case, cfg.n_samples)
    hyp = check_hyperbolic(
        case, triangle_grid(cfg.nx, cfg.nt, cfg.x_max), tol=cfg.tol_4a
    )
    rec_4a = ConditionRecord(
        id="4a",
        grid=f"{cfg.nx}x{cfg.nt} interior triangle, x <= {cfg.x_max:g}",
        max_residual=hyp["max"],
        mean_residual=hyp["mean"],
        tolerance=cfg.tol_4a,
        passed=hyp["max"] <= cfg.tol_4a and not hyp["failures"],
        detail=(
            f"{len(hyp['failures'])} points failed to evaluate"
            if hyp["failures"]
            else ""
        ),
    )
    rec_4b1, rec_4b2 = check_diagonal(case, xs, cfg)
    rec_4c = check_boundary_t0(case, xs, None, cfg)
    rec_4d = check_vertex(case, None, cfg)
    eig_a, eig_b = check_eigen(case, xs, cfg)
    return VerificationReport(
        case=case.name,
        params=dict(case.params),
        records=(rec_4a, rec_4b1, rec_4b2, rec_4c, rec_4d, eig_a, eig_b),
    )
