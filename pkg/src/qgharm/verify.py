"""Inequality checkers and sharpness scanners.

Inequalities with an unspecified constant are verified as ratio-trend
boundedness over a graded family: fit the slope of log(lhs/rhs) against
log(1+m) on the upper half of the family and call the trend bounded when
the slope is <= 0.05.  Sharpness below a threshold is witnessed by the
ball-average test vectors xi_m and by small-t semigroup scans, never by
random search.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import classical, fourier, groups, semigroup
from .errors import (
    ExponentRangeError,
    InterpolationRelationError,
    NoClassicalModelError,
    UnsupportedGroupError,
)
from .fourier import CentralElement, WeightSpec
from .groups import GroupDescriptor
from .semigroup import ScanReport

TREND_SLOPE_MAX = 0.05
HY_SLACK = 1e-8


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class VerifyReport:
    """Per-instance lhs/rhs comparison plus an aggregate verdict."""

    check_id: str
    params: dict
    instances: tuple
    max_ratio: float
    slope: float | None
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "id": self.check_id,
            "params": self.params,
            "instances": list(self.instances),
            "max_ratio": self.max_ratio,
            "slope": self.slope,
            "verdict": self.verdict,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)

    def csv_rows(self):
        for i, inst in enumerate(self.instances):
            yield (i, inst.get("tag", ""), inst["lhs"], inst["rhs"], inst["ratio"])


def _make_report(check_id, params, instances, slope=None, verdict=None) -> VerifyReport:
    max_ratio = max((inst["ratio"] for inst in instances), default=0.0)
    return VerifyReport(
        check_id=check_id,
        params=params,
        instances=tuple(instances),
        max_ratio=max_ratio,
        slope=slope,
        verdict=verdict,
    )


def fit_loglog_slope(ms, values, tail_fraction: float = 0.5) -> float:
    """Least-squares slope of log(values) vs log(1+m) on the top fraction."""
    ms = np.asarray(ms, dtype=float)
    values = np.asarray(values, dtype=float)
    start = int(math.floor(len(ms) * (1.0 - tail_fraction)))
    x = np.log1p(ms[start:])
    y = np.log(values[start:])
    return float(np.polyfit(x, y, 1)[0])


# ---------------------------------------------------------------------------
# Graded test families


def single_sphere(group: GroupDescriptor, m: int) -> CentralElement:
    """chi_m."""
    return CentralElement(group, {m: 1.0})


def flat_family(group: GroupDescriptor, m: int) -> CentralElement:
    """sum_{k<=m} chi_k."""
    return CentralElement(group, {k: 1.0 for k in range(m + 1)})


def xi_ball_element(group: GroupDescriptor, m: int) -> CentralElement:
    """The normalized ball average (1/sqrt(b_m)) sum_{k<=m} n_k chi_k."""
    bm = groups.ball_size(group, m)
    root = math.sqrt(bm)
    return CentralElement(
        group,
        {k: groups.dimension(group, k) / root for k in range(m + 1)},
    )


def geometric_central(group: GroupDescriptor, m: int, ratio: float = 0.5) -> CentralElement:
    """sum_{k<=m} ratio^k chi_k."""
    return CentralElement(group, {k: ratio**k for k in range(m + 1)})


def random_central(group: GroupDescriptor, degree: int, rng) -> CentralElement:
    """Random complex Gaussian coefficients on degrees 0..degree."""
    re = rng.standard_normal(degree + 1)
    im = rng.standard_normal(degree + 1)
    return CentralElement(group, {k: complex(re[k], im[k]) for k in range(degree + 1)})


# ---------------------------------------------------------------------------
# Right-hand sides


def _lp_rhs(f, p: float) -> float:
    """The Lp norm of a central element, by Plancherel at p = 2, else quadrature."""
    if p == 2:
        return fourier.plancherel_l2_norm(f)
    if not isinstance(f, CentralElement):
        try:
            f = CentralElement.from_fourier(f)
        except ValueError as exc:
            raise NoClassicalModelError(
                f"Lp side not computable for p = {p}: {exc}"
            ) from exc
    return classical.central_lp_norm(f, p)


def _require_p_in_unit_range(p: float):
    if not 1.0 <= p <= 2.0:
        raise ExponentRangeError(f"p must be in [1, 2], got {p}")


# ---------------------------------------------------------------------------
# Hausdorff-Young


def check_hausdorff_young(f: CentralElement, p: float) -> VerifyReport:
    """lhs = dual lp' norm of the coefficients, rhs = Lp norm; lhs <= rhs."""
    _require_p_in_unit_range(p)
    if p != 2:
        classical.classical_target(f.group)  # raises when no Lp side exists
    p_prime = fourier.conjugate_exponent(p)
    lhs = fourier.dual_lp_norm(f, p_prime)
    rhs = _lp_rhs(f, p)
    ratio = lhs / rhs if rhs else (0.0 if lhs == 0.0 else math.inf)
    verdict = "holds" if lhs <= rhs * (1.0 + HY_SLACK) else "violated"
    return _make_report(
        "hausdorff_young",
        {"group": str(f.group), "p": p},
        [{"lhs": lhs, "rhs": rhs, "ratio": ratio}],
        verdict=verdict,
    )


def hausdorff_young_battery(
    group: GroupDescriptor, p: float, trials: int, seed: int, degree: int = 25
) -> VerifyReport:
    """Hausdorff-Young on ``trials`` random central elements."""
    rng = np.random.default_rng(seed)
    instances = []
    verdict = "holds"
    for _ in range(trials):
        f = random_central(group, degree, rng)
        rep = check_hausdorff_young(f, p)
        instances.append(rep.instances[0])
        if rep.verdict == "violated":
            verdict = "violated"
    return _make_report(
        "hausdorff_young_battery",
        {"group": str(group), "p": p, "trials": trials, "seed": seed, "degree": degree},
        instances,
        verdict=verdict,
    )


# ---------------------------------------------------------------------------
# Sharpened Hausdorff-Young and Sobolev embedding


def check_sharpened_hy(f: CentralElement, p: float, beta: float = 1.0) -> VerifyReport:
    """lhs = weighted sphere-mixed norm at q = p', rhs = Lp norm."""
    _require_p_in_unit_range(p)
    if p <= 1.0:
        raise ExponentRangeError("sharpened Hausdorff-Young needs 1 < p <= 2")
    p_prime = fourier.conjugate_exponent(p)
    lhs = fourier.mixed_norm(f, p_prime, WeightSpec.sharpened_hy(beta, p))
    rhs = _lp_rhs(f, p)
    ratio = lhs / rhs if rhs else (0.0 if lhs == 0.0 else math.inf)
    return _make_report(
        "sharpened_hy",
        {"group": str(f.group), "p": p, "beta": beta},
        [{"lhs": lhs, "rhs": rhs, "ratio": ratio}],
        verdict="recorded",
    )


def check_sobolev(f: CentralElement, p: float, s: float) -> VerifyReport:
    """lhs = (sum (1+|a|)^{-s(2/p-1)} n_a ||f^(a)||_HS^2)^(1/2), rhs = Lp norm."""
    _require_p_in_unit_range(p)
    if p <= 1.0:
        raise ExponentRangeError("Sobolev check needs 1 < p <= 2")
    if s < 0:
        raise ExponentRangeError(f"s must be >= 0, got {s}")
    weight = WeightSpec.power(-s * (2.0 / p - 1.0))
    lhs = fourier.mixed_norm(f, 2.0, weight)
    rhs = _lp_rhs(f, p)
    ratio = lhs / rhs if rhs else (0.0 if lhs == 0.0 else math.inf)
    return _make_report(
        "sobolev",
        {"group": str(f.group), "p": p, "s": s},
        [{"lhs": lhs, "rhs": rhs, "ratio": ratio}],
        verdict="recorded",
    )


def _trend_battery(check_id, group, p, m_max, lhs_fn, family_fn, params) -> VerifyReport:
    instances = []
    ms = range(1, m_max + 1)
    for m in ms:
        f = family_fn(group, m)
        lhs = lhs_fn(f)
        rhs = _lp_rhs(f, p)
        instances.append({"tag": f"m={m}", "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs})
    slope = fit_loglog_slope(list(ms), [inst["ratio"] for inst in instances])
    verdict = "bounded" if slope <= TREND_SLOPE_MAX else "unbounded"
    return _make_report(check_id, params, instances, slope=slope, verdict=verdict)


def sharpened_hy_trend(
    group: GroupDescriptor, p: float, beta: float = 1.0, m_max: int = 60
) -> VerifyReport:
    """Ratio trend of the sharpened Hausdorff-Young inequality over sum_{k<=m} chi_k."""
    p_prime = fourier.conjugate_exponent(p)
    weight = WeightSpec.sharpened_hy(beta, p)
    return _trend_battery(
        "sharpened_hy_trend",
        group,
        p,
        m_max,
        lambda f: fourier.mixed_norm(f, p_prime, weight),
        flat_family,
        {"group": str(group), "p": p, "beta": beta, "m_max": m_max},
    )


def sobolev_trend(
    group: GroupDescriptor, p: float, s: float, m_max: int = 60
) -> VerifyReport:
    """Ratio trend of the Sobolev embedding over the ball averages xi_m."""
    weight = WeightSpec.power(-s * (2.0 / p - 1.0))
    return _trend_battery(
        "sobolev_trend",
        group,
        p,
        m_max,
        lambda f: fourier.mixed_norm(f, 2.0, weight),
        xi_ball_element,
        {"group": str(group), "p": p, "s": s, "m_max": m_max},
    )


def hardy_littlewood_trend(
    group: GroupDescriptor, p: float, beta: float = 1.0, m_max: int = 60
) -> VerifyReport:
    """Ratio trend of the lp-outer weighted sphere norm against the Lp norm.

    The weight (1+k)^{-(beta+1)(2-p)} with outer exponent p is the third
    endpoint feeding the interpolation calculus; its boundedness is checked
    on the ball averages xi_m like the other trends.
    """
    weight = WeightSpec.hardy_littlewood(beta, p)
    return _trend_battery(
        "hardy_littlewood_trend",
        group,
        p,
        m_max,
        lambda f: fourier.mixed_norm(f, p, weight),
        xi_ball_element,
        {"group": str(group), "p": p, "beta": beta, "m_max": m_max},
    )


# ---------------------------------------------------------------------------
# Sharpness of the L2 -> L4 multiplier bound (ball-average witnesses)

BALL_SCAN_DIVERGENT_SLOPE = 0.02


def ball_square_norm_fusion(group: GroupDescriptor, s: float, m: int) -> float:
    """||(T_w xi_m)^2||_L2 computed exactly through the fusion ring."""
    xi = xi_ball_element(group, m)
    tw = xi.weighted(WeightSpec.power(-s))
    return (tw * tw).plancherel_norm()


def ball_square_norm_quadrature(group: GroupDescriptor, s: float, m: int) -> float:
    """The same quantity as the L4 norm squared on the classical side."""
    xi = xi_ball_element(group, m)
    tw = xi.weighted(WeightSpec.power(-s))
    return classical.central_lp_norm(tw, 4.0) ** 2


def ball_sharpness_surrogate(group: GroupDescriptor, s: float, m: int) -> float:
    """Closed-form lower bound (w(m)^2/b_m) (sum_k b_{m-k}^2 s_k)^{1/2}."""
    bm = groups.ball_size(group, m)
    inner = sum(
        groups.ball_size(group, m - k) ** 2 * groups.sphere_size(group, k)
        for k in range(m + 1)
    )
    return (1.0 + m) ** (-2.0 * s) / bm * math.sqrt(inner)


def ball_sharpness_scan(
    group: GroupDescriptor, s_exponent: float, m_values, q_mmax: int = 40
) -> ScanReport:
    """Growth scan of the ball-average lower bound under w(k) = (1+k)^{-s}.

    A growing surrogate L_m certifies failure of the L2 -> L4 multiplier
    bound at this weight decay; the slope rule is: divergent when the fitted
    slope is >= 0.02, bounded when <= 0, inconclusive between.
    Exact fusion values Q_m are attached for m <= q_mmax.
    """
    if not groups.is_polynomial_growth(group) or group.kind == "zd":
        raise UnsupportedGroupError(
            f"ball-average sharpness scan needs oplus:2 or splus:4, not {group}"
        )
    ms = sorted(int(m) for m in m_values)
    if len(ms) < 4:
        raise ValueError(f"sharpness scan needs >= 4 radii, got {len(ms)}")
    values = [ball_sharpness_surrogate(group, s_exponent, m) for m in ms]
    q_pairs = [
        [m, ball_square_norm_fusion(group, s_exponent, m)] for m in ms if m <= q_mmax
    ]
    slope = fit_loglog_slope(ms, values)
    if slope >= BALL_SCAN_DIVERGENT_SLOPE:
        verdict = "divergent"
    elif slope <= 0.0:
        verdict = "bounded"
    else:
        verdict = "inconclusive"
    idx = int(np.argmax(values))
    return ScanReport(
        scan_id="ball_sharpness",
        params={"group": str(group), "s": s_exponent, "q_pairs": q_pairs},
        grid=tuple(float(m) for m in ms),
        values=tuple(values),
        tails=tuple([None] * len(ms)),
        verdict=verdict,
        slope=slope,
        ratio=float(max(values) / min(values)),
        extremal=(float(ms[idx]), float(values[idx])),
    )


# ---------------------------------------------------------------------------
# Rapid-decay degree


@dataclass(frozen=True)
class RdVerdict:
    s: float
    route: str
    verdict: str
    value: float
    tail_bound: float | None

    def to_json_dict(self) -> dict:
        return {
            "s": self.s,
            "route": self.route,
            "verdict": self.verdict,
            "value": self.value,
            "tail_bound": self.tail_bound,
        }


def rd_degree_scan(group: GroupDescriptor, s_grid, kmax: int = 100_000) -> list:
    """Classify sum (1+k)^{2-2s} (rapid-decay route, beta = 1) or
    sum s_k (1+k)^{-2s} (polynomial route) for each s in the grid."""
    if group.kind == "zd" or groups.is_polynomial_growth(group):
        route = "polynomial"
        form = "spectral"
    elif group.kind in ("oplus", "splus", "fdual"):
        route = "rapid_decay"
        form = "rd"
    else:
        raise UnsupportedGroupError(f"rd degree scan does not cover {group}")
    out = []
    for s in s_grid:
        res = semigroup.cw_sum(group, semigroup.LogWeight(float(s)), kmax, form=form, beta=1.0)
        out.append(
            RdVerdict(
                s=float(s),
                route=route,
                verdict=res.verdict,
                value=res.value,
                tail_bound=res.tail_bound,
            )
        )
    return out


def rd_threshold(group: GroupDescriptor) -> float:
    """The analytic convergence threshold of the rd series for this group."""
    if group.kind == "zd" or groups.is_polynomial_growth(group):
        return groups.polynomial_growth_order(group) / 2.0
    return 1.5


# ---------------------------------------------------------------------------
# Exponent algebra


@dataclass(frozen=True)
class ExponentCheck:
    kind: str
    ok: bool
    max_residual: float
    instances: tuple
    flags: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "max_residual": self.max_residual,
            "instances": list(self.instances),
            "flags": list(self.flags),
        }


def _default_p_grid():
    return np.linspace(1.05, 2.0, 20)


def exponent_algebra_check(kind: str, params: dict | None = None) -> ExponentCheck:
    """Numerically verify the exponent identities behind the threshold claims.

    kinds: "hl_free_threshold" (threshold 4 - 2p), "sphere_mixed_threshold" (threshold p' - 2),
    "sobolev_interp_exponent" (interpolated weight exponent -(2 beta + 1)(2/p - 1)),
    "two_step_interp" (two-step interpolation bookkeeping).
    """
    params = dict(params or {})
    instances = []
    flags = []
    max_residual = 0.0

    def record(tag, residual, **extra):
        nonlocal max_residual
        max_residual = max(max_residual, abs(residual))
        instances.append({"tag": tag, "residual": residual, **extra})

    if kind == "hl_free_threshold":
        # s/p - 2/p' + 1 >= 3(2/p - 1)  <=>  s >= 4 - 2p
        for p in params.get("p_grid", _default_p_grid()):
            pp = fourier.conjugate_exponent(p)
            s_star = 4.0 - 2.0 * p
            record(f"p={p:.4f}", s_star / p - 2.0 / pp + 1.0 - 3.0 * (2.0 / p - 1.0), p=float(p), threshold=s_star)
            for ds in (-0.1, 0.1):
                s = s_star + ds
                lhs_holds = s / p - 2.0 / pp + 1.0 >= 3.0 * (2.0 / p - 1.0) - 1e-15
                if lhs_holds != (s >= s_star - 1e-15):
                    flags.append(f"equivalence broken at p={p}, s={s}")
    elif kind == "sphere_mixed_threshold":
        # -2 + 4/p + s/p' >= 3(2/p - 1)  <=>  s >= p' - 2
        for p in params.get("p_grid", _default_p_grid()):
            pp = fourier.conjugate_exponent(p)
            s_star = pp - 2.0
            record(f"p={p:.4f}", -2.0 + 4.0 / p + s_star / pp - 3.0 * (2.0 / p - 1.0), p=float(p), threshold=s_star)
            for ds in (-0.1, 0.1):
                s = s_star + ds
                lhs_holds = -2.0 + 4.0 / p + s / pp >= 3.0 * (2.0 / p - 1.0) - 1e-15
                if lhs_holds != (s >= s_star - 1e-15):
                    flags.append(f"equivalence broken at p={p}, s={s}")
    elif kind == "sobolev_interp_exponent":
        for p in params.get("p_grid", _default_p_grid()):
            if p == 1.0:
                continue
            pp = fourier.conjugate_exponent(p)
            for beta in params.get("beta_grid", (0.5, 1.0, 1.5, 2.0)):
                combined = fourier.interp_weight_combine(
                    -(beta + 1.0) * (2.0 - p), p, -beta * (pp - 2.0), pp, 0.5, 2.0
                )
                target = -(2.0 * beta + 1.0) * (2.0 / p - 1.0)
                record(f"p={p:.4f},beta={beta}", combined - target, p=float(p), beta=float(beta))
    elif kind == "two_step_interp":
        gamma = params.get("gamma", 3.0)
        for p in params.get("p_grid", np.linspace(1.40, 1.95, 12)):
            for p0 in params.get("p0_grid", (1.05, 1.15, 1.25, 1.30)):
                for s in params.get("s_grid", (gamma - 0.5, gamma, gamma + 0.5)):
                    try:
                        theta = _two_step_theta(p, p0)
                    except InterpolationRelationError:
                        flags.append(f"degenerate theta at p={p}, p0={p0}")
                        continue
                    lhs = gamma * (1.0 / p0 - 0.5) * theta + s * (1.0 / p - 0.5) * (1.0 - theta)
                    rhs = (s - gamma) * (1.0 / p - 0.5) * (1.0 - theta) + gamma / 4.0
                    record(f"p={p:.3f},p0={p0},s={s}", lhs - rhs, p=float(p), p0=float(p0), s=float(s), theta=theta)
    else:
        raise ValueError(f"unknown exponent check kind {kind!r}")

    tol = params.get("tol", 1e-12)
    ok = max_residual < tol and not any("equivalence broken" in f for f in flags)
    return ExponentCheck(kind, ok, max_residual, tuple(instances), tuple(flags))


def _two_step_theta(p: float, p0: float) -> float:
    """theta with theta/p0 + (1-theta)/p = 3/4; degenerate when p = p0."""
    if abs(1.0 / p0 - 1.0 / p) < 1e-14:
        raise InterpolationRelationError(f"theta degenerate at p = p0 = {p}")
    theta = (0.75 - 1.0 / p) / (1.0 / p0 - 1.0 / p)
    if not 0.0 < theta < 1.0:
        raise InterpolationRelationError(
            f"theta = {theta} outside (0, 1) for p={p}, p0={p0}"
        )
    return theta


# ---------------------------------------------------------------------------
# Ultracontractivity decision


@dataclass(frozen=True)
class UltraDecision:
    group: str
    s: float
    verdict: str
    expected: str
    report: ScanReport
    lower_bound_log: tuple

    def to_json_dict(self) -> dict:
        return {
            "group": self.group,
            "s": self.s,
            "verdict": self.verdict,
            "expected": self.expected,
            "scan": self.report.to_json_dict(),
            "lower_bound_log": [list(x) for x in self.lower_bound_log],
        }


def _ultra_supported(group: GroupDescriptor) -> semigroup.LengthFunction:
    if group.kind == "fdual":
        return semigroup.poisson()
    if group.kind == "oplus" and group.param >= 3:
        return semigroup.heat(group)
    if group.kind == "splus" and group.param >= 5:
        return semigroup.heat(group)
    raise UnsupportedGroupError(
        f"ultracontractivity decision covers fdual:N>=2, oplus:N>=3, splus:N>=5; got {group}"
    )


def ultracontractivity_decision(
    group: GroupDescriptor, s: float, t_grid=None
) -> UltraDecision:
    """Scan verdict for sup_t t^s F(t); bounded exactly when s >= 3.

    Also logs the rapid-decay-route sum sum_k (1+k)^2 exp(-2t(1+k)) at a few
    sample times (the lower-bound side of the sandwich).
    """
    l = _ultra_supported(group)
    if t_grid is None:
        t_grid = semigroup.log_grid(1e-3, 10.0, 60)
    report = semigroup.ultra_sup_scan(s, l, t_grid)
    expected = "bounded" if s >= 3.0 else "divergent"
    log = []
    for t in (1e-3, 1e-1, 1.0):
        res = semigroup.cw_sum(
            group, semigroup.LinearWeight(t), 200_000, form="rd", beta=1.0
        )
        log.append((t, res.value))
    return UltraDecision(
        group=str(group),
        s=s,
        verdict=report.verdict,
        expected=expected,
        report=report,
        lower_bound_log=tuple(log),
    )
