"""
Hardy comparison

Shooting solver for radial boundary value problems on annuli and numerical
checks of the comparison principle and the growth dichotomy of quotients.
"""

import math
from logging import getLogger
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from hardy.catalog import catalog_pairs, strict_supersolution
from hardy.errors import (
    Blowup, DomainError, GradientDegenerate, NoBracket, PreconditionViolated, ToleranceFailure,
)
from hardy.exponents import Params, c_h, hardy_roots
from hardy.family import Annulus, PureHardy, RadialFamily, Verdict, Zero, require_verdict
from hardy.inequality import SUITE_N, SUITE_P
from hardy.multiprocessing import process_map, seed_shards
from hardy.ode import (
    CRITICAL_RTOL, Monotone, Status, Trajectory, integrate, quotient_derivative, quotient_extrema_scan,
)
from hardy.util import DEFAULT_NODES, GridSpec, progress


logger = getLogger(__name__)

ORDER_BAND = 1e-9
SHOOTING_SLOPES = 64
SHOOTING_RANGE = (1e-6, 1e3)
SCAN_NODES = 64


@dataclass(frozen=True)
class BvpProblem:
    """
    φ(r0) = inner and φ(R0) = outer on a bounded annulus.
    """
    params: Params
    V: object
    ann: Annulus
    inner: float
    outer: float

    def __post_init__(self):
        if not self.ann.bounded:
            raise DomainError("a boundary value problem needs a bounded annulus")
        if not (math.isfinite(self.inner) and math.isfinite(self.outer)):
            raise DomainError("boundary values must be finite")
        if not (self.inner > 0 and self.outer >= 0):
            raise DomainError(f"boundary values need inner > 0 and outer >= 0, got {self.inner}, {self.outer}")

    @classmethod
    def from_profile(cls, params, V, ann, u):
        """ Boundary data sampled from a profile. """
        return cls(params, V, ann, float(u(ann.r0)), float(u(ann.R0)))


def constant_trajectory(params, V, r0, r1, value, nodes=DEFAULT_NODES):
    r = np.geomspace(r0, r1, nodes)
    zeros = np.zeros_like(r)
    return Trajectory(params, V, r, np.full_like(r, value), zeros, zeros, zeros, Monotone.CONSTANT, Status.COMPLETED)


def _shooting_miss(prob, slope, tol, nodes):
    """
    Outer hit value minus the target; runs that reach φ = 0 at r_stop continue
    linearly below -outer in log(R0/r_stop), failed runs give nan.
    """
    r0, R0 = prob.ann.r0, prob.ann.R0
    try:
        traj = integrate(prob.params, prob.V, r0, prob.inner, slope, R0, tol, nodes)
    except (GradientDegenerate, Blowup, ToleranceFailure) as exc:
        logger.debug("shooting slope %.6g failed: %s", slope, exc)
        return math.nan
    if traj.status is Status.COMPLETED:
        return float(traj.values[-1]) - prob.outer
    if traj.status is Status.PHI_ZERO:
        return -prob.outer - math.log(R0 / traj.stop_radius) * prob.inner
    return math.nan


def shooting_slopes(prob, count=SHOOTING_SLOPES):
    """
    Geometric scan of initial slopes, negative when the outer value is below
    the inner one.
    """
    lo, hi = SHOOTING_RANGE
    sign = -1.0 if prob.outer < prob.inner else 1.0
    return sign * np.geomspace(prob.inner * lo / prob.ann.r0, prob.inner * hi / prob.ann.r0, count)


@dataclass(frozen=True, eq=False)
class ShootingProfile:
    frame: pd.DataFrame = field(repr=False)

    @property
    def monotone(self):
        hits = self.frame.hit.dropna().to_numpy()
        steps = np.diff(hits)
        return bool(np.all(steps >= 0) or np.all(steps <= 0))

    def to_dict(self):
        return {"monotone": self.monotone, "profile": self.frame.to_dict(orient="list")}


def shooting_profile(prob, slopes=None, count=32, tol=1e-8, nodes=SCAN_NODES):
    """
    Outer hit value as a function of the initial slope.
    """
    slopes = shooting_slopes(prob, count) if slopes is None else np.asarray(slopes, dtype=float)
    misses = [_shooting_miss(prob, s, tol, nodes) for s in slopes]
    return ShootingProfile(pd.DataFrame({"slope": slopes, "hit": np.array(misses) + prob.outer}))


def solve_bvp(prob, tol=1e-9, slopes=SHOOTING_SLOPES, nodes=DEFAULT_NODES):
    """
    Shoot on φ'(r0) until the trajectory from (r0, inner) hits `outer` at R0.
    """
    params, V, ann = prob.params, prob.V, prob.ann
    if prob.inner == prob.outer and isinstance(V, Zero):
        if params.p == 2:
            return integrate(params, V, ann.r0, prob.inner, 0.0, ann.R0, tol, nodes)
        return constant_trajectory(params, V, ann.r0, ann.R0, prob.inner, nodes)

    scan = shooting_slopes(prob, slopes)
    misses = np.array([_shooting_miss(prob, s, tol, SCAN_NODES) for s in scan])
    bracket = None
    for i in range(len(scan) - 1):
        a, b = misses[i], misses[i + 1]
        if np.isfinite(a) and np.isfinite(b) and a * b <= 0:
            bracket = (scan[i], scan[i + 1])
            break
    if bracket is None:
        raise NoBracket(
            f"no initial slope in [{scan[0]:.3g}, {scan[-1]:.3g}] brackets the outer value {prob.outer}"
        )

    lo, hi = sorted(bracket)
    miss = lambda s: _shooting_miss(prob, s, tol, SCAN_NODES)
    slope = brentq(miss, lo, hi, xtol=1e-15 * abs(hi), rtol=4 * np.finfo(float).eps, maxiter=200)
    traj = integrate(params, V, ann.r0, prob.inner, slope, ann.R0, 0.1 * tol, nodes)

    residual = abs(traj.values[-1] - prob.outer) if traj.status is Status.COMPLETED else math.inf
    if residual > tol * (1 + abs(prob.outer)):
        raise ToleranceFailure(f"boundary residual {residual:.3g} exceeds {tol * (1 + abs(prob.outer)):.3g}")
    logger.debug("shooting converged on slope %.12g with boundary residual %.3g", slope, residual)
    return traj


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    holds: bool
    max_excess: float
    first_violation: float
    witness: str
    r: np.ndarray = field(repr=False)
    excess: np.ndarray = field(repr=False)

    def to_dict(self):
        return {
            "holds": self.holds,
            "max_excess": self.max_excess,
            "first_violation": self.first_violation,
            "witness": self.witness,
            "nodes": len(self.r),
        }


def _require_boundary_order(ann, u, v):
    for r in (ann.r0, ann.R0):
        ur, vr = u(r), v(r)
        if ur > vr + ORDER_BAND * (abs(ur) + abs(vr)):
            raise PreconditionViolated(f"u > v on the boundary sphere r = {r:.6g}", node=r, u=ur, v=vr)


def certify_witness(params, V, witness, r):
    """
    `witness` must be a positive strict supersolution on all of `r`.
    """
    report = require_verdict(params, witness, V, r, Verdict.SUPERSOLUTION, "the witness")
    if not (report.strict and report.uniform and np.all(report.values > 0)):
        raise PreconditionViolated(f"{witness} is not a positive strict supersolution on the annulus")
    return report


def comparison_verify(params, V, ann, u, v, grid=GridSpec(), witness=None):
    """
    For a subsolution u and a non negative supersolution v with u <= v on both
    boundary spheres, check u <= v at every node.
    """
    if not ann.bounded:
        raise DomainError("the comparison principle is checked on bounded annuli")
    r = ann.grid(grid)
    v_report = require_verdict(params, v, V, r, Verdict.SUPERSOLUTION, "v")
    if np.any(v_report.values < 0):
        raise PreconditionViolated("v must be non negative", node=float(r[np.argmin(v_report.values)]))
    u_report = require_verdict(params, u, V, r, Verdict.SUBSOLUTION, "u")
    _require_boundary_order(ann, u, v)

    witness = strict_supersolution(params, V) if witness is None else witness
    certify_witness(params, V, witness, r)

    uu, vv = u_report.values, v_report.values
    excess = (uu - vv) / (np.abs(uu) + np.abs(vv) + 1e-300)
    bad = np.flatnonzero(excess > ORDER_BAND)
    if len(bad):
        logger.warning("u > v at r = %.6g inside the annulus", r[bad[0]])
    return ComparisonReport(
        holds=len(bad) == 0,
        max_excess=float(np.max(excess)),
        first_violation=float(r[bad[0]]) if len(bad) else None,
        witness=str(witness),
        r=r, excess=excess,
    )


@dataclass(frozen=True)
class GrowthReport:
    """
    Regime (i): u/v non-increasing throughout; regime (ii): u/v non-decreasing
    on [ρ*, R0). A constant quotient is in both.
    """
    regime_i: bool
    regime_ii: bool
    rho_star: float
    quotient_end: float

    @property
    def regime(self):
        if self.regime_i and self.regime_ii: return "both"
        if self.regime_i: return "i"
        if self.regime_ii: return "ii"
        return "neither"

    def to_dict(self):
        return {
            "regime": self.regime,
            "regime_i": self.regime_i,
            "regime_ii": self.regime_ii,
            "rho_star": self.rho_star,
            "quotient_end": self.quotient_end,
        }


def growth_dichotomy_check(params, V, u, v, ann, grid=GridSpec()):
    """
    For p >= 2, an increasing subsolution u and an increasing strict
    supersolution v normalised so that u(r0) = v(r0): report whether u/v
    decreases throughout or increases from some ρ*.
    """
    params.require_superposition()
    r = ann.grid(grid)
    if np.any(V(params, r) < 0):
        raise PreconditionViolated("the potential must be non negative")
    for f, name in ((u, "u"), (v, "v")):
        values, slopes, _ = f.derivatives(r)
        bad = np.flatnonzero(~((values > 0) & (slopes > 0)))
        if len(bad):
            raise PreconditionViolated(f"{name} is not positive and strictly increasing", node=float(r[bad[0]]))
    require_verdict(params, u, V, r, Verdict.SUBSOLUTION, "u")
    v_report = require_verdict(params, v, V, r, Verdict.SUPERSOLUTION, "v")
    if not (v_report.strict and v_report.uniform):
        raise PreconditionViolated("v is not a strict supersolution on the whole grid")

    u = u.scaled(v(ann.r0) / u(ann.r0))
    g, scale = quotient_derivative(u, v, r)
    signs = np.where(np.abs(g) <= CRITICAL_RTOL * scale, 0, np.sign(g))

    falling, rising = np.flatnonzero(signs < 0), np.flatnonzero(signs > 0)
    regime_i = len(rising) == 0
    start = falling[-1] + 1 if len(falling) else 0
    regime_ii = start < len(r) and (len(falling) == 0 or len(rising) > 0)
    end = r[-1]
    return GrowthReport(
        regime_i, bool(regime_ii),
        rho_star=float(r[start]) if regime_ii else None,
        quotient_end=float(u(end) / v(end)),
    )


def _comparison_trial(task):
    seed, nodes = task
    rng = np.random.default_rng(seed)
    while True:
        params = Params(float(rng.choice(SUITE_P)), int(rng.choice(SUITE_N)))
        if not params.conformal: break
    lam = rng.uniform(0.05, 0.95) * c_h(params)
    lower, upper = hardy_roots(params, lam)
    beta = lower + rng.uniform(0.1, 0.9) * (upper - lower)
    ann = Annulus(1.0, float(10 ** rng.uniform(0.5, 2)))
    u, v = RadialFamily(lower), RadialFamily(beta)
    v = v.scaled(1.01 * max(u(ann.r0) / v(ann.r0), u(ann.R0) / v(ann.R0)))
    V = PureHardy(lam)
    report = comparison_verify(params, V, ann, u, v, GridSpec(nodes=nodes))
    return {"p": params.p, "N": params.N, "lam": lam, "R0": ann.R0, "u": str(u), "v": str(v), **report.to_dict()}


def comparison_suite(trials=200, seed=0, nodes=128, n_proc=0, show_progress=False):
    """
    `comparison_verify` on random pure Hardy pairs u = r^{α_λ}, v = s r^β.
    """
    tasks = enumerate((s, nodes) for s in seed_shards(seed, trials))
    results = progress(
        process_map(_comparison_trial, tasks, n_proc=n_proc),
        total=trials, desc="> trials", unit=" pairs", enabled=show_progress,
    )
    records = [record for _, record in sorted(results, key=lambda kv: kv[0])]
    return records, [record for record in records if not record["holds"]]


def catalog_scan_cases(params_list=None):
    """
    (params, pair) for every catalog pair of every (p, N) in `params_list`
    (the suite grid without p = N by default).
    """
    if params_list is None:
        params_list = [Params(p, N) for p in SUITE_P for N in SUITE_N if p != N]
    return [(params, pair) for params in params_list for pair in catalog_pairs(params)]


def _quotient_trial(task):
    seed, params, pair, nodes = task
    rng = np.random.default_rng(seed)
    u = pair.u.scaled(float(10 ** rng.uniform(-3, 3)))
    ann = Annulus(3.0, float(10 ** rng.uniform(2, 6)))
    record = {"p": params.p, "N": params.N, "pair": pair.name, "u": str(u), "v": str(pair.w), "R0": ann.R0}
    try:
        report = quotient_extrema_scan(params, u, pair.w, pair.potential, ann, GridSpec(nodes=nodes))
    except PreconditionViolated as exc:
        return {**record, "counterexample": None, "skipped": str(exc)}
    return {**record, **report.to_dict()}


def quotient_suite(scans=1000, seed=0, nodes=128, params_list=None, n_proc=0, show_progress=False):
    """
    `quotient_extrema_scan` over the catalog pairs with random amplitudes and
    outer radii; an interior maximum of u/v is a failure. Pairs that miss the
    monotone sub/supersolution gate on the sampled grid are recorded with
    `counterexample = None`.
    """
    cases = catalog_scan_cases(params_list)
    tasks = enumerate(
        (s, *cases[i % len(cases)], nodes) for i, s in enumerate(seed_shards(seed, scans))
    )
    results = progress(
        process_map(_quotient_trial, tasks, n_proc=n_proc),
        total=scans, desc="> scans", unit=" pairs", enabled=show_progress,
    )
    records = [record for _, record in sorted(results, key=lambda kv: kv[0])]
    return records, [record for record in records if record["counterexample"]]
