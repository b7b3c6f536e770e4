"""
Hardy ode

Adaptive integration of radial trajectories in divergence form and the
asymptotic diagnostics built on them.
"""

import math
from enum import Enum
from logging import getLogger
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from hardy.errors import (
    Blowup, DomainError, GradientDegenerate, InsufficientWindow, PreconditionViolated, ToleranceFailure,
)
from hardy.family import Verdict, require_verdict
from hardy.util import DEFAULT_HORIZON, DEFAULT_NODES, GridSpec, geometric_grid


logger = getLogger(__name__)

BLOWUP = 1e300
ATOL_FLOOR = 1e-300
MIN_FIT_NODES = 16
TREND_ETA = 1e-12
VANISHING_DROP = 1e-3
CRITICAL_RTOL = 1e-12


class Monotone(Enum):
    DECREASING = "decreasing"
    INCREASING = "increasing"
    NON_MONOTONE = "non_monotone"
    CONSTANT = "constant"


class Status(Enum):
    COMPLETED = "completed"
    PHI_ZERO = "phi_zero"
    GRADIENT_ZERO = "gradient_zero"


class Trend(Enum):
    VANISHING_MONOTONE = "vanishing_monotone"
    VANISHING = "vanishing"
    BOUNDED_AWAY = "bounded_away"
    OSCILLATING = "oscillating"


def gradient_from_flux(params, r, w):
    """ φ' = sign(w)(|w|/r^{N-1})^{1/(p-1)} """
    p, N = params.p, params.N
    return np.sign(w) * np.exp((np.log(np.abs(w) + 1e-320) - (N - 1) * np.log(r)) / (p - 1)) * (w != 0)


def flux_from_gradient(params, r, dphi):
    """ w = r^{N-1}|φ'|^{p-2}φ' """
    p, N = params.p, params.N
    return np.sign(dphi) * np.exp((N - 1) * np.log(r) + (p - 1) * np.log(np.abs(dphi) + 1e-320)) * (dphi != 0)


def monotonicity(dphi):
    if np.all(dphi == 0): return Monotone.CONSTANT
    if np.all(dphi < 0): return Monotone.DECREASING
    if np.all(dphi > 0): return Monotone.INCREASING
    return Monotone.NON_MONOTONE


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Radial trajectory sampled at `nodes` with its dense interpolant.

    `flux` is w = r^{N-1}|φ'|^{p-2}φ'; `scale` multiplies the integrated
    solution, which is again a solution by (p-1)-homogeneity.
    """
    params: object = field(repr=False)
    potential: object = field(repr=False)
    nodes: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    derivative: np.ndarray = field(repr=False)
    flux: np.ndarray = field(repr=False)
    local_exponent: np.ndarray = field(repr=False)
    monotone: Monotone
    status: Status
    dense: object = field(repr=False, default=None)
    scale: float = 1.0
    stop_radius: float = None

    @property
    def r0(self):
        return float(self.nodes[0])

    @property
    def r1(self):
        return float(self.nodes[-1])

    def _state(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.r0 * (1 - 1e-12), self.r1 * (1 + 1e-12)
        if np.any(r < lo) or np.any(r > hi):
            raise DomainError(f"trajectory covers [{self.r0:g}, {self.r1:g}], got r outside it")
        if self.dense is None:
            phi = np.interp(np.log(r), np.log(self.nodes), self.values / self.scale)
            w = np.interp(np.log(r), np.log(self.nodes), self.flux / self.scale ** (self.params.p - 1))
        else:
            phi, w = self.dense(np.log(np.clip(r, self.r0, self.r1)))
        return r, phi, w

    def __call__(self, r):
        r, phi, _ = self._state(r)
        value = self.scale * phi
        return float(value) if np.ndim(r) == 0 else value

    def derivatives(self, r):
        """
        φ, φ' and φ'' at `r`, with φ'' recovered from the equation.
        """
        p, N = self.params.p, self.params.N
        r, phi, w = self._state(r)
        dphi = gradient_from_flux(self.params, r, w)
        V = self.potential(self.params, r)
        with np.errstate(divide='ignore', invalid='ignore'):
            load = V * np.sign(phi) * np.abs(phi) ** (p - 1) / np.abs(dphi) ** (p - 2)
        d2phi = (-load - (N - 1) / r * dphi) / (p - 1)
        values = tuple(self.scale * x for x in (phi, dphi, d2phi))
        return tuple(float(x) for x in values) if np.ndim(r) == 0 else values

    def scaled(self, s):
        if not s > 0:
            raise DomainError(f"a trajectory can only be scaled by s > 0, got {s}")
        return Trajectory(
            self.params, self.potential, self.nodes, self.values * s, self.derivative * s,
            self.flux * s ** (self.params.p - 1), self.local_exponent, self.monotone, self.status,
            self.dense, self.scale * s, self.stop_radius,
        )

    def frame(self):
        return pd.DataFrame({
            "r": self.nodes, "phi": self.values, "dphi": self.derivative,
            "flux": self.flux, "local_exponent": self.local_exponent,
        })

    def to_dict(self, evidence=False):
        report = {
            "nodes": len(self.nodes),
            "r_min": self.r0,
            "r_max": self.r1,
            "status": self.status.value,
            "monotone": self.monotone.value,
            "phi_end": float(self.values[-1]),
            "dphi_end": float(self.derivative[-1]),
            "local_exponent_end": float(self.local_exponent[-1]),
        }
        if evidence:
            report["evidence"] = self.frame().to_dict(orient="list")
        return report


def _event(func, terminal=True, direction=0):
    func.terminal = terminal
    func.direction = direction
    return func


def integrate(params, V, r0, phi0, dphi0, r_max, tol=1e-9, nodes=DEFAULT_NODES):
    """
    Integrate (p-1)φ'' + (N-1)/r φ' = -V φ^{p-1}/|φ'|^{p-2} from r0 to r_max.

    The state is (φ, w) in t = log r:

        dφ/dt = r sign(w)(|w|/r^{N-1})^{1/(p-1)}
        dw/dt = -r^N V φ^{p-1}

    Runs stop with a status when φ reaches 0 or (p <= 2) when φ' changes sign.
    """
    p, N = params.p, params.N
    if not phi0 > 0:
        raise DomainError(f"phi0 must be > 0, got {phi0}")
    if not r_max > r0 > 0:
        raise DomainError(f"integration needs 0 < r0 < r_max, got r0={r0}, r_max={r_max}")
    if dphi0 == 0 and p != 2:
        raise DomainError(f"dphi0 = 0 is only admissible for p = 2, got p={p}")
    if not 0 < tol < 1:
        raise DomainError(f"tol must lie in (0, 1), got {tol}")
    V(params, np.array([r0, r_max]))

    w0 = float(flux_from_gradient(params, np.float64(r0), np.float64(dphi0)))

    def rhs(t, y):
        phi, w = y
        r = math.exp(t)
        dphi = float(gradient_from_flux(params, r, w))
        return [r * dphi, -math.exp(N * t) * V(params, r) * math.copysign(abs(phi) ** (p - 1), phi)]

    events = [
        _event(lambda t, y: y[0], direction=-1),
        _event(lambda t, y: BLOWUP - max(abs(y[0]), abs(y[1]))),
    ]
    if w0 != 0:
        events.append(_event(lambda t, y: y[1]))

    t0, t1 = math.log(r0), math.log(r_max)
    atol = [max(ATOL_FLOOR, 1e-12 * tol * phi0), max(ATOL_FLOOR, 1e-12 * tol * abs(w0))]
    sol = solve_ivp(
        rhs, (t0, t1), [phi0, w0], method="RK45", t_eval=np.linspace(t0, t1, nodes),
        dense_output=True, events=events, rtol=tol, atol=atol,
    )

    status, stop = Status.COMPLETED, None
    if sol.status == -1:
        raise ToleranceFailure(f"integration failed at r = {math.exp(sol.t[-1] if len(sol.t) else t0):.6g}: {sol.message}")
    if sol.status == 1:
        if len(sol.t_events[1]):
            raise Blowup(f"|phi| or |w| exceeded {BLOWUP:g} at r = {math.exp(sol.t_events[1][0]):.6g}")
        if len(sol.t_events[0]):
            status, stop = Status.PHI_ZERO, math.exp(sol.t_events[0][0])
        elif len(events) > 2 and len(sol.t_events[2]):
            stop = math.exp(sol.t_events[2][0])
            if p > 2:
                raise GradientDegenerate(f"phi' vanished at r = {stop:.6g} with p = {p}")
            status = Status.GRADIENT_ZERO
        logger.debug("integration stopped early at r = %.6g: %s", stop, status.value)

    r = np.exp(sol.t)
    phi, w = sol.y
    dphi = gradient_from_flux(params, r, w)
    with np.errstate(divide='ignore', invalid='ignore'):
        exponent = r * dphi / phi
    return Trajectory(
        params, V, r, phi, dphi, w, exponent, monotonicity(dphi), status, sol.sol, stop_radius=stop,
    )


def integrate_from(params, V, u, r0, r_max, tol=1e-9, nodes=DEFAULT_NODES):
    """
    Integrate from the Cauchy data (u(r0), u'(r0)) of a profile `u`.
    """
    return integrate(params, V, r0, u(r0), u.derivative(r0), r_max, tol, nodes)


def decay_fit(traj, window=None):
    """
    Least squares slope of log φ against log r over the nodes in `window`
    (all nodes by default).
    """
    r, phi = traj.nodes, traj.values
    if window is not None:
        lo, hi = window
        keep = (r >= lo) & (r <= hi)
        r, phi = r[keep], phi[keep]
    if len(r) < MIN_FIT_NODES:
        raise InsufficientWindow(f"decay_fit needs at least {MIN_FIT_NODES} nodes, the window holds {len(r)}")
    if np.any(phi <= 0):
        raise DomainError("decay_fit needs phi > 0 on the window")
    slope, _ = np.polyfit(np.log(r), np.log(phi), 1)
    return float(slope)


def flux_balance(traj):
    """
    Per interval defect Δw + ∫ r^{N-1} V φ^{p-1} dr along the trajectory and
    the same defects relative to the local flux size.
    """
    p, N = traj.params.p, traj.params.N
    V = traj.potential

    def load(r):
        phi = traj(r)
        return r ** (N - 1) * V(traj.params, r) * math.copysign(abs(phi) ** (p - 1), phi)

    r, w = traj.nodes, traj.flux
    integrals = np.array([quad(load, a, b, epsabs=0, epsrel=1e-12, limit=200)[0] for a, b in zip(r[:-1], r[1:])])
    defects = np.diff(w) + integrals
    size = np.maximum(np.abs(w[:-1]), np.abs(w[1:])) + np.abs(integrals) + 1e-300
    return defects, defects / size


def _log_profile(f, r):
    if hasattr(f, "log_value"):
        return f.log_value(r)
    values = f(r)
    if np.any(values <= 0):
        raise DomainError("the ratio diagnostic needs positive profiles")
    return np.log(values)


def _outer_radius(f, ann, horizon):
    outer = min(ann.R0, horizon)
    if isinstance(f, Trajectory):
        outer = min(outer, f.r1)
    return outer


@dataclass(frozen=True, eq=False)
class RatioDiagnostic:
    """
    Finite horizon evidence for the behaviour of u/w as r grows.
    """
    trend: Trend
    limsup_estimate: float
    candidate_constant: float
    monotone_from: float
    horizon: float
    r: np.ndarray = field(repr=False)
    ratios: np.ndarray = field(repr=False)
    finite_horizon: bool = True

    @property
    def supports(self):
        if self.trend in (Trend.VANISHING_MONOTONE, Trend.VANISHING):
            return "domination"
        if self.trend is Trend.BOUNDED_AWAY:
            return "non_smallness"
        return "unresolved"

    def to_dict(self, evidence=False):
        report = {
            "trend": self.trend.value,
            "supports": self.supports,
            "limsup_estimate": self.limsup_estimate,
            "candidate_constant": self.candidate_constant,
            "monotone_from": self.monotone_from,
            "horizon": self.horizon,
            "finite_horizon": self.finite_horizon,
        }
        if evidence:
            report["evidence"] = {"r": self.r.tolist(), "ratio": self.ratios.tolist()}
        return report


def ratio_trend(log_ratio):
    """
    Trend of a sampled ratio from its logarithm, and the index from which it
    is monotone (None when it is not monotone over the tail quarter).
    """
    n = len(log_ratio)
    tail = n - max(1, n // 4)
    steps = np.diff(log_ratio)

    rising = np.flatnonzero(steps > TREND_ETA)
    falling = np.flatnonzero(steps < -TREND_ETA)
    nonincreasing_from = rising[-1] + 1 if len(rising) else 0
    nondecreasing_from = falling[-1] + 1 if len(falling) else 0

    if nonincreasing_from <= tail and log_ratio[nonincreasing_from] - log_ratio[-1] > VANISHING_DROP:
        return Trend.VANISHING_MONOTONE, nonincreasing_from
    if nondecreasing_from <= tail:
        return Trend.BOUNDED_AWAY, nondecreasing_from
    if log_ratio[tail] - log_ratio[-1] > VANISHING_DROP and np.max(log_ratio[tail:]) <= log_ratio[tail] + TREND_ETA:
        return Trend.VANISHING, None
    return Trend.OSCILLATING, None


def pl_alternative(params, u, w, ann, horizon=DEFAULT_HORIZON, nodes=DEFAULT_NODES):
    """
    Sample u/w on a geometric grid up to min(R0, horizon) and report which
    alternative the evidence supports: u small compared to w (domination) or
    limsup u/w > 0 (non-smallness).
    """
    outer = min(_outer_radius(u, ann, horizon), _outer_radius(w, ann, horizon))
    r = geometric_grid(ann.r0, outer, nodes)
    log_ratio = _log_profile(u, r) - _log_profile(w, r)
    ratios = np.exp(log_ratio)
    trend, start = ratio_trend(log_ratio)
    tail = len(r) - max(1, len(r) // 4)
    return RatioDiagnostic(
        trend,
        limsup_estimate=float(np.max(ratios[tail:])),
        candidate_constant=float(np.max(ratios)),
        monotone_from=None if start is None else float(r[start]),
        horizon=float(outer),
        r=r, ratios=ratios,
    )


def _strictly_monotone(f, r, name):
    _, df, _ = f.derivatives(r)
    if not (np.all(df > 0) or np.all(df < 0)):
        node = float(r[np.flatnonzero(np.sign(df) != np.sign(df[0]))[0]]) if np.any(df != 0) else float(r[0])
        raise PreconditionViolated(f"{name} is not strictly monotone on the grid", node=node)


def quotient_derivative(u, v, r):
    """
    u'v - uv', the numerator of (u/v)', and its scale |u'v| + |uv'|.
    """
    uu, du, _ = u.derivatives(r)
    vv, dv, _ = v.derivatives(r)
    return du * vv - uu * dv, np.abs(du * vv) + np.abs(uu * dv)


@dataclass(frozen=True)
class QuotientScanReport:
    trend: str
    critical_points: tuple
    counterexample: bool

    def to_dict(self):
        return {
            "trend": self.trend,
            "critical_points": list(self.critical_points),
            "counterexample": self.counterexample,
        }


def quotient_extrema_scan(params, u, v, V, ann, grid=GridSpec()):
    """
    Locate critical points of u/v for a strictly monotone subsolution u and
    supersolution v, one of them strict; an interior local maximum would be a
    counterexample.
    """
    r = ann.grid(grid)
    _strictly_monotone(u, r, "u")
    _strictly_monotone(v, r, "v")
    u_report = require_verdict(params, u, V, r, Verdict.SUBSOLUTION, "u")
    v_report = require_verdict(params, v, V, r, Verdict.SUPERSOLUTION, "v")
    if not any(x.strict and x.uniform for x in (u_report, v_report)):
        raise PreconditionViolated("neither u nor v is a strict sub/supersolution on the whole grid")

    g, scale = quotient_derivative(u, v, r)
    signs = np.where(np.abs(g) <= CRITICAL_RTOL * scale, 0, np.sign(g)).astype(int)
    nonzero = np.flatnonzero(signs)
    if len(nonzero) == 0:
        return QuotientScanReport("constant", (), False)

    critical = []
    for i, j in zip(nonzero[:-1], nonzero[1:]):
        if signs[i] == signs[j]: continue
        numerator = lambda x: float(quotient_derivative(u, v, x)[0])
        rho = brentq(numerator, r[i], r[j], xtol=1e-14 * r[j], rtol=4 * np.finfo(float).eps)
        uu, _, d2u = u.derivatives(rho)
        vv, _, d2v = v.derivatives(rho)
        curvature = (d2u * vv - uu * d2v) / vv ** 2
        kind = "minimum" if curvature > 0 else ("maximum" if curvature < 0 else "flat")
        critical.append({"r": float(rho), "kind": kind, "second_derivative": float(curvature)})

    counterexample = any(x["kind"] == "maximum" for x in critical)
    if counterexample:
        logger.warning("interior maximum of u/v found at r = %.6g", critical[0]["r"])
    first, last = signs[nonzero[0]], signs[nonzero[-1]]
    if not critical:
        trend = "increasing" if first > 0 else "decreasing"
    else:
        trend = f"{'increasing' if first > 0 else 'decreasing'}_then_{'increasing' if last > 0 else 'decreasing'}"
    return QuotientScanReport(trend, tuple(critical), counterexample)
