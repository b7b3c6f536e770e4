"""
Hardy family

Exact evaluation and residual-sign classification of

    u(r) = c r^α (log r)^β (log log r)^τ

against Hardy type potentials, and the sub/supersolution table for the
improved Hardy potential.
"""

import math
from enum import Enum
from fractions import Fraction
from functools import partial
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from hardy.exponents import c_h, c_star, m_star, hardy_roots, improved_roots
from hardy.errors import DomainError, DegenerateGradient, InconclusiveGrid, PreconditionViolated
from hardy.multiprocessing import process_map
from hardy.util import GridSpec, MIN_CLASSIFY_NODES, geometric_grid, progress, relative_dead_band


DEAD_BAND = 1e-9
STRICT_BAND = 1e-6
GRADIENT_FLOOR = 1e-300
CONFIRM_BELOW = 1e4
LAMBDA_NAMES = ("ch", "c_h")
EPSILON_NAMES = ("cstar", "c*", "c_star")


class Verdict(Enum):
    SUBSOLUTION = "subsolution"
    SUPERSOLUTION = "supersolution"
    SOLUTION = "solution"
    NEITHER = "neither"
    MIXED_SIGN = "mixed_sign"

    def satisfies(self, expected):
        """ A solution is both a sub and a supersolution. """
        if self is expected: return True
        return self is Verdict.SOLUTION and expected in (Verdict.SUBSOLUTION, Verdict.SUPERSOLUTION)


def _as_radii(r):
    return np.asarray(r, dtype=float)


def _unwrap(r, value):
    return float(value) if np.ndim(r) == 0 else value


class Potential:
    """
    Radial potential V(r) >= 0. Subclasses implement `scaled`, r^p V(r).
    """
    domain_start = 0.0

    def scaled(self, params, r):
        raise NotImplementedError

    def __call__(self, params, r):
        r = _as_radii(r)
        return _unwrap(r, self.scaled(params, r) * np.exp(-params.p * np.log(r)))

    def check_domain(self, r):
        r = _as_radii(r)
        if np.any(r <= self.domain_start):
            raise DomainError(f"{self.spec} is defined for r > {self.domain_start:g}, got r={np.min(r):g}")


@dataclass(frozen=True)
class Zero(Potential):

    @property
    def spec(self):
        return "zero"

    def scaled(self, params, r):
        return np.zeros_like(_as_radii(r))


@dataclass(frozen=True)
class PureHardy(Potential):
    """ λ/r^p """
    lam: float

    def __post_init__(self):
        if not self.lam >= 0:
            raise DomainError(f"the Hardy strength must be >= 0, got {self.lam}")

    @property
    def spec(self):
        return f"hardy:{self.lam!r}"

    def scaled(self, params, r):
        return np.full_like(_as_radii(r), self.lam)


@dataclass(frozen=True)
class ImprovedHardy(Potential):
    """ C_H/r^p + ε/(r^p log^{m*} r) """
    epsilon: float
    domain_start = 1.0

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")

    @property
    def spec(self):
        return f"improved:{self.epsilon!r}"

    def scaled(self, params, r):
        r = _as_radii(r)
        self.check_domain(r)
        return c_h(params) + self.epsilon / np.log(r) ** m_star(params)


@dataclass(frozen=True)
class Tabulated(Potential):
    """
    Piecewise linear V (in log r) through sampled `values` at sorted `nodes`.
    """
    nodes: tuple
    values: tuple
    source: str = field(default="table", compare=False)

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        values = tuple(float(x) for x in self.values)
        if len(nodes) < 2 or len(nodes) != len(values):
            raise DomainError("a tabulated potential needs matching nodes and values (at least 2)")
        if nodes[0] <= 0 or np.any(np.diff(nodes) <= 0):
            raise DomainError("tabulated nodes must be positive and strictly increasing")
        if min(values) < 0:
            raise DomainError("tabulated potential values must be >= 0")
        object.__setattr__(self, 'nodes', nodes)
        object.__setattr__(self, 'values', values)

    @property
    def spec(self):
        return f"table:{self.source}"

    def __call__(self, params, r):
        r = _as_radii(r)
        if np.any(r < self.nodes[0]) or np.any(r > self.nodes[-1]):
            raise DomainError(f"{self.spec} covers [{self.nodes[0]:g}, {self.nodes[-1]:g}] only")
        return _unwrap(r, np.interp(np.log(r), np.log(self.nodes), self.values))

    def scaled(self, params, r):
        r = _as_radii(r)
        return self(params, r) * np.exp(params.p * np.log(r))

    @classmethod
    def from_csv(cls, filename):
        frame = pd.read_csv(filename)
        return cls(tuple(frame["r"]), tuple(frame["V"]), source=str(filename))


def _resolve_strength(token, critical, names, what):
    token = str(token).strip().lower()
    if critical is not None and token in names:
        return critical
    if critical is not None and token in ("mid", "half"):
        return critical / 2
    try:
        return float(Fraction(token))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot read {what} '{token}' (expected a number, mid or {names[0]})")


def resolve_epsilon(params, token):
    """
    Read `0`, `mid` (C_*/2), `cstar` (C_*) or a number.
    """
    return _resolve_strength(token, c_star(params), EPSILON_NAMES, "epsilon")


def resolve_lambda(params, token):
    """
    Read `0`, `mid` (C_H/2), `ch` (C_H) or a number.
    """
    return _resolve_strength(token, c_h(params), LAMBDA_NAMES, "lambda")


def potential_from_spec(spec, params=None):
    """
    Parse `zero`, `hardy:<λ>`, `improved:<ε>` or `table:<csv>`; with `params`
    the strengths may also be `ch`, `cstar` or `mid`.
    """
    kind, _, value = spec.strip().partition(':')
    kind = kind.lower()
    if kind == "zero":
        return Zero()
    if kind == "hardy":
        return PureHardy(_resolve_strength(value, c_h(params) if params else None, LAMBDA_NAMES, "lambda"))
    if kind == "improved":
        return ImprovedHardy(_resolve_strength(value, c_star(params) if params else None, EPSILON_NAMES, "epsilon"))
    if kind == "table":
        try:
            return Tabulated.from_csv(value)
        except (OSError, KeyError, pd.errors.ParserError) as exc:
            raise DomainError(f"cannot read the potential table '{value}': {exc}")
    raise DomainError(f"unknown potential '{spec}' (expected zero, hardy:<l>, improved:<e> or table:<csv>)")


@dataclass(frozen=True)
class RadialFamily:
    """
    u(r) = c r^α (log r)^β (log log r)^τ with closed form derivatives.

    With L = log r, M = log L and the local exponent s = r u'/u,

        s   = α + β/L + τ/(LM)
        s_t = ds/dlog r = -β/L² - τ(M+1)/(LM)²
        u'  = u s / r
        u'' = u (s² + s_t - s) / r²
    """
    alpha: float
    beta: float = 0.0
    tau: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise DomainError(f"the amplitude must be > 0, got {self.c}")
        for name in ('alpha', 'beta', 'tau', 'c'):
            object.__setattr__(self, name, float(getattr(self, name)))

    def __str__(self):
        return f"alpha={self.alpha!r},beta={self.beta!r},tau={self.tau!r},c={self.c!r}"

    @property
    def domain_start(self):
        if self.tau != 0: return math.e
        if self.beta != 0: return 1.0
        return 0.0

    def scaled(self, s):
        return replace(self, c=self.c * s)

    def _logs(self, r):
        r = _as_radii(r)
        if np.any(r <= self.domain_start):
            raise DomainError(f"{self} is defined for r > {self.domain_start:g}, got r={np.min(r):g}")
        t = np.log(r)
        L = t if self.beta != 0 or self.tau != 0 else None
        M = np.log(L) if self.tau != 0 else None
        return r, t, L, M

    def log_value(self, r):
        r, t, L, M = self._logs(r)
        value = math.log(self.c) + self.alpha * t
        if self.beta != 0: value = value + self.beta * np.log(L)
        if self.tau != 0: value = value + self.tau * np.log(M)
        return _unwrap(r, value)

    def exponent(self, r):
        """ Local exponent s = d log u / d log r. """
        r, t, L, M = self._logs(r)
        s = np.full_like(r, self.alpha)
        if self.beta != 0: s = s + self.beta / L
        if self.tau != 0: s = s + self.tau / (L * M)
        return _unwrap(r, s)

    def exponent_slope(self, r):
        """ ds/dlog r """
        r, t, L, M = self._logs(r)
        st = np.zeros_like(r)
        if self.beta != 0: st = st - self.beta / L ** 2
        if self.tau != 0: st = st - self.tau * (M + 1) / (L * M) ** 2
        return _unwrap(r, st)

    def __call__(self, r):
        return _unwrap(r, np.exp(self.log_value(r)))

    def derivative(self, r):
        r = _as_radii(r)
        return _unwrap(r, np.exp(self.log_value(r) - np.log(r)) * self.exponent(r))

    def second_derivative(self, r):
        r = _as_radii(r)
        s, st = self.exponent(r), self.exponent_slope(r)
        return _unwrap(r, np.exp(self.log_value(r) - 2 * np.log(r)) * (s * s + st - s))

    def derivatives(self, r):
        return self(r), self.derivative(r), self.second_derivative(r)

    @classmethod
    def from_spec(cls, spec, params=None, potential=None):
        """
        Parse `alpha=..,beta=..,tau=..,c=..`; omitted exponents are 0 and c is 1.

        Values are numbers, fractions (`2/3`) or one of `critical`,
        `alpha_lower`, `alpha_upper` (roots for a `hardy:` potential),
        `beta_lower`, `beta_upper` (roots for an `improved:` potential).
        """
        values = {}
        for item in filter(None, (x.strip() for x in spec.split(','))):
            key, sep, value = item.partition('=')
            key = key.strip().lower()
            if not sep or key not in ('alpha', 'beta', 'tau', 'c'):
                raise DomainError(f"invalid family term '{item}' in '{spec}'")
            values[key] = _resolve_exponent(value.strip(), params, potential)
        if 'alpha' not in values:
            values['alpha'] = 0.0
        return cls(**values)


def _resolve_exponent(token, params, potential):
    named = token.lower()
    if named in ('critical', 'alpha_lower', 'alpha_upper', 'beta_lower', 'beta_upper'):
        if params is None:
            raise DomainError(f"'{token}' needs p and N")
        if named == 'critical':
            return params.critical_alpha
        if named.startswith('alpha'):
            lam = potential.lam if isinstance(potential, PureHardy) else 0.0
            pair = hardy_roots(params, lam)
        else:
            if not isinstance(potential, ImprovedHardy):
                raise DomainError(f"'{token}' needs an improved:<epsilon> potential")
            pair = improved_roots(params, potential.epsilon)
        return pair.lower if named.endswith('lower') else pair.upper
    try:
        return float(Fraction(token))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot read exponent '{token}'")


@dataclass(frozen=True)
class Annulus:
    """
    B]r0, R0[ with 0 < r0 < R0 <= inf.
    """
    r0: float
    R0: float = math.inf

    def __post_init__(self):
        if not 0 < self.r0 < self.R0:
            raise DomainError(f"an annulus needs 0 < r0 < R0, got r0={self.r0}, R0={self.R0}")

    @property
    def bounded(self):
        return math.isfinite(self.R0)

    def grid(self, spec=GridSpec()):
        outer = self.R0 if self.bounded else spec.rmax
        return geometric_grid(self.r0, outer, spec.nodes)

    def admits(self, u):
        return self.r0 > getattr(u, 'domain_start', 0.0)


def radial_L(params, u, r):
    """
    L(u) = (p-1)u'' + (N-1)/r u'.
    """
    p, N = params.p, params.N
    r = _as_radii(r)
    if isinstance(u, RadialFamily):
        s, st = u.exponent(r), u.exponent_slope(r)
        value = np.exp(u.log_value(r) - 2 * np.log(r)) * ((p - 1) * (s * s + st - s) + (N - 1) * s)
    else:
        _, du, d2u = u.derivatives(r)
        value = (p - 1) * d2u + (N - 1) / r * du
    return _unwrap(r, value)


def _gradient_factor(p, grad, r):
    """ |u'|^{p-2}, identically 1 for p = 2 """
    if p == 2:
        return np.ones_like(grad)
    small = np.flatnonzero(grad < GRADIENT_FLOOR)
    if len(small):
        i = small[0]
        raise DegenerateGradient(f"|u'| = {grad[i]:.3g} at r = {r[i]:.6g} with p = {p}")
    return grad ** (p - 2)


def residual_terms(params, V, r, u, du, d2u):
    """
    Flux term |u'|^{p-2}L(u) and potential term V u^{p-1} for sampled
    derivatives; residual = -(flux + potential).
    """
    p, N = params.p, params.N
    r, u, du, d2u = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (r, u, du, d2u))
    flux = _gradient_factor(p, np.abs(du), r) * ((p - 1) * d2u + (N - 1) / r * du)
    potential = V(params, r) * np.sign(u) * np.abs(u) ** (p - 1)
    return flux, potential


def reduced_family_terms(params, u, V, r):
    """
    `residual_terms` of a RadialFamily divided by the positive factor
    u^{p-1} r^{-p}; both terms depend on r only through the local exponent
    and r^p V, so they stay finite at any radius.
    """
    p, N = params.p, params.N
    r = np.atleast_1d(_as_radii(r))
    s, st = u.exponent(r), u.exponent_slope(r)
    if p != 2:
        # u > 0, so u' = u s / r vanishes exactly where s does
        zero = np.flatnonzero(s == 0)
        if len(zero):
            i = zero[0]
            raise DegenerateGradient(f"u' = 0 at r = {r[i]:.6g} with p = {p}")
    weight = 1.0 if p == 2 else np.abs(s) ** (p - 2)
    flux = weight * ((p - 1) * (s * s + st - s) + (N - 1) * s)
    return flux, V.scaled(params, r)


def family_terms(params, u, V, r):
    """
    `residual_terms` for a RadialFamily, evaluated through the local exponent.
    """
    r = np.atleast_1d(_as_radii(r))
    flux, potential = reduced_family_terms(params, u, V, r)
    prefactor = np.exp((params.p - 1) * u.log_value(r) - params.p * np.log(r))
    return prefactor * flux, prefactor * potential


def profile_terms(params, u, V, r):
    if isinstance(u, RadialFamily):
        return family_terms(params, u, V, r)
    return residual_terms(params, V, r, *u.derivatives(r))


def sign_terms(params, u, V, r):
    """
    Flux and potential terms up to a common positive factor; enough for the
    residual sign and the scaled residual.
    """
    if isinstance(u, RadialFamily):
        return reduced_family_terms(params, u, V, r)
    return residual_terms(params, V, r, *u.derivatives(r))


def residual(params, u, V, r):
    """
    -|u'|^{p-2}L(u) - V u^{p-1}; negative for subsolution-type and positive for
    supersolution-type behaviour at r.
    """
    flux, potential = profile_terms(params, u, V, r)
    return _unwrap(r, -(flux + potential))


def scaled_residual(params, u, V, r):
    flux, potential = sign_terms(params, u, V, r)
    return _unwrap(r, -(flux + potential) / (np.abs(flux) + np.abs(potential) + 1e-300))


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    verdict: Verdict
    rho0: float
    strict: bool
    r: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    slopes: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)
    scaled: np.ndarray = field(repr=False)
    dead_band: float = DEAD_BAND

    def satisfies(self, expected):
        return self.verdict.satisfies(expected)

    @property
    def uniform(self):
        """ Sign is uniform on the whole grid. """
        return self.verdict is not Verdict.MIXED_SIGN and self.rho0 <= self.r[0]

    @property
    def evidence(self):
        return pd.DataFrame({
            "r": self.r, "u": self.values, "u'": self.slopes,
            "residual": self.residual, "scaled_residual": self.scaled,
        })

    def to_dict(self, evidence=False):
        report = {
            "verdict": self.verdict.value,
            "rho0": self.rho0,
            "strict": self.strict,
            "nodes": len(self.r),
            "r_min": self.r[0],
            "r_max": self.r[-1],
            "max_scaled_residual": float(np.max(self.scaled)),
            "min_scaled_residual": float(np.min(self.scaled)),
            "dead_band": self.dead_band,
        }
        if evidence:
            report["evidence"] = self.evidence.to_dict(orient="list")
        return report


def uniform_suffix(signs):
    """
    Final sign and start of the longest suffix of `signs` (values in
    {-1, 0, 1}, at least one nonzero) free of the opposite sign.
    """
    signed = np.flatnonzero(signs)
    final = signs[signed[-1]]
    if len(signed) > 1 and signs[signed[-2]] == -final:
        raise InconclusiveGrid(f"the residual sign alternates up to the final node ({len(signs)} nodes)")
    opposite = np.flatnonzero(signs == -final)
    return int(final), int(opposite[-1]) + 1 if len(opposite) else 0


def summarize_signs(r, scaled, dead_band=DEAD_BAND, strict_band=STRICT_BAND):
    """
    Verdict, ρ0, strictness and suffix start for scaled residuals on `r`.

    ρ0 is the first node of the longest suffix on which no residual has the
    sign opposite to the final one. When the sign still alternates at the
    last signed node there is no such suffix: MixedSign with ρ0 = inf.
    """
    r, scaled = np.asarray(r), np.asarray(scaled)
    n = len(r)
    if not np.all(np.isfinite(scaled)):
        return Verdict.NEITHER, math.inf, False, n

    signs = relative_dead_band(scaled, np.ones_like(scaled), dead_band)
    if not np.any(signs):
        return Verdict.SOLUTION, float(r[0]), False, 0

    try:
        final, start = uniform_suffix(signs)
    except InconclusiveGrid:
        return Verdict.MIXED_SIGN, math.inf, False, n

    verdict = Verdict.SUPERSOLUTION if final > 0 else Verdict.SUBSOLUTION
    strict = bool(np.all(np.abs(scaled[start:]) > strict_band))
    return verdict, float(r[start]), strict, start


def classify_on(params, u, V, r):
    """
    Classify profile `u` on the radii `r`.
    """
    r = np.asarray(r, dtype=float)
    flux, potential = sign_terms(params, u, V, r)
    scaled = -(flux + potential) / (np.abs(flux) + np.abs(potential) + 1e-300)
    res = residual(params, u, V, r)
    verdict, rho0, strict, _ = summarize_signs(r, scaled)
    values, slopes, _ = u.derivatives(r)
    return ClassificationReport(verdict, rho0, strict, r, values, slopes, res, scaled)


def require_verdict(params, f, V, r, expected, name):
    """
    `f` must carry the `expected` residual sign (or be a solution) at every
    node of `r`; returns its classification.
    """
    report = classify_on(params, f, V, r)
    opposite = 1 if expected is Verdict.SUBSOLUTION else -1
    signs = relative_dead_band(report.scaled, np.ones_like(report.scaled), DEAD_BAND)
    bad = np.flatnonzero((signs == opposite) | ~np.isfinite(report.scaled))
    if len(bad):
        i = bad[0]
        raise PreconditionViolated(
            f"{name} is not a {expected.value} at r = {r[i]:.6g}", node=float(r[i]),
            scaled_residual=float(report.scaled[i]), verdict=report.verdict.value,
        )
    return report


def classify(params, u, V, ann, grid=GridSpec()):
    """
    Residual-sign classification of `u` on a geometric grid over `ann`.
    """
    if grid.nodes < MIN_CLASSIFY_NODES:
        raise DomainError(f"classify needs at least {MIN_CLASSIFY_NODES} nodes, got {grid.nodes}")
    if not ann.admits(u):
        raise DomainError(f"r0={ann.r0} is outside the domain of {u} (r > {u.domain_start:g})")
    return classify_on(params, u, V, ann.grid(grid))


@dataclass(frozen=True)
class Cell:
    """
    One entry of the sub/supersolution table: exponents (β, τ) of
    u = r^{(p-N)/p} log^β r (log log r)^τ and the expected verdict
    (None when the table makes no claim).
    """
    row: str
    column: str
    rule: str
    beta: float
    tau: float
    expected: Verdict = None


def table1_row(params, epsilon):
    if params.conformal:
        return "p=N"
    if epsilon == 0:
        return "eps=0"
    if improved_roots(params, epsilon).degenerate:
        return "eps=C*"
    return "0<eps<C*"


def table1_cells(params, epsilon):
    """
    Representative exponents for every entry of the table row selected by ε.

    Bounded ranges use their midpoint, unbounded ranges their endpoint moved
    σ/2 into the range (σ = 2/p, or 1 for p = N).
    """
    sub, sup = Verdict.SUBSOLUTION, Verdict.SUPERSOLUTION
    p = params.p
    lower, upper = improved_roots(params, epsilon)
    row = table1_row(params, epsilon)
    off = 0.5 if params.conformal else 1 / p
    cell = partial(Cell, row)

    if row == "p=N":
        return [
            cell("sub_lower", "beta <= beta_eps, tau = 0", lower - off, 0.0, sub),
            cell("super", "beta in [beta_eps, bar_beta_eps], tau = 0", (lower + upper) / 2, 0.0, sup),
            cell("sub_upper", "beta >= bar_beta_eps, tau = 0", upper + off, 0.0, sub),
        ]
    if row == "eps=0":
        return [
            cell("sub_lower", "beta <= 0, tau = 0", -off, 0.0, sub),
            cell("super", "beta in [0, 2/p), tau = 0", 1 / p, 0.0, sup),
            cell("sub_upper", "beta > 2/p, tau = 0", 2 / p + off, 0.0, sub),
            cell("sub_upper", "beta = 2/p, tau > 0", 2 / p, off, sub),
        ]
    if row == "0<eps<C*":
        return [
            cell("sub_lower", "beta < beta_eps, tau = 0", lower - off, 0.0, sub),
            cell("sub_lower", "beta = beta_eps, tau < 0", lower, -off, sub),
            cell("super", "beta in (beta_eps, bar_beta_eps), tau = 0", (lower + upper) / 2, 0.0, sup),
            cell("super", "beta = beta_eps, tau > 0", lower, off, sup),
            cell("super", "beta = bar_beta_eps, tau < 0", upper, -off, sup),
            cell("sub_upper", "beta > bar_beta_eps, tau = 0", upper + off, 0.0, sub),
            cell("sub_upper", "beta = bar_beta_eps, tau > 0", upper, off, sub),
        ]
    return [
        cell("sub_lower", "beta < 1/p, tau = 0", 1 / p - off, 0.0, sub),
        cell("sub_lower", "beta = 1/p, tau < 0", 1 / p, -off, sub),
        cell("super", "beta = 1/p, tau in (0, 2/p)", 1 / p, 1 / p, sup),
        cell("sub_upper", "beta > 1/p, tau = 0", 1 / p + off, 0.0, sub),
        cell("sub_upper", "beta = 1/p, tau > 2/p", 1 / p, 2 / p + off, sub),
        cell("unasserted", "beta = 1/p, tau = 0", 1 / p, 0.0, None),
    ]


def table1_family(params, cell):
    alpha = 0.0 if params.conformal else params.critical_alpha
    return RadialFamily(alpha, cell.beta, cell.tau)


def classify_cell(params, epsilon, cell, r0=3.0, rmax=1e6, nodes=512, confirm_below=CONFIRM_BELOW):
    report = classify(
        params, table1_family(params, cell), ImprovedHardy(epsilon),
        Annulus(r0, rmax), GridSpec(nodes=nodes, rmax=rmax),
    )
    confirmed = None
    if cell.expected is not None:
        confirmed = report.satisfies(cell.expected) and report.rho0 < confirm_below
    return {
        "epsilon": epsilon,
        "row": cell.row,
        "column": cell.column,
        "rule": cell.rule,
        "beta": cell.beta,
        "tau": cell.tau,
        "expected": cell.expected.value if cell.expected else None,
        "verdict": report.verdict.value,
        "rho0": report.rho0,
        "strict": report.strict,
        "confirmed": confirmed,
    }


def _classify_cell_task(task):
    params, epsilon, cell, settings = task
    try:
        return classify_cell(params, epsilon, cell, **settings)
    except (DomainError, DegenerateGradient) as exc:
        return {
            "epsilon": epsilon, "row": cell.row, "column": cell.column, "rule": cell.rule,
            "beta": cell.beta, "tau": cell.tau,
            "expected": cell.expected.value if cell.expected else None,
            "verdict": "error", "rho0": math.inf, "strict": False,
            "confirmed": False if cell.expected else None, "error": str(exc),
        }


@dataclass(frozen=True, eq=False)
class Table1Report:
    p: float
    N: int
    frame: pd.DataFrame = field(repr=False)

    @property
    def asserted(self):
        return self.frame[self.frame.expected.notna()]

    @property
    def confirmed(self):
        return bool(self.asserted.confirmed.astype(bool).all())

    @property
    def failures(self):
        asserted = self.asserted
        return asserted[~asserted.confirmed.astype(bool)]

    def to_dict(self):
        return {
            "p": self.p,
            "N": self.N,
            "confirmed": self.confirmed,
            "cells": self.frame.to_dict(orient="records"),
        }


def table1_suite(
    params, epsilon_cases, r0=3.0, rmax=1e6, nodes=512, confirm_below=CONFIRM_BELOW,
    n_proc=0, show_progress=False,
):
    """
    Classify a representative of every table entry for each ε in
    `epsilon_cases`; per-cell failures are recorded, never raised.
    """
    settings = dict(r0=r0, rmax=rmax, nodes=nodes, confirm_below=confirm_below)
    cells = [(float(epsilon), cell) for epsilon in epsilon_cases for cell in table1_cells(params, epsilon)]
    tasks = ((i, (params, epsilon, cell, settings)) for i, (epsilon, cell) in enumerate(cells))
    results = progress(
        process_map(_classify_cell_task, tasks, n_proc=n_proc),
        total=len(cells), desc="> classifying", unit=" cells", enabled=show_progress,
    )
    results = sorted(results, key=lambda kv: kv[0])
    return Table1Report(params.p, params.N, pd.DataFrame([row for _, row in results]))
