"""
Hardy exponents

Critical constants and exponent roots for the radial p-Laplacian with the
potentials λ/r^p and C_H/r^p + ε/(r^p log^{m*} r).
"""

from logging import getLogger
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from hardy.errors import DomainError, DegenerateDimension


logger = getLogger(__name__)

CLAMP_RTOL = 1e-12
DEGENERATE_RTOL = 1e-10
_XTOL = 1e-300
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class Params:
    """
    Exponent `p` of the p-Laplacian and dimension `N`.
    """
    p: float
    N: int

    def __post_init__(self):
        if not self.p > 1:
            raise DomainError(f"p must be > 1, got {self.p}")
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"N must be an integer >= 2, got {self.N}")
        object.__setattr__(self, 'p', float(self.p))
        object.__setattr__(self, 'N', int(self.N))

    @property
    def conformal(self):
        return self.p == self.N

    @property
    def critical_alpha(self):
        """ (p-N)/p, the argmax of λ_α. """
        return (self.p - self.N) / self.p

    @property
    def zero_alpha(self):
        """ (p-N)/(p-1), the non trivial zero of λ_α. """
        return (self.p - self.N) / (self.p - 1)

    def require_superposition(self):
        if self.p < 2:
            raise DomainError(f"superposition needs p >= 2, got p={self.p}")


@dataclass(frozen=True)
class HardyConstants:
    C_H: float
    C_star: float
    m_star: int


@dataclass(frozen=True)
class ExponentPair:
    """
    Ordered pair of roots; `residual` is the largest relative residual of the
    root equation at either root.
    """
    lower: float
    upper: float
    degenerate: bool
    residual: float = 0.0

    def __iter__(self):
        return iter((self.lower, self.upper))

    @classmethod
    def of(cls, lower, upper, residual=0.0):
        lower, upper = min(lower, upper), max(lower, upper)
        degenerate = abs(upper - lower) <= DEGENERATE_RTOL * (1 + abs(lower))
        return cls(float(lower), float(upper), degenerate, float(residual))

    def contains(self, x):
        return self.lower <= x <= self.upper


def _signed_power(x, q):
    """ sign(x)|x|^q """
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** q


def lambda_of_alpha(params, alpha):
    """
    λ_α = α|α|^{p-2}(p-N-(p-1)α), the strength of the Hardy potential for
    which r^α solves the equation.
    """
    p, N = params.p, params.N
    value = _signed_power(alpha, p - 1) * (p - N - (p - 1) * np.asarray(alpha, dtype=float))
    return value if np.ndim(value) else float(value)


def c_h(params):
    return abs(params.critical_alpha) ** params.p


def m_star(params):
    return params.N if params.conformal else 2


def c_star(params):
    p, N = params.p, params.N
    if params.conformal:
        return ((N - 1) / N) ** N
    return (p - 1) / (2 * p) * abs(params.critical_alpha) ** (p - 2)


def hardy_constants(params):
    return HardyConstants(C_H=c_h(params), C_star=c_star(params), m_star=m_star(params))


def _clamp(value, upper, name):
    """
    Check 0 <= value <= upper, clamping values within CLAMP_RTOL above `upper`.
    """
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    if value > upper * (1 + CLAMP_RTOL):
        raise DomainError(f"{name}={value!r} exceeds its critical value {upper!r}")
    if value > upper:
        logger.debug("clamping %s=%r to %r", name, value, upper)
        return upper
    return value


def _branch_root(func, a, b):
    """
    Root of a monotone `func` on the bracket [a, b].
    """
    fa, fb = func(a), func(b)
    if fa == 0: return a
    if fb == 0: return b
    return brentq(func, min(a, b), max(a, b), xtol=_XTOL, rtol=_RTOL, maxiter=500)


def _relative_residual(func, target, roots, scale):
    return max(abs(func(x) - target) for x in roots) / max(abs(target), scale, 1e-300)


def hardy_roots(params, lam):
    """
    Solutions α_λ <= ᾱ_λ of λ_α = λ for 0 <= λ <= C_H.
    """
    if params.conformal:
        if lam < 0:
            raise DomainError(f"lambda must be >= 0, got {lam}")
        if lam > 0:
            raise DegenerateDimension(f"C_H = 0 when p = N = {params.N}; lambda={lam} admits no roots")
        return ExponentPair.of(0.0, 0.0)

    ch = c_h(params)
    lam = _clamp(lam, ch, "lambda")
    a0, a1 = params.zero_alpha, params.critical_alpha

    if lam == 0:
        return ExponentPair.of(a0, 0.0)
    if lam == ch:
        return ExponentPair.of(a1, a1)

    func = lambda a: lambda_of_alpha(params, a) - lam
    first = _branch_root(func, a0, a1)
    second = _branch_root(func, a1, 0.0)
    residual = _relative_residual(lambda a: lambda_of_alpha(params, a), lam, (first, second), 0)
    return ExponentPair.of(first, second, residual)


def improved_lhs(params, beta):
    """
    Left hand side of the root equation for the improved Hardy exponents,
    ½|(p-N)/p|^{p-2}(p-1)(2-βp)β for p != N and (N-1)(1-β)β|β|^{N-2} for p = N.
    """
    p, N = params.p, params.N
    beta = np.asarray(beta, dtype=float)
    if params.conformal:
        value = (N - 1) * (1 - beta) * _signed_power(beta, N - 1)
    else:
        value = 0.5 * abs(params.critical_alpha) ** (p - 2) * (p - 1) * (2 - beta * p) * beta
    return value if np.ndim(value) else float(value)


def improved_roots(params, epsilon):
    """
    Exponents β_ε <= β̄_ε of the log factor for 0 <= ε <= C_*.
    """
    cs = c_star(params)
    epsilon = _clamp(epsilon, cs, "epsilon")
    p, N = params.p, params.N

    if params.conformal:
        mid = (N - 1) / N
        if epsilon == 0:
            return ExponentPair.of(0.0, 1.0)
        if epsilon == cs:
            return ExponentPair.of(mid, mid)
        func = lambda b: improved_lhs(params, b) - epsilon
        roots = (_branch_root(func, 0.0, mid), _branch_root(func, mid, 1.0))
    else:
        if epsilon == 0:
            return ExponentPair.of(0.0, 2 / p)
        if epsilon == cs:
            return ExponentPair.of(1 / p, 1 / p)
        # the p != N equation is the quadratic pβ² - 2β + ε/(p C_*) = 0
        root = np.sqrt(1 - epsilon / cs)
        roots = ((1 - root) / p, (1 + root) / p)

    residual = _relative_residual(lambda b: improved_lhs(params, b), epsilon, roots, cs)
    return ExponentPair.of(*roots, residual)


def mu_of_beta(params, beta):
    """
    μ_β = (p-1)β|β|^{p-2}(1-β), the rescaled Hardy strength.
    """
    p = params.p
    value = (p - 1) * _signed_power(beta, p - 1) * (1 - np.asarray(beta, dtype=float))
    return value if np.ndim(value) else float(value)


def rescaled_roots(params, lam):
    """
    Roots β_2 <= β_1 of μ_β = |(p-1)/(p-N)|^p λ on [0, 1], returned as
    ExponentPair(lower=β_2, upper=β_1).
    """
    if params.conformal:
        raise DegenerateDimension(f"the rescaling (p-N)/(p-1) vanishes for p = N = {params.N}")
    p = params.p
    lam = _clamp(lam, c_h(params), "lambda")
    target = abs((p - 1) / (p - params.N)) ** p * lam
    mid = (p - 1) / p

    if lam == 0:
        return ExponentPair.of(0.0, 1.0)
    if lam == c_h(params):
        return ExponentPair.of(mid, mid)

    func = lambda b: mu_of_beta(params, b) - target
    roots = (_branch_root(func, 0.0, mid), _branch_root(func, mid, 1.0))
    residual = _relative_residual(lambda b: mu_of_beta(params, b), target, roots, 0)
    return ExponentPair.of(*roots, residual)


def hardy_report(params, lam=None, epsilon=None):
    """
    Every constant and root pair for (params, λ, ε) as a flat dict.
    """
    constants = hardy_constants(params)
    report = {
        "p": params.p,
        "N": params.N,
        "c_h": constants.C_H,
        "c_star": constants.C_star,
        "m_star": constants.m_star,
        "critical_alpha": params.critical_alpha,
        "degenerate": {},
        "residuals": {},
    }

    if lam is not None:
        alphas = hardy_roots(params, lam)
        report.update(alpha_lower=alphas.lower, alpha_upper=alphas.upper)
        report["degenerate"]["alpha"] = alphas.degenerate
        report["residuals"]["alpha"] = alphas.residual
        if not params.conformal:
            betas = rescaled_roots(params, lam)
            report.update(rescaled_lower=betas.lower, rescaled_upper=betas.upper)
            report["degenerate"]["rescaled"] = betas.degenerate
            report["residuals"]["rescaled"] = betas.residual

    if epsilon is not None:
        betas = improved_roots(params, epsilon)
        report.update(beta_lower=betas.lower, beta_upper=betas.upper)
        report["degenerate"]["beta"] = betas.degenerate
        report["residuals"]["beta"] = betas.residual

    return report
