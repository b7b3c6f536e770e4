"""
Hardy catalog

Witness pairs (u, w) behind the Phragmén-Lindelöf statements in exterior
domains, and strict supersolutions for the potentials of the family module.
"""

from dataclasses import dataclass

from hardy.errors import DomainError, PreconditionViolated
from hardy.exponents import c_h, c_star, hardy_roots, improved_roots
from hardy.family import Annulus, ImprovedHardy, PureHardy, RadialFamily, Tabulated, Zero
from hardy.ode import pl_alternative
from hardy.util import DEFAULT_HORIZON, DEFAULT_NODES


@dataclass(frozen=True)
class CatalogPair:
    """
    u is a subsolution, w a supersolution, and `expected` is the alternative
    (`domination` or `non_smallness`) the theory predicts for u/w.
    """
    name: str
    potential: object
    u: RadialFamily
    w: RadialFamily
    expected: str


def strict_supersolution(params, V):
    """
    A positive supersolution of -Δ_p u = V u^{p-1} that is not a solution,
    which certifies the comparison principle on annuli inside its domain.
    """
    p, N = params.p, params.N
    if isinstance(V, Tabulated):
        raise PreconditionViolated(f"no catalog supersolution for {V.spec}; supply a witness")

    if params.conformal:
        if isinstance(V, ImprovedHardy):
            lower, upper = improved_roots(params, V.epsilon)
            if not lower < upper:
                return RadialFamily(0.0, lower, 1 / N)
            return RadialFamily(0.0, (lower + upper) / 2)
        if isinstance(V, PureHardy) and V.lam > 0:
            raise DomainError(f"C_H = 0 for p = N, the Hardy strength {V.lam} is supercritical")
        return RadialFamily(0.0, 0.5)

    alpha = params.critical_alpha
    if isinstance(V, Zero):
        return RadialFamily(sum(hardy_roots(params, 0.0)) / 2)
    if isinstance(V, PureHardy):
        lower, upper = hardy_roots(params, V.lam)
        if lower < upper:
            return RadialFamily((lower + upper) / 2)
        return RadialFamily(alpha, 1 / p)
    if isinstance(V, ImprovedHardy):
        lower, upper = improved_roots(params, V.epsilon)
        if lower < upper:
            return RadialFamily(alpha, (lower + upper) / 2)
        return RadialFamily(alpha, 1 / p, 1 / p)
    raise DomainError(f"unknown potential {V!r}")


def hardy_pairs(params, lam, tau=None):
    """
    Pairs for the pure Hardy potential λ/r^p (λ = C_H included).
    """
    p = params.p
    V = PureHardy(lam)
    if params.conformal:
        return [
            CatalogPair("conformal-domination", V, RadialFamily(0.0), RadialFamily(0.0, 0.5), "domination"),
            CatalogPair("conformal-non-smallness", V, RadialFamily(0.0, 1.0), RadialFamily(0.0, 0.5), "non_smallness"),
        ]
    lower, upper = hardy_roots(params, lam)
    if lower < upper:
        mid = RadialFamily((lower + upper) / 2)
        return [
            CatalogPair("hardy-domination", V, RadialFamily(lower), mid, "domination"),
            CatalogPair("hardy-non-smallness", V, RadialFamily(upper), mid, "non_smallness"),
        ]
    alpha, tau = params.critical_alpha, 1 / p if tau is None else tau
    return [
        CatalogPair("critical-hardy-domination", V, RadialFamily(alpha), RadialFamily(alpha, 1 / p), "domination"),
        CatalogPair(
            "critical-hardy-non-smallness", V,
            RadialFamily(alpha, 2 / p, tau), RadialFamily(alpha), "non_smallness",
        ),
    ]


def improved_pairs(params, epsilon, tau=None):
    """
    Pairs for the improved Hardy potential with 0 < ε <= C_*.
    """
    if params.conformal:
        raise DomainError("the improved Hardy pairs are stated for p != N")
    if not epsilon > 0:
        raise DomainError(f"the improved Hardy pairs need epsilon > 0, got {epsilon}")
    p, alpha = params.p, params.critical_alpha
    V = ImprovedHardy(epsilon)
    lower, upper = improved_roots(params, epsilon)
    tau = 1 / p if tau is None else tau

    if lower < upper:
        return [
            CatalogPair(
                "improved-domination", V,
                RadialFamily(alpha, lower, -tau), RadialFamily(alpha, 1 / p), "domination",
            ),
            CatalogPair(
                "improved-non-smallness", V,
                RadialFamily(alpha, upper, tau), RadialFamily(alpha, upper, -tau), "non_smallness",
            ),
        ]
    return [
        CatalogPair(
            "critical-improved-domination", V,
            RadialFamily(alpha, 1 / p, -tau), RadialFamily(alpha, 1 / p, 1 / p), "domination",
        ),
        CatalogPair(
            "critical-improved-non-smallness", V,
            RadialFamily(alpha, 1 / p, 2 / p + tau), RadialFamily(alpha, 1 / p, 1 / p), "non_smallness",
        ),
    ]


def catalog_pairs(params, lam=None, epsilon=None, tau=None):
    """
    Every pair that applies to (p, N): Hardy pairs at λ (C_H/2 by default) and
    at C_H, and improved pairs at ε (C_*/2 by default) and at C_*.
    """
    if params.conformal:
        return hardy_pairs(params, 0.0, tau)
    lam = c_h(params) / 2 if lam is None else lam
    pairs = hardy_pairs(params, lam, tau)
    if lam != c_h(params):
        pairs += hardy_pairs(params, c_h(params), tau)
    epsilon = c_star(params) / 2 if epsilon is None else epsilon
    if epsilon > 0:
        pairs += improved_pairs(params, epsilon, tau)
    if epsilon != c_star(params):
        pairs += improved_pairs(params, c_star(params), tau)
    return pairs


def catalog_check(params, pairs=None, r0=3.0, horizon=DEFAULT_HORIZON, nodes=DEFAULT_NODES):
    """
    Run the ratio diagnostic on each pair and compare with the expected
    alternative.
    """
    pairs = catalog_pairs(params) if pairs is None else pairs
    results = []
    for pair in pairs:
        ann = Annulus(r0)
        diagnostic = pl_alternative(params, pair.u, pair.w, ann, horizon=horizon, nodes=nodes)
        results.append({
            "name": pair.name,
            "potential": pair.potential.spec,
            "u": str(pair.u),
            "w": str(pair.w),
            "expected": pair.expected,
            **diagnostic.to_dict(),
            "confirmed": diagnostic.supports == pair.expected,
        })
    return results
