"""
Hardy inequality

Convexity inequality for the map (a, c) -> a^q/c^{q-1} and the superposition
principles for radial sub/supersolutions it yields.
"""

from logging import getLogger
from dataclasses import dataclass, field

import numpy as np

from hardy.errors import DomainError, PreconditionViolated
from hardy.exponents import Params, c_h, c_star, hardy_roots, improved_roots
from hardy.family import (
    DEAD_BAND, Annulus, ImprovedHardy, PureHardy, RadialFamily, Verdict, classify, require_verdict,
)
from hardy.multiprocessing import process_map, seed_shards
from hardy.util import GridSpec, progress


logger = getLogger(__name__)

LOG_SPACE_BELOW = 1e-100
LOG_SPACE_ABOVE = 1e100
ADMISSIBLE_MARGIN = 0.01
DEGENERATE_RTOL = 1e-12
REGIMES = ("convex", "concave", "equality", "strict")


@dataclass(frozen=True)
class Quadruple:
    a: float
    b: float
    c: float
    d: float
    q: float

    def __post_init__(self):
        if not (self.a >= 0 and self.b >= 0):
            raise DomainError(f"a and b must be >= 0, got a={self.a}, b={self.b}")
        if not (self.c > 0 and self.d > 0):
            raise DomainError(f"c and d must be > 0, got c={self.c}, d={self.d}")
        if not self.q > 0:
            raise DomainError(f"q must be > 0, got {self.q}")


def power_ratio(x, y, q):
    """
    x^q / y^{q-1}, evaluated in log space where a base leaves
    [1e-100, 1e100] or the direct form over/underflows.
    """
    x, y, q = (np.asarray(v, dtype=float) for v in (x, y, q))
    with np.errstate(over='ignore', under='ignore', divide='ignore', invalid='ignore'):
        direct = x ** q / y ** (q - 1)
        logged = np.exp(q * np.log(x) - (q - 1) * np.log(y))
    safe = (
        ((x == 0) | ((x >= LOG_SPACE_BELOW) & (x <= LOG_SPACE_ABOVE)))
        & (y >= LOG_SPACE_BELOW) & (y <= LOG_SPACE_ABOVE)
        & np.isfinite(direct) & ((direct != 0) | (x == 0))
    )
    return np.where(safe, direct, logged)


def convexity_terms(a, b, c, d, q):
    """
    Left (a+b)^q/(c+d)^{q-1} and right a^q/c^{q-1} + b^q/d^{q-1} hand sides.
    """
    a, b, c, d, q = (np.asarray(v, dtype=float) for v in (a, b, c, d, q))
    lhs = power_ratio(a + b, c + d, q)
    rhs = power_ratio(a, c, q) + power_ratio(b, d, q)
    return lhs, rhs


def convexity_gaps(a, b, c, d, q):
    """
    Vectorised `convexity_gap` returning (gap, scale) with scale = |lhs| + |rhs|.
    """
    lhs, rhs = convexity_terms(a, b, c, d, q)
    return rhs - lhs, np.abs(lhs) + np.abs(rhs)


def convexity_gap(quad):
    """
    a^q/c^{q-1} + b^q/d^{q-1} - (a+b)^q/(c+d)^{q-1}.

    Non negative for q >= 1, non positive for 0 < q <= 1 and zero exactly
    when q = 1 or ad = bc.
    """
    if quad.q == 1:
        return 0.0
    gap, _ = convexity_gaps(quad.a, quad.b, quad.c, quad.d, quad.q)
    return float(gap)


def _log_uniform(rng, low, high, size):
    return 10.0 ** rng.uniform(low, high, size)


def regimes_for(q):
    """
    The regimes whose contract applies at a fixed exponent `q`.
    """
    if not q > 0:
        raise DomainError(f"q must be > 0, got {q}")
    regimes = ["equality"]
    if q >= 1: regimes.insert(0, "convex")
    if q <= 1: regimes.insert(0, "concave")
    if q >= 1.5: regimes.append("strict")
    return tuple(sorted(regimes, key=REGIMES.index))


def sample_quadruples(rng, regime, samples, q=None):
    """
    Random (a, b, c, d, q) arrays for one of `REGIMES`; a given `q` replaces
    the drawn exponents.
    """
    a, b, c, d, drawn = _draw_quadruples(rng, regime, samples)
    if q is None:
        return a, b, c, d, drawn
    return a, b, c, d, np.full(samples, float(q))


def _draw_quadruples(rng, regime, samples):
    if regime == "strict":
        chunks, found = [], 0
        while found < samples:
            a, b, c, d = rng.uniform(0.1, 10, (4, 2 * samples))
            keep = np.abs(a * d - b * c) >= 0.1 * (a * d + b * c)
            chunks.append(np.stack([a, b, c, d])[:, keep])
            found += keep.sum()
        a, b, c, d = np.concatenate(chunks, axis=1)[:, :samples]
        return a, b, c, d, rng.uniform(1.5, 6, samples)

    a, b, c, d = _log_uniform(rng, -20, 20, (4, samples))
    a = np.where(rng.random(samples) < 0.05, 0.0, a)
    b = np.where(rng.random(samples) < 0.05, 0.0, b)

    if regime == "convex":
        q = rng.uniform(1, 6, samples)
    elif regime == "concave":
        q = 1 - rng.uniform(0, 1, samples)
    elif regime == "equality":
        a, b, c = _log_uniform(rng, -20, 20, (3, samples))
        d = b * c / a
        q = rng.uniform(0, 6, samples)
        q = np.where(q == 0, 1.0, q)
    else:
        raise DomainError(f"unknown regime '{regime}', expected one of {', '.join(REGIMES)}")
    return a, b, c, d, q


def regime_margin(regime, gap, scale):
    """
    Signed margin by which each sample satisfies the regime contract; a
    negative value is a violation.
    """
    if regime == "convex":
        return gap + 1e-12 * scale
    if regime == "concave":
        return 1e-12 * scale - gap
    if regime == "equality":
        return 1e-10 * scale - np.abs(gap)
    if regime == "strict":
        return gap - 1e-6 * scale
    raise DomainError(f"unknown regime '{regime}', expected one of {', '.join(REGIMES)}")


def _quadruple_shard(task):
    regime, samples, seed, fixed_q = task
    rng = np.random.default_rng(seed)
    a, b, c, d, q = sample_quadruples(rng, regime, samples, fixed_q)
    gap, scale = convexity_gaps(a, b, c, d, q)
    margin = regime_margin(regime, gap, scale) / np.where(scale > 0, scale, 1.0)
    worst = int(np.argmin(margin))
    return {
        "samples": samples,
        "violations": int(np.sum(margin < 0)),
        "worst_margin": float(margin[worst]),
        "worst": [float(x[worst]) for x in (a, b, c, d, q)],
    }


@dataclass(frozen=True)
class QuadrupleSuiteReport:
    regime: str
    samples: int
    seed: int
    shards: int
    violations: int
    worst_margin: float
    worst: tuple
    q: float = None

    @property
    def passed(self):
        return self.violations == 0

    def to_dict(self):
        return {
            "regime": self.regime,
            "samples": self.samples,
            "seed": self.seed,
            "shards": self.shards,
            "q": self.q,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "worst": dict(zip("abcdq", self.worst)),
            "passed": self.passed,
        }


def quadruple_suite(regime, samples=100_000, seed=0, shards=8, n_proc=0, q=None):
    """
    Check the convexity contract of `regime` on `samples` random quadruples
    drawn over independent seed shards, at a fixed exponent when `q` is given.
    """
    if regime not in REGIMES:
        raise DomainError(f"unknown regime '{regime}', expected one of {', '.join(REGIMES)}")
    if q is not None and regime not in regimes_for(q):
        raise DomainError(f"the {regime} contract does not apply at q={q}")
    shards = max(1, min(shards, samples))
    sizes = np.diff(np.linspace(0, samples, shards + 1).astype(int))
    tasks = enumerate(zip([regime] * shards, sizes.tolist(), seed_shards(seed, shards), [q] * shards))
    results = [result for _, result in process_map(_quadruple_shard, tasks, n_proc=n_proc)]
    worst = min(results, key=lambda x: x["worst_margin"])
    return QuadrupleSuiteReport(
        regime, samples, seed, shards,
        violations=sum(x["violations"] for x in results),
        worst_margin=worst["worst_margin"],
        worst=tuple(worst["worst"]),
        q=q,
    )


def admissible_scaling(u, v, r, margin=ADMISSIBLE_MARGIN):
    """
    Largest (1 - margin) s with s v <= u and s v' between u' and 0 on `r`.
    """
    uu, du, _ = u.derivatives(r)
    vv, dv, _ = v.derivatives(r)
    ratios = np.concatenate([uu / vv, du / dv])
    if np.any(~np.isfinite(ratios)) or np.any(ratios <= 0):
        raise PreconditionViolated("u and v must be positive with derivatives of one strict sign")
    return (1 - margin) * float(np.min(ratios))


def admissible_pair(u, v, r, margin=ADMISSIBLE_MARGIN):
    return u, v.scaled(admissible_scaling(u, v, r, margin))


@dataclass(frozen=True, eq=False)
class DifferenceReport:
    """
    Residual sign of u - v against the `expected` verdict.
    """
    expected: Verdict
    holds: bool
    max_violation: float
    first_violation: float
    degenerate_nodes: int
    r: np.ndarray = field(repr=False)
    scaled: np.ndarray = field(repr=False)

    def to_dict(self):
        return {
            "expected": self.expected.value,
            "holds": self.holds,
            "max_violation": self.max_violation,
            "first_violation": self.first_violation,
            "degenerate_nodes": self.degenerate_nodes,
            "nodes": len(self.r),
            "max_scaled_residual": float(np.max(self.scaled)),
            "min_scaled_residual": float(np.min(self.scaled)),
        }


def _first(r, mask):
    bad = np.flatnonzero(mask)
    return (float(r[bad[0]]), int(bad[0])) if len(bad) else (None, None)


def _require_ordering(r, uu, vv, du, dv, strict):
    node, index = _first(r, ~((vv > 0) & (vv <= uu)))
    if node is not None:
        raise PreconditionViolated(
            f"0 < v <= u fails at r = {node:.6g}", node=node, u=float(uu[index]), v=float(vv[index]),
        )
    band = DEGENERATE_RTOL * (np.abs(du) + np.abs(dv)) if strict else 0.0
    if dv[0] < 0:
        ok = (du <= dv - band) & (dv < 0)
        shape = "u' < v' < 0" if strict else "u' <= v' < 0"
    else:
        ok = (du >= dv + band) & (dv > 0)
        shape = "u' > v' > 0" if strict else "u' >= v' > 0"
    node, index = _first(r, ~ok)
    if node is not None:
        raise PreconditionViolated(
            f"{shape} fails at r = {node:.6g}", node=node, du=float(du[index]), dv=float(dv[index]),
        )


def difference_residual(params, V, r, u, v):
    """
    Scaled residual of w = u - v and the mask of degenerate gradient nodes.

    Where |u' - v'| <= 1e-12 (|u'| + |v'|) and p > 2 the flux term is taken as
    0, leaving -V w^{p-1}.
    """
    p, N = params.p, params.N
    uu, du, d2u = u.derivatives(r)
    vv, dv, d2v = v.derivatives(r)
    w, dw, d2w = uu - vv, du - dv, d2u - d2v

    degenerate = np.abs(dw) <= DEGENERATE_RTOL * (np.abs(du) + np.abs(dv))
    if p == 2:
        degenerate[:] = False
        weight = np.ones_like(dw)
    else:
        with np.errstate(divide='ignore'):
            weight = np.where(degenerate, 0.0, np.abs(dw) ** (p - 2))
    flux = weight * ((p - 1) * d2w + (N - 1) / r * dw)
    potential = V(params, r) * np.sign(w) * np.abs(w) ** (p - 1)
    scaled = -(flux + potential) / (np.abs(flux) + np.abs(potential) + 1e-300)
    return scaled, degenerate


def _difference_report(r, scaled, degenerate, expected):
    sign = 1 if expected is Verdict.SUBSOLUTION else -1
    excess = sign * scaled
    bad = (excess > DEAD_BAND) | ~np.isfinite(scaled)
    node, _ = _first(r, bad)
    return DifferenceReport(
        expected, holds=node is None,
        max_violation=float(np.max(np.where(np.isfinite(excess), excess, np.inf))),
        first_violation=node,
        degenerate_nodes=int(degenerate.sum()),
        r=r, scaled=scaled,
    )


def superposition_check(params, u, v, V, ann, grid=GridSpec()):
    """
    For p >= 2, 0 < v <= u with u' <= v' < 0 (or u' >= v' > 0), u a subsolution
    and v a supersolution: check that u - v is a subsolution on the grid.
    """
    params.require_superposition()
    r = ann.grid(grid)
    uu, du, _ = u.derivatives(r)
    vv, dv, _ = v.derivatives(r)
    _require_ordering(r, uu, vv, du, dv, strict=False)
    require_verdict(params, u, V, r, Verdict.SUBSOLUTION, "u")
    require_verdict(params, v, V, r, Verdict.SUPERSOLUTION, "v")
    scaled, degenerate = difference_residual(params, V, r, u, v)
    report = _difference_report(r, scaled, degenerate, Verdict.SUBSOLUTION)
    if not report.holds:
        logger.warning("u - v fails the subsolution sign at r = %.6g", report.first_violation)
    return report


def supersolution_difference_check(params, u, v, V, ann, grid=GridSpec()):
    """
    For 1 < p <= 2, 0 < v <= u with u' < v' < 0 (or u' > v' > 0), u a
    supersolution and v a subsolution: check that u - v is a supersolution.
    """
    if params.p > 2:
        raise DomainError(f"the supersolution difference needs p <= 2, got p={params.p}")
    r = ann.grid(grid)
    uu, du, _ = u.derivatives(r)
    vv, dv, _ = v.derivatives(r)
    _require_ordering(r, uu, vv, du, dv, strict=True)
    require_verdict(params, u, V, r, Verdict.SUPERSOLUTION, "u")
    require_verdict(params, v, V, r, Verdict.SUBSOLUTION, "v")
    scaled, degenerate = difference_residual(params, V, r, u, v)
    return _difference_report(r, scaled, degenerate, Verdict.SUPERSOLUTION)


SUITE_P = (2.0, 2.5, 3.0, 4.0)
SUITE_N = (2, 3, 5, 7)


def random_hardy_pair(rng, r_range=(1.0, 100.0)):
    """
    A random admissible (params, V, annulus, u, v): u = r^{α_λ} solves the pure
    Hardy equation and v = s r^β with β strictly between the roots is a strict
    supersolution, rescaled below u.
    """
    while True:
        params = Params(float(rng.choice(SUITE_P)), int(rng.choice(SUITE_N)))
        if not params.conformal: break
    lam = rng.uniform(0.05, 0.95) * c_h(params)
    lower, upper = hardy_roots(params, lam)
    beta = lower + rng.uniform(0.1, 0.9) * (upper - lower)
    ann = Annulus(*r_range)
    u, v = RadialFamily(lower), RadialFamily(beta)
    return params, PureHardy(lam), ann, *admissible_pair(u, v, ann.grid(GridSpec(nodes=128)))


def random_improved_pair(rng, tail=(1e3, 1e8), decades=(1.0, 3.0)):
    """
    A random admissible (params, V, annulus, u, v) for the improved Hardy
    potential: u = r^{(p-N)/p} log^β r with β below β_ε is a subsolution and
    v = s r^{(p-N)/p} log^γ r with γ between the roots a supersolution. The
    annulus starts past the radius from which both signs are settled.
    """
    while True:
        params = Params(float(rng.choice(SUITE_P)), int(rng.choice(SUITE_N)))
        if params.conformal: continue
        epsilon = rng.uniform(0.05, 0.95) * c_star(params)
        lower, upper = improved_roots(params, epsilon)
        alpha, V = params.critical_alpha, ImprovedHardy(epsilon)
        u = RadialFamily(alpha, lower - rng.uniform(0.1, 0.9) / params.p)
        v = RadialFamily(alpha, lower + rng.uniform(0.1, 0.9) * (upper - lower))
        settled = Annulus(3.0, tail[1])
        reports = [classify(params, f, V, settled, GridSpec(nodes=256, rmax=tail[1])) for f in (u, v)]
        if not all(x.satisfies(e) for x, e in zip(reports, (Verdict.SUBSOLUTION, Verdict.SUPERSOLUTION))):
            continue
        r0 = max(tail[0], *(x.rho0 for x in reports))
        if r0 * 10 ** decades[0] > tail[1]: continue
        ann = Annulus(r0, r0 * 10 ** rng.uniform(*decades))
        try:
            u, v = admissible_pair(u, v, ann.grid(GridSpec(nodes=128)))
        except PreconditionViolated:
            continue
        return params, V, ann, u, v


PAIR_FAMILIES = {"hardy": random_hardy_pair, "improved": random_improved_pair}


def _superposition_trial(task):
    seed, nodes, family = task
    params, V, ann, u, v = PAIR_FAMILIES[family](np.random.default_rng(seed))
    record = {"family": family, "p": params.p, "N": params.N, "potential": V.spec, "u": str(u), "v": str(v)}
    try:
        report = superposition_check(params, u, v, V, ann, GridSpec(nodes=nodes))
    except PreconditionViolated as exc:
        return {**record, "holds": None, "skipped": str(exc)}
    return {**record, **report.to_dict()}


def superposition_suite(trials=1000, seed=0, nodes=128, families=tuple(PAIR_FAMILIES), n_proc=0, show_progress=False):
    """
    Run `superposition_check` on `trials` random admissible pairs, cycling
    through the pair `families`; returns the trial records and the failures
    among them. Pairs that miss a hypothesis on the sampled grid are recorded
    with `holds = None`.
    """
    tasks = enumerate(
        (s, nodes, families[i % len(families)]) for i, s in enumerate(seed_shards(seed, trials))
    )
    results = progress(
        process_map(_superposition_trial, tasks, n_proc=n_proc),
        total=trials, desc="> trials", unit=" pairs", enabled=show_progress,
    )
    records = [record for _, record in sorted(results, key=lambda kv: kv[0])]
    return records, [record for record in records if record["holds"] is False]
