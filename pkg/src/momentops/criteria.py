"""Boundedness, compactness and nuclearity criteria and verdict assembly.

The decision surfaces are finite: profiles over the geometric radial grid,
dyadic partial sums, tail-mass ratios, and finite matrix sections.  Exact
dichotomies (a supremum is finite or not, a limit is zero or not, a series
converges or not) are mapped to three-valued verdicts through explicit
trend bands, with an indeterminate band in between instead of a forced
binary answer.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._validation import check_index, check_positive, check_real
from .exceptions import ConfigurationError, NotWellDefinedError
from .measures import DEFAULT_TRUNCATION, Measure
from .operators import HankelSection, _moment_values
from .spaces import Weight

#: trend bands (see the module docstring of each decision helper)
LIMIT_ZERO_FRACTION = 0.05
PLATEAU_BAND = 0.10
PLATEAU_FLOOR = 0.20
GROWTH_FACTOR = 1.25
TREND_WINDOW = 5

#: dyadic-summability heuristics
TAIL_FRACTION = 0.02
BLOCK_RATIO_LIMIT = 0.90

#: dense eigensolves are desk-scale evidence only
MAX_SECTION_SIZE = 1024


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self):
        return self is Verdict.YES


# --------------------------------------------------------------------- #
# profiles and their trends


@dataclass(frozen=True)
class ProfileCurve:
    """Values of a boundary criterion on the geometric grid toward 1.

    ``tail_slope`` is the per-level slope of log2(values) over the last
    levels (so a curve behaving like gap^alpha has slope -alpha... positive
    slopes mean growth toward the boundary).
    """

    gaps: np.ndarray
    values: np.ndarray
    sup: float
    last: float
    tail_slope: float
    sufficient_only: bool = False

    @property
    def radii(self):
        return 1.0 - self.gaps

    @classmethod
    def from_values(cls, gaps, values, sufficient_only=False):
        gaps = np.asarray(gaps, dtype=float)
        values = np.asarray(values, dtype=float)
        sup = float(np.max(values))
        last = float(values[-1])
        tail = values[-(TREND_WINDOW + 1):]
        pos = tail > 0
        if pos.sum() >= 2:
            logs = np.log2(tail[pos])
            idx = np.nonzero(pos)[0]
            slope = float(np.polyfit(idx.astype(float), logs, 1)[0])
        else:
            slope = -math.inf
        return cls(gaps, values, sup, last, slope, sufficient_only)

    def growth_verdict(self, growth_factor=GROWTH_FACTOR):
        """Is the profile numerically bounded toward the boundary?

        NO when the values grew by more than ``growth_factor`` across the
        last ``TREND_WINDOW`` levels; YES when they plateau or decay; the
        band in between is inconclusive.
        """
        v = self.values
        if len(v) <= TREND_WINDOW:
            return Verdict.INCONCLUSIVE
        prev, cur = v[-1 - TREND_WINDOW], v[-1]
        if prev > 0 and cur / prev > growth_factor:
            return Verdict.NO
        if cur <= prev * (1 + 1e-9) or self.tail_slope <= 0.01:
            return Verdict.YES
        return Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class LimitDecision:
    """Outcome of the limit-is-zero test on a profile."""

    verdict: Verdict
    evidence: dict

    @property
    def limit_zero(self):
        return bool(self.verdict)


def compactness_limit(profile, *, zero_fraction=LIMIT_ZERO_FRACTION,
                      plateau_band=PLATEAU_BAND, plateau_floor=PLATEAU_FLOOR):
    """Decide whether a profile tends to zero toward the boundary.

    Zero: the last three values decrease and the final value is below
    ``zero_fraction`` of the profile supremum.  Nonzero: the last three
    values agree within ``plateau_band`` relative and stay above
    ``plateau_floor`` of the supremum.  Anything else is inconclusive.
    """
    v = profile.values
    if len(v) < 4:
        return LimitDecision(Verdict.INCONCLUSIVE, {"reason": "short profile"})
    tail = v[-3:]
    sup = profile.sup
    evidence = {"sup": sup, "tail": tail.tolist(), "tail_slope": profile.tail_slope}
    decreasing = bool(tail[0] >= tail[1] >= tail[2])
    if decreasing and tail[2] < zero_fraction * sup:
        return LimitDecision(Verdict.YES, evidence)
    spread = (tail.max() - tail.min()) / max(tail.max(), 1e-300)
    if spread <= plateau_band and tail[2] > plateau_floor * sup:
        return LimitDecision(Verdict.NO, evidence)
    return LimitDecision(Verdict.INCONCLUSIVE, evidence)


def boundedness_profile(measure, v, w, *, levels=24, rtol=1e-10):
    """Profile r -> w(r) * integral of d mu(t) / (v(t) (1 - t r)).

    The supremum of this curve controls the operator norm between the
    weighted sup-norm spaces of v and w; its boundary limit controls
    compactness.  Raises :class:`NotWellDefinedError` when the r = 0
    integral (the reciprocal-weight integrability test) already diverges.

    For non-essential (tabulated) weights the criterion is sufficient only,
    which the returned profile records.
    """
    if not isinstance(measure, Measure):
        raise ConfigurationError("boundedness_profile needs a Measure")
    recip = v.reciprocal_kernel()
    base = measure.integrate_kernel(recip, rtol=rtol)
    if base.diverged:
        raise NotWellDefinedError(
            "reciprocal-weight integral diverges: the operator is not "
            "well defined on this weighted space", evidence=base)

    gaps = 2.0 ** -np.arange(levels + 1)
    values = np.empty(levels + 1)
    for j, gap_r in enumerate(gaps):
        r = 1.0 - gap_r

        def kernel(t, gap, gap_r=gap_r, r=r):
            # 1 - t r = gap_r + r * gap, exact near the boundary
            return recip(t, gap) / (gap_r + r * gap)

        inner = measure.integrate_kernel(kernel, rtol=rtol,
                                         assume_convergent=True)
        values[j] = w.value_from_gap(gap_r) * inner.value
    return ProfileCurve.from_values(gaps, values,
                                    sufficient_only=not v.is_essential)


# --------------------------------------------------------------------- #
# tail-mass (Carleson-type) ratios


@dataclass(frozen=True)
class CarlesonResult:
    """Tail-mass ratio profile mu([t,1)) / (1-t)^s on the dyadic grid."""

    s: float
    profile: ProfileCurve
    constant: float
    bounded: Verdict
    vanishing_verdict: Verdict

    @property
    def vanishing(self):
        return bool(self.vanishing_verdict)


def carleson_check(measure, s, *, levels=64):
    """Estimate the s-order tail-mass behaviour of the measure.

    ``constant`` is the grid supremum of mu([t,1)) / (1-t)^s; ``bounded``
    says whether the ratio stays bounded toward 1 (the O bound) and
    ``vanishing_verdict`` whether it tends to zero (the o bound).  Tails are
    evaluated in closed form from the gap 1 - t, so the grid may go far
    beyond the radii representable as 1 - gap in double precision.
    """
    s = check_positive(s, "s")
    gaps = 2.0 ** -np.arange(levels + 1).astype(float)
    ratios = np.array([measure.tail_mass_gap(g) / g ** s for g in gaps])
    profile = ProfileCurve.from_values(gaps, ratios)
    bounded = profile.growth_verdict()
    vanish = compactness_limit(profile).verdict
    if vanish is Verdict.YES:
        bounded = Verdict.YES
    return CarlesonResult(s, profile, float(ratios.max()), bounded, vanish)


# --------------------------------------------------------------------- #
# moment decay and summability


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit mu_n ~ amplitude * n^(-exponent) on dyadic n."""

    exponent: float
    amplitude: float
    residual: float
    sample_indices: np.ndarray


def moment_decay_fit(moments, window=(16, 4096)):
    """Fit the power-decay exponent of the moment table on dyadic indices.

    The window default skips the pre-asymptotic small-n range; the residual
    (rms in log space) reveals non-power corrections such as log factors.
    """
    mu = _moment_values(moments)
    lo, hi = window
    ns = 2 ** np.arange(int(math.log2(max(lo, 1))),
                        int(math.log2(min(hi, len(mu) - 1))) + 1)
    ns = ns[(ns >= lo) & (ns < len(mu))]
    vals = mu[ns]
    keep = vals > 0
    ns, vals = ns[keep], vals[keep]
    if len(ns) < 3:
        raise ConfigurationError("decay fit needs >= 3 positive dyadic moments")
    x = np.log(ns.astype(float))
    y = np.log(vals)
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return DecayFit(float(-slope), float(math.exp(intercept)), resid, ns)


@dataclass(frozen=True)
class SummabilityResult:
    """Dyadic partial sums of a positive term sequence with a verdict.

    Convergence heuristics: the last dyadic block contributes below
    ``TAIL_FRACTION`` of the running total and the trailing block ratios
    decay geometrically (ratio below ``BLOCK_RATIO_LIMIT``).  Block ratios
    near or above 1 mean a non-summable tail.
    """

    total: float
    partial_sums: np.ndarray
    block_sums: np.ndarray
    last_fraction: float
    block_ratio: float
    verdict: Verdict

    @property
    def converged(self):
        return bool(self.verdict)


def dyadic_summability(terms, *, tail_fraction=TAIL_FRACTION,
                       ratio_limit=BLOCK_RATIO_LIMIT):
    """Classify sum(terms) as convergent/divergent from dyadic blocks."""
    t = np.asarray(terms, dtype=float)
    if t.ndim != 1 or len(t) < 8:
        raise ConfigurationError("summability needs >= 8 terms")
    if np.any(t < 0):
        raise ConfigurationError("summability terms must be >= 0")
    n_blocks = int(math.floor(math.log2(len(t) - 1))) if len(t) > 1 else 0
    blocks = np.array([t[2 ** j:min(2 ** (j + 1), len(t))].sum()
                       for j in range(n_blocks)])
    partials = t[0] + np.cumsum(blocks)
    total = float(partials[-1]) if len(partials) else float(t[0])
    last_fraction = float(blocks[-1] / max(total, 1e-300)) if len(blocks) else 0.0

    pos = blocks[-4:][blocks[-4:] > 0]
    if len(pos) >= 2:
        ratios = pos[1:] / pos[:-1]
        block_ratio = float(np.exp(np.mean(np.log(ratios))))
    else:
        block_ratio = 0.0

    if block_ratio >= 1.0:
        verdict = Verdict.NO
    elif block_ratio >= ratio_limit:
        verdict = Verdict.NO if last_fraction > tail_fraction else Verdict.INCONCLUSIVE
    elif last_fraction <= tail_fraction:
        verdict = Verdict.YES
    else:
        verdict = Verdict.INCONCLUSIVE
    return SummabilityResult(total, partials, blocks, last_fraction,
                             block_ratio, verdict)


def moment_summability(moments, gamma, **options):
    """Dyadic convergence test for sum of mu_n * n^(gamma-1).

    The n = 0 term carries weight 1 (the zero index is irrelevant to
    convergence and this keeps the gamma = 1 case equal to the plain moment
    sum).
    """
    mu = _moment_values(moments)
    gamma = check_positive(gamma, "gamma")
    n = np.arange(len(mu), dtype=float)
    weights = np.maximum(n, 1.0) ** (gamma - 1.0)
    return dyadic_summability(mu * weights, **options)


# --------------------------------------------------------------------- #
# classification


@dataclass(frozen=True)
class ClassificationReport:
    """Verdict flags with the criterion and numeric evidence behind each."""

    gamma: float
    delta: float
    truncation: int
    well_defined: Verdict
    bounded: Verdict
    compact: Verdict
    nuclear: Verdict
    criteria: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)

    def consistent(self):
        """Verdict ordering: compact => bounded, nuclear => compact,
        not-well-defined => nothing else holds."""
        if self.well_defined is Verdict.NO:
            return (self.bounded is Verdict.NO and self.compact is Verdict.NO
                    and self.nuclear is Verdict.NO)
        ok = True
        if self.compact is Verdict.YES:
            ok &= self.bounded is Verdict.YES
        if self.nuclear is Verdict.YES:
            ok &= self.compact is Verdict.YES
        return ok

    def to_dict(self):
        return {
            "gamma": self.gamma,
            "delta": self.delta,
            "truncation": self.truncation,
            "well_defined": self.well_defined.value,
            "bounded": self.bounded.value,
            "compact": self.compact.value,
            "nuclear": self.nuclear.value,
            "criteria": dict(self.criteria),
            "evidence": _jsonable(self.evidence),
        }


def classify_growth(measure, gamma, delta=0.0, *, truncation=DEFAULT_TRUNCATION,
                    levels=24):
    """Classify the operator between the power-weight spaces (gamma, gamma+delta).

    Two regimes share the decision tree.  Below the boundary
    (gamma + delta < 1) boundedness is equivalent to an order-(1 - delta)
    tail-mass bound and compactness to its vanishing form.  At or above the
    boundary, well-definedness, boundedness and compactness all collapse to
    the convergence of sum mu_n n^(gamma-1).  Nuclearity is not decided on
    this scale; a separate sequence-space analysis covers it.
    """
    check_positive(gamma, "gamma")
    delta = check_real(delta, "delta")
    if delta <= -gamma:
        raise ConfigurationError("delta must exceed -gamma")
    ms = measure.moments(truncation)
    criteria = {}
    evidence = {"total_mass": ms.total_mass}

    if gamma + delta >= 1.0 - 1e-12:
        summ = moment_summability(ms, gamma)
        v = summ.verdict
        criteria.update({
            "well_defined": "weighted-moment-summability",
            "bounded": "weighted-moment-summability",
            "compact": "weighted-moment-summability (boundedness and "
                       "compactness coincide at or above the unit "
                       "weight-exponent boundary)",
        })
        evidence["summability"] = {
            "total": summ.total,
            "last_fraction": summ.last_fraction,
            "block_ratio": summ.block_ratio,
            "partial_sums": summ.partial_sums.tolist(),
        }
        well, bounded, compact = v, v, v
    else:
        criteria["well_defined"] = "reciprocal-weight-integrability"
        recip = Weight.standard(gamma).reciprocal_kernel()
        integ = measure.integrate_kernel(recip, rtol=1e-10)
        evidence["reciprocal_weight_integral"] = (
            math.inf if integ.diverged else integ.value)
        if integ.diverged:
            evidence["graded_partials"] = integ.partials.tolist()
            well = Verdict.NO
            bounded = compact = Verdict.NO
            criteria["bounded"] = criteria["compact"] = "implied by ill-definedness"
        else:
            well = Verdict.YES
            s = 1.0 - delta
            car = carleson_check(measure, s)
            criteria["bounded"] = f"tail-mass-ratio bounded at order s={s:g}"
            criteria["compact"] = f"tail-mass-ratio vanishing at order s={s:g}"
            evidence["carleson"] = {
                "s": s,
                "constant": car.constant,
                "ratios": car.profile.values.tolist(),
                "tail_slope": car.profile.tail_slope,
            }
            bounded, compact = car.bounded, car.vanishing_verdict
            if compact is Verdict.YES:
                bounded = Verdict.YES
            if bounded is Verdict.NO:
                compact = Verdict.NO

    if well is Verdict.NO:
        nuclear = Verdict.NO
        criteria["nuclear"] = "implied by ill-definedness"
    else:
        nuclear = Verdict.INCONCLUSIVE
        criteria["nuclear"] = ("not characterized on the growth scale; "
                               "see the sequence-space row-norm criteria")
    report = ClassificationReport(gamma, delta, truncation, well, bounded,
                                  compact, nuclear, criteria, evidence)
    assert report.consistent()
    return report


# --------------------------------------------------------------------- #
# finite sections, nuclearity bounds, row norms


def hankel_section_svd(moments, size):
    """Singular values of the size x size moment-kernel section, descending.

    The section is symmetric positive semidefinite, so these are its
    eigenvalues (clipped at zero against round-off).  Sizes are capped:
    finite sections are desk-scale evidence, not a large-scale eigensolver.
    """
    size = check_index(size, "size", minimum=1)
    if size > MAX_SECTION_SIZE:
        raise ConfigurationError(f"section size capped at {MAX_SECTION_SIZE}")
    eigs = HankelSection(moments, size).eigenvalues()
    return np.maximum(eigs, 0.0)


@dataclass(frozen=True)
class NuclearBound:
    """Moment-sum bound on the trace-class norm over the coefficient space."""

    partial: float
    tail_estimate: float
    verdict: Verdict
    summability: SummabilityResult

    @property
    def converged(self):
        return bool(self.verdict)


def nuclear_bound_wiener(moments):
    """sum mu_k as a nuclear-norm bound on the absolutely-summable
    coefficient space, with a power-fit tail estimate.

    A divergent moment sum (flagged through the verdict) means the operator
    is not even well defined there.
    """
    mu = _moment_values(moments)
    summ = dyadic_summability(mu)
    partial = float(mu.sum())
    tail = math.inf
    if summ.verdict is Verdict.YES:
        try:
            fit = moment_decay_fit(mu, window=(16, len(mu) - 1))
            if fit.exponent > 1.0:
                n = float(len(mu))
                tail = fit.amplitude * n ** (1.0 - fit.exponent) / (fit.exponent - 1.0)
        except ConfigurationError:
            tail = float(sum(b for b in summ.block_sums[-1:]))
    return NuclearBound(partial, tail, summ.verdict, summ)


@dataclass(frozen=True)
class RowNormSummary:
    """Dual-exponent norms of the operator rows (mu_{n+k})_n.

    ``condition_value`` is q * (r - 1/p') for the fitted moment-decay
    exponent r; values above 1 predict q-summability of the row norms,
    which the numeric ``verdict`` checks independently.
    """

    p: float
    q: float
    row_norms: np.ndarray
    verdict: Verdict
    summability: SummabilityResult
    decay_exponent: float
    condition_value: float

    @property
    def q_summable(self):
        return bool(self.verdict)

    @property
    def condition_ok(self):
        return self.condition_value > 1.0


def lpq_row_norms(moments, p, q, *, rows=None):
    """Row norms ||(mu_{n+k})_n||_{p'} and their q-summability verdict.

    p' is the conjugate exponent of p (infinity for p = 1, in which case the
    row norm is mu_k itself because the rows are non-increasing).
    """
    mu = _moment_values(moments)
    p = check_real(p, "p")
    q = check_real(q, "q")
    if p < 1 or q < 1:
        raise ConfigurationError("p and q must be >= 1")
    total = len(mu)
    if rows is None:
        rows = (total + 1) // 2
    rows = check_index(rows, "rows", minimum=8)
    cols = total - rows + 1
    if cols < 1:
        raise ConfigurationError("moment table too short for the row count")

    if p == 1:
        norms = mu[:rows].copy()
    else:
        pc = p / (p - 1.0) if p != math.inf else 1.0
        powers = mu ** pc
        csum = np.concatenate([[0.0], np.cumsum(powers)])
        norms = (csum[cols:cols + rows] - csum[:rows]) ** (1.0 / pc)

    summ = dyadic_summability(norms ** q)
    try:
        fit = moment_decay_fit(mu, window=(16, total - 1))
        r_exp = fit.exponent
    except ConfigurationError:
        r_exp = math.inf
    pc_inv = 0.0 if p == 1 else (1.0 - 1.0 / p)
    condition = q * (r_exp - pc_inv)
    return RowNormSummary(p, q, norms, summ.verdict, summ, r_exp,
                          float(condition))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, Verdict):
        return obj.value
    return obj
