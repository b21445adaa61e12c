"""Dyadic-block sequence norms: solid hull and solid core of the growth scale.

The hull norm of a coefficient sequence is the supremum over dyadic blocks
[2^n, 2^(n+1)-1] of the power-weighted l2 block sums; the core norm uses the
l1 block sums.  Only blocks lying fully inside the truncated vector enter
the supremum, so extending a vector with zeros changes nothing and a partial
trailing block cannot bias the result (its exclusion is recorded).
"""

from dataclasses import dataclass

import numpy as np

from ._validation import as_coefficients, check_positive
from .exceptions import ConfigurationError
from .operators import hilbert_apply_fast, _moment_values


@dataclass(frozen=True)
class BlockNormProfile:
    """Per-block values over the dyadic blocks [2^n, 2^(n+1)-1].

    ``sup`` is the maximum over the complete blocks; ``partial_excluded``
    records whether a trailing incomplete block was dropped.  Index 0 sits
    in front of the first block and does not contribute.
    """

    block_starts: np.ndarray
    values: np.ndarray
    sup: float
    partial_excluded: bool

    def __len__(self):
        return len(self.values)


def _block_profile(weighted, length):
    starts = []
    vals = []
    n = 0
    while True:
        lo, hi = 2 ** n, 2 ** (n + 1)
        if hi > length:
            break
        starts.append(lo)
        vals.append(weighted(lo, hi))
        n += 1
    partial = 2 ** n < length
    vals = np.asarray(vals, dtype=float)
    sup = float(vals.max()) if len(vals) else 0.0
    return BlockNormProfile(np.asarray(starts), vals, sup, partial)


def solid_hull_norm(coeffs, gamma):
    """Hull block norms: (sum over the block of |a_m|^2 / (m+1)^(2 gamma))^(1/2)."""
    a = np.abs(as_coefficients(coeffs))
    gamma = check_positive(gamma, "gamma")

    def block(lo, hi):
        m = np.arange(lo, hi, dtype=float)
        return float(np.sqrt(np.sum((a[lo:hi] / (m + 1) ** gamma) ** 2)))

    return _block_profile(block, len(a))


def solid_core_norm(coeffs, gamma):
    """Core block norms: sum over the block of |a_m| / (m+1)^gamma."""
    a = np.abs(as_coefficients(coeffs))
    gamma = check_positive(gamma, "gamma")

    def block(lo, hi):
        m = np.arange(lo, hi, dtype=float)
        return float(np.sum(a[lo:hi] / (m + 1) ** gamma))

    return _block_profile(block, len(a))


@dataclass(frozen=True)
class MappingCheck:
    """Numeric check that the operator image stays in the hull (or core) ball.

    The weighted l1 coefficient sum M = sum mu_n |a_n| dominates every output
    coefficient, so each complete image block value must stay below M
    (hull blocks need the weight exponent gamma >= 1/2, core blocks
    gamma >= 1).
    """

    weighted_l1: float
    image_blocks: BlockNormProfile
    bound_ok: bool
    mode: str


def hull_mapping_check(moments, coeffs, gamma, *, core=False, rtol=1e-9):
    """Verify the block-norm bound on the image of a coefficient vector.

    Computes M = sum mu_n |a_n|, applies the moment-kernel operator, and
    checks every complete dyadic block value of the image against M.
    ``core=True`` checks the l1 block sums instead (the variant without the
    square-root block-size factor), which requires gamma >= 1.
    """
    mu = _moment_values(moments)
    a = as_coefficients(coeffs)
    gamma = check_positive(gamma, "gamma")
    floor = 1.0 if core else 0.5
    if gamma < floor - 1e-12:
        raise ConfigurationError(
            f"the {'core' if core else 'hull'} mapping bound needs "
            f"gamma >= {floor}")
    if len(mu) < 2 * len(a) - 1:
        raise ConfigurationError(
            f"need {2 * len(a) - 1} moments for width {len(a)}")
    weighted_l1 = float(np.dot(mu[:len(a)], np.abs(a)))
    image = hilbert_apply_fast(mu, a)
    profile = (solid_core_norm(image, gamma) if core
               else solid_hull_norm(image, gamma))
    bound = weighted_l1 * (1.0 + rtol) + 1e-300
    ok = bool(np.all(profile.values <= bound))
    return MappingCheck(weighted_l1, profile, ok, "core" if core else "hull")
