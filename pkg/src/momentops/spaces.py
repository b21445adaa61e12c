"""Radial weights, truncated Taylor expansions, and their norms.

Weighted sup-norms are evaluated on a radial grid that refines
geometrically toward the boundary (r_j = 1 - 2^-j), because every
criterion in this package is driven by the r -> 1 behaviour.  Norms of
truncations are reported as grid maxima, hence lower bounds of the true
supremum over the disc.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import (as_coefficients, check_index, check_positive,
                          check_real)
from .exceptions import ConfigurationError, DomainError

#: evaluation cutoff 1 - 2^-24; guards (1-r)^gamma against underflow noise
MAX_LEVEL = 24
R_MAX = 1.0 - 2.0 ** -MAX_LEVEL

STANDARD = "standard"
CONSTANT = "constant_one"
TABULATED = "tabulated"


@dataclass(frozen=True)
class Weight:
    """A radial, continuous, non-increasing weight on the unit disc.

    ``standard(gamma)`` is (1-r)^gamma; ``constant_one`` is the flat weight
    (flagged separately because it does not vanish at the boundary);
    ``tabulated`` interpolates sampled radial values piecewise-linearly.
    """

    kind: str
    gamma: float = None
    table: tuple = None

    def __post_init__(self):
        if self.kind not in (STANDARD, CONSTANT, TABULATED):
            raise ConfigurationError(f"unknown weight kind {self.kind!r}")
        if self.kind == STANDARD:
            check_positive(self.gamma, "gamma")
        elif self.kind == TABULATED:
            tab = self.table
            if tab is None or len(tab) < 2:
                raise ConfigurationError("tabulated weight needs >= 2 samples")
            rs = [check_real(r, "radius") for r, _ in tab]
            vs = [check_real(v, "weight value") for _, v in tab]
            if any(not 0 <= r < 1 for r in rs):
                raise ConfigurationError("weight radii must lie in [0, 1)")
            if any(b <= a for a, b in zip(rs, rs[1:])):
                raise ConfigurationError("weight radii must be strictly increasing")
            if any(v <= 0 for v in vs):
                raise ConfigurationError("weight values must be > 0")
            slack = 1e-12 * max(vs)
            if any(b > a + slack for a, b in zip(vs, vs[1:])):
                raise ConfigurationError("weight values must be non-increasing")
            if vs[-1] > 0.05 * vs[0]:
                raise ConfigurationError(
                    "tabulated weight does not vanish toward the boundary "
                    "on its grid; use constant_one for non-vanishing weights")
            object.__setattr__(self, "table", tuple(zip(rs, vs)))

    @classmethod
    def standard(cls, gamma):
        return cls(STANDARD, gamma=gamma)

    @classmethod
    def constant_one(cls):
        return cls(CONSTANT)

    @classmethod
    def tabulated(cls, table):
        return cls(TABULATED, table=tuple(tuple(p) for p in table))

    @property
    def is_essential(self):
        """Whether the sup-criteria are two-sided for this weight.

        Standard weights are; for tabulated weights the package cannot
        verify essentiality, so criteria computed against them are reported
        as sufficient-only.
        """
        return self.kind in (STANDARD, CONSTANT)

    def __call__(self, r):
        return self.value(r)

    def value(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0) or np.any(r >= 1):
            raise DomainError("weight argument must lie in [0, 1)")
        return self.value_from_gap(1.0 - r)

    def value_from_gap(self, gap):
        """Weight at r = 1 - gap, evaluated from the exact gap."""
        gap = np.asarray(gap, dtype=float)
        if self.kind == STANDARD:
            out = gap ** self.gamma
        elif self.kind == CONSTANT:
            out = np.ones_like(gap)
        else:
            rs = np.array([p[0] for p in self.table])
            vs = np.array([p[1] for p in self.table])
            r = 1.0 - gap
            out = np.interp(r, rs, vs, left=vs[0], right=vs[-1])
            # linear continuation of the last segment beyond the table,
            # floored to keep the weight positive
            beyond = r > rs[-1]
            if np.any(beyond):
                slope = (vs[-1] - vs[-2]) / (rs[-1] - rs[-2])
                out = np.where(
                    beyond, np.maximum(vs[-1] + slope * (r - rs[-1]), 1e-300),
                    out)
        return out if out.ndim else float(out)

    def reciprocal_kernel(self):
        """fn(t, gap) = 1 / v(t), written gap-aware for the integrability test."""
        if self.kind == STANDARD:
            g = self.gamma
            return lambda t, gap: gap ** (-g)
        if self.kind == CONSTANT:
            return lambda t, gap: np.ones_like(t)
        return lambda t, gap: 1.0 / self.value_from_gap(gap)


@dataclass(frozen=True)
class RadialGrid:
    """Evaluation grid: radii r_j = 1 - 2^-j for j = 0..levels, K angles."""

    levels: int = MAX_LEVEL
    angles: int = 64

    def __post_init__(self):
        check_index(self.levels, "levels", minimum=0)
        check_index(self.angles, "angles", minimum=1)
        if self.levels > MAX_LEVEL:
            raise ConfigurationError(
                f"levels capped at {MAX_LEVEL} (evaluation cutoff r_max = {R_MAX})")

    @property
    def gaps(self):
        return 2.0 ** -np.arange(self.levels + 1)

    @property
    def radii(self):
        return 1.0 - self.gaps

    @property
    def thetas(self):
        return 2.0 * np.pi * np.arange(self.angles) / self.angles


@dataclass(frozen=True)
class TaylorPolynomial:
    """A truncated Taylor expansion sum a_n z^n, kept as its coefficients."""

    coeffs: np.ndarray
    nonneg: bool = field(default=None)

    def __post_init__(self):
        arr = as_coefficients(self.coeffs)
        object.__setattr__(self, "coeffs", arr)
        if self.nonneg is None:
            flag = (not np.iscomplexobj(arr)) and bool(np.all(arr >= 0))
            object.__setattr__(self, "nonneg", flag)

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        """Horner evaluation; exact polynomial value of the truncation."""
        z = np.asarray(z)
        if np.any(np.abs(z) > R_MAX * (1 + 1e-15)):
            raise DomainError(f"evaluation restricted to |z| <= {R_MAX}")
        acc = np.zeros_like(z, dtype=self.coeffs.dtype if z.ndim else None)
        acc = np.full(z.shape, 0.0, dtype=np.result_type(self.coeffs, z))
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc if acc.ndim else acc[()]

    def lp_norm(self, p):
        """Sequence norm of the coefficient vector, p in [1, inf]."""
        a = np.abs(self.coeffs)
        if p == math.inf:
            return float(a.max())
        p = check_real(p, "p")
        if p < 1:
            raise DomainError(f"p must be >= 1, got {p}")
        return float(np.sum(a ** p) ** (1.0 / p))


def lp_norm(f, p):
    return TaylorPolynomial(as_coefficients(f)).lp_norm(p)


def weighted_sup_norm(f, weight, grid=None):
    """Grid maximum of v(r) |f(r e^(i theta))|.

    For coefficient vectors that are real and non-negative only theta = 0 is
    sampled: the maximum modulus on |z| = r is then attained at z = r.
    """
    if not isinstance(f, TaylorPolynomial):
        f = TaylorPolynomial(as_coefficients(f))
    grid = grid or RadialGrid()
    w = weight.value_from_gap(grid.gaps)
    if f.nonneg:
        vals = np.abs(f.eval(grid.radii))
    else:
        z = grid.radii[:, None] * np.exp(1j * grid.thetas)[None, :]
        vals = np.abs(f.eval(z)).max(axis=1)
    return float(np.max(w * vals))


def growth_witness(gamma, truncation):
    """Coefficients of (1-z)^(-gamma), truncated.

    Recurrence a_0 = 1, a_n = a_{n-1} (n - 1 + gamma) / n; the coefficients
    are positive and grow like n^(gamma-1), so the truncations have
    v_gamma-weighted sup-norms bounded uniformly in the truncation length.
    """
    gamma = check_positive(gamma, "gamma")
    n = check_index(truncation, "truncation")
    a = np.empty(n + 1)
    a[0] = 1.0
    for k in range(1, n + 1):
        a[k] = a[k - 1] * (k - 1 + gamma) / k
    return TaylorPolynomial(a, nonneg=True)
