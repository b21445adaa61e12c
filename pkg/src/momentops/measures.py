"""Positive finite Borel measures on [0, 1): moments, tails, graded integrals.

Supported families: finite atomic measures, Lebesgue measure, the beta family
with density s(1-t)^(s-1) dt (whose tail mass is exactly (1-t)^s), the
log-density measure dt / (1 - log(1-t)) with moments comparable to
1/(n log n), and tabulated densities interpolated piecewise-linearly.

Moment tables for density measures are computed with the shared graded-mesh
Gauss-Legendre nodes of :mod:`momentops.quadrature`; atomic measures use
exact power sums.
"""

import math
from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np
from scipy.special import exp1

from . import quadrature
from ._validation import (check_index, check_positive, check_real,
                          check_unit_interval)
from .exceptions import ConfigurationError, DomainError
from .quadrature import GradedIntegral

#: default moment-table truncation
DEFAULT_TRUNCATION = 4096

ATOMIC = "atomic"
LEBESGUE = "lebesgue"
BETA = "beta"
LOG_DENSITY = "log_density"
TABULATED = "tabulated_density"

_KINDS = (ATOMIC, LEBESGUE, BETA, LOG_DENSITY, TABULATED)


@dataclass(frozen=True)
class MomentSequence:
    """Truncated moment table (mu_0, ..., mu_N) with quadrature metadata."""

    values: np.ndarray
    total_mass: float
    quadrature_error_bound: float

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    @property
    def truncation(self):
        return len(self.values) - 1


def moment_invariant_violations(ms, rtol=1e-12):
    """Check the structural invariants of a moment sequence.

    Returns a list of human-readable violation messages (empty when all
    invariants hold): mu_0 equals the total mass, the sequence is
    non-increasing, and it is log-convex (mu_{n+1}^2 <= mu_n mu_{n+2}).
    ``rtol`` absorbs quadrature and power-sum round-off.
    """
    v = ms.values
    out = []
    scale = max(ms.total_mass, 1e-300)
    if abs(v[0] - ms.total_mass) > rtol * scale + ms.quadrature_error_bound:
        out.append(f"mu_0 = {v[0]} != total mass {ms.total_mass}")
    if np.any(v < -rtol * scale):
        out.append("negative moment")
    bad = np.nonzero(v[1:] > v[:-1] * (1 + rtol) + rtol * scale)[0]
    if bad.size:
        n = int(bad[0])
        out.append(f"monotonicity fails at n={n}: {v[n]} < {v[n + 1]}")
    lhs = v[1:-1] ** 2
    rhs = v[:-2] * v[2:]
    bad = np.nonzero(lhs > rhs * (1 + rtol) + (rtol * scale) ** 2)[0]
    if bad.size:
        n = int(bad[0])
        out.append(f"log-convexity fails at n={n}")
    return out


@dataclass(frozen=True)
class Measure:
    """A positive finite Borel measure on [0, 1).

    Build instances through the classmethod constructors
    (:meth:`lebesgue`, :meth:`beta`, :meth:`log_density`, :meth:`atomic`,
    :meth:`tabulated`); the constructor validates the spec invariants.
    """

    kind: str
    atoms: tuple = None
    s: float = None
    density_table: tuple = None
    mass_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigurationError(f"unknown measure kind {self.kind!r}")
        check_positive(self.mass_scale, "mass_scale")
        if self.kind == ATOMIC:
            if not self.atoms:
                raise ConfigurationError("atomic measure needs at least one atom")
            atoms = []
            for pair in self.atoms:
                t, m = pair
                t = check_real(t, "atom position")
                if not 0.0 <= t < 1.0:
                    raise ConfigurationError(
                        f"atom position must lie in [0, 1), got {t}")
                atoms.append((t, check_positive(m, "atom mass")))
            object.__setattr__(self, "atoms", tuple(atoms))
        elif self.kind == BETA:
            if self.s is None:
                raise ConfigurationError("beta measure needs the exponent s")
            check_positive(self.s, "s")
        elif self.kind == TABULATED:
            tab = self.density_table
            if tab is None or len(tab) < 2:
                raise ConfigurationError("tabulated density needs >= 2 samples")
            ts = [check_real(t, "table abscissa") for t, _ in tab]
            if any(not 0.0 <= t < 1.0 for t in ts):
                raise ConfigurationError("table abscissas must lie in [0, 1)")
            vs = [check_real(v, "table value") for _, v in tab]
            if any(v < 0 for v in vs):
                raise ConfigurationError("table values must be >= 0")
            if any(b <= a for a, b in zip(ts, ts[1:])):
                raise ConfigurationError("table abscissas must be strictly increasing")
            object.__setattr__(self, "density_table",
                               tuple(zip(ts, vs)))
            if self._tabulated_mass() <= 0:
                raise ConfigurationError("tabulated density has zero total mass")

    # ------------------------------------------------------------------ #
    # constructors

    @classmethod
    def lebesgue(cls):
        return cls(LEBESGUE)

    @classmethod
    def beta(cls, s):
        """Density s(1-t)^(s-1) dt; its tail mass is exactly (1-t)^s."""
        return cls(BETA, s=s)

    @classmethod
    def log_density(cls):
        """Density dt / (1 - log(1-t)); moments decay like 1/(n log n)."""
        return cls(LOG_DENSITY)

    @classmethod
    def atomic(cls, atoms):
        return cls(ATOMIC, atoms=tuple(tuple(p) for p in atoms))

    @classmethod
    def tabulated(cls, table):
        return cls(TABULATED, density_table=tuple(tuple(p) for p in table))

    @classmethod
    def from_spec(cls, spec):
        """Build a measure from a kind name or a mapping.

        Strings name the parameter-free kinds ("lebesgue", "log_density").
        Mappings carry a "kind" entry plus the fields of that kind; unknown
        keys are rejected.
        """
        if isinstance(spec, Measure):
            return spec
        if isinstance(spec, str):
            if spec == LEBESGUE:
                return cls.lebesgue()
            if spec == LOG_DENSITY:
                return cls.log_density()
            raise ConfigurationError(
                f"measure kind {spec!r} needs parameters; pass a mapping")
        if not isinstance(spec, dict):
            raise ConfigurationError("measure spec must be a name or a mapping")
        fields = dict(spec)
        kind = fields.pop("kind", None)
        allowed = {ATOMIC: {"atoms"}, LEBESGUE: set(), BETA: {"s"},
                   LOG_DENSITY: set(), TABULATED: {"density_table"}}
        if kind not in allowed:
            raise ConfigurationError(f"unknown measure kind {kind!r}")
        scale = fields.pop("mass_scale", 1.0)
        unknown = set(fields) - allowed[kind]
        if unknown:
            raise ConfigurationError(
                f"unknown measure fields for kind {kind!r}: {sorted(unknown)}")
        missing = allowed[kind] - set(fields)
        if missing:
            raise ConfigurationError(
                f"measure kind {kind!r} needs fields: {sorted(missing)}")
        if kind == ATOMIC:
            m = cls.atomic(fields["atoms"])
        elif kind == BETA:
            m = cls.beta(fields["s"])
        elif kind == TABULATED:
            m = cls.tabulated(fields["density_table"])
        else:
            m = cls(kind)
        return m.scaled(scale) if scale != 1.0 else m

    def spec_dict(self):
        """Round-trippable mapping for :meth:`from_spec` (used by reports)."""
        out = {"kind": self.kind}
        if self.kind == ATOMIC:
            out["atoms"] = [list(p) for p in self.atoms]
        elif self.kind == BETA:
            out["s"] = self.s
        elif self.kind == TABULATED:
            out["density_table"] = [list(p) for p in self.density_table]
        if self.mass_scale != 1.0:
            out["mass_scale"] = self.mass_scale
        return out

    def scaled(self, c):
        """The measure c * mu for c > 0."""
        check_positive(c, "scale")
        return replace(self, mass_scale=self.mass_scale * c)

    # ------------------------------------------------------------------ #
    # tails and mass

    def total_mass(self):
        return self.tail_mass_gap(1.0)

    def tail_mass(self, t):
        """mu([t, 1)); non-increasing in t, equals the total mass at t = 0."""
        t = check_unit_interval(t, "t")
        return self.tail_mass_gap(1.0 - t)

    def tail_mass_gap(self, gap):
        """mu([1 - gap, 1)) parametrized by the distance gap to 1.

        The gap form stays meaningful for gaps below double-precision
        resolution of 1 - gap, which the boundary criteria need.
        """
        if not 0.0 < gap <= 1.0:
            raise DomainError(f"gap must lie in (0, 1], got {gap}")
        c = self.mass_scale
        if self.kind == LEBESGUE:
            return c * gap
        if self.kind == BETA:
            return c * gap ** self.s
        if self.kind == LOG_DENSITY:
            # integral of e^-u / (1+u) du over u >= log(1/gap)
            return c * math.e * float(exp1(1.0 + math.log(1.0 / gap)))
        if self.kind == ATOMIC:
            t0 = 1.0 - gap
            return c * sum(m for t, m in self.atoms if t >= t0)
        return c * self._tabulated_mass(1.0 - gap)

    def _tabulated_mass(self, t0=0.0):
        """Exact integral of the piecewise-linear density over [t0, 1)."""
        total = 0.0
        pts = self.density_table
        for (ta, va), (tb, vb) in zip(pts, pts[1:]):
            if tb <= t0:
                continue
            lo = max(ta, t0)
            if lo > ta:
                frac = (lo - ta) / (tb - ta)
                vlo = va + frac * (vb - va)
            else:
                vlo = va
            total += 0.5 * (vlo + vb) * (tb - lo)
        return total

    # ------------------------------------------------------------------ #
    # quadrature plumbing

    @property
    def is_atomic(self):
        return self.kind == ATOMIC

    def _density_u(self, u):
        """rho(1 - e^-u) * e^-u for the density kinds, vectorized over u."""
        c = self.mass_scale
        if self.kind == LEBESGUE:
            return c * np.exp(-u)
        if self.kind == BETA:
            return c * self.s * np.exp(-self.s * u)
        if self.kind == LOG_DENSITY:
            return c * np.exp(-u) / (1.0 + u)
        if self.kind == TABULATED:
            t = -np.expm1(-u)
            return c * self._tabulated_density(t) * np.exp(-u)
        raise ConfigurationError("atomic measures have no density")

    def _tabulated_density(self, t):
        ts = np.array([p[0] for p in self.density_table])
        vs = np.array([p[1] for p in self.density_table])
        return np.clip(np.interp(t, ts, vs, left=0.0, right=0.0), 0.0, None)

    @cached_property
    def _breakpoints_u(self):
        """Kinks of the density in the u variable (tabulated kind only)."""
        if self.kind != TABULATED:
            return None
        return tuple(-math.log1p(-t) for t, _ in self.density_table if t > 0)

    @cached_property
    def _nodes(self):
        """Shared quadrature nodes (t, gap, weights, tail_bound)."""
        t, gap, w, tail, _ = quadrature.graded_nodes(
            self._density_u, breakpoints_u=self._breakpoints_u)
        return t, gap, w, tail

    # ------------------------------------------------------------------ #
    # moments

    def moment(self, n):
        """The n-th power moment, integral of t^n."""
        n = check_index(n, "n")
        if self.is_atomic:
            return self.mass_scale * sum(m * t ** n for t, m in self.atoms)
        t, _, w, _ = self._nodes
        return float(np.sum(w * t ** n))

    def moments(self, truncation=DEFAULT_TRUNCATION):
        """Moment table mu_0..mu_N sharing one quadrature node set across n."""
        n_max = check_index(truncation, "truncation")
        total = self.total_mass()
        eps = np.finfo(float).eps
        if self.is_atomic:
            ts = np.array([t for t, _ in self.atoms])
            ws = self.mass_scale * np.array([m for _, m in self.atoms])
            err = 8 * eps * total
        else:
            ts, _, ws, tail = self._nodes
            err = tail + 16 * eps * total
        values = np.empty(n_max + 1)
        pw = ws.copy()
        values[0] = pw.sum()
        for n in range(1, n_max + 1):
            pw *= ts
            values[n] = pw.sum()
        return MomentSequence(values, total, err)

    # ------------------------------------------------------------------ #
    # integrals against unbounded integrands

    def integrate(self, g, *, singularity="endpoint", rtol=1e-12,
                  growth_factor=quadrature.GROWTH_FACTOR, max_levels=None):
        """Integrate g >= 0 against the measure, detecting divergence.

        ``g`` receives node positions t in [0, 1) and may be unbounded as
        t -> 1.  Returns a :class:`GradedIntegral`; a divergent integral is
        reported through ``diverged=True`` with the graded partial-integral
        sequence as evidence rather than through an exception.

        Because g sees t as a double, gaps 1 - t below about 2^-50 are not
        resolvable on this surface; grading is capped there and any
        unresolved tail is folded into the error bound.  Endpoint-singular
        kernels needing deeper grading should use :meth:`integrate_kernel`,
        which receives the gap exactly.
        """
        if max_levels is None:
            max_levels = 50
        return self.integrate_kernel(lambda t, gap: g(t),
                                     singularity=singularity, rtol=rtol,
                                     growth_factor=growth_factor,
                                     max_levels=max_levels)

    def integrate_kernel(self, fn, *, singularity="endpoint", rtol=1e-12,
                         growth_factor=quadrature.GROWTH_FACTOR,
                         max_levels=None, assume_convergent=False):
        """Gap-aware variant of :meth:`integrate`.

        ``fn(t, gap)`` is given gap = 1 - t exactly, so kernels singular at
        the endpoint can be evaluated without cancellation.
        """
        if singularity not in ("endpoint", "none"):
            raise ConfigurationError(f"unknown singularity hint {singularity!r}")
        if max_levels is None:
            max_levels = quadrature.MAX_LEVELS if singularity == "endpoint" else 64
        if self.is_atomic:
            return self._integrate_atomic(fn)
        return quadrature.graded_integrate(
            self._density_u, fn, rtol=rtol, growth_factor=growth_factor,
            max_levels=max_levels, assume_convergent=assume_convergent,
            breakpoints_u=self._breakpoints_u)

    def _integrate_atomic(self, fn):
        total = 0.0
        for t, m in self.atoms:
            v = fn(np.asarray([t]), np.asarray([1.0 - t]))
            v = complex(np.asarray(v).ravel()[0])
            if not np.isfinite(v):
                raise DomainError(f"integrand undefined at atom t={t}")
            total += self.mass_scale * m * v.real
        eps = 8 * np.finfo(float).eps * (abs(total) + 1.0)
        return GradedIntegral(total, eps, False,
                              np.asarray([total]), 1)
