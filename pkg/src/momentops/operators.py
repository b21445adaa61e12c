"""Application of the moment-kernel operators to truncated coefficient vectors.

Three operators act on a coefficient vector a through the moment table
(mu_n) of a measure on [0, 1):

* the Hankel-form operator b_n = sum_k mu_{n+k} a_k (direct summation and an
  FFT fast path through the circulant embedding of the equivalent Toeplitz
  matrix),
* its integral companion f -> integral of f(t) / (1 - t z) d mu(t), which
  coincides with the Hankel form on polynomials,
* the Cesaro-form operator c_k = mu_k * (a_0 + ... + a_k).

Abel means of term sequences are evaluated on the geometric radial grid
with Richardson extrapolation toward r = 1.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ._validation import as_coefficients, check_index
from .exceptions import ConfigurationError, NotWellDefinedError
from .measures import Measure
from .spaces import TaylorPolynomial

#: width below which the fast path falls back to direct summation
FFT_MIN_WIDTH = 64


def _moment_values(moments):
    values = np.asarray(getattr(moments, "values", moments), dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ConfigurationError("moment table must be a non-empty 1-d array")
    return values


def hilbert_apply(moments, coeffs):
    """b_n = sum_k mu_{n+k} a_k for n, k < len(coeffs), by direct summation.

    Needs at least 2 * len(coeffs) - 1 moments.  This is the quadratic-cost
    reference path; :func:`hilbert_apply_fast` must reproduce it.
    """
    mu = _moment_values(moments)
    a = as_coefficients(coeffs)
    n = len(a)
    if len(mu) < 2 * n - 1:
        raise ConfigurationError(
            f"need {2 * n - 1} moments for width {n}, got {len(mu)}")
    mu = mu[:2 * n - 1]
    # correlate(mu, conj(a))[n] = sum_k mu[n+k] a[k], direct algorithm
    return np.correlate(mu, np.conj(a), mode="valid")


def hilbert_apply_fast(moments, coeffs):
    """FFT evaluation of :func:`hilbert_apply`, O(N log N).

    The Hankel section with rows reversed is Toeplitz; its matvec is the
    linear convolution of the moment table with the reversed input, embedded
    in a circulant of the next power-of-two size.  Accepts a matrix of
    coefficient rows and transforms every row against the same moments.
    """
    mu = _moment_values(moments)
    a = np.asarray(coeffs)
    single = a.ndim == 1
    rows = np.atleast_2d(a)
    n = rows.shape[1]
    if len(mu) < 2 * n - 1:
        raise ConfigurationError(
            f"need {2 * n - 1} moments for width {n}, got {len(mu)}")
    mu = mu[:2 * n - 1]
    size = 1 << int(math.ceil(math.log2(max(3 * n - 2, 2))))
    rev = rows[:, ::-1]
    if np.iscomplexobj(rows):
        conv = np.fft.ifft(np.fft.fft(mu, size) * np.fft.fft(rev, size, axis=1),
                           axis=1)
    else:
        conv = np.fft.irfft(np.fft.rfft(mu, size) * np.fft.rfft(rev, size, axis=1),
                            size, axis=1)
    out = conv[:, n - 1:2 * n - 1]
    return out[0] if single else out


def cesaro_apply(moments, coeffs):
    """c_k = mu_k * (a_0 + ... + a_k); needs len(coeffs) moments."""
    mu = _moment_values(moments)
    a = as_coefficients(coeffs)
    if len(mu) < len(a):
        raise ConfigurationError(
            f"need {len(a)} moments for width {len(a)}, got {len(mu)}")
    return mu[:len(a)] * np.cumsum(a)


def hankel_section(moments, size):
    """The size x size section M[i, j] = mu_{i+j}.

    The section is symmetric and positive semidefinite: x^T M x is the
    integral of (sum x_i t^i)^2 against the measure.
    """
    mu = _moment_values(moments)
    size = check_index(size, "size", minimum=1)
    if len(mu) < 2 * size - 1:
        raise ConfigurationError(
            f"need {2 * size - 1} moments for a section of size {size}")
    return scipy.linalg.hankel(mu[:size], mu[size - 1:2 * size - 1])


@dataclass(frozen=True)
class HankelSection:
    """Finite section of the moment-kernel matrix with cached spectrum."""

    moments: object
    size: int

    @property
    def matrix(self):
        return hankel_section(self.moments, self.size)

    def eigenvalues(self):
        """Eigenvalues in descending order; equal to the singular values
        because the section is symmetric positive semidefinite."""
        return np.linalg.eigvalsh(self.matrix)[::-1]


# ---------------------------------------------------------------------- #
# integral companion


def integral_apply(measure, f, z, *, rtol=1e-12):
    """Evaluate integral of f(t) / (1 - t z) d mu(t) at |z| < 1.

    ``z`` may be a scalar or an array; one shared node set serves every
    evaluation point, so quadrature errors vary analytically across z (the
    property the Taylor-coefficient recovery of
    :func:`taylor_from_disc_samples` relies on).

    Raises :class:`NotWellDefinedError` when the domination integral of
    |f(t)| times the kernel bound diverges.
    """
    if not isinstance(measure, Measure):
        raise ConfigurationError("integral_apply needs a Measure")
    if not isinstance(f, TaylorPolynomial):
        f = TaylorPolynomial(as_coefficients(f))
    z = np.asarray(z, dtype=complex)
    radius = float(np.max(np.abs(z))) if z.size else 0.0
    if radius >= 1.0:
        raise ConfigurationError("evaluation points must satisfy |z| < 1")
    gap_r = 1.0 - radius
    coeffs = f.coeffs

    def domination(t, gap):
        return np.abs(_polyval(coeffs, t)) / (gap_r + radius * gap)

    check = measure.integrate_kernel(domination, rtol=1e-6)
    if check.diverged:
        raise NotWellDefinedError(
            "domination integral for the integral operator diverges",
            evidence=check)

    if measure.is_atomic:
        ts = np.array([t for t, _ in measure.atoms])
        ws = measure.mass_scale * np.array([m for _, m in measure.atoms])
    else:
        ts, _, ws, _ = measure._nodes
    fv = _polyval(coeffs, ts) * ws
    kernel = 1.0 / (1.0 - ts[:, None] * z.reshape(1, -1))
    out = (fv[:, None] * kernel).sum(axis=0).reshape(z.shape)
    return out if out.ndim else complex(out)


def _polyval(coeffs, t):
    # Horner without the norm-evaluation radius guard: quadrature nodes may
    # lie beyond it, where a truncation is still an ordinary polynomial.
    acc = np.zeros_like(t, dtype=np.result_type(coeffs, t))
    for c in coeffs[::-1]:
        acc = acc * t + c
    return acc


def taylor_from_disc_samples(fn, degree, *, radius=0.75, oversample=4):
    """Recover Taylor coefficients a_0..a_degree by a discrete Cauchy integral.

    Samples ``fn`` at K = oversample * (degree + 1) equispaced points of the
    circle |z| = radius and inverts with one FFT.  Exact for polynomials up
    to aliasing (the first aliased index is degree + K); for analytic
    functions the aliased tail is damped by radius^K.

    The radius trades aliasing against round-off: sample noise of size eps is
    amplified to eps / radius^n on coefficient n, which rules out small radii
    once degree is a few dozen.
    """
    degree = check_index(degree, "degree", minimum=0)
    k = oversample * (degree + 1)
    if not 0 < radius < 1:
        raise ConfigurationError("recovery radius must lie in (0, 1)")
    z = radius * np.exp(2j * np.pi * np.arange(k) / k)
    vals = np.asarray(fn(z), dtype=complex)
    hat = np.fft.fft(vals) / k
    n = np.arange(degree + 1)
    return hat[:degree + 1] * radius ** (-n.astype(float))


# ---------------------------------------------------------------------- #
# Abel summation


@dataclass(frozen=True)
class AbelResult:
    """Abel mean extrapolation record.

    ``values`` holds A(r_j) = sum c_k r_j^k on the grid, ``usable`` marks the
    grid points where the truncated sum has stabilized, and ``extrapolants``
    the Richardson sequence whose agreement decides ``converged``.
    """

    estimate: complex
    converged: bool
    radii: np.ndarray
    values: np.ndarray
    extrapolants: np.ndarray
    usable: np.ndarray


def _looks_absolutely_convergent(absc):
    """Dyadic-block decay test on |c_k|: geometric block decay with a small
    trailing block means the absolute series has converged at truncation."""
    k = len(absc)
    scale = max(float(absc.max(initial=0.0)), 1e-300)
    if k < 8:
        return absc[-1] <= 1e-9 * scale
    n_blocks = int(math.floor(math.log2(k - 1))) if k > 1 else 0
    blocks = [float(absc[2 ** j:min(2 ** (j + 1), k)].sum())
              for j in range(n_blocks)]
    total = float(absc[0]) + sum(blocks)
    if total <= 0:
        return True
    pos = [b for b in blocks[-4:] if b > 0]
    if len(pos) >= 2:
        ratios = [b / a for a, b in zip(pos, pos[1:])]
        ratio = float(np.exp(np.mean(np.log(ratios))))
    else:
        ratio = 0.0
    return ratio < 0.9 and blocks[-1] / total < 0.05


def abel_sum(terms, *, levels=20, r_grid=None, rel_tol=1e-6, stab_tol=1e-6,
             complete=False):
    """Abel mean of a term sequence.

    By default the input is treated as the truncation of an infinite
    series.  If the absolute series has visibly converged by the end of the
    data (geometrically decaying dyadic blocks of |c_k| with a negligible
    last block), the Abel mean equals the plain sum and is returned
    directly.  ``complete=True`` declares instead that the sequence IS the
    whole series (e.g. it came from a polynomial), whose Abel mean is its
    plain sum.

    Otherwise A(r) = sum c_k r^k is evaluated on r_j = 1 - 2^-j
    (j <= levels, or an explicit ``r_grid``), radii are kept while the
    trailing partial sums of c_k r^k still oscillate below ``stab_tol``,
    and the limit is extrapolated linearly in 1 - r by Richardson steps
    S_j = 2 A(r_j) - A(r_{j-1}).  ``converged`` requires the last three
    extrapolants to agree to ``rel_tol`` relative.
    """
    c = np.asarray(terms)
    if c.ndim != 1 or c.size == 0:
        raise ConfigurationError("terms must be a non-empty 1-d sequence")
    if r_grid is None:
        radii = 1.0 - 2.0 ** -np.arange(1, levels + 1)
    else:
        radii = np.asarray(r_grid, dtype=float)
        if np.any(radii <= 0) or np.any(radii >= 1):
            raise ConfigurationError("Abel grid radii must lie in (0, 1)")
        radii = np.sort(radii)

    k = len(c)
    window = min(max(10, k // 20), k)
    absc = np.abs(c)
    scale = max(float(absc.max()), 1e-300)
    absolutely_stable = complete or _looks_absolutely_convergent(absc)

    values = np.empty(len(radii), dtype=complex)
    usable = np.zeros(len(radii), dtype=bool)
    ks = np.arange(k)
    for j, r in enumerate(radii):
        pw = r ** ks
        values[j] = np.dot(c, pw)
        # oscillation of the trailing partial sums of c_k r^k: the truncated
        # A(r) only samples the limit function where this has died out
        suffix = np.cumsum((c[-window:] * pw[-window:])[::-1])
        wobble = float(np.max(np.abs(suffix)))
        usable[j] = wobble <= stab_tol * max(abs(values[j]), scale * 1e-6)

    if absolutely_stable:
        return AbelResult(_maybe_real(c.sum(), c), True, radii, values,
                          np.empty(0, dtype=complex), usable)

    # radii are ascending, stabilization fails from some level on: keep the
    # leading usable run
    m = int(np.argmin(usable)) if not usable.all() else len(usable)
    m = m if (m > 0 or usable[0]) else 0
    run = np.arange(m)
    if run.size < 4:
        est = values[run[-1]] if run.size else values[-1]
        return AbelResult(_maybe_real(est, c), False, radii, values,
                          np.empty(0, dtype=complex), usable)

    a = values[run]
    extr = 2.0 * a[1:] - a[:-1]
    last = extr[-3:]
    spread = np.max(np.abs(last[:, None] - last[None, :]))
    ref = max(np.max(np.abs(last)), scale * 1e-6)
    converged = bool(spread <= rel_tol * ref)
    return AbelResult(_maybe_real(extr[-1], c), converged, radii, values,
                      extr, usable)


def _maybe_real(x, terms):
    return float(np.real(x)) if not np.iscomplexobj(terms) else complex(x)


def hilbert_coeff_via_abel(moments, coeffs, n, *, complete=True,
                           **abel_options):
    """The n-th output coefficient of the Hankel form through Abel means.

    Equals ``hilbert_apply(moments, coeffs)[n]`` whenever the defining series
    converges; in particular always for polynomial inputs, which is the
    default reading of the coefficient vector (``complete=True``).  Pass
    ``complete=False`` to treat the coefficients as the truncation of an
    infinite expansion; the Abel route then also covers conditionally
    convergent cases and flags undetermined ones.
    """
    mu = _moment_values(moments)
    a = as_coefficients(coeffs)
    n = check_index(n, "n")
    if len(mu) < n + len(a):
        raise ConfigurationError(
            f"need {n + len(a)} moments, got {len(mu)}")
    return abel_sum(mu[n:n + len(a)] * a, complete=complete, **abel_options)
