"""Small input-validation helpers used by the public API."""

import numbers

import numpy as np

from .exceptions import ConfigurationError, DomainError


def check_real(x, name):
    if not isinstance(x, numbers.Real) or isinstance(x, bool) or not np.isfinite(x):
        raise ConfigurationError(f"{name} must be a finite real number, got {x!r}")
    return float(x)


def check_positive(x, name):
    x = check_real(x, name)
    if x <= 0:
        raise ConfigurationError(f"{name} must be > 0, got {x}")
    return x


def check_index(n, name, minimum=0):
    if not isinstance(n, numbers.Integral) or isinstance(n, bool):
        raise ConfigurationError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < minimum:
        raise ConfigurationError(f"{name} must be >= {minimum}, got {n}")
    return n


def check_unit_interval(t, name="t"):
    """Validate a point of [0, 1); returns it as a float."""
    t = check_real(t, name)
    if not 0.0 <= t < 1.0:
        raise DomainError(f"{name} must lie in [0, 1), got {t}")
    return t


def as_coefficients(a, name="coefficients"):
    """Coerce a coefficient vector to a 1-d float or complex ndarray."""
    arr = np.asarray(getattr(a, "coeffs", a))
    if arr.ndim != 1 or arr.size == 0:
        raise ConfigurationError(f"{name} must be a non-empty 1-d array")
    if not np.issubdtype(arr.dtype, np.number):
        raise ConfigurationError(f"{name} must be numeric")
    if np.iscomplexobj(arr):
        arr = arr.astype(complex)
    else:
        arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} must be finite")
    return arr


def as_coefficient_matrix(X, name="X"):
    """Coerce a batch of coefficient rows to a 2-d ndarray."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise ConfigurationError(f"{name} must be a 2-d array of coefficient rows")
    if np.iscomplexobj(arr):
        arr = arr.astype(complex)
    else:
        arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{name} must be finite")
    return arr
