"""Small input-validation helpers used across the public API."""

import numbers

import numpy as np


def check_vector(x, name="x", dim=None):
    """Coerce `x` to a 1-D float array and optionally check its length."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"{name} must have length {dim}, got {arr.shape[0]}")
    return arr


def check_scalar(value, name, *, low=None, high=None, strict_low=False,
                 strict_high=False, integer=False):
    """Validate a numeric scalar against open or closed bounds."""
    if integer:
        if not isinstance(value, numbers.Integral):
            raise ValueError(f"{name} must be an integer, got {value!r}")
        value = int(value)
    else:
        if not isinstance(value, numbers.Real) or isinstance(value, bool):
            raise ValueError(f"{name} must be a real number, got {value!r}")
        value = float(value)
        if not np.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")
    if low is not None:
        if strict_low and not value > low:
            raise ValueError(f"{name} must be > {low}, got {value}")
        if not strict_low and not value >= low:
            raise ValueError(f"{name} must be >= {low}, got {value}")
    if high is not None:
        if strict_high and not value < high:
            raise ValueError(f"{name} must be < {high}, got {value}")
        if not strict_high and not value <= high:
            raise ValueError(f"{name} must be <= {high}, got {value}")
    return value


def check_in(value, name, allowed):
    """Validate membership in a fixed set of options."""
    if value not in allowed:
        raise ValueError(f"{name} must be one of {sorted(allowed)}, got {value!r}")
    return value
