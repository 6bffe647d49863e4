"""Euclidean projections onto the feasible sets used by the solvers.

All projectors map a point ``z`` to the closest point (in the Euclidean
norm) of a closed convex set. They are idempotent and 1-Lipschitz, and
the solvers rely on both properties for every step they take.
"""

import numpy as np

from ._validation import check_scalar, check_vector


def project_box(z, low, high):
    """Project onto the box ``[low, high]^n``.

    Parameters
    ----------
    z : array_like
        Point to project.
    low, high : float
        Scalar bounds applied coordinatewise. Must satisfy ``low <= high``.

    Returns
    -------
    numpy.ndarray
        Coordinatewise clamp of ``z``.
    """
    z = check_vector(z, "z")
    low = check_scalar(low, "low")
    high = check_scalar(high, "high")
    if low > high:
        raise ValueError(f"invalid box bounds: low={low} exceeds high={high}")
    return np.clip(z, low, high)


def project_ball(z, radius, center=None):
    """Project onto the closed Euclidean ball of given radius.

    Points inside the ball (boundary included) are returned unchanged;
    outside points are pulled radially onto the sphere.
    """
    z = check_vector(z, "z")
    radius = check_scalar(radius, "radius", low=0.0, strict_low=True)
    if center is None:
        offset = z
    else:
        center = check_vector(center, "center", dim=z.shape[0])
        offset = z - center
    dist = np.linalg.norm(offset)
    if dist <= radius:
        return z.copy()
    scaled = offset * (radius / dist)
    return scaled if center is None else center + scaled


def project_simplex(z):
    """Project onto the probability simplex ``{x >= 0, sum(x) = 1}``.

    Uses the sort-and-threshold rule: with ``u`` the coordinates of ``z``
    sorted in decreasing order, the projection is ``max(z - t, 0)`` where
    ``t`` is the largest partial-average shift keeping the leading block
    positive. Runs in O(n log n).
    """
    z = check_vector(z, "z")
    n = z.shape[0]
    if n == 0:
        raise ValueError("cannot project an empty vector onto the simplex")
    u = np.sort(z, kind="stable")[::-1]
    cumulative = np.cumsum(u)
    counts = np.arange(1, n + 1)
    shifts = (cumulative - 1.0) / counts
    # last index where the sorted coordinate still clears its shift
    support = np.nonzero(u > shifts)[0][-1]
    return np.maximum(z - shifts[support], 0.0)


def project_nonneg(z):
    """Project onto the nonnegative orthant."""
    z = check_vector(z, "z")
    return np.maximum(z, 0.0)


def project_identity(z):
    """Projection onto all of R^n (no-op); for unconstrained blocks."""
    return check_vector(z, "z").copy()


def _normalize_blocks(blocks, dim):
    """Validate that the block ranges partition ``range(dim)`` in order."""
    spans = []
    for entry in blocks:
        try:
            span, fn = entry
        except (TypeError, ValueError) as exc:
            raise ValueError(f"each block must be ((start, stop), projector), got {entry!r}") from exc
        if isinstance(span, slice):
            if span.step not in (None, 1):
                raise ValueError("block slices must have unit step")
            start, stop = span.start or 0, span.stop
        else:
            start, stop = span
        if stop is None:
            raise ValueError("block ranges must have an explicit stop")
        start, stop = int(start), int(stop)
        if not callable(fn):
            raise ValueError(f"block projector for [{start}, {stop}) is not callable")
        if stop <= start:
            raise ValueError(f"empty block range [{start}, {stop})")
        spans.append((start, stop, fn))
    spans.sort(key=lambda item: item[0])
    cursor = 0
    for start, stop, _ in spans:
        if start != cursor:
            kind = "overlap" if start < cursor else "gap"
            raise ValueError(
                f"block layout {kind} at index {min(start, cursor)}: "
                f"ranges must partition [0, {dim})"
            )
        cursor = stop
    if cursor != dim:
        raise ValueError(f"block layout covers [0, {cursor}) but the vector has length {dim}")
    return spans


def project_product(z, blocks):
    """Project onto a product of sets, one factor per index block.

    Parameters
    ----------
    z : array_like
        Point to project.
    blocks : list of ((start, stop), projector)
        Contiguous index ranges that partition ``range(len(z))`` together
        with the projector applied to each segment. Ranges may be given
        as ``(start, stop)`` pairs or slices.

    Returns
    -------
    numpy.ndarray
        Blockwise projection. The product of the factor sets is itself
        closed and convex, so the blockwise result is the exact projection.
    """
    z = check_vector(z, "z")
    spans = _normalize_blocks(blocks, z.shape[0])
    out = np.empty_like(z)
    for start, stop, fn in spans:
        out[start:stop] = fn(z[start:stop])
    return out


def make_box_projector(low, high):
    """Return ``z -> project_box(z, low, high)`` with bounds validated once."""
    low = check_scalar(low, "low")
    high = check_scalar(high, "high")
    if low > high:
        raise ValueError(f"invalid box bounds: low={low} exceeds high={high}")

    def projector(z):
        return np.clip(np.asarray(z, dtype=float), low, high)

    return projector


def make_product_projector(blocks, dim):
    """Return a reusable blockwise projector after validating the layout."""
    spans = _normalize_blocks(blocks, dim)

    def projector(z):
        z = np.asarray(z, dtype=float)
        if z.shape != (dim,):
            raise ValueError(f"expected a vector of length {dim}, got shape {z.shape}")
        out = np.empty_like(z)
        for start, stop, fn in spans:
            out[start:stop] = fn(z[start:stop])
        return out

    return projector
