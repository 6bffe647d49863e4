"""Benchmark problem generators.

Three stochastic families (random convex QCQPs, a two-stage quadratic
recourse model, CVaR-constrained portfolio selection) plus a linearly
constrained QP with analytically known primal-dual solution, used for
rate verification. All generators are deterministic functions of their
seed: equal seeds give bit-identical instances.
"""

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._validation import check_scalar
from .exceptions import DataError
from .problem import StochasticProblem
from .projections import (
    make_box_projector,
    make_product_projector,
    project_ball,
    project_identity,
    project_nonneg,
    project_simplex,
)
from .rng import RngStream

# ----------------------------------------------------------------------
# random convex QCQP


@dataclass
class QcqpInstance:
    """Raw data of a generated QCQP (see `gen_qcqp`)."""

    quad_mats: np.ndarray      # (m, n, n) PSD, unit spectral norm
    lin_vecs: np.ndarray       # (m, n) unit norm
    offsets: np.ndarray        # (m,) in [0.1, 1.1]
    obj_mats: Optional[np.ndarray]   # (N, p, n) for finite-sum mode
    obj_vecs: Optional[np.ndarray]   # (N, p)
    box_half: float


class _QcqpDraws:
    """Batch of sampled (matrix, vector) objective data for expectation mode."""

    def __init__(self, mats, vecs):
        self.mats = mats
        self.vecs = vecs

    def __len__(self):
        return self.mats.shape[0]

    def __iter__(self):
        return iter(zip(self.mats, self.vecs))


def _normalized_ls_samples(gen, size, p, n):
    """Draw (H, c) pairs with unit spectral norm / unit Euclidean norm."""
    mats = gen.standard_normal((size, p, n))
    specs = np.linalg.svd(mats, compute_uv=False)[:, 0]
    mats /= specs[:, None, None]
    vecs = gen.standard_normal((size, p))
    vecs /= np.linalg.norm(vecs, axis=1)[:, None]
    return mats, vecs


def gen_qcqp(n, obs_dim, num_constraints, mode="finite_sum", nsamples=1000,
             seed=0, box_half=10.0):
    """Random least-squares objective with convex quadratic constraints.

    The objective is ``E 0.5*|H x - v|^2`` over random matrices ``H``
    (p x n, unit spectral norm) and vectors ``v`` (unit norm), either as a
    sampling distribution (``mode="expectation"``) or an ``nsamples``-term
    average (``mode="finite_sum"``). Constraint ``j`` is
    ``0.5 x'Q_j x + a_j'x - b_j <= 0`` with ``Q_j`` PSD of unit spectral
    norm, ``a_j`` unit norm, and ``b_j`` uniform on [0.1, 1.1], so the
    origin is strictly feasible. The feasible set is the box
    ``[-box_half, box_half]^n`` intersected with the constraints.
    """
    n = check_scalar(n, "n", low=1, integer=True)
    obs_dim = check_scalar(obs_dim, "obs_dim", low=1, integer=True)
    num_constraints = check_scalar(num_constraints, "num_constraints", low=1, integer=True)
    if mode not in ("expectation", "finite_sum"):
        raise ValueError(f"mode must be 'expectation' or 'finite_sum', got {mode!r}")
    gen = RngStream(seed, stream=0).generator()

    quad = np.empty((num_constraints, n, n))
    lin = np.empty((num_constraints, n))
    for j in range(num_constraints):
        g = gen.standard_normal((n, n))
        s = g.T @ g
        s /= np.linalg.eigvalsh(s)[-1]
        quad[j] = 0.5 * (s + s.T)
        a = gen.standard_normal(n)
        lin[j] = a / np.linalg.norm(a)
    offs = gen.uniform(0.1, 1.1, size=num_constraints)

    def h_all(x):
        return 0.5 * np.einsum("kij,i,j->k", quad, x, x) + lin @ x - offs

    def constraint_batch(x, indices):
        qx = quad[indices] @ x
        vals = 0.5 * (qx @ x) + lin[indices] @ x - offs[indices]
        return vals, qx + lin[indices]

    def constraint(j):
        def fn(x):
            qx = quad[j] @ x
            return 0.5 * float(x @ qx) + float(lin[j] @ x) - offs[j], qx + lin[j]
        return fn

    def f0(x):
        return 0.0, np.zeros(n)

    def obj_sampler(x, draw):
        if isinstance(draw, (int, np.integer)):
            mat, vec = obj_mats[draw], obj_vecs[draw]
        else:
            mat, vec = draw
        r = mat @ x - vec
        return 0.5 * float(r @ r), mat.T @ r

    def obj_batch(x, draws):
        if isinstance(draws, _QcqpDraws):
            mats, vecs = draws.mats, draws.vecs
        else:
            mats, vecs = obj_mats[draws], obj_vecs[draws]
        res = mats @ x - vecs
        vals = 0.5 * np.einsum("bp,bp->b", res, res)
        grads = np.einsum("bpn,bp->bn", mats, res)
        return vals.mean(), grads.mean(axis=0)

    meta = {"diameter": 2.0 * box_half * np.sqrt(n)}
    objective_full = None
    xi_sampler = None
    finite_sum_size = None
    obj_mats = obj_vecs = None
    if mode == "finite_sum":
        nsamples = check_scalar(nsamples, "nsamples", low=1, integer=True)
        obj_mats, obj_vecs = _normalized_ls_samples(gen, nsamples, obs_dim, n)
        # exact finite-sum objective collapses to a quadratic form
        hbar = np.einsum("bpi,bpj->ij", obj_mats, obj_mats) / nsamples
        gbar = np.einsum("bpi,bp->i", obj_mats, obj_vecs) / nsamples
        const = 0.5 * float(np.einsum("bp,bp->", obj_vecs, obj_vecs)) / nsamples
        finite_sum_size = nsamples

        def objective_full(x):
            return 0.5 * float(x @ (hbar @ x)) - float(gbar @ x) + const, hbar @ x - gbar

        eigs = np.linalg.eigvalsh(0.5 * (hbar + hbar.T))
        meta["mu"] = float(eigs[0])
        meta["l_f"] = float(eigs[-1])
    else:
        def xi_sampler(rgen, size):
            mats, vecs = _normalized_ls_samples(rgen, size, obs_dim, n)
            return _QcqpDraws(mats, vecs)

    meta["instance"] = QcqpInstance(quad, lin, offs, obj_mats, obj_vecs, box_half)
    # each h_j has unit-norm linear part and unit-spectral-norm curvature
    meta["l_h"] = float(box_half * np.sqrt(n) + 1.0)
    return StochasticProblem(
        dim=n,
        f0=f0,
        constraints=[constraint(j) for j in range(num_constraints)],
        projector=make_box_projector(-box_half, box_half),
        obj_sampler=obj_sampler,
        xi_sampler=xi_sampler,
        finite_sum_size=finite_sum_size,
        feasible_witness=np.zeros(n),
        h_all=h_all,
        constraint_batch=constraint_batch,
        obj_batch=obj_batch,
        objective_full=objective_full,
        meta=meta,
    )


# ----------------------------------------------------------------------
# two-stage quadratic recourse


@dataclass
class TwoStageInstance:
    """Raw data of a generated two-stage problem (see `gen_two_stage`)."""

    cost: np.ndarray          # (n,) first-stage cost
    scen: np.ndarray          # (N, 2n) scenario vectors
    reg: float                # curvature added to every scenario Hessian
    radius: float             # recourse-distance budget
    anchor_x: np.ndarray      # (n,)
    anchor_y: np.ndarray      # (n,)


def gen_two_stage(n, nscen, reg=2.0, radius=5.0, seed=0):
    """Two-stage quadratic model with per-scenario recourse constraints.

    Decision variables are a first-stage vector ``x1`` and one recourse
    vector per scenario, stacked as ``z = (x1, y_1, ..., y_N)`` of
    dimension ``n*(N+1)``. Scenario ``i`` contributes the convex quadratic
    ``0.5*(x1,y_i)'(s_i s_i' + reg*I)(x1,y_i) + s_i'(x1,y_i)`` to the
    averaged objective (on top of the linear first-stage cost) and the
    constraint ``0.5*|y_i - y0|^2 + 0.5*|x1 - x0|^2 <= radius^2/2``.
    ``x1`` is further restricted to the unit ball around ``x0``. Scenario
    vectors are Gaussian with component means drawn from [5, 25] and
    standard deviations from [5, 15], fixed per instance.
    """
    n = check_scalar(n, "n", low=1, integer=True)
    nscen = check_scalar(nscen, "nscen", low=1, integer=True)
    reg = check_scalar(reg, "reg", low=0.0, strict_low=True)
    radius = check_scalar(radius, "radius", low=0.0, strict_low=True)
    gen = RngStream(seed, stream=0).generator()

    cost = gen.uniform(1.0, 3.0, size=n)
    means = gen.uniform(5.0, 25.0, size=2 * n)
    stds = gen.uniform(5.0, 15.0, size=2 * n)
    scen = means + stds * gen.standard_normal((nscen, 2 * n))

    anchor_x = np.full(n, 10.0)
    anchor_y = np.full(n, 10.0)
    dim = n * (nscen + 1)

    def split(z):
        return z[:n], z[n:].reshape(nscen, n)

    def f0(z):
        grad = np.zeros(dim)
        grad[:n] = cost
        return float(cost @ z[:n]), grad

    def obj_sampler(z, i):
        x1 = z[:n]
        yi = z[n + n * i: n + n * (i + 1)]
        pair = np.concatenate([x1, yi])
        u = float(scen[i] @ pair)
        val = 0.5 * u * u + 0.5 * reg * float(pair @ pair) + u
        gpair = scen[i] * (u + 1.0) + reg * pair
        grad = np.zeros(dim)
        grad[:n] = gpair[:n]
        grad[n + n * i: n + n * (i + 1)] = gpair[n:]
        return val, grad

    def obj_batch(z, draws):
        draws = np.asarray(draws, dtype=int)
        x1, recourse = split(z)
        rows = scen[draws]
        u = rows[:, :n] @ x1 + np.einsum("bj,bj->b", rows[:, n:], recourse[draws])
        sq = np.einsum("bj,bj->b", recourse[draws], recourse[draws])
        vals = 0.5 * u * u + 0.5 * reg * (float(x1 @ x1) + sq) + u
        grad = np.zeros(dim)
        coeff = (u + 1.0) / draws.size
        grad[:n] = coeff @ rows[:, :n] + reg * x1
        contrib = coeff[:, None] * rows[:, n:] + (reg / draws.size) * recourse[draws]
        np.add.at(grad.reshape(nscen + 1, n), draws + 1, contrib)
        return vals.mean(), grad

    def objective_full(z):
        x1, recourse = split(z)
        u = scen[:, :n] @ x1 + np.einsum("bj,bj->b", scen[:, n:], recourse)
        sq = np.einsum("bj,bj->b", recourse, recourse)
        val = float(cost @ x1) + np.mean(0.5 * u * u + 0.5 * reg * (float(x1 @ x1) + sq) + u)
        coeff = (u + 1.0) / nscen
        grad = np.zeros(dim)
        grad[:n] = cost + coeff @ scen[:, :n] + reg * x1
        grad.reshape(nscen + 1, n)[1:] = coeff[:, None] * scen[:, n:] + (reg / nscen) * recourse
        return float(val), grad

    def h_all(z):
        x1, recourse = split(z)
        base = 0.5 * float(np.sum((x1 - anchor_x) ** 2)) - 0.5 * radius**2
        return 0.5 * np.sum((recourse - anchor_y) ** 2, axis=1) + base

    def constraint_batch(z, indices):
        x1, recourse = split(z)
        diff_x = x1 - anchor_x
        base = 0.5 * float(diff_x @ diff_x) - 0.5 * radius**2
        diff_y = recourse[indices] - anchor_y
        vals = 0.5 * np.einsum("bj,bj->b", diff_y, diff_y) + base
        grads = np.zeros((indices.size, dim))
        grads[:, :n] = diff_x
        for row, i in enumerate(indices):
            grads[row, n + n * i: n + n * (i + 1)] = diff_y[row]
        return vals, grads

    def constraint(i):
        def fn(z):
            x1 = z[:n]
            yi = z[n + n * i: n + n * (i + 1)]
            val = (0.5 * float(np.sum((yi - anchor_y) ** 2))
                   + 0.5 * float(np.sum((x1 - anchor_x) ** 2)) - 0.5 * radius**2)
            grad = np.zeros(dim)
            grad[:n] = x1 - anchor_x
            grad[n + n * i: n + n * (i + 1)] = yi - anchor_y
            return val, grad
        return fn

    def ball_block(v):
        return project_ball(v, 1.0, center=anchor_x)

    projector = make_product_projector(
        [((0, n), ball_block), ((n, dim), project_identity)], dim
    )
    witness = np.concatenate([anchor_x, np.tile(anchor_y, nscen)])
    meta = {
        "mu": reg / nscen,
        "instance": TwoStageInstance(cost, scen, reg, radius, anchor_x, anchor_y),
    }
    return StochasticProblem(
        dim=dim,
        f0=f0,
        constraints=[constraint(i) for i in range(nscen)],
        projector=projector,
        obj_sampler=obj_sampler,
        finite_sum_size=nscen,
        feasible_witness=witness,
        h_all=h_all,
        constraint_batch=constraint_batch,
        obj_batch=obj_batch,
        objective_full=objective_full,
        meta=meta,
    )


# ----------------------------------------------------------------------
# CVaR-constrained portfolio selection


@dataclass
class PortfolioInstance:
    """Raw data of a generated portfolio problem (see `gen_cvar`)."""

    returns: np.ndarray       # (N, n) per-period asset returns
    means: np.ndarray         # (n,) column means
    min_return: float
    tail_level: float
    reg: float


def gen_returns(periods, assets, seed=0):
    """Synthetic return matrix: Gaussian columns with distinct means."""
    periods = check_scalar(periods, "periods", low=1, integer=True)
    assets = check_scalar(assets, "assets", low=1, integer=True)
    gen = RngStream(seed, stream=0).generator()
    means = gen.uniform(0.8, 1.2, size=assets)
    return means + 0.3 * gen.standard_normal((periods, assets))


def load_returns_csv(path):
    """Load a returns matrix from a CSV file.

    One row per period, one column per asset. A non-numeric first row is
    treated as a header. Ragged rows and non-numeric cells are rejected
    with the offending position named.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        raw = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not raw:
        raise DataError(f"returns file {path} is empty")
    start = 0
    try:
        [float(cell) for cell in raw[0]]
    except ValueError:
        start = 1
    if start == 1 and len(raw) == 1:
        raise DataError(f"returns file {path} has a header but no data rows")
    width = len(raw[start])
    for ridx in range(start, len(raw)):
        row = raw[ridx]
        if len(row) != width:
            raise DataError(
                f"ragged returns file {path}: row {ridx + 1} has {len(row)} "
                f"cells, expected {width}"
            )
        parsed = []
        for cidx, cell in enumerate(row):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise DataError(
                    f"non-numeric cell in {path} at row {ridx + 1}, "
                    f"column {cidx + 1}: {cell!r}"
                ) from None
        rows.append(parsed)
    return np.asarray(rows, dtype=float)


def gen_cvar(returns, tail_level=0.95, min_return=None, reg=0.0):
    """Minimize portfolio CVaR subject to a minimum mean return.

    Variables are ``z = (t, x, y)`` with threshold ``t``, portfolio
    weights ``x`` on the simplex, and per-period excess losses ``y >= 0``.
    The objective ``t + sum(y) / ((1 - tail_level) * N)`` equals the
    conditional value-at-risk of the loss ``-x'r`` at the given tail level
    once the ``N`` constraints ``-r_i'x - t - y_i <= 0`` hold; constraint
    ``N+1`` enforces the mean return floor ``min_return`` (default: the
    average of all column means). ``reg > 0`` adds ``reg/2 * |z|^2`` to
    the objective, making it strongly convex.
    """
    returns = np.asarray(returns, dtype=float)
    if returns.ndim != 2 or returns.size == 0:
        raise DataError(f"returns must be a non-empty 2-D matrix, got shape {returns.shape}")
    tail_level = check_scalar(tail_level, "tail_level", low=0.0, high=1.0,
                              strict_low=True, strict_high=True)
    reg = check_scalar(reg, "reg", low=0.0)
    nper, nassets = returns.shape
    means = returns.mean(axis=0)
    if min_return is None:
        min_return = float(means.mean())
    else:
        min_return = check_scalar(min_return, "min_return")
    if means.max() < min_return:
        raise DataError(
            f"no feasible portfolio: best mean return {means.max():.6g} "
            f"is below the floor {min_return:.6g}"
        )
    dim = 1 + nassets + nper
    tail_weight = 1.0 / ((1.0 - tail_level) * nper)

    def f0(z):
        val = z[0] + tail_weight * float(np.sum(z[1 + nassets:]))
        grad = np.zeros(dim)
        grad[0] = 1.0
        grad[1 + nassets:] = tail_weight
        if reg > 0.0:
            val += 0.5 * reg * float(z @ z)
            grad += reg * z
        return val, grad

    def h_all(z):
        t, x, y = z[0], z[1:1 + nassets], z[1 + nassets:]
        return np.concatenate([-(returns @ x) - t - y, [min_return - float(means @ x)]])

    def constraint_batch(z, indices):
        t, x, y = z[0], z[1:1 + nassets], z[1 + nassets:]
        vals = np.empty(indices.size)
        grads = np.zeros((indices.size, dim))
        for row, j in enumerate(indices):
            if j < nper:
                vals[row] = -float(returns[j] @ x) - t - y[j]
                grads[row, 0] = -1.0
                grads[row, 1:1 + nassets] = -returns[j]
                grads[row, 1 + nassets + j] = -1.0
            else:
                vals[row] = min_return - float(means @ x)
                grads[row, 1:1 + nassets] = -means
        return vals, grads

    def constraint(j):
        def fn(z):
            vals, grads = constraint_batch(z, np.array([j]))
            return float(vals[0]), grads[0]
        return fn

    projector = make_product_projector(
        [((0, 1), project_identity),
         ((1, 1 + nassets), project_simplex),
         ((1 + nassets, dim), project_nonneg)],
        dim,
    )
    best = int(np.argmax(means))
    wx = np.zeros(nassets)
    wx[best] = 1.0
    wt = float(np.max(-(returns @ wx))) + 1.0
    witness = np.concatenate([[wt], wx, np.zeros(nper)])
    meta = {
        "mu": reg,
        "instance": PortfolioInstance(returns, means, min_return, tail_level, reg),
    }
    return StochasticProblem(
        dim=dim,
        f0=f0,
        constraints=[constraint(j) for j in range(nper + 1)],
        projector=projector,
        feasible_witness=witness,
        h_all=h_all,
        constraint_batch=constraint_batch,
        meta=meta,
    )


# ----------------------------------------------------------------------
# linearly constrained QP with analytic solution


@dataclass
class LinearQpInstance:
    """Raw data of a generated rate-check QP (see `gen_linear_qp`)."""

    quad: np.ndarray          # (n, n) SPD objective Hessian
    lin: np.ndarray           # (n,) objective linear term
    con_mat: np.ndarray       # (m, n) constraint rows, orthonormal
    con_rhs: np.ndarray       # (m,)
    noise_vecs: np.ndarray    # (N, n) zero-mean objective gradient noise
    x_star: np.ndarray
    y_star: np.ndarray


def gen_linear_qp(n, num_constraints, seed=0, eig_range=(1.0, 2.0),
                  obj_noise=0.1, nsamples=64, box_half=50.0):
    """Strongly convex QP with linear constraints, all active at the optimum.

    Builds ``min 0.5 x'Px + q'x  s.t.  Ax <= b`` backwards from a chosen
    primal-dual pair: ``A`` has orthonormal rows, ``x*`` and multipliers
    ``y* > 0`` are drawn first, then ``q = -(P x* + A'y*)`` and
    ``b = A x*`` make ``(x*, y*)`` the exact KKT point with every
    constraint active. The stochastic objective term is a zero-mean
    per-sample linear perturbation (``nsamples`` vectors that sum to zero
    exactly), so the expected objective coincides with the quadratic.

    The instance metadata records the exact solution together with the
    curvature constants ``mu`` (smallest Hessian eigenvalue) and
    ``alpha`` (smallest eigenvalue of ``A P^-1 A'``), the concavity
    modulus of the dual function.
    """
    n = check_scalar(n, "n", low=1, integer=True)
    num_constraints = check_scalar(num_constraints, "num_constraints", low=1, integer=True)
    if num_constraints > n:
        raise ValueError(
            f"num_constraints must not exceed n for independent constraint rows, "
            f"got {num_constraints} > {n}"
        )
    lo, hi = eig_range
    lo = check_scalar(lo, "eig_range[0]", low=0.0, strict_low=True)
    hi = check_scalar(hi, "eig_range[1]", low=lo)
    obj_noise = check_scalar(obj_noise, "obj_noise", low=0.0)
    nsamples = check_scalar(nsamples, "nsamples", low=1, integer=True)
    gen = RngStream(seed, stream=0).generator()

    basis, _ = np.linalg.qr(gen.standard_normal((n, n)))
    eigs = np.sort(gen.uniform(lo, hi, size=n))
    quad = (basis * eigs) @ basis.T
    quad = 0.5 * (quad + quad.T)
    rows, _ = np.linalg.qr(gen.standard_normal((n, num_constraints)))
    con_mat = rows.T
    x_star = gen.uniform(-1.0, 1.0, size=n)
    y_star = gen.uniform(0.5, 1.5, size=num_constraints)
    lin = -(quad @ x_star + con_mat.T @ y_star)
    con_rhs = con_mat @ x_star
    noise = obj_noise * gen.standard_normal((nsamples, n))
    noise -= noise.mean(axis=0)

    def f0(x):
        qx = quad @ x
        return 0.5 * float(x @ qx) + float(lin @ x), qx + lin

    def obj_sampler(x, i):
        return float(noise[i] @ x), noise[i].copy()

    def obj_batch(x, draws):
        sub = noise[np.asarray(draws, dtype=int)]
        gmean = sub.mean(axis=0)
        return float(gmean @ x), gmean

    def h_all(x):
        return con_mat @ x - con_rhs

    def constraint_batch(x, indices):
        sub = con_mat[indices]
        return sub @ x - con_rhs[indices], sub.copy()

    def constraint(j):
        def fn(x):
            return float(con_mat[j] @ x) - con_rhs[j], con_mat[j].copy()
        return fn

    # per-sample noise sums to zero, so the quadratic is the exact objective
    def objective_full(x):
        return f0(x)

    f_star = 0.5 * float(x_star @ (quad @ x_star)) + float(lin @ x_star)
    dual_curv = con_mat @ np.linalg.solve(quad, con_mat.T)
    alpha = float(np.linalg.eigvalsh(0.5 * (dual_curv + dual_curv.T))[0])
    witness = x_star - con_mat.T @ np.full(num_constraints, 0.5)
    meta = {
        "mu": float(eigs[0]),
        "l_f": float(eigs[-1]),
        "l_h": 1.0,
        "alpha": alpha,
        "diameter": 2.0 * box_half * np.sqrt(n),
        "x_star": x_star.copy(),
        "y_star": y_star.copy(),
        "f_star": f_star,
        "instance": LinearQpInstance(quad, lin, con_mat, con_rhs, noise,
                                     x_star.copy(), y_star.copy()),
    }
    return StochasticProblem(
        dim=n,
        f0=f0,
        constraints=[constraint(j) for j in range(num_constraints)],
        projector=make_box_projector(-box_half, box_half),
        obj_sampler=obj_sampler,
        finite_sum_size=nsamples,
        feasible_witness=witness,
        h_all=h_all,
        constraint_batch=constraint_batch,
        obj_batch=obj_batch,
        objective_full=objective_full,
        meta=meta,
    )


def make_scalar_demo():
    """Tiny hand-checkable instance: min 0.5(x-3)^2 s.t. x <= 1 on [-10, 10].

    The constrained minimum sits on the boundary: x* = 1 with multiplier
    y* = 2 (stationarity: (x-3) + y = 0 at x = 1) and objective value 2.
    """
    def f0(x):
        return 0.5 * float((x[0] - 3.0) ** 2), np.array([x[0] - 3.0])

    def constraint(x):
        return float(x[0] - 1.0), np.array([1.0])

    return StochasticProblem(
        dim=1,
        f0=f0,
        constraints=[constraint],
        projector=make_box_projector(-10.0, 10.0),
        feasible_witness=np.array([0.0]),
        meta={
            "mu": 1.0,
            "l_f": 1.0,
            "l_h": 1.0,
            "alpha": 1.0,
            "x_star": np.array([1.0]),
            "y_star": np.array([2.0]),
            "f_star": 2.0,
        },
    )
