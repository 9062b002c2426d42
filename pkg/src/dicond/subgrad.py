"""Subdifferential intervals, boundary indicator, and subgradient selection.

The descent machinery works on the per-vertex subdifferential intervals
of the three convex pieces of Q_r (the arc term, the imbalance term, and
the median term), combines their chi-signed extremes into a boundary
indicator b, and either certifies flip-local optimality (V_b empty) or
assembles a consistent subgradient whose l1 norm exceeds 1, which forces
strict descent of the ratio objective.

All zero tests (x_i + x_j = 0, x_i = +/-||x||_inf, x_i = alpha, J = 0)
use the relative tolerance tol * max(1, ||x||_inf); iterates of the
l1-ball subproblem carry few distinct values, so exact ties are the
common case and must be detected robustly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstantVectorError
from .functionals import linf, n_med
from .graph import DegreeProfile, DirectedGraph

ZERO_TOL = 1e-9


def _sign(t: np.ndarray | float):
    """Sign with Sign(0) = +1."""
    return np.where(np.asarray(t) >= 0, 1.0, -1.0)


@dataclass(frozen=True)
class VertexClasses:
    """Partition of vertices by extremity of x plus the median tie set."""

    s_plus: np.ndarray
    s_minus: np.ndarray
    s_less: np.ndarray
    s_alpha: np.ndarray
    alpha: float


@dataclass(frozen=True)
class SubgradientBounds:
    """Per-vertex subdifferential data for the three pieces of Q_r.

    p/q give the arc-term interval [p-q, p+q]; l_low/l_high the
    imbalance-term interval; a_low/a_high the median-term interval with
    its tie-set aggregates A and B. zero_pairs lists the unordered
    neighbor pairs with x_i + x_j = 0 (symmetric weight attached), which
    the selection step must sign consistently at both endpoints.
    """

    p: np.ndarray
    q: np.ndarray
    l_low: np.ndarray
    l_high: np.ndarray
    a_low: np.ndarray
    a_high: np.ndarray
    A: float
    B: float
    j_is_zero: bool
    j0: float
    zero_pairs: tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class BoundaryIndicator:
    """Signed boundary values of the scaled subdifferential of Q_r.

    v_b collects the maximizers of {b_i * chi_i > 0}; emptiness certifies
    that no coordinate admits a descent-forcing boundary subgradient.
    sigma orders vertices by |b| ascending (ties by id); rank is its
    inverse permutation.
    """

    b: np.ndarray
    chi: np.ndarray
    a_sel: np.ndarray
    v_b: np.ndarray
    sigma: np.ndarray
    rank: np.ndarray


@dataclass(frozen=True)
class SelectedSubgradient:
    """A consistent element of the subdifferential of Q_r at x."""

    s: np.ndarray
    u: np.ndarray
    v: np.ndarray
    y: np.ndarray
    i_star: int


@dataclass(frozen=True)
class StopCertificate:
    """Returned instead of a subgradient when V_b is empty."""

    r: float


def classify(degrees: DegreeProfile, x: np.ndarray, tol: float = ZERO_TOL) -> VertexClasses:
    """Split vertices into extreme-positive, extreme-negative, interior,
    and median-tie classes, with tolerance tol * max(1, ||x||_inf)."""
    x = np.asarray(x, dtype=float)
    hi = linf(x)
    t = tol * max(1.0, hi)
    if float(np.max(x) - np.min(x)) <= t:
        raise ConstantVectorError("cannot classify a constant vector")
    s_plus = x >= hi - t
    s_minus = x <= -hi + t
    alpha = n_med(degrees, x).alpha_low
    s_alpha = np.abs(x - alpha) <= t
    return VertexClasses(s_plus, s_minus, ~(s_plus | s_minus), s_alpha, alpha)


def bounds(
    g: DirectedGraph,
    degrees: DegreeProfile,
    classes: VertexClasses,
    x: np.ndarray,
    tol: float = ZERO_TOL,
) -> SubgradientBounds:
    """Per-vertex subdifferential intervals of the three pieces of Q_r."""
    x = np.asarray(x, dtype=float)
    n = g.n
    t = tol * max(1.0, linf(x))
    pu, pv, w_sym = g.pairs

    pair_sum = x[pu] + x[pv]
    zero = np.abs(pair_sum) <= t
    contrib = np.where(zero, 1.0, _sign(pair_sum)) * w_sym
    p = np.bincount(pu, weights=contrib, minlength=n)
    p += np.bincount(pv, weights=contrib, minlength=n)
    w_zero = np.where(zero, w_sym, 0.0)
    q = np.bincount(pu, weights=w_zero, minlength=n)
    q += np.bincount(pv, weights=w_zero, minlength=n)
    p -= q

    d_delta = degrees.d_delta
    j0 = float(np.dot(d_delta, x))
    j_is_zero = abs(j0) <= t
    if j_is_zero:
        l_low, l_high = -np.abs(d_delta), np.abs(d_delta)
    else:
        l_low = l_high = d_delta * _sign(j0)

    d = degrees.d
    in_a = classes.s_alpha
    below = (x < classes.alpha) & ~in_a
    above = (x > classes.alpha) & ~in_a
    A = float(d[below].sum() - d[above].sum())
    B = float(d[in_a].sum())
    a_low = np.where(above, d, -d).astype(float)
    a_high = a_low.copy()
    if int(in_a.sum()) >= 2:
        a_low[in_a] = np.maximum(A - B + d[in_a], -d[in_a])
        a_high[in_a] = np.minimum(A + B - d[in_a], d[in_a])
    else:
        a_low[in_a] = A
        a_high[in_a] = A

    return SubgradientBounds(
        p=p,
        q=q,
        l_low=l_low,
        l_high=l_high,
        a_low=a_low,
        a_high=a_high,
        A=A,
        B=B,
        j_is_zero=j_is_zero,
        j0=j0,
        zero_pairs=(pu[zero], pv[zero], w_sym[zero]),
    )


def boundary_indicator(
    g: DirectedGraph,
    degrees: DegreeProfile,
    bnds: SubgradientBounds,
    classes: VertexClasses,
    r: float,
    tol: float = ZERO_TOL,
) -> BoundaryIndicator:
    """Boundary values b, signs chi, the chosen median-term endpoint, and
    the stop set V_b = argmax{b_i chi_i : b_i chi_i > 0}."""
    n = g.n
    p, q = bnds.p, bnds.q
    l_pt = bnds.l_low  # point value of the imbalance term when J != 0
    d = degrees.d
    in_a = classes.s_alpha
    ties = int(in_a.sum())

    # median-term endpoint per vertex
    a_sel = np.empty(n)
    not_tie = ~in_a
    a_sel[not_tie] = bnds.a_low[not_tie]  # = d * Sign(x - alpha) off the tie set
    if ties <= 1:
        a_sel[in_a] = bnds.A
    else:
        pick_low = in_a & classes.s_plus
        pick_high = in_a & classes.s_minus
        a_sel[pick_low] = bnds.a_low[pick_low]
        a_sel[pick_high] = bnds.a_high[pick_high]
        free = in_a & classes.s_less
        if np.any(free):
            base = p[free] + (l_pt[free] if not bnds.j_is_zero else 0.0)
            lo, hi = bnds.a_low[free], bnds.a_high[free]
            take_low = np.abs(base + 2.0 * r * lo) >= np.abs(base + 2.0 * r * hi)
            a_sel[free] = np.where(take_low, lo, hi)

    chi = np.empty(n)
    chi[classes.s_plus] = -1.0
    chi[classes.s_minus] = 1.0
    less = classes.s_less
    if np.any(less):
        base = p[less] + (l_pt[less] if not bnds.j_is_zero else 0.0)
        chi[less] = _sign(base + 2.0 * r * a_sel[less])

    if bnds.j_is_zero:
        b = p + chi * np.abs(degrees.d_delta) + 2.0 * r * a_sel + chi * q
    else:
        b = p + l_pt + 2.0 * r * a_sel + chi * q

    prod = b * chi
    eps = tol * max(1.0, float(np.max(np.abs(b))) if n else 1.0)
    positive = prod > eps
    if np.any(positive):
        top = float(prod[positive].max())
        v_b = np.flatnonzero(positive & (prod >= top - eps))
    else:
        v_b = np.empty(0, dtype=np.int64)

    sigma = np.lexsort((np.arange(n), np.abs(b)))
    rank = np.empty(n, dtype=np.int64)
    rank[sigma] = np.arange(n)
    return BoundaryIndicator(b=b, chi=chi, a_sel=a_sel, v_b=v_b, sigma=sigma, rank=rank)


def select_subgradient(
    g: DirectedGraph,
    degrees: DegreeProfile,
    bnds: SubgradientBounds,
    indicator: BoundaryIndicator,
    classes: VertexClasses,
    r: float,
    rng: np.random.Generator | None = None,
) -> SelectedSubgradient | StopCertificate:
    """Assemble the boundary-driven subgradient s = (u + y + 2 r v) / vol.

    Returns a StopCertificate when V_b is empty. The pivot i* is the
    smallest id in V_b (or a seeded-random member when rng is given).
    Zero-sum neighbor pairs receive one consistent sign at both
    endpoints: chi(i*) for pairs touching i*, otherwise the chi of the
    endpoint appearing later in the |b|-ascending order.
    """
    if indicator.v_b.size == 0:
        return StopCertificate(r=r)
    if rng is None:
        i_star = int(indicator.v_b.min())
    else:
        i_star = int(rng.choice(indicator.v_b))

    chi, rank = indicator.chi, indicator.rank
    u = bnds.p.copy()
    zu, zv, zw = bnds.zero_pairs
    if zu.size:
        touches = (zu == i_star) | (zv == i_star)
        later = np.where(rank[zu] >= rank[zv], zu, zv)
        zval = np.where(touches, chi[i_star], chi[later])
        np.add.at(u, zu, zw * zval)
        np.add.at(u, zv, zw * zval)

    n = g.n
    d = degrees.d
    in_a = classes.s_alpha
    v = np.empty(n)
    v[~in_a] = indicator.a_sel[~in_a]
    tie_ids = np.flatnonzero(in_a)
    if tie_ids.size <= 1:
        v[tie_ids] = bnds.A
    else:
        if in_a[i_star]:
            j_star = i_star
        else:
            j_star = int(tie_ids[np.argmax(rank[tie_ids])])
        v[j_star] = indicator.a_sel[j_star]
        others = tie_ids[tie_ids != j_star]
        denom = bnds.B - d[j_star]
        ratio = (bnds.A - indicator.a_sel[j_star]) / denom if denom > 0 else 0.0
        v[others] = ratio * d[others]

    if bnds.j_is_zero:
        # one scalar t in [-1,1] scales the whole imbalance vector; the
        # boundary value b_{i*} is attained only with t matching the
        # sign of the i* component, chi_{i*} alone is not enough
        t = chi[i_star] * (1.0 if degrees.d_delta[i_star] >= 0 else -1.0)
        y = t * degrees.d_delta
    else:
        y = _sign(bnds.j0) * degrees.d_delta

    s = (u + y + 2.0 * r * v) / degrees.vol_total
    return SelectedSubgradient(s=s, u=u, v=v, y=np.asarray(y, dtype=float), i_star=i_star)
