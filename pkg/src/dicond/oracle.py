"""Exhaustive ground truth for small digraphs.

Enumerates one representative per complementary subset pair (vertex 0 is
pinned to the complement side) in vectorized chunks, giving exact minima
of the directed conductance, its one-sided variants, and the ratio
objective restricted to nonconstant sign vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSubsetError, GraphTooLargeError
from .graph import DegreeProfile, DirectedGraph

CHUNK = 1 << 15


@dataclass(frozen=True)
class OracleResult:
    phi_d_min: float
    phi_plus_min: float
    phi_minus_min: float
    argmin_d: np.ndarray
    argmin_plus: np.ndarray
    argmin_minus: np.ndarray
    subsets_enumerated: int


class _LexMin:
    """Running (value, lexicographically-smallest membership vector)."""

    def __init__(self):
        self.value = np.inf
        self.rev_key = None
        self.mask = None

    def offer(self, values, rev_keys, masks):
        if values.size == 0:
            return
        lo = float(values.min())
        if lo > self.value:
            return
        attain = values == lo
        j = int(np.argmin(np.where(attain, rev_keys, np.iinfo(np.int64).max)))
        key = int(rev_keys[j])
        if lo < self.value or self.rev_key is None or key < self.rev_key:
            self.value = lo
            self.rev_key = key
            self.mask = masks[j].copy()


def _member_matrix(reps: np.ndarray, n: int) -> np.ndarray:
    """Boolean membership (chunk, n); vertex 0 is never a member."""
    cols = ((reps[:, None] >> np.arange(n - 1)[None, :]) & 1).astype(bool)
    return np.hstack([np.zeros((reps.size, 1), dtype=bool), cols])


def _rev_keys(member: np.ndarray) -> np.ndarray:
    """Integer keys whose order equals lexicographic order of the
    membership vectors (vertex 0 is the most significant position)."""
    n = member.shape[1]
    return member.astype(np.int64) @ (1 << np.arange(n - 1, -1, -1, dtype=np.int64))


def brute_conductance(g: DirectedGraph, limit: int = 24) -> OracleResult:
    """Exact minima of phi_d, phi_plus, phi_minus over all nonempty
    proper subsets, skipping zero-volume sides."""
    n = g.n
    if n > limit:
        raise GraphTooLargeError(f"n={n} exceeds oracle limit {limit}")
    if n < 2:
        raise DegenerateSubsetError("need at least two vertices")
    d = g.degree_profile.d
    vol_total = g.degree_profile.vol_total
    w = g.weights

    best_d, best_p, best_m = _LexMin(), _LexMin(), _LexMin()
    total = (1 << (n - 1)) - 1
    for start in range(1, total + 1, CHUNK):
        reps = np.arange(start, min(start + CHUNK, total + 1), dtype=np.int64)
        member = _member_matrix(reps, n)
        t_in = member[:, g.tails]
        h_in = member[:, g.heads]
        cp = (t_in & ~h_in) @ w
        cm = (~t_in & h_in) @ w
        vol_s = member @ d
        mv = np.minimum(vol_s, vol_total - vol_s)
        valid = mv > 0
        if not valid.any():
            continue
        reps_v = member[valid]
        mv_v = mv[valid]
        cp_v, cm_v = cp[valid], cm[valid]
        phi_p = cp_v / mv_v
        phi_m = cm_v / mv_v
        phi_d = np.minimum(phi_p, phi_m)
        keys = _rev_keys(reps_v)
        comp = ~reps_v
        comp_keys = _rev_keys(comp)
        best_d.offer(phi_d, keys, reps_v)
        # phi_plus over all subsets = phi_plus on reps plus phi_minus on
        # their complements (cut+ of the complement is cut- of the set)
        best_p.offer(phi_p, keys, reps_v)
        best_p.offer(phi_m, comp_keys, comp)
        best_m.offer(phi_m, keys, reps_v)
        best_m.offer(phi_p, comp_keys, comp)

    if best_d.mask is None:
        raise DegenerateSubsetError("every subset has a zero-volume side")
    return OracleResult(
        phi_d_min=best_d.value,
        phi_plus_min=best_p.value,
        phi_minus_min=best_m.value,
        argmin_d=best_d.mask,
        argmin_plus=best_p.mask,
        argmin_minus=best_m.mask,
        subsets_enumerated=total,
    )


def brute_binary_r_min(
    g: DirectedGraph, degrees: DegreeProfile, limit: int = 24
) -> tuple[float, np.ndarray]:
    """Exact minimum of the ratio objective over nonconstant +/-1
    vectors (evaluated through the continuous formula, not the cut
    definition, so the two enumerations cross-check each other)."""
    n = g.n
    if n > limit:
        raise GraphTooLargeError(f"n={n} exceeds oracle limit {limit}")
    if n < 2:
        raise DegenerateSubsetError("need at least two vertices")
    d = degrees.d
    d_delta = degrees.d_delta
    vol_total = degrees.vol_total
    w = g.weights

    best = _LexMin()
    total = (1 << (n - 1)) - 1
    for start in range(1, total + 1, CHUNK):
        reps = np.arange(start, min(start + CHUNK, total + 1), dtype=np.int64)
        member = _member_matrix(reps, n)
        same_side = member[:, g.tails] == member[:, g.heads]
        i_plus = 2.0 * (same_side @ w)
        j = 2.0 * np.abs(member @ d_delta)
        vol_s = member @ d
        n_val = 2.0 * np.minimum(vol_s, vol_total - vol_s)
        valid = n_val > 0
        if not valid.any():
            continue
        r = (vol_total - i_plus[valid] - j[valid]) / (2.0 * n_val[valid])
        best.offer(r, _rev_keys(member[valid]), member[valid])

    if best.mask is None:
        raise DegenerateSubsetError("every sign vector has zero median deviation")
    return best.value, best.mask
