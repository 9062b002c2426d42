"""Weighted directed graphs: construction, I/O, degrees, cuts and conductance.

Vertices are dense 0-based ids internally; original labels (arbitrary
strings) are kept for reporting. Arc lists are canonical after
construction: self-loops stripped, parallel arcs aggregated, arcs sorted
by (tail, head), all weights strictly positive.
"""

from __future__ import annotations

import gzip
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateSubsetError, EdgeListParseError, EmptyGraphError

COMMENT_PREFIXES = ("#", "%")


@dataclass(frozen=True)
class DegreeProfile:
    """Per-vertex weighted degrees of a digraph.

    d = d_out + d_in, d_delta = d_out - d_in, vol_total = sum(d).
    """

    d_out: np.ndarray
    d_in: np.ndarray
    d: np.ndarray
    d_delta: np.ndarray
    vol_total: float


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable weighted digraph.

    tails/heads/weights are parallel arrays over arcs; labels maps dense
    ids back to the original vertex names. Derived adjacency structures
    are cached lazily and safe to share across threads.
    """

    n: int
    tails: np.ndarray
    heads: np.ndarray
    weights: np.ndarray
    labels: tuple[str, ...]
    self_loops_dropped: int = 0

    @property
    def m(self) -> int:
        return self.tails.size

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    @cached_property
    def label_to_id(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def degree_profile(self) -> DegreeProfile:
        d_out = np.bincount(self.tails, weights=self.weights, minlength=self.n)
        d_in = np.bincount(self.heads, weights=self.weights, minlength=self.n)
        d = d_out + d_in
        return DegreeProfile(d_out, d_in, d, d_out - d_in, float(d.sum()))

    @cached_property
    def pairs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Unordered vertex pairs (u < v) with symmetric weight w_uv + w_vu."""
        u = np.minimum(self.tails, self.heads)
        v = np.maximum(self.tails, self.heads)
        key = u.astype(np.int64) * self.n + v
        uniq, inv = np.unique(key, return_inverse=True)
        w_sym = np.zeros(uniq.size)
        np.add.at(w_sym, inv, self.weights)
        return uniq // self.n, uniq % self.n, w_sym

    @cached_property
    def out_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, arc index) lists grouping arcs by tail."""
        order = np.argsort(self.tails, kind="stable")
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(indptr, self.tails + 1, 1)
        return np.cumsum(indptr), order

    @cached_property
    def in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, arc index) lists grouping arcs by head."""
        order = np.argsort(self.heads, kind="stable")
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(indptr, self.heads + 1, 1)
        return np.cumsum(indptr), order

    def out_arcs(self, v: int) -> np.ndarray:
        indptr, order = self.out_csr
        return order[indptr[v]:indptr[v + 1]]

    def in_arcs(self, v: int) -> np.ndarray:
        indptr, order = self.in_csr
        return order[indptr[v]:indptr[v + 1]]


def build_graph(n, tails, heads, weights=None, labels=None) -> DirectedGraph:
    """Canonicalize raw arc arrays into a DirectedGraph.

    Drops self-loops (counted) and zero-weight arcs, aggregates parallel
    arcs by weight sum, and sorts arcs by (tail, head).
    """
    if n <= 0:
        raise EmptyGraphError("graph has no vertices")
    tails = np.asarray(tails, dtype=np.int64)
    heads = np.asarray(heads, dtype=np.int64)
    if weights is None:
        weights = np.ones(tails.size)
    else:
        weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0):
        raise ValueError("negative arc weight")
    loops = tails == heads
    n_loops = int(loops.sum())
    keep = ~loops & (weights > 0)
    tails, heads, weights = tails[keep], heads[keep], weights[keep]

    key = tails * n + heads
    uniq, inv = np.unique(key, return_inverse=True)
    agg = np.zeros(uniq.size)
    np.add.at(agg, inv, weights)
    nonzero = agg > 0
    uniq, agg = uniq[nonzero], agg[nonzero]

    if labels is None:
        labels = tuple(str(i) for i in range(n))
    else:
        labels = tuple(labels)
        if len(labels) != n:
            raise ValueError("label count does not match vertex count")
    return DirectedGraph(
        n=n,
        tails=uniq // n,
        heads=uniq % n,
        weights=agg,
        labels=labels,
        self_loops_dropped=n_loops,
    )


def _open_text(source):
    """Yield text lines from a path, bytes, or file-like source.

    Gzip content is detected by magic bytes and decompressed
    transparently.
    """
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
        if isinstance(data, str):
            return data.splitlines()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return data.decode("utf-8").splitlines()


def load_edge_list(source, *, default_weight=1.0) -> DirectedGraph:
    """Parse a "tail head [weight]" edge list into a DirectedGraph.

    Lines starting with '#' or '%' are comments; blank lines are skipped.
    A missing weight defaults to ``default_weight``. Parallel arcs are
    aggregated, self-loops dropped (count kept on the graph), and labels
    densified to 0-based ids in first-appearance order.
    """
    labels: list[str] = []
    index: dict[str, int] = {}
    tails, heads, weights = [], [], []

    def vid(tok: str) -> int:
        if tok not in index:
            index[tok] = len(labels)
            labels.append(tok)
        return index[tok]

    for line_no, raw in enumerate(_open_text(source), start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise EdgeListParseError(line_no, f"expected 2 or 3 fields, got {len(parts)}")
        try:
            w = float(parts[2]) if len(parts) == 3 else float(default_weight)
        except ValueError:
            raise EdgeListParseError(line_no, f"bad weight {parts[2]!r}") from None
        if not np.isfinite(w):
            raise EdgeListParseError(line_no, f"non-finite weight {parts[2]!r}")
        if w < 0:
            raise EdgeListParseError(line_no, f"negative weight {w}")
        tails.append(vid(parts[0]))
        heads.append(vid(parts[1]))
        weights.append(w)

    if not labels:
        raise EmptyGraphError("edge list defines no vertices")
    return build_graph(len(labels), tails, heads, weights, labels)


def write_edge_list(g: DirectedGraph, path) -> None:
    """Write the canonical edge list (original labels, sorted arcs)."""
    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "wt") as fh:
        for t, h, w in zip(g.tails, g.heads, g.weights):
            fh.write(f"{g.labels[t]} {g.labels[h]} {float(w)!r}\n")


def degrees(g: DirectedGraph) -> DegreeProfile:
    """Weighted out/in/total/delta degrees and total volume."""
    return g.degree_profile


def _check_subset(g: DirectedGraph, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=bool)
    if s.shape != (g.n,):
        raise ValueError(f"subset mask must have shape ({g.n},)")
    k = int(s.sum())
    if k == 0 or k == g.n:
        raise DegenerateSubsetError("subset must be a nonempty proper subset")
    return s


def cut_values(g: DirectedGraph, s) -> tuple[float, float, float, float]:
    """Outgoing cut, incoming cut, and volumes of both sides of S."""
    s = _check_subset(g, s)
    t_in, h_in = s[g.tails], s[g.heads]
    cut_plus = float(g.weights[t_in & ~h_in].sum())
    cut_minus = float(g.weights[~t_in & h_in].sum())
    d = g.degree_profile.d
    vol_s = float(d[s].sum())
    return cut_plus, cut_minus, vol_s, g.degree_profile.vol_total - vol_s


def conductance_set(g: DirectedGraph, s) -> tuple[float, float, float]:
    """Directed conductance of S plus its out- and in-variants.

    phi_d = min(cut+, cut-) / min(vol(S), vol(S complement)).
    """
    cut_plus, cut_minus, vol_s, vol_comp = cut_values(g, s)
    denom = min(vol_s, vol_comp)
    if denom <= 0:
        raise DegenerateSubsetError("subset has a zero-volume side")
    return min(cut_plus, cut_minus) / denom, cut_plus / denom, cut_minus / denom


def prefix_cut_profile(g: DirectedGraph, order) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cut and volume values for every prefix of a vertex ordering.

    Entry k describes S = order[:k+1]: (outgoing cut, incoming cut,
    vol(S)). Updates are incremental over each vertex's incident arcs,
    O(m + n) total.
    """
    order = np.asarray(order, dtype=np.int64)
    member = np.zeros(g.n, dtype=bool)
    d = g.degree_profile.d
    w, tails, heads = g.weights, g.tails, g.heads
    cut_plus = cut_minus = vol = 0.0
    cps = np.empty(g.n)
    cms = np.empty(g.n)
    vols = np.empty(g.n)
    for k, u in enumerate(order):
        out_idx = g.out_arcs(u)
        if out_idx.size:
            inside = member[heads[out_idx]]
            wo = w[out_idx]
            cut_plus += float(wo[~inside].sum())
            cut_minus -= float(wo[inside].sum())
        in_idx = g.in_arcs(u)
        if in_idx.size:
            inside = member[tails[in_idx]]
            wi = w[in_idx]
            cut_minus += float(wi[~inside].sum())
            cut_plus -= float(wi[inside].sum())
        vol += float(d[u])
        member[u] = True
        cps[k], cms[k], vols[k] = cut_plus, cut_minus, vol
    return cps, cms, vols


def weak_components(g: DirectedGraph) -> list[np.ndarray]:
    """Weakly connected components as sorted vertex-id arrays."""
    parent = np.arange(g.n)

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for t, h in zip(g.tails, g.heads):
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[max(rt, rh)] = min(rt, rh)
    roots = np.array([find(v) for v in range(g.n)])
    comps = [np.flatnonzero(roots == r) for r in np.unique(roots)]
    comps.sort(key=lambda c: (-c.size, int(c[0])))
    return comps


def induced_subgraph(g: DirectedGraph, vertices: np.ndarray) -> tuple[DirectedGraph, np.ndarray]:
    """Subgraph on the given vertices; returns (subgraph, original-id map)."""
    vertices = np.asarray(vertices, dtype=np.int64)
    vertices.sort()
    remap = -np.ones(g.n, dtype=np.int64)
    remap[vertices] = np.arange(vertices.size)
    keep = (remap[g.tails] >= 0) & (remap[g.heads] >= 0)
    sub = build_graph(
        vertices.size,
        remap[g.tails[keep]],
        remap[g.heads[keep]],
        g.weights[keep],
        [g.labels[v] for v in vertices],
    )
    return sub, vertices


def largest_weak_component(g: DirectedGraph) -> tuple[DirectedGraph, np.ndarray]:
    """Induced subgraph on the largest weakly connected component.

    Ties between equal-size components break toward the one containing
    the smallest original vertex id.
    """
    return induced_subgraph(g, weak_components(g)[0])
