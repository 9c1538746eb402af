"""Extremal problem: largest progression-free subsets of F_q.

A subset S of F_q is progression-free for a system {P_1, .., P_m} when no
pair (x, y), y != 0, has the whole configuration {x, x + P_i(y)} inside S.
Each admissible (x, y) therefore defines a hyperedge (the configuration's
point set), and the extremal quantity r = r_{P_1..P_m}(F_q) is the
independence number of the resulting hypergraph.

Two policies govern degenerate configurations (points colliding because
P_i(y) = P_j(y) or P_i(y) = 0 at small characteristic):

* paper_literal (default): every (x, y != 0) generates an edge, even a
  singleton -- matching the verbatim progression-free definition, under
  which such a vertex can never be in S and pathological systems can have
  r = 0;
* distinct_points: only full-size edges (m+1 distinct points) are kept.

r_exact runs an exact branch-and-bound maximum-independent-set search over
bitmask sets: vertices are considered in ascending index order, a greedy
pass seeds the incumbent, the cardinality bound prunes, and unit
propagation removes vertices that would complete an almost-full edge.  The
search is deterministic -- identical inputs give identical witnesses --
and a node budget turns the result into a best-found lower bound
(exact = False) instead of ever raising.  r_lower_random is the randomized
greedy companion (best of `iters` shuffled insertion passes, seeded).

gamma_fit estimates the exponent gamma in r ~ q^(1-gamma) by least squares
on log r against log q over exact results; it reports a standard error and
residuals and makes no claim beyond the fitted data.

Errors raised here: TwistedSystem, InvalidRange, InsufficientData.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .counting import poly_index_table
from .errors import InsufficientData, InvalidRange, TwistedSystem
from .field import FieldElement, FieldSpec
from .polys import ProgressionSystem

_BITSET_LIMIT = 512


@dataclass(frozen=True)
class ProgressionHypergraph:
    """Deduplicated configuration hypergraph of a system over a field."""

    field: FieldSpec
    edges: tuple[tuple[int, ...], ...]
    y_rule: str
    degeneracy: str

    @property
    def q(self) -> int:
        return self.field.q


def build_hypergraph(system: ProgressionSystem, field: FieldSpec,
                     y_rule: str = "nonzero",
                     degeneracy: str = "paper_literal") -> ProgressionHypergraph:
    """Edges {x} U {x + P_i(y)} over admissible y, deduplicated as sets."""
    if system.m2:
        raise TwistedSystem("hypergraphs are built from untwisted systems")
    if y_rule not in ("all", "nonzero"):
        raise InvalidRange(f"y_rule must be 'all' or 'nonzero', got {y_rule!r}")
    if degeneracy not in ("paper_literal", "distinct_points"):
        raise InvalidRange(f"unknown degeneracy policy {degeneracy!r}")
    q = field.q
    tables = [poly_index_table(p, field) for p in system.P]
    full_size = system.m1 + 1
    seen: set[tuple[int, ...]] = set()
    start = 1 if y_rule == "nonzero" else 0
    for yi in range(start, q):
        shifts = [int(t[yi]) for t in tables]
        if field.k == 1:
            for x in range(q):
                edge = {x}
                edge.update((x + s) % q for s in shifts)
                seen.add(tuple(sorted(edge)))
        else:
            add = field.add_index_table()
            for x in range(q):
                edge = {x}
                edge.update(int(add[x, s]) for s in shifts)
                seen.add(tuple(sorted(edge)))
    if degeneracy == "distinct_points":
        seen = {e for e in seen if len(e) == full_size}
    edges = tuple(sorted(seen, key=lambda e: (len(e), e)))
    return ProgressionHypergraph(field, edges, y_rule, degeneracy)


@dataclass(frozen=True)
class ExtremalResult:
    """Outcome of one extremal search."""

    q: int
    r: int
    witness: tuple[FieldElement, ...]
    exact: bool
    nodes_explored: int
    wall_time: float
    method: str
    seed: int | None = None

    @property
    def witness_indices(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.witness)


def _edge_masks(hg: ProgressionHypergraph):
    """Bitmask edges, unusable-vertex mask, per-vertex incidence lists."""
    q = hg.q
    singles = 0
    masks = []
    for e in hg.edges:
        m = 0
        for v in e:
            m |= 1 << v
        if len(e) == 1:
            singles |= m
        else:
            masks.append(m)
    # an edge touching an unusable vertex can never be completed
    masks = [m for m in masks if m & singles == 0]
    edges_of = [[] for _ in range(q)]
    for m in masks:
        mm = m
        while mm:
            v = (mm & -mm).bit_length() - 1
            edges_of[v].append(m)
            mm &= mm - 1
    usable = ((1 << q) - 1) & ~singles
    return masks, edges_of, usable


def _greedy_mask(q: int, order, edges_of, usable: int) -> int:
    """Deterministic greedy independent set along the given vertex order."""
    cur = 0
    for v in order:
        vbit = 1 << v
        if not usable & vbit:
            continue
        if any((e & ~cur) == vbit for e in edges_of[v]):
            continue  # v would complete this edge
        cur |= vbit
    return cur


def _witness(field: FieldSpec, mask: int) -> tuple[FieldElement, ...]:
    els = field.elements()
    out = []
    while mask:
        v = (mask & -mask).bit_length() - 1
        out.append(els[v])
        mask &= mask - 1
    return tuple(out)


def r_exact(hg: ProgressionHypergraph,
            node_budget: int = 10_000_000) -> ExtremalResult:
    """Exact maximum independent set by branch and bound (deterministic).

    Runs to completion within node_budget (exact = True) or returns the
    best set found so far (exact = False); never raises for budget.
    """
    q = hg.q
    if q > _BITSET_LIMIT:
        raise InvalidRange(f"bitset search capped at q <= {_BITSET_LIMIT}")
    t0 = time.perf_counter()
    _, edges_of, usable = _edge_masks(hg)

    best_mask = _greedy_mask(q, range(q), edges_of, usable)
    best_size = bin(best_mask).count("1")
    nodes = 0
    truncated = False

    def dfs(cur: int, cand: int, size: int) -> None:
        nonlocal best_mask, best_size, nodes, truncated
        while True:
            nodes += 1
            if nodes > node_budget:
                truncated = True
                return
            if size + bin(cand).count("1") <= best_size:
                return
            if cand == 0:
                best_size, best_mask = size, cur
                return
            vbit = cand & -cand
            v = vbit.bit_length() - 1
            blocked = False
            newcand = cand & ~vbit
            for e in edges_of[v]:
                rem = e & ~cur
                if rem & ~cand:
                    continue  # some vertex already excluded: edge is dead
                rem &= ~vbit
                if rem == 0:
                    blocked = True  # v alone completes this edge
                    break
                if rem & (rem - 1) == 0:
                    newcand &= ~rem  # unit propagation
            if not blocked and not truncated:
                dfs(cur | vbit, newcand, size + 1)
            cand &= ~vbit  # exclude v and continue in place

    dfs(0, usable, 0)
    return ExtremalResult(q, best_size, _witness(hg.field, best_mask),
                          not truncated, nodes,
                          time.perf_counter() - t0, "branch_and_bound")


def r_lower_random(hg: ProgressionHypergraph, iters: int,
                   seed: int) -> ExtremalResult:
    """Best of `iters` randomized greedy passes; reproducible from seed."""
    from .rng import SplitMix64

    q = hg.q
    if q > _BITSET_LIMIT:
        raise InvalidRange(f"bitset search capped at q <= {_BITSET_LIMIT}")
    if iters < 1:
        raise InvalidRange(f"iters must be >= 1, got {iters}")
    t0 = time.perf_counter()
    _, edges_of, usable = _edge_masks(hg)
    rng = SplitMix64(seed)
    vertices = [v for v in range(q) if usable & (1 << v)]
    best_mask = 0
    best_size = 0
    attempts = 0
    for _ in range(iters):
        order = vertices[:]
        rng.shuffle(order)
        cur = _greedy_mask(q, order, edges_of, usable)
        attempts += len(order)
        size = bin(cur).count("1")
        if size > best_size:
            best_size, best_mask = size, cur
    return ExtremalResult(q, best_size, _witness(hg.field, best_mask),
                          False, attempts, time.perf_counter() - t0,
                          "random_greedy", seed)


@dataclass(frozen=True)
class GammaFit:
    """Least-squares exponent estimate from exact extremal values."""

    gamma_hat: float
    stderr: float
    points_used: int
    residuals: tuple[float, ...]


def gamma_fit(results) -> GammaFit:
    """Fit log r = (1 - gamma) log q + const over exact results with r >= 1."""
    pts = [(res.q, res.r) for res in results if res.exact and res.r >= 1]
    if len(pts) < 3:
        raise InsufficientData(
            f"need >= 3 exact results with r >= 1, have {len(pts)}")
    x = np.log([p for p, _ in pts])
    yv = np.log([r for _, r in pts])
    xbar = x.mean()
    sxx = float(((x - xbar) ** 2).sum())
    if sxx == 0.0:
        raise InsufficientData("all results share one q; no slope to fit")
    slope = float(((x - xbar) * (yv - yv.mean())).sum() / sxx)
    const = float(yv.mean() - slope * xbar)
    resid = yv - (slope * x + const)
    n = len(pts)
    s2 = float((resid ** 2).sum()) / (n - 2) if n > 2 else 0.0
    return GammaFit(1.0 - slope, (s2 / sxx) ** 0.5, n,
                    tuple(float(r) for r in resid))
