"""Problem builders: seeded maximum-density and local balanced-cut ratios.

Both applications are instances of minimizing a ratio of non-negative set
functions subject to volume bounds and a seed-containment constraint.  The
seed constraint is folded out exactly: optimizing over A in the complement of
the seed J, with C = A u J, constants like vol(J) and assoc(J) ride along on
the nonempty-set indicator (whose extension is max(f)), and boundary weights
d_i^J = sum_{j in J} w_ij become modular terms.  Volume penalties enter the
numerator with weight gamma as differences of submodular functions.

The unconstrained maximum-density problem is convex-over-concave, so the
descent scheme degenerates to parametric root finding; each parametric
subproblem is an s-t minimum cut, solved exactly here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import VolumeConstraint, penalty_dc
from .graph import (Graph, as_index_array, as_vertex_weights, assoc_value,
                    cut_value, volume)
from .lovasz import (LinearMaxTV, LowerPenalty, ModularVolume, SeededAssoc,
                     SeededBalance, SeededCut, SetFunctionDC, UpperPenalty,
                     WeightedSum, greedy_subgradient)
from .maxflow import FlowNetwork
from .ratiodca import (ConstrainedRatioProblem, InfeasibleProblem,
                       solve_with_gamma_schedule)

__all__ = [
    "DensityProblemSpec",
    "NCutProblemSpec",
    "build_local_ncut",
    "build_max_density",
    "dinkelbach_max_density",
    "solve_local_ncut",
    "solve_max_density",
]


@dataclass
class DensityProblemSpec:
    """Maximize assoc(C)/vol_g(C) s.t. lower <= vol_h(C) <= upper and seed in C.

    Solved in minimization form vol_g(C)/assoc(C).  ``g`` and ``h`` default
    to all-ones (cardinality).  Bounds may each be None.
    """

    seed: tuple = ()
    g: np.ndarray | None = None
    h: np.ndarray | None = None
    lower: float | None = None
    upper: float | None = None


@dataclass
class NCutProblemSpec:
    """Minimize cut(C)/(vol_d(C) vol_d(complement)) s.t. vol_d(C) <= bound, seed in C."""

    seed: tuple = ()
    bound: float | None = None


def _boundary_weights(graph, seed_mask):
    """Per-vertex weight into the seed block: d_i^J = sum_{j in seed} w_ij."""
    eu, ev, ew = graph.edge_u, graph.edge_v, graph.edge_w
    out = np.zeros(graph.n)
    if ew.size:
        su = seed_mask[eu]
        sv = seed_mask[ev]
        sel = sv & ~su
        out += np.bincount(eu[sel], weights=ew[sel], minlength=graph.n)
        sel = su & ~sv
        out += np.bincount(ev[sel], weights=ew[sel], minlength=graph.n)
    return out


def build_max_density(graph: Graph, spec: DensityProblemSpec, gamma=0.0):
    """Assemble the seed-reduced constrained density problem at penalty gamma.

    On active vertices, the kept convex numerator piece is
    <g + gamma*h, f> + vol_g(J) max(f) (+ gamma*k1' max(f) for a lower
    bound), its linearized complement is gamma times the truncated-volume
    subgradients; the denominator keeps the active-graph TV and linearizes
    <d + d^J, f> + assoc(J) max(f).
    """
    n = graph.n
    g = as_vertex_weights(spec.g if spec.g is not None else np.ones(n), n)
    h = as_vertex_weights(spec.h if spec.h is not None else np.ones(n), n)
    seed = np.unique(as_index_array(spec.seed, n))
    if graph.num_edges == 0:
        raise InfeasibleProblem("graph has no edges; association is identically zero")
    if spec.lower is not None and spec.upper is not None and spec.lower > spec.upper:
        raise ValueError("lower volume bound exceeds the upper bound")
    vol_hj = volume(h, seed)
    if spec.upper is not None and spec.upper < vol_hj - 1e-12:
        raise InfeasibleProblem("upper volume bound below the seed volume")
    seed_mask = np.zeros(n, dtype=bool)
    seed_mask[seed] = True
    active = np.nonzero(~seed_mask)[0]
    sub, _ = graph.induced_subgraph(active)
    dj = _boundary_weights(graph, seed_mask)[active]
    assoc_j = assoc_value(graph, seed)
    vol_gj = volume(g, seed)
    g_act, h_act, d_act = g[active], h[active], graph.degrees[active]
    m = active.size

    constraints = []
    if spec.upper is not None:
        constraints.append(VolumeConstraint(h, spec.upper, upper=True))
    if spec.lower is not None:
        constraints.append(VolumeConstraint(h, spec.lower, upper=False))

    linear = g_act.copy()
    fmax = vol_gj
    subgrads = []
    sweep_terms = [(1.0, ModularVolume(g_act, vol_gj))]
    if gamma > 0 and spec.upper is not None:
        linear = linear + gamma * h_act
        upper_red = max(0.0, spec.upper - vol_hj)
        subgrads.append(penalty_dc(VolumeConstraint(h_act, upper_red, upper=True)))
        sweep_terms.append((gamma, UpperPenalty(h_act, spec.upper, vol_hj)))
    if gamma > 0 and spec.lower is not None:
        low_red = spec.lower - vol_hj
        if low_red > 0:
            fmax += gamma * low_red
            subgrads.append(penalty_dc(VolumeConstraint(h_act, low_red,
                                                        upper=False)))
            sweep_terms.append((gamma, LowerPenalty(h_act, spec.lower, vol_hj)))

    def r2(f):
        out = np.zeros(m)
        for dc in subgrads:
            out += dc.subgradient(f)
        return gamma * out if subgrads else out

    s1_base = d_act + dj

    def s1(f):
        s = s1_base.copy()
        if assoc_j > 0 and f.size:
            s[int(np.argmax(f))] += assoc_j
        return s

    numerator = SetFunctionDC(WeightedSum(sweep_terms),
                              LinearMaxTV(linear, fmax=fmax, tv=0.0), r2)
    denominator = SetFunctionDC(SeededAssoc(sub, dj, assoc_j),
                                LinearMaxTV(np.zeros(m), fmax=0.0, tv=1.0), s1)
    return ConstrainedRatioProblem(
        graph=graph, seed_ids=seed, active_ids=active, subgraph=sub,
        numerator=numerator, denominator=denominator,
        constraints=constraints, gamma=gamma,
        unpenalized_numerator=lambda C: volume(g, C),
        denominator_full=lambda C: assoc_value(graph, C),
        denominator_max=assoc_value(graph, np.arange(n)),
        label="max-density")


def build_local_ncut(graph: Graph, spec: NCutProblemSpec, gamma=0.0):
    """Assemble the seed-reduced local balanced-cut problem at penalty gamma.

    The numerator keeps TV on the active graph plus cut(J, V\\J) max(f) plus
    the penalty's modular part, and linearizes d^J plus the truncated-volume
    subgradient.  The denominator (vol(C) vol(complement)) is submodular on
    reduced sets, so nothing is kept and s1 is its greedy subgradient.
    """
    n = graph.n
    seed = np.unique(as_index_array(spec.seed, n))
    if seed.size == 0:
        raise ValueError("the local cut problem requires a non-empty seed set")
    d = graph.degrees
    vol_total = float(d.sum())
    vol_dj = volume(d, seed)
    if vol_dj >= vol_total:
        raise InfeasibleProblem("the seed set already covers the graph volume")
    if spec.bound is not None and vol_dj >= spec.bound:
        raise InfeasibleProblem("volume bound does not exceed the seed volume")
    seed_mask = np.zeros(n, dtype=bool)
    seed_mask[seed] = True
    active = np.nonzero(~seed_mask)[0]
    sub, _ = graph.induced_subgraph(active)
    dj = _boundary_weights(graph, seed_mask)[active]
    cut_j = float(dj.sum())
    d_act = d[active]
    m = active.size

    constraints = []
    sweep_terms = [(1.0, SeededCut(sub, dj, cut_j))]
    linear = np.zeros(m)
    dc = None
    if spec.bound is not None:
        constraints.append(VolumeConstraint(d, spec.bound, upper=True))
        if gamma > 0:
            linear = gamma * d_act
            dc = penalty_dc(VolumeConstraint(d_act, spec.bound - vol_dj,
                                             upper=True))
            sweep_terms.append((gamma, UpperPenalty(d_act, spec.bound, vol_dj)))

    def r2(f):
        if dc is None:
            return dj.copy()
        return dj + gamma * dc.subgradient(f)

    balance = SeededBalance(d_act, vol_dj, vol_total)

    def s1(f):
        return greedy_subgradient(balance, f)

    numerator = SetFunctionDC(WeightedSum(sweep_terms),
                              LinearMaxTV(linear, fmax=cut_j, tv=1.0), r2)
    denominator = SetFunctionDC(balance, LinearMaxTV(np.zeros(m)), s1)

    def den_full(C):
        vol = volume(d, C)
        return vol * (vol_total - vol)

    return ConstrainedRatioProblem(
        graph=graph, seed_ids=seed, active_ids=active, subgraph=sub,
        numerator=numerator, denominator=denominator,
        constraints=constraints, gamma=gamma,
        unpenalized_numerator=lambda C: cut_value(graph, C),
        denominator_full=den_full,
        denominator_max=0.25 * vol_total * vol_total,
        label="local-ncut")


def solve_max_density(graph, spec, cfg=None, warm_starts=()):
    """Constrained density solve with the gamma feasibility schedule."""
    return solve_with_gamma_schedule(
        lambda gamma: build_max_density(graph, spec, gamma), cfg, warm_starts)


def solve_local_ncut(graph, spec, cfg=None, warm_starts=()):
    """Local balanced-cut solve with the gamma feasibility schedule."""
    return solve_with_gamma_schedule(
        lambda gamma: build_local_ncut(graph, spec, gamma), cfg, warm_starts)


def _parametric_cut(graph, g, lam):
    """Minimize vol_g(C) - lam * assoc(C) over all C via one s-t min-cut.

    Capacities: source->j with 2*lam*d_j, j->sink with 2*g_j, and 2*lam*w_ij
    inside the graph; the cut for a candidate C equals
    2*lam*vol_d(V) + 2*(vol_g(C) - lam*assoc(C)), so the minimum-cut source
    side minimizes the parametric objective.
    """
    n = graph.n
    net = FlowNetwork(n + 2)
    s, t = n, n + 1
    for u, v, w in zip(graph.edge_u, graph.edge_v, graph.edge_w):
        cap = 2.0 * lam * w
        net.add_edge(int(u), int(v), cap, cap)
    for j in range(n):
        net.add_edge(s, j, 2.0 * lam * graph.degrees[j], 0.0)
        net.add_edge(j, t, 2.0 * g[j], 0.0)
    flow = net.max_flow(s, t)
    side = net.min_cut_source_side(s)
    members = np.nonzero(side[:n])[0]
    sub_value = 0.5 * flow - lam * float(graph.degrees.sum())
    return members, sub_value


def dinkelbach_max_density(graph, g=None, tol=1e-9, max_iter=100):
    """Globally optimal unconstrained density: minimize vol_g(C)/assoc(C).

    Parametric root finding: at each weight lam, the subproblem
    min_C vol_g(C) - lam*assoc(C) is an s-t minimum cut; lam strictly
    decreases until the subproblem value reaches zero, which certifies
    global optimality.  Returns (set, ratio); the maximum density is
    assoc/vol_g = 1/ratio.
    """
    if graph.num_edges == 0:
        raise ValueError("density is undefined on a graph without edges")
    g = as_vertex_weights(g if g is not None else np.ones(graph.n), graph.n)
    everything = np.arange(graph.n)
    best = everything
    lam = volume(g, everything) / assoc_value(graph, everything)
    scale = max(1.0, float(g.sum()))
    for _ in range(max_iter):
        members, sub_value = _parametric_cut(graph, g, lam)
        if sub_value >= -tol * scale or members.size == 0:
            break
        assoc = assoc_value(graph, members)
        if assoc <= 0:
            break
        lam_new = volume(g, members) / assoc
        if lam_new >= lam - tol * max(1.0, lam):
            break
        best, lam = members, lam_new
    return best, lam
