"""Shared generators and independent oracles for the test suite."""

import numpy as np

import fracset as fs
from fracset.inner import objective_value


def er_graph(n, p, rng, min_edges=1):
    """Erdos-Renyi graph with unit weights; resamples until it has edges."""
    while True:
        edges = [(i, j, 1.0) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < p]
        if len(edges) >= min_edges:
            return fs.Graph.from_edges(n, edges)


def weighted_graph(n, p, rng, min_edges=1):
    while True:
        edges = [(i, j, float(rng.uniform(0.1, 2.0)))
                 for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        if len(edges) >= min_edges:
            return fs.Graph.from_edges(n, edges)


def planted_partition(sizes, p_in, p_out, rng):
    n = sum(sizes)
    block = np.repeat(np.arange(len(sizes)), sizes)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p = p_in if block[i] == block[j] else p_out
            if rng.random() < p:
                edges.append((i, j, 1.0))
    return fs.Graph.from_edges(n, edges)


def all_subsets(n, nonempty=False):
    for mask in range(1 if nonempty else 0, 1 << n):
        yield np.array([b for b in range(n) if (mask >> b) & 1], dtype=np.int64)


def ncut_functions(graph):
    deg = graph.degrees
    total = float(deg.sum())

    def num(C):
        return fs.cut_value(graph, C)

    def den(C):
        vol = fs.volume(deg, C)
        return vol * (total - vol)

    return num, den


def density_functions(graph, g=None):
    g = np.ones(graph.n) if g is None else g

    def num(C):
        return fs.volume(g, C)

    def den(C):
        return fs.assoc_value(graph, C)

    return num, den


def inner_grid_minimum(problem, steps=1600):
    """Direction-grid oracle for inner problems with at most 3 vertices.

    The objective is positively one-homogeneous, so its minimum over the
    nonnegative part of the unit ball is min(0, minimum over the sphere).
    The sphere octant is sampled on an angular grid.
    """
    m = problem.m
    if m == 1:
        return min(0.0, objective_value(problem, np.array([1.0])))
    if m == 2:
        th = np.linspace(0.0, np.pi / 2, steps)
        F = np.vstack([np.cos(th), np.sin(th)])
    elif m == 3:
        th = np.linspace(0.0, np.pi / 2, steps)
        ph = np.linspace(0.0, np.pi / 2, steps)
        TH, PH = np.meshgrid(th, ph)
        F = np.vstack([(np.sin(PH) * np.cos(TH)).ravel(),
                       (np.sin(PH) * np.sin(TH)).ravel(),
                       np.cos(PH).ravel()])
    else:
        raise ValueError("grid oracle supports at most 3 vertices")
    vals = problem.c2 @ F
    if problem.c1:
        vals = vals + problem.c1 * F.max(axis=0)
    if problem.mu and problem.edge_w.size:
        for u, v, w in zip(problem.edge_u, problem.edge_v, problem.edge_w):
            vals = vals + problem.mu * w * np.abs(F[u] - F[v])
    return min(0.0, float(vals.min()))


def random_inner_problem(rng, m=None, scale_to_unit_lipschitz=True):
    """Random small inner problem; coefficients scaled to tame the Lipschitz
    constant of the objective so the grid oracle is accurate at 1e-3."""
    m = int(rng.integers(1, 4)) if m is None else m
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    chosen = [pq for pq in pairs if rng.random() < 0.7]
    eu = np.array([p for p, _ in chosen], dtype=np.int64)
    ev = np.array([q for _, q in chosen], dtype=np.int64)
    ew = rng.uniform(0.1, 1.0, size=len(chosen))
    c1 = float(rng.uniform(0.0, 1.0))
    c2 = rng.uniform(-1.0, 1.0, size=m)
    mu = float(rng.uniform(0.0, 1.0))
    if scale_to_unit_lipschitz:
        lip = c1 + float(np.linalg.norm(c2)) + 2.0 * mu * float(ew.sum())
        if lip > 1.0:
            c1, c2, mu = c1 / lip, c2 / lip, mu / lip
    return fs.InnerProblem(c1, c2, mu, eu, ev, ew)
