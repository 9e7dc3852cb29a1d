"""Graph view of a square max-plus matrix.

A finite entry [A]_ij induces an arc (j, i): the first subscript names the
final vertex. Irreducibility is strong connectivity of that graph; the
unique eigenvalue of an irreducible matrix is the maximum cycle mean,
computed here by Karp's dynamic program per strongly connected component.
The critical graph (circuits attaining the mean) is obtained through the
metric matrix of the normalized A_lambda, and the asymptotic period of the
power sequence is measured by a direct scan of the powers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from tropigait import _backend
from tropigait.errors import (
    AllEpsilonVector,
    BadExponent,
    DimensionMismatch,
    NotIrreducible,
)
from tropigait.maxplus_core import (
    EPSILON,
    MaxPlusMatrix,
    entries_close,
    is_epsilon,
    mpow_scalar,
    tolerance,
)


@dataclass(frozen=True)
class PrecedenceGraph:
    """Nodes 1..n and one weighted arc (source, target) per finite entry."""

    node_count: int
    arcs: tuple[tuple[int, int, float], ...]

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "arcs": [
                {"source": j, "target": i, "weight": w} for (j, i, w) in self.arcs
            ],
        }


@dataclass(frozen=True)
class CriticalGraphReport:
    eigenvalue: float
    critical_nodes: tuple[int, ...]
    critical_arcs: tuple[tuple[int, int, float], ...]
    scc_count: int
    scc_membership: dict

    def to_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "critical_nodes": list(self.critical_nodes),
            "critical_arcs": [
                {"source": j, "target": i, "weight": w}
                for (j, i, w) in self.critical_arcs
            ],
            "scc_count": self.scc_count,
            "scc_membership": {str(k): v for k, v in self.scc_membership.items()},
        }


@dataclass(frozen=True)
class CouplingReport:
    eigenvalue: float
    cyclicity: int | None
    coupling_time: int | None
    power_cap_hit: bool

    def to_dict(self) -> dict:
        return {
            "eigenvalue": "-inf" if is_epsilon(self.eigenvalue) else self.eigenvalue,
            "cyclicity": self.cyclicity,
            "coupling_time": self.coupling_time,
            "power_cap_hit": self.power_cap_hit,
        }


def precedence_graph(a: MaxPlusMatrix) -> PrecedenceGraph:
    a = MaxPlusMatrix(a)
    a._require_square()
    arcs = []
    grid = a.asarray()
    for i in range(a.rows):
        for j in range(a.cols):
            w = grid[i, j]
            if not is_epsilon(w):
                arcs.append((j + 1, i + 1, float(w)))
    return PrecedenceGraph(a.rows, tuple(arcs))


def _scc(a: MaxPlusMatrix) -> tuple[int, np.ndarray]:
    # adjacency[u, v] = 1 iff arc u -> v, i.e. [A]_vu finite
    adjacency = csr_matrix(np.isfinite(a.asarray()).T)
    return connected_components(adjacency, directed=True, connection="strong")


def is_irreducible(a: MaxPlusMatrix) -> bool:
    a = MaxPlusMatrix(a)
    a._require_square()
    n_comp, _ = _scc(a)
    return n_comp == 1


def max_cycle_mean(a: MaxPlusMatrix) -> float:
    """Maximum mean weight over all elementary circuits; epsilon if acyclic.

    Karp's recursion is run inside each strongly connected component from its
    lowest-index node, and the max-min formula is maximized over components.
    """
    a = MaxPlusMatrix(a)
    a._require_square()
    grid = a.asarray()
    n_comp, labels = _scc(a)
    best = EPSILON
    for comp in range(n_comp):
        nodes = np.where(labels == comp)[0]
        nc = len(nodes)
        # arc u -> v inside the component carries [A]_vu
        w = grid[np.ix_(nodes, nodes)].T.copy()
        if nc == 1 and is_epsilon(w[0, 0]):
            continue
        levels = np.full((nc + 1, nc), EPSILON)
        levels[0, 0] = 0.0
        for k in range(1, nc + 1):
            levels[k] = _backend.mul(levels[k - 1 : k], w)[0]
        last = levels[nc]
        reached = np.isfinite(last)
        if not reached.any():
            continue
        # min over k of (D_n(v) - D_k(v)) / (n - k), then max over v
        diffs = last[reached][None, :] - levels[:-1, reached]
        quotients = diffs / (nc - np.arange(nc))[:, None]
        best = max(best, float(np.max(np.min(quotients, axis=0))))
    return best


def _normalized_star(a: MaxPlusMatrix, lam: float):
    a_lam = MaxPlusMatrix._wrap(a.asarray() - lam)
    star = a_lam.star()
    plus = a_lam.otimes(star)
    return a_lam, star, plus


def critical_graph(a: MaxPlusMatrix, tol: float | None = None) -> CriticalGraphReport:
    """Critical nodes, arcs, and the component structure they form.

    Node i is critical iff [A_lambda+]_ii = 0; arc (j, i) is critical iff
    [A_lambda]_ij + [A_lambda*]_ji = 0 with both endpoints critical.
    """
    a = MaxPlusMatrix(a)
    if not is_irreducible(a):
        raise NotIrreducible("critical graph requires an irreducible matrix")
    tol = tolerance() if tol is None else tol
    lam = max_cycle_mean(a)
    if is_epsilon(lam):
        # single node, no arcs: no circuits to be critical
        return CriticalGraphReport(lam, (), (), 0, {})
    a_lam, star, plus = _normalized_star(a, lam)
    diag = np.diagonal(plus.asarray())
    critical_nodes = tuple(int(i) + 1 for i in np.where(np.abs(diag) <= tol)[0])
    node_set = set(critical_nodes)
    grid = a.asarray()
    norm = a_lam.asarray()
    back = star.asarray()
    critical_arcs = []
    for i in range(a.rows):
        for j in range(a.cols):
            if is_epsilon(grid[i, j]):
                continue
            if (i + 1) in node_set and (j + 1) in node_set:
                if abs(norm[i, j] + back[j, i]) <= tol:
                    critical_arcs.append((j + 1, i + 1, float(grid[i, j])))
    # strongly connected components of the critical subgraph
    index = {node: pos for pos, node in enumerate(critical_nodes)}
    adj = np.zeros((len(critical_nodes), len(critical_nodes)), dtype=bool)
    for (j, i, _) in critical_arcs:
        adj[index[j], index[i]] = True
    if critical_nodes:
        scc_count, labels = connected_components(
            csr_matrix(adj), directed=True, connection="strong"
        )
        membership = {node: int(labels[pos]) for node, pos in index.items()}
    else:
        scc_count, membership = 0, {}
    return CriticalGraphReport(
        float(lam), critical_nodes, tuple(critical_arcs), int(scc_count), membership
    )


def eigenvector_from_critical(a: MaxPlusMatrix, tol: float | None = None) -> MaxPlusMatrix:
    """A column of A_lambda* at a critical node; satisfies A v = lambda v.

    The lowest-index critical node is used, making the result deterministic.
    """
    a = MaxPlusMatrix(a)
    if not is_irreducible(a):
        raise NotIrreducible("eigenvectors here require an irreducible matrix")
    tol = tolerance() if tol is None else tol
    lam = max_cycle_mean(a)
    if is_epsilon(lam):
        # 1x1 all-epsilon matrix: any finite scalar is an eigenvector
        return MaxPlusMatrix.column([0.0])
    _, star, plus = _normalized_star(a, lam)
    diag = np.diagonal(plus.asarray())
    critical = np.where(np.abs(diag) <= tol)[0]
    col = int(critical[0])
    return MaxPlusMatrix._wrap(star.asarray()[:, col : col + 1].copy())


def verify_eigenpair(
    a: MaxPlusMatrix, lam: float, v: MaxPlusMatrix, tol: float | None = None
) -> bool:
    """True iff A otimes v = lambda otimes v entrywise within tolerance."""
    a = MaxPlusMatrix(a)
    v = v if isinstance(v, MaxPlusMatrix) else MaxPlusMatrix.column(v)
    if v.cols != 1 or v.rows != a.cols or not a.is_square:
        raise DimensionMismatch(
            f"need square A and a matching column, got {a.shape} and {v.shape}"
        )
    if np.isneginf(v.asarray()).all():
        raise AllEpsilonVector("eigenvector candidates need a finite entry")
    lhs = a.otimes(v).asarray()
    rhs = v.asarray() + float(lam)
    return entries_close(lhs, rhs, tolerance() if tol is None else tol)


def coupling_params(
    a: MaxPlusMatrix, p_max: int | None = None, tol: float | None = None
) -> CouplingReport:
    """Smallest cyclicity c in 1..n and coupling time k0 with
    A**(p+c) = lambda**c otimes A**p for every p in [k0, p_max - c].

    Powers are scanned directly. power_cap_hit distinguishes "not found
    below the cap" from "does not exist".
    """
    a = MaxPlusMatrix(a)
    if not is_irreducible(a):
        raise NotIrreducible("coupling analysis requires an irreducible matrix")
    n = a.rows
    if p_max is None:
        p_max = 4 * n * n
    if not isinstance(p_max, (int, np.integer)) or p_max < 2:
        raise BadExponent(f"p_max must be an integer >= 2, got {p_max!r}")
    tol = tolerance() if tol is None else tol
    lam = max_cycle_mean(a)
    c_range = range(1, min(n, p_max) + 1)
    shifts = {c: mpow_scalar(lam, c) for c in c_range}
    # One forward pass over the powers with a sliding window: k0 for a given
    # c is one past the last exponent where the identity fails.
    last_fail = {c: -1 for c in c_range}
    window = [MaxPlusMatrix.identity(n).asarray()]
    for q in range(1, p_max + 1):
        window.append(_backend.mul(window[-1], a.asarray()))
        if len(window) > n + 2:
            window.pop(0)
        for c in c_range:
            if q >= c and not entries_close(
                window[-1], window[-1 - c] + shifts[c], tol
            ):
                last_fail[c] = q - c
    for c in c_range:
        k0 = last_fail[c] + 1
        if k0 <= p_max - c:
            return CouplingReport(float(lam), c, k0, False)
    return CouplingReport(float(lam), None, None, True)
