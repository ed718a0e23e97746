"""
Graph Core Module for t-Improper Colouring

Contains the immutable Graph type, vertex-set helpers, the seeded G(n,p) and
G(n,m) samplers, and degree / induced-subgraph primitives.

Vertex sets are passed around as frozensets of labels; solvers work on the
equivalent Python-int bitsets (bit v set iff vertex v is a member).
"""

import logging
import math
from fractions import Fraction

import networkx as nx
import numpy as np

from modules.errors import ValidationError
from modules.rng import check_seed, uniform_block

logger = logging.getLogger(__name__)


class Graph:
    """
    Undirected simple graph on vertices 0..n-1

    The adjacency matrix is a read-only symmetric boolean numpy array with a
    zero diagonal. Row bitsets are derived lazily for the combinatorial solvers.
    """

    __slots__ = ("_n", "_adj", "_rows")

    def __init__(self, adj):
        adj = np.array(adj, dtype=bool, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValidationError(f"adjacency must be square, got shape {adj.shape}")
        if adj.diagonal().any():
            raise ValidationError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValidationError("adjacency must be symmetric")
        adj.flags.writeable = False
        self._n = adj.shape[0]
        self._adj = adj
        self._rows = None

    @property
    def n(self):
        return self._n

    @property
    def adj(self):
        return self._adj

    @property
    def rows(self):
        """Tuple of neighbourhood bitsets, one Python int per vertex."""
        if self._rows is None:
            if self._n == 0:
                self._rows = ()
            else:
                packed = np.packbits(self._adj, axis=1, bitorder="little")
                self._rows = tuple(
                    int.from_bytes(row.tobytes(), "little") for row in packed
                )
        return self._rows

    def has_edge(self, u, v):
        return bool(self._adj[u, v])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._adj, other._adj)

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self._n}, m={edge_count(self)})"


def _check_vertex_count(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValidationError(f"vertex count must be a non-negative integer, got {n!r}")
    return int(n)


def new_graph(n, edges):
    """
    Build a graph from an explicit edge list

    Parameters:
    n: vertex count
    edges: iterable of (u, v) pairs; duplicates and reversed pairs collapse

    Returns:
    Graph
    """
    n = _check_vertex_count(n)
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise ValidationError(f"self-loop at vertex {u}")
        adj[u, v] = adj[v, u] = True
    return Graph(adj)


def empty_graph(n):
    return new_graph(n, [])


def complete_graph(n):
    adj = np.ones((n, n), dtype=bool)
    np.fill_diagonal(adj, False)
    return Graph(adj)


def path_graph(n):
    return new_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    if n < 3:
        raise ValidationError("a cycle needs at least 3 vertices")
    return new_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n):
    """Star on n vertices with centre 0."""
    return new_graph(n, [(0, i) for i in range(1, n)])


def pair_count(n):
    return n * (n - 1) // 2


def sample_gnp(n, p, seed):
    """
    Sample G(n,p)

    Each pair (u, v), u < v, consumes one uniform draw in row-major pair
    order (0,1), (0,2), ..., (n-2,n-1) and is an edge iff the draw is < p.

    Parameters:
    n: vertex count
    p: edge probability in [0, 1]
    seed: 64-bit unsigned seed

    Returns:
    Graph
    """
    n = _check_vertex_count(n)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    seed = check_seed(seed)
    adj = np.zeros((n, n), dtype=bool)
    rows, cols = np.triu_indices(n, k=1)
    present = uniform_block(seed, 0, rows.size) < p
    adj[rows[present], cols[present]] = True
    adj[cols[present], rows[present]] = True
    return Graph(adj)


def sample_gnm(n, m, seed):
    """
    Sample a uniform m-edge graph on n vertices

    Runs the first m steps of a forward Fisher-Yates shuffle over the
    row-major pair array and keeps the prefix, so the edge set for m - 1 is
    contained in the edge set for m under the same seed.

    Parameters:
    n: vertex count
    m: edge count, 0 <= m <= C(n,2)
    seed: 64-bit unsigned seed

    Returns:
    Graph
    """
    n = _check_vertex_count(n)
    total = pair_count(n)
    if not 0 <= m <= total:
        raise ValidationError(f"m must lie in [0, C({n},2)] = [0, {total}], got {m}")
    seed = check_seed(seed)
    draws = uniform_block(seed, 0, m)
    swapped = {}
    chosen = np.empty(m, dtype=np.int64)
    for i in range(m):
        j = i + min(int(draws[i] * (total - i)), total - i - 1)
        chosen[i] = swapped.get(j, j)
        swapped[j] = swapped.get(i, i)
    rows, cols = np.triu_indices(n, k=1)
    adj = np.zeros((n, n), dtype=bool)
    adj[rows[chosen], cols[chosen]] = True
    adj[cols[chosen], rows[chosen]] = True
    return Graph(adj)


def vertex_mask(vertices):
    """Bitset of an iterable of vertex labels."""
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    return mask


def mask_members(mask):
    """Ascending vertex labels of a bitset."""
    members = []
    while mask:
        low = mask & -mask
        members.append(low.bit_length() - 1)
        mask ^= low
    return members


def as_vertex_set(G, S=None):
    """
    Normalise a vertex-set argument

    Parameters:
    G: host graph
    S: iterable of labels, or None for the full vertex set

    Returns:
    frozenset: validated members
    """
    if S is None:
        return frozenset(range(G.n))
    members = frozenset(int(v) for v in S)
    bad = [v for v in members if not 0 <= v < G.n]
    if bad:
        raise ValidationError(f"vertices {sorted(bad)} are not in 0..{G.n - 1}")
    return members


def edge_count(G):
    return int(np.count_nonzero(G.adj)) // 2


def edges(G):
    """Sorted list of (u, v) pairs with u < v."""
    rows, cols = np.nonzero(np.triu(G.adj, k=1))
    return [(int(u), int(v)) for u, v in zip(rows, cols)]


def degrees(G):
    return G.adj.sum(axis=1).astype(np.int64)


def neighbours(G, v):
    return frozenset(int(u) for u in np.flatnonzero(G.adj[v]))


def max_degree(G):
    """Maximum degree; 0 for the empty vertex set."""
    if G.n == 0:
        return 0
    return int(degrees(G).max())


def avg_degree(G, S=None):
    """
    Average degree of the subgraph induced on S, as an exact fraction

    Parameters:
    G: Graph
    S: non-empty vertex set (None means all vertices)

    Returns:
    Fraction: 2 |E(G[S])| / |S|
    """
    members = as_vertex_set(G, S)
    if not members:
        raise ValidationError("average degree of an empty vertex set is undefined")
    mask = vertex_mask(members)
    rows = G.rows
    twice_edges = sum((rows[v] & mask).bit_count() for v in members)
    return Fraction(twice_edges, len(members))


def induced_subgraph(G, S):
    """
    Subgraph induced on S, relabelled by increasing original label

    Parameters:
    G: Graph
    S: vertex set

    Returns:
    Graph on |S| vertices
    """
    index = sorted(as_vertex_set(G, S))
    return Graph(G.adj[np.ix_(index, index)])


def to_networkx(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(edges(G))
    return H


def from_networkx(H):
    """
    Convert a networkx graph, relabelling nodes by sorted order

    Parameters:
    H: networkx.Graph (self-loops are rejected)

    Returns:
    Graph
    """
    try:
        nodes = sorted(H.nodes())
    except TypeError:
        nodes = list(H.nodes())
    index = {node: i for i, node in enumerate(nodes)}
    return new_graph(len(nodes), [(index[u], index[v]) for u, v in H.edges()])
