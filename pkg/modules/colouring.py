"""
Colouring Module for t-Improper Colouring

Contains exact and heuristic solvers for the t-dependence number alpha^t and
the t-improper chromatic number chi^t, the greedy peeling and Lovasz
decomposition constructions, colouring verification and the bounds report.

A set is t-dependent when it induces a subgraph of maximum degree at most t.
The combinatorial searches work on Python-int bitsets taken from Graph.rows.
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from modules.errors import CapExceededError, ValidationError
from modules.graph_core import as_vertex_set, mask_members, max_degree, vertex_mask

logger = logging.getLogger(__name__)

CHI_EXACT_CAP = 24
ALPHA_EXACT_CAP = 80
ALPHA_NODE_LIMIT = 50_000
EXHAUSTIVE_CUTOFF = 20
BRUTEFORCE_ALPHA_MAX_N = 20
BRUTEFORCE_CHI_MAX_N = 10


@dataclass(frozen=True)
class Colouring:
    """
    Vertex -> class assignment

    Class indices are exactly 0..class_count-1 and every class is non-empty.
    """

    assignment: tuple
    class_count: int

    def __post_init__(self):
        used = set(self.assignment)
        if used != set(range(self.class_count)):
            raise ValidationError(
                f"class indices {sorted(used)} are not exactly 0..{self.class_count - 1}"
            )

    @classmethod
    def from_assignment(cls, assignment):
        """Build a colouring, compacting class indices in first-use order."""
        relabel = {}
        compact = []
        for c in assignment:
            compact.append(relabel.setdefault(int(c), len(relabel)))
        return cls(tuple(compact), len(relabel))

    def classes(self):
        """List of colour classes as frozensets, indexed by class."""
        members = [[] for _ in range(self.class_count)]
        for v, c in enumerate(self.assignment):
            members[c].append(v)
        return [frozenset(m) for m in members]


def classes(c):
    return c.classes()


def _check_t(t):
    if isinstance(t, bool) or int(t) != t or t < 0:
        raise ValidationError(f"t must be a non-negative integer, got {t!r}")
    return int(t)


def _mask_is_t_dependent(rows, mask, t):
    m = mask
    while m:
        low = m & -m
        if (rows[low.bit_length() - 1] & mask).bit_count() > t:
            return False
        m ^= low
    return True


def is_t_dependent(G, S, t):
    """
    Check whether S induces a subgraph of maximum degree at most t

    Parameters:
    G: Graph
    S: vertex set
    t: non-negative integer

    Returns:
    bool
    """
    t = _check_t(t)
    return _mask_is_t_dependent(G.rows, vertex_mask(as_vertex_set(G, S)), t)


def verify_colouring(G, t, c):
    """True iff c covers every vertex of G and each class is t-dependent."""
    t = _check_t(t)
    if len(c.assignment) != G.n:
        return False
    class_masks = [0] * c.class_count
    for v, k in enumerate(c.assignment):
        class_masks[k] |= 1 << v
    return all(_mask_is_t_dependent(G.rows, mask, t) for mask in class_masks)


def degeneracy_order(G):
    """
    Smallest-last order: repeatedly remove a vertex of minimum remaining degree

    Returns:
    list: vertices in removal order (ties by label)
    """
    rows = G.rows
    remaining = (1 << G.n) - 1
    degree = [row.bit_count() for row in rows]
    order = []
    for _ in range(G.n):
        v = min(mask_members(remaining), key=lambda u: (degree[u], u))
        order.append(v)
        remaining ^= 1 << v
        for u in mask_members(rows[v] & remaining):
            degree[u] -= 1
    return order


def _greedy_dependent_mask(rows, pool, t, target=None, first=None):
    """Insertion-maximal t-dependent subset of pool, ascending degree-in-pool order."""
    members = mask_members(pool)
    members.sort(key=lambda v: ((rows[v] & pool).bit_count(), v))
    if first is not None:
        members.remove(first)
        members.insert(0, first)
    chosen = 0
    saturated = 0
    inside = {}
    size = 0
    for v in members:
        nbrs = rows[v] & chosen
        count = nbrs.bit_count()
        if count > t or nbrs & saturated:
            continue
        chosen |= 1 << v
        size += 1
        inside[v] = count
        if count == t:
            saturated |= 1 << v
        for u in mask_members(nbrs):
            inside[u] += 1
            if inside[u] == t:
                saturated |= 1 << u
        if target is not None and size >= target:
            break
    return chosen


def greedy_dependent_set(G, S, t, target=None):
    """
    Build a t-dependent subset of S by greedy insertion

    Members of S are scanned in ascending order of degree within S (ties by
    label); a vertex is inserted iff the set stays t-dependent.

    Parameters:
    G: Graph
    S: non-empty vertex set
    t: non-negative integer
    target: optional size at which to stop early

    Returns:
    frozenset: the chosen t-dependent set
    """
    t = _check_t(t)
    members = as_vertex_set(G, S)
    if not members:
        raise ValidationError("greedy_dependent_set needs a non-empty vertex set")
    return frozenset(mask_members(_greedy_dependent_mask(G.rows, vertex_mask(members), t, target)))


def greedy_peel_colouring(G, t):
    """
    Colour by peeling: each class is a greedy t-dependent set of the vertices left

    Parameters:
    G: Graph
    t: non-negative integer

    Returns:
    Colouring
    """
    t = _check_t(t)
    rows = G.rows
    assignment = [-1] * G.n
    remaining = (1 << G.n) - 1
    colour = 0
    while remaining:
        chosen = _greedy_dependent_mask(rows, remaining, t)
        for v in mask_members(chosen):
            assignment[v] = colour
        remaining &= ~chosen
        colour += 1
    return Colouring(tuple(assignment), colour)


def lovasz_bound(G, t):
    """Class count ceil((Delta + 1)/(t + 1)) used by the decomposition."""
    t = _check_t(t)
    return -(-(max_degree(G) + 1) // (t + 1))


def lovasz_decomposition(G, t, return_moves=False):
    """
    Partition into ceil((Delta+1)/(t+1)) t-dependent classes by local moves

    Start from the round-robin assignment v -> v mod m. While some vertex has
    more than t neighbours in its own class, move the lowest such vertex to the
    class where it has the fewest neighbours (ties to the lowest class). Each
    move strictly lowers the number of edges inside classes. Empty classes are
    dropped at the end.

    Parameters:
    G: Graph
    t: non-negative integer
    return_moves: also return the number of moves made

    Returns:
    Colouring, or (Colouring, int) with return_moves
    """
    t = _check_t(t)
    n = G.n
    if n == 0:
        result = Colouring((), 0)
        return (result, 0) if return_moves else result
    m = lovasz_bound(G, t)
    adj = G.adj.astype(np.int32)
    cls = np.arange(n) % m
    counts = adj @ np.eye(m, dtype=np.int32)[cls]
    everyone = np.arange(n)
    moves = 0
    while True:
        violators = np.flatnonzero(counts[everyone, cls] > t)
        if violators.size == 0:
            break
        v = int(violators[0])
        source, target = int(cls[v]), int(np.argmin(counts[v]))
        counts[:, source] -= adj[v]
        counts[:, target] += adj[v]
        cls[v] = target
        moves += 1
    logger.debug("lovasz decomposition: n=%d, t=%d, m=%d, moves=%d", n, t, m, moves)
    result = Colouring.from_assignment(cls.tolist())
    return (result, moves) if return_moves else result


def _clique_cover_bound(rows, pool, t):
    """Sum over a greedy clique cover of pool of min(|clique|, t + 1)."""
    bound = 0
    cap = t + 1
    while pool:
        low = pool & -pool
        pool ^= low
        size = 1
        candidates = pool & rows[low.bit_length() - 1]
        while candidates:
            nxt = candidates & -candidates
            u = nxt.bit_length() - 1
            pool ^= nxt
            size += 1
            candidates &= rows[u]
        bound += min(size, cap)
    return bound


def alpha_t_upper_bound(G, t):
    """Clique-cover upper bound on alpha^t, cheap at any size."""
    t = _check_t(t)
    return _clique_cover_bound(G.rows, (1 << G.n) - 1, t)


class _SearchLimitReached(Exception):
    pass


class _AlphaSearch:
    """
    Branch and bound for a maximum t-dependent set on relabelled bitsets

    A node holds the chosen set S and the candidate pool P. When S grows,
    candidates with more than t neighbours in S, or adjacent to a saturated
    member of S (one that already has t neighbours in S), are cut. Before
    branching:

    - every member of a set of size best + 1 has at least best - t
      non-neighbours in S | P, so candidates short of that are dropped;
    - candidates adjacent to no member of S are bounded by a clique cover;
    - the other candidates are bounded twice. A member u of S accepts at
      most t - deg_S(u) new neighbours, and the sum of those budgets caps
      the total |N(w) & S| over the new members w.

    Branching takes the candidate with the most neighbours in S (then in P),
    includes it first and excludes it afterwards.
    """

    def __init__(self, rows, t, node_limit=None):
        self.rows = rows
        self.t = t
        self.node_limit = node_limit
        self.inside = [0] * len(rows)
        self.best = 0
        self.best_mask = 0
        self.nodes = 0

    def run(self, incumbent):
        self.best_mask = incumbent
        self.best = incumbent.bit_count()
        self._expand(0, 0, 0, (1 << len(self.rows)) - 1)
        return self.best_mask

    def _reduce(self, chosen, pool):
        need = self.best - self.t
        if need <= 0:
            return pool
        rows = self.rows
        universe = chosen | pool
        count = universe.bit_count()
        changed = True
        while changed:
            changed = False
            m = pool
            while m:
                low = m & -m
                m ^= low
                if (rows[low.bit_length() - 1] & universe).bit_count() > count - 1 - need:
                    pool ^= low
                    universe ^= low
                    count -= 1
                    changed = True
        m = chosen
        while m:
            low = m & -m
            m ^= low
            if (rows[low.bit_length() - 1] & universe).bit_count() > count - 1 - need:
                return None
        return pool

    def _bound(self, chosen, pool):
        rows, t, inside = self.rows, self.t, self.inside
        members = mask_members(chosen)
        touched = 0
        for u in members:
            touched |= rows[u]
        free = pool & ~touched
        rest = pool & touched
        if not rest:
            return _clique_cover_bound(rows, free, t)
        slack = {u: t - inside[u] for u in members}
        partition = 0
        left = rest
        for u in sorted(members, key=slack.__getitem__):
            group = rows[u] & left
            if group:
                partition += min(group.bit_count(), slack[u])
                left ^= group
        budget = sum(slack.values())
        shared = 0
        for cost in sorted((rows[w] & chosen).bit_count() for w in mask_members(rest)):
            if cost > budget:
                break
            budget -= cost
            shared += 1
        return _clique_cover_bound(rows, free, t) + min(partition, shared)

    def _pick(self, chosen, pool):
        rows = self.rows
        best_key = None
        pick = 0
        m = pool
        while m:
            low = m & -m
            m ^= low
            row = rows[low.bit_length() - 1]
            key = ((row & chosen).bit_count(), (row & pool).bit_count())
            if best_key is None or key > best_key:
                best_key, pick = key, low
        return pick

    def _expand(self, chosen, saturated, size, pool):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _SearchLimitReached
        rows, t, inside = self.rows, self.t, self.inside
        if size > self.best:
            self.best, self.best_mask = size, chosen
        while pool:
            pool = self._reduce(chosen, pool)
            if pool is None or size + pool.bit_count() <= self.best:
                return
            if _mask_is_t_dependent(rows, chosen | pool, t):
                self.best, self.best_mask = size + pool.bit_count(), chosen | pool
                return
            if size + self._bound(chosen, pool) <= self.best:
                return
            low = self._pick(chosen, pool)
            pool ^= low
            v = low.bit_length() - 1
            nbrs = rows[v] & chosen
            # include v
            new_chosen = chosen | low
            new_saturated = saturated
            touched = mask_members(nbrs)
            for u in touched:
                inside[u] += 1
                if inside[u] == t:
                    new_saturated |= 1 << u
            inside[v] = len(touched)
            if inside[v] == t:
                new_saturated |= low
            new_pool = 0
            rest = pool
            while rest:
                bit = rest & -rest
                rest ^= bit
                row = rows[bit.bit_length() - 1]
                if not row & new_saturated and (row & new_chosen).bit_count() <= t:
                    new_pool |= bit
            self._expand(new_chosen, new_saturated, size + 1, new_pool)
            for u in touched:
                inside[u] -= 1
            inside[v] = 0
            # exclude v: continue the loop with v gone from the pool


def _greedy_incumbent(rows, t):
    """Best greedy set over every choice of forced first vertex."""
    full = (1 << len(rows)) - 1
    best = _greedy_dependent_mask(rows, full, t)
    for v in range(len(rows)):
        found = _greedy_dependent_mask(rows, full, t, first=v)
        if found.bit_count() > best.bit_count():
            best = found
    return best


def alpha_t_bruteforce(G, t):
    """
    Exhaustive maximum t-dependent set, largest subsets first

    Returns:
    tuple: (size, frozenset witness)
    """
    t = _check_t(t)
    if G.n > BRUTEFORCE_ALPHA_MAX_N:
        raise CapExceededError(f"brute force is limited to n <= {BRUTEFORCE_ALPHA_MAX_N}")
    rows = G.rows
    for size in range(G.n, -1, -1):
        for combo in itertools.combinations(range(G.n), size):
            if _mask_is_t_dependent(rows, vertex_mask(combo), t):
                return size, frozenset(combo)
    return 0, frozenset()


def _hereditary_search(rows, t):
    """Enumerate t-dependent sets by extension, cut only by size + remaining."""
    best = [0, 0]
    n = len(rows)

    def extend(chosen, size, start):
        if size > best[0]:
            best[0], best[1] = size, chosen
        for v in range(start, n):
            if size + n - v <= best[0]:
                return
            bigger = chosen | (1 << v)
            if _mask_is_t_dependent(rows, bigger, t):
                extend(bigger, size + 1, v + 1)

    extend(0, 0, 0)
    return best[1]


@dataclass(frozen=True)
class AlphaResult:
    """Outcome of a budgeted alpha^t search; size is a lower bound unless exact."""

    size: int
    witness: frozenset
    exact: bool
    nodes: int = 0


def _solve_alpha(G, t, method, node_limit):
    if method == "auto":
        method = "exhaustive" if G.n <= EXHAUSTIVE_CUTOFF else "branch_and_bound"
    order = degeneracy_order(G)
    position = {v: i for i, v in enumerate(order)}
    rows = tuple(
        vertex_mask(position[u] for u in mask_members(G.rows[v])) for v in order
    )
    exact = True
    nodes = 0
    if method == "exhaustive":
        found = _hereditary_search(rows, t)
    elif method == "branch_and_bound":
        search = _AlphaSearch(rows, t, node_limit)
        try:
            found = search.run(_greedy_incumbent(rows, t))
        except _SearchLimitReached:
            found = search.best_mask
            exact = False
        nodes = search.nodes
        logger.debug("alpha_t branch and bound: n=%d, t=%d, nodes=%d, exact=%s", G.n, t, nodes, exact)
    else:
        raise ValidationError(f"unknown method {method!r}")
    witness = frozenset(order[i] for i in mask_members(found))
    return AlphaResult(len(witness), witness, exact, nodes)


def alpha_t_exact(G, t, method="auto", cap=ALPHA_EXACT_CAP, node_limit=None):
    """
    Maximum size of a t-dependent set, with a witness

    Branch and bound over vertices relabelled in degeneracy order (see
    _AlphaSearch for the cuts and bounds), started from the best multi-start
    greedy set. Graphs with n <= EXHAUSTIVE_CUTOFF use plain hereditary
    enumeration under method 'auto'.

    Parameters:
    G: Graph
    t: non-negative integer
    method: 'auto', 'branch_and_bound' or 'exhaustive'
    cap: largest n accepted
    node_limit: optional search-node budget; CapExceededError when spent

    Returns:
    tuple: (size, frozenset witness)
    """
    t = _check_t(t)
    if G.n > cap:
        raise CapExceededError(f"alpha_t_exact is capped at n = {cap}, got n = {G.n}")
    if G.n == 0:
        return 0, frozenset()
    result = _solve_alpha(G, t, method, node_limit)
    if not result.exact:
        raise CapExceededError(
            f"alpha_t_exact stopped after {node_limit} search nodes (n = {G.n}, t = {t})"
        )
    return result.size, result.witness


def alpha_t_search(G, t, node_limit=ALPHA_NODE_LIMIT, cap=ALPHA_EXACT_CAP):
    """
    alpha^t within a search-node budget

    Runs the alpha_t_exact search but stops after node_limit nodes and then
    returns the best set found with exact=False. Above cap only the greedy
    set is returned. Node counts are deterministic, so results reproduce.

    Parameters:
    G: Graph
    t: non-negative integer
    node_limit: search-node budget (None for no limit)
    cap: largest n searched

    Returns:
    AlphaResult
    """
    t = _check_t(t)
    if G.n == 0:
        return AlphaResult(0, frozenset(), True)
    if G.n > cap:
        witness = frozenset(mask_members(_greedy_dependent_mask(G.rows, (1 << G.n) - 1, t)))
        return AlphaResult(len(witness), witness, False)
    return _solve_alpha(G, t, "auto", node_limit)


class _ColourSearch:
    """Backtracking search for a t-improper colouring with at most k classes."""

    def __init__(self, rows, order, t, k):
        self.rows = rows
        self.order = order
        self.t = t
        self.k = k
        n = len(rows)
        self.assignment = [-1] * n
        self.class_mask = [0] * k
        self.saturated = [0] * k
        self.inside = [0] * n
        self.nodes = 0

    def _fits(self, v, c):
        nbrs = self.rows[v] & self.class_mask[c]
        return nbrs.bit_count() <= self.t and not nbrs & self.saturated[c]

    def _place(self, v, c):
        rows, t, inside = self.rows, self.t, self.inside
        nbrs = rows[v] & self.class_mask[c]
        touched = mask_members(nbrs)
        for u in touched:
            inside[u] += 1
            if inside[u] == t:
                self.saturated[c] |= 1 << u
        inside[v] = len(touched)
        if inside[v] == t:
            self.saturated[c] |= 1 << v
        self.class_mask[c] |= 1 << v
        self.assignment[v] = c
        return touched

    def _unplace(self, v, c, touched):
        t, inside = self.t, self.inside
        self.class_mask[c] &= ~(1 << v)
        self.saturated[c] &= ~(1 << v)
        for u in touched:
            if inside[u] == t:
                self.saturated[c] &= ~(1 << u)
            inside[u] -= 1
        inside[v] = 0
        self.assignment[v] = -1

    def _dead_end(self, index, used):
        # with every class opened, each uncoloured vertex must still fit somewhere
        if used < self.k:
            return False
        for w in self.order[index:]:
            if not any(self._fits(w, c) for c in range(self.k)):
                return True
        return False

    def solve(self, index=0, used=0):
        self.nodes += 1
        if index == len(self.order):
            return True
        if self._dead_end(index, used):
            return False
        v = self.order[index]
        # classes are opened in first-use order
        for c in range(min(used + 1, self.k)):
            if not self._fits(v, c):
                continue
            touched = self._place(v, c)
            if self.solve(index + 1, max(used, c + 1)):
                return True
            self._unplace(v, c, touched)
        return False


def find_k_colouring(G, t, k):
    """
    Search for a t-improper colouring with at most k classes

    Vertices are taken in descending degree order (ties by label); the first
    vertex goes to class 0 and new classes open in first-use order.

    Returns:
    Colouring or None
    """
    t = _check_t(t)
    if k <= 0:
        raise ValidationError("k should be greater than 0.")
    rows = G.rows
    order = sorted(range(G.n), key=lambda v: (-rows[v].bit_count(), v))
    search = _ColourSearch(rows, order, t, k)
    found = search.solve()
    logger.debug("k-colouring search: n=%d, t=%d, k=%d, nodes=%d, found=%s", G.n, t, k, search.nodes, found)
    if not found:
        return None
    return Colouring.from_assignment(search.assignment)


def chi_t_exact(G, t, cap=CHI_EXACT_CAP):
    """
    Smallest number of classes in a t-improper colouring, with a colouring

    Class counts are tried upward from ceil(n / alpha^t); the greedy peeling
    colouring supplies the incumbent.

    Parameters:
    G: Graph
    t: non-negative integer
    cap: largest n accepted

    Returns:
    tuple: (count, Colouring)
    """
    t = _check_t(t)
    if G.n > cap:
        raise CapExceededError(
            f"chi_t_exact is capped at n = {cap}, got n = {G.n}; use the greedy solver instead"
        )
    if G.n == 0:
        return 0, Colouring((), 0)
    incumbent = greedy_peel_colouring(G, t)
    alpha, _ = alpha_t_exact(G, t)
    for k in range(-(-G.n // alpha), incumbent.class_count):
        found = find_k_colouring(G, t, k)
        if found is not None:
            return found.class_count, found
    return incumbent.class_count, incumbent


def chromatic_number(G, cap=CHI_EXACT_CAP):
    """Proper chromatic number chi(G) = chi^0(G)."""
    return chi_t_exact(G, 0, cap=cap)[0]


def chi_t_bruteforce(G, t):
    """
    Exhaustive search over all set partitions (restricted growth strings)

    Returns:
    int: chi^t(G)
    """
    t = _check_t(t)
    n = G.n
    if n > BRUTEFORCE_CHI_MAX_N:
        raise CapExceededError(f"brute force is limited to n <= {BRUTEFORCE_CHI_MAX_N}")
    if n == 0:
        return 0
    rows = G.rows
    best = [n]

    def assign(v, masks):
        if len(masks) >= best[0]:
            return
        if v == n:
            if all(_mask_is_t_dependent(rows, mask, t) for mask in masks):
                best[0] = len(masks)
            return
        for i in range(len(masks)):
            masks[i] |= 1 << v
            assign(v + 1, masks)
            masks[i] &= ~(1 << v)
        masks.append(1 << v)
        assign(v + 1, masks)
        masks.pop()

    assign(0, [])
    return best[0]


@dataclass(frozen=True)
class BoundsReport:
    """
    Certified bounds on chi^t from the basic observations

    chi_lower_ratio = ceil(n / alpha) with alpha an upper bound on alpha^t
    (exact when alpha_exact). chi_lower_proper and chi_upper_proper need the
    proper chromatic number and are None above the exact cap.
    """

    n: int
    t: int
    delta: int
    alpha_t: int
    alpha_exact: bool
    chi_lower_ratio: int
    chi_upper_lovasz: int
    chi_upper_greedy: int
    chi_lower_proper: int | None = None
    chi_upper_proper: int | None = None
    chi_t: int | None = None

    def lower(self):
        candidates = [self.chi_lower_ratio]
        if self.chi_lower_proper is not None:
            candidates.append(self.chi_lower_proper)
        return max(candidates)

    def upper(self):
        candidates = [self.chi_upper_lovasz, self.chi_upper_greedy]
        if self.chi_upper_proper is not None:
            candidates.append(self.chi_upper_proper)
        return min(candidates)

    def to_dict(self):
        data = dict(self.__dict__)
        data["lower"] = self.lower()
        data["upper"] = self.upper()
        return data


def bounds_report(G, t, exact_cap=CHI_EXACT_CAP, alpha_cap=ALPHA_EXACT_CAP, node_limit=ALPHA_NODE_LIMIT):
    """
    Collect the lower and upper bounds on chi^t(G)

    Parameters:
    G: Graph
    t: non-negative integer
    exact_cap: n up to which chi and chi^t are solved exactly
    alpha_cap: n up to which alpha^t is searched
    node_limit: search-node budget for alpha^t; when spent, the clique-cover
    upper bound is reported instead

    Returns:
    BoundsReport
    """
    t = _check_t(t)
    n = G.n
    search = alpha_t_search(G, t, node_limit=node_limit, cap=alpha_cap)
    alpha_exact = search.exact
    alpha = search.size if alpha_exact else alpha_t_upper_bound(G, t)
    report = dict(
        n=n,
        t=t,
        delta=max_degree(G),
        alpha_t=alpha,
        alpha_exact=alpha_exact,
        chi_lower_ratio=-(-n // alpha) if alpha else 0,
        chi_upper_lovasz=lovasz_bound(G, t) if n else 0,
        chi_upper_greedy=greedy_peel_colouring(G, t).class_count,
    )
    if n <= exact_cap:
        chi = chromatic_number(G, cap=exact_cap)
        report["chi_lower_proper"] = math.ceil(chi / (t + 1))
        report["chi_upper_proper"] = chi
        report["chi_t"] = chi_t_exact(G, t, cap=exact_cap)[0]
    return BoundsReport(**report)
