"""Plumbing graphs with curvetta arrows: blow-down with intersection
tracking, decorated-germ extraction, point clusters, graph surgeries,
automorphisms, and binding data.

Vertex names are opaque strings.  A blow-down adds one (-1) vertex per
arrow (named ``@<curvetta>``) and repeatedly contracts a (-1) curve,
updating euler numbers by ``e(v) += I(v,E)^2`` and the intersection table
by ``I(a,b) += I(a,E) * I(b,E)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    FormatError,
    InternalInconsistencyError,
    NotSandwichedError,
    ProximityViolationError,
    RangeError,
    WeightMismatchError,
)

ARROW_PREFIX = "@"


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.entries

    def codes(self) -> tuple[str, ...]:
        return tuple(code for code, _ in self.entries)


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class PlumbingGraph:
    vertices: tuple[tuple[str, int], ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        names = [v for v, _ in self.vertices]
        if len(set(names)) != len(names):
            raise RangeError("duplicate vertex name")
        known = set(names)
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise RangeError(f"self-loop at {a}")
            if a not in known or b not in known:
                raise RangeError(f"edge ({a}, {b}) references unknown vertex")
            norm.add((a, b) if a < b else (b, a))
        object.__setattr__(self, "vertices", tuple((v, int(e)) for v, e in self.vertices))
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    def euler(self, name: str) -> int:
        for v, e in self.vertices:
            if v == name:
                return e
        raise RangeError(f"unknown vertex {name}")

    def names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.vertices)

    def neighbors(self, name: str) -> tuple[str, ...]:
        out = []
        for a, b in self.edges:
            if a == name:
                out.append(b)
            elif b == name:
                out.append(a)
        return tuple(sorted(out))


def plumbing_graph(vertices, edges=()) -> PlumbingGraph:
    """Build a graph from a {name: euler} mapping or (name, euler) pairs."""
    if hasattr(vertices, "items"):
        vs = tuple(vertices.items())
    else:
        vs = tuple(vertices)
    return PlumbingGraph(vs, tuple(tuple(e) for e in edges))


@dataclass(frozen=True)
class Augmentation:
    arrows: tuple[tuple[str, str], ...]

    def __post_init__(self):
        names = [c for c, _ in self.arrows]
        if len(set(names)) != len(names):
            raise RangeError("duplicate curvetta name")
        object.__setattr__(self, "arrows", tuple((c, v) for c, v in self.arrows))

    def curvettas(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.arrows)


def augmentation(arrows) -> Augmentation:
    return Augmentation(tuple(tuple(a) for a in arrows))


def _is_tree(g: PlumbingGraph) -> bool:
    names = g.names()
    if not names:
        return True
    if len(g.edges) != len(names) - 1:
        return False
    seen = {names[0]}
    frontier = [names[0]]
    adj: dict[str, list[str]] = {v: [] for v in names}
    for a, b in g.edges:
        adj[a].append(b)
        adj[b].append(a)
    while frontier:
        v = frontier.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return len(seen) == len(names)


def validate_graph(g: PlumbingGraph) -> ValidationReport:
    """Report tree and euler violations; empty report iff the graph is a
    candidate minimal good graph (tree, all euler <= -2)."""
    entries = []
    if not _is_tree(g):
        entries.append(("not-tree", "graph is not a tree"))
    for v, e in g.vertices:
        if e > -2:
            entries.append(("euler", f"vertex {v} has euler {e} > -2"))
    return ValidationReport(tuple(entries))


# ---------------------------------------------------------------------------
# blow-down


@dataclass(frozen=True)
class BlowStep:
    curve: str
    mults: tuple[int, ...]
    prox: tuple[str, ...]
    simple: bool


@dataclass(frozen=True)
class BlowDownTrace:
    curvettas: tuple[str, ...]
    steps: tuple[BlowStep, ...]
    last_vertex: str | None
    pairwise: tuple[tuple[int, ...], ...]


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def blow_down(g: PlumbingGraph, aug: Augmentation, choose=None) -> BlowDownTrace:
    """Contract (-1) curves until nothing remains, recording per-step
    curvetta multiplicities.  Ties break to the lexicographically smallest
    name unless ``choose`` (a callable on the sorted candidate list) says
    otherwise."""
    euler = dict(g.vertices)
    curvettas = aug.curvettas()
    taken = set(euler) | set(curvettas)
    for cname, vname in aug.arrows:
        if vname not in euler:
            raise RangeError(f"arrow for {cname} references unknown vertex {vname}")
        if cname in euler:
            raise RangeError(f"curvetta name {cname} collides with a vertex")
        arrow_vertex = ARROW_PREFIX + cname
        if arrow_vertex in taken:
            raise RangeError(f"name {arrow_vertex} is reserved for an arrow vertex")
        taken.add(arrow_vertex)

    graph_names = set(euler)
    table: dict[tuple[str, str], int] = {}
    for a, b in g.edges:
        table[_key(a, b)] = 1
    for cname, vname in aug.arrows:
        arrow_vertex = ARROW_PREFIX + cname
        euler[arrow_vertex] = -1
        table[_key(arrow_vertex, vname)] = 1
        table[_key(cname, arrow_vertex)] = 1

    active = set(euler)
    objects = list(curvettas)  # curvettas never contract
    steps: list[BlowStep] = []
    last_vertex = None
    while active:
        avail = sorted(v for v in active if euler[v] == -1)
        if not avail:
            raise NotSandwichedError(
                "no (-1) curve available; remaining: "
                + ", ".join(f"{v}({euler[v]})" for v in sorted(active))
            )
        e = avail[0] if choose is None else choose(avail)
        if e not in active or euler[e] != -1:
            raise RangeError(f"chose {e}, which is not an available (-1) curve")
        active.remove(e)
        mults = tuple(table.get(_key(c, e), 0) for c in curvettas)
        meet = [(v, table.get(_key(v, e), 0)) for v in active]
        prox = tuple(sorted(v for v, i in meet if i >= 1))
        simple = all(i <= 1 for _, i in meet)
        neighbors = [x for x in itertools.chain(active, objects) if table.get(_key(x, e), 0) != 0]
        for x in neighbors:
            if x in active:
                euler[x] += table[_key(x, e)] ** 2
        for x, y in itertools.combinations(neighbors, 2):
            table[_key(x, y)] = table.get(_key(x, y), 0) + table[_key(x, e)] * table[_key(y, e)]
        steps.append(BlowStep(e, mults, prox, simple))
        if e in graph_names:
            last_vertex = e

    pairwise = tuple(
        tuple(0 if i == k else table.get(_key(a, b), 0) for k, b in enumerate(curvettas))
        for i, a in enumerate(curvettas)
    )
    return BlowDownTrace(curvettas, tuple(steps), last_vertex, pairwise)


# ---------------------------------------------------------------------------
# decorated germs


@dataclass(frozen=True)
class Branch:
    name: str
    multiplicity_seq: tuple[int, ...]
    weight: int
    origin_multiplicity: int
    delta: int
    sits_on: str


@dataclass(frozen=True)
class DecoratedGerm:
    branches: tuple[Branch, ...]
    root_vertex: str
    pairwise: tuple[tuple[int, ...], ...]

    def branch(self, name: str) -> Branch:
        for b in self.branches:
            if b.name == name:
                return b
        raise RangeError(f"unknown branch {name}")

    def pair(self, a: str, b: str) -> int:
        names = [br.name for br in self.branches]
        return self.pairwise[names.index(a)][names.index(b)]


def delta(branch) -> int:
    """Sum of m(m-1)/2 over the multiplicity sequence."""
    seq = branch.multiplicity_seq if isinstance(branch, Branch) else tuple(branch)
    if not seq or any(m <= 0 for m in seq):
        raise RangeError("multiplicity sequence must be nonempty and positive")
    return sum(m * (m - 1) // 2 for m in seq)


def cap_framing(branch) -> int:
    """Self-intersection of the capped branch surface: -w - 2*delta."""
    if isinstance(branch, Branch):
        return -branch.weight - 2 * branch.delta
    w, d = branch
    return -w - 2 * d


def germ_from_augmentation(g: PlumbingGraph, aug: Augmentation, choose=None) -> DecoratedGerm:
    """Blow down and assemble the decorated germ, cross-checking the final
    curvetta intersections against the Noether sums over shared steps."""
    trace = blow_down(g, aug, choose=choose)
    if not trace.steps:
        raise RangeError("empty configuration has no germ")
    branches = []
    for i, (cname, vname) in enumerate(aug.arrows):
        seq = tuple(s.mults[i] for s in trace.steps if s.mults[i] > 0)
        if not seq:
            raise InternalInconsistencyError(f"curvetta {cname} never met a contracted curve")
        d = trace.steps[-1].mults[i]
        if d <= 0:
            raise InternalInconsistencyError(f"branch {cname} missed the final blow-down step")
        branches.append(Branch(cname, seq, sum(seq), d, delta(seq), vname))
    for i in range(len(branches)):
        for k in range(i + 1, len(branches)):
            noether = sum(s.mults[i] * s.mults[k] for s in trace.steps)
            if noether != trace.pairwise[i][k]:
                raise InternalInconsistencyError(
                    f"Noether sum {noether} != final intersection {trace.pairwise[i][k]} "
                    f"for ({branches[i].name}, {branches[k].name})"
                )
    return DecoratedGerm(tuple(branches), trace.last_vertex, trace.pairwise)


def spinal_binding(germ: DecoratedGerm) -> list[tuple[str, int]]:
    """[(root vertex, 1)] plus one (vertex, multiplicity) entry per branch."""
    return [(germ.root_vertex, 1)] + [(b.sits_on, b.origin_multiplicity) for b in germ.branches]


# ---------------------------------------------------------------------------
# clusters


@dataclass(frozen=True)
class ClusterPoint:
    id: str
    parent: str | None
    prox: tuple[str, ...] = ()


@dataclass(frozen=True)
class Cluster:
    branches: tuple[str, ...]
    points: tuple[ClusterPoint, ...]
    mults: tuple[tuple[int, ...], ...]  # aligned points x branches
    weights: tuple[int, ...] | None = None

    def index(self, pid: str) -> int:
        for i, p in enumerate(self.points):
            if p.id == pid:
                return i
        raise RangeError(f"unknown cluster point {pid}")

    def mult(self, pid: str, branch: str) -> int:
        return self.mults[self.index(pid)][self.branches.index(branch)]


def cluster(branches, points, mults, weights=None) -> Cluster:
    """Build a cluster from (id, parent, [prox...]) triples (parent None or
    "root" for the root point) and a {point: {branch: mult}} mapping."""
    branches = tuple(branches)
    pts = []
    for entry in points:
        pid, parent = entry[0], entry[1]
        prox = tuple(entry[2]) if len(entry) > 2 else ()
        if parent in (None, "root"):
            parent = None
        pts.append(ClusterPoint(pid, parent, prox))
    rows = []
    for p in pts:
        row = mults.get(p.id, {})
        rows.append(tuple(int(row.get(b, 0)) for b in branches))
    w = tuple(weights) if weights is not None else None
    return Cluster(branches, tuple(pts), tuple(rows), w)


def _prox_set(p: ClusterPoint) -> tuple[str, ...]:
    return ((p.parent,) if p.parent else ()) + p.prox


def check_cluster(c: Cluster, weights=None) -> tuple[int, ...]:
    """Validate structure and proximity/weight invariants; returns the
    effective branch weights."""
    ids = [p.id for p in c.points]
    if len(set(ids)) != len(ids):
        raise ProximityViolationError("duplicate cluster point id")
    if not c.points:
        raise ProximityViolationError("empty cluster")
    index = {pid: i for i, pid in enumerate(ids)}
    roots = [p.id for p in c.points if p.parent is None]
    if len(roots) != 1:
        raise ProximityViolationError(f"expected one root point, found {roots}")

    ancestors: dict[str, set[str]] = {}
    satellite_slots: set[tuple[str, str]] = set()
    for i, p in enumerate(c.points):
        if p.parent is not None:
            if p.parent not in index or index[p.parent] >= i:
                raise ProximityViolationError(f"point {p.id} lists a parent that does not precede it")
            ancestors[p.id] = {p.parent} | ancestors[p.parent]
        else:
            ancestors[p.id] = set()
        if len(p.prox) > 1:
            raise ProximityViolationError(f"point {p.id} is proximate to more than two points")
        for q in p.prox:
            if q not in index or index[q] >= i:
                raise ProximityViolationError(f"point {p.id} lists proximity to {q}, which does not precede it")
            if q == p.parent:
                raise ProximityViolationError(f"point {p.id} repeats its parent in prox")
            if q not in ancestors[p.id]:
                raise ProximityViolationError(f"point {p.id} proximate to non-ancestor {q}")
            parent = c.points[index[p.parent]]
            if q not in _prox_set(parent):
                raise ProximityViolationError(
                    f"point {p.id} proximate to {q}, but its parent {parent.id} is not"
                )
            # the two exceptional curves meet once, so the slot is unique
            if (p.parent, q) in satellite_slots:
                raise ProximityViolationError(
                    f"two points share the satellite position over ({p.parent}, {q})"
                )
            satellite_slots.add((p.parent, q))

    nb = len(c.branches)
    for i, p in enumerate(c.points):
        for b in range(nb):
            if c.mults[i][b] < 0:
                raise ProximityViolationError(f"negative multiplicity at {p.id}")
            total = sum(c.mults[index[r.id]][b] for r in c.points if p.id in _prox_set(r))
            if c.mults[i][b] < total:
                raise ProximityViolationError(
                    f"proximity inequality fails for branch {c.branches[b]} at {p.id}: "
                    f"{c.mults[i][b]} < {total}"
                )

    for b in range(nb):
        support = [p for i, p in enumerate(c.points) if c.mults[i][b] > 0]
        if not support:
            raise ProximityViolationError(f"branch {c.branches[b]} has no points")
        if support[0].parent is not None:
            raise ProximityViolationError(f"branch {c.branches[b]} does not pass through the root")
        sup = {p.id for p in support}
        children: dict[str, int] = {}
        for p in support[1:]:
            if p.parent not in sup:
                raise ProximityViolationError(
                    f"branch {c.branches[b]} support is not a chain at {p.id}"
                )
            children[p.parent] = children.get(p.parent, 0) + 1
        if any(v > 1 for v in children.values()):
            raise ProximityViolationError(f"branch {c.branches[b]} support forks")

    sums = tuple(sum(c.mults[i][b] for i in range(len(c.points))) for b in range(nb))
    declared = tuple(weights) if weights is not None else c.weights
    if declared is not None and tuple(declared) != sums:
        raise WeightMismatchError(f"declared weights {tuple(declared)} != multiplicity sums {sums}")
    return sums


def branch_chain(c: Cluster, b: int) -> list[int]:
    """Support point indices of branch b, ordered root to leaf."""
    idx = [i for i in range(len(c.points)) if c.mults[i][b] > 0]
    order = {p.id: i for i, p in enumerate(c.points)}
    chain = [i for i in idx if c.points[i].parent is None]
    sup = set(idx)
    while True:
        last = c.points[chain[-1]].id
        nxt = [i for i in idx if c.points[i].parent == last and i in sup]
        if not nxt:
            break
        chain.append(nxt[0])
    if len(chain) != len(idx):
        raise ProximityViolationError("branch support is not a chain")
    del order
    return chain


def graph_from_cluster(c: Cluster, weights=None) -> tuple[PlumbingGraph, Augmentation]:
    """Dual graph of the embedded resolution: one vertex per non-final
    point with euler -1 - #(points proximate to it), one arrow per branch
    on the parent of the branch's final point.

    Each branch must end in a free simple point carrying only that branch;
    weight-1 branches (final point = root) have no graph-plus-arrow
    presentation and raise WeightMismatchError.
    """
    check_cluster(c, weights)
    index = {p.id: i for i, p in enumerate(c.points)}
    finals = []
    for b in range(len(c.branches)):
        chain = branch_chain(c, b)
        f = chain[-1]
        fp = c.points[f]
        if fp.parent is None:
            raise WeightMismatchError(
                f"branch {c.branches[b]} has weight 1; a single free point cannot "
                "be presented as a plumbing graph with an arrow"
            )
        if c.mults[f][b] != 1 or any(c.mults[f][k] > 0 for k in range(len(c.branches)) if k != b):
            raise ProximityViolationError(
                f"final point {fp.id} of branch {c.branches[b]} must be simple and private"
            )
        if fp.prox:
            raise ProximityViolationError(f"final point {fp.id} must be free")
        if any(fp.id in _prox_set(r) for r in c.points):
            raise ProximityViolationError(f"final point {fp.id} must be last on its branch")
        finals.append(f)
        # blow-down multiplicities are the proximity closure of the final
        # point, so slack anywhere else has no graph presentation
        for i in chain[:-1]:
            q = c.points[i]
            total = sum(
                c.mults[index[r.id]][b] for r in c.points if q.id in _prox_set(r)
            )
            if c.mults[i][b] != total:
                raise ProximityViolationError(
                    f"branch {c.branches[b]} has multiplicity {c.mults[i][b]} at "
                    f"{q.id} but its proximate points only account for {total}"
                )

    final_set = set(finals)
    prox_count = {p.id: 0 for p in c.points}
    for r in c.points:
        for q in _prox_set(r):
            prox_count[q] += 1
    vertices = [(p.id, -1 - prox_count[p.id]) for i, p in enumerate(c.points) if i not in final_set]
    vertex_names = {v for v, _ in vertices}

    edges = []
    for i, p in enumerate(c.points):
        if i in final_set:
            continue
        for q in _prox_set(p):
            if q not in vertex_names:
                continue
            separated = any(
                p.id in _prox_set(r) and q in _prox_set(r) for r in c.points
            )
            if not separated:
                edges.append((p.id, q))

    arrows = [(c.branches[b], c.points[finals[b]].parent) for b in range(len(c.branches))]
    return plumbing_graph(vertices, edges), augmentation(arrows)


def germ_from_cluster(c: Cluster, weights=None) -> DecoratedGerm:
    """Decorated germ computed directly from cluster data (multiplicities
    along each branch chain, Noether pairwise sums); independent of the
    blow-down path, and the one presentation that also covers weight-1
    branches."""
    sums = check_cluster(c, weights)
    root = next(p.id for p in c.points if p.parent is None)
    branches = []
    for b, name in enumerate(c.branches):
        chain = branch_chain(c, b)
        seq = tuple(c.mults[i][b] for i in reversed(chain))
        f = c.points[chain[-1]]
        sits = f.parent if f.parent is not None else f.id
        branches.append(Branch(name, seq, sums[b], c.mults[chain[0]][b], delta(seq), sits))
    nb = len(c.branches)
    pairwise = tuple(
        tuple(
            0 if i == k else sum(c.mults[q][i] * c.mults[q][k] for q in range(len(c.points)))
            for k in range(nb)
        )
        for i in range(nb)
    )
    return DecoratedGerm(tuple(branches), root, pairwise)


def cluster_from_trace(trace: BlowDownTrace) -> Cluster:
    """Read the infinitely-near-point cluster off a blow-down trace: steps
    in reverse order become points; each point is proximate to the curves
    it met when contracted, with the earliest-contracted one as parent."""
    order = {s.curve: j for j, s in enumerate(trace.steps)}
    points = []
    rows = []
    for s in reversed(trace.steps):
        if not s.simple:
            raise ProximityViolationError(
                f"step {s.curve} meets another exceptional curve twice; no cluster presentation"
            )
        if s.prox:
            parent = min(s.prox, key=lambda v: order[v])
            extra = tuple(sorted((v for v in s.prox if v != parent), key=lambda v: order[v]))
        else:
            parent, extra = None, ()
        points.append((s.curve, parent, extra))
        rows.append(s.mults)
    mults = {pid: dict(zip(trace.curvettas, row)) for (pid, _, _), row in zip(points, rows)}
    return cluster(trace.curvettas, points, mults)


def subcluster(c: Cluster, branch_names) -> Cluster:
    """Restrict to a subset of branches: keep points where the subset has
    positive total multiplicity."""
    keep_b = [c.branches.index(b) for b in branch_names]
    if not keep_b:
        raise RangeError("empty branch subset")
    keep_p = [i for i in range(len(c.points)) if any(c.mults[i][b] > 0 for b in keep_b)]
    kept_ids = {c.points[i].id for i in keep_p}
    points = []
    for i in keep_p:
        p = c.points[i]
        if p.parent is not None and p.parent not in kept_ids:
            raise InternalInconsistencyError(f"point {p.id} lost its parent in the subcluster")
        points.append(ClusterPoint(p.id, p.parent, tuple(q for q in p.prox if q in kept_ids)))
    mults = tuple(tuple(c.mults[i][b] for b in keep_b) for i in keep_p)
    weights = tuple(c.weights[b] for b in keep_b) if c.weights is not None else None
    return Cluster(tuple(c.branches[b] for b in keep_b), tuple(points), mults, weights)


# ---------------------------------------------------------------------------
# graph surgeries


def extend_chains(g: PlumbingGraph, aug: Augmentation, lengths) -> tuple[PlumbingGraph, Augmentation]:
    """Insert a chain of ``lengths[c]`` euler -2 vertices before each
    arrow; the germ keeps its shape with weight_c increased by lengths[c]."""
    known = set(aug.curvettas())
    for c in lengths:
        if c not in known:
            raise RangeError(f"chain length given for unknown curvetta {c}")
    vertices = list(g.vertices)
    edges = list(g.edges)
    names = set(g.names())
    arrows = []
    for c, v in aug.arrows:
        n = int(lengths.get(c, 0))
        if n < 0:
            raise RangeError(f"negative chain length for {c}")
        if n == 0:
            arrows.append((c, v))
            continue
        prev = v
        for i in range(1, n + 1):
            u = f"{c}.{i}"
            if u in names:
                raise RangeError(f"chain vertex name {u} collides")
            names.add(u)
            vertices.append((u, -2))
            edges.append((prev, u))
            prev = u
        arrows.append((c, prev))
    return plumbing_graph(vertices, edges), augmentation(arrows)


def build_unexpected(g: PlumbingGraph, aug: Augmentation, N: int, wmax: int) -> tuple[PlumbingGraph, Augmentation]:
    """Attach the m-leg star (m = 2N+5, center euler -m-2, legs of m-1
    euler -2 vertices) to the germ's root vertex, put one line arrow at
    each leg end, then extend every arrow by wmax."""
    if N < 1 or wmax < 1:
        raise RangeError("N and wmax must be positive")
    m = 2 * N + 5
    trace = blow_down(g, aug)
    root = trace.last_vertex
    names = set(g.names()) | set(aug.curvettas())
    star = "vstar"
    if star in names:
        raise RangeError("vertex name vstar already in use")
    vertices = list(g.vertices) + [(star, -m - 2)]
    edges = list(g.edges) + [(star, root)]
    arrows = list(aug.arrows)
    for i in range(1, m + 1):
        prev = star
        for j in range(1, m):
            u = f"leg{i}.{j}"
            if u in names:
                raise RangeError(f"vertex name {u} already in use")
            vertices.append((u, -2))
            edges.append((prev, u))
            prev = u
        line = f"line{i}"
        if line in names:
            raise RangeError(f"curvetta name {line} already in use")
        arrows.append((line, prev))
    k = plumbing_graph(vertices, edges)
    augk = augmentation(arrows)
    return extend_chains(k, augk, {c: wmax for c in augk.curvettas()})


# ---------------------------------------------------------------------------
# automorphisms


def _adjacency(g: PlumbingGraph):
    names = list(g.names())
    idx = {v: i for i, v in enumerate(names)}
    adj: list[list[int]] = [[] for _ in names]
    for a, b in g.edges:
        adj[idx[a]].append(idx[b])
        adj[idx[b]].append(idx[a])
    return names, adj


def _centroids(adj) -> list[int]:
    n = len(adj)
    if n == 0:
        return []
    deg = [len(a) for a in adj]
    removed = [False] * n
    layer = [v for v in range(n) if deg[v] <= 1]
    remaining = n
    while remaining > 2:
        nxt = []
        for v in layer:
            removed[v] = True
            remaining -= 1
            for u in adj[v]:
                if not removed[u]:
                    deg[u] -= 1
                    if deg[u] == 1:
                        nxt.append(u)
        layer = nxt
    return [v for v in range(n) if not removed[v]]


def automorphisms(g: PlumbingGraph) -> list[dict[str, str]]:
    """All euler-preserving tree automorphisms (identity included)."""
    if not _is_tree(g):
        raise RangeError("automorphisms requires a tree")
    names, adj = _adjacency(g)
    n = len(names)
    if n == 0:
        return [{}]
    labels: list = [e for _, e in g.vertices]
    cents = _centroids(adj)
    root = cents[0]
    if len(cents) == 2:
        # virtual root between the two centroids lets the halves swap
        a, b = cents
        adj = [list(x) for x in adj] + [[a, b]]
        adj[a] = [x for x in adj[a] if x != b] + [n]
        adj[b] = [x for x in adj[b] if x != a] + [n]
        labels = labels + [None]
        root = n

    children: list[list[int]] = [[] for _ in adj]
    order = [root]
    parent = {root: -1}
    for v in order:
        for u in adj[v]:
            if u not in parent:
                parent[u] = v
                children[v].append(u)
                order.append(u)

    hashes: dict[int, tuple] = {}
    for v in reversed(order):
        hashes[v] = (labels[v], tuple(sorted(hashes[u] for u in children[v])))

    def maps(u, v):
        groups: dict[tuple, list[int]] = {}
        for cu in children[u]:
            groups.setdefault(hashes[cu], []).append(cu)
        groups_v: dict[tuple, list[int]] = {}
        for cv in children[v]:
            groups_v.setdefault(hashes[cv], []).append(cv)
        per_group = []
        for h, lu in groups.items():
            lv = groups_v[h]
            options = []
            for permuted in itertools.permutations(lv):
                branch_maps = [maps(a, b) for a, b in zip(lu, permuted)]
                for combo in itertools.product(*branch_maps):
                    merged = {}
                    for m in combo:
                        merged.update(m)
                    options.append(merged)
            per_group.append(options)
        out = []
        for combo in itertools.product(*per_group):
            merged = {u: v}
            for m in combo:
                merged.update(m)
            out.append(merged)
        return out

    result = []
    for m in maps(root, root):
        named = {names[a]: names[b] for a, b in m.items() if a < n and b < n}
        result.append(named)
    uniq = {tuple(sorted(m.items())): m for m in result}
    return [uniq[k] for k in sorted(uniq)]


# ---------------------------------------------------------------------------
# text formats


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_plumb(text: str) -> tuple[PlumbingGraph, Augmentation, dict[str, int]]:
    """Parse the ``.plumb`` format: ``vertex <name> <euler>``,
    ``edge <a> <b>``, ``curvetta <c> on <v>``, ``chains c=3,d=4``."""
    vertices: list[tuple[str, int]] = []
    edges: list[tuple[str, str]] = []
    arrows: list[tuple[str, str]] = []
    chains: dict[str, int] = {}
    for lineno, line in _content_lines(text):
        tok = line.split()
        loc = f"line {lineno}"
        try:
            if tok[0] == "vertex" and len(tok) == 3:
                vertices.append((tok[1], int(tok[2])))
            elif tok[0] == "edge" and len(tok) == 3:
                edges.append((tok[1], tok[2]))
            elif tok[0] == "curvetta" and len(tok) == 4 and tok[2] == "on":
                arrows.append((tok[1], tok[3]))
            elif tok[0] == "chains" and len(tok) == 2:
                for part in tok[1].split(","):
                    c, _, v = part.partition("=")
                    if not _ or not c:
                        raise ValueError(part)
                    chains[c.strip()] = int(v)
            else:
                raise ValueError(line)
        except ValueError as exc:
            raise FormatError(f"bad .plumb line: {line!r}", location=loc) from exc
    try:
        return plumbing_graph(vertices, edges), augmentation(arrows), chains
    except RangeError as exc:
        raise FormatError(str(exc)) from exc


def serialize_plumb(g: PlumbingGraph, aug: Augmentation | None = None, chains=None) -> str:
    out = []
    for v, e in g.vertices:
        out.append(f"vertex {v} {e}")
    for a, b in g.edges:
        out.append(f"edge {a} {b}")
    if aug is not None:
        for c, v in aug.arrows:
            out.append(f"curvetta {c} on {v}")
    if chains:
        out.append("chains " + ",".join(f"{c}={n}" for c, n in sorted(chains.items())))
    return "\n".join(out) + "\n"


def parse_germ(text: str) -> Cluster:
    """Parse the ``.germ`` cluster format: ``branch <names...>``,
    ``point <id> parent <id|root> [prox <id>,...]``,
    ``mult <id> <branch>=<k> ...``, ``weight <branch> <w>``."""
    branches: list[str] = []
    points: list[tuple] = []
    mults: dict[str, dict[str, int]] = {}
    weights: dict[str, int] = {}
    for lineno, line in _content_lines(text):
        tok = line.split()
        loc = f"line {lineno}"
        try:
            if tok[0] == "branch":
                branches.extend(tok[1:])
            elif tok[0] == "point" and len(tok) >= 4 and tok[2] == "parent":
                prox: tuple[str, ...] = ()
                if len(tok) == 6 and tok[4] == "prox":
                    prox = tuple(x for x in tok[5].split(",") if x)
                elif len(tok) != 4:
                    raise ValueError(line)
                points.append((tok[1], tok[3], prox))
            elif tok[0] == "mult" and len(tok) >= 3:
                row = mults.setdefault(tok[1], {})
                for part in tok[2:]:
                    b, _, v = part.partition("=")
                    if not _:
                        raise ValueError(part)
                    row[b] = int(v)
            elif tok[0] == "weight" and len(tok) == 3:
                weights[tok[1]] = int(tok[2])
            else:
                raise ValueError(line)
        except ValueError as exc:
            raise FormatError(f"bad .germ line: {line!r}", location=loc) from exc
    if not branches:
        raise FormatError("no branch line")
    for b in weights:
        if b not in branches:
            raise FormatError(f"weight for unknown branch {b}")
    for pid in mults:
        if pid not in {p[0] for p in points}:
            raise FormatError(f"mult for unknown point {pid}")
    w = tuple(weights.get(b, 0) for b in branches) if weights else None
    if w is not None and set(weights) != set(branches):
        raise FormatError("weights given for some branches but not all")
    return cluster(branches, points, mults, w)


def serialize_germ(c: Cluster) -> str:
    out = ["branch " + " ".join(c.branches)]
    for p in c.points:
        line = f"point {p.id} parent {p.parent if p.parent is not None else 'root'}"
        if p.prox:
            line += " prox " + ",".join(p.prox)
        out.append(line)
    for i, p in enumerate(c.points):
        parts = [f"{b}={c.mults[i][k]}" for k, b in enumerate(c.branches) if c.mults[i][k] > 0]
        if parts:
            out.append(f"mult {p.id} " + " ".join(parts))
    if c.weights is not None:
        for b, w in zip(c.branches, c.weights):
            out.append(f"weight {b} {w}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON forms


def germ_json(germ: DecoratedGerm) -> dict:
    return {
        "branches": [
            {
                "name": b.name,
                "multiplicitySeq": list(b.multiplicity_seq),
                "weight": b.weight,
                "originMultiplicity": b.origin_multiplicity,
                "delta": b.delta,
                "sitsOn": b.sits_on,
            }
            for b in germ.branches
        ],
        "rootVertex": germ.root_vertex,
        "pairwise": [list(row) for row in germ.pairwise],
    }


def trace_json(trace: BlowDownTrace) -> dict:
    return {
        "curvettas": list(trace.curvettas),
        "steps": [
            {"curve": s.curve, "multiplicities": list(s.mults), "proximateTo": list(s.prox)}
            for s in trace.steps
        ],
        "lastVertex": trace.last_vertex,
        "pairwise": [list(row) for row in trace.pairwise],
    }
