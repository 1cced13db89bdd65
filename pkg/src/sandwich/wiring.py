"""Braided wiring diagrams with tangencies.

A diagram is an alternating sequence b_0, S_1, b_1, ..., S_N, b_N of
braid words and singular events on n strands (positions numbered bottom
to top, 1..n).  Braid words apply rightmost letter first.  Events:
Tangency(p) between positions p, p+1; Intersection(lo..hi) of all
strands in that window; FreePoint(p) marking one strand.

Every strand belongs to a named component; tangencies must join strands
of one component and tie each d-strand component into a tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .errors import (
    ArcAtOuterError,
    FormatError,
    InternalInconsistencyError,
    MultiplicityNotOneError,
    ProximityViolationError,
    RangeError,
    TangencyComponentMismatchError,
    UnknownComponentError,
)
from .mcg import (
    Factorization,
    HoleArc,
    HoleCurve,
    Word,
    braid_permutation,
    curve_holes,
    exponent_sum,
    half_twist,
    inverse_word,
    perm_inverse,
    reduce_word,
)
from .plumbing import Cluster, ValidationReport, branch_chain, check_cluster


@dataclass(frozen=True)
class Tangency:
    pos: int


@dataclass(frozen=True)
class Intersection:
    lo: int
    hi: int


@dataclass(frozen=True)
class FreePoint:
    pos: int


Singularity = Tangency | Intersection | FreePoint


def _check_event(ev: Singularity, n: int) -> None:
    if isinstance(ev, Tangency):
        if not 1 <= ev.pos <= n - 1:
            raise RangeError(f"tangency at {ev.pos} outside 1..{n - 1}")
    elif isinstance(ev, Intersection):
        if not 1 <= ev.lo < ev.hi <= n:
            raise RangeError(f"intersection {ev.lo}..{ev.hi} outside 1..{n}")
    elif isinstance(ev, FreePoint):
        if not 1 <= ev.pos <= n:
            raise RangeError(f"free point at {ev.pos} outside 1..{n}")
    else:
        raise RangeError(f"not a singularity: {ev!r}")


def _check_braid(word: Word, n: int) -> Word:
    w = reduce_word(word)
    for a in w:
        if a == 0 or abs(a) > n - 1:
            raise RangeError(f"braid letter {a} outside strand range 1..{n - 1}")
    return w


@dataclass(frozen=True)
class WiringDiagram:
    n: int
    braids: tuple[Word, ...]
    events: tuple[Singularity, ...]
    components: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise RangeError("need at least one strand")
        if len(self.braids) != len(self.events) + 1:
            raise RangeError("need exactly one braid word around every event")
        object.__setattr__(self, "braids", tuple(_check_braid(b, self.n) for b in self.braids))
        object.__setattr__(self, "events", tuple(self.events))
        for ev in self.events:
            _check_event(ev, self.n)
        comp = tuple(self.components)
        if not comp:
            comp = _infer_components(self.n, self.braids, self.events)
        if len(comp) != self.n:
            raise RangeError("need one component label per strand")
        object.__setattr__(self, "components", comp)

    def component_strands(self) -> dict[str, tuple[int, ...]]:
        out: dict[str, list[int]] = {}
        for s, label in enumerate(self.components, start=1):
            out.setdefault(label, []).append(s)
        return {k: tuple(v) for k, v in out.items()}


def _apply_perm(state: list[int], word: Word, n: int) -> list[int]:
    perm = braid_permutation(word, n)
    out = [0] * n
    for p in range(n):
        out[perm[p] - 1] = state[p]
    return out


def _states(n: int, braids, events) -> list[list[int]]:
    """Strand id at each position just before each event (and one final
    state after the last braid)."""
    state = list(range(1, n + 1))
    out = []
    for i, _ in enumerate(events):
        state = _apply_perm(state, braids[i], n)
        out.append(state)
    out.append(_apply_perm(state, braids[-1], n))
    return out


def event_strands(w: WiringDiagram) -> list[tuple[Singularity, tuple[int, ...]]]:
    """Each event with the initial strand ids involved in it."""
    states = _states(w.n, w.braids, w.events)
    out = []
    for ev, state in zip(w.events, states):
        if isinstance(ev, Tangency):
            ids = (state[ev.pos - 1], state[ev.pos])
        elif isinstance(ev, Intersection):
            ids = tuple(state[ev.lo - 1 : ev.hi])
        else:
            ids = (state[ev.pos - 1],)
        out.append((ev, ids))
    return out


def final_state(w: WiringDiagram) -> tuple[int, ...]:
    return tuple(_states(w.n, w.braids, w.events)[-1])


def _infer_components(n: int, braids, events) -> tuple[str, ...]:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    state = list(range(1, n + 1))
    for i, ev in enumerate(events):
        state = _apply_perm(state, braids[i], n)
        if isinstance(ev, Tangency):
            a, b = find(state[ev.pos - 1]), find(state[ev.pos])
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(s) for s in range(1, n + 1)})
    names = {r: f"c{i}" for i, r in enumerate(roots, start=1)}
    return tuple(names[find(s)] for s in range(1, n + 1))


def strand_components(w: WiringDiagram) -> tuple[str, ...]:
    """Component label per initial strand; rejects tangencies joining
    strands of different components."""
    for ev, ids in event_strands(w):
        if isinstance(ev, Tangency):
            a, b = ids
            la, lb = w.components[a - 1], w.components[b - 1]
            if la != lb:
                raise TangencyComponentMismatchError(
                    f"tangency at {ev.pos} joins components {la} and {lb}"
                )
    return w.components


# ---------------------------------------------------------------------------
# validation and incidence


def validate_wiring(w: WiringDiagram, germ=None) -> ValidationReport:
    entries = []
    try:
        strand_components(w)
    except TangencyComponentMismatchError as exc:
        entries.append(("tangency-component", exc.message))
        return ValidationReport(tuple(entries))

    groups = w.component_strands()
    tangencies: dict[str, list[tuple[int, int]]] = {label: [] for label in groups}
    for ev, ids in event_strands(w):
        if isinstance(ev, Tangency):
            tangencies[w.components[ids[0] - 1]].append((ids[0], ids[1]))
    for label, strands in sorted(groups.items()):
        edges = tangencies[label]
        root = {s: s for s in strands}

        def find(x):
            while root[x] != x:
                root[x] = root[root[x]]
                x = root[x]
            return x

        joined = 0
        for a, b in edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                root[max(ra, rb)] = min(ra, rb)
                joined += 1
        if len(edges) != len(strands) - 1 or joined != len(strands) - 1:
            entries.append((
                "tangency-tree",
                f"component {label}: {len(edges)} tangencies on {len(strands)} strands "
                "do not form a tree",
            ))

    if germ is not None:
        entries.extend(_germ_entries(w, germ))
    return ValidationReport(tuple(entries))


def _component_summary(w: WiringDiagram):
    """Per component: (strand count, row sum, self pair count); plus cross
    counts per unordered label pair."""
    groups = w.component_strands()
    rows = {label: 0 for label in groups}
    self_pairs = {label: 0 for label in groups}
    cross: dict[tuple[str, str], int] = {}
    for ev, ids in event_strands(w):
        if isinstance(ev, Tangency):
            continue
        counts: dict[str, int] = {}
        for s in ids:
            counts[w.components[s - 1]] = counts.get(w.components[s - 1], 0) + 1
        for label, k in counts.items():
            rows[label] += k
            self_pairs[label] += k * (k - 1) // 2
        items = sorted(counts.items())
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                key = (items[i][0], items[j][0])
                cross[key] = cross.get(key, 0) + items[i][1] * items[j][1]
    strands = {label: len(s) for label, s in groups.items()}
    return strands, rows, self_pairs, cross


def _germ_entries(w: WiringDiagram, germ) -> list[tuple[str, str]]:
    entries = []
    strands, rows, self_pairs, cross = _component_summary(w)
    total_d = sum(b.origin_multiplicity for b in germ.branches)
    if w.n != total_d:
        entries.append(("strand-count", f"{w.n} strands != sum of branch multiplicities {total_d}"))
    labels = sorted(strands)
    names = sorted(b.name for b in germ.branches)
    if len(labels) != len(names):
        entries.append(("component-count", f"{len(labels)} components != {len(names)} branches"))
        return entries
    if labels == names:
        assignments = [dict(zip(labels, labels))]
    else:
        assignments = _matchings(labels, names, germ, strands, rows, self_pairs, cross)
        if not assignments:
            entries.append(("component-match", "no branch assignment matches the incidence data"))
            return entries
    best = None
    for m in assignments:
        errs = _check_assignment(m, germ, strands, rows, self_pairs, cross)
        if not errs:
            return []
        if best is None or len(errs) < len(best):
            best = errs
    entries.extend(best)
    return entries


def _check_assignment(m, germ, strands, rows, self_pairs, cross) -> list[tuple[str, str]]:
    errs = []
    for label, bname in sorted(m.items()):
        b = germ.branch(bname)
        if strands[label] != b.origin_multiplicity:
            errs.append(("strand-count", f"component {label}: {strands[label]} strands != d {b.origin_multiplicity}"))
        if rows[label] != b.weight:
            errs.append(("weight", f"component {label}: row sum {rows[label]} != weight {b.weight}"))
        if self_pairs[label] != b.delta:
            errs.append(("self", f"component {label}: self count {self_pairs[label]} != delta {b.delta}"))
    for (la, lb), value in sorted(cross.items()):
        want = germ.pair(m[la], m[lb])
        if value != want:
            errs.append(("cross", f"components {la},{lb}: cross count {value} != pairwise {want}"))
    for la in m:
        for lb in m:
            if la < lb and (la, lb) not in cross and germ.pair(m[la], m[lb]) != 0:
                errs.append(("cross", f"components {la},{lb}: cross count 0 != pairwise {germ.pair(m[la], m[lb])}"))
    return errs


def _matchings(labels, names, germ, strands, rows, self_pairs, cross):
    """Branch assignments consistent with per-component invariants."""
    out = []

    def fits(label, bname, chosen):
        b = germ.branch(bname)
        if (strands[label], rows[label], self_pairs[label]) != (
            b.origin_multiplicity, b.weight, b.delta):
            return False
        for la, na in chosen.items():
            key = (la, label) if la < label else (label, la)
            if cross.get(key, 0) != germ.pair(na, bname):
                return False
        return True

    def rec(i, chosen, used):
        if len(out) >= 64:
            return
        if i == len(labels):
            out.append(dict(chosen))
            return
        for bname in names:
            if bname in used or not fits(labels[i], bname, chosen):
                continue
            chosen[labels[i]] = bname
            rec(i + 1, chosen, used | {bname})
            del chosen[labels[i]]

    rec(0, {}, frozenset())
    return out


@dataclass(frozen=True)
class IncidenceMatrix:
    components: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]
    kinds: tuple[str, ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.kinds):
                raise RangeError("ragged incidence matrix")

    def row(self, label: str) -> tuple[int, ...]:
        return self.rows[self.components.index(label)]


def incidence(w: WiringDiagram) -> IncidenceMatrix:
    """Rows = components (sorted by label), one column per Intersection or
    FreePoint in seq order; entries count that component's strands there."""
    strand_components(w)
    labels = sorted(w.component_strands())
    rows = {label: [] for label in labels}
    kinds = []
    for ev, ids in event_strands(w):
        if isinstance(ev, Tangency):
            continue
        kinds.append("free" if isinstance(ev, FreePoint) else "intersection")
        for label in labels:
            rows[label].append(sum(1 for s in ids if w.components[s - 1] == label))
    return IncidenceMatrix(
        tuple(labels), tuple(tuple(rows[label]) for label in labels), tuple(kinds)
    )


# ---------------------------------------------------------------------------
# pushoffs and vanishing data


def _event_bottom(ev: Singularity) -> Word:
    if isinstance(ev, Intersection):
        return half_twist(ev.lo, ev.hi)
    return ()


def _event_top(ev: Singularity) -> Word:
    if isinstance(ev, Intersection):
        return inverse_word(half_twist(ev.lo, ev.hi))
    if isinstance(ev, Tangency):
        return (-ev.pos,)
    return ()


def pushoffs(w: WiringDiagram) -> tuple[Word, Word]:
    """(top, bottom) monodromy words.  The bottom pushoff sees each
    interleaving braid and a positive half twist per intersection; the top
    sees the braids, inverse half twists, and one negative crossing per
    tangency.  Later parts act later (leftmost in the word)."""
    top: Word = ()
    bottom: Word = ()
    for i, ev in enumerate(w.events):
        bottom = w.braids[i] + bottom
        top = w.braids[i] + top
        bottom = _event_bottom(ev) + bottom
        top = _event_top(ev) + top
    bottom = reduce_word(w.braids[-1] + bottom)
    top = reduce_word(w.braids[-1] + top)
    return top, bottom


def boundary_braid(w: WiringDiagram) -> Word:
    top, bottom = pushoffs(w)
    return reduce_word(inverse_word(top) + bottom)


def vanishing_data(w: WiringDiagram) -> Factorization:
    """One item per event: the base object at the event's window, pulled
    back through the inverse of everything that came before it along the
    bottom pushoff."""
    items = []
    prefix: Word = ()
    lam: Word = ()
    for i, ev in enumerate(w.events):
        prefix = reduce_word(w.braids[i] + lam + prefix)
        if isinstance(ev, Intersection):
            items.append(HoleCurve(w.n, prefix, ev.lo, ev.hi - ev.lo))
        elif isinstance(ev, Tangency):
            items.append(HoleArc(w.n, prefix, ev.pos))
        else:
            items.append(HoleCurve(w.n, prefix, ev.pos, 0))
        lam = _event_bottom(ev)
    return Factorization(w.n, tuple(items))


def wiring_from_vanishing(fact: Factorization, components=None) -> WiringDiagram:
    """Rebuild a diagram whose vanishing data is ``fact``: each stored
    conjugator, compared with the accumulated prefix, determines the
    interleaving braid; the base determines the event."""
    braids = []
    events: list[Singularity] = []
    prefix: Word = ()
    lam: Word = ()
    for item in fact.items:
        if item.twists:
            raise RangeError("items carrying boundary-twist offsets have no diagram form")
        b = reduce_word(item.conjugator + inverse_word(prefix) + inverse_word(lam))
        braids.append(b)
        if isinstance(item, HoleArc):
            if item.start + 1 > fact.n:
                raise ArcAtOuterError(f"arc endpoints {item.start}, {item.start + 1} out of range")
            events.append(Tangency(item.start))
        elif item.span == 0:
            events.append(FreePoint(item.start))
        else:
            events.append(Intersection(item.start, item.start + item.span))
        prefix = reduce_word(b + lam + prefix)
        lam = _event_bottom(events[-1])
    braids.append(())
    return WiringDiagram(fact.n, tuple(braids), tuple(events), tuple(components or ()))


# ---------------------------------------------------------------------------
# Scott diagrams


def scott(c: Cluster) -> WiringDiagram:
    """Unbraided diagram of the cluster's standard deformation: one
    Intersection or FreePoint per cluster point (multiplicities = strand
    counts), d-1 tangencies per branch placed up front.

    Strand blocks follow the cluster tree depth-first, so each point's
    strands form one contiguous window; when a branch keeps fewer strands
    past a point it keeps the window-side ones.  Points are emitted deepest
    first: every earlier event permutes strands strictly inside an enclosing
    window, so each window still holds exactly its own strands when its
    event appears.  Clusters where a branch shrinks strictly inside a
    three-branch window admit no unbraided layout and are rejected.
    """
    check_cluster(c)
    index = {p.id: i for i, p in enumerate(c.points)}
    chains = {}
    finals = {}
    for k, b in enumerate(c.branches):
        chain = branch_chain(c, k)
        if c.mults[chain[-1]][k] != 1:
            raise ProximityViolationError(
                f"branch {b} ends with multiplicity {c.mults[chain[-1]][k]}, not 1"
            )
        chains[b] = chain
        finals.setdefault(chain[-1], []).append(b)

    children: dict[str, list[str]] = {p.id: [] for p in c.points}
    root = None
    for p in c.points:
        if p.parent is None:
            root = p.id
        else:
            children[p.parent].append(p.id)

    order: list[str] = []

    def dfs(pid: str):
        order.extend(finals.get(index[pid], ()))
        for q in children[pid]:
            dfs(q)

    dfs(root)

    block: dict[str, list[int]] = {}
    pos = 1
    for b in order:
        d = c.mults[index[root]][c.branches.index(b)]
        block[b] = list(range(pos, pos + d))
        pos += d
    n = pos - 1

    # strand portions per (point, branch), walking parents first
    portion: dict[tuple[str, str], list[int]] = {}
    side: dict[str, str] = {b: "high" for b in order}
    depth: dict[str, int] = {}
    windows: dict[str, list[int]] = {}
    for i, p in enumerate(c.points):
        depth[p.id] = 0 if p.parent is None else depth[p.parent] + 1
        bs = [b for b in order if c.mults[i][c.branches.index(b)] > 0]
        window: list[int] = []
        for k, b in enumerate(bs):
            m = c.mults[i][c.branches.index(b)]
            if p.parent is None:
                part = block[b]
            else:
                pp = portion[(p.parent, b)]
                if len(bs) == 1:
                    part = pp[-m:] if side[b] == "high" else pp[:m]
                elif k == 0:
                    part = pp[-m:]
                    side[b] = "high"
                elif k == len(bs) - 1:
                    part = pp[:m]
                    side[b] = "low"
                else:
                    if m != len(pp):
                        raise InternalInconsistencyError(
                            f"branch {b} shrinks inside the window at {p.id}; "
                            "no unbraided layout exists"
                        )
                    part = pp
            portion[(p.id, b)] = part
            window.extend(part)
        window.sort()
        if window != list(range(window[0], window[0] + len(window))):
            raise InternalInconsistencyError(f"window at {p.id} is not contiguous")
        windows[p.id] = window

    events: list[Singularity] = []
    for b in order:
        positions = []
        chain = chains[b]
        for prev, cur in zip(chain, chain[1:]):
            old = portion[(c.points[prev].id, b)]
            new = portion[(c.points[cur].id, b)]
            if len(new) == len(old):
                continue
            lost = sorted(set(old) - set(new))
            if lost and lost[0] < new[0]:
                positions.extend(lost)
            else:
                positions.extend([new[-1]] + lost[:-1])
        events.extend(Tangency(p) for p in sorted(positions))

    for p in sorted(c.points, key=lambda p: (-depth[p.id], windows[p.id][0])):
        window = windows[p.id]
        total = sum(c.mults[index[p.id]])
        if total == 1:
            events.append(FreePoint(window[0]))
        else:
            events.append(Intersection(window[0], window[-1]))

    labels = [""] * n
    for b in order:
        for q in block[b]:
            labels[q - 1] = b
    return WiringDiagram(n, ((),) * (len(events) + 1), tuple(events), tuple(labels))


# ---------------------------------------------------------------------------
# combine / subarrangement / padding


def _shift_word(word: Word, k: int) -> Word:
    return tuple(a + k if a > 0 else a - k for a in word)


def _shift_event(ev: Singularity, k: int) -> Singularity:
    if isinstance(ev, Tangency):
        return Tangency(ev.pos + k)
    if isinstance(ev, Intersection):
        return Intersection(ev.lo + k, ev.hi + k)
    return FreePoint(ev.pos + k)


def combine(wa: WiringDiagram, wb: WiringDiagram) -> WiringDiagram:
    """Stack wa above wb and prepend one transverse double point for every
    (strand of wa, strand of wb) pair, each conjugated by the positive
    braid that carries the upper strand down next to the lower one."""
    if set(wa.components) & set(wb.components):
        raise RangeError("component labels collide")
    nb = wb.n
    n = wa.n + nb
    braids: list[Word] = []
    events: list[Singularity] = []
    pending: Word = ()

    def push_braid(word: Word):
        nonlocal pending
        pending = reduce_word(word + pending)

    def push_event(ev: Singularity):
        nonlocal pending
        braids.append(pending)
        events.append(ev)
        pending = ()

    for p in range(nb + 1, n + 1):
        for q in range(1, nb + 1):
            down = tuple(range(q + 1, p))
            push_braid(down)
            push_event(Intersection(q, q + 1))
            push_braid(inverse_word(down))
    for i, ev in enumerate(wb.events):
        push_braid(wb.braids[i])
        push_event(ev)
    push_braid(wb.braids[-1])
    for i, ev in enumerate(wa.events):
        push_braid(_shift_word(wa.braids[i], nb))
        push_event(_shift_event(ev, nb))
    push_braid(_shift_word(wa.braids[-1], nb))
    braids.append(pending)
    return WiringDiagram(n, tuple(braids), tuple(events), wb.components + wa.components)


def subarrangement(w: WiringDiagram, keep_components) -> WiringDiagram:
    """Delete the strands of every component not in ``keep_components``.
    Intersections survive only while two strands remain; marked points
    survive with their strand; tangencies of deleted strands drop."""
    keep_labels = set(keep_components)
    known = set(w.components)
    for label in keep_labels:
        if label not in known:
            raise UnknownComponentError(f"unknown component {label}")
    kept = {s for s in range(1, w.n + 1) if w.components[s - 1] in keep_labels}
    if not kept:
        raise RangeError("empty component subset")

    state = list(range(1, w.n + 1))
    braids: list[Word] = []
    events: list[Singularity] = []
    pending: list[int] = []  # chronological letters

    def flush():
        braids.append(reduce_word(tuple(reversed(pending))))
        pending.clear()

    def run_braid(word: Word):
        for a in reversed(word):
            j = abs(a)
            x, y = state[j - 1], state[j]
            if x in kept and y in kept:
                below = sum(1 for s in state[: j - 1] if s in kept)
                pending.append(below + 1 if a > 0 else -(below + 1))
            state[j - 1], state[j] = y, x

    for i, ev in enumerate(w.events):
        run_braid(w.braids[i])
        if isinstance(ev, Tangency):
            ids = [state[ev.pos - 1], state[ev.pos]]
            if all(s in kept for s in ids):
                flush()
                events.append(Tangency(sum(1 for s in state[: ev.pos - 1] if s in kept) + 1))
        elif isinstance(ev, Intersection):
            ids = [s for s in state[ev.lo - 1 : ev.hi] if s in kept]
            below = sum(1 for s in state[: ev.lo - 1] if s in kept)
            if len(ids) >= 2:
                flush()
                events.append(Intersection(below + 1, below + len(ids)))
        else:
            if state[ev.pos - 1] in kept:
                flush()
                events.append(FreePoint(sum(1 for s in state[: ev.pos - 1] if s in kept) + 1))
    run_braid(w.braids[-1])
    flush()
    labels = tuple(w.components[s - 1] for s in sorted(kept))
    return WiringDiagram(len(kept), tuple(braids), tuple(events), labels)


def add_free_points(w: WiringDiagram, counts) -> WiringDiagram:
    """Append free marked points at the end of the diagram: ``counts`` maps
    component label to how many to add (placed on the component's lowest
    final position)."""
    groups = w.component_strands()
    state = final_state(w)
    slot = {}
    for label in groups:
        slot[label] = min(p for p, s in enumerate(state, start=1) if w.components[s - 1] == label)
    events = list(w.events)
    braids = list(w.braids)
    for label in sorted(counts):
        if label not in groups:
            raise UnknownComponentError(f"unknown component {label}")
        if counts[label] < 0:
            raise RangeError("free point count must be nonnegative")
        for _ in range(counts[label]):
            events.append(FreePoint(slot[label]))
            braids.append(())
    return WiringDiagram(w.n, tuple(braids), tuple(events), w.components)


# ---------------------------------------------------------------------------
# enclosure data and inside-out


@dataclass(frozen=True)
class EnclosureData:
    """Which holes each monodromy item wraps: ("cycle", S) for curves,
    ("arc", {a, b}) for interchange arcs.  Hole h carries the component of
    strand h."""

    n: int
    components: tuple[str, ...]
    items: tuple[tuple[str, frozenset[int]], ...]

    def __post_init__(self):
        if len(self.components) != self.n:
            raise RangeError("need one component label per hole")
        for kind, holes in self.items:
            if kind not in ("cycle", "arc"):
                raise RangeError(f"unknown item kind {kind}")
            if not holes or any(not 1 <= h <= self.n for h in holes):
                raise RangeError("enclosure sets must be nonempty subsets of the holes")
            if kind == "arc" and len(holes) != 2:
                raise RangeError("arcs join exactly two holes")


def enclosure_from_wiring(w: WiringDiagram) -> EnclosureData:
    # vanishing items are transported below earlier events, so the holes a
    # cycle encloses are read off the transported item, not the raw strands
    return enclosure_from_factorization(vanishing_data(w), strand_components(w))


def enclosure_from_factorization(fact: Factorization, components=None) -> EnclosureData:
    if components is None:
        components = tuple(f"h{i}" for i in range(1, fact.n + 1))
    items = []
    for item in fact.items:
        if isinstance(item, HoleArc):
            perm = perm_inverse(braid_permutation(item.conjugator, fact.n))
            items.append(("arc", frozenset((perm[item.start - 1], perm[item.start]))))
        else:
            items.append(("cycle", curve_holes(item)))
    return EnclosureData(fact.n, tuple(components), tuple(items))


def inside_out(e: EnclosureData, hole: int) -> EnclosureData:
    """Re-read the data with hole ``hole`` as the outer boundary and the
    old outer boundary as a hole in its place: sets not containing the
    hole stay; sets containing it become the complement (outer included),
    with the two boundary roles swapped in the naming."""
    if not 1 <= hole <= e.n:
        raise RangeError(f"hole {hole} outside 1..{e.n}")
    label = e.components[hole - 1]
    if sum(1 for c in e.components if c == label) != 1:
        raise MultiplicityNotOneError(
            f"hole {hole} belongs to component {label} with multiplicity > 1"
        )
    everything = frozenset(range(1, e.n + 1))
    items = []
    for kind, holes in e.items:
        if kind == "arc" and hole in holes:
            raise ArcAtOuterError(f"arc at holes {sorted(holes)} touches the new outer boundary")
        if hole in holes:
            holes = (everything - holes) | {hole}
        items.append((kind, holes))
    return EnclosureData(e.n, e.components, tuple(items))


# ---------------------------------------------------------------------------
# .wire format


_EVENT_RE = re.compile(r"^(?:T\((\d+)\)|I\((\d+)\.\.(\d+)\)|F\((\d+)\))$")
_BRAID_RE = re.compile(r"^s(\d+)(')?$")


def _parse_braid(chunk: str, lineno: int) -> Word:
    if chunk == "1":
        return ()
    letters = []
    for tok in chunk.split():
        m = _BRAID_RE.match(tok)
        if not m:
            raise FormatError(f"bad braid token {tok!r}", location=f"line {lineno}")
        i = int(m.group(1))
        letters.append(-i if m.group(2) else i)
    return tuple(letters)


def parse_wire(text: str) -> WiringDiagram:
    n = None
    components: dict[str, list[int]] = {}
    seq_chunks: list[str] | None = None
    seq_line = 0
    statements = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for part in line.split(";"):
            if part.strip():
                statements.append((lineno, part.strip()))
    for lineno, stmt in statements:
        loc = f"line {lineno}"
        if stmt.startswith("strands"):
            try:
                n = int(stmt.split()[1])
            except (IndexError, ValueError) as exc:
                raise FormatError(f"bad strands line {stmt!r}", location=loc) from exc
        elif stmt.startswith("components"):
            for group in stmt.split()[1:]:
                label, _, positions = group.partition("=")
                if not _ or not label:
                    raise FormatError(f"bad components group {group!r}", location=loc)
                try:
                    components[label] = [int(x) for x in positions.split(",") if x]
                except ValueError as exc:
                    raise FormatError(f"bad components group {group!r}", location=loc) from exc
        elif stmt.startswith("seq:"):
            if seq_chunks is not None:
                raise FormatError("duplicate seq", location=loc)
            seq_chunks = [c.strip() for c in stmt[4:].split(",")]
            seq_line = lineno
        else:
            raise FormatError(f"unrecognized statement {stmt!r}", location=loc)
    if n is None:
        raise FormatError("missing strands header")
    if seq_chunks is None:
        raise FormatError("missing seq")

    braids: list[Word] = []
    events: list[Singularity] = []
    pending: Word | None = None
    for chunk in seq_chunks:
        if not chunk:
            raise FormatError("empty seq entry", location=f"line {seq_line}")
        m = _EVENT_RE.match(chunk)
        if m:
            braids.append(pending if pending is not None else ())
            pending = None
            if m.group(1):
                events.append(Tangency(int(m.group(1))))
            elif m.group(2):
                events.append(Intersection(int(m.group(2)), int(m.group(3))))
            else:
                events.append(FreePoint(int(m.group(4))))
        else:
            if pending is not None:
                raise FormatError(
                    f"two braid words in a row at {chunk!r}", location=f"line {seq_line}"
                )
            pending = _parse_braid(chunk, seq_line)
    braids.append(pending if pending is not None else ())

    labels: tuple[str, ...] = ()
    if components:
        assigned = {}
        for label, positions in components.items():
            for p in positions:
                if not 1 <= p <= n or p in assigned:
                    raise FormatError(f"components do not partition strands 1..{n}")
                assigned[p] = label
        if len(assigned) != n:
            raise FormatError(f"components do not partition strands 1..{n}")
        labels = tuple(assigned[p] for p in range(1, n + 1))
    return WiringDiagram(n, tuple(braids), tuple(events), labels)


def _braid_text(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(f"s{abs(a)}" + ("'" if a < 0 else "") for a in word)


def _event_text(ev: Singularity) -> str:
    if isinstance(ev, Tangency):
        return f"T({ev.pos})"
    if isinstance(ev, Intersection):
        return f"I({ev.lo}..{ev.hi})"
    return f"F({ev.pos})"


def serialize_wire(w: WiringDiagram) -> str:
    out = [f"strands {w.n}"]
    groups = w.component_strands()
    out.append(
        "components "
        + " ".join(f"{label}=" + ",".join(map(str, groups[label])) for label in sorted(groups))
    )
    parts = []
    for i, ev in enumerate(w.events):
        parts.append(_braid_text(w.braids[i]))
        parts.append(_event_text(ev))
    parts.append(_braid_text(w.braids[-1]))
    out.append("seq: " + ", ".join(parts))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON forms


def factorization_json(fact: Factorization) -> dict:
    from .mcg import canonical_curve

    items = []
    for item in fact.items:
        d = {
            "kind": "arc" if isinstance(item, HoleArc) else "cycle",
            "conjugator": list(item.conjugator),
            "start": item.start,
            "canonicalWord": list(canonical_curve(item)),
        }
        if isinstance(item, HoleCurve):
            d["span"] = item.span
        items.append(d)
    return {"holes": fact.n, "items": items}


def factorization_from_json(data) -> Factorization:
    try:
        n = int(data["holes"])
        items = []
        for d in data["items"]:
            conj = tuple(int(x) for x in d.get("conjugator", ()))
            if d["kind"] == "arc":
                items.append(HoleArc(n, conj, int(d["start"])))
            else:
                items.append(HoleCurve(n, conj, int(d["start"]), int(d.get("span", 0))))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad factorization JSON: {exc}") from exc
    return Factorization(n, tuple(items))


def incidence_json(m: IncidenceMatrix) -> dict:
    return {
        "components": list(m.components),
        "kinds": list(m.kinds),
        "rows": [list(r) for r in m.rows],
    }


def exponent_law_terms(w: WiringDiagram) -> int:
    """Expected exponent sum of the boundary braid: s(s-1) per
    intersection on s strands, 1 per tangency."""
    total = 0
    for ev in w.events:
        if isinstance(ev, Intersection):
            s = ev.hi - ev.lo + 1
            total += s * (s - 1)
        elif isinstance(ev, Tangency):
            total += 1
    return total


def check_exponent_law(w: WiringDiagram) -> bool:
    return exponent_sum(boundary_braid(w)) == exponent_law_terms(w)
