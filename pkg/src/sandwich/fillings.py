"""Filling-level summaries on top of wiring diagrams: spinal open book
data, exotic-handle counts, vanishing-cycle products, compatibility
verdicts, and incidence-matrix equivalence."""

from dataclasses import dataclass
from functools import reduce
from itertools import permutations

from .errors import InternalInconsistencyError, RangeError, WeightMismatchError
from .mcg import Factorization, MappingClass, braid_equal, mc_compose, mc_identity, mc_of_item
from .plumbing import (
    Augmentation,
    Branch,
    Cluster,
    DecoratedGerm,
    PlumbingGraph,
    ValidationReport,
    blow_down,
    build_unexpected,
    cluster_from_trace,
    germ_from_cluster,
    spinal_binding,
    subcluster,
)
from .wiring import (
    IncidenceMatrix,
    Tangency,
    WiringDiagram,
    boundary_braid,
    combine,
    incidence,
    incidence_json,
    scott,
    validate_wiring,
)


# ---------------------------------------------------------------------------
# spinal open book data


@dataclass(frozen=True)
class SpinalOpenBook:
    """Page = disk with one hole per strand; each non-outer binding covers
    the page boundary with its multiplicity, the outer binding once."""

    page_holes: int
    bindings: tuple[tuple[str, int], ...]
    outer: tuple[str, int]
    marking: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if self.outer[1] != 1:
            raise RangeError("outer binding must have multiplicity 1")
        if sum(d for _, d in self.bindings) != self.page_holes:
            raise RangeError("binding multiplicities must sum to the page hole count")


def spinal_open_book(germ: DecoratedGerm) -> SpinalOpenBook:
    outer, *rest = spinal_binding(germ)
    marking = tuple((b.name, b.sits_on) for b in germ.branches)
    return SpinalOpenBook(sum(d for _, d in rest), tuple(rest), tuple(outer), marking)


def exotic_count(germ) -> int:
    """Arc-type handles forced by multi-sheeted branches: d - 1 apiece.

    Equals the tangency count of every diagram compatible with the germ.
    """
    if isinstance(germ, Cluster):
        germ = germ_from_cluster(germ)
    return sum(b.origin_multiplicity - 1 for b in germ.branches)


# ---------------------------------------------------------------------------
# vanishing-cycle products and compatibility


def factorization_product(fact: Factorization) -> MappingClass:
    """Compose the item classes right to left (last item acts first); on
    the vanishing data of a diagram this telescopes to its boundary braid,
    with boundary-parallel cycles landing in the twist ledger."""
    classes = [mc_of_item(item) for item in fact.items]
    if not classes:
        return mc_identity(fact.n)
    return reduce(mc_compose, classes)


def compatible(w: WiringDiagram, c: Cluster) -> tuple[bool, ValidationReport]:
    """Does ``w`` fill the same germ as the cluster's own layout does?

    True iff ``w`` validates against the cluster's germ and its boundary
    braid agrees, as a braid class, with the layout built straight from the
    cluster (both use the same bottom-to-top strand convention).
    """
    report = validate_wiring(w, germ=germ_from_cluster(c))
    entries = list(report.entries)
    if report.ok:
        reference = scott(c)
        if not braid_equal(boundary_braid(w), boundary_braid(reference), w.n):
            entries.append(
                ("boundary-class", "boundary braid differs from the cluster layout")
            )
    return (not entries), ValidationReport(tuple(entries))


# ---------------------------------------------------------------------------
# incidence-matrix equivalence


def incidence_canonical(m: IncidenceMatrix) -> IncidenceMatrix:
    """Rows ordered by component label, then columns sorted descending
    lexicographically; column kinds travel with their columns."""
    order = sorted(range(len(m.components)), key=lambda i: m.components[i])
    rows = [m.rows[i] for i in order]
    cols = sorted(
        ((tuple(row[j] for row in rows), m.kinds[j]) for j in range(len(m.kinds))),
        reverse=True,
    )
    return IncidenceMatrix(
        tuple(m.components[i] for i in order),
        tuple(tuple(col[0][i] for col in cols) for i in range(len(rows))),
        tuple(col[1] for col in cols),
    )


def incidence_equiv(a: IncidenceMatrix, b: IncidenceMatrix, unlabeled: bool = False) -> bool:
    """Equal canonical forms, rows matched by component label; with
    ``unlabeled`` any row bijection is allowed instead."""
    if len(a.rows) != len(b.rows) or len(a.kinds) != len(b.kinds):
        return False
    ca, cb = incidence_canonical(a), incidence_canonical(b)
    if not unlabeled:
        return ca == cb
    target = (cb.rows, cb.kinds)
    for perm in permutations(range(len(ca.rows))):
        shuffled = IncidenceMatrix(
            cb.components, tuple(ca.rows[i] for i in perm), ca.kinds
        )
        canon = incidence_canonical(shuffled)
        if (canon.rows, canon.kinds) == target:
            return True
    return False


# ---------------------------------------------------------------------------
# summaries


@dataclass(frozen=True)
class FillingSummary:
    lefschetz_count: int
    exotic_count: int
    euler_characteristic: int
    incidence: IncidenceMatrix


def filling_summary(w: WiringDiagram, c: Cluster | None = None) -> FillingSummary:
    """Handle counts and euler characteristic of the filling the diagram
    describes; when a cluster is supplied the diagram must be compatible
    with it."""
    if c is not None:
        ok, report = compatible(w, c)
        if not ok:
            raise WeightMismatchError(
                "; ".join(f"{code}: {msg}" for code, msg in report.entries)
            )
    arcs = sum(1 for ev in w.events if isinstance(ev, Tangency))
    marked = len(w.events) - arcs
    branches = len(w.component_strands())
    return FillingSummary(
        marked, arcs, 1 + marked - branches, incidence_canonical(incidence(w))
    )


def filling_json(s: FillingSummary) -> dict:
    return {
        "lefschetzCount": s.lefschetz_count,
        "exoticCount": s.exotic_count,
        "eulerCharacteristic": s.euler_characteristic,
        "incidence": incidence_json(s.incidence),
    }


# ---------------------------------------------------------------------------
# star-extended arrangements


def combine_germs(a: DecoratedGerm, b: DecoratedGerm) -> DecoratedGerm:
    """Decorated data of a generic union: every strand of one part crosses
    every strand of the other exactly once, so weights grow by d_i times
    the other part's strand total and cross pairings are the products."""
    shared = {x.name for x in a.branches} & {x.name for x in b.branches}
    if shared:
        raise RangeError(f"branch names on both sides: {sorted(shared)}")
    na = sum(x.origin_multiplicity for x in a.branches)
    nb = sum(x.origin_multiplicity for x in b.branches)
    branches = tuple(
        Branch(x.name, x.multiplicity_seq, x.weight + x.origin_multiplicity * other,
               x.origin_multiplicity, x.delta, x.sits_on)
        for part, other in ((a, nb), (b, na))
        for x in part.branches
    )
    d = {x.name: x.origin_multiplicity for x in branches}
    names = [x.name for x in branches]
    own = {x.name for x in a.branches}

    def pair(p: str, q: str) -> int:
        if p == q:
            return 0
        if p in own and q in own:
            return a.pair(p, q)
        if p not in own and q not in own:
            return b.pair(p, q)
        return d[p] * d[q]

    pairwise = tuple(tuple(pair(p, q) for q in names) for p in names)
    return DecoratedGerm(branches, a.root_vertex, pairwise)


@dataclass(frozen=True)
class UnexpectedArrangement:
    graph: PlumbingGraph
    arrows: Augmentation
    wiring: WiringDiagram
    germ: DecoratedGerm


def unexpected_arrangement(
    g: PlumbingGraph, aug: Augmentation, N: int, wmax: int
) -> UnexpectedArrangement:
    """Attach the star of generic lines to the germ of ``(g, aug)``, lay
    out the original branches and the new lines separately, and merge the
    two layouts; the result is checked against the generic-union germ."""
    graph, arrows = build_unexpected(g, aug, N, wmax)
    full = cluster_from_trace(blow_down(graph, arrows))
    original = set(aug.curvettas())
    base = subcluster(full, [name for name in full.branches if name in original])
    lines = subcluster(full, [name for name in full.branches if name not in original])
    w = combine(scott(base), scott(lines))
    germ = combine_germs(germ_from_cluster(base), germ_from_cluster(lines))
    report = validate_wiring(w, germ=germ)
    if not report.ok:
        raise InternalInconsistencyError(
            "combined layout fails its own germ: "
            + "; ".join(f"{code}: {msg}" for code, msg in report.entries)
        )
    return UnexpectedArrangement(graph, arrows, w, germ)
