"""Braid words, the Artin action on a free group, curves and arcs on a
disk with holes, mapping classes with a boundary-twist ledger, and Hurwitz
moves on factorizations.

Conventions used throughout the package:

- A word (free-group word or braid word) is a tuple of nonzero ints.
  Letter ``i > 0`` is the i-th generator (``x_i`` for free words, ``s_i``
  for braid words) and ``-i`` its inverse.  Compositions read right to
  left: the rightmost letter acts first.
- Hole indices are the 1-based strand positions at the start of a diagram,
  numbered bottom to top.
- A curve (or arc) is stored as a conjugating braid ``g`` plus a convex
  base; the object denoted is ``g^{-1}`` applied to the base.  Braid words
  are kept literal (only adjacent ``s s'`` pairs cancel); equality of the
  underlying braids is semantic, via the Artin action.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import RangeError, InternalInconsistencyError, StrandMismatchError

Word = tuple[int, ...]


# ---------------------------------------------------------------------------
# words


def reduce_word(letters) -> Word:
    """Freely reduce: cancel adjacent ``i, -i`` pairs (valid for braid
    words too, where such pairs are trivial relators)."""
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise RangeError("word letters must be nonzero")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def inverse_word(w) -> Word:
    return tuple(-a for a in reversed(w))


def exponent_sum(w) -> int:
    return sum(1 if a > 0 else -1 for a in w)


def _check_braid_word(w: Word, n: int) -> None:
    for a in w:
        if not 1 <= abs(a) <= n - 1:
            raise StrandMismatchError(f"braid letter {a} needs {abs(a) + 1} strands, have {n}")


def _check_free_word(w: Word, n: int) -> None:
    for a in w:
        if not 1 <= abs(a) <= n:
            raise StrandMismatchError(f"free-group letter {a} out of range for {n} holes")


# ---------------------------------------------------------------------------
# Artin action

# sigma_i: x_i -> x_i x_{i+1} x_i^{-1}, x_{i+1} -> x_i, others fixed.
# sigma_i^{-1}: x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^{-1} x_i x_{i+1}.


def _act_letter(letter: int, w: Word) -> Word:
    i = abs(letter)
    out: list[int] = []
    for a in w:
        g = abs(a)
        if letter > 0:
            if g == i:
                img = (i, i + 1, -i)
            elif g == i + 1:
                img = (i,)
            else:
                img = (g,)
        else:
            if g == i:
                img = (i + 1,)
            elif g == i + 1:
                img = (-(i + 1), i, i + 1)
            else:
                img = (g,)
        if a < 0:
            img = tuple(-x for x in reversed(img))
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def artin_act(b: Word, w: Word, n: int | None = None) -> Word:
    """Image of the free word ``w`` under the braid word ``b`` (rightmost
    braid letter applied first); result freely reduced."""
    if n is not None:
        _check_braid_word(b, n)
        _check_free_word(w, n)
    w = reduce_word(w)
    for letter in reversed(b):
        w = _act_letter(letter, w)
    return w


def braid_permutation(word: Word, n: int) -> tuple[int, ...]:
    """perm[s-1] = final position of the strand starting at position s."""
    _check_braid_word(word, n)
    strand_at = list(range(n + 1))  # strand_at[p] = strand currently at position p
    for letter in reversed(word):
        i = abs(letter)
        strand_at[i], strand_at[i + 1] = strand_at[i + 1], strand_at[i]
    perm = [0] * (n + 1)
    for p in range(1, n + 1):
        perm[strand_at[p]] = p
    return tuple(perm[1:])


def perm_identity(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def perm_compose(p, q):
    """(p after q): h -> p[q[h]]."""
    return tuple(p[q[h] - 1] for h in range(len(q)))


def perm_inverse(p):
    out = [0] * len(p)
    for h, v in enumerate(p, start=1):
        out[v - 1] = h
    return tuple(out)


def braid_equal(a: Word, b: Word, n: int) -> bool:
    """Semantic equality via the (faithful) Artin action."""
    _check_braid_word(a, n)
    _check_braid_word(b, n)
    return all(artin_act(a, (g,)) == artin_act(b, (g,)) for g in range(1, n + 1))


def half_twist(j: int, k: int, n: int | None = None) -> Word:
    """Positive half twist on strands j..k; empty word when j == k."""
    if j < 1 or k < j or (n is not None and k > n):
        raise RangeError(f"half_twist range [{j}, {k}] invalid")
    word: list[int] = []
    for t in range(j + 1, k + 1):
        word.extend(range(t - 1, j - 1, -1))
    return tuple(word)


# ---------------------------------------------------------------------------
# curves and arcs


def cyclic_reduce(w: Word) -> Word:
    w = reduce_word(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def cyclic_canonical(w: Word) -> Word:
    """Cyclically reduce, then pick the lexicographically least rotation."""
    w = cyclic_reduce(w)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def _normalize_twists(twists) -> Word:
    t = tuple(twists) if twists else ()
    return t if any(t) else ()


@dataclass(frozen=True)
class HoleCurve:
    """g^{-1} of the convex curve around holes start..start+span.

    ``twists`` is an optional boundary-twist offset (one entry per hole
    plus a final outer entry): extra full boundary twists composed after
    the core twist.  It is zero for every curve extracted from a diagram
    and only becomes nonzero through Hurwitz moves, which need it to stay
    closed under conjugation.
    """

    n: int
    conjugator: Word = ()
    start: int = 1
    span: int = 0
    twists: Word = ()

    def __post_init__(self):
        if not 1 <= self.start <= self.start + self.span <= self.n:
            raise RangeError(f"curve base [{self.start}, {self.start + self.span}] outside 1..{self.n}")
        _check_braid_word(self.conjugator, self.n)
        object.__setattr__(self, "conjugator", reduce_word(self.conjugator))
        t = _normalize_twists(self.twists)
        if t and len(t) != self.n + 1:
            raise RangeError("twists vector must have one entry per hole plus the outer entry")
        object.__setattr__(self, "twists", t)

    @property
    def base_word(self) -> Word:
        return tuple(range(self.start, self.start + self.span + 1))


@dataclass(frozen=True)
class HoleArc:
    """g^{-1} of the straight arc between adjacent holes start, start+1."""

    n: int
    conjugator: Word = ()
    start: int = 1
    twists: Word = ()

    def __post_init__(self):
        if not 1 <= self.start <= self.start + 1 <= self.n:
            raise RangeError(f"arc base ({self.start}, {self.start + 1}) outside 1..{self.n}")
        _check_braid_word(self.conjugator, self.n)
        object.__setattr__(self, "conjugator", reduce_word(self.conjugator))
        t = _normalize_twists(self.twists)
        if t and len(t) != self.n + 1:
            raise RangeError("twists vector must have one entry per hole plus the outer entry")
        object.__setattr__(self, "twists", t)

    @property
    def base_word(self) -> Word:
        return (self.start, self.start + 1)


Item = HoleCurve | HoleArc


def canonical_curve(c: Item) -> Word:
    """Free-homotopy canonical word: image of the base word under g^{-1},
    cyclically reduced, least rotation."""
    return cyclic_canonical(artin_act(inverse_word(c.conjugator), c.base_word, c.n))


def canonical_item(c: Item):
    kind = "arc" if isinstance(c, HoleArc) else "cycle"
    return (kind, canonical_curve(c), c.twists)


def curve_holes(c: Item) -> frozenset[int]:
    """Holes enclosed by the curve (or joined by the arc): generators with
    exponent sum 1 in the canonical word."""
    sums: dict[int, int] = {}
    for a in canonical_curve(c):
        sums[abs(a)] = sums.get(abs(a), 0) + (1 if a > 0 else -1)
    return frozenset(g for g, s in sums.items() if s == 1)


def _transport_offset(perm, offset: Word) -> Word:
    # offset entry at hole h moves to hole perm[h]; the outer entry stays
    if not offset:
        return ()
    n = len(perm)
    out = [0] * (n + 1)
    for h in range(1, n + 1):
        out[perm[h - 1] - 1] = offset[h - 1]
    out[n] = offset[n]
    return _normalize_twists(out)


def act_on_curve(b: Word, c: Item) -> Item:
    """Image of the curve/arc under the braid b: conjugator g -> g b^{-1},
    so the canonical word transforms by artin_act(b, .)."""
    _check_braid_word(b, c.n)
    conj = reduce_word(c.conjugator + inverse_word(b))
    twists = _transport_offset(braid_permutation(b, c.n), c.twists)
    return replace(c, conjugator=conj, twists=twists)


def item_word(c: Item) -> Word:
    """Braid word of the item's twist (cycle) or interchange (arc).
    Boundary-parallel cycles (span 0) have the empty word: their twist
    lives entirely in the ledger."""
    g = c.conjugator
    if isinstance(c, HoleArc):
        core = half_twist(c.start, c.start + 1)
    elif c.span == 0:
        return ()
    else:
        core = half_twist(c.start, c.start + c.span)
        core = core + core
    return reduce_word(inverse_word(g) + core + g)


def _zeros(n: int) -> list[int]:
    return [0] * (n + 1)


def item_offset(c: Item) -> Word:
    """Total boundary-twist offset of the item's mapping class: the stored
    twists, plus 2 at the enclosed hole for a boundary-parallel cycle."""
    off = list(c.twists) if c.twists else _zeros(c.n)
    if isinstance(c, HoleCurve) and c.span == 0:
        word = canonical_curve(c)
        if len(word) != 1 or word[0] < 0:
            raise InternalInconsistencyError("boundary-parallel cycle with non-generator canonical word")
        off[word[0] - 1] += 2
    return tuple(off) if any(off) else ()


def _vec_add(a: Word, b: Word, n: int) -> Word:
    if not a:
        return b
    if not b:
        return a
    return tuple(x + y for x, y in zip(a, b))


def conjugate_item(word: Word, offset: Word, c: Item) -> Item:
    """Item representing M (item) M^{-1}, where M is the mapping class
    with braid word ``word`` followed by boundary twists ``offset``."""
    n = c.n
    moved = act_on_curve(word, c)
    if offset:
        p_w = braid_permutation(word, n)
        p_item = braid_permutation(item_word(c), n)
        delta = [x - y for x, y in zip(_transport_offset(perm_inverse(p_item), offset) or _zeros(n), offset)]
        delta = _transport_offset(p_w, tuple(delta))
        if delta:
            base = moved.twists if moved.twists else tuple(_zeros(n))
            moved = replace(moved, twists=_normalize_twists(_vec_add(base, delta, n)))
    return moved


# ---------------------------------------------------------------------------
# mapping classes


@dataclass(frozen=True)
class MappingClass:
    """(faithful braid image, hole permutation, boundary-twist ledger).

    ``images[i-1]`` is the image of x_i under the Artin action; ``perm``
    sends each hole to its destination; ``ledger`` counts boundary half
    twists per hole (source labeling) plus one final outer entry.
    """

    n: int
    images: tuple[Word, ...]
    perm: tuple[int, ...]
    ledger: tuple[int, ...]


def mc_identity(n: int) -> MappingClass:
    return MappingClass(n, tuple((g,) for g in range(1, n + 1)), perm_identity(n), tuple([0] * (n + 1)))


def mc_from_braid(word: Word, n: int, ledger=None) -> MappingClass:
    _check_braid_word(word, n)
    images = tuple(artin_act(word, (g,)) for g in range(1, n + 1))
    led = tuple(ledger) if ledger else tuple([0] * (n + 1))
    return MappingClass(n, images, braid_permutation(word, n), led)


def _subst(word: Word, images) -> Word:
    out: list[int] = []
    for a in word:
        img = images[abs(a) - 1] if a > 0 else inverse_word(images[abs(a) - 1])
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def mc_compose(f: MappingClass, g: MappingClass) -> MappingClass:
    """f after g (g acts first)."""
    if f.n != g.n:
        raise StrandMismatchError("mapping classes over different hole counts")
    n = f.n
    images = tuple(_subst(g.images[i], f.images) for i in range(n))
    perm = perm_compose(f.perm, g.perm)
    ledger = [g.ledger[h] + f.ledger[g.perm[h] - 1] for h in range(n)]
    ledger.append(f.ledger[n] + g.ledger[n])
    return MappingClass(n, images, perm, tuple(ledger))


def mc_equal(f: MappingClass, g: MappingClass) -> bool:
    return f.n == g.n and f.images == g.images and f.ledger == g.ledger


def boundary_twists(n: int, offset: Word) -> MappingClass:
    ident = mc_identity(n)
    if not offset:
        return ident
    if len(offset) != n + 1:
        raise RangeError("offset vector must have one entry per hole plus the outer entry")
    return MappingClass(n, ident.images, ident.perm, tuple(offset))


def mc_of_item(c: Item) -> MappingClass:
    word = item_word(c)
    off = item_offset(c)
    led = off if off else None
    return mc_from_braid(word, c.n, ledger=led)


def twist_of(c: HoleCurve) -> MappingClass:
    """Positive Dehn twist about the curve; boundary-parallel curves give
    the identity braid class with ledger +2 at their hole."""
    if not isinstance(c, HoleCurve):
        raise RangeError("twist_of expects a closed curve")
    return mc_of_item(c)


def interchange_of(a: HoleArc) -> MappingClass:
    """Boundary interchange (half twist) along the arc."""
    if not isinstance(a, HoleArc):
        raise RangeError("interchange_of expects an arc")
    return mc_of_item(a)


def half_boundary_twist(h: int, n: int) -> MappingClass:
    """Half twist on one boundary hole: identity braid class, ledger +1."""
    if not 1 <= h <= n:
        raise RangeError(f"hole {h} outside 1..{n}")
    off = [0] * (n + 1)
    off[h - 1] = 1
    return boundary_twists(n, tuple(off))


# ---------------------------------------------------------------------------
# factorizations and Hurwitz moves


@dataclass(frozen=True)
class Factorization:
    n: int
    items: tuple[Item, ...]

    def __post_init__(self):
        for c in self.items:
            if c.n != self.n:
                raise StrandMismatchError("factorization item over a different hole count")


def canonical_factorization(fact: Factorization):
    return tuple(canonical_item(c) for c in fact.items)


def hurwitz_move(fact: Factorization, i: int, direction: str = "forward") -> Factorization:
    """Hurwitz move at adjacent positions (i, i+1), 1-based.

    forward:  (A, B) -> (A B A^{-1}, A)
    backward: (A, B) -> (B, B^{-1} A B)

    Conjugation is exact at the representation level (conjugator words and
    twist offsets), so forward then backward restores the original values.
    """
    if not 1 <= i < len(fact.items):
        raise RangeError(f"move position {i} outside 1..{len(fact.items) - 1}")
    items = list(fact.items)
    a, b = items[i - 1], items[i]
    if direction == "forward":
        w = item_word(a)
        items[i - 1] = conjugate_item(w, item_offset(a), b)
        items[i] = a
    elif direction == "backward":
        w = item_word(b)
        p = braid_permutation(w, fact.n)
        off = item_offset(b)
        inv_off = tuple(-x for x in _transport_offset(p, off)) if off else ()
        items[i - 1] = b
        items[i] = conjugate_item(inverse_word(w), inv_off, a)
    else:
        raise RangeError(f"unknown direction {direction!r}")
    return Factorization(fact.n, tuple(items))
