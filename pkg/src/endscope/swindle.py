"""Finitary checks for the commutator constructions.

Homeomorphisms supported on bricks are modeled as slot-indexed maps: each
slot carries a reduced word over free generators 1..d (negative integers are
inverse letters), and an optional constant slot shift models the permutation
part. All infinite products are verified on a finite window; discrepancies
can occur only within one brick width of the window edge, so window edges are
excluded from every assertion.

Contents:

  anderson                     write a brick-supported map as one commutator
                               [u, v] with v a row shift
  alternating_check            the two halves of a split carry mutually
                               inverse words under a slot bijection
  commutator_from_alternating  factor an alternating map as [f1, hmap]
  em_layout                    the interleaved red/blue layout whose two
                               readings h1, h2 both have alternating supports
  fragment_slots               split a bounded-displacement map into two
                               pieces supported on disjoint bricks
"""

from __future__ import annotations

from dataclasses import dataclass


class BadSupport(ValueError):
    pass


class BadSplit(ValueError):
    pass


class NotAlternating(ValueError):
    pass


class UnboundedDisplacement(ValueError):
    pass


# ---------------------------------------------------------------------------
# reduced words over free generators
#
# A word is a tuple of nonzero ints: k is the k-th generator, -k its inverse.


def reduce_word(letters) -> tuple:
    out = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_mul(*words) -> tuple:
    out = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def word_inv(w) -> tuple:
    return tuple(-x for x in reversed(w))


def word_commutator(a, b) -> tuple:
    return word_mul(a, b, word_inv(a), word_inv(b))


# ---------------------------------------------------------------------------
# slot words


@dataclass(frozen=True)
class SlotWord:
    """A finite assignment of reduced words to integer slots.

    Unassigned slots carry the identity.
    """

    assignment: tuple  # sorted tuple of (slot, word) pairs, words nonempty

    def word_at(self, slot: int) -> tuple:
        for s, w in self.assignment:
            if s == slot:
                return w
        return ()

    def support(self) -> tuple:
        return tuple(s for s, _ in self.assignment)

    def restrict(self, slots) -> "SlotWord":
        keep = set(slots)
        return SlotWord(tuple(p for p in self.assignment if p[0] in keep))


def slot_word(mapping) -> SlotWord:
    items = []
    for s, w in dict(mapping).items():
        w = reduce_word(w)
        if w:
            items.append((int(s), w))
    return SlotWord(tuple(sorted(items)))


EMPTY = SlotWord(())


def sw_mul(a: SlotWord, b: SlotWord) -> SlotWord:
    """Slotwise product (both maps diagonal, i.e. no permutation part)."""
    out = {}
    for s in set(a.support()) | set(b.support()):
        out[s] = word_mul(a.word_at(s), b.word_at(s))
    return slot_word(out)


def sw_inv(a: SlotWord) -> SlotWord:
    return SlotWord(tuple(sorted((s, word_inv(w)) for s, w in a.assignment)))


# ---------------------------------------------------------------------------
# elements with a constant shift (permutation part s -> s + k)


@dataclass(frozen=True)
class _ShiftElem:
    shift: int
    words: SlotWord


def _e_mul(a: _ShiftElem, b: _ShiftElem) -> _ShiftElem:
    # (a.b) acts as a after b; the word at s is a's word there times b's word
    # pulled back through a's permutation
    out = {}
    support = set(a.words.support()) | {
        s + a.shift for s in b.words.support()
    }
    for s in support:
        out[s] = word_mul(a.words.word_at(s), b.words.word_at(s - a.shift))
    return _ShiftElem(a.shift + b.shift, slot_word(out))


def _e_inv(a: _ShiftElem) -> _ShiftElem:
    out = {
        s - a.shift: word_inv(w) for s, w in a.words.assignment
    }
    return _ShiftElem(-a.shift, slot_word(out))


def _e_commutator(a: _ShiftElem, b: _ShiftElem) -> _ShiftElem:
    return _e_mul(_e_mul(a, b), _e_mul(_e_inv(a), _e_inv(b)))


# ---------------------------------------------------------------------------
# the one-commutator trick


def anderson(h: SlotWord, depth: int):
    """Write h as the commutator [u, v] of a stacked product and a shift.

    h must live on the base brick row (slots 0 .. width-1). v shifts by one
    row; u carries a copy of h on each of the first depth+1 rows. Returns
    (u, v, check) where v is the shift amount and check reports whether
    [u, v] agrees with h on every slot in [0, depth).
    """
    if any(s < 0 for s in h.support()):
        raise BadSupport("h must be supported on the base row (slots >= 0)")
    width = max(h.support(), default=0) + 1
    stacked = {}
    for i in range(depth + 1):
        for s, w in h.assignment:
            stacked[s + i * width] = w
    u = slot_word(stacked)
    comm = _e_commutator(_ShiftElem(0, u), _ShiftElem(width, EMPTY))
    check = comm.shift == 0 and all(
        comm.words.word_at(s) == h.word_at(s) for s in range(depth)
    )
    return u, width, check


# ---------------------------------------------------------------------------
# alternating supports


def _check_split(f: SlotWord, split, conj):
    a1, a2 = tuple(split[0]), tuple(split[1])
    if set(a1) & set(a2):
        raise BadSplit("the two halves overlap")
    if sorted(conj) != sorted(a1) or sorted(conj[s] for s in conj) != sorted(a2):
        raise BadSplit("conj is not a bijection from the first half onto the second")
    if not set(f.support()) <= set(a1) | set(a2):
        raise BadSplit("f has support outside the split")
    return a1, a2


def alternating_check(f: SlotWord, split, conj) -> bool:
    """True iff the word at conj(s) is the inverse of the word at s."""
    a1, _ = _check_split(f, split, conj)
    return all(f.word_at(conj[s]) == word_inv(f.word_at(s)) for s in a1)


def commutator_from_alternating(f: SlotWord, split, conj):
    """Factor an alternating map as f = [f1, hmap].

    f1 is the restriction of f to the first half; hmap is the involution
    swapping the halves along conj. The factorization is verified slotwise.
    """
    if not alternating_check(f, split, conj):
        raise NotAlternating("the split does not carry mutually inverse words")
    a1, _ = _check_split(f, split, conj)
    f1 = f.restrict(a1)
    hmap = dict(conj)
    hmap.update({conj[s]: s for s in conj})
    # [f1, hmap]: conjugation by the involution moves the inverted words of
    # f1 onto the second half, which is exactly f there
    product = {}
    for s, w in f1.assignment:
        product[s] = w
        product[hmap[s]] = word_inv(w)
    if slot_word(product) != f:
        raise NotAlternating("slotwise factorization check failed")
    return f1, hmap


# ---------------------------------------------------------------------------
# the interleaved layout


@dataclass(frozen=True)
class SlotLayout:
    """An ordered slot list with tags red(i), blue(i), blue(~i), separator."""

    tags: tuple  # tag string per slot index
    red: tuple  # slot indices of the red letters, in order
    blue_blocks: tuple  # (inverse-half slots, positive-half slots) per block

    def separators_ok(self) -> bool:
        groups = self.red + tuple(
            s for inv, pos in self.blue_blocks for s in inv + pos
        )
        tagged = sorted(groups)
        for a, b in zip(tagged, tagged[1:]):
            block_of = _group_key(self, a), _group_key(self, b)
            if block_of[0] != block_of[1] and b == a + 1:
                return False
        return True


def _group_key(layout: SlotLayout, slot: int):
    for k, r in enumerate(layout.red):
        if slot == r:
            return ("red", k)
    for k, (inv, pos) in enumerate(layout.blue_blocks):
        if slot in inv or slot in pos:
            return ("blue", k)
    return None


def em_layout(d: int):
    """Build the interleaved layout for letters 1..d.

    The layout alternates red slots (the letters of f, in order) with blue
    blocks: block k carries the inverse letters ~1..~k followed by the
    positive letters 1..k, with a separator slot between any two consecutive
    groups. Returns (layout, h1, h2) where h1 reads every tagged slot and h2
    reads the blue slots only.
    """
    if d < 1:
        raise ValueError("need at least one letter")
    tags = []
    words = {}
    red = []
    blue_blocks = []

    def emit(tag, letter=None):
        idx = len(tags)
        tags.append(tag)
        if letter is not None:
            words[idx] = (letter,)
        return idx

    for k in range(1, d + 1):
        red.append(emit(f"red({k})", k))
        emit("separator")
        inv_half = tuple(emit(f"blue(~{i})", -i) for i in range(1, k + 1))
        pos_half = tuple(emit(f"blue({i})", i) for i in range(1, k + 1))
        blue_blocks.append((inv_half, pos_half))
        if k < d:
            emit("separator")

    layout = SlotLayout(tuple(tags), tuple(red), tuple(blue_blocks))
    h1 = slot_word(words)
    h2 = slot_word({s: w for s, w in words.items() if s not in set(red)})
    return layout, h1, h2


def em_blue_groupings(layout: SlotLayout):
    """The alternating splits of h2: each blue block pairs ~i with i."""
    out = []
    for inv_half, pos_half in layout.blue_blocks:
        conj = dict(zip(inv_half, pos_half))
        out.append(((inv_half, pos_half), conj))
    return out


def em_regroupings(layout: SlotLayout):
    """The regrouped alternating splits of h1.

    Group k pairs {positive half of blue block k-1, red slot k} against the
    inverse half of blue block k, matching letters: the trailing positive
    half of the final blue block belongs to no complete group and is left
    out.
    """
    out = []
    for k, (inv_half, _) in enumerate(layout.blue_blocks):
        first = (layout.blue_blocks[k - 1][1] if k else ()) + (layout.red[k],)
        conj = dict(zip(first, inv_half))
        out.append(((first, inv_half), conj))
    return out


def em_check(d: int) -> dict:
    """Replay every check on the layout for letters 1..d."""
    layout, h1, h2 = em_layout(d)
    blue = [
        alternating_check(h2.restrict(split[0] + split[1]), split, conj)
        for split, conj in em_blue_groupings(layout)
    ]
    regrouped = [
        alternating_check(h1.restrict(split[0] + split[1]), split, conj)
        for split, conj in em_regroupings(layout)
    ]
    f = slot_word({s: h1.word_at(s) for s in layout.red})
    reconstruction = word_mul(*(f.word_at(s) for s in layout.red)) == tuple(
        range(1, d + 1)
    )
    # h2 and f have disjoint supports, so the slotwise identity h1 = h2.f
    # holds in both multiplication orders
    orders = []
    if sw_mul(h2, f) == h1:
        orders.append("h2.f")
    if sw_mul(f, h2) == h1:
        orders.append("f.h2")
    return {
        "letters": d,
        "separators": layout.separators_ok(),
        "blue_blocks": blue,
        "regrouped_blocks": regrouped,
        "reconstruction": reconstruction,
        "product_identity": "both" if len(orders) == 2 else "/".join(orders),
    }


# ---------------------------------------------------------------------------
# fragmentation


@dataclass(frozen=True)
class SlotMap:
    """A slot word together with a permutation part.

    The permutation shifts by `shift`, restricted to the slots whose residue
    class mod `modulus` lies in `residues` (residues None means the shift
    applies everywhere). `bounded` declares whether the displacement of the
    underlying map is finite; descriptors without a finite bound cannot be
    fragmented.
    """

    words: SlotWord
    shift: int = 0
    residues: frozenset = None
    modulus: int = 0
    bounded: bool = True

    def moves(self, s: int) -> bool:
        if self.shift == 0:
            return False
        if self.residues is None:
            return True
        return s % self.modulus in self.residues

    def perm(self, s: int) -> int:
        return s + self.shift if self.moves(s) else s

    def word_at(self, s: int) -> tuple:
        return self.words.word_at(s)


def fragment_slots(f: SlotMap):
    """Split f into two maps supported on disjoint bricks with g.h = f.

    A map with no permutation part splits along even/odd slots. A constant
    shift by c with |c| >= 2 splits along residue classes mod |c|: each class
    is a shift orbit, so half the classes go to one piece and half to the
    other, and the supports are disjoint arithmetic-progression bricks. A
    shift by 1 is a single orbit and admits no such split.
    """
    if not f.bounded:
        raise UnboundedDisplacement("no finite displacement bound declared")
    if f.residues is not None:
        raise UnboundedDisplacement(
            "only total shifts are fragmented; this map is already a fragment"
        )
    c = f.shift
    if c == 0:
        evens = {s: w for s, w in f.words.assignment if s % 2 == 0}
        odds = {s: w for s, w in f.words.assignment if s % 2 == 1}
        return (
            SlotMap(slot_word(evens)),
            SlotMap(slot_word(odds)),
        )
    m = abs(c)
    if m == 1:
        raise UnboundedDisplacement(
            "a shift by 1 is a single slot orbit; no interleaved index "
            "sequences with the required gaps exist"
        )
    first = frozenset(range(m // 2))
    second = frozenset(range(m // 2, m))
    g_words = {s: w for s, w in f.words.assignment if s % m in first}
    h_words = {s: w for s, w in f.words.assignment if s % m in second}
    g = SlotMap(slot_word(g_words), c, first, m)
    h = SlotMap(slot_word(h_words), c, second, m)
    return g, h


def check_fragment(f: SlotMap, g: SlotMap, h: SlotMap, window: int = 64) -> bool:
    """Disjoint supports, and g.h = f on every slot of [-window, window]."""
    for s in range(-window, window + 1):
        in_g = g.moves(s) or bool(g.word_at(s))
        in_h = h.moves(s) or bool(h.word_at(s))
        if in_g and in_h:
            return False
        if g.perm(h.perm(s)) != f.perm(s):
            return False
        # wreath composition: g's word there, then h's word pulled back
        # through g's permutation
        pull = s - g.shift if g.moves(s) else s
        if word_mul(g.word_at(s), h.word_at(pull)) != f.word_at(s):
            return False
    return True
