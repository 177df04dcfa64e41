"""Stability certificates: decompositions, shrink witnesses, brick shifts,
stable partitions, and annulus decompositions.

A neighborhood U of a point x is stable when U minus x splits into clopen
pieces Y_1, Y_2, ... descending to x, with each piece embedding into the
next, such that any infinite subsequence of pieces reassembles to U minus x.
Certificates here are symbolic recipes (piece terms indexed by round), and
the checker replays every obligation at a finite depth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .germs import GermTable, canon, derive_table, _resolve
from .normalize import normalize_structural
from .ordinals import Cnf, ZERO, cmp, fundamental, print_cnf
from .terms import (
    Color,
    Mix,
    Ord,
    Pt,
    Sum,
    SurfaceDescriptor,
    Term,
    mk_mix,
    pretty,
    require_valid,
)


class NotStable(ValueError):
    pass


class BadSubneighborhood(ValueError):
    pass


class NotClopenImage(ValueError):
    pass


class NotTelescoping(ValueError):
    def __init__(self, failure: str):
        super().__init__(f"basepoint is not telescoping (failure {failure})")
        self.failure = failure


DEFAULT_DEPTH = 20


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class Decomposition:
    basepoint: str
    shape: str  # "degenerate" | "rounds" | "shells" | "rank-blocks"
    germ: Term  # neighborhood type U of the basepoint (None for degenerate Pt)
    rank: Cnf = None  # for rank-blocks

    def piece(self, k: int):
        """Term of the k-th clopen piece Y_k (1-based); None when degenerate."""
        if self.shape == "degenerate":
            return None
        if self.shape == "rounds":
            comps = self.germ.components
            return comps[0] if len(comps) == 1 else Sum(comps)
        if self.shape == "shells":
            return self.germ
        below = (
            self.rank.pred()
            if self.rank.is_successor()
            else fundamental(self.rank, k)
        )
        return Ord(below, 1)


@dataclass(frozen=True)
class Stable:
    decomposition: Decomposition


@dataclass(frozen=True)
class Unstable:
    obstruction: str


@dataclass(frozen=True)
class Unknown:
    note: str = ""


def stable_nbhd(table: GermTable, x: str):
    row = _resolve(table, x)
    if isinstance(row, tuple):  # instantiated family member rank(b)
        return Stable(_rank_decomposition(x, row[1]))
    if table.origin == "user-supplied" or row.germ is None and not row.family:
        for z in table.classes:
            if z.family and z.id != row.id and (z.id, row.id) in table.acc:
                return Unstable(
                    "cofinally many incomparable maximal germs accumulate at "
                    + row.id
                )
        return Unknown("no decomposition witness derivable from a bare table")
    if row.family:
        bound = row.family_bound
        rep = bound.pred() if bound.is_successor() else fundamental(bound, 1)
        return Stable(_rank_decomposition(x, rep))
    g = row.germ
    if isinstance(g, Pt) or (isinstance(g, Ord) and g.rank.is_zero()):
        return Stable(Decomposition(x, "degenerate", g))
    if isinstance(g, Ord):
        return Stable(_rank_decomposition(x, g.rank))
    if isinstance(g, Mix):
        return Stable(Decomposition(x, "rounds", g))
    return Stable(Decomposition(x, "shells", g))


def _rank_decomposition(x: str, b: Cnf) -> Decomposition:
    if b.is_zero():
        return Decomposition(x, "degenerate", Ord(ZERO, 1))
    return Decomposition(x, "rank-blocks", Ord(b, 1), rank=b)


def decompose(t: Term, x: str) -> Decomposition:
    res = stable_nbhd(derive_table(t), x)
    if not isinstance(res, Stable):
        raise NotStable(f"{x}: {res}")
    return res.decomposition


def _piece_embeds(a: Term, b: Term) -> bool:
    """Y embedding used between consecutive pieces."""
    if a is None or b is None:
        return a is None and b is None
    ca, cb = canon(a), canon(b)
    if ca == cb:
        return True
    if isinstance(ca, Ord) and isinstance(cb, Ord):
        c = cmp(ca.rank, cb.rank)
        return c < 0 or (c == 0 and ca.degree <= cb.degree)
    return False


def check_decomposition(dec: Decomposition, depth: int = DEFAULT_DEPTH, seed: int = 0) -> list:
    """Replay every certificate obligation; returns a list of failures."""
    problems = []
    if dec.shape == "degenerate":
        return problems
    pieces = [dec.piece(k) for k in range(1, depth + 1)]
    # index sanity: rounds occupy distinct indices descending to the basepoint
    if len(pieces) != depth:
        problems.append("piece family truncated")
    for k in range(depth - 1):
        if not _piece_embeds(pieces[k], pieces[k + 1]):
            problems.append(f"no embedding Y_{k + 1} -> Y_{k + 2}")
    if dec.shape == "rank-blocks":
        for k, p in enumerate(pieces):
            if cmp(p.rank, dec.rank) >= 0:
                problems.append(f"piece {k + 1} does not sit strictly below the basepoint rank")
    rng = random.Random(seed)
    for trial in range(3):
        size = rng.randint(4, 8)
        picks = sorted(rng.sample(range(1, 3 * depth), size))
        problems.extend(_check_reassembly(dec, picks))
    return problems


def _check_reassembly(dec: Decomposition, picks: list) -> list:
    """Any infinite subsequence of pieces rebuilds the punctured neighborhood."""
    pieces = [dec.piece(k) for k in picks]
    if dec.shape in ("rounds", "shells"):
        color = (
            dec.germ.limit_color if isinstance(dec.germ, Mix) else dec.germ.color
        )
        rebuilt = canon(mk_mix(pieces, color))
        if rebuilt != canon(dec.germ):
            return [
                f"subsequence {picks} reassembles to {pretty(rebuilt)}, "
                f"not {pretty(dec.germ)}"
            ]
        return []
    # rank blocks: a subsequence of the fundamental sequence keeps supremum b
    out = []
    if dec.rank.is_successor():
        rebuilt = canon(mk_mix(pieces, Color.PLANAR))
        if rebuilt != Ord(dec.rank, 1):
            out.append(f"constant blocks reassemble to {pretty(rebuilt)}")
        return out
    ranks = [p.rank for p in pieces]
    for a, b in zip(ranks, ranks[1:]):
        if cmp(a, b) >= 0:
            out.append("subsequence ranks not strictly increasing")
    for r in ranks:
        if cmp(r, dec.rank) >= 0:
            out.append("subsequence rank escapes the limit bound")
    return out


# ---------------------------------------------------------------------------
# shrink witnesses (Hilbert-hotel reindexing)


@dataclass(frozen=True)
class ShrinkWitness:
    basepoint: str
    removed: tuple  # removed piece indices, ascending
    moves: tuple  # (source index, target index) pairs over the checked window


def build_shrink_witness(t: Term, x: str, removed, depth: int = DEFAULT_DEPTH) -> ShrinkWitness:
    dec = decompose(t, x)
    if dec.shape == "degenerate":
        raise BadSubneighborhood("degenerate neighborhoods have no removable pieces")
    removed = tuple(sorted(set(removed)))
    if not removed:
        return ShrinkWitness(x, (), tuple((k, k) for k in range(1, depth + 1)))
    if any((not isinstance(r, int)) or r < 1 for r in removed):
        raise BadSubneighborhood(
            "sub-neighborhood must keep the basepoint and remove whole pieces"
        )
    survivors = [k for k in range(1, depth + len(removed) + 1) if k not in removed]
    moves = tuple(zip(range(1, depth + 1), survivors[:depth]))
    witness = ShrinkWitness(x, removed, moves)
    problems = check_shrink_witness(dec, witness)
    if problems:
        raise BadSubneighborhood("; ".join(problems))
    return witness


def check_shrink_witness(dec: Decomposition, w: ShrinkWitness) -> list:
    problems = []
    targets = [dst for _, dst in w.moves]
    if len(set(targets)) != len(targets):
        problems.append("moved blocks overlap")
    if any(dst in w.removed for dst in targets):
        problems.append("block moved onto a removed piece")
    if any(b <= a for a, b in zip(targets, targets[1:])):
        problems.append("reindexing is not order preserving")
    for src, dst in w.moves:
        if dst < src:
            problems.append("block moved away from the basepoint")
        if not _piece_embeds(dec.piece(src), dec.piece(dst)):
            problems.append(f"piece {src} does not embed into slot {dst}")
    return problems


# ---------------------------------------------------------------------------
# clopen-embedding extension (puzzle construction)


def extend_embedding(n: int, m: int, phi: dict):
    """Extend an embedding of blocks Y[1..n] into Y[1..m] to a bijection.

    phi maps each source block 1..n to a distinct target block in 1..m.
    Returns (p, h) with p = 2m and h a permutation of 1..p agreeing with phi.
    """
    if not (0 < n < m):
        raise NotClopenImage("need n < m with n >= 1")
    if sorted(phi) != list(range(1, n + 1)):
        raise NotClopenImage("phi must cover exactly the blocks 1..n")
    targets = [phi[i] for i in range(1, n + 1)]
    if len(set(targets)) != n or any(not 1 <= t <= m for t in targets):
        raise NotClopenImage("phi must be injective into the blocks 1..m")
    p = 2 * m
    h = dict(phi)
    free_targets = [j for j in range(1, p + 1) if j not in set(targets)]
    for i, j in zip(range(n + 1, p + 1), free_targets):
        h[i] = j
    problems = check_extension(n, m, phi, p, h)
    if problems:
        raise NotClopenImage("; ".join(problems))
    return p, h


def check_extension(n: int, m: int, phi: dict, p: int, h: dict) -> list:
    problems = []
    if p != 2 * m:
        problems.append("block count is not 2m")
    if sorted(h) != list(range(1, p + 1)) or sorted(h.values()) != list(
        range(1, p + 1)
    ):
        problems.append("h is not a self-bijection of the blocks")
    for i in range(1, n + 1):
        if h.get(i) != phi.get(i):
            problems.append(f"h disagrees with phi on block {i}")
    return problems


# ---------------------------------------------------------------------------
# bricks and shifts


@dataclass(frozen=True)
class Brick:
    """Infinite, co-infinite index set as an eventually periodic word."""

    prefix: tuple = ()
    period: tuple = (1, 0)

    def __post_init__(self):
        if not self.period or any(b not in (0, 1) for b in self.prefix + self.period):
            raise ValueError("characteristic word must be bits with a nonempty period")
        if 1 not in self.period:
            raise ValueError("index set must be infinite")
        if 0 not in self.period:
            raise ValueError("complement must be infinite")

    def member(self, i: int) -> bool:
        if i < len(self.prefix):
            return bool(self.prefix[i])
        return bool(self.period[(i - len(self.prefix)) % len(self.period)])

    def elements(self, count: int) -> list:
        out, i = [], 0
        while len(out) < count:
            if self.member(i):
                out.append(i)
            i += 1
        return out

    def co_elements(self, count: int) -> list:
        out, i = [], 0
        while len(out) < count:
            if not self.member(i):
                out.append(i)
            i += 1
        return out


def _unpair(j: int):
    """Inverse Cantor pairing: j -> (u, q)."""
    w = 0
    while (w + 1) * (w + 2) // 2 <= j:
        w += 1
    t = w * (w + 1) // 2
    u = j - t
    q = w - u
    return u, q


def _pair(u: int, q: int) -> int:
    w = u + q
    return w * (w + 1) // 2 + u


def _row_of_u(u: int) -> int:
    # 0,1,2,3,... -> 1,-1,2,-2,...
    return (u // 2 + 1) if u % 2 == 0 else -(u // 2 + 1)


def _u_of_row(r: int) -> int:
    return 2 * (r - 1) if r > 0 else 2 * (-r - 1) + 1


@dataclass(frozen=True)
class ShiftRecipe:
    brick: Brick

    def coords(self, x: int):
        """Position (row, column) of index x; the brick occupies row 0."""
        if self.brick.member(x):
            return (0, sum(1 for i in range(x) if self.brick.member(i)))
        j = sum(1 for i in range(x) if not self.brick.member(i))
        u, q = _unpair(j)
        return (_row_of_u(u), q)

    def index_at(self, row: int, col: int) -> int:
        if row == 0:
            return self.brick.elements(col + 1)[-1]
        j = _pair(_u_of_row(row), col)
        return self.brick.co_elements(j + 1)[-1]

    def sigma(self, x: int, power: int = 1) -> int:
        row, col = self.coords(x)
        return self.index_at(row + power, col)


def shift(b: Brick) -> ShiftRecipe:
    return ShiftRecipe(b)


def check_shift(recipe: ShiftRecipe, depth: int = DEFAULT_DEPTH) -> list:
    problems = []
    base = recipe.brick.elements(depth)
    images = {}
    for i in range(-depth, depth + 1):
        row = {recipe.sigma(x, i) for x in base}
        if len(row) != len(base):
            problems.append(f"sigma^{i} is not injective on the brick window")
        images[i] = row
    for i in range(-depth, depth + 1):
        for j in range(i + 1, depth + 1):
            if images[i] & images[j]:
                problems.append(f"sigma^{i}(b) meets sigma^{j}(b)")
    # rows partition the integers: every small index lies in exactly one row
    for x in range(depth):
        row, col = recipe.coords(x)
        if recipe.index_at(row, col) != x:
            problems.append(f"index {x} not recovered from its row position")
    # orbits leave every finite prefix: orbit points are pairwise distinct
    for x in base[:5]:
        orbit = [recipe.sigma(x, i) for i in range(-depth, depth + 1)]
        if len(set(orbit)) != len(orbit):
            problems.append(f"orbit of {x} revisits an index")
    return problems


# ---------------------------------------------------------------------------
# stable partitions


def partition_stable(t: Term) -> list:
    """Clopen partition into stable neighborhoods: (part term, basepoint id)."""
    require_valid(t)
    t = normalize_structural(t)
    if isinstance(t, Sum):
        out = []
        for p in t.parts:
            out.extend(partition_stable(p))
        return out
    if isinstance(t, Ord) and t.degree > 1:
        single = Ord(t.rank, 1)
        return [(single, f"rank({print_cnf(t.rank)})") for _ in range(t.degree)]
    table = derive_table(t)
    g = canon(t)
    for r in table.classes:
        if r.germ == g:
            return [(t, r.id)]
    # the basepoint class merged into an equivalent row; use the top class
    from .germs import maximal_classes

    return [(t, sorted(maximal_classes(table))[0])]


# ---------------------------------------------------------------------------
# annulus decompositions for telescoping ends


@dataclass(frozen=True)
class Annulus:
    index: int
    contents: tuple  # germ class ids present in the annulus
    genus: bool
    term: Term = None  # end-space content; None for empty annuli


@dataclass(frozen=True)
class AnnulusDecomposition:
    basepoint: str
    case: str  # telescoping case that produced the decomposition
    annuli: tuple


def annuli(s, x: str, depth: int = DEFAULT_DEPTH) -> AnnulusDecomposition:
    """Chain of big annuli descending to the telescoping end x of surface s."""
    from .verdict import telescoping

    if isinstance(s, SurfaceDescriptor):
        table = derive_table(s.ends)
    else:
        table = s
    result = telescoping(table, x, surface_context=True)
    if result.status != "telescoping":
        raise NotTelescoping(result.failure)
    if result.case == "i":
        return AnnulusDecomposition(
            x, "i", tuple(Annulus(k, (), False) for k in range(depth))
        )
    row = table.row(x)
    if result.case == "ii":
        content = row.germ
    else:
        comps = row.germ.components
        content = comps[0] if len(comps) == 1 else Sum(comps)
    ctab = derive_table(content)
    ids = tuple(sorted(ctab.ids()))
    from .terms import has_genus

    flag = has_genus(content)
    rings = tuple(
        Annulus(k, ids, flag, term=content) for k in range(depth)
    )
    return AnnulusDecomposition(x, result.case, rings)


def check_annuli(table: GermTable, dec: AnnulusDecomposition, depth: int = 6) -> list:
    problems = []
    if dec.case == "i":
        if any(a.contents or a.term is not None for a in dec.annuli):
            problems.append("isolated-puncture annuli must be empty")
        return problems
    # every big annulus carries every end type of the ambient stable
    # neighborhood of the basepoint (not of the whole surface)
    nbhd = dec.annuli[0].term
    ntab = derive_table(nbhd)
    expected = {
        c.id for c in ntab.classes if not _is_finite_row(ntab, c.id)
    }
    for a in dec.annuli:
        if not set(a.contents) <= set(_signature_ids(a.term)):
            problems.append(f"annulus {a.index} content list mismatch")
        missing = expected - set(a.contents)
        if missing:
            problems.append(f"annulus {a.index} misses classes {sorted(missing)}")
    # unions of consecutive annuli are copies of a single annulus
    base = dec.annuli[0].term
    sig0 = _table_signature(derive_table(base))
    for j in range(2, min(depth, len(dec.annuli)) + 1):
        union = Sum(tuple([base] * j))
        if _table_signature(derive_table(union)) != sig0:
            problems.append(f"union of {j} annuli is not a copy of one annulus")
    return problems


def _is_finite_row(table: GermTable, cid: str) -> bool:
    row = table.row(cid)
    return row.kind.startswith("finite")


def _signature_ids(term: Term) -> list:
    return derive_table(term).ids()


def _table_signature(table: GermTable):
    """Table identity with finite multiplicities erased (clopen duplication
    of an annulus multiplies finite counts but changes nothing else)."""

    def k(kind: str) -> str:
        return "finite" if kind.startswith("finite") else kind

    classes = tuple(
        (c.id, k(c.kind), str(c.color), c.family, print_cnf(c.family_bound) if c.family_bound else None)
        for c in table.classes
    )
    return (classes, tuple(sorted(table.leq)), tuple(sorted(table.acc)))


# ---------------------------------------------------------------------------
# certificate JSON


def decomposition_certificate(dec: Decomposition, depth: int = DEFAULT_DEPTH, seed: int = 0) -> dict:
    pieces = []
    for k in range(1, depth + 1):
        p = dec.piece(k)
        pieces.append({"index": k, "term": pretty(p) if p is not None else None})
    return {
        "kind": "decomposition",
        "basepoint": dec.basepoint,
        "shape": dec.shape,
        "neighborhood": pretty(dec.germ) if dec.germ is not None else None,
        "pieces": pieces,
        "witnesses": [
            {"kind": "embed", "note": "each piece embeds into the next"},
            {"kind": "reassembly", "seed": seed, "trials": 3},
        ],
    }


def annuli_certificate(dec: AnnulusDecomposition) -> dict:
    return {
        "kind": "annuli",
        "basepoint": dec.basepoint,
        "case": dec.case,
        "pieces": [
            {
                "index": a.index,
                "contents": list(a.contents),
                "genus": a.genus,
                "term": pretty(a.term) if a.term is not None else None,
            }
            for a in dec.annuli
        ],
        "witnesses": [{"kind": "union-homogeneity"}],
    }


def shift_certificate(b: Brick, depth: int = DEFAULT_DEPTH) -> dict:
    recipe = shift(b)
    return {
        "kind": "shift",
        "basepoint": None,
        "pieces": [
            {"prefix": list(b.prefix), "period": list(b.period)}
        ],
        "witnesses": [
            {"kind": "disjoint-rows", "depth": depth},
            {"kind": "partition", "depth": depth},
        ],
    }
