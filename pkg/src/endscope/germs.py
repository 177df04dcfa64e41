"""Germ tables: end-equivalence classes of a term with preorder and accumulation.

Every point of a term space has a local germ: the homeomorphism type (with
colors) of its small clopen neighborhoods. Points with mutually embeddable
germs form one class. `derive_table` computes the finite class table of a
term together with

  leq(y, x)   germ of y clopen-embeds into every neighborhood of x
  acc(z, x)   points of class z accumulate onto points of class x

Countable planar germs are exactly the spaces w^b+1; their classes are named
"rank(b)". A term containing an Ord leaf of infinite rank has infinitely many
rank classes; these are stored symbolically as one family row "rank(*)" with
an exclusive upper bound, and queries instantiate members on demand.

User-supplied tables (JSON) go through the same queries but carry no germ
terms, so only the explicitly listed relations are available.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .normalize import _absorb_pass, normalize_structural
from .ordinals import Cnf, ONE, ZERO, add, cmp, print_cnf
from .parser import parse_cnf
from .terms import (
    Cantor,
    Color,
    Mix,
    Ord,
    Pt,
    Sum,
    Term,
    ValidationError,
    colors_of,
    is_perfect,
    mk_cantor,
    mk_mix,
    pretty,
    require_valid,
)


class UnknownClass(KeyError):
    pass


class NotGenusColored(ValueError):
    pass


FAMILY_ID = "rank(*)"

KIND_FINITE = "finite"
KIND_COUNTABLE = "countable_discrete"
KIND_CANTOR = "cantor"


@dataclass(frozen=True)
class GermClass:
    id: str
    kind: str  # "finite(n)" | "countable_discrete" | "cantor"
    color: Color
    germ: Term = None  # canonical germ term; None in user tables
    rank: Cnf = None  # set for countable planar rank classes
    family: bool = False
    family_bound: Cnf = None  # exclusive bound for the symbolic family row


@dataclass(frozen=True)
class Successor:
    preds: tuple  # class ids, finite, maximal and covering


@dataclass(frozen=True)
class NotSuccessor:
    reason: str = ""


DERIVED = "derived-from-term"
USER = "user-supplied"


@dataclass(frozen=True)
class GermTable:
    classes: tuple  # GermClass rows, sorted by id
    leq: frozenset  # pairs (y, x)
    acc: frozenset  # pairs (z, x)
    origin: str = DERIVED
    surface: bool = False

    def row(self, cid: str) -> GermClass:
        for c in self.classes:
            if c.id == cid:
                return c
        raise UnknownClass(cid)

    def ids(self) -> list:
        return [c.id for c in self.classes]

    @property
    def family_row(self):
        for c in self.classes:
            if c.family:
                return c
        return None


def kind_finite(n: int) -> str:
    return f"{KIND_FINITE}({n})"


def _kind_merge(a: str, b: str) -> str:
    if KIND_CANTOR in (a, b):
        return KIND_CANTOR
    if KIND_COUNTABLE in (a, b):
        return KIND_COUNTABLE
    return kind_finite(_finite_count(a) + _finite_count(b))


def _finite_count(kind: str) -> int:
    m = re.fullmatch(r"finite\((\d+)\)", kind)
    if not m:
        raise ValidationError(f"bad kind {kind!r}")
    return int(m.group(1))


def is_finite_kind(kind: str) -> bool:
    return kind.startswith(KIND_FINITE)


# ---------------------------------------------------------------------------
# canonical germ terms


_canon_cache: dict = {}


def canon(t: Term) -> Term:
    """Canonical form deciding germ equality.

    Extends the public normal form with two rewrites valid up to
    color-preserving homeomorphism: a perfect monochromatic space is a Cantor
    set of its color, and a one-point compactification of clopen copies of a
    same-colored Cantor-rooted space is that space itself.
    """
    if t in _canon_cache:
        return _canon_cache[t]
    out = t
    while True:
        prev = out
        out = normalize_structural(out)
        out = _canon_pass(out)
        out = _absorb_pass(out, absorbable)
        if out == prev:
            break
    _canon_cache[t] = out
    return out


def _canon_pass(t: Term) -> Term:
    if isinstance(t, Pt):
        return Ord(ZERO, 1) if t.color is Color.PLANAR else t
    if isinstance(t, Ord):
        return t
    if isinstance(t, Mix):
        node = mk_mix([_canon_pass(c) for c in t.components], t.limit_color)
        folded = _fold_perfect(node, node.limit_color)
        if folded is not None:
            return folded
        comps = set(node.components)
        if len(comps) == 1:
            (k,) = comps
            if isinstance(k, Cantor) and k.color is node.limit_color:
                return k
        return node
    if isinstance(t, Cantor):
        node = mk_cantor([_canon_pass(c) for c in t.components], t.color)
        folded = _fold_perfect(node, node.color)
        return node if folded is None else folded
    return Sum(tuple(_canon_pass(p) for p in t.parts))


def _fold_perfect(node: Term, color: Color):
    if is_perfect(node) and colors_of(node) == frozenset({color}):
        return Cantor((), color)
    return None


def _germ_color(g: Term) -> Color:
    if isinstance(g, Pt):
        return g.color
    if isinstance(g, Ord):
        return Color.PLANAR
    if isinstance(g, Mix):
        return g.limit_color
    if isinstance(g, Cantor):
        return g.color
    raise ValidationError(f"not a germ term: {pretty(g)}")


# ---------------------------------------------------------------------------
# clopen-embedding of germs


def cap(t: Term):
    """Largest rank b with w^b+1 clopen-embeddable into t, or None."""
    if isinstance(t, Pt):
        return ZERO if t.color is Color.PLANAR else None
    if isinstance(t, Ord):
        return t.rank
    kids = t.parts if isinstance(t, Sum) else t.components
    best = None
    for k in kids:
        c = cap(k)
        if c is not None and (best is None or cmp(best, c) < 0):
            best = c
    return best


def emb(s: Term, t: Term) -> bool:
    """Whether germ s clopen-embeds into germ t (both canonical)."""
    if s == t:
        return True
    if isinstance(s, Ord):
        c = cap(t)
        return c is not None and cmp(s.rank, c) <= 0
    if _cantor_sub(s, t):
        return True
    if isinstance(t, (Mix, Cantor)):
        return any(_emb_into(s, comp) for comp in t.components)
    return False


def _cantor_sub(s: Term, t: Term) -> bool:
    """A Cantor germ sits inside another dust of the same color whenever
    each of its decorations occurs densely there; the copy drops the extra
    decorations."""
    if not (isinstance(s, Cantor) and isinstance(t, Cantor)):
        return False
    if s.color is not t.color:
        return False
    return all(
        any(_emb_into(c, comp) for comp in t.components) for c in s.components
    )


def _emb_into(s: Term, u: Term) -> bool:
    cu = canon(u)
    if s == cu:
        return True
    if isinstance(s, Ord):
        c = cap(cu)
        return c is not None and cmp(s.rank, c) <= 0
    if _cantor_sub(s, cu):
        return True
    if isinstance(cu, Sum):
        return any(_emb_into(s, p) for p in cu.parts)
    if isinstance(cu, (Mix, Cantor)):
        return any(_emb_into(s, c) for c in cu.components)
    return False


# ---------------------------------------------------------------------------
# class collection


class _Collector:
    def __init__(self):
        self.germs = {}  # canonical non-rank germ -> kind string
        self.ranks = {}  # Cnf rank -> kind string
        self.fam_bound = None  # exclusive Cnf bound, always >= w when set

    def add_germ(self, g: Term, kind: str):
        self.germs[g] = _kind_merge(self.germs[g], kind) if g in self.germs else kind

    def add_rank(self, b: Cnf, kind: str):
        self.ranks[b] = _kind_merge(self.ranks[b], kind) if b in self.ranks else kind

    def bump_family(self, bound: Cnf):
        if self.fam_bound is None or cmp(self.fam_bound, bound) < 0:
            self.fam_bound = bound


def _collect(t: Term, ctx: bool, col: _Collector) -> None:
    """Gather all point classes of t; ctx marks an infinitely-repeated region."""
    base = KIND_COUNTABLE if ctx else None
    if isinstance(t, Pt):
        if t.color is Color.GENUS:
            col.add_germ(Pt(Color.GENUS), base or kind_finite(1))
        else:
            col.add_rank(ZERO, base or kind_finite(1))
        return
    if isinstance(t, Ord):
        if t.rank.is_nat():
            k = ZERO
            while cmp(k, t.rank) < 0:
                col.add_rank(k, KIND_COUNTABLE)
                k = add(k, ONE)
            col.add_rank(t.rank, base or kind_finite(t.degree))
        else:
            col.bump_family(add(t.rank, ONE) if ctx else t.rank)
            if not ctx:
                col.add_rank(t.rank, kind_finite(t.degree))
        return
    if isinstance(t, Mix):
        for c in t.components:
            _collect(c, True, col)
        g = canon(t)
        if isinstance(g, Ord):  # countable planar limit
            col.add_rank(g.rank, base or kind_finite(1))
        elif isinstance(g, Cantor):  # limit merged into a dust class
            col.add_germ(g, KIND_CANTOR)
        else:
            col.add_germ(g, base or kind_finite(1))
        return
    if isinstance(t, Cantor):
        for c in t.components:
            _collect(c, True, col)
        col.add_germ(canon(t), KIND_CANTOR)
        return
    for p in t.parts:
        _collect(p, ctx, col)


def _rank_id(b: Cnf) -> str:
    return f"rank({print_cnf(b)})"


_derive_cache: dict = {}


def derive_table(t: Term) -> GermTable:
    require_valid(t)
    t = normalize_structural(t)
    if t not in _derive_cache:
        _derive_cache[t] = _derive(t)
    return _derive_cache[t]


def _derive(t: Term) -> GermTable:
    col = _Collector()
    _collect(t, False, col)
    bound = col.fam_bound

    rows = []
    for b in sorted(col.ranks, key=_sort_key):
        if bound is not None and cmp(b, bound) < 0:
            continue  # covered by the family row
        rows.append(
            GermClass(_rank_id(b), col.ranks[b], Color.PLANAR, Ord(b, 1), rank=b)
        )
    if bound is not None:
        rows.append(
            GermClass(
                FAMILY_ID,
                KIND_COUNTABLE,
                Color.PLANAR,
                family=True,
                family_bound=bound,
            )
        )
    for g in sorted(col.germs, key=pretty):
        rows.append(GermClass(pretty(g), col.germs[g], _germ_color(g), g))

    rows = _merge_mutual(rows, bound)
    leq = _close(_leq_pairs(rows, bound))
    accs = _close(_acc_pairs(rows, bound))
    leq = _close(leq | accs)
    return GermTable(tuple(sorted(rows, key=lambda r: r.id)), frozenset(leq), frozenset(accs))


def _sort_key(b: Cnf):
    return (len(b.summands), print_cnf(b))


def _row_leq(a: GermClass, b: GermClass, bound) -> bool:
    """a ⪯ b; for the family row: every member vs. some member."""
    if a.id == b.id:
        return True
    if a.family and b.family:
        return True
    if a.family:
        c = cap(b.germ)
        return c is not None and cmp(bound, add(c, ONE)) <= 0
    if b.family:
        return a.rank is not None and cmp(a.rank, bound) < 0
    return emb(a.germ, b.germ)


def _merge_mutual(rows: list, bound) -> list:
    out = []
    for r in rows:
        target = None
        for i, existing in enumerate(out):
            if _row_leq(r, existing, bound) and _row_leq(existing, r, bound):
                target = i
                break
        if target is None:
            out.append(r)
        else:
            keep = out[target]
            if keep.kind != KIND_CANTOR and r.kind == KIND_CANTOR:
                keep, r = r, keep
            out[target] = replace(keep, kind=_kind_merge(keep.kind, r.kind))
    return out


def _leq_pairs(rows, bound) -> set:
    return {
        (a.id, b.id) for a in rows for b in rows if _row_leq(a, b, bound)
    }


def _acc_pairs(rows, bound) -> set:
    by_id = {r.id: r for r in rows}
    pairs = set()
    for x in rows:
        if x.family:
            if cmp(bound, ONE) > 0:
                pairs.add((x.id, x.id))
            continue
        g = x.germ
        if isinstance(g, Ord):
            if cmp(g.rank, ZERO) > 0:
                for z in rows:
                    if z.family or (z.rank is not None and cmp(z.rank, g.rank) < 0):
                        pairs.add((z.id, x.id))
            continue
        if isinstance(g, Pt):
            continue
        for src in _interior_ids(g, rows, bound):
            if src in by_id:
                pairs.add((src, x.id))
        if isinstance(g, Cantor):
            pairs.add((x.id, x.id))
    return pairs


def _interior_ids(g: Term, rows, bound) -> set:
    """Ids of classes whose points lie arbitrarily close to the basepoint of g."""
    col = _Collector()
    for c in g.components:
        _collect(c, True, col)
    out = set()
    for b in col.ranks:
        if bound is not None and cmp(b, bound) < 0:
            out.add(FAMILY_ID)
        else:
            out.add(_rank_id(b))
    if col.fam_bound is not None:
        out.add(FAMILY_ID)
    for sub in col.germs:
        sid = pretty(sub)
        if any(r.id == sid for r in rows):
            out.add(sid)
        else:  # merged into an equivalent row
            for r in rows:
                if r.germ is not None and not isinstance(r.germ, Ord):
                    if emb(sub, r.germ) and emb(r.germ, sub):
                        out.add(r.id)
                        break
    return out


def _close(pairs: set) -> set:
    pairs = set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(pairs):
            for (c, d) in list(pairs):
                if b == c and (a, d) not in pairs:
                    pairs.add((a, d))
                    changed = True
    return pairs


# ---------------------------------------------------------------------------
# sibling absorption (rewrite rule R4)


def absorbable(a: Term, b: Term) -> bool:
    """Whether copies of a add no new structure next to b.

    True iff every class of a matches a class of b that accumulates
    somewhere inside b (or is of cantor kind), so the copies can be slid
    into the accumulation sites of b without changing any germ.
    """
    ta, tb = derive_table(a), derive_table(b)
    fam_b = tb.family_row
    acc_sources = {z for (z, _) in tb.acc}
    for row in ta.classes:
        if row.family:
            if fam_b is None or cmp(fam_b.family_bound, row.family_bound) < 0:
                return False
            if FAMILY_ID not in acc_sources:
                return False
            continue
        if row.rank is not None:
            if fam_b is not None and cmp(row.rank, fam_b.family_bound) < 0:
                continue  # family members accumulate along the rank chain
            rid = _rank_id(row.rank)
            if any(r.id == rid for r in tb.classes) and rid in acc_sources:
                continue
            return False
        match = None
        for r in tb.classes:
            if r.germ is None or r.rank is not None or r.family:
                continue
            if emb(row.germ, r.germ) and emb(r.germ, row.germ):
                match = r
                break
        if match is None:
            return False
        if match.kind != KIND_CANTOR and match.id not in acc_sources:
            return False
    return True


# ---------------------------------------------------------------------------
# queries


def _resolve(table: GermTable, cid: str):
    """A row, or ("member", rank) for an instantiated family member id."""
    for r in table.classes:
        if r.id == cid:
            return r
    fam = table.family_row
    if fam is not None and table.origin == DERIVED:
        m = re.fullmatch(r"rank\((.*)\)", cid)
        if m and m.group(1) != "*":
            try:
                b = parse_cnf(m.group(1))
            except Exception:
                raise UnknownClass(cid) from None
            if cmp(b, fam.family_bound) < 0:
                return ("member", b)
    raise UnknownClass(cid)


def _pair_leq(table: GermTable, y, x) -> bool:
    fam = table.family_row
    bound = fam.family_bound if fam is not None else None
    ym = isinstance(y, tuple)
    xm = isinstance(x, tuple)
    if not ym and not xm:
        if table.origin == USER or y.germ is None or x.germ is None:
            return (y.id, x.id) in table.leq
        return (y.id, x.id) in table.leq
    yr = y[1] if ym else None
    xr = x[1] if xm else None
    if ym and xm:
        return cmp(yr, xr) <= 0
    if ym:
        if x.family:
            return True
        c = cap(x.germ) if x.germ is not None else None
        return c is not None and cmp(yr, c) <= 0
    # y row, x member
    if y.family:
        return cmp(bound, add(xr, ONE)) <= 0
    return y.rank is not None and cmp(y.rank, xr) <= 0


def dominates(table: GermTable, y: str, x: str) -> bool:
    return _pair_leq(table, _resolve(table, y), _resolve(table, x))


def maximal_classes(table: GermTable) -> set:
    out = set()
    for r in table.classes:
        strict_above = any(
            (r.id, o.id) in table.leq and (o.id, r.id) not in table.leq
            for o in table.classes
            if o.id != r.id
        )
        if not strict_above:
            out.add(r.id)
    return out


def cantor_type(table: GermTable, x: str) -> bool:
    r = _resolve(table, x)
    return not isinstance(r, tuple) and r.kind == KIND_CANTOR


def isolated_in_Eg(table: GermTable, x: str) -> bool:
    r = _resolve(table, x)
    if isinstance(r, tuple) or r.color is not Color.GENUS:
        raise NotGenusColored(x)
    for (z, tgt) in table.acc:
        if tgt == r.id and table.row(z).color is Color.GENUS:
            return False
    return True


def predecessors(table: GermTable, x: str):
    r = _resolve(table, x)
    if isinstance(r, tuple):  # instantiated family member rank(b)
        b = r[1]
        if b.is_zero():
            return NotSuccessor("no classes below")
        if b.is_successor():
            return Successor((_rank_id(b.pred()),))
        return NotSuccessor("limit rank: strictly increasing cofinal chain below")
    if r.family:
        return NotSuccessor("family members differ; instantiate a member rank")
    if table.origin == USER:
        return _predecessors_user(table, r)
    return _predecessors_derived(table, r)


def _predecessors_user(table: GermTable, r: GermClass):
    below = [
        z
        for z in table.classes
        if z.id != r.id
        and (z.id, r.id) in table.leq
        and (r.id, z.id) not in table.leq
    ]
    if not below:
        return NotSuccessor("no classes below")
    maximal = [
        z
        for z in below
        if not any(
            (z.id, o.id) in table.leq and (o.id, z.id) not in table.leq
            for o in below
            if o.id != z.id
        )
    ]
    if any(z.family for z in maximal):
        return NotSuccessor("infinitely many pairwise incomparable classes below")
    return Successor(tuple(sorted(z.id for z in maximal)))


def _predecessors_derived(table: GermTable, r: GermClass):
    rows_below = [
        z
        for z in table.classes
        if not z.family
        and z.id != r.id
        and (z.id, r.id) in table.leq
        and (r.id, z.id) not in table.leq
    ]
    fam = table.family_row
    member_cap = None
    if fam is not None and not r.family:
        c = cap(r.germ)
        if c is not None:
            hi = add(c, ONE)  # members b <= cap embed
            member_cap = hi if cmp(hi, fam.family_bound) < 0 else fam.family_bound
    candidates = list(rows_below)
    extra_member = None
    if member_cap is not None and not member_cap.is_zero():
        covered = any(
            z.germ is not None
            and cap(z.germ) is not None
            and cmp(member_cap, add(cap(z.germ), ONE)) <= 0
            for z in rows_below
        )
        if not covered:
            if member_cap.is_successor():
                extra_member = member_cap.pred()
            else:
                return NotSuccessor(
                    "limit rank family below with no covering class"
                )
    if not candidates and extra_member is None:
        return NotSuccessor("no classes below")

    def leq_cand(a, b) -> bool:
        ra = ("member", a) if isinstance(a, Cnf) else a
        rb = ("member", b) if isinstance(b, Cnf) else b
        return _pair_leq(table, ra, rb)

    pool = candidates + ([extra_member] if extra_member is not None else [])
    maximal = [
        c
        for c in pool
        if not any(
            leq_cand(c, o) and not leq_cand(o, c) for o in pool if o is not c
        )
    ]
    ids = sorted(
        _rank_id(m) if isinstance(m, Cnf) else m.id for m in maximal
    )
    return Successor(tuple(ids))


# ---------------------------------------------------------------------------
# JSON exchange


def to_json(table: GermTable) -> dict:
    classes = []
    for r in table.classes:
        row = {"id": r.id, "kind": r.kind, "color": str(r.color)}
        if r.family:
            row["family"] = True
        if r.family_bound is not None:
            row["family_bound"] = print_cnf(r.family_bound)
        classes.append(row)
    out = {
        "classes": classes,
        "leq": sorted([y, x] for (y, x) in table.leq),
        "acc": sorted([z, x] for (z, x) in table.acc),
        "origin": table.origin,
    }
    if table.surface:
        out["surface"] = True
    return out


_COLORS = {"planar": Color.PLANAR, "genus": Color.GENUS}


def from_json(doc: dict) -> GermTable:
    if not isinstance(doc, dict) or "classes" not in doc:
        raise ValidationError("germ table document needs a 'classes' list")
    if not doc["classes"]:
        raise ValidationError("germ table needs at least one class")
    rows = []
    ids = set()
    for entry in doc["classes"]:
        cid = entry.get("id")
        kind = entry.get("kind", "")
        color = entry.get("color")
        if not isinstance(cid, str) or cid in ids:
            raise ValidationError(f"bad or duplicate class id {cid!r}")
        ids.add(cid)
        if kind not in (KIND_COUNTABLE, KIND_CANTOR) and not re.fullmatch(
            r"finite\([1-9]\d*\)", kind
        ):
            raise ValidationError(f"bad kind {kind!r} for class {cid}")
        if color not in _COLORS:
            raise ValidationError(f"bad color {color!r} for class {cid}")
        bound = entry.get("family_bound")
        rows.append(
            GermClass(
                cid,
                kind,
                _COLORS[color],
                family=bool(entry.get("family")),
                family_bound=parse_cnf(bound) if bound else None,
            )
        )
    leq = {(y, x) for y, x in doc.get("leq", [])}
    accs = {(z, x) for z, x in doc.get("acc", [])}
    for pair in leq | accs:
        for cid in pair:
            if cid not in ids:
                raise ValidationError(f"relation mentions unknown class {cid!r}")
    leq |= {(cid, cid) for cid in ids}
    leq = _close(leq | accs)
    accs = _close(accs)
    by_id = {r.id: r for r in rows}
    for (z, x) in accs:
        if by_id[z].color is Color.GENUS and by_id[x].color is not Color.GENUS:
            raise ValidationError(
                f"genus class {z} accumulates onto planar class {x}"
            )
    return GermTable(
        tuple(sorted(rows, key=lambda r: r.id)),
        frozenset(leq),
        frozenset(accs),
        origin=doc.get("origin", USER),
        surface=bool(doc.get("surface")),
    )
