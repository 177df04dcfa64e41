"""Independent brute-force validators over finite truncations of term spaces.

This module deliberately shares no logic with the germ/ordinal machinery: it
expands a term into a finite sample tree and computes invariants (isolated
point counts, Cantor-Bendixson derivative sequences, perfect-kernel flag)
directly on that tree. It is the second opinion used by tests to validate
normalization rewrites and preorder answers.

Tree semantics: each node is a sample point; the points in a node's child
groups converge to that node. Marks:
  "point"  an ordinary sampled point (isolated iff it has no children)
  "deep"   unexpanded countable structure beyond the depth budget
  "dust"   a Cantor-set sample point (never isolated)
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ordinals import Cnf, fundamental
from .terms import Cantor, Color, Mix, NotCountable, Ord, Pt, Sum, Term


@dataclass
class TrNode:
    color: Color
    mark: str  # "point" | "deep" | "dust"
    groups: list = field(default_factory=list)  # list of lists of TrNode
    # unexpanded nodes record what lives below the cut: every color present,
    # the colors of isolated points, and whether Cantor dust occurs
    hidden_colors: frozenset = frozenset()
    hidden_iso: frozenset = frozenset()
    hidden_dust: bool = False

    @property
    def children(self):
        return [c for grp in self.groups for c in grp]


@dataclass
class Truncation:
    depth: int
    roots: list  # forest of TrNode


def truncate(t: Term, depth: int) -> Truncation:
    return Truncation(depth, _forest(t, depth))


def _forest(t: Term, d: int) -> list:
    if isinstance(t, Pt):
        return [TrNode(t.color, "point")]
    if isinstance(t, Ord):
        if t.rank.is_zero():
            return [TrNode(Color.PLANAR, "point") for _ in range(t.degree)]
        return [_ord_node(t.rank, d) for _ in range(t.degree)]
    if isinstance(t, Mix):
        if d > 0:
            node = TrNode(t.limit_color, "point")
        else:
            node = TrNode(
                t.limit_color,
                "deep",
                hidden_colors=_t_colors(t),
                hidden_iso=_t_iso(t),
                hidden_dust=_t_dust(t),
            )
        distinct = _distinct(t.components)
        for _ in range(d):
            node.groups.append(
                [n for c in distinct for n in _forest(c, d - 1)]
            )
        return [node]
    if isinstance(t, Cantor):
        return [_cantor_node(_distinct(t.components), t.color, d)]
    out = []
    for p in t.parts:
        out.extend(_forest(p, d))
    return out


def _t_colors(t: Term) -> frozenset:
    if isinstance(t, Pt):
        return frozenset((t.color,))
    if isinstance(t, Ord):
        return frozenset((Color.PLANAR,))
    if isinstance(t, Mix):
        return frozenset((t.limit_color,)).union(*map(_t_colors, t.components))
    if isinstance(t, Cantor):
        return frozenset((t.color,)).union(
            frozenset(), *map(_t_colors, t.components)
        )
    return frozenset().union(*map(_t_colors, t.parts))


def _t_dust(t: Term) -> bool:
    if isinstance(t, Cantor):
        return True
    if isinstance(t, Mix):
        return any(_t_dust(c) for c in t.components)
    if isinstance(t, Sum):
        return any(_t_dust(p) for p in t.parts)
    return False


def _t_iso(t: Term) -> frozenset:
    """Colors of points isolated inside a clopen copy of t."""
    if isinstance(t, Pt):
        return frozenset((t.color,))
    if isinstance(t, Ord):
        return frozenset((Color.PLANAR,))
    if isinstance(t, (Mix, Cantor)):
        return frozenset().union(frozenset(), *map(_t_iso, t.components))
    return frozenset().union(*map(_t_iso, t.parts))


def _distinct(comps):
    seen, out = set(), []
    for c in comps:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _ord_node(rank: Cnf, budget: int) -> TrNode:
    """A point of the given rank together with a sampled neighborhood."""
    if rank.is_zero():
        return TrNode(Color.PLANAR, "point")
    if budget <= 0:
        planar = frozenset((Color.PLANAR,))
        return TrNode(
            Color.PLANAR, "deep", hidden_colors=planar, hidden_iso=planar
        )
    node = TrNode(Color.PLANAR, "point")
    for k in range(1, budget + 1):
        below = rank.pred() if rank.is_successor() else fundamental(rank, k)
        node.groups.append([_ord_node(below, budget - 1)])
    return node


def _cantor_node(distinct_comps, color: Color, d: int) -> TrNode:
    if d <= 0:
        return TrNode(
            color,
            "dust",
            hidden_colors=frozenset((color,)).union(
                frozenset(), *map(_t_colors, distinct_comps)
            ),
            hidden_iso=frozenset().union(
                frozenset(), *map(_t_iso, distinct_comps)
            ),
        )
    node = TrNode(color, "dust")
    if d > 0:
        node.groups.append([_cantor_node(distinct_comps, color, d - 1)])
        node.groups.append([_cantor_node(distinct_comps, color, d - 1)])
        node.groups.append(
            [n for c in distinct_comps for n in _forest(c, d - 1)]
        )
    return node


def trim(tr: Truncation, depth: int) -> Truncation:
    """Project a truncation down to a smaller depth."""
    if depth > tr.depth:
        raise ValueError("cannot deepen a truncation")

    def cut(node: TrNode, d: int) -> TrNode:
        if d <= 0 and node.groups:
            below = _subtrees(node)
            hidden_colors = frozenset(n.color for n in below).union(
                *(n.hidden_colors for n in below)
            )
            hidden_iso = frozenset(
                n.color for n in below if n.mark == "point"
            ).union(*(n.hidden_iso for n in below))
            mark = "dust" if node.mark == "dust" else "deep"
            return TrNode(
                node.color,
                mark,
                hidden_colors=hidden_colors,
                hidden_iso=hidden_iso,
                hidden_dust=any(
                    n.mark == "dust" or n.hidden_dust for n in below
                ),
            )
        out = TrNode(
            node.color,
            node.mark,
            hidden_colors=node.hidden_colors,
            hidden_iso=node.hidden_iso,
            hidden_dust=node.hidden_dust,
        )
        # dust groups (left/right/insertions) are structural, one group per
        # round everywhere else
        kept = node.groups if node.mark == "dust" else node.groups[:d]
        out.groups = [[cut(c, d - 1) for c in grp] for grp in kept]
        return out

    return Truncation(depth, [cut(r, depth) for r in tr.roots])


# ---------------------------------------------------------------------------
# Cantor-Bendixson brute force


def cb_bruteforce(tr: Truncation) -> list:
    """Repeatedly delete isolated sample points; return surviving counts.

    The initial count is included; the run stops at 0 or when only opaque
    nodes survive.
    """
    alive = _flatten(tr.roots)
    if any(n.mark == "dust" for n in alive):
        raise NotCountable("truncation contains Cantor dust")
    counts = [len(alive)]
    while alive:
        # a point is isolated at this stage once all its children are gone
        keep = [n for n in alive if not (n.mark == "point" and not n.children)]
        removed_now = {id(n) for n in alive} - {id(n) for n in keep}
        if not removed_now:
            break  # stalled on deep markers
        # prune deleted children from survivors
        alive = keep
        for n in alive:
            n_groups = []
            for grp in n.groups:
                grp2 = [c for c in grp if id(c) not in removed_now]
                n_groups.append(grp2)
            n.groups = n_groups
        counts.append(len(alive))
    return counts


def _flatten(roots) -> list:
    out = []
    stack = list(roots)
    while stack:
        n = stack.pop()
        out.append(n)
        stack.extend(n.children)
    return out


# ---------------------------------------------------------------------------
# invariant bundles and comparison


def bundle(t: Term, depth: int) -> dict:
    """Robust invariants of the depth-`depth` truncation of t."""
    tr = truncate(t, depth)
    nodes = _flatten(tr.roots)
    out = {
        "colors": sorted(str(c) for c in _colors(tr.roots)),
        "perfect_kernel": any(
            n.mark == "dust" or n.hidden_dust for n in nodes
        ),
        "deep": any(n.mark == "deep" for n in nodes),
        "hidden_isolated": sorted(
            str(c) for c in frozenset().union(*(n.hidden_iso for n in nodes))
        )
        if nodes
        else [],
    }
    iso_now = _isolated_counts(tr.roots)
    if depth >= 1:
        iso_prev = _isolated_counts(truncate(t, depth - 1).roots)
    else:
        iso_prev = iso_now
    out["isolated"] = {
        color: (iso_now[color] if iso_now[color] == iso_prev.get(color, 0) else "growing")
        for color in iso_now
    }
    if not out["perfect_kernel"] and out["colors"] in ([], ["planar"]):
        counts = cb_bruteforce(truncate(t, depth))
        stalled = counts[-1] != 0
        final = next((c for c in reversed(counts) if c != 0), 0)
        out["derivative"] = {
            "rounds": len(counts) - 1,
            "final_nonzero": final,
            "stalled": stalled,
        }
    else:
        out["derivative"] = None
    return out


def _colors(roots) -> set:
    out = set()
    for n in _flatten(roots):
        out.add(n.color)
        out |= n.hidden_colors
    return out


def _isolated_counts(roots) -> dict:
    out = {}
    for n in _flatten(roots):
        if n.mark == "point" and not n.children:
            key = str(n.color)
            out[key] = out.get(key, 0) + 1
    return out


def equiv_invariants(a: Term, b: Term, depth: int):
    """Compare invariant bundles at every depth <= depth.

    Returns "same" or ("differ", witness). Agreement is necessary, not
    sufficient, for homeomorphism. Isolated-point counts are compared only
    when settled: a count still growing with the depth is skipped, and a
    deficit on a side that carries unexpanded deep markers is skipped too
    (the missing points may sit below the depth budget).
    """
    for d in range(depth + 1):
        ba, bb = bundle(a, d), bundle(b, d)
        if ba["perfect_kernel"] != bb["perfect_kernel"]:
            return (
                "differ",
                f"perfect_kernel at depth {d}: "
                f"{ba['perfect_kernel']!r} vs {bb['perfect_kernel']!r}",
            )
        for key, witness in (
            ("colors", _colors_mismatch(ba, bb)),
            ("isolated", _isolated_mismatch(ba, bb)),
            ("derivative", _derivative_mismatch(ba, bb)),
        ):
            if witness:
                return ("differ", f"{key} at depth {d}: {witness}")
    return "same"


def _colors_mismatch(ba: dict, bb: dict):
    # colors account for unexpanded regions, so the sets are exact
    if ba["colors"] != bb["colors"]:
        return f"{ba['colors']!r} vs {bb['colors']!r}"
    return None


def _isolated_mismatch(ba: dict, bb: dict):
    for color in set(ba["isolated"]) | set(bb["isolated"]):
        va = ba["isolated"].get(color)
        vb = bb["isolated"].get(color)
        if va == vb:
            continue
        if "growing" in (va, vb):
            # a growing count is consistent with any nonempty other side;
            # against an absent side the absence must be explainable by
            # unexpanded structure carrying that color
            other, side = (vb, bb) if va == "growing" else (va, ba)
            if other is None and color not in side["hidden_isolated"]:
                return f"{color}: {va!r} vs {vb!r}"
            continue
        deficient = ba if (va or 0) < (vb or 0) else bb
        if color in deficient["hidden_isolated"]:
            continue
        return f"{color}: {va!r} vs {vb!r}"
    return None


def _derivative_mismatch(ba: dict, bb: dict):
    da, db = ba["derivative"], bb["derivative"]
    if da is None and db is None:
        return None
    if (da is None) != (db is None):
        return f"{da!r} vs {db!r}"
    if da["stalled"] and db["stalled"]:
        return None  # leftover counts under a stall are sampling artifacts
    if da["stalled"] != db["stalled"]:
        return f"stalled {da['stalled']!r} vs {db['stalled']!r}"
    if (da["rounds"], da["final_nonzero"]) != (db["rounds"], db["final_nonzero"]):
        return f"{da!r} vs {db!r}"
    return None


# ---------------------------------------------------------------------------
# truncation-level clopen-embedding check (second opinion for the preorder)


def tr_embeds(a: Term, b: Term, depth: int) -> bool:
    """Whether the depth-truncation of a fits into that of b as sample trees."""
    fa = truncate(a, depth).roots
    fb = truncate(b, depth).roots
    return _fit_forest(fa, fb)


def _fit_forest(fa, fb) -> bool:
    # every root of fa must fit somewhere in fb's forest (subtrees reusable:
    # the target regions repeat, so multiplicity is not an obstruction)
    candidates = []
    for r in fb:
        candidates.extend(_subtrees(r))
    return all(any(_fits(x, y) for y in candidates) for x in fa)


def _subtrees(node):
    out = [node]
    for c in node.children:
        out.extend(_subtrees(c))
    return out


def _fits(x: TrNode, y: TrNode) -> bool:
    if x.color != y.color:
        return False
    if x.mark == "dust":
        return y.mark == "dust"
    if y.mark == "dust":
        # a convergence point can sit at a dust sample when its sampled
        # neighborhood fits among the dust node's gap insertions
        return bool(x.groups) and _fit_forest(x.children, _subtrees_below(y))
    if y.mark == "deep":
        return x.mark != "dust"  # unexpanded countable region: permissive
    if x.mark == "deep":
        return bool(y.groups) or y.mark == "deep"
    if not x.groups:
        return not y.groups or _has_isolated_below(y)
    return _fit_forest(x.children, _subtrees_below(y))


def _subtrees_below(node):
    out = []
    for c in node.children:
        out.extend(_subtrees(c))
    return out


def _has_isolated_below(node) -> bool:
    return any(
        n.mark == "point" and not n.children for n in _subtrees_below(node)
    )
