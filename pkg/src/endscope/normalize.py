"""Rewriting terms to a canonical form.

Rules, applied bottom-up to a fixed point:

  R1  flatten nested Sum nodes
  R2  deduplicate Mix and Cantor component multisets (each component appears
      infinitely often / densely, so multiplicity is invisible)
  R3  a Cantor component directly under a same-colored Cantor node is
      absorbed into the parent (dense-in-dense is dense)
  R4  a Sum part, Mix component, or Cantor component is dropped when a
      sibling already realizes every one of its point classes at an
      accumulation site (so adding copies changes nothing up to
      homeomorphism); decided with the germ engine, never speculatively
  R5  a countable all-planar subterm collapses to its rank/degree canonical
      form Ord(rank, degree)

`normalize_structural` applies R1/R2/R3/R5 only and has no dependency on the
germ machinery; the germ engine itself canonicalizes through it.
"""

from __future__ import annotations

from .terms import (
    Cantor,
    Mix,
    Ord,
    Pt,
    Sum,
    Term,
    cb_rank,
    has_genus,
    is_countable,
    mk_cantor,
    mk_mix,
    require_valid,
)


def normalize_structural(t: Term) -> Term:
    """R1/R2/R3/R5 to a fixed point, bottom-up."""
    while True:
        t2 = _pass(t)
        if t2 == t:
            return t2
        t = t2


def _pass(t: Term) -> Term:
    if isinstance(t, Pt):
        return _collapse(t)
    if isinstance(t, Ord):
        return t
    if isinstance(t, Mix):
        comps = _dedup(_splice_sums(_pass(c) for c in t.components))
        return _collapse(mk_mix(comps, t.limit_color))
    if isinstance(t, Cantor):
        comps = []
        for c in _splice_sums(_pass(c) for c in t.components):
            # R3: same-color Cantor child dissolves into the parent
            if isinstance(c, Cantor) and c.color is t.color:
                comps.extend(c.components)
            else:
                comps.append(c)
        return _collapse(mk_cantor(_dedup(comps), t.color))
    parts = []
    for p in (_pass(p) for p in t.parts):
        if isinstance(p, Sum):  # R1
            parts.extend(p.parts)
        else:
            parts.append(p)
    if len(parts) == 1:
        return parts[0]
    return _collapse(Sum(tuple(parts)))


def _splice_sums(comps) -> list:
    """A Sum component of a Mix/Cantor node contributes its parts directly:
    inserting one copy of A + B per site is inserting one A and one B."""
    out = []
    for c in comps:
        if isinstance(c, Sum):
            out.extend(c.parts)
        else:
            out.append(c)
    return out


def _dedup(comps) -> list:
    seen, out = set(), []
    for c in comps:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _collapse(t: Term) -> Term:
    """R5: countable all-planar terms take their canonical form."""
    if is_countable(t) and not has_genus(t):
        rank, degree = cb_rank(t)
        canonical = Ord(rank, degree)
        if canonical != t:
            return canonical
    return t


def normalize(t: Term) -> Term:
    """Full normal form: structural rules plus sibling absorption (R4)."""
    require_valid(t)
    from .germs import absorbable  # deferred: germs canonicalizes via this module

    t = normalize_structural(t)
    while True:
        t2 = _absorb_pass(t, absorbable)
        t2 = normalize_structural(t2)
        if t2 == t:
            return t2
        t = t2


def _absorb_pass(t: Term, absorbable) -> Term:
    if isinstance(t, (Pt, Ord)):
        return t
    if isinstance(t, (Mix, Cantor)):
        comps = [_absorb_pass(c, absorbable) for c in t.components]
        comps = _drop_absorbed(comps, absorbable)
        if isinstance(t, Mix):
            return mk_mix(comps, t.limit_color)
        return mk_cantor(comps, t.color)
    parts = [_absorb_pass(p, absorbable) for p in t.parts]
    parts = _drop_absorbed(parts, absorbable)
    if len(parts) == 1:
        return parts[0]
    return Sum(tuple(parts))


def _drop_absorbed(items: list, absorbable) -> list:
    out = list(items)
    i = 0
    while i < len(out):
        rest = out[:i] + out[i + 1 :]
        if rest and any(absorbable(out[i], b) for b in rest):
            del out[i]
        else:
            i += 1
    return out
