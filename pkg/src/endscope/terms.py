"""Term AST for colored second-countable Stone spaces (end spaces).

A term denotes a compact, metrizable, totally disconnected space whose points
carry one of two colors. `genus` marks the closed set of non-planar ends of a
surface; `planar` everything else.

Constructors:
  Pt(color)                  one isolated point
  Ord(rank, degree)          the countable compact space of Cantor-Bendixson
                             rank `rank` and degree `degree`, all planar
                             (n discrete points when rank = 0, else w^rank*n+1)
  Mix(components, color)     one-point compactification of a sequence of clopen
                             copies of the components, each appearing
                             infinitely often, converging to a new point
  Cantor(components, color)  Cantor set with copies of each component inserted
                             densely into the gaps
  Sum(parts)                 disjoint clopen union
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from .ordinals import Cnf, ZERO, add, cmp, from_nat, mul_nat, omega_pow


class Color(enum.Enum):
    PLANAR = "planar"
    GENUS = "genus"

    def __str__(self) -> str:
        return self.value


class ValidationError(ValueError):
    pass


class GenusMismatch(ValueError):
    pass


class NotCountable(ValueError):
    pass


class NotAllPlanar(ValueError):
    pass


@dataclass(frozen=True)
class Pt:
    color: Color = Color.PLANAR


@dataclass(frozen=True)
class Ord:
    rank: Cnf
    degree: int


@dataclass(frozen=True)
class Mix:
    components: tuple
    limit_color: Color


@dataclass(frozen=True)
class Cantor:
    components: tuple = ()
    color: Color = Color.PLANAR


@dataclass(frozen=True)
class Sum:
    parts: tuple


Term = Union[Pt, Ord, Mix, Cantor, Sum]

INF = "inf"


@dataclass(frozen=True)
class SurfaceDescriptor:
    genus: object  # natural number or INF
    ends: Term
    boundary: int = 0


# ---------------------------------------------------------------------------
# structural helpers


def term_size(t: Term) -> int:
    if isinstance(t, (Pt, Ord)):
        return 1
    if isinstance(t, (Mix, Cantor)):
        return 1 + sum(term_size(c) for c in t.components)
    return 1 + sum(term_size(p) for p in t.parts)


def pretty(t: Term) -> str:
    """Render a term in the input grammar; parse(pretty(t)) == t."""
    if isinstance(t, Pt):
        return "pt^g" if t.color is Color.GENUS else "pt"
    if isinstance(t, Ord):
        lit = mul_nat(omega_pow(t.rank), t.degree)
        return f"ord({lit})"
    if isinstance(t, Mix):
        comps = ",".join(pretty(c) for c in t.components)
        word = "g" if t.limit_color is Color.GENUS else "planar"
        return f"mix({comps};{word})"
    if isinstance(t, Cantor):
        comps = ",".join(pretty(c) for c in t.components)
        flag = "^g" if t.color is Color.GENUS else ""
        return f"cantor{flag}({comps})"
    return "sum(" + ",".join(pretty(p) for p in t.parts) + ")"


def pretty_surface(s: SurfaceDescriptor) -> str:
    g = "inf" if s.genus == INF else str(s.genus)
    return f"surface {{ genus: {g}, ends: {pretty(s.ends)} }}"


def sort_components(comps) -> tuple:
    """Canonical multiset order: by (size, rendered form)."""
    return tuple(sorted(comps, key=lambda c: (term_size(c), pretty(c))))


def mk_mix(components, limit_color: Color) -> Mix:
    return Mix(sort_components(components), limit_color)


def mk_cantor(components, color: Color) -> Cantor:
    return Cantor(sort_components(components), color)


def colors_of(t: Term) -> frozenset:
    if isinstance(t, Pt):
        return frozenset({t.color})
    if isinstance(t, Ord):
        return frozenset({Color.PLANAR})
    if isinstance(t, Mix):
        out = frozenset({t.limit_color})
        for c in t.components:
            out |= colors_of(c)
        return out
    if isinstance(t, Cantor):
        out = frozenset({t.color})
        for c in t.components:
            out |= colors_of(c)
        return out
    out = frozenset()
    for p in t.parts:
        out |= colors_of(p)
    return out


def has_genus(t: Term) -> bool:
    return Color.GENUS in colors_of(t)


def is_countable(t: Term) -> bool:
    """No Cantor node anywhere."""
    if isinstance(t, (Pt, Ord)):
        return True
    if isinstance(t, Cantor):
        return False
    kids = t.components if isinstance(t, Mix) else t.parts
    return all(is_countable(k) for k in kids)


def is_perfect(t: Term) -> bool:
    """No isolated points."""
    if isinstance(t, (Pt, Ord)):
        return False
    if isinstance(t, Mix):
        return all(is_perfect(c) for c in t.components)
    if isinstance(t, Cantor):
        return all(is_perfect(c) for c in t.components)
    return all(is_perfect(p) for p in t.parts)


# ---------------------------------------------------------------------------
# validation


def validate(t: Term) -> list:
    """Check every structural invariant; returns a list of violations."""
    out = []

    def walk(u):
        if isinstance(u, Pt):
            return
        if isinstance(u, Ord):
            if u.degree < 1:
                out.append(f"degree must be >= 1 at {pretty(u)}")
            return
        if isinstance(u, Mix):
            if not u.components:
                out.append("mix needs at least one component")
            if u.limit_color is not Color.GENUS and any(
                has_genus(c) for c in u.components
            ):
                out.append(f"genus closedness violated at {pretty(u)}")
            for c in u.components:
                walk(c)
            return
        if isinstance(u, Cantor):
            if u.color is not Color.GENUS and any(has_genus(c) for c in u.components):
                out.append(f"genus closedness violated at {pretty(u)}")
            for c in u.components:
                walk(c)
            return
        if isinstance(u, Sum):
            if len(u.parts) < 2:
                out.append("sum needs at least two parts")
            for p in u.parts:
                walk(p)
            return
        out.append(f"unknown node {u!r}")

    walk(t)
    return out


def require_valid(t: Term) -> None:
    problems = validate(t)
    if problems:
        raise ValidationError("; ".join(problems))


def surface_check(genus, ends: Term) -> SurfaceDescriptor:
    """Build a surface descriptor, enforcing genus/color consistency."""
    require_valid(ends)
    genus_ends = has_genus(ends)
    if genus == INF and not genus_ends:
        raise GenusMismatch("infinite genus requires a genus-colored end")
    if genus != INF and genus_ends:
        raise GenusMismatch("finite genus forbids genus-colored ends")
    if genus != INF and (not isinstance(genus, int) or genus < 0):
        raise GenusMismatch("genus must be a natural number or inf")
    return SurfaceDescriptor(genus, ends)


# ---------------------------------------------------------------------------
# Cantor-Bendixson rank of countable all-planar terms


def cb_rank(t: Term):
    """(rank, degree) with t homeomorphic to the rank/degree-canonical space."""
    if not is_countable(t):
        raise NotCountable(pretty(t))
    if has_genus(t):
        raise NotAllPlanar(pretty(t))
    return _cb(t)


def _cb(t: Term):
    if isinstance(t, Pt):
        return ZERO, 1
    if isinstance(t, Ord):
        return t.rank, t.degree
    if isinstance(t, Mix):
        top = max((_cb(c)[0] for c in t.components), default=ZERO)
        return add(top, from_nat(1)), 1
    # Sum: highest rank wins; degrees merge at the top rank
    ranked = [_cb(p) for p in t.parts]
    top = max(r for r, _ in ranked)
    degree = sum(n for r, n in ranked if cmp(r, top) == 0)
    return top, degree
