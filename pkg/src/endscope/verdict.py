"""Automatic-continuity verdicts.

An end class is telescoping when it is

  case i    an isolated puncture class: planar, not of cantor kind, with no
            class accumulating onto it;
  case ii   of cantor kind; or
  case iii  a successor whose maximal predecessors are all of cantor kind,
            provided a genus-colored end is not isolated among genus ends.

A surface has the automatic continuity property exactly when every end class
is telescoping (given stability, which the term grammar guarantees). The
failure cases F1/F2/F3 select the witness construction reported for the
negative direction. Stone-space verdicts only need stability and never fail.

Reading note carried in every report: for planar ends, case iii drops the
genus-isolation clause (it constrains genus-colored ends only).
"""

from __future__ import annotations

from dataclasses import dataclass

from .germs import (
    GermTable,
    KIND_CANTOR,
    Successor,
    cantor_type,
    derive_table,
    isolated_in_Eg,
    predecessors,
    _resolve,
)
from .ordinals import ONE, cmp
from .stability import Stable, stable_nbhd
from .terms import (
    Color,
    SurfaceDescriptor,
    ValidationError,
    surface_check,
)


class IsTelescoping(ValueError):
    pass


CASE_NOTE = (
    "planar successor ends accept case iii without the genus-isolation clause"
)
EQUIV_NOTE = "class equivalence is decided modulo engine invariants"

WITNESSES = {
    "F1": "curve-separating-genus",
    "F2": "puncture-count curve",
    "F3": "pair-of-pants chain",
}


@dataclass(frozen=True)
class TelescopingResult:
    id: str
    status: str  # "telescoping" | "not_telescoping"
    case: str = None  # "i" | "ii" | "iii"
    failure: str = None  # "F1" | "F2" | "F3"


@dataclass(frozen=True)
class Verdict:
    ac: str  # "holds" | "fails" | "unknown"
    basis: str
    per_class: tuple
    witness: str = None
    notes: tuple = (CASE_NOTE, EQUIV_NOTE)


def _accumulated(table: GermTable, cid: str) -> bool:
    return any(x == cid for (_, x) in table.acc)


def _countable_kind(kind: str) -> bool:
    return kind != KIND_CANTOR


def telescoping(table: GermTable, x: str, surface_context: bool = True) -> TelescopingResult:
    row = _resolve(table, x)
    if isinstance(row, tuple):  # family member rank(b)
        b = row[1]
        if b.is_zero():
            return TelescopingResult(x, "telescoping", case="i")
        return TelescopingResult(x, "not_telescoping", failure="F2")
    if row.kind == KIND_CANTOR:
        return TelescopingResult(x, "telescoping", case="ii")
    if row.family and row.family_bound is not None:
        # derived rank family: members of rank >= 1 sit over countable classes
        if cmp(row.family_bound, ONE) > 0:
            return TelescopingResult(x, "not_telescoping", failure="F2")
        return TelescopingResult(x, "telescoping", case="i")
    if row.color is Color.PLANAR and not _accumulated(table, row.id):
        return TelescopingResult(x, "telescoping", case="i")
    preds = predecessors(table, x)
    if isinstance(preds, Successor) and all(
        cantor_type(table, m) for m in preds.preds
    ):
        blocked = (
            surface_context
            and row.color is Color.GENUS
            and isolated_in_Eg(table, x)
        )
        if not blocked:
            return TelescopingResult(x, "telescoping", case="iii")
    return TelescopingResult(x, "not_telescoping", failure=failure_case(table, x, _preds=preds))


def failure_case(table: GermTable, x: str, _preds=None) -> str:
    row = _resolve(table, x)
    if not isinstance(row, tuple) and not row.family:
        if row.color is Color.GENUS and isolated_in_Eg(table, x):
            return "F1"
    if _preds is None:
        probe = telescoping(table, x)
        if probe.status == "telescoping":
            raise IsTelescoping(x)
        return probe.failure
    # F2: a countable class sits strictly below x
    rid = x if isinstance(row, tuple) else row.id
    for z in table.classes:
        if z.id == rid:
            continue
        strictly_below = (z.id, rid) in table.leq and (rid, z.id) not in table.leq
        if isinstance(row, tuple):
            strictly_below = z.rank is not None and cmp(z.rank, row[1]) < 0
        if strictly_below and _countable_kind(z.kind):
            return "F2"
    if isinstance(row, tuple):
        return "F2"  # rank members only ever have rank classes below
    return "F3"


# ---------------------------------------------------------------------------
# verdicts


def _classify_all(table: GermTable, surface_context: bool) -> tuple:
    return tuple(
        telescoping(table, r.id, surface_context) for r in table.classes
    )


def _pick_witness(per_class) -> str:
    failures = [p.failure for p in per_class if p.status == "not_telescoping"]
    for f in ("F1", "F2", "F3"):
        if f in failures:
            return WITNESSES[f]
    return None


def surface_verdict(s) -> Verdict:
    if isinstance(s, SurfaceDescriptor):
        surface_check(s.genus, s.ends)
        table = derive_table(s.ends)
    elif isinstance(s, GermTable):
        if not s.surface:
            raise ValidationError("germ table is not marked as a surface input")
        table = s
    else:
        raise ValidationError(f"not a surface input: {s!r}")

    stability = [stable_nbhd(table, r.id) for r in table.classes]
    established = all(isinstance(v, Stable) for v in stability)
    per_class = _classify_all(table, surface_context=True)

    if established:
        if all(p.status == "telescoping" for p in per_class):
            return Verdict("holds", "telescoping-criterion", per_class)
        return Verdict(
            "fails", "telescoping-criterion", per_class, _pick_witness(per_class)
        )
    return _sufficiency_verdict(table, per_class)


def _sufficiency_verdict(table: GermTable, per_class) -> Verdict:
    hits = []
    for r in table.classes:
        if not _countable_kind(r.kind):
            continue
        if r.color is Color.GENUS and isolated_in_Eg(table, r.id):
            hits.append("F1")
            continue
        preds = predecessors(table, r.id)
        if isinstance(preds, Successor) and any(
            _countable_kind(table.row(m).kind) for m in preds.preds
        ):
            hits.append("F2")
            continue
        if any(
            z.family and (z.id, r.id) in table.acc and z.id != r.id
            for z in table.classes
        ):
            hits.append("F3")
    for f in ("F1", "F2", "F3"):
        if f in hits:
            return Verdict("fails", "sufficiency", per_class, WITNESSES[f])
    return Verdict("unknown", "open-question", per_class)


def stone_verdict(t) -> Verdict:
    if isinstance(t, SurfaceDescriptor):
        raise ValidationError("stone verdicts take a term or germ table")
    table = derive_table(t) if not isinstance(t, GermTable) else t
    per_class = _classify_all(table, surface_context=False)
    if all(isinstance(stable_nbhd(table, r.id), Stable) for r in table.classes):
        return Verdict("holds", "stable-stone", per_class)
    return Verdict("unknown", "open-question", per_class)


# ---------------------------------------------------------------------------
# exponent DAG


@dataclass(frozen=True)
class DagNode:
    name: str
    deps: tuple
    compute: object  # callable over dep values, or None for proof-only nodes
    note: str


@dataclass(frozen=True)
class ExponentDag:
    nodes: tuple
    values: dict

    def value(self, name: str):
        return self.values[name]


_DAG_SPEC = [
    ("w2-step", (), lambda: 2, "one symmetric-set doubling step"),
    ("baire-category", (), None, "a translate of W is non-meager"),
    (
        "diagonal2",
        ("w2-step",),
        lambda a: 4 * a,
        "diagonal argument over pointwise-convergent products",
    ),
    (
        "conjugated-finite-part",
        ("w2-step", "diagonal2"),
        lambda a, b: a + b + a,
        "finite part conjugated into the brick",
    ),
    (
        "F-product",
        ("conjugated-finite-part", "diagonal2"),
        lambda a, b: a + b,
        "product with the diagonal remainder",
    ),
    (
        "pigeonhole",
        ("w2-step", "F-product"),
        lambda a, b: a + b + a,
        "pigeonhole over countably many translates; brick-supported maps",
    ),
    (
        "diagonal-cover",
        (),
        None,
        "countable cover refined along a descending brick chain",
    ),
    (
        "globalpointed",
        ("pigeonhole",),
        lambda a: 4 * a,
        "pointwise-stabilizing subgroup of a stable Stone space",
    ),
    (
        "surface-third",
        ("conjugated-finite-part",),
        lambda a: 3 * a,
        "third-power step for big-annulus supports",
    ),
    (
        "surface-brick",
        ("surface-third",),
        lambda a: 2 * a,
        "maps supported on a surface brick",
    ),
    (
        "globalpointedS",
        ("surface-brick",),
        lambda a: 4 * a,
        "pointwise-stabilizing subgroup over a stable surface neighborhood",
    ),
    (
        "inductive-step",
        (),
        None,
        "induction over the finitely many maximal classes",
    ),
    (
        "fragmentation-triple",
        ("globalpointedS",),
        lambda a: 3 * a,
        "three-way fragmentation across annulus bricks",
    ),
    (
        "final-surface",
        ("globalpointedS",),
        lambda a: 17 * a,
        "seventeen-fold composition closing the surface case",
    ),
]

REQUIRED_CONSTANTS = {
    "diagonal2": 8,
    "conjugated-finite-part": 12,
    "F-product": 20,
    "pigeonhole": 24,
    "globalpointed": 96,
    "surface-third": 36,
    "surface-brick": 72,
    "globalpointedS": 288,
    "fragmentation-triple": 864,
    "final-surface": 4896,
}


def constants() -> ExponentDag:
    nodes = []
    values = {}
    for name, deps, compute, note in _DAG_SPEC:
        nodes.append(DagNode(name, deps, compute, note))
        if compute is None:
            values[name] = None
        else:
            values[name] = compute(*(values[d] for d in deps))
    return ExponentDag(tuple(nodes), values)
