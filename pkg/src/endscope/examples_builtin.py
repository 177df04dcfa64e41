"""Built-in example inputs.

Each entry is the exact source text the command line would read from a file:
either a surface descriptor in the term grammar or a germ table in the JSON
interchange format. The names follow the usual nicknames for the surfaces.
"""

from __future__ import annotations

import json


EXAMPLES = {
    # infinite genus; a Cantor set of genus ends with a dense countable set
    # of planar-side insertions, all accumulated by genus
    "mona-lisa": "surface { genus: inf, ends: mix(cantor^g(), cantor(); g) }",
    # infinite genus accumulating at a single end
    "loch-ness": "surface { genus: inf, ends: pt^g }",
    # planar surface with ends w+1: a ray of punctures and their limit
    "flute": "surface { genus: 0, ends: ord(w) }",
    # a Cantor set of ends, each accumulated by genus
    "blooming-cantor": "surface { genus: inf, ends: cantor^g() }",
    # a user-supplied germ table whose stability is not established and for
    # which no sufficiency condition fires: the verdict stays open
    "unknown-6-2": json.dumps(
        {
            "classes": [
                {"id": "p", "kind": "countable_discrete", "color": "planar"},
                {"id": "L0", "kind": "cantor", "color": "genus", "family": True},
                {"id": "Linf", "kind": "cantor", "color": "genus"},
            ],
            "leq": [["p", "L0"], ["p", "Linf"], ["L0", "Linf"]],
            "acc": [
                ["p", "L0"],
                ["p", "Linf"],
                ["L0", "Linf"],
                ["L0", "L0"],
                ["Linf", "Linf"],
            ],
            "origin": "user-supplied",
            "surface": True,
        },
        indent=2,
    ),
    # a user-supplied germ table where a whole family of incomparable germs
    # accumulates at a countable class: telescoping case iii fails
    "telescopefail-iii": json.dumps(
        {
            "classes": [
                {"id": "x", "kind": "countable_discrete", "color": "planar"},
                {"id": "zfam", "kind": "cantor", "color": "planar", "family": True},
            ],
            "leq": [["zfam", "x"]],
            "acc": [["zfam", "x"], ["zfam", "zfam"]],
            "origin": "user-supplied",
            "surface": True,
        },
        indent=2,
    ),
}


def example(name: str) -> str:
    if name not in EXAMPLES:
        known = ", ".join(sorted(EXAMPLES))
        raise KeyError(f"unknown example {name!r} (known: {known})")
    return EXAMPLES[name]
