"""Built-in gadget definitions.

The locking 2-toggle ships in a base form plus three planar variants that
differ only in declared location order (declaration order doubles as the
canonical cyclic order for planar use).  Tunnels are (tl,bl) and (tr,br);
state 3 is the middle state where both tunnels are traversable downward,
and states 1/2 leave only the corresponding reverse traversal open.
"""

from __future__ import annotations

from typing import Dict, List

from .errors import UnknownEntry
from .model import GadgetDef

_L2T_TRANSITIONS = [
    (3, "tl", "bl", 1), (1, "bl", "tl", 3),
    (3, "tr", "br", 2), (2, "br", "tr", 3),
]


def _build() -> Dict[str, GadgetDef]:
    defs: List[GadgetDef] = [
        GadgetDef.make("l2t", ["tl", "tr", "bl", "br"], [1, 2, 3], 3,
                       _L2T_TRANSITIONS),
        # planar variants: same automaton, location order = cyclic order
        GadgetDef.make("l2t-parallel", ["tl", "tr", "br", "bl"], [1, 2, 3], 3,
                       _L2T_TRANSITIONS),
        GadgetDef.make("l2t-antiparallel", ["tl", "bl", "tr", "br"], [1, 2, 3], 3,
                       _L2T_TRANSITIONS),
        GadgetDef.make("l2t-crossing", ["tl", "tr", "bl", "br"], [1, 2, 3], 3,
                       _L2T_TRANSITIONS),
        GadgetDef.make("one-toggle", ["a", "b"], [1, 2], 1,
                       [(1, "a", "b", 2), (2, "b", "a", 1)]),
        # a one-way line in reversible form: crossing it leaves only the
        # way back open (distinct catalog entry from the 1-toggle because
        # construction targets reference it by this name)
        GadgetDef.make("one-way-form", ["a", "b"], [1, 2], 1,
                       [(1, "a", "b", 2), (2, "b", "a", 1)]),
        # two 1-toggles fused in series: a reversible deterministic gadget
        # satisfying the one-way form with one extra interior state
        GadgetDef.make("toggle-line-2", ["a", "b"], [1, 2, 3], 1,
                       [(1, "a", "b", 2), (2, "b", "a", 1),
                        (2, "a", "b", 3), (3, "b", "a", 2)]),
        # the classic irreversible one-directional edge
        GadgetDef.make("one-way", ["a", "b"], [1], 1, [(1, "a", "b", 1)]),
        GadgetDef.make("single-use-one-way", ["a", "b"], [1, 0], 1,
                       [(1, "a", "b", 0)]),
        GadgetDef.make("single-use-path", ["a", "b"], [1, 0], 1,
                       [(1, "a", "b", 0), (1, "b", "a", 0)]),
        # two-tunnel door: crossing the T tunnel toggles the B tunnel's
        # availability; B crossings never change state
        GadgetDef.make("door", ["Ta", "Tb", "Ba", "Bb"], [1, 2], 1,
                       [(1, "Ta", "Tb", 2), (2, "Tb", "Ta", 1),
                        (1, "Tb", "Ta", 2), (2, "Ta", "Tb", 1),
                        (2, "Ba", "Bb", 2), (2, "Bb", "Ba", 2)]),
        # partial crossover: vertical tunnel always traversable, horizontal
        # tunnel traversable only while the vertical one points down
        GadgetDef.make("aba", ["n", "e", "s", "w"], ["dr", "ur", "dl", "ul"], "dr",
                       [("dr", "n", "s", "ur"), ("ur", "s", "n", "dr"),
                        ("dr", "w", "e", "dl"), ("dl", "e", "w", "dr"),
                        ("dl", "n", "s", "ul"), ("ul", "s", "n", "dl")]),
        # dichotomy exemplars for the bounded 1-player classifier: crossing
        # the first tunnel opens (resp. forcibly closes) the second
        GadgetDef.make("opening-gadget", ["a", "b", "c", "d"], [1, 2, 3], 1,
                       [(1, "a", "b", 2), (2, "c", "d", 3)]),
        GadgetDef.make("closing-gadget", ["a", "b", "c", "d"], [1, 2, 3], 1,
                       [(1, "a", "b", 2), (1, "c", "d", 3)]),
    ]
    return {d.name: d for d in defs}


_GADGETS = _build()


def gadget(name: str) -> GadgetDef:
    """Look up a built-in definition by name."""
    try:
        return _GADGETS[name]
    except KeyError:
        raise UnknownEntry(f"no built-in gadget named {name!r}")


def names() -> List[str]:
    return sorted(_GADGETS)
