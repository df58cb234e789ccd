"""Catalog of gadget-simulation constructions.

Each entry builds a robot-free gadget network together with the target
gadget it claims to simulate; ``simulation.verify_construction`` runs
the behavioral-equivalence check (plus planarity for planar entries).

Naming and layout conventions used throughout:

* Networks simulating a locking 2-toggle expose four ports given in the
  target definition's location order, so port index i plays the role of
  ``target.locations[i]``.
* A "diode" is an L2T whose left tunnel is used as a one-directional
  edge (state 1: only bl->tl) with the right tunnel left dangling; two
  diodes sharing a middle node form a 1-toggle that costs two internal
  moves per crossing.
* Planar entries choose concrete cyclic orders for their instances by a
  small search over the allowed variant class of each instance
  (antiparallel, parallel, or crossing orders of the L2T), keeping the
  first assignment whose wheel expansion is planar with all ports on a
  common face in target order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import library
from .errors import NotVerified
from .model import GadgetDef, GadgetInstance, Label, Point, System
from .simulation import GadgetNetwork

# Concrete cyclic orders per planar variant class of the L2T
# (two orders each; the pair within a class are mirror handednesses).
AP_ORDERS = (("tl", "bl", "tr", "br"), ("tl", "br", "tr", "bl"))
P_ORDERS = (("tl", "bl", "br", "tr"), ("tl", "tr", "br", "bl"))
C_ORDERS = (("tl", "tr", "bl", "br"), ("tl", "br", "bl", "tr"))


@dataclass(frozen=True)
class ConstructionEntry:
    """A named, buildable construction with its simulation target."""

    name: str
    target: str
    planar: bool
    builder: Callable[[], Tuple[GadgetNetwork, GadgetDef]]
    summary: str = ""

    def build(self) -> Tuple[GadgetNetwork, GadgetDef]:
        return self.builder()


def _inst(iid: Label, name: str, state=None, order=None) -> GadgetInstance:
    return GadgetInstance(iid, library.gadget(name), state, cyclic_order=order)


def _net(instances: Iterable[GadgetInstance], nodes: Iterable[Label],
         edges: Iterable[Tuple[Point, Point]], ports: Sequence[Point]) -> GadgetNetwork:
    system = System(instances=tuple(instances), nodes=tuple(nodes),
                    edges=tuple(edges), robots=(), turn_order=())
    return GadgetNetwork(system, tuple(ports))


def _diode_toggle(prefix: str, x: Point, z: Point, mid: Label):
    """A 1-toggle initially crossable x -> z, made of two L2T diodes.

    Crossing costs 2 moves and flips both diodes; afterwards only the
    reverse crossing is available.
    """
    a = _inst(prefix + "a", "l2t", 1)
    b = _inst(prefix + "b", "l2t", 3)
    edges = [(x, (a.id, "bl")), ((a.id, "tl"), mid),
             (mid, (b.id, "tl")), ((b.id, "bl"), z)]
    return [a, b], edges


def _door_oneway_toggle(prefix: str, x: Point, z: Point, mid: Label):
    """A 1-toggle initially crossable x -> z, made of two door-based
    one-way subnetworks (each door wired entry-Ta, Tb-Bb, Ba-exit).

    Crossing costs 4 moves: two per door subnetwork.
    """
    insts, edges = [], []
    for iid, port, state in ((prefix + "a", x, 1), (prefix + "b", z, 2)):
        insts.append(_inst(iid, "door", state))
        edges += [(port, (iid, "Ta")), ((iid, "Tb"), (iid, "Bb")),
                  ((iid, "Ba"), mid)]
    return insts, edges


# ---------------------------------------------------------------------------
# Builders


def _fig4b():
    d = _inst("d", "door", 1)
    edges = [("in", ("d", "Ta")), (("d", "Tb"), ("d", "Bb")),
             (("d", "Ba"), "out")]
    return (_net([d], ["in", "out"], edges, ["in", "out"]),
            library.gadget("one-way-form"))


def _fig5b():
    t1 = _inst("t1", "toggle-line-2", 1)
    t2 = _inst("t2", "toggle-line-2", 2)
    edges = [("L", ("t1", "a")), (("t1", "b"), "m"),
             (("t2", "b"), "m"), (("t2", "a"), "R")]
    return (_net([t1, t2], ["L", "m", "R"], edges, ["L", "R"]),
            library.gadget("one-toggle"))


def _fig6(padded: bool = False):
    """An L2T network simulating an L2T through the two-lines pattern:
    left gadget, middle toggles, rotated right gadget.

    Simulated top tunnel runs TR -> TL, bottom runs BL -> BR; crossings
    cost 4 moves (6 when padded with a second toggle pair).
    """
    insts = [_inst("gl", "l2t", 3), _inst("gr", "l2t", 3)]
    nodes = ["TL", "TR", "BL", "BR", "mt", "nt", "mb", "nb", "tm1", "tm2"]
    edges = [("TL", ("gl", "bl")), (("gl", "tl"), "mt"),
             ("TR", ("gr", "tr")), (("gr", "br"), "nt"),
             ("BL", ("gl", "tr")), (("gl", "br"), "mb"),
             ("BR", ("gr", "bl")), (("gr", "tl"), "nb")]
    if not padded:
        i1, e1 = _diode_toggle("t1", "nt", "mt", "tm1")
        i2, e2 = _diode_toggle("t2", "mb", "nb", "tm2")
        insts += i1 + i2
        edges += e1 + e2
    else:
        nodes += ["pt", "pb", "tm3", "tm4"]
        for prefix, x, z, mid in (("t1", "pt", "mt", "tm1"),
                                  ("t3", "nt", "pt", "tm3"),
                                  ("t2", "mb", "pb", "tm2"),
                                  ("t4", "pb", "nb", "tm4")):
            i, e = _diode_toggle(prefix, x, z, mid)
            insts += i
            edges += e
    return (_net(insts, nodes, edges, ["TR", "BL", "TL", "BR"]),
            library.gadget("l2t"))


def _fig6_door():
    """The same two-lines pattern instantiated with the door gadget;
    every simulated crossing costs exactly 6 moves (1 + 4 + 1)."""
    insts = [_inst("gl", "door", 2), _inst("gr", "door", 2)]
    nodes = ["TL", "TR", "BL", "BR", "mt", "nt", "mb", "nb", "tm1", "tm2"]
    edges = [("TL", ("gl", "Ta")), (("gl", "Tb"), "mt"),
             ("TR", ("gr", "Ba")), (("gr", "Bb"), "nt"),
             ("BL", ("gl", "Ba")), (("gl", "Bb"), "mb"),
             ("BR", ("gr", "Ta")), (("gr", "Tb"), "nb")]
    i1, e1 = _door_oneway_toggle("t1", "nt", "mt", "tm1")
    i2, e2 = _door_oneway_toggle("t2", "mb", "nb", "tm2")
    return (_net(insts + i1 + i2, nodes, edges + e1 + e2,
                 ["TR", "BL", "TL", "BR"]),
            library.gadget("l2t"))


def _planar_search(make: Callable[..., Tuple[GadgetNetwork, GadgetDef]],
                   choices: Sequence[Sequence]) -> Tuple[GadgetNetwork, GadgetDef]:
    """First assignment of per-instance cyclic orders whose wheel
    expansion is planar with ports on a common face in target order."""
    from . import planar

    for combo in itertools.product(*choices):
        net, target = make(*combo)
        if (planar.is_planar_system(net.system).planar
                and planar.ports_on_common_face(net, target)):
            return net, target
    raise NotVerified("no cyclic-order assignment yields a planar layout")


def _guard_pair(order_a, order_b, order_s):
    """Shared-middle pattern: entry guards A (from TL) and B (from TR)
    drop into node m, a toggle S leads m -> m2, and each guard's second
    tunnel carries the *opposite* route's exit, so entering one route
    locks the other route's exit."""
    insts = [_inst("A", "l2t", 3, order_a), _inst("B", "l2t", 3, order_b),
             _inst("S", "l2t", 3, order_s)]
    nodes = ["TL", "TR", "BL", "BR", "m", "m2"]
    edges = [("TL", ("A", "tl")), (("A", "bl"), "m"),
             ("TR", ("B", "tl")), (("B", "bl"), "m"),
             ("m", ("S", "tl")), (("S", "bl"), "m2"),
             ("m2", ("B", "tr")), (("B", "br"), "BL"),
             ("m2", ("A", "tr")), (("A", "br"), "BR")]
    return insts, nodes, edges


def _fig9():
    def make(oa, ob, os_):
        insts, nodes, edges = _guard_pair(oa, ob, os_)
        return (_net(insts, nodes, edges, ["TL", "TR", "BL", "BR"]),
                library.gadget("l2t-crossing"))
    return _planar_search(make, [AP_ORDERS, AP_ORDERS, AP_ORDERS])


def _fig10():
    def make(o1, o2):
        insts = [_inst("c1", "l2t", 3, o1), _inst("c2", "l2t", 3, o2)]
        edges = [("TL", ("c1", "tl")), ("TR", ("c1", "tr")),
                 (("c1", "bl"), ("c2", "tl")), (("c1", "br"), ("c2", "tr")),
                 (("c2", "bl"), "BL"), (("c2", "br"), "BR")]
        return (_net(insts, ["TL", "TR", "BL", "BR"], edges,
                     ["TL", "TR", "BR", "BL"]),
                library.gadget("l2t-parallel"))
    return _planar_search(make, [C_ORDERS, C_ORDERS])


def _fig11():
    def make(oa, ob, os_):
        insts, nodes, edges = _guard_pair(oa, ob, os_)
        return (_net(insts, nodes, edges, ["TL", "BL", "TR", "BR"]),
                library.gadget("l2t-antiparallel"))
    return _planar_search(make, [P_ORDERS, P_ORDERS, P_ORDERS])


def _fig13a():
    """A/BA crossover from two crossing L2Ts: the vertical tunnel offers
    two one-shot routes (g1 open now, g2 opened by the horizontal
    crossing, which simultaneously spends g1's route)."""
    def make(o1, o2):
        insts = [_inst("g1", "l2t", 3, o1), _inst("g2", "l2t", 2, o2)]
        edges = [("n", ("g1", "tl")), ("n", ("g2", "tl")),
                 (("g1", "bl"), "s"), (("g2", "bl"), "s"),
                 ("w", ("g1", "tr")), (("g1", "br"), "d"),
                 ("d", ("g2", "br")), (("g2", "tr"), "e")]
        return (_net(insts, ["n", "e", "s", "w", "d"], edges,
                     ["n", "e", "s", "w"]),
                library.gadget("aba"))
    return _planar_search(make, [C_ORDERS, C_ORDERS])


def _two_lines(order_l, order_r, target_name):
    """Two same-orientation L2Ts plus two leftward 1-toggles simulating
    a parallel L2T (both simulated tunnels initially run right-to-left
    on top, left-to-right is never open ... top runs TR->TL, bottom
    BR->BL after the analogous crossing)."""
    insts = [_inst("gl", "l2t", 3, order_l), _inst("gr", "l2t", 3, order_r),
             _inst("t1", "one-toggle", 1, ("a", "b")),
             _inst("t2", "one-toggle", 1, ("a", "b"))]
    nodes = ["TL", "TR", "BL", "BR", "mt", "nt", "mb", "nb"]
    edges = [("TR", ("gr", "tl")), (("gr", "bl"), "nt"),
             ("nt", ("t1", "a")), (("t1", "b"), "mt"),
             ("mt", ("gl", "tl")), (("gl", "bl"), "TL"),
             ("BR", ("gr", "tr")), (("gr", "br"), "nb"),
             ("nb", ("t2", "a")), (("t2", "b"), "mb"),
             ("mb", ("gl", "tr")), (("gl", "br"), "BL")]
    return (_net(insts, nodes, edges, ["TR", "BR", "BL", "TL"]),
            library.gadget(target_name))


def _fig30():
    # The "antiparallel form" names the relation between the two defining
    # traversals (the opening move and the move it makes legal); for an
    # L2T drawn in the plane those two arrows point in opposite
    # directions exactly when its open tunnels are drawn parallel, so
    # the instances here carry parallel-class cyclic orders.
    def make(ol, or_):
        return _two_lines(ol, or_, "l2t-parallel")
    return _planar_search(make, [P_ORDERS, P_ORDERS])


def _fig31():
    d = _inst("d", "door", 1, ("Ta", "Ba", "Tb", "Bb"))
    edges = [("in", ("d", "Ta")), (("d", "Tb"), ("d", "Bb")),
             (("d", "Ba"), "out")]
    return (_net([d], ["in", "out"], edges, ["in", "out"]),
            library.gadget("one-way-form"))


def _fig32():
    def make(ol, or_):
        return _two_lines(ol, or_, "l2t-parallel")
    return _planar_search(make, [C_ORDERS, C_ORDERS])


_ENTRIES = [
    ConstructionEntry(
        "fig4b-one-way-from-door", "one-way-form", False, _fig4b,
        "door wired entry-Ta, Tb-Bb, Ba-exit; 2 moves per crossing"),
    ConstructionEntry(
        "fig5b-one-toggle-from-one-way", "one-toggle", False, _fig5b,
        "two one-directional-edge gadgets sharing a middle node"),
    ConstructionEntry(
        "fig6-l2t-from-arbitrary", "l2t", False, _fig6,
        "L2T instantiating the arbitrary gadget; diode toggles; cost 4"),
    ConstructionEntry(
        "fig6-l2t-from-arbitrary-padded", "l2t", False,
        lambda: _fig6(padded=True),
        "extra toggle pair pads every crossing to exactly 6 moves"),
    ConstructionEntry(
        "fig6-l2t-from-door", "l2t", False, _fig6_door,
        "door instantiating the arbitrary gadget; cost 6"),
    ConstructionEntry(
        "fig9-apl2t-sim-cl2t", "l2t-crossing", True, _fig9,
        "three antiparallel L2Ts present crossed tunnels"),
    ConstructionEntry(
        "fig10-cl2t-sim-pl2t", "l2t-parallel", True, _fig10,
        "two crossing L2Ts in series uncross"),
    ConstructionEntry(
        "fig11-pl2t-sim-apl2t", "l2t-antiparallel", True, _fig11,
        "three parallel L2Ts present antiparallel tunnels"),
    ConstructionEntry(
        "fig13a-aba-from-cl2t", "aba", True, _fig13a,
        "A/BA crossover from two crossing L2Ts"),
    ConstructionEntry(
        "fig30-pl2t-from-antiparallel", "l2t-parallel", True, _fig30,
        "antiparallel-form gadgets (parallel-order L2Ts) and two "
        "1-toggles simulate a parallel L2T"),
    ConstructionEntry(
        "fig31-one-way-from-crossing", "one-way-form", True, _fig31,
        "a crossing-order door simulates a one-way edge planarly"),
    ConstructionEntry(
        "fig32-pl2t-from-crossing", "l2t-parallel", True, _fig32,
        "two crossing L2Ts and two 1-toggles simulate a parallel L2T"),
]


def catalog() -> Dict[str, ConstructionEntry]:
    """All shipped constructions, keyed by name."""
    return {e.name: e for e in _ENTRIES}


def names() -> List[str]:
    return [e.name for e in _ENTRIES]
