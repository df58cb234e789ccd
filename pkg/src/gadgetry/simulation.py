"""Behavior extraction for gadget networks and simulation certificates.

A network is a robot-free system plus an ordered list of external ports.
Its observable behavior is a labeled transition system over stable
internal configurations: one edge per (entry port, exit port) excursion.
"Gadget X simulates gadget Y" is certified by a strong bisimulation
between the network's minimized behavior LTS and Y's transition graph,
after erasing same-port excursions that land in a configuration
bisimilar to where they started (those are no-ops for the robot).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .errors import (InvalidSystem, NotEquivalent, StateCapExceeded,
                     StuckRobot, UnknownConstruction)
from .model import (GadgetDef, GadgetInstance, Label, Point, Robot, System,
                    Transition, _gadget_entries, _key, components, point_key)

DEFAULT_CAP = 10_000_000

# An excursion label: (entry port index, exit port index).
PortLabel = Tuple[int, int]
# A certificate move: (instance id, transition quadruple).
CertMove = Tuple[Label, Transition]


@dataclass(frozen=True)
class GadgetNetwork:
    """A robot-free system with designated external ports.

    ``ports`` are connection-graph points whose components play the role
    of the simulated gadget's locations, in location order.
    """

    system: System
    ports: Tuple[Point, ...]

    def __post_init__(self):
        if self.system.robots:
            raise InvalidSystem("a gadget network must not contain robots")
        comp = components(self.system)
        seen = set()
        for p in self.ports:
            ci = comp.index_of(p)
            if ci in seen:
                raise InvalidSystem(f"ports must lie in distinct components ({p!r})")
            seen.add(ci)


@dataclass
class BehaviorLTS:
    """Minimized observable behavior of a network (or of a plain gadget).

    States are canonically numbered by BFS from the initial state, so
    two extractions of the same network are identical.  ``edges`` maps a
    state to its set of (entry, exit, next_state) triples.
    """

    num_ports: int
    num_states: int
    edges: Dict[int, FrozenSet[Tuple[int, int, int]]]
    initial: int = 0
    # Representative internal state vector per state (extractions only).
    representative_sv: Dict[int, Tuple[Label, ...]] = field(default_factory=dict)
    # Replay certificate per (state, entry, exit, next_state).
    certificates: Dict[Tuple[int, int, int, int], Tuple[CertMove, ...]] = field(
        default_factory=dict)
    # Internal move counts over all realized excursions (before merging).
    all_costs: FrozenSet[int] = frozenset()

    def labels_from(self, state: int) -> Set[PortLabel]:
        return {(e, x) for (e, x, _) in self.edges.get(state, frozenset())}


@dataclass
class EquivalenceReport:
    """Result of a behavioral-equivalence check."""

    equivalent: bool
    state_mapping: Tuple[Tuple[int, int], ...] = ()
    counterexample: Optional[List] = None
    uniform_delay: Optional[int] = None
    planar: Optional[bool] = None


# ---------------------------------------------------------------------------
# Extraction


def _excursion(system: System, comp, port_of_comp: Dict[int, Tuple[int, ...]],
               sv: Tuple[Label, ...], entry_comp: int, cap: int, budget: List[int]):
    """All exits reachable from ``entry_comp`` in state vector ``sv``.

    Returns {(exit_port, new_sv): certificate}.  Raises StuckRobot when
    some reachable interior position cannot reach any port again.
    """
    entries = _gadget_entries(system)
    start = (sv, entry_comp)
    parents: Dict[tuple, Optional[Tuple[tuple, CertMove]]] = {start: None}
    exits: Dict[Tuple[int, Tuple[Label, ...]], Tuple[CertMove, ...]] = {}
    back: Dict[tuple, List[tuple]] = {}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        cur_sv, pos = node
        for i, inst_id, loc in entries.get(pos, ()):
            definition = system.instances[i].definition
            for t in definition.moves_from(cur_sv[i], loc):
                nxt_sv = cur_sv[:i] + (t[3],) + cur_sv[i + 1:]
                nxt = (nxt_sv, comp.index_of((inst_id, t[2])))
                back.setdefault(nxt, []).append(node)
                if nxt in parents:
                    continue
                parents[nxt] = (node, (inst_id, t))
                budget[0] += 1
                if budget[0] > cap:
                    raise StateCapExceeded(cap, len(queue))
                # A component may contain ports and still allow onward
                # moves, so record any exits and keep searching from it.
                for pidx in port_of_comp.get(nxt[1], ()):
                    key = (pidx, nxt_sv)
                    if key not in exits:
                        exits[key] = _trace(parents, nxt)
                queue.append(nxt)
    # Stuck check: every visited node must reach a port (or be the start).
    safe = set()
    frontier = [n for n in parents if n[1] in port_of_comp]
    safe.update(frontier)
    while frontier:
        node = frontier.pop()
        for prev in back.get(node, ()):
            if prev not in safe:
                safe.add(prev)
                frontier.append(prev)
    for node in parents:
        if node not in safe:
            raise StuckRobot(
                f"entry admits no exit: stuck at component {node[1]} "
                f"with states {node[0]!r}", trace=list(_trace(parents, node)))
    return exits


def _trace(parents, node) -> Tuple[CertMove, ...]:
    seq = []
    while parents[node] is not None:
        node, move = parents[node]
        seq.append(move)
    seq.reverse()
    return tuple(seq)


def _refine(states: List, succ: Dict) -> Dict:
    """Coarsest strong-bisimulation partition.

    ``succ[s]`` is an iterable of (label, target).  Returns state→block,
    with block ids assigned deterministically by first occurrence in
    ``states`` order.
    """
    block = {s: 0 for s in states}
    while True:
        sigs = {}
        for s in states:
            sigs[s] = (block[s],
                       frozenset((l, block[t]) for (l, t) in succ.get(s, ())))
        remap: Dict[tuple, int] = {}
        new: Dict = {}
        for s in states:
            new[s] = remap.setdefault(sigs[s], len(remap))
        if new == block:
            return block
        block = new


def extract_behavior(net: GadgetNetwork, cap: int = DEFAULT_CAP) -> BehaviorLTS:
    """Compute the minimized behavior LTS of a network.

    Worklist over stable state vectors; per (vector, entry port) a BFS
    over internal moves collects every exit.  Same-port excursions that
    land in a bisimilar vector are erased as no-ops (iterated to a
    fixpoint, since erasing can merge more vectors), then the LTS is
    minimized by partition refinement and numbered canonically.
    """
    system = net.system
    comp = components(system)
    port_of_comp: Dict[int, Tuple[int, ...]] = {}
    for i, p in enumerate(net.ports):
        c = comp.index_of(p)
        port_of_comp[c] = port_of_comp.get(c, ()) + (i,)
    port_comps = [comp.index_of(p) for p in net.ports]

    sv0 = system.initial_states()
    discovered: Dict[Tuple[Label, ...], int] = {sv0: 0}
    order: List[Tuple[Label, ...]] = [sv0]
    raw: Dict[Tuple[Label, ...], Dict[Tuple[int, int, Tuple[Label, ...]],
                                      Tuple[CertMove, ...]]] = {}
    budget = [0]
    worklist = deque([sv0])
    while worklist:
        sv = worklist.popleft()
        out: Dict[Tuple[int, int, Tuple[Label, ...]], Tuple[CertMove, ...]] = {}
        for entry in range(len(net.ports)):
            exits = _excursion(system, comp, port_of_comp, sv,
                               port_comps[entry], cap, budget)
            for (exit_port, nsv), cert in sorted(
                    exits.items(), key=lambda kv: (kv[0][0], tuple(map(_key, kv[0][1])))):
                out[(entry, exit_port, nsv)] = cert
                if nsv not in discovered:
                    discovered[nsv] = len(discovered)
                    order.append(nsv)
                    worklist.append(nsv)
        raw[sv] = out

    # No-op erasure to a fixpoint.
    erased: Set[Tuple[Tuple[Label, ...], int, int, Tuple[Label, ...]]] = set()
    while True:
        succ = {sv: [((e, x), nsv) for (e, x, nsv) in raw[sv]
                     if (sv, e, x, nsv) not in erased] for sv in order}
        block = _refine(order, succ)
        more = {(sv, e, x, nsv) for sv in order for (e, x, nsv) in raw[sv]
                if e == x and block[sv] == block[nsv]
                and (sv, e, x, nsv) not in erased}
        if not more:
            break
        erased |= more

    # Quotient with canonical BFS numbering from the initial block.
    members: Dict[int, List[Tuple[Label, ...]]] = {}
    for sv in order:
        members.setdefault(block[sv], []).append(sv)
    rep = {b: svs[0] for b, svs in members.items()}

    canon: Dict[int, int] = {block[sv0]: 0}
    bfs = deque([block[sv0]])
    edges: Dict[int, FrozenSet[Tuple[int, int, int]]] = {}
    cert_map: Dict[Tuple[int, int, int, int], Tuple[CertMove, ...]] = {}
    while bfs:
        b = bfs.popleft()
        sv = rep[b]
        triples = []
        for (e, x, nsv) in sorted(raw[sv], key=lambda k: (k[0], k[1],
                                                          discovered[k[2]])):
            if (sv, e, x, nsv) in erased:
                continue
            tb = block[nsv]
            if tb not in canon:
                canon[tb] = len(canon)
                bfs.append(tb)
            triples.append((e, x, canon[tb]))
            key = (canon[b], e, x, canon[tb])
            if key not in cert_map:
                cert_map[key] = raw[sv][(e, x, nsv)]
        edges[canon[b]] = frozenset(triples)

    costs = frozenset(len(cert) for sv in order if block[sv] in canon
                      for (e, x, nsv), cert in raw[sv].items()
                      if (sv, e, x, nsv) not in erased)
    reps = {canon[b]: rep[b] for b in canon}
    return BehaviorLTS(num_ports=len(net.ports), num_states=len(canon),
                       edges=edges, representative_sv=reps,
                       certificates=cert_map, all_costs=costs)


def def_to_lts(g: GadgetDef) -> BehaviorLTS:
    """A gadget definition's own transition graph as a BehaviorLTS.

    States are the definition states reachable from the initial one;
    edge labels are location indices in declaration order.
    """
    loc_idx = {l: i for i, l in enumerate(g.locations)}
    idx: Dict[Label, int] = {g.initial: 0}
    order = [g.initial]
    queue = deque([g.initial])
    edges: Dict[int, FrozenSet[Tuple[int, int, int]]] = {}
    while queue:
        s = queue.popleft()
        triples = []
        for t in sorted((t for t in g.transitions if t[0] == s),
                        key=lambda t: (loc_idx[t[1]], loc_idx[t[2]], _key(t[3]))):
            if t[3] not in idx:
                idx[t[3]] = len(idx)
                order.append(t[3])
                queue.append(t[3])
            triples.append((loc_idx[t[1]], loc_idx[t[2]], idx[t[3]]))
        edges[idx[s]] = frozenset(triples)
    lts = BehaviorLTS(num_ports=len(g.locations), num_states=len(idx),
                      edges=edges, all_costs=frozenset([1] if any(edges.values()) else []))
    lts.representative_sv = {i: (s,) for s, i in idx.items()}
    return lts


def lts_to_def(lts: BehaviorLTS, name: str = "wrapped") -> GadgetDef:
    """Express a behavior LTS as a gadget definition (ports become
    locations).  Only possible when no same-port edges remain."""
    locations = [f"p{i}" for i in range(lts.num_ports)]
    transitions = []
    for s in range(lts.num_states):
        for (e, x, t) in lts.edges.get(s, frozenset()):
            transitions.append((s, locations[e], locations[x], t))
    return GadgetDef.make(name, locations, list(range(lts.num_states)), 0,
                          transitions)


# ---------------------------------------------------------------------------
# Equivalence


def _as_lts(x: Union[BehaviorLTS, GadgetDef]) -> BehaviorLTS:
    return def_to_lts(x) if isinstance(x, GadgetDef) else x


def behaviorally_equivalent(a: Union[BehaviorLTS, GadgetDef],
                            b: Union[BehaviorLTS, GadgetDef]) -> EquivalenceReport:
    """Strong bisimulation between two behaviors, with matching port
    labels (port i of one corresponds to port i of the other).

    ``uniform_delay`` reports ``a``'s constant internal cost per
    excursion when there is one.
    """
    A, B = _as_lts(a), _as_lts(b)
    delay = next(iter(A.all_costs)) if len(A.all_costs) == 1 else None
    if A.num_ports != B.num_ports:
        return EquivalenceReport(False, counterexample=[
            f"port counts differ: {A.num_ports} vs {B.num_ports}"],
            uniform_delay=delay)

    # Partition refinement on the disjoint union.
    states = [("a", s) for s in range(A.num_states)] + \
             [("b", s) for s in range(B.num_states)]
    succ = {}
    for s in range(A.num_states):
        succ[("a", s)] = [((e, x), ("a", t)) for (e, x, t) in A.edges.get(s, ())]
    for s in range(B.num_states):
        succ[("b", s)] = [((e, x), ("b", t)) for (e, x, t) in B.edges.get(s, ())]
    block = _refine(states, succ)

    if block[("a", A.initial)] == block[("b", B.initial)]:
        mapping = tuple(sorted(
            (sa, sb) for sa in range(A.num_states) for sb in range(B.num_states)
            if block[("a", sa)] == block[("b", sb)]))
        return EquivalenceReport(True, state_mapping=mapping, uniform_delay=delay)

    # Build a short counterexample: BFS over pairs joined by equal labels
    # until the pair's outgoing label sets differ or the pair is known
    # non-bisimilar with matching labels (a branching mismatch).
    start = (A.initial, B.initial)
    parents: Dict[Tuple[int, int], Optional[Tuple[Tuple[int, int], PortLabel]]] = {
        start: None}
    queue = deque([start])
    witness: List = []
    found = None
    while queue and found is None:
        sa, sb = queue.popleft()
        la = A.labels_from(sa)
        lb = B.labels_from(sb)
        if la != lb:
            found = (sa, sb)
            diff = sorted(la.symmetric_difference(lb))
            witness = [("label-mismatch", diff[0],
                        "first" if diff[0] in la else "second")]
            break
        for (e, x, ta) in sorted(A.edges.get(sa, ())):
            for (e2, x2, tb) in sorted(B.edges.get(sb, ())):
                if (e, x) == (e2, x2) and (ta, tb) not in parents:
                    parents[(ta, tb)] = ((sa, sb), (e, x))
                    queue.append((ta, tb))
    if found is None:
        found = start
        witness = [("branching-mismatch",
                    "same traces but no bisimulation relates the states")]
    trail: List[PortLabel] = []
    node = found
    while parents.get(node) is not None:
        node, label = parents[node]
        trail.append(label)
    trail.reverse()
    return EquivalenceReport(False, counterexample=list(trail) + witness,
                             uniform_delay=delay)


# ---------------------------------------------------------------------------
# Construction verification and substitution


def verify_construction(name: str, cap: int = DEFAULT_CAP) -> EquivalenceReport:
    """Build a cataloged construction, extract its behavior, and check
    it against the stored target (plus planarity, where claimed)."""
    from . import constructions, planar

    entry = constructions.catalog().get(name)
    if entry is None:
        raise UnknownConstruction(
            f"no construction named {name!r}; known: {sorted(constructions.catalog())}")
    net, target = entry.build()
    lts = extract_behavior(net, cap=cap)
    report = behaviorally_equivalent(lts, target)
    if entry.planar:
        emb = planar.is_planar_system(net.system)
        ok = emb.planar and planar.ports_on_common_face(net, target)
        report = replace(report, planar=ok,
                         equivalent=report.equivalent and ok)
    return report


def substitute(system: System, target: GadgetDef, net: GadgetNetwork,
               cap: int = DEFAULT_CAP) -> System:
    """Replace every instance of ``target`` with a fresh copy of ``net``.

    Refuses (NotEquivalent) unless the network's extracted behavior is
    bisimilar to the target.  Instances in a non-initial state are
    seeded with a representative internal state vector bisimilar to that
    state.
    """
    lts = extract_behavior(net, cap=cap)
    report = behaviorally_equivalent(lts, target)
    if not report.equivalent:
        raise NotEquivalent(
            f"network is not behaviorally equivalent to {target.name!r}: "
            f"{report.counterexample!r}")
    target_lts = def_to_lts(target)
    # target def state label -> bisimilar network state vector
    sv_for_state: Dict[Label, Tuple[Label, ...]] = {}
    for (sa, sb) in report.state_mapping:
        label = target_lts.representative_sv[sb][0]
        sv_for_state.setdefault(label, lts.representative_sv[sa])

    inner_index = {inst.id: i for i, inst in enumerate(net.system.instances)}

    def prefixed(orig: Label, inner: Label) -> str:
        return f"{orig}__{inner}"

    new_instances: List[GadgetInstance] = []
    new_nodes: List[Label] = []
    new_edges: List[Tuple[Point, Point]] = []
    point_map: Dict[Tuple[Label, Label], Point] = {}

    replaced = []
    for inst in system.instances:
        if inst.definition != target:
            new_instances.append(inst)
            continue
        replaced.append(inst.id)
        state = inst.initial_state
        if state not in sv_for_state:
            raise NotEquivalent(
                f"instance {inst.id!r} starts in {state!r}, which has no "
                f"bisimilar network configuration")
        sv = sv_for_state[state]
        for j, inner in enumerate(net.system.instances):
            new_instances.append(GadgetInstance(
                prefixed(inst.id, inner.id), inner.definition, state=sv[j],
                cyclic_order=inner.cyclic_order, reflected=inner.reflected,
                role=inner.role))
        for n in net.system.nodes:
            new_nodes.append(prefixed(inst.id, n))

        def lift(p: Point, inst_id=inst.id) -> Point:
            if isinstance(p, tuple):
                return (prefixed(inst_id, p[0]), p[1])
            return prefixed(inst_id, p)

        for (u, v) in net.system.edges:
            new_edges.append((lift(u), lift(v)))
        for loc_i, loc in enumerate(target.locations):
            point_map[(inst.id, loc)] = lift(net.ports[loc_i])

    def remap(p: Point) -> Point:
        if isinstance(p, tuple) and (p[0], p[1]) in point_map:
            return point_map[(p[0], p[1])]
        return p

    edges = tuple(tuple(remap(p) for p in e) for e in system.edges) + tuple(new_edges)
    robots = tuple(Robot(remap(r.start), remap(r.goal), r.team)
                   for r in system.robots)
    return System(tuple(new_instances), tuple(system.nodes) + tuple(new_nodes),
                  edges, robots, system.turn_order, system.meta)
