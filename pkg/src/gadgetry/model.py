"""Core data model: gadget definitions, systems, and game mechanics.

A gadget is a finite automaton whose transitions are labeled by ordered
pairs of locations: the quadruple ``(state, a, b, next_state)`` means a
robot at location ``a`` may move to location ``b``, changing the gadget's
state.  Systems wire gadget instances together with free nodes and
undirected connections; robots move between connection components and
through gadgets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import (DuplicateTransition, IllegalMove, InvalidGadget,
                     InvalidSystem, NotKTunnel, UnknownLocation, UnknownState)

# Opaque scalar identifiers.  Strings and ints are both accepted and never
# coerced into each other.
Label = Union[str, int]

# A transition quadruple (state, from_location, to_location, next_state).
Transition = Tuple[Label, Label, Label, Label]

# A point of the connection graph: either a bare node id or an
# (instance_id, location) pair.
Point = Union[Label, Tuple[Label, Label]]


def _key(x: Label) -> Tuple[int, str]:
    """Total order over mixed str/int labels (ints first, then strings)."""
    if isinstance(x, bool):  # bools are ints but would be confusing
        raise InvalidGadget(f"boolean label not allowed: {x!r}")
    if isinstance(x, int):
        return (0, f"{x:040d}")
    return (1, x)


def point_key(p: Point) -> Tuple:
    """Deterministic sort key for connection-graph points."""
    if isinstance(p, tuple):
        return (1, _key(p[0]), _key(p[1]))
    return (0, _key(p), (0, ""))


@dataclass(frozen=True)
class GadgetDef:
    """An immutable gadget definition.

    ``locations`` and ``states`` are ordered; the declaration order of
    locations matters for tunnel pairing and for cyclic orders in planar
    systems.  ``transitions`` is a frozenset of quadruples.
    """

    name: str
    locations: Tuple[Label, ...]
    states: Tuple[Label, ...]
    initial: Label
    transitions: FrozenSet[Transition]

    def __post_init__(self):
        locs, states = self.locations, self.states
        if not locs:
            raise InvalidGadget(f"{self.name}: gadget needs at least one location")
        if len(set(locs)) != len(locs):
            raise InvalidGadget(f"{self.name}: duplicate locations")
        if not states or len(set(states)) != len(states):
            raise InvalidGadget(f"{self.name}: states must be nonempty and unique")
        if self.initial not in states:
            raise UnknownState(f"{self.name}: initial state {self.initial!r} unknown")
        loc_set, state_set = set(locs), set(states)
        for t in self.transitions:
            if len(t) != 4:
                raise InvalidGadget(f"{self.name}: transition {t!r} is not a quadruple")
            s, a, b, s2 = t
            if s not in state_set or s2 not in state_set:
                raise UnknownState(f"{self.name}: transition {t!r} uses unknown state")
            if a not in loc_set or b not in loc_set:
                raise UnknownLocation(f"{self.name}: transition {t!r} uses unknown location")
            if a == b:
                raise InvalidGadget(f"{self.name}: transition {t!r} does not move")

    @staticmethod
    def make(name: str, locations: Sequence[Label], states: Sequence[Label],
             initial: Label, transitions: Iterable[Sequence[Label]]) -> "GadgetDef":
        ts = [tuple(t) for t in transitions]
        if len(set(ts)) != len(ts):
            dup = next(t for t in ts if ts.count(t) > 1)
            raise DuplicateTransition(f"{name}: transition {dup!r} declared twice")
        return GadgetDef(name, tuple(locations), tuple(states), initial, frozenset(ts))

    # ---- basic queries -------------------------------------------------

    def moves_from(self, state: Label, loc: Label) -> Tuple[Transition, ...]:
        return _moves_table(self).get((state, loc), ())

    def open_traversals(self, state: Label) -> FrozenSet[Tuple[Label, Label]]:
        """Oriented location pairs traversable in ``state``."""
        return frozenset((a, b) for (s, a, b, _) in self.transitions if s == state)

    def is_open(self, state: Label, a: Label, b: Label) -> bool:
        return any(t[0] == state and t[1] == a and t[2] == b for t in self.transitions)

    # ---- structural predicates ----------------------------------------

    @property
    def is_deterministic(self) -> bool:
        seen = set()
        for s, a, _, _ in self.transitions:
            if (s, a) in seen:
                return False
            seen.add((s, a))
        return True

    @property
    def is_reversible(self) -> bool:
        return all((s2, b, a, s) in self.transitions for (s, a, b, s2) in self.transitions)

    @property
    def is_dag(self) -> bool:
        """True when the state-transition graph is acyclic.

        A transition that keeps the state (a self-loop) already breaks
        acyclicity, since it can be repeated forever.
        """
        out: Dict[Label, set] = {s: set() for s in self.states}
        for s, _, _, s2 in self.transitions:
            if s == s2:
                return False
            out[s].add(s2)
        seen: Dict[Label, int] = {}  # 1 = on stack, 2 = done

        def visit(v: Label) -> bool:
            seen[v] = 1
            for w in out[v]:
                mark = seen.get(w)
                if mark == 1 or (mark is None and not visit(w)):
                    return False
            seen[v] = 2
            return True

        return all(seen.get(s) == 2 or visit(s) for s in self.states)

    def topo_states(self) -> List[Label]:
        """States in topological order of the transition DAG.

        Requires :attr:`is_dag`.  Ties are broken by declaration order.
        """
        if not self.is_dag:
            raise InvalidGadget(f"{self.name}: state graph is not acyclic")
        order_idx = {s: i for i, s in enumerate(self.states)}
        succs: Dict[Label, set] = {s: set() for s in self.states}
        indeg: Dict[Label, int] = {s: 0 for s in self.states}
        for s, _, _, s2 in self.transitions:
            if s2 not in succs[s]:
                succs[s].add(s2)
                indeg[s2] += 1
        ready = sorted((s for s in self.states if indeg[s] == 0), key=order_idx.get)
        out: List[Label] = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for w in sorted(succs[v], key=order_idx.get):
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
            ready.sort(key=order_idx.get)
        return out

    @property
    def tunnels(self) -> Optional[Tuple[Tuple[Label, Label], ...]]:
        """Perfect matching of locations induced by the transitions.

        Each transition must stay within one pair; locations untouched by
        any transition are paired up in declaration order.  Returns None
        when no such matching exists.
        """
        partner: Dict[Label, Label] = {}
        for _, a, b, _ in self.transitions:
            for x, y in ((a, b), (b, a)):
                if partner.setdefault(x, y) != y:
                    return None
        free = [l for l in self.locations if l not in partner]
        if len(free) % 2:
            return None
        for x, y in zip(free[::2], free[1::2]):
            partner[x] = y
            partner[y] = x
        idx = {l: i for i, l in enumerate(self.locations)}
        pairs = []
        seen = set()
        for l in self.locations:
            if l in seen:
                continue
            m = partner[l]
            seen.update((l, m))
            pairs.append((l, m) if idx[l] < idx[m] else (m, l))
        return tuple(pairs)

    @property
    def is_k_tunnel(self) -> bool:
        return self.tunnels is not None

    def tunnel_of(self, loc: Label) -> Tuple[Label, Label]:
        for pair in self.tunnels or ():
            if loc in pair:
                return pair
        raise InvalidGadget(f"{self.name}: {loc!r} is not on a tunnel")

    @property
    def is_interacting(self) -> bool:
        """True when some transition changes the traversability of a
        traversal on a *different* tunnel."""
        pairs = self.tunnels
        if pairs is None or len(pairs) < 2:
            return False
        directions = [d for p in pairs for d in (p, p[::-1])]
        for s, a, b, s2 in self.transitions:
            here = frozenset((a, b))
            for c, d in directions:
                if frozenset((c, d)) == here:
                    continue
                if self.is_open(s, c, d) != self.is_open(s2, c, d):
                    return True
        return False

    @property
    def is_trivial(self) -> bool:
        """No transitions at all (a pure wall)."""
        return not self.transitions

    # ---- transformations ----------------------------------------------

    def relabel(self, name: Optional[str] = None,
                locations: Optional[Dict[Label, Label]] = None,
                states: Optional[Dict[Label, Label]] = None) -> "GadgetDef":
        lm = locations or {}
        sm = states or {}
        return GadgetDef.make(
            name or self.name,
            [lm.get(l, l) for l in self.locations],
            [sm.get(s, s) for s in self.states],
            sm.get(self.initial, self.initial),
            [(sm.get(s, s), lm.get(a, a), lm.get(b, b), sm.get(s2, s2))
             for (s, a, b, s2) in self.transitions],
        )

    def with_initial(self, state: Label) -> "GadgetDef":
        if state not in self.states:
            raise InvalidGadget(f"{self.name}: unknown state {state!r}")
        return GadgetDef(self.name, self.locations, self.states, state, self.transitions)


@lru_cache(maxsize=4096)
def _moves_table(g: GadgetDef) -> Dict[Tuple[Label, Label], Tuple[Transition, ...]]:
    """Transitions grouped by (state, from_location), deterministically ordered."""
    table: Dict[Tuple[Label, Label], List[Transition]] = {}
    for t in sorted(g.transitions, key=lambda t: tuple(map(_key, t))):
        table.setdefault((t[0], t[1]), []).append(t)
    return {k: tuple(v) for k, v in table.items()}


def tunnel_decomposition(g: GadgetDef) -> Tuple[Tuple[Label, Label], ...]:
    """The unique location matching respected by all transitions.

    Raises :class:`NotKTunnel` when no such matching exists (a location
    is moved to two distinct partners, or an odd number of locations is
    left unmatched).
    """
    pairs = g.tunnels
    if pairs is None:
        raise NotKTunnel(f"{g.name}: locations admit no tunnel matching")
    return pairs


def canonical_form(g: GadgetDef) -> Tuple:
    """A relabeling-invariant fingerprint of a gadget definition.

    Two definitions are isomorphic (same behavior up to renaming states
    and locations, keeping the initial state) iff their canonical forms
    are equal.  Exponential in the worst case, fine at desk scale.
    """
    n_loc, n_st = len(g.locations), len(g.states)
    best = None
    state_names = list(g.states)
    loc_names = list(g.locations)
    for st_perm in itertools.permutations(range(n_st)):
        st_map = {state_names[i]: st_perm[i] for i in range(n_st)}
        # fixing the initial state at index 0 both prunes the search and
        # makes the form distinguish initial states
        if st_map[g.initial] != 0:
            continue
        for loc_perm in itertools.permutations(range(n_loc)):
            loc_map = {loc_names[i]: loc_perm[i] for i in range(n_loc)}
            trans = tuple(sorted((st_map[s], loc_map[a], loc_map[b], st_map[s2])
                                 for (s, a, b, s2) in g.transitions))
            cand = (n_loc, n_st, st_map[g.initial], trans)
            if best is None or cand < best:
                best = cand
    return best


# ---------------------------------------------------------------------------
# Systems


@dataclass(frozen=True)
class GadgetInstance:
    """A placed copy of a gadget definition.

    ``state`` overrides the definition's initial state.  ``cyclic_order``
    (a permutation of the definition's locations) and ``reflected`` only
    matter for planar systems.
    """

    id: Label
    definition: GadgetDef
    state: Optional[Label] = None
    cyclic_order: Optional[Tuple[Label, ...]] = None
    reflected: bool = False
    role: Optional[str] = None  # provenance annotation, ignored by semantics

    def __post_init__(self):
        if isinstance(self.id, str) and "." in self.id:
            raise InvalidSystem(f"instance id {self.id!r} contains '.'")
        if self.state is not None and self.state not in self.definition.states:
            raise InvalidSystem(f"instance {self.id!r}: unknown state {self.state!r}")
        if self.cyclic_order is not None:
            if sorted(map(_key, self.cyclic_order)) != sorted(map(_key, self.definition.locations)):
                raise InvalidSystem(
                    f"instance {self.id!r}: cyclic order must permute the locations")

    @property
    def initial_state(self) -> Label:
        return self.definition.initial if self.state is None else self.state


@dataclass(frozen=True)
class Robot:
    """A player token.  ``start``/``goal`` are connection-graph points
    given as node ids or (instance, location) pairs."""

    start: Point
    goal: Point
    team: str = "white"


@dataclass(frozen=True)
class System:
    """A wired system of gadget instances, free nodes, and robots.

    Robots are identified by their index; ``turn_order`` lists robot
    indices and defaults to declaration order.
    """

    instances: Tuple[GadgetInstance, ...]
    nodes: Tuple[Label, ...] = ()
    edges: Tuple[Tuple[Point, Point], ...] = ()
    robots: Tuple[Robot, ...] = ()
    turn_order: Tuple[int, ...] = ()
    meta: Optional[str] = None  # JSON text carrying compiler metadata

    def __post_init__(self):
        ids = [g.id for g in self.instances]
        if len(set(ids)) != len(ids):
            raise InvalidSystem("duplicate instance ids")
        for n in self.nodes:
            if isinstance(n, str) and "." in n:
                raise InvalidSystem(f"node id {n!r} contains '.'")
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidSystem("duplicate node ids")
        for e in self.edges:
            for p in e:
                self._check_point(p)
        for r in self.robots:
            self._check_point(r.start)
            self._check_point(r.goal)
        if self.turn_order:
            if sorted(self.turn_order) != list(range(len(self.robots))):
                raise InvalidSystem("turn_order must be a permutation of robot indices")
        object.__setattr__(self, "_by_id", {g.id: g for g in self.instances})

    def _check_point(self, p: Point) -> None:
        if isinstance(p, tuple):
            inst_id, loc = p
            inst = next((g for g in self.instances if g.id == inst_id), None)
            if inst is None:
                raise InvalidSystem(f"unknown instance in endpoint {p!r}")
            if loc not in inst.definition.locations:
                raise InvalidSystem(f"unknown location in endpoint {p!r}")
        elif p not in self.nodes:
            raise InvalidSystem(f"unknown node {p!r}")

    def instance(self, inst_id: Label) -> GadgetInstance:
        return self._by_id[inst_id]

    def metadata(self) -> dict:
        import json

        return json.loads(self.meta) if self.meta else {}

    @property
    def effective_turn_order(self) -> Tuple[int, ...]:
        return self.turn_order or tuple(range(len(self.robots)))

    def points(self) -> List[Point]:
        pts: List[Point] = list(self.nodes)
        for g in self.instances:
            pts.extend((g.id, l) for l in g.definition.locations)
        return pts

    def initial_states(self) -> Tuple[Label, ...]:
        return tuple(g.initial_state for g in self.instances)


class Components:
    """The static partition of connection-graph points into components.

    Component indices are numbered by the smallest contained point (under
    a deterministic order), so they are stable across runs.
    """

    def __init__(self, system: System):
        pts = system.points()
        parent = {p: p for p in pts}

        def find(x: Point) -> Point:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in system.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups: Dict[Point, List[Point]] = {}
        for p in pts:
            groups.setdefault(find(p), []).append(p)
        comps = sorted((sorted(g, key=point_key) for g in groups.values()),
                       key=lambda g: point_key(g[0]))
        self._points: List[List[Point]] = comps
        self._index: Dict[Point, int] = {p: i for i, grp in enumerate(comps) for p in grp}

    def __len__(self) -> int:
        return len(self._points)

    def index_of(self, p: Point) -> int:
        return self._index[p]

    def points_in(self, ci: int) -> List[Point]:
        return self._points[ci]


@lru_cache(maxsize=256)
def components(system: System) -> Components:
    return Components(system)


@lru_cache(maxsize=256)
def _gadget_entries(system: System) -> Dict[int, List[Tuple[int, Label, Label]]]:
    """Map component index -> [(instance index, instance id, location)],
    ordered by instance id then location declaration order."""
    comp = components(system)
    out: Dict[int, List[Tuple[int, Label, Label]]] = {}
    order = sorted(range(len(system.instances)),
                   key=lambda i: _key(system.instances[i].id))
    for i in order:
        inst = system.instances[i]
        for loc in inst.definition.locations:
            out.setdefault(comp.index_of((inst.id, loc)), []).append((i, inst.id, loc))
    return out


# ---------------------------------------------------------------------------
# Game mechanics


@dataclass(frozen=True)
class Move:
    """One game move: a gadget traversal, or a wait.

    ``transition`` is the chosen quadruple; for nondeterministic gadgets
    the mover picks which quadruple realizes the traversal.
    """

    robot: int
    instance: Optional[Label] = None
    transition: Optional[Transition] = None

    @property
    def is_wait(self) -> bool:
        return self.instance is None

    @staticmethod
    def wait(robot: int) -> "Move":
        return Move(robot)


@dataclass(frozen=True)
class Config:
    """A game configuration: gadget states, robot components, whose turn."""

    states: Tuple[Label, ...]
    positions: Tuple[int, ...]
    turn: int = 0  # index into the system's effective turn order


def initial_config(system: System) -> Config:
    comp = components(system)
    return Config(system.initial_states(),
                  tuple(comp.index_of(r.start) for r in system.robots), 0)


def mover(system: System, config: Config) -> int:
    order = system.effective_turn_order
    return order[config.turn % len(order)]


def legal_moves(system: System, config: Config,
                include_wait: Optional[bool] = None) -> List[Move]:
    """Moves available to the robot whose turn it is.

    Waiting is legal in multiplayer games and suppressed in 1-player
    games (``include_wait`` overrides).
    """
    r = mover(system, config)
    here = config.positions[r]
    out: List[Move] = []
    for i, inst_id, loc in _gadget_entries(system).get(here, ()):
        state = config.states[i]
        for t in system.instances[i].definition.moves_from(state, loc):
            out.append(Move(r, inst_id, t))
    if include_wait if include_wait is not None else len(system.robots) > 1:
        out.append(Move.wait(r))
    return out


def apply_move(system: System, config: Config, move: Move) -> Config:
    """Apply ``move`` and advance the turn.  Raises IllegalMove."""
    comp = components(system)
    r = mover(system, config)
    if move.robot != r:
        raise IllegalMove(f"robot {move.robot} moved out of turn (expected {r})")
    nxt = (config.turn + 1) % len(system.effective_turn_order)
    if move.is_wait:
        if len(system.robots) == 1:
            raise IllegalMove("waiting is not allowed in 1-player games")
        return Config(config.states, config.positions, nxt)
    idx = next((i for i, g in enumerate(system.instances) if g.id == move.instance), None)
    if idx is None:
        raise IllegalMove(f"unknown instance {move.instance!r}")
    inst = system.instances[idx]
    t = move.transition
    if t not in inst.definition.transitions or t[0] != config.states[idx]:
        raise IllegalMove(f"transition {t!r} not available in {move.instance!r}")
    if comp.index_of((inst.id, t[1])) != config.positions[r]:
        raise IllegalMove(f"robot {r} cannot reach {move.instance!r}.{t[1]!r}")
    states = list(config.states)
    states[idx] = t[3]
    positions = list(config.positions)
    positions[r] = comp.index_of((inst.id, t[2]))
    return Config(tuple(states), tuple(positions), nxt)


def at_goal(system: System, config: Config, robot: int) -> bool:
    comp = components(system)
    return config.positions[robot] == comp.index_of(system.robots[robot].goal)


def winner_after(system: System, config: Config, last_mover: int) -> Optional[str]:
    """Team that wins immediately after ``last_mover`` moved, if any.

    The win condition is evaluated after every move, mover first; only
    the mover's own goal status can have changed since the previous
    evaluation, so it suffices to check the mover.  Wins that already
    hold in the initial configuration are picked up by
    :func:`initial_winner` before play starts.
    """
    if at_goal(system, config, last_mover):
        return system.robots[last_mover].team
    return None


def initial_winner(system: System, config: Config) -> Optional[str]:
    """Team that wins before any move is made (a robot starts at its
    goal).  Robots are checked in turn order."""
    for r in system.effective_turn_order:
        if at_goal(system, config, r):
            return system.robots[r].team
    return None
