"""Explicit-state decision procedures for the motion-planning games.

``solve_1p`` is a breadth-first search over (gadget states, robot
component) pairs; ``solve_1p_shortcut`` answers non-interacting systems
by plain graph reachability; ``solve_2p`` computes the attractor of the
White-win terminals on the explicit game graph; ``solve_team_bounded``
searches imperfect-information team strategies over observation
histories up to a horizon.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .errors import ExplosionCap, PreconditionViolated, StateCapExceeded
from .model import (Config, Label, Move, System, _key, apply_move, at_goal,
                    components, initial_config, legal_moves, mover,
                    winner_after)

DEFAULT_CAP = 10_000_000


@dataclass
class Solution:
    """Outcome of a 1-player search."""

    reachable: bool
    move_sequence: List[Move] = field(default_factory=list)
    explored_states: int = 0


@dataclass
class GameVerdict:
    """Outcome of a 2-player game solve.

    ``strategy`` maps configurations where the winning side moves to a
    move that stays inside its winning region (strictly decreasing the
    distance-to-win rank, so following it always terminates in a win).
    """

    white_forced_win: bool
    strategy: Dict[Config, Move] = field(default_factory=dict)
    game_graph_size: int = 0


# ---------------------------------------------------------------------------
# 1-player


def solve_1p(system: System, cap: int = DEFAULT_CAP) -> Solution:
    """Shortest-witness reachability for the single robot.

    States are (gadget state vector, robot component); the turn index is
    meaningless with one player and is ignored.
    """
    if len(system.robots) != 1:
        raise PreconditionViolated(
            f"solve_1p needs exactly one robot, got {len(system.robots)}")
    start = initial_config(system)
    if at_goal(system, start, 0):
        return Solution(True, [], 1)
    key = (start.states, start.positions[0])
    parents: Dict[tuple, Optional[Tuple[tuple, Move]]] = {key: None}
    queue = deque([start])
    explored = 1
    while queue:
        config = queue.popleft()
        ckey = (config.states, config.positions[0])
        for move in legal_moves(system, config, include_wait=False):
            child = apply_move(system, config, move)
            kid = (child.states, child.positions[0])
            if kid in parents:
                continue
            parents[kid] = (ckey, move)
            if at_goal(system, child, 0):
                seq: List[Move] = []
                cur = kid
                while parents[cur] is not None:
                    cur, m = parents[cur]
                    seq.append(m)
                seq.reverse()
                return Solution(True, seq, len(parents))
            explored += 1
            if explored > cap:
                raise StateCapExceeded(cap, len(queue))
            queue.append(Config(child.states, child.positions, 0))
    return Solution(False, [], len(parents))


def solve_1p_shortcut(system: System) -> Solution:
    """Reachability for non-interacting systems via a static digraph.

    One arc per tunnel direction traversable in the initial state; a
    shortest path in this graph is self-intersection-free, and the
    witness replays it, picking a realizing quadruple dynamically.
    """
    if len(system.robots) != 1:
        raise PreconditionViolated(
            f"solve_1p_shortcut needs exactly one robot, got {len(system.robots)}")
    for inst in system.instances:
        if inst.definition.is_interacting:
            raise PreconditionViolated(
                f"instance {inst.id!r} has interacting tunnels")
    comp = components(system)
    arcs: Dict[int, List[Tuple[int, int, Label, Label]]] = {}
    order = sorted(range(len(system.instances)),
                   key=lambda i: _key(system.instances[i].id))
    for i in order:
        inst = system.instances[i]
        state = inst.initial_state
        for (a, b) in sorted(inst.definition.open_traversals(state),
                             key=lambda d: tuple(map(_key, d))):
            src = comp.index_of((inst.id, a))
            dst = comp.index_of((inst.id, b))
            arcs.setdefault(src, []).append((dst, i, a, b))
    start = comp.index_of(system.robots[0].start)
    goal = comp.index_of(system.robots[0].goal)
    if start == goal:
        return Solution(True, [], 1)
    parents: Dict[int, Optional[Tuple[int, Tuple[int, Label, Label]]]] = {start: None}
    queue = deque([start])
    while queue:
        here = queue.popleft()
        for dst, i, a, b in arcs.get(here, ()):
            if dst in parents:
                continue
            parents[dst] = (here, (i, a, b))
            if dst == goal:
                queue.clear()
                break
            queue.append(dst)
    if goal not in parents:
        return Solution(False, [], len(parents))
    hops: List[Tuple[int, Label, Label]] = []
    cur = goal
    while parents[cur] is not None:
        cur, hop = parents[cur]
        hops.append(hop)
    hops.reverse()
    config = initial_config(system)
    seq: List[Move] = []
    for i, a, b in hops:
        inst = system.instances[i]
        t = next(t for t in inst.definition.moves_from(config.states[i], a)
                 if t[2] == b)
        move = Move(0, inst.id, t)
        config = apply_move(system, config, move)
        seq.append(move)
    return Solution(True, seq, len(parents))


# ---------------------------------------------------------------------------
# 2-player


def _game_graph(system: System, cap: int):
    """Forward-expand the full game graph from the initial configuration.

    Returns (nodes, successors) where successors[c] lists (move, child).
    Terminal configurations (a robot at its goal after the previous move)
    get no successors.
    """
    start = initial_config(system)
    succ: Dict[Config, List[Tuple[Move, Config]]] = {}
    winner: Dict[Config, Optional[str]] = {}
    order = system.effective_turn_order
    first_win = None
    for r in order:
        if at_goal(system, start, r):
            first_win = system.robots[r].team
            break
    winner[start] = first_win
    queue = deque([start])
    while queue:
        config = queue.popleft()
        if winner[config] is not None:
            succ[config] = []
            continue
        kids: List[Tuple[Move, Config]] = []
        for move in legal_moves(system, config):
            child = apply_move(system, config, move)
            if child not in winner:
                winner[child] = winner_after(system, child, move.robot)
                if len(winner) > cap:
                    raise StateCapExceeded(cap, len(queue))
                queue.append(child)
            kids.append((move, child))
        succ[config] = kids
    return start, succ, winner


def solve_2p(system: System, cap: int = DEFAULT_CAP) -> GameVerdict:
    """Does the first-moving side have a forced win?

    White is the team of the robot moving first.  Terminals are
    configurations whose previous mover reached its goal; infinite play
    counts as not a White win.  Retrograde attractor with in-degree
    counters; ranks strictly decrease along the returned strategy.
    """
    if len(system.robots) != 2:
        raise PreconditionViolated(
            f"solve_2p needs exactly two robots, got {len(system.robots)}")
    order = system.effective_turn_order
    white = system.robots[order[0]].team
    if system.robots[order[0]].team == system.robots[order[1]].team:
        raise PreconditionViolated("both robots are on the same team")
    start, succ, winner = _game_graph(system, cap)

    pred: Dict[Config, List[Tuple[Config, Move]]] = {}
    pending: Dict[Config, int] = {}
    for c, kids in succ.items():
        pending[c] = len(kids)
        for move, child in kids:
            pred.setdefault(child, []).append((c, move))

    rank: Dict[Config, int] = {}
    strategy: Dict[Config, Move] = {}
    queue = deque(c for c, w in winner.items() if w == white)
    for c in queue:
        rank[c] = 0
    while queue:
        c = queue.popleft()
        for parent, move in pred.get(c, ()):
            if parent in rank or winner[parent] is not None:
                continue
            parent_white = system.robots[mover(system, parent)].team == white
            if parent_white:
                rank[parent] = rank[c] + 1
                strategy[parent] = move
                queue.append(parent)
            else:
                pending[parent] -= 1
                if pending[parent] == 0:
                    rank[parent] = 1 + max(rank[kid] for _, kid in succ[parent])
                    queue.append(parent)
    return GameVerdict(start in rank, strategy, len(succ))


# ---------------------------------------------------------------------------
# Bounded team games with imperfect information


Observation = Tuple[int, Tuple[Tuple[int, Label], ...]]


def _observe(system: System, config: Config, robot: int) -> Observation:
    """What ``robot`` sees: its component and the states of gadget
    instances with a location in that component."""
    from .model import _gadget_entries

    here = config.positions[robot]
    seen: List[Tuple[int, Label]] = []
    last = -1
    for i, _, _ in _gadget_entries(system).get(here, ()):
        if i != last:
            seen.append((i, config.states[i]))
            last = i
    return (here, tuple(seen))


def solve_team_bounded(system: System, horizon: int,
                       cap: int = 200_000) -> bool:
    """Can the first-moving team force a win within ``horizon`` moves?

    The team's robots only see the states of gadgets adjacent to their
    own component (plus the commonly known initial configuration); each
    robot's strategy is a function of its private observation history.
    The opposing robots play with full information.

    Decided by backtracking strategy synthesis: an AND-queue of pending
    game branches is discharged left to right; the acting team robot's
    move is committed per (robot, observation history), so branches the
    robot cannot distinguish are forced to the same move, and failures
    unwind those commitments in LIFO order (complete search).
    """
    for inst in system.instances:
        if not inst.definition.is_dag:
            raise PreconditionViolated(
                f"instance {inst.id!r} is not a DAG gadget")
    if not system.robots:
        raise PreconditionViolated("no robots")
    order = system.effective_turn_order
    team = system.robots[order[0]].team
    start = initial_config(system)
    for r in order:
        if at_goal(system, start, r):
            return system.robots[r].team == team

    # Strategy commitments: (robot, observation history) -> chosen move.
    commitments: Dict[Tuple[int, tuple], Move] = {}

    def solve(obligations: Tuple[tuple, ...]) -> bool:
        # Expand adversary turns iteratively; recurse only at team
        # choice points.
        while True:
            if not obligations:
                return True
            config, depth, histories = obligations[0]
            rest = obligations[1:]
            if depth >= horizon:
                return False
            r = mover(system, config)
            if system.robots[r].team == team:
                break
            grown: List[tuple] = []
            for move in legal_moves(system, config):
                child = apply_move(system, config, move)
                won = winner_after(system, child, r)
                if won == team:
                    continue
                if won is not None:
                    return False
                grown.append((child, depth + 1, histories))
            obligations = tuple(grown) + rest

        hist = histories[r] + (_observe(system, config, r),)
        key = (r, hist)
        committed = commitments.get(key)
        for move in ([committed] if committed is not None
                     else legal_moves(system, config)):
            child = apply_move(system, config, move)
            won = winner_after(system, child, r)
            if won is not None and won != team:
                continue
            if won == team:
                next_obls = rest
            else:
                kid_histories = histories[:r] + (hist,) + histories[r + 1:]
                next_obls = ((child, depth + 1, kid_histories),) + rest
            if committed is None:
                commitments[key] = move
                if len(commitments) > cap:
                    raise ExplosionCap(cap, len(commitments))
            if solve(next_obls):
                return True
            if committed is None:
                del commitments[key]
        return False

    empty = tuple(() for _ in system.robots)
    return solve(((start, 0, empty),))
