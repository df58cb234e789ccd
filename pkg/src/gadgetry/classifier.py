"""Structural predicates of gadgets and the complexity dichotomy table.

Every positive verdict is backed by a witness that can be re-checked
against the raw :class:`~gadgetry.model.GadgetDef` by direct quadruple
inspection.  Cells whose hypotheses are not met are reported as
``unclassified-by-paper`` rather than guessed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import NotDagKTunnel, PreconditionViolated
from .model import GadgetDef, Label, Transition, _key

Direction = Tuple[Label, Label]

GAME_TYPES = (
    "1p-bounded", "1p-unbounded",
    "2p-bounded", "2p-unbounded",
    "team-bounded", "team-unbounded",
)

UNCLASSIFIED = "unclassified-by-paper"


# ---------------------------------------------------------------------------
# Witnesses


@dataclass(frozen=True)
class InteractionWitness:
    """A transition whose traversal changes the traversability of a
    direction on a different tunnel."""

    transition: Transition
    other: Direction

    def validate(self, g: GadgetDef) -> bool:
        s, a, b, s2 = self.transition
        pairs = g.tunnels
        if self.transition not in g.transitions or pairs is None:
            return False
        if g.tunnel_of(a) == g.tunnel_of(self.other[0]):
            return False
        return g.is_open(s, *self.other) != g.is_open(s2, *self.other)


@dataclass(frozen=True)
class OpeningWitness:
    """A transition that opens a direction of a different tunnel."""

    transition: Transition
    opened: Direction

    def validate(self, g: GadgetDef) -> bool:
        s, a, b, s2 = self.transition
        if self.transition not in g.transitions or g.tunnels is None:
            return False
        if g.tunnel_of(a) == g.tunnel_of(self.opened[0]):
            return False
        return not g.is_open(s, *self.opened) and g.is_open(s2, *self.opened)


@dataclass(frozen=True)
class ClosingWitness:
    """A forced distant closing.

    ``traversal`` crosses ``tunnel`` in ``state``; ``orientation`` picks
    one open direction on each of some other tunnels such that every
    quadruple realizing the traversal closes at least one of them.
    """

    state: Label
    tunnel: Tuple[Label, Label]
    traversal: Direction
    orientation: Tuple[Direction, ...]

    @property
    def size(self) -> int:
        return len(self.orientation)

    def validate(self, g: GadgetDef) -> bool:
        pairs = g.tunnels
        if pairs is None or not g.is_open(self.state, *self.traversal):
            return False
        if g.tunnel_of(self.traversal[0]) != self.tunnel:
            return False
        seen_tunnels = set()
        for c, d in self.orientation:
            t = g.tunnel_of(c)
            if t == self.tunnel or t in seen_tunnels or not g.is_open(self.state, c, d):
                return False
            seen_tunnels.add(t)
        realizing = [t for t in g.transitions
                     if t[0] == self.state and (t[1], t[2]) == self.traversal]
        return bool(realizing) and all(
            any(not g.is_open(t[3], c, d) for (c, d) in self.orientation)
            for t in realizing)


@dataclass(frozen=True)
class SingleUseWitness:
    """A transition into a state with no further transitions."""

    transition: Transition

    def validate(self, g: GadgetDef) -> bool:
        if self.transition not in g.transitions:
            return False
        target = self.transition[3]
        return all(t[0] != target for t in g.transitions)


@dataclass(frozen=True)
class OneDirectionalWitness:
    """A state where some traversal is open one way but not the other."""

    state: Label
    direction: Direction

    def validate(self, g: GadgetDef) -> bool:
        a, b = self.direction
        return g.is_open(self.state, a, b) and not g.is_open(self.state, b, a)


def _sorted_transitions(g: GadgetDef) -> List[Transition]:
    return sorted(g.transitions, key=lambda t: tuple(map(_key, t)))


# ---------------------------------------------------------------------------
# Property profile


@dataclass(frozen=True)
class PropertyProfile:
    """All structural flags of a gadget, each true flag with a witness."""

    is_k_tunnel: bool
    k: Optional[int]
    deterministic: bool
    reversible: bool
    is_dag: bool
    nontrivial: bool
    interacting_tunnels: bool
    interaction_witness: Optional[InteractionWitness]
    has_single_use_transition: bool
    single_use_witness: Optional[SingleUseWitness]
    has_one_directional_edge_state: bool
    one_directional_witness: Optional[OneDirectionalWitness]


def _find_interaction_witness(g: GadgetDef) -> Optional[InteractionWitness]:
    pairs = g.tunnels
    if pairs is None or len(pairs) < 2:
        return None
    directions = [d for p in pairs for d in (p, p[::-1])]
    for t in _sorted_transitions(g):
        s, a, b, s2 = t
        here = g.tunnel_of(a)
        for c, d in directions:
            if g.tunnel_of(c) == here:
                continue
            if g.is_open(s, c, d) != g.is_open(s2, c, d):
                return InteractionWitness(t, (c, d))
    return None


def _find_single_use_witness(g: GadgetDef) -> Optional[SingleUseWitness]:
    sources = {t[0] for t in g.transitions}
    for t in _sorted_transitions(g):
        if t[3] not in sources:
            return SingleUseWitness(t)
    return None


def _find_one_directional_witness(g: GadgetDef) -> Optional[OneDirectionalWitness]:
    for t in _sorted_transitions(g):
        s, a, b, _ = t
        if not g.is_open(s, b, a):
            return OneDirectionalWitness(s, (a, b))
    return None


def property_profile(g: GadgetDef) -> PropertyProfile:
    """Compute every structural flag of ``g`` exactly, with witnesses."""
    pairs = g.tunnels
    interaction = _find_interaction_witness(g)
    single_use = _find_single_use_witness(g)
    one_dir = _find_one_directional_witness(g)
    return PropertyProfile(
        is_k_tunnel=pairs is not None,
        k=len(pairs) if pairs is not None else None,
        deterministic=g.is_deterministic,
        reversible=g.is_reversible,
        is_dag=g.is_dag,
        nontrivial=not g.is_trivial,
        interacting_tunnels=interaction is not None,
        interaction_witness=interaction,
        has_single_use_transition=single_use is not None,
        single_use_witness=single_use,
        has_one_directional_edge_state=one_dir is not None,
        one_directional_witness=one_dir,
    )


# ---------------------------------------------------------------------------
# Distant openings and forced distant closings


def _require_dag_k_tunnel(g: GadgetDef) -> None:
    if g.tunnels is None:
        raise NotDagKTunnel(f"{g.name}: not a k-tunnel gadget")
    if not g.is_dag:
        raise NotDagKTunnel(f"{g.name}: state graph is not acyclic")


def has_distant_opening(g: GadgetDef) -> Tuple[bool, Optional[OpeningWitness]]:
    """Whether some transition opens a direction of a different tunnel.

    Requires a k-tunnel DAG gadget.
    """
    _require_dag_k_tunnel(g)
    pairs = g.tunnels
    directions = [d for p in pairs for d in (p, p[::-1])]
    for t in _sorted_transitions(g):
        s, a, b, s2 = t
        here = g.tunnel_of(a)
        for c, d in directions:
            if g.tunnel_of(c) == here:
                continue
            if not g.is_open(s, c, d) and g.is_open(s2, c, d):
                return True, OpeningWitness(t, (c, d))
    return False, None


def _open_directions_by_tunnel(g: GadgetDef, state: Label) -> List[List[Direction]]:
    """Per tunnel (in tunnel order), the list of its open directions."""
    out: List[List[Direction]] = []
    for x, y in g.tunnels:
        dirs = [(a, b) for (a, b) in ((x, y), (y, x)) if g.is_open(state, a, b)]
        out.append(dirs)
    return out


def _is_fdc(g: GadgetDef, state: Label, traversal: Direction,
            orientation: Tuple[Direction, ...]) -> bool:
    realizing = [t for t in g.transitions
                 if t[0] == state and (t[1], t[2]) == traversal]
    return bool(realizing) and all(
        any(not g.is_open(t[3], c, d) for (c, d) in orientation)
        for t in realizing)


def _minimal_witness_at(g: GadgetDef, state: Label) -> Optional[ClosingWitness]:
    """Smallest forced distant closing at ``state``.

    Ordered by (size, traversed tunnel index, traversal direction,
    oriented tunnel subset, direction bits), all in declaration order, so
    the returned witness is deterministic.
    """
    pairs = g.tunnels
    open_dirs = _open_directions_by_tunnel(g, state)
    for size in range(1, len(pairs) + 1):
        for ti, tunnel in enumerate(pairs):
            for traversal in [(tunnel[0], tunnel[1]), (tunnel[1], tunnel[0])]:
                if not g.is_open(state, *traversal):
                    continue
                others = [i for i in range(len(pairs)) if i != ti and open_dirs[i]]
                for subset in itertools.combinations(others, size):
                    for choice in itertools.product(*(open_dirs[i] for i in subset)):
                        if _is_fdc(g, state, traversal, choice):
                            return ClosingWitness(state, tunnel, traversal, choice)
    return None


def has_forced_distant_closing(g: GadgetDef) -> Tuple[bool, Optional[ClosingWitness]]:
    """Whether a monotonically closing DAG gadget has a forced distant
    closing.

    The decision walks states in reverse topological order; at each
    state and open traversal it accepts immediately when every realizing
    quadruple strictly reduces the number of other open tunnels, and
    otherwise enumerates the full orientations of the other open tunnels
    (sufficient because a forced distant closing stays one under adding
    oriented tunnels).  The witness is then the minimal one at the first
    accepting state: latest in topological order, then smallest size.
    """
    _require_dag_k_tunnel(g)
    opening, ow = has_distant_opening(g)
    if opening:
        raise PreconditionViolated(
            f"{g.name}: has a distant opening {ow.transition!r} -> {ow.opened!r}")
    pairs = g.tunnels
    for state in reversed(g.topo_states()):
        open_dirs = _open_directions_by_tunnel(g, state)
        accepted = False
        for ti, tunnel in enumerate(pairs):
            for traversal in [(tunnel[0], tunnel[1]), (tunnel[1], tunnel[0])]:
                if not g.is_open(state, *traversal):
                    continue
                realizing = [t for t in g.transitions
                             if t[0] == state and (t[1], t[2]) == traversal]
                others = [i for i in range(len(pairs)) if i != ti and open_dirs[i]]
                k = len(others)
                if k == 0:
                    continue
                if all(sum(1 for i in others
                           if any(g.is_open(t[3], c, d) for (c, d) in open_dirs[i])) < k
                       for t in realizing):
                    accepted = True
                    break
                for choice in itertools.product(*(open_dirs[i] for i in others)):
                    if _is_fdc(g, state, traversal, choice):
                        accepted = True
                        break
                if accepted:
                    break
            if accepted:
                break
        if accepted:
            return True, _minimal_witness_at(g, state)
    return False, None


# ---------------------------------------------------------------------------
# The dichotomy table


@dataclass(frozen=True)
class CellVerdict:
    """One table cell: the complexity class (or ``unclassified-by-paper``),
    the dichotomy rule that produced it, and the witness backing a
    hardness claim."""

    verdict: str
    rule: Optional[str] = None
    witness: Optional[object] = None
    note: Optional[str] = None


@dataclass
class ComplexityReport:
    """Verdicts for all six game types, plus the underlying profile."""

    profile: PropertyProfile
    cells: Dict[str, CellVerdict] = field(default_factory=dict)

    def verdicts(self) -> Dict[str, str]:
        return {k: v.verdict for k, v in self.cells.items()}


_OPEN_PROBLEM_NOTE = (
    "open problem: hardness of unbounded multiplayer games with "
    "noninteracting reversible deterministic gadgets (such as the "
    "1-toggle) is unresolved")


def classify(g: GadgetDef) -> ComplexityReport:
    """Map a gadget to its dichotomy-table cells.

    Each cell uses the strongest rule whose hypotheses ``g`` satisfies;
    partial characterizations are honored, never extrapolated.
    """
    p = property_profile(g)
    cells: Dict[str, CellVerdict] = {}

    not_tunnel = CellVerdict(
        UNCLASSIFIED, note="not a k-tunnel gadget; the dichotomies cover "
        "only gadgets whose locations pair into tunnels")

    # Unbounded games.
    if not p.is_k_tunnel:
        cells["1p-unbounded"] = not_tunnel
        cells["2p-unbounded"] = not_tunnel
        cells["team-unbounded"] = not_tunnel
    elif not p.interacting_tunnels:
        cells["1p-unbounded"] = CellVerdict("NL", rule="noninteracting-tunnels-1p")
        note = _OPEN_PROBLEM_NOTE if (p.reversible and p.deterministic) else (
            "noninteracting gadget outside the reversible deterministic "
            "characterization")
        cells["2p-unbounded"] = CellVerdict(UNCLASSIFIED, note=note)
        cells["team-unbounded"] = CellVerdict(UNCLASSIFIED, note=note)
    elif p.reversible and p.deterministic:
        w = p.interaction_witness
        cells["1p-unbounded"] = CellVerdict(
            "PSPACE-complete", rule="interacting-reversible-deterministic-1p", witness=w)
        cells["2p-unbounded"] = CellVerdict(
            "EXPTIME-complete", rule="interacting-reversible-deterministic-2p", witness=w)
        cells["team-unbounded"] = CellVerdict(
            "RE-complete", rule="interacting-reversible-deterministic-team", witness=w)
    else:
        note = ("interacting but not both reversible and deterministic; the "
                "unbounded characterization covers reversible deterministic gadgets")
        for cell in ("1p-unbounded", "2p-unbounded", "team-unbounded"):
            cells[cell] = CellVerdict(UNCLASSIFIED, note=note)

    # Bounded games (DAG gadgets only).
    if not p.is_k_tunnel:
        for cell in ("1p-bounded", "2p-bounded", "team-bounded"):
            cells[cell] = not_tunnel
    elif not p.is_dag:
        not_dag = CellVerdict(
            UNCLASSIFIED, note="state graph has a cycle; the bounded-game "
            "dichotomies cover only DAG gadgets")
        for cell in ("1p-bounded", "2p-bounded", "team-bounded"):
            cells[cell] = not_dag
    else:
        opening, open_w = has_distant_opening(g)
        if opening:
            cells["1p-bounded"] = CellVerdict(
                "NP-complete", rule="dag-dichotomy-distant-opening", witness=open_w)
        else:
            closing, close_w = has_forced_distant_closing(g)
            if closing:
                cells["1p-bounded"] = CellVerdict(
                    "NP-complete", rule="dag-dichotomy-forced-distant-closing",
                    witness=close_w)
            else:
                cells["1p-bounded"] = CellVerdict("NL", rule="dag-dichotomy-easy")
        if p.nontrivial:
            cells["2p-bounded"] = CellVerdict(
                "PSPACE-complete", rule="nontrivial-dag-2p-bounded",
                witness=p.single_use_witness)
            cells["team-bounded"] = CellVerdict(
                "NEXPTIME-complete", rule="nontrivial-dag-team-bounded",
                witness=p.single_use_witness)
        else:
            for cell in ("2p-bounded", "team-bounded"):
                cells[cell] = CellVerdict("P", rule="trivial-gadget-easy")

    return ComplexityReport(p, {k: cells[k] for k in GAME_TYPES})


def report_to_obj(report: ComplexityReport) -> dict:
    """JSON-ready rendering of a complexity report."""
    p = report.profile

    def w(obj):
        if obj is None:
            return None
        d = {}
        for k, v in vars(obj).items():
            d[k] = list(v) if isinstance(v, tuple) else v
        d["kind"] = type(obj).__name__
        return d

    return {
        "profile": {
            "is_k_tunnel": p.is_k_tunnel,
            "k": p.k,
            "deterministic": p.deterministic,
            "reversible": p.reversible,
            "is_dag": p.is_dag,
            "nontrivial": p.nontrivial,
            "interacting_tunnels": p.interacting_tunnels,
            "interaction_witness": w(p.interaction_witness),
            "has_single_use_transition": p.has_single_use_transition,
            "single_use_witness": w(p.single_use_witness),
            "has_one_directional_edge_state": p.has_one_directional_edge_state,
            "one_directional_witness": w(p.one_directional_witness),
        },
        "cells": {
            name: {
                "verdict": c.verdict,
                "rule": c.rule,
                "witness": w(c.witness),
                "note": c.note,
            }
            for name, c in report.cells.items()
        },
    }
