"""Combinatorial planarity of gadget systems and planar gadget variants.

A system is planar when the graph obtained by replacing every instance
with a wheel — a cycle through its locations in the instance's cyclic
order plus a hub — and adding the connection edges is planar.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .errors import MissingCyclicOrder, NotKTunnel
from .model import GadgetDef, Label, Point, System

Vertex = Tuple


@dataclass
class EmbeddingReport:
    """Outcome of a planarity test.

    ``witness`` is a rotation system (vertex -> neighbors in cyclic
    order) when planar, else the edge list of a K5/K3,3 subdivision.
    """

    planar: bool
    witness: object = None


def _vertex(p: Point) -> Vertex:
    if isinstance(p, tuple):
        return ("loc", p[0], p[1])
    return ("node", p)


def wheel_expansion(system: System) -> nx.Graph:
    """The wheel-expansion graph of a system.

    Every instance must carry a cyclic order; reflections do not affect
    the expansion (reversing a cycle yields the same graph).
    """
    G = nx.Graph()
    for n in system.nodes:
        G.add_node(("node", n))
    for inst in system.instances:
        order = inst.cyclic_order
        if order is None:
            raise MissingCyclicOrder(
                f"instance {inst.id!r} has no cyclic order")
        hub = ("hub", inst.id)
        ring = [("loc", inst.id, l) for l in order]
        for v in ring:
            G.add_edge(hub, v)
        for i, v in enumerate(ring):
            if len(ring) > 1:
                G.add_edge(v, ring[(i + 1) % len(ring)])
    for (u, v) in system.edges:
        G.add_edge(_vertex(u), _vertex(v))
    return G


def _rotation_system(embedding: nx.PlanarEmbedding) -> Dict[Vertex, Tuple[Vertex, ...]]:
    return {v: tuple(embedding.neighbors_cw_order(v))
            for v in embedding.nodes()}


def _planarity(G: nx.Graph) -> EmbeddingReport:
    planar, cert = nx.check_planarity(G, counterexample=True)
    if planar:
        return EmbeddingReport(True, _rotation_system(cert))
    return EmbeddingReport(False, sorted(map(tuple, map(sorted, cert.edges()))))


def is_planar_system(system: System) -> EmbeddingReport:
    """Planarity of the system's wheel expansion."""
    return _planarity(wheel_expansion(system))


def validate_embedding_witness(system_or_graph, witness: Dict) -> bool:
    """Re-check a rotation system: it must cover exactly the expansion's
    adjacencies and satisfy Euler's formula with its face count."""
    G = (system_or_graph if isinstance(system_or_graph, nx.Graph)
         else wheel_expansion(system_or_graph))
    if set(witness) != set(G.nodes()):
        return False
    for v, nbrs in witness.items():
        if set(nbrs) != set(G.neighbors(v)) or len(nbrs) != G.degree(v):
            return False
    emb = nx.PlanarEmbedding()
    for v, nbrs in witness.items():
        prev = None
        for w in nbrs:
            emb.add_half_edge(v, w, ccw=prev) if hasattr(emb, "add_half_edge") \
                else emb.add_half_edge_ccw(v, w, prev)
            prev = w
    try:
        emb.check_structure()
    except nx.NetworkXException:
        return False
    half_edges = {(u, v) for u in witness for v in witness[u]}
    faces = 0
    seen: Set[Tuple] = set()
    for (u, v) in sorted(half_edges):
        if (u, v) in seen:
            continue
        faces += 1
        emb.traverse_face(u, v, mark_half_edges=seen)
    V = G.number_of_nodes()
    E = G.number_of_edges()
    C = nx.number_connected_components(G)
    return V - E + faces == 1 + C


def validate_kuratowski_witness(system_or_graph, edges: Sequence[Tuple]) -> bool:
    """Re-check a certificate: its edges lie in the expansion and form a
    K5 or K3,3 subdivision."""
    G = (system_or_graph if isinstance(system_or_graph, nx.Graph)
         else wheel_expansion(system_or_graph))
    H = nx.Graph()
    for (u, v) in edges:
        if not G.has_edge(u, v):
            return False
        H.add_edge(u, v)
    # Suppress degree-2 vertices.
    H = H.copy()
    changed = True
    while changed:
        changed = False
        for v in list(H.nodes()):
            if H.degree(v) == 2:
                a, b = list(H.neighbors(v))
                if a == b or H.has_edge(a, b):
                    continue
                H.remove_node(v)
                H.add_edge(a, b)
                changed = True
    degrees = sorted(d for _, d in H.degree())
    if degrees == [4] * 5 and H.number_of_edges() == 10:
        return True
    if degrees == [3] * 6 and H.number_of_edges() == 9:
        return nx.is_bipartite(H)
    return False


# ---------------------------------------------------------------------------
# Planar variants


@dataclass(frozen=True)
class PlanarVariant:
    """A gadget together with one inequivalent planar embedding."""

    definition: GadgetDef
    cyclic_order: Tuple[Label, ...]


def _automorphisms(g: GadgetDef) -> List[Dict[Label, Label]]:
    """Location permutations extendable to a full gadget automorphism
    fixing the initial state."""
    locs, states = g.locations, g.states
    autos = []
    for loc_perm in itertools.permutations(locs):
        pi = dict(zip(locs, loc_perm))
        for st_perm in itertools.permutations(states):
            sigma = dict(zip(states, st_perm))
            if sigma[g.initial] != g.initial:
                continue
            if {(sigma[s], pi[a], pi[b], sigma[s2])
                    for (s, a, b, s2) in g.transitions} == g.transitions:
                autos.append(pi)
                break
    return autos


def _canon_cycle(order: Sequence[Label], idx: Dict[Label, int]) -> Tuple[int, ...]:
    seq = [idx[l] for l in order]
    n = len(seq)
    best = min(tuple(seq[(i + j) % n] for j in range(n)) for i in range(n))
    return best


def planar_variants(g: GadgetDef, allow_reflection: bool = True) -> List[PlanarVariant]:
    """All inequivalent cyclic location orders of ``g``.

    Orders are identified up to rotation, gadget automorphisms fixing
    the initial state, and (optionally) reflection.
    """
    if g.tunnels is None:
        raise NotKTunnel(f"{g.name}: not a k-tunnel gadget")
    locs = g.locations
    idx = {l: i for i, l in enumerate(locs)}
    autos = _automorphisms(g)
    n = len(locs)
    if n == 1:
        return [PlanarVariant(g, (locs[0],))]
    orders = [(locs[0],) + rest
              for rest in itertools.permutations(locs[1:])]
    classes: Dict[Tuple[int, ...], Tuple[Label, ...]] = {}
    for order in orders:
        images = []
        for pi in autos:
            mapped = [pi[l] for l in order]
            images.append(_canon_cycle(mapped, idx))
            if allow_reflection:
                images.append(_canon_cycle(mapped[::-1], idx))
        key = min(images)
        cur = classes.get(key)
        if cur is None or _canon_cycle(order, idx) < _canon_cycle(cur, idx):
            classes[key] = order
    variants = sorted(classes.values(), key=lambda o: [idx[l] for l in o])
    return [PlanarVariant(g, o) for o in variants]


def ports_on_common_face(net, target: GadgetDef) -> bool:
    """Whether the network embeds with its ports on a common face in the
    target's location (cyclic) order.

    Checked by augmenting the wheel expansion with a wheel through the
    port vertices in that order: the augmented graph is planar iff such
    an embedding exists (reflection counts as the same embedding).
    """
    G = wheel_expansion(net.system)
    ports = [_vertex(p) for p in net.ports]
    hub = ("port-hub",)
    for v in ports:
        G.add_edge(hub, v)
    if len(ports) > 2:
        for i, v in enumerate(ports):
            G.add_edge(v, ports[(i + 1) % len(ports)])
    return bool(nx.check_planarity(G, counterexample=False)[0])
