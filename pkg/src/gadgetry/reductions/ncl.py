"""Compiling constraint-graph reversal into 1-player gadget mazes.

``compile_ncl`` emits the flat construction: one edge gadget (two
toggle-lock 2-tunnel instances sharing an entrance and a middle
junction) per constraint edge, plus one wire gadget per typed vertex
that forces a weight-2 locked set of incoming edges at all times.  The
robot reaches the goal junction inside the target's edge gadget exactly
when some sequence of legal reversals makes the target reversible.

``compile_ncl_planar`` emits the crossing-free variant.  Every edge
becomes a closed ring around its corridor: two toggle-lock tunnels
(one per endpoint) joined by two wire strands, so reversing the edge
is one trip around the ring.  Faces of a chosen planar embedding
become free junction nodes; a spanning tree of the dual graph is
threaded through partial-crossover lines spliced into the strands so
the robot can reach every face without crossing a wire.  Lock state
lives in relay toggle-locks also spliced into the strands: a relay's
ring tunnel co-toggles with its edge and is dead while the relay is
locked, and its lock tunnel pokes into a corner region at the owning
vertex, where the corner regions of all three arms meet; the vertex
wiring is drawn through that shared region, with one partial
crossover per branching vertex letting the swap hub pass over a
spoke.  All partial crossovers are finally expanded into verified
two-gadget sub-networks of crossing-tunnel toggle-locks, so the
output contains toggle-lock instances only and passes the planarity
check.
"""

from __future__ import annotations

import json
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from ..errors import InvalidInstance, NotPlanarInput, NoValidLockedSet
from ..library import gadget
from ..model import GadgetInstance, Point, Robot, System
from .instances import BLUE, NCLGraph

__all__ = ["compile_ncl", "compile_ncl_planar"]

P_RIM = ("tl", "tr", "br", "bl")
ABA_RIM = ("n", "e", "s", "w")


def _check_ids(g: NCLGraph) -> None:
    for name in list(g.vertices) + [e.id for e in g.edges]:
        if "." in name:
            raise InvalidInstance(f"id {name!r} contains '.'")


def _check_no_typed_self_loops(g: NCLGraph) -> None:
    for e in g.edges:
        if e.u == e.v and g.vertices[e.u] != "free":
            raise InvalidInstance(
                f"edge {e.id!r} is a self-loop at typed vertex {e.u!r}")


def greedy_locked_sets(g: NCLGraph) -> Dict[str, List[str]]:
    """The initial weight-2 locked set per typed vertex, chosen greedily.

    Vertices are processed in sorted order; an ``and`` vertex locks its
    blue edge when incoming and both reds otherwise, an ``or`` vertex
    locks its first incoming blue edge by id.  Raises
    :class:`NoValidLockedSet` when the initial orientation leaves some
    typed vertex with incoming weight below 2.
    """
    locked: Dict[str, List[str]] = {}
    for vid in sorted(v for v, k in g.vertices.items() if k != "free"):
        incident = g.incident(vid)
        incoming = [e for e in incident if e.head == vid]
        if sum(e.weight for e in incoming) < 2:
            raise NoValidLockedSet(
                f"vertex {vid!r} starts with incoming weight "
                f"{sum(e.weight for e in incoming)}")
        if g.vertices[vid] == "and":
            blue = next(e for e in incident if e.color == BLUE)
            if blue.head == vid:
                locked[vid] = [blue.id]
            else:
                locked[vid] = sorted(e.id for e in incident if e.color != BLUE)
        else:
            blue_in = sorted(e.id for e in incoming if e.color == BLUE)
            locked[vid] = [blue_in[0]]
    return locked


def _edge_side_states(e, locked: Mapping[str, List[str]]) -> Tuple[int, int]:
    """Initial states (side at u, side at v): tail 1, head 3, locked 2."""
    is_locked = e.id in locked.get(e.head, [])
    head_state = 2 if is_locked else 3
    if e.head == e.v:
        return 1, head_state
    return head_state, 1


def _vertex_side(e, vid: str) -> str:
    return f"e_{e.id}_a" if e.u == vid else f"e_{e.id}_b"


def compile_ncl(g: NCLGraph) -> System:
    """Compile a constraint graph into a 1-robot maze.

    The robot starts on the shared entrance hub and must reach the
    middle junction of the target's edge gadget, which it can enter
    exactly when the target edge is unlocked at its head; unlocking
    requires walking the head vertex's gadget to re-point its weight-2
    locked set, which is possible exactly when the reversal is legal.
    """
    _check_ids(g)
    _check_no_typed_self_loops(g)
    locked = greedy_locked_sets(g)
    l2t = gadget("l2t")

    instances: List[GadgetInstance] = []
    nodes: List[str] = ["start"]
    edges: List[Tuple[Point, Point]] = []

    for e in g.edges:
        sa, sb = _edge_side_states(e, locked)
        instances.append(GadgetInstance(
            f"e_{e.id}_a", l2t, state=sa, role=f"edge:{e.id}:{e.u}"))
        instances.append(GadgetInstance(
            f"e_{e.id}_b", l2t, state=sb, role=f"edge:{e.id}:{e.v}"))
        ent, mid = f"e_{e.id}_ent", f"e_{e.id}_mid"
        nodes += [ent, mid]
        edges += [
            (ent, (f"e_{e.id}_a", "tl")), (ent, (f"e_{e.id}_b", "tl")),
            (mid, (f"e_{e.id}_a", "bl")), (mid, (f"e_{e.id}_b", "bl")),
            ("start", ent),
        ]

    vertex_gadgets = 0
    for vid in sorted(v for v, k in g.vertices.items() if k != "free"):
        vertex_gadgets += 1
        incident = g.incident(vid)
        ent = f"v_{vid}_ent"
        nodes.append(ent)
        edges.append(("start", ent))
        if g.vertices[vid] == "and":
            blue = next(e for e in incident if e.color == BLUE)
            r1, r2 = sorted((e for e in incident if e.color != BLUE),
                            key=lambda e: e.id)
            edges += [
                (ent, (_vertex_side(blue, vid), "br")),
                ((_vertex_side(blue, vid), "tr"), (_vertex_side(r1, vid), "tr")),
                ((_vertex_side(r1, vid), "br"), (_vertex_side(r2, vid), "tr")),
                ((_vertex_side(r2, vid), "br"), ent),
            ]
        else:
            mid = f"v_{vid}_mid"
            nodes.append(mid)
            for e in sorted(incident, key=lambda e: e.id):
                edges += [(ent, (_vertex_side(e, vid), "br")),
                          (mid, (_vertex_side(e, vid), "tr"))]

    meta = {
        "problem": "ncl",
        "target": g.target,
        "locked": locked,
        "audit": {"edge_gadgets": g.num_edges,
                  "vertex_gadgets": vertex_gadgets},
    }
    return System(
        instances=tuple(instances),
        nodes=tuple(nodes),
        edges=tuple(edges),
        robots=(Robot(start="start", goal=f"e_{g.target}_mid"),),
        meta=json.dumps(meta),
    )


# ---------------------------------------------------------------------------
# Planar compilation.

def _subdivided(g: NCLGraph) -> nx.Graph:
    H = nx.Graph()
    H.add_nodes_from(g.vertices)
    for e in g.edges:
        m1, m2 = ("m1", e.id), ("m2", e.id)
        H.add_edge(e.u, m1)
        H.add_edge(m1, m2)
        H.add_edge(m2, e.v)
    return H


def _embedding(g: NCLGraph, H: nx.Graph,
               rotation_system: Optional[Mapping[str, Sequence[str]]]
               ) -> nx.PlanarEmbedding:
    if rotation_system is None:
        planar, emb = nx.check_planarity(H)
        if not planar:
            raise NotPlanarInput(
                "the constraint graph admits no planar embedding")
        return emb
    by_id = {e.id: e for e in g.edges}
    emb = nx.PlanarEmbedding()
    for vid in g.vertices:
        order = rotation_system.get(vid)
        if order is None:
            order = [e.id for e in g.incident(vid)]
        ends: List[Tuple] = []
        seen_loop = set()
        for eid in order:
            e = by_id.get(eid)
            if e is None or vid not in (e.u, e.v):
                raise NotPlanarInput(
                    f"rotation at {vid!r} names non-incident edge {eid!r}")
            if e.u == e.v:
                which = "m2" if eid in seen_loop else "m1"
                seen_loop.add(eid)
                ends.append((which, eid))
            else:
                ends.append(("m1" if e.u == vid else "m2", eid))
        if len(ends) != H.degree(vid):
            raise NotPlanarInput(
                f"rotation at {vid!r} must list each incident edge end once")
        prev = None
        for end in ends:
            if prev is None:
                emb.add_half_edge(vid, end)
            else:
                emb.add_half_edge(vid, end, ccw=prev)
            prev = end
    for e in g.edges:
        m1, m2 = ("m1", e.id), ("m2", e.id)
        emb.add_half_edge(m1, e.u)
        emb.add_half_edge(m1, m2, ccw=e.u)
        emb.add_half_edge(m2, m1)
        emb.add_half_edge(m2, e.v, ccw=m1)
    try:
        emb.check_structure()
    except nx.NetworkXException as exc:
        raise NotPlanarInput(
            f"the supplied rotation system is not planar: {exc}") from exc
    return emb


def _faces(emb: nx.PlanarEmbedding):
    """All faces as node cycles, indexed in a canonical order."""
    visited = set()
    faces: List[List] = []
    half_edges = sorted(emb.edges(), key=lambda vw: (str(vw[0]), str(vw[1])))
    for v, w in half_edges:
        if (v, w) in visited:
            continue
        faces.append(emb.traverse_face(v, w, mark_half_edges=visited))
    return faces


def compile_ncl_planar(
        g: NCLGraph,
        rotation_system: Optional[Mapping[str, Sequence[str]]] = None,
        expand_crossovers: bool = True) -> System:
    """Compile a planar constraint graph into a crossing-free maze.

    ``rotation_system`` optionally fixes the embedding (edge ids in
    cyclic order around each vertex; a self-loop appears twice); an
    invalid or non-planar rotation raises :class:`NotPlanarInput`, as
    does a graph with no planar embedding at all.  With
    ``expand_crossovers`` every partial crossover is replaced by its
    verified two-gadget crossing-tunnel sub-network.
    """
    _check_ids(g)
    _check_no_typed_self_loops(g)
    locked = greedy_locked_sets(g)
    l2t = gadget("l2t")
    aba = gadget("aba")
    by_id = {e.id: e for e in g.edges}

    H = _subdivided(g)
    emb = _embedding(g, H, rotation_system)
    faces = _faces(emb)

    # Face bookkeeping: which face lies on each side of each edge.
    side_face: Dict[Tuple[str, str], int] = {}
    for fi, cyc in enumerate(faces):
        n = len(cyc)
        for i, b in enumerate(cyc):
            c = cyc[(i + 1) % n]
            if (isinstance(b, tuple) and isinstance(c, tuple)
                    and b[1] == c[1] and b[0] != c[0]):
                side_face[(b[1], "ab" if b[0] == "m1" else "ba")] = fi

    # Dual spanning forest over faces, one tree per connected component,
    # rooted at the component's lowest-numbered face; face 0 of the
    # all-component dual acts as the robot's start face.
    dual = nx.MultiGraph()
    dual.add_nodes_from(range(len(faces)))
    for e in g.edges:
        dual.add_edge(side_face[(e.id, "ab")], side_face[(e.id, "ba")],
                      key=e.id)
    parent: Dict[int, Tuple[int, str]] = {}
    roots: List[int] = []
    seen: set = set()
    for root in range(len(faces)):
        if root in seen:
            continue
        roots.append(root)
        seen.add(root)
        frontier = [root]
        while frontier:
            fi = frontier.pop(0)
            for _, fj, eid in sorted(dual.edges(fi, keys=True),
                                     key=lambda t: (t[1], t[2])):
                if fj not in seen:
                    seen.add(fj)
                    parent[fj] = (fi, eid)
                    frontier.append(fj)
    tree_edge: Dict[str, Tuple[int, int]] = {}   # edge id -> (parent, child)
    for child, (par, eid) in parent.items():
        tree_edge[eid] = (par, child)

    instances: List[GadgetInstance] = []
    nodes: List[str] = [f"face_{fi}" for fi in range(len(faces))]
    edges: List[Tuple[Point, Point]] = []
    for extra_root in roots[1:]:
        edges.append((f"face_{roots[0]}", f"face_{extra_root}"))

    # Ordered tunnel splices per corridor strand.  The "ab" strand runs
    # from the entrance junction l2 (at u) to l1 (at v) and bounds the
    # edge's "ab"-side face; the "ba" strand runs from r2 (at v) to r1
    # (at u) and bounds the other side.  Sections keep u-end elements,
    # dual-tree transits, and v-end elements grouped so that crossing
    # pairs nest without intersecting inside the ring.
    elems: Dict[str, Dict[str, List[Tuple]]] = {
        e.id: {"ab": [], "ba": []} for e in g.edges}

    def splice_aba(e, strand: str, section: int, inst_id: str,
                   role: str) -> None:
        toward_v = e.head == e.v
        if strand == "ab":
            state = "dl" if toward_v else "dr"
            first, second = "e", "w"
        else:
            state = "dr" if toward_v else "dl"
            first, second = "w", "e"
        instances.append(GadgetInstance(
            inst_id, aba, state=state, cyclic_order=ABA_RIM, role=role))
        elems[e.id][strand].append(
            (section, len(elems[e.id][strand]), inst_id, first, second))

    # Edge clusters: the two toggle-locks and the four ring junctions;
    # strand chains are wired once all splices are known.
    tree_pairs = 0
    for e in g.edges:
        sa, sb = (1, 3) if e.head == e.v else (3, 1)
        ia, ib = f"e_{e.id}_a", f"e_{e.id}_b"
        instances += [
            GadgetInstance(ia, l2t, state=sa, cyclic_order=P_RIM,
                           role=f"edge:{e.id}:{e.u}"),
            GadgetInstance(ib, l2t, state=sb, cyclic_order=P_RIM,
                           role=f"edge:{e.id}:{e.v}"),
        ]
        l1, l2_, r1, r2 = (f"e_{e.id}_l1", f"e_{e.id}_l2",
                           f"e_{e.id}_r1", f"e_{e.id}_r2")
        nodes += [l1, l2_, r1, r2]
        edges += [(l2_, (ia, "tl")), ((ia, "bl"), r1),
                  (r2, (ib, "bl")), ((ib, "tl"), l1)]
        edges.append((f"face_{side_face[(e.id, 'ab')]}", l2_))
        if e.id in tree_edge:
            tree_pairs += 1
            par, child = tree_edge[e.id]
            x1, x2 = f"x_{e.id}_1", f"x_{e.id}_2"
            splice_aba(e, "ab", 1, x1, f"crossover:{e.id}:transit-ab")
            splice_aba(e, "ba", 1, x2, f"crossover:{e.id}:transit-ba")
            entry, far = (x1, x2) if side_face[(e.id, "ab")] == par else \
                (x2, x1)
            edges += [(f"face_{par}", (entry, "n")),
                      ((entry, "s"), (far, "n")),
                      ((far, "s"), f"face_{child}")]

    # Vertex gadgets.  Each incident edge end gets a relay toggle-lock
    # spliced into one strand of its own corridor -- the strand away
    # from the corridor's entrance junction, so the lock tunnel pokes
    # into a corner region at the vertex.  The three corner regions
    # around a degree-3 vertex meet where the vertex itself used to be,
    # with nothing separating them, so the lock wiring for all three
    # arms is drawn there without crossing any strand.
    vertex_gadgets = 0
    vertex_crossovers = 0
    for vid in sorted(v for v, k in g.vertices.items() if k != "free"):
        vertex_gadgets += 1
        rotation = [end[1] for end in emb.neighbors_cw_order(vid)]
        arms = [by_id[eid] for eid in rotation]

        for e in arms:
            rid = f"relay_{vid}_{e.id}"
            first, second = ("tl", "bl") if e.v == vid else ("bl", "tl")
            if e.head == vid:
                state = 2 if e.id in locked[vid] else 3
            else:
                state = 1
            instances.append(GadgetInstance(
                rid, l2t, state=state, cyclic_order=P_RIM,
                role=f"relay:{e.id}:{vid}"))
            strand = "ab" if e.v == vid else "ba"
            elems[e.id][strand].append(
                (0 if e.u == vid else 2, len(elems[e.id][strand]),
                 rid, first, second))

        ent = f"v_{vid}_ent"
        nodes.append(ent)
        e0 = arms[0]
        ent_face = side_face[(e0.id, "ab" if e0.v == vid else "ba")]
        edges.append((f"face_{ent_face}", ent))

        def rp(e, port: str) -> Point:
            return (f"relay_{vid}_{e.id}", port)

        if g.vertices[vid] == "and":
            blue = next(e for e in arms if e.color == BLUE)
            bi = arms.index(blue)
            red_a, red_b = arms[(bi + 1) % 3], arms[(bi + 2) % 3]
            edges.extend([
                (ent, rp(blue, "br")),
                (rp(blue, "tr"), rp(red_a, "tr")),
                (rp(red_a, "br"), rp(red_b, "tr")),
                (rp(red_b, "br"), ent),
            ])
        else:
            mid = f"v_{vid}_mid"
            nodes.append(mid)
            locked_id = locked[vid][0]
            a1, a2, a3 = arms
            vertex_crossovers += 1
            x = f"x_v_{vid}"
            instances.append(GadgetInstance(
                x, aba,
                state={a1.id: "dl", a2.id: "dr", a3.id: "ul"}[locked_id],
                cyclic_order=ABA_RIM,
                role=f"crossover:vertex:{vid}"))
            edges.extend([
                # The swap hub threads a1.tr - mid - a2.tr, continuing to
                # a3.tr through the crossing line of a dedicated
                # crossover so it can pass over a2's spoke.
                (rp(a1, "tr"), mid), (mid, rp(a2, "tr")),
                (rp(a2, "tr"), (x, "n")), ((x, "s"), rp(a3, "tr")),
                # Spokes from the entrance to each lock tunnel; a2's
                # runs through the crossover's gate line.
                (ent, rp(a1, "br")),
                (ent, (x, "w")), ((x, "e"), rp(a2, "br")),
                (ent, rp(a3, "br")),
            ])

    # Assemble the strand chains.
    for e in g.edges:
        l1, l2_, r1, r2 = (f"e_{e.id}_l1", f"e_{e.id}_l2",
                           f"e_{e.id}_r1", f"e_{e.id}_r2")
        cur: Point = l2_
        for _sec, _seq, inst, first, second in sorted(
                elems[e.id]["ab"], key=lambda t: (t[0], t[1])):
            edges.append((cur, (inst, first)))
            cur = (inst, second)
        edges.append((cur, l1))
        cur = r2
        for _sec, _seq, inst, first, second in sorted(
                elems[e.id]["ba"], key=lambda t: (-t[0], -t[1])):
            edges.append((cur, (inst, first)))
            cur = (inst, second)
        edges.append((cur, r1))

    meta = {
        "problem": "ncl-planar",
        "target": g.target,
        "locked": locked,
        "faces": len(faces),
        "tree": {eid: list(pc) for eid, pc in sorted(tree_edge.items())},
        "audit": {"edge_gadgets": g.num_edges,
                  "vertex_gadgets": vertex_gadgets,
                  "relays": 3 * vertex_gadgets,
                  "transit_crossovers": 2 * tree_pairs,
                  "vertex_crossovers": vertex_crossovers},
    }
    system = System(
        instances=tuple(instances),
        nodes=tuple(nodes),
        edges=tuple(edges),
        robots=(Robot(start=f"face_{roots[0]}", goal=f"e_{g.target}_r2"),),
        meta=json.dumps(meta),
    )
    if expand_crossovers:
        from ..constructions import catalog
        from ..simulation import substitute
        net, target = catalog()["fig13a-aba-from-cl2t"].build()
        system = substitute(system, target, net)
    return system
