"""JSON serialization for gadgets and systems.

Gadget document::

    {"name": ..., "locations": [...], "states": [...], "initial": ...,
     "transitions": [[state, from, to, next_state], ...]}

System document::

    {"defs": [<gadget>...],            # optional, for name references
     "gadgets": [{"id": ..., "def": <name or inline gadget>,
                  "state"?, "cyclic_order"?, "reflected"?, "role"?}, ...],
     "nodes": [...],
     "edges": [[endpoint, endpoint], ...],
     "robots": [{"start": ..., "goal": ..., "team": ...}, ...],
     "turn_order": [...],
     "meta"?: <object>}

An endpoint is either a bare node id (kept as a JSON number or string) or
the string ``"instanceId.location"``.  Because of that syntax, ids may not
contain ``"."``.  ``parse(serialize(x))`` is structurally equal to ``x``.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Tuple

from .errors import MalformedDocument
from .model import GadgetDef, GadgetInstance, Point, Robot, System

_SCALAR = (str, int)


def _check_label(v: Any, where: str):
    if isinstance(v, bool) or not isinstance(v, _SCALAR):
        raise MalformedDocument(f"expected a string or integer id, got {v!r}", where)
    if isinstance(v, str) and not v:
        raise MalformedDocument("empty string id", where)
    return v


# ---------------------------------------------------------------------------
# Gadgets


def gadget_to_obj(g: GadgetDef) -> Dict[str, Any]:
    return {
        "name": g.name,
        "locations": list(g.locations),
        "states": list(g.states),
        "initial": g.initial,
        "transitions": sorted((list(t) for t in g.transitions),
                              key=lambda t: [str(x) for x in t]),
    }


def gadget_from_obj(obj: Any, where: str = "gadget") -> GadgetDef:
    if not isinstance(obj, dict):
        raise MalformedDocument("expected an object", where)
    for key in ("name", "locations", "states", "initial", "transitions"):
        if key not in obj:
            raise MalformedDocument(f"missing field {key!r}", where)
    extra = set(obj) - {"name", "locations", "states", "initial", "transitions"}
    if extra:
        raise MalformedDocument(f"unknown fields {sorted(extra)}", where)
    if not isinstance(obj["name"], str):
        raise MalformedDocument("name must be a string", f"{where}.name")
    for field in ("locations", "states"):
        if not isinstance(obj[field], list):
            raise MalformedDocument("expected a list", f"{where}.{field}")
        for i, v in enumerate(obj[field]):
            _check_label(v, f"{where}.{field}[{i}]")
    _check_label(obj["initial"], f"{where}.initial")
    trans = []
    if not isinstance(obj["transitions"], list):
        raise MalformedDocument("expected a list", f"{where}.transitions")
    for i, t in enumerate(obj["transitions"]):
        w = f"{where}.transitions[{i}]"
        if not isinstance(t, list) or len(t) != 4:
            raise MalformedDocument("expected [state, from, to, next_state]", w)
        trans.append(tuple(_check_label(v, w) for v in t))
    try:
        return GadgetDef.make(obj["name"], obj["locations"], obj["states"],
                              obj["initial"], trans)
    except Exception as e:  # surface model validation with position
        raise MalformedDocument(str(e), where)


def serialize_gadget(g: GadgetDef) -> str:
    return json.dumps(gadget_to_obj(g), indent=2, sort_keys=False) + "\n"


def parse_gadget(text: str) -> GadgetDef:
    return gadget_from_obj(_load(text), "gadget")


# ---------------------------------------------------------------------------
# Endpoints


def endpoint_to_obj(p: Point) -> Any:
    if isinstance(p, tuple):
        return f"{p[0]}.{p[1]}"
    return p


def endpoint_from_obj(v: Any, system_ids: Dict[str, Any],
                      where: str) -> Point:
    """Decode an endpoint.  ``system_ids`` maps str(instance id) to the
    instance's id and location set, for resolving the dotted form."""
    if isinstance(v, bool):
        raise MalformedDocument("boolean endpoint", where)
    if isinstance(v, int):
        return v
    if not isinstance(v, str):
        raise MalformedDocument(f"bad endpoint {v!r}", where)
    if "." not in v:
        return v
    inst_s, loc_s = v.split(".", 1)
    if inst_s not in system_ids:
        raise MalformedDocument(f"endpoint {v!r} names an unknown instance", where)
    inst_id, locs = system_ids[inst_s]
    for loc in locs:
        if str(loc) == loc_s:
            return (inst_id, loc)
    raise MalformedDocument(f"endpoint {v!r} names an unknown location", where)


# ---------------------------------------------------------------------------
# Systems


def system_to_obj(sys: System) -> Dict[str, Any]:
    # definitions used by more than one instance are lifted into defs[]
    counts: Dict[str, int] = {}
    by_name: Dict[str, GadgetDef] = {}
    for inst in sys.instances:
        d = inst.definition
        if by_name.setdefault(d.name, d) != d:
            raise MalformedDocument(
                f"two different definitions share the name {d.name!r}")
        counts[d.name] = counts.get(d.name, 0) + 1
    shared = sorted(n for n, c in counts.items() if c > 1)
    str_ids = [str(i.id) for i in sys.instances]
    if len(set(str_ids)) != len(str_ids):
        raise MalformedDocument("instance ids collide after string rendering")
    gadgets = []
    for inst in sys.instances:
        entry: Dict[str, Any] = {"id": inst.id}
        entry["def"] = (inst.definition.name if inst.definition.name in shared
                        else gadget_to_obj(inst.definition))
        if inst.state is not None:
            entry["state"] = inst.state
        if inst.cyclic_order is not None:
            entry["cyclic_order"] = list(inst.cyclic_order)
        if inst.reflected:
            entry["reflected"] = True
        if inst.role is not None:
            entry["role"] = inst.role
        gadgets.append(entry)
    out: Dict[str, Any] = {}
    if shared:
        out["defs"] = [gadget_to_obj(by_name[n]) for n in shared]
    out["gadgets"] = gadgets
    out["nodes"] = list(sys.nodes)
    out["edges"] = [[endpoint_to_obj(a), endpoint_to_obj(b)] for a, b in sys.edges]
    out["robots"] = [{"start": endpoint_to_obj(r.start),
                      "goal": endpoint_to_obj(r.goal),
                      "team": r.team} for r in sys.robots]
    out["turn_order"] = list(sys.turn_order)
    if sys.meta is not None:
        out["meta"] = json.loads(sys.meta)
    return out


def system_from_obj(obj: Any, where: str = "system") -> System:
    if not isinstance(obj, dict):
        raise MalformedDocument("expected an object", where)
    known = {"defs", "gadgets", "nodes", "edges", "robots", "turn_order", "meta"}
    extra = set(obj) - known
    if extra:
        raise MalformedDocument(f"unknown fields {sorted(extra)}", where)
    defs: Dict[str, GadgetDef] = {}
    for i, d in enumerate(obj.get("defs", []) or []):
        g = gadget_from_obj(d, f"{where}.defs[{i}]")
        if g.name in defs:
            raise MalformedDocument(f"duplicate def {g.name!r}", f"{where}.defs[{i}]")
        defs[g.name] = g

    from . import library  # late import: library builds on model only

    instances: List[GadgetInstance] = []
    for i, entry in enumerate(obj.get("gadgets", []) or []):
        w = f"{where}.gadgets[{i}]"
        if not isinstance(entry, dict) or "id" not in entry or "def" not in entry:
            raise MalformedDocument("instance needs id and def", w)
        inst_id = _check_label(entry["id"], f"{w}.id")
        ref = entry["def"]
        if isinstance(ref, str):
            if ref in defs:
                definition = defs[ref]
            else:
                try:
                    definition = library.gadget(ref)
                except Exception:
                    raise MalformedDocument(f"unknown gadget name {ref!r}", f"{w}.def")
        else:
            definition = gadget_from_obj(ref, f"{w}.def")
        state = entry.get("state")
        if state is not None:
            _check_label(state, f"{w}.state")
        cyc = entry.get("cyclic_order")
        if cyc is not None:
            if not isinstance(cyc, list):
                raise MalformedDocument("cyclic_order must be a list", f"{w}.cyclic_order")
            cyc = tuple(_check_label(v, f"{w}.cyclic_order") for v in cyc)
        role = entry.get("role")
        if role is not None and not isinstance(role, str):
            raise MalformedDocument("role must be a string", f"{w}.role")
        try:
            instances.append(GadgetInstance(inst_id, definition, state, cyc,
                                            bool(entry.get("reflected", False)), role))
        except Exception as e:
            raise MalformedDocument(str(e), w)

    nodes = []
    for i, n in enumerate(obj.get("nodes", []) or []):
        nodes.append(_check_label(n, f"{where}.nodes[{i}]"))

    ids = {str(inst.id): (inst.id, inst.definition.locations) for inst in instances}
    edges = []
    for i, e in enumerate(obj.get("edges", []) or []):
        w = f"{where}.edges[{i}]"
        if not isinstance(e, list) or len(e) != 2:
            raise MalformedDocument("edge must be [endpoint, endpoint]", w)
        edges.append((endpoint_from_obj(e[0], ids, w),
                      endpoint_from_obj(e[1], ids, w)))

    robots = []
    for i, r in enumerate(obj.get("robots", []) or []):
        w = f"{where}.robots[{i}]"
        if not isinstance(r, dict) or "start" not in r or "goal" not in r:
            raise MalformedDocument("robot needs start and goal", w)
        team = r.get("team", "white")
        if not isinstance(team, str):
            raise MalformedDocument("team must be a string", f"{w}.team")
        robots.append(Robot(endpoint_from_obj(r["start"], ids, f"{w}.start"),
                            endpoint_from_obj(r["goal"], ids, f"{w}.goal"), team))

    turn_order = obj.get("turn_order", []) or []
    if not isinstance(turn_order, list) or not all(
            isinstance(t, int) and not isinstance(t, bool) for t in turn_order):
        raise MalformedDocument("turn_order must be a list of robot indices",
                                f"{where}.turn_order")
    meta = obj.get("meta")
    try:
        return System(tuple(instances), tuple(nodes), tuple(edges), tuple(robots),
                      tuple(turn_order),
                      None if meta is None else json.dumps(meta, sort_keys=True))
    except Exception as e:
        raise MalformedDocument(str(e), where)


def serialize_system(sys: System) -> str:
    return json.dumps(system_to_obj(sys), indent=2, sort_keys=False) + "\n"


def parse_system(text: str) -> System:
    return system_from_obj(_load(text), "system")


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedDocument(e.msg, f"line {e.lineno}, column {e.colno}")
