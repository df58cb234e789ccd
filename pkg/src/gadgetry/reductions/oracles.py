"""Reference deciders for the source problems, at desk scale only.

Each oracle decides its problem by exhaustive search and refuses inputs
above a hard cap (:class:`~gadgetry.errors.CapExceeded`), so they stay
trustworthy: small enough to read, big enough to cross-check the
compilers on every corpus instance.
"""

from __future__ import annotations

from collections import deque
from itertools import product
from typing import Dict, List, Optional, Tuple, Union

from ..errors import CapExceeded, NoValidLockedSet
from .instances import (CNFFormula, DQBFFormula, NCLGraph, QBFFormula,
                        TwoCLGraph)

NCL_EDGE_CAP = 8
TWOCL_EDGE_CAP = 6
CNF_VAR_CAP = 16
QBF_VAR_CAP = 8
DQBF_VAR_CAP = 6

Instance = Union[NCLGraph, TwoCLGraph, CNFFormula, QBFFormula, DQBFFormula]


def _legality_table(g) -> List[bool]:
    """legal[mask] for every orientation mask (bit i set = head at v_i)."""
    edges = g.edges
    typed = [v for v, k in g.vertices.items() if k != "free"]
    legal = []
    for mask in range(1 << len(edges)):
        ok = True
        for v in typed:
            incoming = 0
            for i, e in enumerate(edges):
                head = e.v if mask >> i & 1 else e.u
                if head == v:
                    incoming += e.weight
            if incoming < 2:
                ok = False
                break
        legal.append(ok)
    return legal


def _start_mask(g) -> int:
    mask = 0
    for i, e in enumerate(g.edges):
        if e.head == e.v:
            mask |= 1 << i
    return mask


def solve_ncl(g: NCLGraph) -> bool:
    """Can a sequence of legal reversals end by reversing the target?

    Breadth-first search over edge orientations; a configuration is
    legal when every ``and``/``or`` vertex has incoming weight at least
    2.  Raises :class:`NoValidLockedSet` if the initial orientation is
    already illegal at a typed vertex.
    """
    if g.num_edges > NCL_EDGE_CAP:
        raise CapExceeded(
            f"constraint graph has {g.num_edges} edges, oracle cap is "
            f"{NCL_EDGE_CAP}")
    legal = _legality_table(g)
    start = _start_mask(g)
    if not legal[start]:
        raise NoValidLockedSet(
            "the initial orientation is illegal at a typed vertex")
    target_bit = 1 << [e.id for e in g.edges].index(g.target)
    seen = {start}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        if legal[mask ^ target_bit]:
            return True
        for i in range(g.num_edges):
            nxt = mask ^ (1 << i)
            if legal[nxt] and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def solve_2cl(g: TwoCLGraph) -> bool:
    """Does White, moving first, force reversing their target first?

    Positions are (orientation, mover).  A move reverses one edge of
    the mover's color, keeping legality; a mover with no legal reversal
    passes.  Reversing your own target ends the game in your favor, and
    play that never reverses either target is not a White win.
    """
    if g.num_edges > TWOCL_EDGE_CAP:
        raise CapExceeded(
            f"constraint graph has {g.num_edges} edges, oracle cap is "
            f"{TWOCL_EDGE_CAP}")
    legal = _legality_table(g)
    start = _start_mask(g)
    if not legal[start]:
        raise NoValidLockedSet(
            "the initial orientation is illegal at a typed vertex")
    edges = g.edges
    own = {0: [i for i, e in enumerate(edges) if e.owner == "white"],
           1: [i for i, e in enumerate(edges) if e.owner == "black"]}
    target = {0: [e.id for e in edges].index(g.target_white),
              1: [e.id for e in edges].index(g.target_black)}

    # succ[(mask, turn)] -> ("win", mover) | list of successor positions
    succ: Dict[Tuple[int, int], object] = {}
    frontier = deque([(start, 0)])
    seen = {(start, 0)}
    while frontier:
        mask, turn = frontier.popleft()
        moves = [i for i in own[turn] if legal[mask ^ (1 << i)]]
        if target[turn] in moves:
            succ[(mask, turn)] = ("win", turn)
            continue
        nxts = ([(mask ^ (1 << i), 1 - turn) for i in moves]
                if moves else [(mask, 1 - turn)])
        succ[(mask, turn)] = nxts
        for pos in nxts:
            if pos not in seen:
                seen.add(pos)
                frontier.append(pos)

    # Least fixpoint of the White attractor.
    win: Dict[Tuple[int, int], bool] = {}
    changed = True
    while changed:
        changed = False
        for pos, out in succ.items():
            if pos in win:
                continue
            if isinstance(out, tuple):
                value = out[1] == 0
            elif pos[1] == 0:
                if not all(p in win for p in out) and \
                        not any(win.get(p) for p in out):
                    continue
                value = any(win.get(p) for p in out)
            else:
                if any(win.get(p) is False for p in out):
                    value = False
                elif all(win.get(p) for p in out):
                    value = True
                else:
                    continue
            win[pos] = value
            changed = True
    return win.get((start, 0), False)


def _clause_satisfied(clause: Tuple[int, ...], assign: int) -> bool:
    for lit in clause:
        bit = assign >> (abs(lit) - 1) & 1
        if bool(bit) == (lit > 0):
            return True
    return False


def _formula_satisfied(f: CNFFormula, assign: int) -> bool:
    return all(_clause_satisfied(c, assign) for c in f.clauses)


def solve_cnf(f: CNFFormula) -> bool:
    """Satisfiability by truth table."""
    if f.num_vars > CNF_VAR_CAP:
        raise CapExceeded(
            f"formula has {f.num_vars} variables, oracle cap is {CNF_VAR_CAP}")
    return any(_formula_satisfied(f, a) for a in range(1 << f.num_vars))


def solve_qbf(f: QBFFormula) -> bool:
    """Recursive evaluation over the flattened prefix."""
    n = f.matrix.num_vars
    if n > QBF_VAR_CAP:
        raise CapExceeded(
            f"formula has {n} variables, oracle cap is {QBF_VAR_CAP}")
    flat = f.flat_prefix

    def rec(i: int, assign: int) -> bool:
        if i == len(flat):
            return _formula_satisfied(f.matrix, assign)
        q, v = flat[i]
        low = rec(i + 1, assign)
        high = rec(i + 1, assign | 1 << (v - 1))
        return (low or high) if q == "e" else (low and high)

    return rec(0, 0)


def solve_dqbf(f: DQBFFormula) -> bool:
    """Strategy-table enumeration for the two-block dependency form.

    True iff there are response tables f1 : assignments(x1) -> y1 and
    f2 : assignments(x2) -> y2 making the matrix true under every
    universal assignment.  Only one table is enumerated: once f1 is
    fixed, a valid f2 entry can be chosen independently per x2
    assignment.
    """
    n = f.matrix.num_vars
    if n > DQBF_VAR_CAP:
        raise CapExceeded(
            f"formula has {n} variables, oracle cap is {DQBF_VAR_CAP}")
    sides = ((f.x1, f.y1), (f.x2, f.y2))
    # Enumerate the side with the fewer response tables.
    cost = [(1 << len(y)) ** (1 << len(x)) for x, y in sides]
    if cost[1] < cost[0]:
        sides = (sides[1], sides[0])
    (xa, ya), (xb, yb) = sides

    def assemble(a: int, c: int, b: int, d: int) -> int:
        assign = 0
        for bits, block in ((a, xa), (c, ya), (b, xb), (d, yb)):
            for j, v in enumerate(block):
                if bits >> j & 1:
                    assign |= 1 << (v - 1)
        return assign

    na, nc, nb, nd = (1 << len(xa), 1 << len(ya), 1 << len(xb), 1 << len(yb))
    sat = [[[[_formula_satisfied(f.matrix, assemble(a, c, b, d))
              for d in range(nd)] for b in range(nb)]
            for c in range(nc)] for a in range(na)]
    for table in product(range(nc), repeat=na):
        if all(any(all(sat[a][table[a]][b][d] for a in range(na))
                   for d in range(nd)) for b in range(nb)):
            return True
    return False


def oracle_solve(instance: Instance) -> bool:
    """Decide any supported instance with the matching oracle."""
    if isinstance(instance, TwoCLGraph):
        return solve_2cl(instance)
    if isinstance(instance, NCLGraph):
        return solve_ncl(instance)
    if isinstance(instance, QBFFormula):
        return solve_qbf(instance)
    if isinstance(instance, DQBFFormula):
        return solve_dqbf(instance)
    if isinstance(instance, CNFFormula):
        return solve_cnf(instance)
    raise TypeError(f"no oracle for {type(instance).__name__}")
