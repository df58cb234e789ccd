"""Compilers from decision problems to gadget systems, plus small oracles.

Each compiler emits a :class:`~gadgetry.model.System` whose game value
equals the answer of the source instance, annotating every emitted
instance with a ``role`` string and recording the construction constants
in ``System.meta``.  The oracles decide the same problems directly (at
desk scale) so the compilers can be checked end to end.
"""

from .instances import (
    NCLEdge,
    NCLGraph,
    TwoCLEdge,
    TwoCLGraph,
    CNFFormula,
    QBFFormula,
    DQBFFormula,
    parse_ncl,
    format_ncl,
    parse_2cl,
    format_2cl,
    parse_dimacs,
    format_dimacs,
    parse_qdimacs,
    format_qdimacs,
    parse_dqbf,
    format_dqbf,
)
from .oracles import (
    oracle_solve,
    solve_ncl,
    solve_2cl,
    solve_cnf,
    solve_qbf,
    solve_dqbf,
)
from .params import ReductionParams
from .ncl import compile_ncl, compile_ncl_planar

__all__ = [
    "NCLEdge", "NCLGraph", "TwoCLEdge", "TwoCLGraph",
    "CNFFormula", "QBFFormula", "DQBFFormula",
    "parse_ncl", "format_ncl", "parse_2cl", "format_2cl",
    "parse_dimacs", "format_dimacs", "parse_qdimacs", "format_qdimacs",
    "parse_dqbf", "format_dqbf",
    "oracle_solve", "solve_ncl", "solve_2cl", "solve_cnf", "solve_qbf",
    "solve_dqbf",
    "ReductionParams",
    "compile_ncl", "compile_ncl_planar", "compile_3sat", "compile_qbf_2p",
    "compile_2cl", "build_timer", "compile_dqbf_team",
]
