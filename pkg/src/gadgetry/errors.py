"""Exception types shared across the toolkit."""

from __future__ import annotations


class GadgetryError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGadget(GadgetryError):
    """A gadget definition violates a structural requirement."""


class UnknownState(InvalidGadget):
    """A transition or initial-state field references an undeclared state."""


class UnknownLocation(InvalidGadget):
    """A transition references an undeclared location."""


class DuplicateTransition(InvalidGadget):
    """The same transition quadruple was declared twice."""


class InvalidSystem(GadgetryError):
    """A system of gadgets violates a structural requirement."""


class MalformedDocument(GadgetryError):
    """A serialized document could not be parsed.

    ``where`` is a human-readable position such as ``"gadgets[2].state"``
    or ``"line 7"``.
    """

    def __init__(self, message: str, where: str | None = None):
        self.where = where
        super().__init__(message if where is None else f"{where}: {message}")


class IllegalMove(GadgetryError):
    """A move was rejected by the game rules."""


class StuckRobot(GadgetryError):
    """Behavior extraction found a dead excursion inside a network.

    ``trace`` is the list of moves leading from an entry port to the
    stuck position.
    """

    def __init__(self, message: str, trace: list | None = None):
        self.trace = trace or []
        super().__init__(message)


class StateCapExceeded(GadgetryError):
    """A search visited more states than its configured cap."""

    def __init__(self, cap: int, explored: int):
        self.cap = cap
        self.explored = explored
        super().__init__(f"search exceeded state cap ({explored} >= {cap})")


class VerificationFailed(GadgetryError):
    """A claimed simulation is not behaviorally equivalent to its target.

    ``counterexample`` is a distinguishing trace when one is available.
    """

    def __init__(self, message: str, counterexample: list | None = None):
        self.counterexample = counterexample
        super().__init__(message)


class NotVerified(GadgetryError):
    """Substitution was attempted with an unverified construction."""


class UnknownEntry(GadgetryError):
    """A name was not found in the library or construction catalog."""


class UnknownConstruction(UnknownEntry):
    """The construction catalog has no entry by this name."""


class CompileError(GadgetryError):
    """A reduction input is invalid or cannot be compiled."""


class InvalidInstance(CompileError):
    """A reduction instance violates a structural constraint."""


class NotKTunnel(InvalidGadget):
    """The gadget's locations admit no tunnel matching."""


class NotDagKTunnel(InvalidGadget):
    """The operation needs a k-tunnel gadget with an acyclic state graph."""


class PreconditionViolated(GadgetryError):
    """An operation was called on input outside its stated precondition."""


class NotEquivalent(GadgetryError):
    """Substitution refused: the network is not verified equivalent."""


class NoValidLockedSet(CompileError):
    """No weight-2 incoming locked set exists at some vertex."""


class NotPlanarInput(CompileError):
    """The planar compiler was given a non-planar graph."""


class GadgetNotHard(CompileError):
    """The gadget has neither a distant opening nor a forced distant closing."""


class NonAlternatingPrefix(CompileError):
    """The QBF prefix does not alternate starting with an existential."""


class WrongForm(CompileError):
    """The DQBF instance is not in the restricted two-block form."""


class CapExceeded(GadgetryError):
    """An oracle input exceeds its hard size cap."""


class MissingCyclicOrder(InvalidSystem):
    """A planarity check needs every instance to carry a cyclic order."""


class ExplosionCap(StateCapExceeded):
    """The team solver's history count exceeded its cap."""


class UnknownSession(GadgetryError):
    """No live session has this id."""
