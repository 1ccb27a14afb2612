from __future__ import annotations


class EngineError(Exception):
    """Base class for everything the engine raises on bad input or misuse."""


class SchemaError(EngineError):
    """An input document does not match its schema. `path` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


# graph
class GraphError(EngineError):
    pass


class CycleDetected(GraphError):
    pass


class MissingOpTag(GraphError):
    pass


class OpOnSource(GraphError):
    pass


class UnknownElement(GraphError):
    pass


class DuplicateId(GraphError):
    pass


class DanglingArc(GraphError):
    pass


class SourceOrderMismatch(GraphError):
    pass


class AtTerminalCutset(GraphError):
    pass


class TooLarge(GraphError):
    pass


# algebra / semialgebra
class AlgebraError(EngineError):
    pass


class UnknownInstance(AlgebraError):
    pass


class ArityMismatch(AlgebraError):
    pass


class OrderMismatch(AlgebraError):
    pass


class ExponentOverflow(AlgebraError):
    pass


class NotCancellative(AlgebraError):
    pass


class BasisRequired(AlgebraError):
    pass


class ScalarMismatch(AlgebraError):
    pass


class SpecMismatch(AlgebraError):
    pass


class ShapeMismatch(AlgebraError):
    pass


class IncompleteImages(AlgebraError):
    pass


class SourceSetMismatch(AlgebraError):
    pass


# evaluation
class EvaluationError(EngineError):
    pass


class SourceValueMissing(EvaluationError):
    pass


class SemiringMismatch(EvaluationError):
    pass


class InsufficientCheckpoints(EvaluationError):
    pass


# adapters
class AdapterError(EngineError):
    pass


class InvalidModel(AdapterError):
    pass


class CyclicFactorGraph(AdapterError):
    pass


class CyclicHypergraph(AdapterError):
    pass


class UnderivableVertex(AdapterError):
    pass


class NonDifferentiableTag(AdapterError):
    pass
