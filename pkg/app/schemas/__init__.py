from .common import SimpleListResponse, ErrorResponse, CheckResult, VerificationReport, ValueResponse
from .poset_schema import PosetSchema, PosetMapSchema, ValidationReport, MapClassification, IsomorphismResult
from .lattice_schema import IdealSchema, IdealLatticeSchema, BirkhoffReport, InducedMapReport, QuotientCriterionReport
from .system_schema import (
    InverseSystemSchema,
    ThreadSystemSchema,
    ThreadSchema,
    IdealThreadSchema,
    ExtensionResult,
    LevelMapFamilySchema,
    LiftResult,
)
from .ternary_schema import TernaryFunctionSchema

__all__ = [
    "SimpleListResponse",
    "ErrorResponse",
    "CheckResult",
    "VerificationReport",
    "ValueResponse",
    "PosetSchema",
    "PosetMapSchema",
    "ValidationReport",
    "MapClassification",
    "IsomorphismResult",
    "IdealSchema",
    "IdealLatticeSchema",
    "BirkhoffReport",
    "InducedMapReport",
    "QuotientCriterionReport",
    "InverseSystemSchema",
    "ThreadSystemSchema",
    "ThreadSchema",
    "IdealThreadSchema",
    "ExtensionResult",
    "LevelMapFamilySchema",
    "LiftResult",
    "TernaryFunctionSchema",
]
