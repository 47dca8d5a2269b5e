# app/services/__init__.py
from .poset_service import PosetService
from .ideal_lattice_service import IdealLatticeService
from .quotient_map_service import QuotientMapService
from .universal_sequence_service import UniversalSequenceService
from .limit_thread_service import LimitThreadService
from .ternary_encoding_service import TernaryEncodingService
from .verification_service import VerificationService

__all__ = [
    "PosetService",
    "IdealLatticeService",
    "QuotientMapService",
    "UniversalSequenceService",
    "LimitThreadService",
    "TernaryEncodingService",
    "VerificationService",
]
