from .base import ValueModel
from .poset_model import PosetBase, FinitePoset, SparsePoset, PosetMap, DownSet, make_poset
from .lattice_model import IdealLattice, FiniteLattice, BirkhoffResult
from .level_model import UniversalLevel, LevelMapFamily, FiberPairs
from .thread_model import Comparison, InverseSystem, Thread, ThreadSystem, SymbolicPoint, IdealThread
from .ternary_model import ComponentIndex, TernaryFunction
from .map_model import InducedMap, SticksCover, Amalgamation, FiberProduct

__all__ = [
    "ValueModel",
    "PosetBase",
    "FinitePoset",
    "SparsePoset",
    "PosetMap",
    "DownSet",
    "make_poset",
    "IdealLattice",
    "FiniteLattice",
    "BirkhoffResult",
    "UniversalLevel",
    "LevelMapFamily",
    "FiberPairs",
    "Comparison",
    "InverseSystem",
    "Thread",
    "ThreadSystem",
    "SymbolicPoint",
    "IdealThread",
    "ComponentIndex",
    "TernaryFunction",
    "InducedMap",
    "SticksCover",
    "Amalgamation",
    "FiberProduct",
]
