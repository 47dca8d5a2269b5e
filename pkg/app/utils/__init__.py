# app/utils/__init__.py
from .bitset_utils import BitsetHelper
from .dot_utils import digraph, clustered_digraph
from .random_utils import RandomHelper

__all__ = ['BitsetHelper', 'digraph', 'clustered_digraph', 'RandomHelper']
