from typing import Optional

import numpy as np

from .base import ValueModel
from .lattice_model import IdealLattice
from .poset_model import DownSet, PosetBase, PosetMap
from ..utils.bitset_utils import BitsetHelper


class InducedMap(ValueModel):
    """
    quotient p: Q → P 가 유도하는 p̂: 𝒪(Q) → 𝒪(P)

    ∅ ↦ ∅, ↓x ↦ ↓p(x), 나머지는 canonical decomposition 조각들의 상의 합집합.
    table 이 있으면 domain_ideals 위치 → codomain_ideals 위치 표를 쓰고,
    없으면 비트셋에서 바로 계산합니다.
    """

    _fields = ("eager",)

    def __init__(
        self,
        base: PosetMap,
        domain_ideals: Optional[IdealLattice] = None,
        codomain_ideals: Optional[IdealLattice] = None,
        table: Optional[np.ndarray] = None,
    ):
        self.base = base
        self.domain_ideals = domain_ideals
        self.codomain_ideals = codomain_ideals
        self.table = table
        if table is not None:
            self.table.flags.writeable = False

    @property
    def eager(self) -> bool:
        return self.table is not None

    @property
    def domain(self) -> PosetBase:
        return self.base.domain

    @property
    def codomain(self) -> PosetBase:
        return self.base.codomain

    def action(self, mask: int) -> int:
        """canonical decomposition 의 각 조각 ↓x 를 ↓p(x) 로 보내고 합칩니다"""
        result = 0
        targets = self.codomain.down_masks
        for x in BitsetHelper.iter_indices(self.domain.maximal_in(mask)):
            result |= targets[self.base(x)]
        return result

    def __call__(self, mask: int) -> int:
        if self.table is None:
            return self.action(mask)
        return self.codomain_ideals.ideals[self.table[self.domain_ideals.position(mask)]]

    def apply(self, down_set: DownSet) -> DownSet:
        return DownSet(self.codomain, self(down_set.members), check=False)


class SticksCover(ValueModel):
    """
    2-chain 들의 서로소 합에서 C 로 가는 quotient

    component i 의 원소는 (2i, 2i+1) = (아래, 위) 입니다.
    앞의 pair_count 개 component 는 C 의 strict 쌍으로, 나머지는 고립점으로 갑니다.
    """

    _fields = ("count", "pair_count")

    def __init__(self, count: int, pair_count: int, cover_map: PosetMap):
        self.count = count
        self.pair_count = pair_count
        self.map = cover_map

    @property
    def domain(self) -> PosetBase:
        return self.map.domain


class Amalgamation(ValueModel):
    """
    amalgamate 결과: f∘f′∘q = g∘g′∘p

    D = B′ ∪̇ C′, q: D → B′, p: D → C′, f′: B′ → B, g′: C′ → C
    """

    _fields = ("size",)

    def __init__(self, apex: PosetBase, q: PosetMap, p: PosetMap, f_prime: PosetMap, g_prime: PosetMap):
        self.apex = apex
        self.q = q
        self.p = p
        self.f_prime = f_prime
        self.g_prime = g_prime

    @property
    def size(self) -> int:
        return self.apex.size


class FiberProduct(ValueModel):
    """
    t: A′ → A, g: B → A 의 fiber product A′ ×_A B

    원소는 t(a′) = g(b) 인 쌍 (a′, b) 이고 순서는 성분별입니다.
    first: (a′, b) ↦ a′, second: (a′, b) ↦ b
    """

    _fields = ("size",)

    def __init__(self, poset: PosetBase, first: PosetMap, second: PosetMap):
        self.poset = poset
        self.first = first
        self.second = second

    @property
    def size(self) -> int:
        return self.poset.size
