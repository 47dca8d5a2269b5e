from functools import cached_property
from typing import Dict, List, Sequence

import numpy as np

from ..exceptions import NotALatticeError, PosetValidationError
from ..utils.bitset_utils import BitsetHelper
from .base import ValueModel
from .poset_model import DownSet, FinitePoset, PosetBase, ideal_label


class IdealLattice(ValueModel):
    """
    𝒪(P): parent poset 의 모든 down-set

    ideals 는 (popcount, 비트셋 값) 순서로 정렬된 비트셋 목록이라 인덱스가 결정적입니다.
    join 은 합집합, meet 은 교집합입니다.
    """

    _fields = ("count",)

    def __init__(self, parent: PosetBase, ideals: Sequence[int]):
        self.parent = parent
        self.ideals: List[int] = sorted(ideals, key=BitsetHelper.sort_key)
        self._positions: Dict[int, int] = {mask: index for index, mask in enumerate(self.ideals)}

    @property
    def count(self) -> int:
        return len(self.ideals)

    def __len__(self) -> int:
        return len(self.ideals)

    def __iter__(self):
        return iter(self.ideals)

    def __contains__(self, mask: int) -> bool:
        return mask in self._positions

    def position(self, mask: int) -> int:
        try:
            return self._positions[mask]
        except KeyError:
            raise PosetValidationError("격자에 없는 down-set 입니다", witness=tuple(self.parent.labels_of(mask)))

    def down_set(self, index: int) -> DownSet:
        return DownSet(self.parent, self.ideals[index], check=False)

    def down_sets(self) -> List[DownSet]:
        return [DownSet(self.parent, mask, check=False) for mask in self.ideals]

    def join(self, i: int, j: int) -> int:
        return self._positions[self.ideals[i] | self.ideals[j]]

    def meet(self, i: int, j: int) -> int:
        return self._positions[self.ideals[i] & self.ideals[j]]

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.ideals) - 1

    def labels(self) -> List[str]:
        return [ideal_label(self.parent, mask) for mask in self.ideals]

    def inclusion_matrix(self) -> np.ndarray:
        """le[i, j] 이면 ideals[i] ⊆ ideals[j]"""
        count = len(self.ideals)
        if self.parent.size <= 63:
            masks = np.array(self.ideals, dtype=np.uint64)
            return (masks[:, None] & ~masks[None, :]) == 0
        matrix = np.zeros((count, count), dtype=bool)
        for i, small in enumerate(self.ideals):
            for j, large in enumerate(self.ideals):
                matrix[i, j] = small & ~large == 0
        return matrix

    def as_poset(self) -> FinitePoset:
        return FinitePoset(self.labels(), self.inclusion_matrix())


class FiniteLattice(ValueModel):
    """
    carrier poset 과 join/meet 표로 이루어진 유한 격자

    join[i, j], meet[i, j] 는 carrier 인덱스입니다.
    """

    _fields = ("carrier",)

    def __init__(self, carrier: FinitePoset, join: np.ndarray, meet: np.ndarray):
        self.carrier = carrier
        self.join = np.asarray(join, dtype=np.int64)
        self.meet = np.asarray(meet, dtype=np.int64)
        self.join.flags.writeable = False
        self.meet.flags.writeable = False

    @classmethod
    def from_poset(cls, carrier: FinitePoset) -> "FiniteLattice":
        """
        poset 의 모든 쌍에 대해 최소 상계/최대 하계를 계산합니다.

        Raises:
            NotALatticeError: 어떤 쌍의 join 또는 meet 이 존재하지 않을 때
        """
        le = carrier.le
        size = carrier.size
        join = np.empty((size, size), dtype=np.int64)
        meet = np.empty((size, size), dtype=np.int64)
        for i in range(size):
            for j in range(i, size):
                upper = np.nonzero(le[i] & le[j])[0]
                least = [u for u in upper if le[u, upper].all()]
                lower = np.nonzero(le[:, i] & le[:, j])[0]
                greatest = [v for v in lower if le[lower, v].all()]
                if not least or not greatest:
                    kind = "join" if not least else "meet"
                    raise NotALatticeError(
                        f"{carrier.elements[i]}, {carrier.elements[j]} 의 {kind} 이 없습니다",
                        detail=f"pair=({carrier.elements[i]}, {carrier.elements[j]})",
                    )
                join[i, j] = join[j, i] = least[0]
                meet[i, j] = meet[j, i] = greatest[0]
        return cls(carrier, join, meet)

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def elements(self):
        return self.carrier.elements

    def leq(self, i: int, j: int) -> bool:
        return self.carrier.leq(i, j)

    @cached_property
    def bottom(self) -> int:
        return int(np.nonzero(self.carrier.le.all(axis=1))[0][0])

    @cached_property
    def top(self) -> int:
        return int(np.nonzero(self.carrier.le.all(axis=0))[0][0])


class BirkhoffResult(ValueModel):
    """
    Birkhoff 동형 η: L → 𝒪(J(L))

    irreducibles[k] 는 k 번째 join-irreducible 의 L 인덱스,
    eta[a] 는 L 원소 a 의 상을 ideal_lattice 안의 위치로 나타냅니다.
    """

    _fields = ("irreducibles", "eta")

    def __init__(self, lattice: FiniteLattice, irreducibles: List[int], irreducible_poset: FinitePoset,
                 ideal_lattice: IdealLattice, eta: List[int]):
        self.lattice = lattice
        self.irreducibles = irreducibles
        self.irreducible_poset = irreducible_poset
        self.ideal_lattice = ideal_lattice
        self.eta = eta
