from abc import ABC, abstractmethod
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import PosetValidationError
from ..utils.bitset_utils import BitsetHelper
from .base import ValueModel

PairArrays = Tuple[np.ndarray, np.ndarray]


def _sorted_pairs(pairs: PairArrays) -> np.ndarray:
    lows, highs = (np.asarray(part, dtype=np.int64) for part in pairs)
    order = np.lexsort((highs, lows))
    return np.stack([lows[order], highs[order]])


class PosetBase(ValueModel, ABC):
    """
    유한 poset 의 공통 인터페이스

    원소는 0..size-1 인덱스로 다루고 라벨은 표시/직렬화에만 씁니다.
    구현체:
    - FinitePoset: dense bool 행렬 (일반 용도)
    - SparsePoset: strict 관계 쌍 목록 (fiber product 처럼 큰 poset)
    - UniversalLevel: P_n, 구조적으로 계산
    """

    _fields = ("elements",)

    @property
    @abstractmethod
    def elements(self) -> Tuple[str, ...]:
        ...

    @property
    @abstractmethod
    def size(self) -> int:
        ...

    @abstractmethod
    def leq(self, i: int, j: int) -> bool:
        ...

    @abstractmethod
    def strict_pairs(self) -> PairArrays:
        """x < y 인 모든 쌍 (아래쪽, 위쪽) 을 (아래, 위) 사전순으로"""

    def __len__(self) -> int:
        return self.size

    def same_order(self, other: "PosetBase") -> bool:
        """구현체와 무관하게 라벨과 strict 관계가 같은지"""
        if self is other:
            return True
        if self.size != other.size or tuple(self.elements) != tuple(other.elements):
            return False
        return np.array_equal(_sorted_pairs(self.strict_pairs()), _sorted_pairs(other.strict_pairs()))

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {label: index for index, label in enumerate(self.elements)}

    def index_of(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise PosetValidationError(f"poset 에 없는 원소입니다: {label}")

    def indices_of(self, labels: Iterable) -> List[int]:
        return [self.index_of(label) for label in labels]

    def le_pairs(self) -> PairArrays:
        """반사 쌍까지 포함한 전체 관계"""
        lows, highs = self.strict_pairs()
        diagonal = np.arange(self.size, dtype=np.int64)
        all_lows = np.concatenate([diagonal, lows.astype(np.int64)])
        all_highs = np.concatenate([diagonal, highs.astype(np.int64)])
        order = np.lexsort((all_highs, all_lows))
        return all_lows[order], all_highs[order]

    def relation_size(self) -> int:
        """|{(x, y): x ≤ y}|"""
        return self.size + len(self.strict_pairs()[0])

    @cached_property
    def down_masks(self) -> List[int]:
        """원소별 principal down-set 비트셋"""
        masks = [1 << index for index in range(self.size)]
        lows, highs = self.strict_pairs()
        for low, high in zip(lows.tolist(), highs.tolist()):
            masks[high] |= 1 << low
        return masks

    @cached_property
    def up_masks(self) -> List[int]:
        masks = [1 << index for index in range(self.size)]
        lows, highs = self.strict_pairs()
        for low, high in zip(lows.tolist(), highs.tolist()):
            masks[low] |= 1 << high
        return masks

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def down_closure(self, mask: int) -> int:
        closed = 0
        for index in BitsetHelper.iter_indices(mask):
            closed |= self.down_masks[index]
        return closed

    def is_down_set(self, mask: int) -> bool:
        return self.down_closure(mask) == mask

    def maximal_in(self, mask: int) -> int:
        """mask 안의 극대 원소들"""
        result = 0
        for index in BitsetHelper.iter_indices(mask):
            if (self.up_masks[index] & ~(1 << index)) & mask == 0:
                result |= 1 << index
        return result

    def minimal_in(self, mask: int) -> int:
        result = 0
        for index in BitsetHelper.iter_indices(mask):
            if (self.down_masks[index] & ~(1 << index)) & mask == 0:
                result |= 1 << index
        return result

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    def leq_many(self, lows: np.ndarray, highs: np.ndarray) -> np.ndarray:
        """여러 쌍의 ≤ 판정을 한 번에"""
        return np.fromiter(
            (self.leq(int(i), int(j)) for i, j in zip(lows, highs)), dtype=bool, count=len(lows)
        )

    def labels_of(self, mask: int) -> List[str]:
        return [self.elements[index] for index in BitsetHelper.iter_indices(mask)]


class FinitePoset(PosetBase):
    """
    dense bool 행렬로 저장하는 유한 poset

    le[i, j] == True 이면 elements[i] ≤ elements[j].
    생성자는 모양과 라벨 중복만 확인하고 공리는 PosetService.validate 가 검사합니다.
    """

    def __init__(self, elements: Sequence, le: np.ndarray):
        labels = tuple(str(label) for label in elements)
        if len(set(labels)) != len(labels):
            seen = set()
            duplicate = next(label for label in labels if label in seen or seen.add(label))
            raise PosetValidationError("중복된 원소 라벨이 있습니다", witness=(duplicate, duplicate))
        matrix = np.array(le, dtype=bool)
        if matrix.shape != (len(labels), len(labels)):
            raise PosetValidationError(
                f"관계 행렬 모양 {matrix.shape} 이 원소 수 {len(labels)} 와 맞지 않습니다"
            )
        matrix.flags.writeable = False
        self._elements = labels
        self.le = matrix

    @property
    def elements(self) -> Tuple[str, ...]:
        return self._elements

    @property
    def size(self) -> int:
        return len(self._elements)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.le[i, j])

    def leq_many(self, lows: np.ndarray, highs: np.ndarray) -> np.ndarray:
        return self.le[np.asarray(lows, dtype=np.int64), np.asarray(highs, dtype=np.int64)]

    @cached_property
    def _strict(self) -> PairArrays:
        lt = self.le & ~np.eye(self.size, dtype=bool)
        lows, highs = np.nonzero(lt)
        return lows.astype(np.int64), highs.astype(np.int64)

    def strict_pairs(self) -> PairArrays:
        return self._strict

    @cached_property
    def down_masks(self) -> List[int]:
        return [BitsetHelper.from_indices(np.nonzero(self.le[:, x])[0]) for x in range(self.size)]

    @cached_property
    def up_masks(self) -> List[int]:
        return [BitsetHelper.from_indices(np.nonzero(self.le[x, :])[0]) for x in range(self.size)]

    @cached_property
    def cover(self) -> np.ndarray:
        """cover[i, j] 이면 j 가 i 를 덮음 (사이 원소 없음)"""
        lt = self.le & ~np.eye(self.size, dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        return lt & ~between

    def relabeled(self, prefix: str) -> "FinitePoset":
        return FinitePoset([f"{prefix}{label}" for label in self._elements], self.le)

    def subposet(self, indices: Sequence[int]) -> "FinitePoset":
        chosen = list(indices)
        return FinitePoset([self._elements[i] for i in chosen], self.le[np.ix_(chosen, chosen)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self._elements == other._elements and np.array_equal(self.le, other.le)

    def __hash__(self) -> int:
        return hash((self._elements, self.le.tobytes()))


class SparsePoset(PosetBase):
    """
    strict 관계 쌍 목록으로 저장하는 poset

    lowers[k] < uppers[k] 가 전체 strict 관계여야 합니다 (전이 닫힘 상태로 입력).
    fiber product 처럼 원소가 많고 관계가 희소한 poset 에 씁니다.
    """

    def __init__(self, elements: Sequence, lowers: Iterable[int], uppers: Iterable[int]):
        self._elements = tuple(str(label) for label in elements)
        lows = np.asarray(lowers if isinstance(lowers, np.ndarray) else list(lowers), dtype=np.int64)
        highs = np.asarray(uppers if isinstance(uppers, np.ndarray) else list(uppers), dtype=np.int64)
        order = np.lexsort((highs, lows))
        self._lows = lows[order]
        self._highs = highs[order]
        self._lows.flags.writeable = False
        self._highs.flags.writeable = False

    @cached_property
    def _pairs(self):
        return set(zip(self._lows.tolist(), self._highs.tolist()))

    @property
    def elements(self) -> Tuple[str, ...]:
        return self._elements

    @property
    def size(self) -> int:
        return len(self._elements)

    def leq(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self._pairs

    def leq_many(self, lows: np.ndarray, highs: np.ndarray) -> np.ndarray:
        lows = np.asarray(lows, dtype=np.int64)
        highs = np.asarray(highs, dtype=np.int64)
        codes = self._lows * self.size + self._highs
        return (lows == highs) | np.isin(lows * self.size + highs, codes)

    def strict_pairs(self) -> PairArrays:
        return self._lows, self._highs

    def to_finite_poset(self) -> FinitePoset:
        matrix = np.eye(self.size, dtype=bool)
        matrix[self._lows, self._highs] = True
        return FinitePoset(self._elements, matrix)


class PosetMap(ValueModel):
    """
    유한 poset 사이의 함수

    assignment[i] 는 domain 인덱스 i 의 codomain 인덱스입니다.
    분류 결과(homomorphism / onto / quotient)는 QuotientMapService.classify 가 계산해
    _classification 에 캐시합니다.
    """

    _fields = ("assignment",)

    def __init__(self, domain: PosetBase, codomain: PosetBase, assignment: Iterable[int]):
        values = np.asarray(
            assignment if isinstance(assignment, np.ndarray) else list(assignment), dtype=np.int64
        )
        if values.shape != (domain.size,):
            raise PosetValidationError(
                f"assignment 길이 {values.shape[0] if values.ndim else 0} 가 domain 크기 {domain.size} 와 다릅니다"
            )
        if domain.size and (values.min() < 0 or values.max() >= codomain.size):
            bad = int(np.nonzero((values < 0) | (values >= codomain.size))[0][0])
            raise PosetValidationError("assignment 값이 codomain 범위를 벗어났습니다", witness=(bad, int(values[bad])))
        values.flags.writeable = False
        self.domain = domain
        self.codomain = codomain
        self.assignment = values
        self._classification = None

    def __call__(self, index: int) -> int:
        return int(self.assignment[index])

    def after(self, first: "PosetMap") -> "PosetMap":
        """self ∘ first"""
        if not first.codomain.same_order(self.domain):
            raise PosetValidationError("합성할 수 없는 사상입니다 (codomain 과 domain 불일치)")
        return PosetMap(first.domain, self.codomain, self.assignment[first.assignment])

    def image_mask(self, mask: int) -> int:
        return BitsetHelper.from_indices(self.assignment[BitsetHelper.to_indices(mask)].tolist())

    def image_label(self, label) -> str:
        return self.codomain.elements[self(self.domain.index_of(label))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PosetMap):
            return NotImplemented
        return np.array_equal(self.assignment, other.assignment) and self.domain.size == other.domain.size


class DownSet(ValueModel):
    """parent poset 위의 down-set (비트셋)"""

    _fields = ("members",)

    def __init__(self, parent: PosetBase, members: int, check: bool = True):
        if check and not parent.is_down_set(members):
            raise PosetValidationError("아래로 닫혀 있지 않은 집합입니다", witness=tuple(parent.labels_of(members)))
        self.parent = parent
        self.members = members

    @classmethod
    def from_labels(cls, parent: PosetBase, labels: Iterable) -> "DownSet":
        return cls(parent, BitsetHelper.from_indices(parent.indices_of(labels)))

    def __contains__(self, index: int) -> bool:
        return bool(self.members >> index & 1)

    def indices(self) -> List[int]:
        return BitsetHelper.to_indices(self.members)

    @property
    def labels(self) -> List[str]:
        return self.parent.labels_of(self.members)

    def __len__(self) -> int:
        return BitsetHelper.popcount(self.members)

    def __or__(self, other: "DownSet") -> "DownSet":
        return DownSet(self.parent, self.members | other.members, check=False)

    def __and__(self, other: "DownSet") -> "DownSet":
        return DownSet(self.parent, self.members & other.members, check=False)

    def __le__(self, other: "DownSet") -> bool:
        return BitsetHelper.is_subset(self.members, other.members)

    def __lt__(self, other: "DownSet") -> bool:
        return self <= other and self.members != other.members

    def __eq__(self, other) -> bool:
        if not isinstance(other, DownSet):
            return NotImplemented
        return self.members == other.members and self.parent.size == other.parent.size

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


def ideal_label(parent: PosetBase, members: int) -> str:
    """ideal 격자 원소의 표시 라벨"""
    return "{" + ",".join(parent.labels_of(members)) + "}"


def make_poset(elements: Sequence, pairs: Iterable[Tuple[int, int]], size: Optional[int] = None) -> FinitePoset:
    """(i, j) 쌍 목록으로 관계 행렬을 만들고 반사성을 채웁니다 (전이 닫힘은 하지 않음)"""
    count = len(elements) if size is None else size
    matrix = np.eye(count, dtype=bool)
    for i, j in pairs:
        if not (0 <= i < count and 0 <= j < count):
            raise PosetValidationError("관계 쌍의 인덱스가 범위를 벗어났습니다", witness=(i, j))
        matrix[i, j] = True
    return FinitePoset(elements, matrix)
