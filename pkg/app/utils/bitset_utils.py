from typing import Iterable, Iterator, List


class BitsetHelper:
    """
    정수 비트셋 유틸리티 클래스

    down-set 은 원소 인덱스 위의 비트셋(파이썬 int)으로 저장합니다.
    i 번째 비트가 1 이면 인덱스 i 원소가 포함된 것입니다.
    """

    @staticmethod
    def from_indices(indices: Iterable[int]) -> int:
        mask = 0
        for index in indices:
            mask |= 1 << int(index)
        return mask

    @staticmethod
    def iter_indices(mask: int) -> Iterator[int]:
        """오름차순으로 켜진 비트 인덱스를 돌려줍니다."""
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    @staticmethod
    def to_indices(mask: int) -> List[int]:
        return list(BitsetHelper.iter_indices(mask))

    @staticmethod
    def iter_subsets(mask: int) -> Iterator[int]:
        """mask 의 모든 부분집합 (0 포함)"""
        subset = mask
        while True:
            yield subset
            if subset == 0:
                return
            subset = (subset - 1) & mask

    @staticmethod
    def popcount(mask: int) -> int:
        return bin(mask).count("1")

    @staticmethod
    def is_subset(small: int, large: int) -> bool:
        return small & ~large == 0

    @staticmethod
    def sort_key(mask: int):
        """(popcount, 값) 순서 - IdealLattice 의 결정적 인덱스"""
        return (BitsetHelper.popcount(mask), mask)
