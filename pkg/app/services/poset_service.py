import itertools
import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..exceptions import PosetValidationError, SizeBoundError
from ..models.poset_model import FinitePoset, PosetBase, make_poset
from ..schemas.poset_schema import IsomorphismResult, ValidationReport
from ..utils.bitset_utils import BitsetHelper
from ..utils.dot_utils import digraph

logger = logging.getLogger(__name__)

# 상삼각 관계를 모두 훑으므로 2^(n(n-1)/2) 개 후보
ENUMERATION_BOUND = 6


class PosetService:
    """유한 poset 검증, 구성, 구조 질의"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    # =========================
    # 검증
    # =========================

    def validate(self, poset: FinitePoset) -> ValidationReport:
        """
        반사성, 반대칭성, 전이성을 차례로 검사합니다.

        처음 위반된 공리와 증거 쌍을 돌려줍니다. 예외는 던지지 않습니다.
        """
        le = poset.le
        labels = poset.elements
        size = poset.size

        diagonal = np.nonzero(~le[np.diag_indices(size)])[0]
        if diagonal.size:
            x = labels[int(diagonal[0])]
            return ValidationReport(ok=False, axiom="reflexive", witness=[x, x])

        symmetric = np.argwhere(np.triu(le & le.T, k=1))
        if symmetric.size:
            i, j = symmetric[0].tolist()
            return ValidationReport(ok=False, axiom="antisymmetric", witness=[labels[i], labels[j]])

        composed = (le.astype(np.int64) @ le.astype(np.int64)) > 0
        missing = np.argwhere(composed & ~le)
        if missing.size:
            i, k = missing[0].tolist()
            return ValidationReport(ok=False, axiom="transitive", witness=[labels[i], labels[k]])

        return ValidationReport(ok=True)

    def require_valid(self, poset: FinitePoset) -> FinitePoset:
        report = self.validate(poset)
        if not report.ok:
            raise PosetValidationError(f"{report.axiom} 공리 위반", witness=tuple(report.witness))
        return poset

    def build(self, elements: Sequence, pairs: Iterable[Tuple[int, int]]) -> FinitePoset:
        """라벨과 관계 쌍으로 검증된 poset 을 만듭니다 (반사 쌍은 자동 추가)"""
        return self.require_valid(make_poset(elements, pairs))

    # =========================
    # 구성
    # =========================

    def chain(self, n: int) -> FinitePoset:
        if n < 1:
            raise PosetValidationError("chain 의 길이는 1 이상이어야 합니다")
        return FinitePoset([str(i) for i in range(1, n + 1)], np.triu(np.ones((n, n), dtype=bool)))

    def antichain(self, n: int) -> FinitePoset:
        if n < 1:
            raise PosetValidationError("antichain 의 크기는 1 이상이어야 합니다")
        return FinitePoset([str(i) for i in range(1, n + 1)], np.eye(n, dtype=bool))

    def point(self) -> FinitePoset:
        return self.antichain(1)

    def linear_sum(self, first: FinitePoset, second: FinitePoset) -> FinitePoset:
        """
        A ⊕ B: 두 사본을 이어 붙이고 A 의 모든 원소를 B 의 모든 원소 아래에 둡니다.
        """
        size_a, size_b = first.size, second.size
        matrix = np.zeros((size_a + size_b, size_a + size_b), dtype=bool)
        matrix[:size_a, :size_a] = first.le
        matrix[size_a:, size_a:] = second.le
        matrix[:size_a, size_a:] = True
        return FinitePoset(self._disjoint_labels(first, second), matrix)

    def disjoint_union(self, first: FinitePoset, second: FinitePoset) -> FinitePoset:
        """A ∪̇ B: 두 사본 사이에는 관계가 없습니다."""
        size_a, size_b = first.size, second.size
        matrix = np.zeros((size_a + size_b, size_a + size_b), dtype=bool)
        matrix[:size_a, :size_a] = first.le
        matrix[size_a:, size_a:] = second.le
        return FinitePoset(self._disjoint_labels(first, second), matrix)

    def disjoint_union_all(self, posets: Sequence[FinitePoset]) -> FinitePoset:
        """여러 poset 의 서로소 합 (라벨은 'k.x')"""
        sizes = [poset.size for poset in posets]
        total = sum(sizes)
        matrix = np.zeros((total, total), dtype=bool)
        labels: List[str] = []
        offset = 0
        for k, poset in enumerate(posets):
            matrix[offset:offset + poset.size, offset:offset + poset.size] = poset.le
            labels.extend(f"{k}.{label}" for label in poset.elements)
            offset += poset.size
        return FinitePoset(labels, matrix)

    @staticmethod
    def _disjoint_labels(first: PosetBase, second: PosetBase) -> List[str]:
        return [f"0.{label}" for label in first.elements] + [f"1.{label}" for label in second.elements]

    # =========================
    # 구조 질의
    # =========================

    def maximal_elements(self, poset: PosetBase, subset: Iterable) -> List[str]:
        """subset 안에서 자기보다 큰 다른 원소가 없는 원소들"""
        mask = BitsetHelper.from_indices(poset.indices_of(subset))
        return poset.labels_of(poset.maximal_in(mask))

    def is_two_component(self, poset: PosetBase, x, y) -> bool:
        """
        문자 그대로의 판정: x < y 이고 x 아래에 다른 원소가 없고 y 위에 다른 원소가 없음

        chain 3 의 (1, 3) 도 참이 됩니다.
        """
        i, j = poset.index_of(x), poset.index_of(y)
        if i == j or not poset.leq(i, j):
            return False
        return poset.down_masks[i] == 1 << i and poset.up_masks[j] == 1 << j

    def two_components(self, poset: PosetBase) -> List[Tuple[str, str]]:
        """
        연결 성분 의미의 2-component 목록

        x < y 이고 x 와 y 가 서로 외에는 아무것과도 비교 불가능한 쌍입니다.
        """
        result = []
        lows, highs = poset.strict_pairs()
        for i, j in zip(lows.tolist(), highs.tolist()):
            block = (1 << i) | (1 << j)
            if (poset.down_masks[i] | poset.up_masks[i]) == block and (
                poset.down_masks[j] | poset.up_masks[j]
            ) == block:
                result.append((poset.elements[i], poset.elements[j]))
        return result

    def isolated_points(self, poset: PosetBase) -> List[int]:
        """어떤 다른 원소와도 비교 불가능한 원소 인덱스"""
        return [
            index
            for index in range(poset.size)
            if (poset.down_masks[index] | poset.up_masks[index]) == 1 << index
        ]

    def hasse_edges(self, poset: FinitePoset) -> List[Tuple[int, int]]:
        """cover 관계 (아래, 위) 목록"""
        return [tuple(pair) for pair in np.argwhere(poset.cover).tolist()]

    def to_dot(self, poset: PosetBase, name: str = "P") -> str:
        dense = poset if isinstance(poset, FinitePoset) else poset.to_finite_poset()
        return digraph(dense.elements, self.hasse_edges(dense), name=name)

    # =========================
    # 동형 검사
    # =========================

    def find_isomorphism(self, first: FinitePoset, second: FinitePoset) -> Optional[List[int]]:
        """
        차수가 맞는 전단사만 백트래킹으로 시도합니다.

        Returns:
            first 인덱스 → second 인덱스 목록, 동형이 아니면 None
        Raises:
            SizeBoundError: |P| 가 isomorphism_bound 초과
        """
        bound = self.settings.isomorphism_bound
        if max(first.size, second.size) > bound:
            raise SizeBoundError("동형 검사 poset", max(first.size, second.size), bound)
        if first.size != second.size or len(first.strict_pairs()[0]) != len(second.strict_pairs()[0]):
            return None

        def signature(poset: FinitePoset) -> List[Tuple[int, int]]:
            return list(zip(poset.le.sum(axis=0).tolist(), poset.le.sum(axis=1).tolist()))

        sig_a, sig_b = signature(first), signature(second)
        if sorted(sig_a) != sorted(sig_b):
            return None

        size = first.size
        order = sorted(range(size), key=lambda i: sig_a[i])
        mapping = [-1] * size
        used = [False] * size

        def extend(position: int) -> bool:
            if position == size:
                return True
            source = order[position]
            for target in range(size):
                if used[target] or sig_b[target] != sig_a[source]:
                    continue
                consistent = all(
                    first.le[source, other] == second.le[target, mapping[other]]
                    and first.le[other, source] == second.le[mapping[other], target]
                    for other in order[:position]
                )
                if not consistent:
                    continue
                mapping[source], used[target] = target, True
                if extend(position + 1):
                    return True
                mapping[source], used[target] = -1, False
            return False

        return mapping if extend(0) else None

    def is_isomorphic(self, first: FinitePoset, second: FinitePoset) -> IsomorphismResult:
        mapping = self.find_isomorphism(first, second)
        return IsomorphismResult(isomorphic=mapping is not None, mapping=mapping)

    # =========================
    # 작은 poset 열거
    # =========================

    def all_posets(self, size: int) -> List[FinitePoset]:
        """
        크기 size 인 poset 의 모든 동형류 대표

        모든 poset 은 자연스러운 번호 매김(i < j 쌍만 사용)을 가지므로 상삼각 관계만 훑고,
        순열에 대한 최소 바이트열을 표준형으로 삼아 중복을 지웁니다.

        Raises:
            SizeBoundError: size 가 ENUMERATION_BOUND 초과
        """
        if size > ENUMERATION_BOUND:
            raise SizeBoundError("poset 열거", size, ENUMERATION_BOUND)
        if size == 0:
            return []
        upper = [(i, j) for i in range(size) for j in range(i + 1, size)]
        permutations = [list(p) for p in itertools.permutations(range(size))]
        seen = set()
        result = []
        for chosen in range(1 << len(upper)):
            matrix = np.eye(size, dtype=bool)
            for bit, (i, j) in enumerate(upper):
                if chosen >> bit & 1:
                    matrix[i, j] = True
            composed = (matrix.astype(np.int64) @ matrix.astype(np.int64)) > 0
            if (composed & ~matrix).any():
                continue
            canonical = min(matrix[np.ix_(p, p)].tobytes() for p in permutations)
            if canonical in seen:
                continue
            seen.add(canonical)
            result.append(FinitePoset([str(i) for i in range(size)], matrix))
        logger.debug(f"✅ 크기 {size} poset 동형류 {len(result)} 개")
        return result

    def all_posets_up_to(self, size: int) -> List[FinitePoset]:
        return [poset for n in range(1, size + 1) for poset in self.all_posets(n)]
