import logging
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..exceptions import NonDistributiveError, PosetValidationError, SizeBoundError
from ..models.lattice_model import BirkhoffResult, FiniteLattice, IdealLattice
from ..models.poset_model import DownSet, FinitePoset, PosetBase, PosetMap
from ..utils.bitset_utils import BitsetHelper

logger = logging.getLogger(__name__)


class IdealLatticeService:
    """down-set 격자 𝒪(P), canonical decomposition, join-irreducible, Birkhoff 쌍대성"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    # =========================
    # down-set 열거
    # =========================

    def all_down_sets(self, poset: PosetBase) -> IdealLattice:
        """
        ∅ 에서 출발해 여집합의 극소 원소를 하나씩 더하는 너비 우선 닫힘으로
        모든 down-set 을 정확히 한 번씩 만듭니다.

        Raises:
            SizeBoundError: |P| 가 ideal_size_bound 초과
        """
        bound = self.settings.ideal_size_bound
        if poset.size > bound:
            raise SizeBoundError("down-set 열거 poset", poset.size, bound)

        strict_below = [poset.down_masks[x] & ~(1 << x) for x in range(poset.size)]
        seen = {0}
        frontier = [0]
        while frontier:
            next_frontier = []
            for ideal in frontier:
                for x in range(poset.size):
                    if ideal >> x & 1 or strict_below[x] & ~ideal:
                        continue
                    grown = ideal | 1 << x
                    if grown not in seen:
                        seen.add(grown)
                        next_frontier.append(grown)
            frontier = next_frontier
        logger.debug(f"✅ down-set 열거 완료: |P|={poset.size}, |O(P)|={len(seen)}")
        return IdealLattice(poset, seen)

    def count_antichains(self, poset: PosetBase) -> int:
        """모든 부분집합 중 antichain 의 개수 (down-set 개수의 독립 확인용)"""
        bound = self.settings.ideal_size_bound
        if poset.size > bound:
            raise SizeBoundError("antichain 열거 poset", poset.size, bound)
        comparable = [
            (poset.down_masks[x] | poset.up_masks[x]) & ~(1 << x) for x in range(poset.size)
        ]
        count = 0
        for subset in range(1 << poset.size):
            if all(comparable[x] & subset == 0 for x in BitsetHelper.iter_indices(subset)):
                count += 1
        return count

    def principal(self, poset: PosetBase, x) -> DownSet:
        """↓x = {m : m ≤ x}"""
        return DownSet(poset, poset.down_masks[poset.index_of(x)], check=False)

    def canonical_decomposition(self, down_set: DownSet) -> List[DownSet]:
        """
        down-set 을 극대 원소들의 principal down-set 합으로 나눕니다.

        조각들은 서로 비교 불가능하고 합집합은 원래 집합과 같습니다. ∅ 은 빈 목록입니다.
        """
        parent = down_set.parent
        maxima = parent.maximal_in(down_set.members)
        return [
            DownSet(parent, parent.down_masks[x], check=False)
            for x in BitsetHelper.iter_indices(maxima)
        ]

    def decomposition_masks(self, parent: PosetBase, mask: int) -> List[int]:
        return [parent.down_masks[x] for x in BitsetHelper.iter_indices(parent.maximal_in(mask))]

    def lattice_sup(self, masks: Iterable[int]) -> int:
        """유한 down-set 모임의 상한 (합집합)"""
        result = 0
        for mask in masks:
            result |= mask
        return result

    def lattice_inf(self, parent: PosetBase, masks: Sequence[int]) -> int:
        """유한 down-set 모임의 하한 (교집합, 빈 모임은 전체 집합)"""
        result = parent.full_mask
        for mask in masks:
            result &= mask
        return result

    # =========================
    # 유한 격자
    # =========================

    def as_lattice(self, ideals: IdealLattice) -> FiniteLattice:
        """𝒪(P) 를 join/meet 표가 있는 FiniteLattice 로 바꿉니다"""
        bound = self.settings.lattice_table_bound
        if ideals.count > bound:
            raise SizeBoundError("격자 표", ideals.count, bound)
        count = ideals.count
        join = np.empty((count, count), dtype=np.int64)
        meet = np.empty((count, count), dtype=np.int64)
        for i, a in enumerate(ideals.ideals):
            for j, b in enumerate(ideals.ideals):
                join[i, j] = ideals.position(a | b)
                meet[i, j] = ideals.position(a & b)
        return FiniteLattice(ideals.as_poset(), join, meet)

    def lattice_from_poset(self, carrier: FinitePoset) -> FiniteLattice:
        bound = self.settings.lattice_table_bound
        if carrier.size > bound:
            raise SizeBoundError("격자 표", carrier.size, bound)
        return FiniteLattice.from_poset(carrier)

    def powerset_lattice(self, k: int) -> FiniteLattice:
        """{0..k-1} 의 멱집합 격자"""
        masks = list(range(1 << k))
        labels = ["{" + ",".join(str(i) for i in BitsetHelper.iter_indices(mask)) + "}" for mask in masks]
        matrix = np.array([[a & ~b == 0 for b in masks] for a in masks], dtype=bool)
        join = np.array([[a | b for b in masks] for a in masks], dtype=np.int64)
        meet = np.array([[a & b for b in masks] for a in masks], dtype=np.int64)
        return FiniteLattice(FinitePoset(labels, matrix), join, meet)

    def chain_lattice(self, n: int) -> FiniteLattice:
        """0 < 1 < ... < n-1"""
        matrix = np.triu(np.ones((n, n), dtype=bool))
        indices = np.arange(n)
        join = np.maximum.outer(indices, indices)
        meet = np.minimum.outer(indices, indices)
        return FiniteLattice(FinitePoset([str(i) for i in range(n)], matrix), join, meet)

    def diamond_m3(self) -> FiniteLattice:
        labels = ["0", "a", "b", "c", "1"]
        pairs = [(0, i) for i in range(5)] + [(i, 4) for i in range(1, 4)]
        return FiniteLattice.from_poset(self._from_pairs(labels, pairs))

    def pentagon_n5(self) -> FiniteLattice:
        labels = ["0", "a", "b", "c", "1"]
        pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)]
        return FiniteLattice.from_poset(self._from_pairs(labels, pairs))

    @staticmethod
    def _from_pairs(labels: Sequence[str], pairs: Iterable[Tuple[int, int]]) -> FinitePoset:
        matrix = np.eye(len(labels), dtype=bool)
        for i, j in pairs:
            matrix[i, j] = True
        return FinitePoset(labels, matrix)

    # =========================
    # join-irreducible, 분배성
    # =========================

    def join_irreducibles(self, lattice: FiniteLattice) -> Tuple[List[int], FinitePoset]:
        """
        x ≠ 0 이고 x = a∨b 이면 x ∈ {a, b} 인 원소들

        Returns:
            (L 인덱스 목록, 유도 순서를 가진 부분 poset)
        """
        result = []
        for x in range(lattice.size):
            if x == lattice.bottom:
                continue
            rows, cols = np.nonzero(lattice.join == x)
            if np.all((rows == x) | (cols == x)):
                result.append(x)
        return result, lattice.carrier.subposet(result)

    def check_distributive(self, lattice: FiniteLattice) -> Optional[Tuple[str, str, str]]:
        """
        x∧(y∨z) = (x∧y)∨(x∧z) 를 모든 삼중쌍에 대해 검사합니다.

        Returns:
            위반 삼중쌍 (라벨) 또는 None
        """
        bound = self.settings.distributivity_bound
        if lattice.size > bound:
            raise SizeBoundError("분배성 검사 격자", lattice.size, bound)
        join, meet = lattice.join, lattice.meet
        for x in range(lattice.size):
            left = meet[x][join]
            right = join[meet[x][:, None], meet[x][None, :]]
            bad = np.argwhere(left != right)
            if bad.size:
                y, z = bad[0].tolist()
                labels = lattice.elements
                return labels[x], labels[y], labels[z]
        return None

    def join_prime_violation(self, lattice: FiniteLattice) -> Optional[Tuple[str, str, str]]:
        """join-irreducible x 에 대해 x ≤ a∨b ⇒ x ≤ a 또는 x ≤ b 의 반례"""
        irreducibles, _ = self.join_irreducibles(lattice)
        le = lattice.carrier.le
        for x in irreducibles:
            below_join = le[x][lattice.join]
            escapes = below_join & ~le[x][:, None] & ~le[x][None, :]
            bad = np.argwhere(escapes)
            if bad.size:
                a, b = bad[0].tolist()
                labels = lattice.elements
                return labels[x], labels[a], labels[b]
        return None

    def birkhoff_eta(self, lattice: FiniteLattice) -> BirkhoffResult:
        """
        η(a) = {j ∈ J(L) : j ≤ a} 를 계산하고 격자 동형인지 확인합니다.

        Raises:
            NonDistributiveError: 분배 법칙 위반 삼중쌍이 있을 때
        """
        triple = self.check_distributive(lattice)
        if triple is not None:
            logger.warning(f"⚠️ 분배 격자가 아님: {triple}")
            raise NonDistributiveError(triple)

        irreducibles, irreducible_poset = self.join_irreducibles(lattice)
        ideal_lattice = self.all_down_sets(irreducible_poset)
        le = lattice.carrier.le
        eta = []
        for a in range(lattice.size):
            mask = BitsetHelper.from_indices(k for k, j in enumerate(irreducibles) if le[j, a])
            eta.append(ideal_lattice.position(mask))

        if sorted(eta) != list(range(ideal_lattice.count)):
            raise PosetValidationError("η 가 전단사가 아닙니다")
        for a, b in product(range(lattice.size), repeat=2):
            contained = BitsetHelper.is_subset(ideal_lattice.ideals[eta[a]], ideal_lattice.ideals[eta[b]])
            if bool(le[a, b]) != contained:
                raise PosetValidationError(
                    "η 가 순서를 양방향으로 보존하지 않습니다",
                    witness=(lattice.elements[a], lattice.elements[b]),
                )
        logger.debug(f"✅ Birkhoff η 검증 완료: |L|={lattice.size}, |J(L)|={len(irreducibles)}")
        return BirkhoffResult(lattice, irreducibles, irreducible_poset, ideal_lattice, eta)

    def principal_embedding(self, poset: FinitePoset) -> PosetMap:
        """x ↦ ↓x : P → 𝒪(P)"""
        ideals = self.all_down_sets(poset)
        return PosetMap(poset, ideals.as_poset(), [ideals.position(mask) for mask in poset.down_masks])

    # =========================
    # atom
    # =========================

    def atoms(self, lattice: FiniteLattice) -> List[int]:
        """0 을 덮는 원소들"""
        cover = lattice.carrier.cover
        return np.nonzero(cover[lattice.bottom])[0].tolist()

    def is_atomic(self, lattice: FiniteLattice) -> bool:
        atoms = self.atoms(lattice)
        le = lattice.carrier.le
        return all(
            x == lattice.bottom or any(le[a, x] for a in atoms) for x in range(lattice.size)
        )

    def ideal_atoms(self, ideals: IdealLattice) -> List[int]:
        """𝒪(P) 의 atom = 극소 원소 하나짜리 down-set (격자 위치)"""
        parent = ideals.parent
        return [ideals.position(1 << x) for x in BitsetHelper.iter_indices(parent.minimal_in(parent.full_mask))]
