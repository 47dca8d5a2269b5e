import logging
from typing import List, Optional, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..exceptions import NotAQuotientError, PosetValidationError, SizeBoundError
from ..models.map_model import Amalgamation, FiberProduct, InducedMap, SticksCover
from ..models.poset_model import PosetBase, PosetMap, SparsePoset
from ..schemas.poset_schema import MapClassification
from ..utils.bitset_utils import BitsetHelper
from ..utils.dot_utils import clustered_digraph
from .ideal_lattice_service import IdealLatticeService

logger = logging.getLogger(__name__)


class QuotientMapService:
    """사상 분류, sticks cover, amalgamation, 유도 사상 p̂"""

    def __init__(self, settings: Optional[Settings] = None, ideal_service: Optional[IdealLatticeService] = None):
        self.settings = settings or get_settings()
        self.ideal_service = ideal_service or IdealLatticeService(self.settings)

    # =========================
    # 분류
    # =========================

    def classify(self, poset_map: PosetMap) -> MapClassification:
        """
        homomorphism / onto / quotient 여부를 판정합니다.

        quotient: onto 이고 순서를 보존하며 codomain 의 모든 strict 쌍 p < r 에 대해
        f(x) = p, f(y) = r, x < y 인 domain 쌍이 있음.
        반례는 domain/codomain 인덱스 순서로 처음 발견된 것입니다.
        """
        if poset_map._classification is not None:
            return poset_map._classification

        domain, codomain = poset_map.domain, poset_map.codomain
        values = poset_map.assignment
        lows, highs = domain.strict_pairs()
        image_lows, image_highs = values[lows], values[highs]

        preserved = codomain.leq_many(image_lows, image_highs)
        if not preserved.all():
            bad = int(np.nonzero(~preserved)[0][0])
            a, b = int(lows[bad]), int(highs[bad])
            result = MapClassification(
                is_homomorphism=False,
                is_onto=self._is_onto(poset_map),
                is_quotient=False,
                witness=[domain.elements[a], domain.elements[b]],
                reason="not_homomorphism",
            )
        elif not self._is_onto(poset_map):
            hit = np.zeros(codomain.size, dtype=bool)
            hit[values] = True
            missing = int(np.nonzero(~hit)[0][0])
            result = MapClassification(
                is_homomorphism=True,
                is_onto=False,
                is_quotient=False,
                witness=[codomain.elements[missing]],
                reason="not_onto",
            )
        else:
            target_lows, target_highs = codomain.strict_pairs()
            size = codomain.size
            lifted = np.isin(target_lows * size + target_highs, image_lows * size + image_highs)
            if lifted.all():
                result = MapClassification(is_homomorphism=True, is_onto=True, is_quotient=True)
            else:
                bad = int(np.nonzero(~lifted)[0][0])
                result = MapClassification(
                    is_homomorphism=True,
                    is_onto=True,
                    is_quotient=False,
                    witness=[codomain.elements[int(target_lows[bad])], codomain.elements[int(target_highs[bad])]],
                    reason="not_lifted",
                )
        poset_map._classification = result
        return result

    @staticmethod
    def _is_onto(poset_map: PosetMap) -> bool:
        return np.unique(poset_map.assignment).size == poset_map.codomain.size

    def require_quotient(self, poset_map: PosetMap, what: str = "사상") -> PosetMap:
        classification = self.classify(poset_map)
        if not classification.is_quotient:
            logger.warning(f"⚠️ quotient 가 아님: {what} ({classification.reason}, {classification.witness})")
            raise NotAQuotientError(f"{what} 이 quotient map 이 아닙니다 ({classification.reason})", classification)
        return poset_map

    def compose(self, second: PosetMap, first: PosetMap) -> PosetMap:
        """second ∘ first"""
        return second.after(first)

    def identity_map(self, poset: PosetBase) -> PosetMap:
        return PosetMap(poset, poset, np.arange(poset.size, dtype=np.int64))

    # =========================
    # sticks cover, amalgamation
    # =========================

    def sticks_cover(self, poset: PosetBase) -> SticksCover:
        """
        strict 쌍마다 2-chain 하나, 고립점마다 2-chain 하나를 두고 C 위로 보냅니다.

        component 수 = strict 쌍 수 + 고립점 수.
        """
        if poset.size == 0:
            raise PosetValidationError("빈 poset 의 sticks cover 는 없습니다")
        lows, highs = poset.strict_pairs()
        related = np.zeros(poset.size, dtype=bool)
        related[lows] = True
        related[highs] = True
        isolated = np.nonzero(~related)[0]

        pair_count = len(lows)
        count = pair_count + len(isolated)
        assignment = np.empty(2 * count, dtype=np.int64)
        assignment[0:2 * pair_count:2] = lows
        assignment[1:2 * pair_count:2] = highs
        assignment[2 * pair_count::2] = isolated
        assignment[2 * pair_count + 1::2] = isolated

        cover_map = PosetMap(self.sticks_poset(count), poset, assignment)
        return SticksCover(count, pair_count, cover_map)

    @staticmethod
    def sticks_poset(count: int, prefix: str = "") -> SparsePoset:
        """count 개의 2-chain 서로소 합, 라벨 'i.0' < 'i.1'"""
        labels = [f"{prefix}{i}.{end}" for i in range(count) for end in (0, 1)]
        lows = np.arange(0, 2 * count, 2, dtype=np.int64)
        return SparsePoset(labels, lows, lows + 1)

    def amalgamate(self, f: PosetMap, g: PosetMap) -> Amalgamation:
        """
        quotient f: B → A, g: C → A 에 대해 f∘f′∘q = g∘g′∘p 인 사각형을 만듭니다.

        D = B′ ∪̇ C′ (sticks cover 들의 서로소 합)
        - q 는 B′ 위에서 항등, C′ 의 component (z < v) 는
          gg′(z) = gg′(v) = a 이면 ff′(x) = a 인 가장 작은 x 로 둘 다 보내고,
          다르면 (a, b) 로 가는 B′ 의 가장 작은 strict 쌍으로 보냅니다.
        - p 는 대칭으로 정의합니다.
        """
        if f.codomain.size != g.codomain.size:
            raise PosetValidationError("f 와 g 의 codomain 이 다릅니다")
        self.require_quotient(f, "f")
        self.require_quotient(g, "g")

        b_cover = self.sticks_cover(f.domain)
        c_cover = self.sticks_cover(g.domain)
        f_side = f.assignment[b_cover.map.assignment]
        g_side = g.assignment[c_cover.map.assignment]

        total = b_cover.count + c_cover.count
        labels = [f"0.{label}" for label in b_cover.domain.elements] + [
            f"1.{label}" for label in c_cover.domain.elements
        ]
        lows = np.arange(0, 2 * total, 2, dtype=np.int64)
        apex = SparsePoset(labels, lows, lows + 1)

        b_size = 2 * b_cover.count
        q_values = np.concatenate([np.arange(b_size, dtype=np.int64), self._route(g_side, f_side)])
        p_values = np.concatenate([self._route(f_side, g_side), np.arange(2 * c_cover.count, dtype=np.int64)])

        q = PosetMap(apex, b_cover.domain, q_values)
        p = PosetMap(apex, c_cover.domain, p_values)
        logger.debug(f"✅ amalgamation 완료: |D|={apex.size}")
        return Amalgamation(apex, q, p, b_cover.map, c_cover.map)

    @staticmethod
    def _route(source_side: np.ndarray, target_side: np.ndarray) -> np.ndarray:
        """
        source sticks 의 각 component 를 target sticks 로 보냅니다.

        source_side, target_side 는 sticks 원소 → 공통 codomain A 인덱스입니다.
        """
        first_point = {}
        for index, value in enumerate(target_side.tolist()):
            first_point.setdefault(value, index)
        first_pair = {}
        for component in range(len(target_side) // 2):
            key = (int(target_side[2 * component]), int(target_side[2 * component + 1]))
            first_pair.setdefault(key, component)

        routed = np.empty(len(source_side), dtype=np.int64)
        for component in range(len(source_side) // 2):
            a, b = int(source_side[2 * component]), int(source_side[2 * component + 1])
            if a == b:
                routed[2 * component] = routed[2 * component + 1] = first_point[a]
            else:
                chosen = first_pair[(a, b)]
                routed[2 * component] = 2 * chosen
                routed[2 * component + 1] = 2 * chosen + 1
        return routed

    def fiber_product(self, t: PosetMap, g: PosetMap) -> FiberProduct:
        """
        t: A′ → A 와 g: B → A 의 fiber product

        원소는 a′ 순서, 같은 a′ 안에서는 b 순서로 나열합니다.
        """
        if not t.codomain.same_order(g.codomain):
            raise PosetValidationError("fiber product 의 두 사상 codomain 이 다릅니다")
        first_domain, second_domain = t.domain, g.domain
        fibers = [np.nonzero(g.assignment == value)[0] for value in range(g.codomain.size)]
        position = np.zeros(second_domain.size, dtype=np.int64)
        for fiber in fibers:
            position[fiber] = np.arange(len(fiber))

        sizes = np.array([len(fiber) for fiber in fibers], dtype=np.int64)[t.assignment]
        offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
        total = int(sizes.sum())
        first_values = np.repeat(np.arange(first_domain.size, dtype=np.int64), sizes)
        second_values = np.empty(total, dtype=np.int64)
        for value, fiber in enumerate(fibers):
            starts = offsets[t.assignment == value]
            for k, b in enumerate(fiber.tolist()):
                second_values[starts + k] = b

        pair_lows: List[np.ndarray] = []
        pair_highs: List[np.ndarray] = []

        # 같은 a′, b < d
        b_lows, b_highs = second_domain.strict_pairs()
        for b, d in zip(b_lows.tolist(), b_highs.tolist()):
            owners = np.nonzero(t.assignment == g(b))[0]
            pair_lows.append(offsets[owners] + position[b])
            pair_highs.append(offsets[owners] + position[d])

        # a′ < c′, b ≤ d
        a_lows, a_highs = first_domain.strict_pairs()
        image_lows, image_highs = t.assignment[a_lows], t.assignment[a_highs]
        keys = np.unique(np.stack([image_lows, image_highs], axis=1), axis=0) if len(a_lows) else []
        for a, c in (tuple(key) for key in np.asarray(keys).tolist()):
            chosen = (image_lows == a) & (image_highs == c)
            lower_owners, upper_owners = a_lows[chosen], a_highs[chosen]
            for b in fibers[a].tolist():
                for d in fibers[c].tolist():
                    if second_domain.leq(b, d):
                        pair_lows.append(offsets[lower_owners] + position[b])
                        pair_highs.append(offsets[upper_owners] + position[d])

        lows = np.concatenate(pair_lows) if pair_lows else np.empty(0, dtype=np.int64)
        highs = np.concatenate(pair_highs) if pair_highs else np.empty(0, dtype=np.int64)
        labels = [
            f"({first_domain.elements[a]},{second_domain.elements[b]})"
            for a, b in zip(first_values.tolist(), second_values.tolist())
        ]
        poset = SparsePoset(labels, lows, highs)
        logger.debug(f"🧮 fiber product: |D|={total}, strict={len(lows)}")
        return FiberProduct(
            poset,
            PosetMap(poset, first_domain, first_values),
            PosetMap(poset, second_domain, second_values),
        )

    # =========================
    # 유도 사상 p̂
    # =========================

    def induce(self, poset_map: PosetMap) -> InducedMap:
        """
        p̂: 𝒪(Q) → 𝒪(P)

        |𝒪(Q)| ≤ induced_table_bound 이면 모든 ideal 의 상을 표로 미리 계산합니다.
        """
        self.require_quotient(poset_map, "p")
        induced = InducedMap(poset_map)
        if poset_map.domain.size > self.settings.ideal_size_bound:
            return induced
        domain_ideals = self.ideal_service.all_down_sets(poset_map.domain)
        if domain_ideals.count > self.settings.induced_table_bound:
            return induced
        codomain_ideals = self.ideal_service.all_down_sets(poset_map.codomain)
        table = np.array(
            [codomain_ideals.position(induced.action(mask)) for mask in domain_ideals.ideals], dtype=np.int64
        )
        return InducedMap(poset_map, domain_ideals, codomain_ideals, table)

    def meet_preservation_criterion(self, poset_map: PosetMap) -> Tuple[bool, Optional[List[str]]]:
        """
        t ≤ p(x), t ≤ p(y) 이면 z ≤ x, z ≤ y, t ≤ p(z) 인 z 가 있는지 검사합니다.

        Returns:
            (성립 여부, 반례 [t, x, y] 라벨)
        """
        self.require_quotient(poset_map, "p")
        domain, codomain = poset_map.domain, poset_map.codomain
        below_image = [codomain.down_masks[poset_map(x)] for x in range(domain.size)]
        for x in range(domain.size):
            for y in range(x, domain.size):
                common = domain.down_masks[x] & domain.down_masks[y]
                reachable = 0
                for z in BitsetHelper.iter_indices(common):
                    reachable |= below_image[z]
                missing = below_image[x] & below_image[y] & ~reachable
                if missing:
                    t = (missing & -missing).bit_length() - 1
                    return False, [codomain.elements[t], domain.elements[x], domain.elements[y]]
        return True, None

    def meets_preserved(self, induced: InducedMap) -> Tuple[bool, Optional[Tuple[List[str], List[str]]]]:
        """p̂(A∩B) = p̂(A)∩p̂(B) 를 𝒪(Q) 전체에서 직접 확인 (작은 Q 전용)"""
        domain = induced.domain
        if domain.size > self.settings.ideal_size_bound:
            raise SizeBoundError("meet 보존 전수 검사 poset", domain.size, self.settings.ideal_size_bound)
        ideals = induced.domain_ideals or self.ideal_service.all_down_sets(domain)
        images = [induced(mask) for mask in ideals.ideals]
        for i, a in enumerate(ideals.ideals):
            for j in range(i, ideals.count):
                b = ideals.ideals[j]
                if induced(a & b) != images[i] & images[j]:
                    return False, (domain.labels_of(a), domain.labels_of(b))
        return True, None

    # =========================
    # 출력
    # =========================

    def to_dot(self, poset_map: PosetMap) -> str:
        """domain/codomain 을 cluster 로, 사상을 점선 화살표로 그립니다"""
        domain, codomain = poset_map.domain, poset_map.codomain
        clusters = {}
        for name, poset in (("domain", domain), ("codomain", codomain)):
            dense = poset if hasattr(poset, "cover") else poset.to_finite_poset()
            clusters[name] = (dense.elements, [tuple(pair) for pair in np.argwhere(dense.cover).tolist()])
        arrows = [("domain", x, "codomain", poset_map(x)) for x in range(domain.size)]
        return clustered_digraph(clusters, arrows)
