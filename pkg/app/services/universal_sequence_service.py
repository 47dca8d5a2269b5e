import logging
import threading
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..exceptions import DepthBoundError, PosetValidationError, SizeBoundError
from ..models.level_model import FiberPairs, LevelMapFamily, UniversalLevel, clause_leq, word_to_code
from ..models.map_model import InducedMap
from ..models.poset_model import FinitePoset, PosetBase, PosetMap
from ..models.thread_model import InverseSystem
from ..utils.bitset_utils import BitsetHelper
from ..utils.random_utils import RandomHelper
from .quotient_map_service import QuotientMapService

logger = logging.getLogger(__name__)

Strategy = Literal["global", "per_component"]


class UniversalSequenceService:
    """
    P_n = {0,1,2,3}^n 레벨, 사영, 확장 solver, (U) witness, universal quotient 구성

    레벨은 처음 요청될 때 만들어 캐시하고 이후에는 읽기만 합니다.
    """

    def __init__(self, settings: Optional[Settings] = None, quotient_service: Optional[QuotientMapService] = None):
        self.settings = settings or get_settings()
        self.quotient_service = quotient_service or QuotientMapService(self.settings)
        self._levels: Dict[int, UniversalLevel] = {}
        self._lock = threading.Lock()

    # =========================
    # 레벨과 사영
    # =========================

    def level(self, n: int) -> UniversalLevel:
        """
        P_n (1 ≤ n ≤ depth_bound)

        Raises:
            DepthBoundError: n 이 depth_bound 초과
        """
        return self._level(n, self.settings.depth_bound)

    def _level(self, n: int, bound: int) -> UniversalLevel:
        if n < 1:
            raise PosetValidationError("레벨 깊이는 1 이상이어야 합니다")
        if n > bound:
            logger.warning(f"⚠️ 레벨 깊이 {n} 이 한도 {bound} 를 넘어 거부합니다")
            raise DepthBoundError(n, bound)
        cached = self._levels.get(n)
        if cached is not None:
            return cached
        with self._lock:
            if n not in self._levels:
                self._levels[n] = UniversalLevel(n)
                logger.debug(f"🧮 P_{n} 생성: {4 ** n} 원소")
            return self._levels[n]

    def literal_level(self, n: int) -> FinitePoset:
        """
        순서 절을 모든 쌍에 그대로 적용해 만든 P_n (구조적 계산과 비교하는 용도)
        """
        bound = self.settings.dense_level_bound
        if n > bound:
            raise DepthBoundError(n, bound)
        level = self.level(n)
        words = [level.word(code) for code in range(level.size)]
        matrix = np.array([[clause_leq(x, y) for y in words] for x in words], dtype=bool)
        return FinitePoset(level.elements, matrix)

    def level_depth(self, poset: PosetBase) -> int:
        """poset 이 어떤 P_n 인지 확인하고 n 을 돌려줍니다"""
        if isinstance(poset, UniversalLevel):
            return poset.n
        n = 0
        size = poset.size
        while size > 1 and size % 4 == 0:
            size //= 4
            n += 1
        if size != 1 or n < 1:
            raise PosetValidationError(f"크기 {poset.size} 인 poset 은 레벨이 아닙니다")
        level = self._level(n, max(n, self.settings.solver_depth_bound))
        lows, highs = poset.strict_pairs()
        expected_lows, expected_highs = level.strict_pairs()
        codes = [word_to_code(level.word(level.index_of(label))) for label in poset.elements]
        if codes != list(range(level.size)) or not (
            np.array_equal(lows, expected_lows) and np.array_equal(highs, expected_highs)
        ):
            raise PosetValidationError(f"P_{n} 과 같은 순서가 아닙니다")
        return n

    def projection(self, n: int, k: int, bound: Optional[int] = None) -> PosetMap:
        """P_n → P_k, 앞 k 개 좌표로 자르기"""
        if k >= n:
            raise PosetValidationError(f"사영은 k < n 이어야 합니다 (n={n}, k={k})")
        bound = bound or self.settings.depth_bound
        source, target = self._level(n, bound), self._level(k, bound)
        return PosetMap(source, target, source.codes // 4 ** (n - k))

    def component_table(self, level: UniversalLevel) -> np.ndarray:
        """원소 코드 → 그 원소가 속한 component 의 순위 (아래 끝점 사전순)"""
        lows, _ = level.strict_pairs()
        lower_end = np.where(level.is_lower, level.codes, level.partner)
        return np.searchsorted(lows, lower_end)

    # =========================
    # fiber 구조
    # =========================

    def fiber_pairs(self, m: int, k: int, endpoint) -> FiberPairs:
        """
        P_k 의 component {x < y} (endpoint 는 둘 중 하나의 라벨) 위에 놓인 P_m 의 쌍들을 분류합니다.
        """
        if k >= m:
            raise PosetValidationError(f"fiber 분석은 k < m 이어야 합니다 (m={m}, k={k})")
        upper_level = self.level(m)
        lower_level = self.level(k)
        code = lower_level.index_of(endpoint)
        x = code if lower_level.is_lower[code] else int(lower_level.partner[code])
        y = int(lower_level.partner[x])

        weight = 4 ** (m - k)
        lows, highs = upper_level.strict_pairs()
        low_images, high_images = lows // weight, highs // weight
        pairs = np.stack([lows, highs], axis=1)
        lower_type = pairs[(low_images == x) & (high_images == x)]
        upper_type = pairs[(low_images == y) & (high_images == y)]
        cross_type = pairs[(low_images == x) & (high_images == y)]
        return FiberPairs(m, k, (x, y), lower_type, upper_type, cross_type)

    def canonical_pairs(self, m: int, k: int, endpoint) -> np.ndarray:
        """x⌢2⌢t < x⌢3⌢t (t ∈ {0,1}^(m−k−1)) 쌍들"""
        lower_level = self.level(k)
        x = lower_level.index_of(endpoint)
        tail_length = m - k - 1
        tails = np.array(
            [word_to_code(tuple((bits >> (tail_length - 1 - i)) & 1 for i in range(tail_length)))
             for bits in range(2 ** tail_length)],
            dtype=np.int64,
        )
        base = x * 4 ** (m - k)
        weight = 4 ** tail_length
        return np.stack([base + 2 * weight + tails, base + 3 * weight + tails], axis=1)

    def fiber_has_isolated(self, m: int, k: int, endpoint) -> bool:
        """(p_k^m)^{-1}({x, y}) 안에 고립점이 있는지"""
        fiber = self.fiber_pairs(m, k, endpoint)
        weight = 4 ** (m - k)
        x, y = fiber.component
        codes = self.level(m).codes
        members = codes[(codes // weight == x) | (codes // weight == y)]
        covered = np.zeros(4 ** m, dtype=bool)
        for pairs in (fiber.lower_type, fiber.upper_type, fiber.cross_type):
            covered[pairs.reshape(-1)] = True
        return not covered[members].all()

    @staticmethod
    def lower_type_capacity(depth: int) -> int:
        """한 끝점 위에 놓인 L (또는 U) 쌍의 수 2^(d−1)(2^d − 1)"""
        return 2 ** (depth - 1) * (2 ** depth - 1)

    # =========================
    # 확장 solver
    # =========================

    def solve_extension(
        self,
        p: PosetMap,
        strategy: Strategy = "global",
        depth_bound: Optional[int] = None,
        verify: bool = True,
    ) -> Tuple[int, PosetMap]:
        """
        quotient p: H → P_k 에 대해 p∘g = p_k^m 인 quotient g: P_m → H 를 만듭니다.

        strategy
        - global: 2^(m−k−1) > |{(x, y): x ≤_H y}| 인 가장 작은 m
        - per_component: 모든 component 의 L/U/LU 용량이 충분한 가장 작은 m

        각 component {L < U} 마다 H 쪽을 LI/UI/LP/UP/LUP 로, P_m 쪽 쌍을 L/U/LU 로 나누고
        모두 사전순으로 앞에서부터 채웁니다. (r, b) 는 가장 작은 LUP 쌍입니다.

        Raises:
            NotAQuotientError: p 가 quotient 가 아님
            DepthBoundError: 필요한 m 이 depth_bound 초과 (required_depth 포함)
        """
        bound = depth_bound or self.settings.depth_bound
        k = self.level_depth(p.codomain)
        self.quotient_service.require_quotient(p, "p")
        target = self._level(k, max(bound, k))
        source = p.domain
        component_count = target.component_count

        comp_of = self.component_table(target)
        images = p.assignment
        element_comp = comp_of[images]
        element_lower = target.is_lower[images]

        pair_lows, pair_highs = source.strict_pairs()
        related = np.zeros(source.size, dtype=bool)
        related[pair_lows] = True
        related[pair_highs] = True
        isolated = np.nonzero(~related)[0]
        lower_isolated = isolated[element_lower[isolated]]
        upper_isolated = isolated[~element_lower[isolated]]

        pair_comp = element_comp[pair_lows]
        low_side, high_side = element_lower[pair_lows], element_lower[pair_highs]
        pair_index = np.arange(len(pair_lows))
        lower_pairs = pair_index[low_side & high_side]
        upper_pairs = pair_index[~low_side & ~high_side]
        cross_pairs = pair_index[low_side & ~high_side]

        groups = {
            "LI": self._group(element_comp[lower_isolated], lower_isolated, component_count),
            "UI": self._group(element_comp[upper_isolated], upper_isolated, component_count),
            "LP": self._group(pair_comp[lower_pairs], lower_pairs, component_count),
            "UP": self._group(pair_comp[upper_pairs], upper_pairs, component_count),
            "LUP": self._group(pair_comp[cross_pairs], cross_pairs, component_count),
        }
        need_lower = max(len(a) + len(b) for a, b in zip(groups["LI"], groups["LP"]))
        need_upper = max(len(a) + len(b) for a, b in zip(groups["UI"], groups["UP"]))
        need_cross = max(len(a) for a in groups["LUP"])

        if strategy == "global":
            m = k + 1 + source.relation_size().bit_length()
        elif strategy == "per_component":
            depth = 1
            while (
                self.lower_type_capacity(depth) < max(need_lower, need_upper) or 2 ** depth < need_cross
            ):
                depth += 1
            m = k + depth
        else:
            raise PosetValidationError(f"알 수 없는 strategy 입니다: {strategy}")
        if m > bound:
            logger.warning(f"⚠️ solve_extension 에 필요한 깊이 {m} 이 한도 {bound} 를 넘습니다")
            raise DepthBoundError(m, bound)

        depth = m - k
        capacity = self.lower_type_capacity(depth)
        if max(need_lower, need_upper) > capacity or need_cross > 2 ** depth:
            raise SizeBoundError("component 용량", max(need_lower, need_upper, need_cross), capacity)

        level = self._level(m, max(bound, m))
        weight = 4 ** depth
        lows, highs = level.strict_pairs()
        low_images, high_images = lows // weight, highs // weight
        kind = np.where(low_images != high_images, 2, np.where(target.is_lower[low_images], 0, 1))
        order = np.lexsort((lows, kind, comp_of[low_images]))
        block = 4 ** depth
        sorted_lows = lows[order].reshape(component_count, block)
        sorted_highs = highs[order].reshape(component_count, block)

        logger.debug(f"🧮 solve_extension: k={k}, m={m}, |H|={source.size}, strategy={strategy}")
        assignment = np.empty(level.size, dtype=np.int64)
        for comp in range(component_count):
            cross = groups["LUP"][comp]
            r, b = int(pair_lows[cross[0]]), int(pair_highs[cross[0]])
            self._fill(
                assignment,
                sorted_lows[comp, :capacity], sorted_highs[comp, :capacity],
                groups["LI"][comp], groups["LP"][comp], pair_lows, pair_highs, (r, r),
            )
            self._fill(
                assignment,
                sorted_lows[comp, capacity:2 * capacity], sorted_highs[comp, capacity:2 * capacity],
                groups["UI"][comp], groups["UP"][comp], pair_lows, pair_highs, (b, b),
            )
            cross_lows = sorted_lows[comp, 2 * capacity:]
            cross_highs = sorted_highs[comp, 2 * capacity:]
            used = len(cross)
            assignment[cross_lows[:used]] = pair_lows[cross]
            assignment[cross_highs[:used]] = pair_highs[cross]
            assignment[cross_lows[used:]] = r
            assignment[cross_highs[used:]] = b

        solution = PosetMap(level, source, assignment)
        if verify:
            self.quotient_service.require_quotient(solution, "g")
            if not np.array_equal(images[assignment], level.codes // weight):
                raise PosetValidationError("p∘g 가 p_k^m 과 다릅니다")
        logger.debug(f"✅ solve_extension 완료: m={m}")
        return m, solution

    @staticmethod
    def _group(keys: np.ndarray, values: np.ndarray, count: int) -> List[np.ndarray]:
        """keys 기준 안정 정렬 후 component 별로 나눕니다 (각 묶음 안 순서 유지)"""
        order = np.argsort(keys, kind="stable")
        bounds = np.searchsorted(keys[order], np.arange(count + 1))
        ordered = values[order]
        return [ordered[bounds[c]:bounds[c + 1]] for c in range(count)]

    @staticmethod
    def _fill(assignment, block_lows, block_highs, points, pairs, pair_lows, pair_highs, fallback):
        """
        한쪽 끝점 블록 채우기

        앞 |points| 쌍은 고립점 하나로 접고, 다음 |pairs| 쌍은 H 의 쌍으로,
        나머지는 fallback 으로 보냅니다.
        """
        first, second = len(points), len(points) + len(pairs)
        assignment[block_lows[:first]] = points
        assignment[block_highs[:first]] = points
        assignment[block_lows[first:second]] = pair_lows[pairs]
        assignment[block_highs[first:second]] = pair_highs[pairs]
        assignment[block_lows[second:]] = fallback[0]
        assignment[block_highs[second:]] = fallback[1]

    def check_absorption(self, p: PosetMap, strategy: Strategy = "global") -> bool:
        """(A): solve_extension 결과가 quotient 이고 삼각형이 가환인지"""
        m, solution = self.solve_extension(p, strategy=strategy, verify=False)
        k = self.level_depth(p.codomain)
        commutes = np.array_equal(p.assignment[solution.assignment], solution.domain.codes // 4 ** (m - k))
        return commutes and self.quotient_service.classify(solution).is_quotient

    # =========================
    # (U) witness, 분해
    # =========================

    def witness_u(self, poset: PosetBase, bound: Optional[int] = None) -> Tuple[int, PosetMap]:
        """
        2·4^(n−1) ≥ sticks 수인 가장 작은 n 과 quotient P_n → x

        앞 component 들은 sticks cover 를 따라 보내고 남는 component 는 x 의 첫 원소로 접습니다.
        """
        bound = bound or self.settings.depth_bound
        cover = self.quotient_service.sticks_cover(poset)
        n = 1
        while 2 * 4 ** (n - 1) < cover.count:
            n += 1
        level = self._level(n, bound)
        lows, highs = level.strict_pairs()
        assignment = np.zeros(level.size, dtype=np.int64)
        routed = cover.map.assignment
        assignment[lows[: cover.count]] = routed[0::2]
        assignment[highs[: cover.count]] = routed[1::2]
        return n, PosetMap(level, poset, assignment)

    def factor_through_level(self, f: PosetMap, i: int) -> PosetMap:
        """
        rank-i cylinder 위에서 상수인 f: P_j → L 에서 f = h∘p_i^j 인 h: P_i → L 을 찾습니다.

        Raises:
            PosetValidationError: cylinder 위에서 상수가 아님
            NotAQuotientError: h 가 quotient 가 아님
        """
        j = self.level_depth(f.domain)
        if i > j:
            raise PosetValidationError(f"cylinder 순위 {i} 가 정의역 깊이 {j} 보다 큽니다")
        table = f.assignment.reshape(4 ** i, 4 ** (j - i))
        constant = (table == table[:, :1]).all(axis=1)
        if not constant.all():
            bad = int(np.nonzero(~constant)[0][0])
            level = self._level(i, max(i, self.settings.solver_depth_bound))
            raise PosetValidationError("cylinder 위에서 상수가 아닙니다", witness=(level.label(bad), i))
        level = self._level(i, max(i, self.settings.solver_depth_bound))
        factor = PosetMap(level, f.codomain, table[:, 0])
        return self.quotient_service.require_quotient(factor, "h")

    # =========================
    # universal quotient
    # =========================

    def build_universal_quotient(self, system: InverseSystem, depth: Optional[int] = None) -> LevelMapFamily:
        """
        역계 (H_k, h_k^{k+1}) 로 가는 가환 레벨 사상 f_k: P_{i_k} → H_k 를 depth 까지 만듭니다.

        f_1 은 witness_u(H_1), 이후에는 P_{i_k} ×_{H_k} H_{k+1} 의 첫 사영에 solver 를 적용해
        f_{k+1} = (둘째 사영)∘g 로 둡니다.
        """
        depth = depth or system.depth
        if depth > system.depth:
            raise PosetValidationError(f"역계 깊이 {system.depth} 보다 깊게 만들 수 없습니다")
        for index, step in enumerate(system.steps[: depth - 1]):
            self.quotient_service.require_quotient(step, f"h_{index}")
        bound = self.settings.solver_depth_bound

        first_index, first_map = self.witness_u(system.levels[0], bound)
        indices, maps = [first_index], [first_map]
        for k in range(depth - 1):
            product = self.quotient_service.fiber_product(maps[k], system.steps[k])
            m, solution = self.solve_extension(product.first, "per_component", bound, verify=False)
            indices.append(m)
            maps.append(product.second.after(solution))
            logger.debug(f"✅ 레벨 {k + 1}: i={m}, |D|={product.size}")
        return LevelMapFamily(indices, maps, system.steps[: depth - 1])

    def verify_family(self, family: LevelMapFamily) -> List[str]:
        """각 f_k 의 quotient 여부와 모든 인접 사각형의 가환성을 검사해 실패 항목을 돌려줍니다"""
        failures = []
        for k, level_map in enumerate(family.maps):
            if not self.quotient_service.classify(level_map).is_quotient:
                failures.append(f"f_{k} 가 quotient 가 아님")
        for k, step in enumerate(family.steps):
            upper, lower = family.maps[k + 1], family.maps[k]
            weight = 4 ** (family.indices[k + 1] - family.indices[k])
            if not np.array_equal(step.assignment[upper.assignment], lower.assignment[upper.domain.codes // weight]):
                failures.append(f"사각형 {k} 가 가환이 아님")
        return failures

    def lift_through_quotient(self, t: PosetMap, g: PosetMap) -> Tuple[int, PosetMap]:
        """
        t: P_{i1} → A 와 quotient g: B → A 에 대해 g∘l = t∘p_{i1}^{i2} 인 l: P_{i2} → B
        """
        self.level_depth(t.domain)
        self.quotient_service.require_quotient(t, "t")
        self.quotient_service.require_quotient(g, "g")
        product = self.quotient_service.fiber_product(t, g)
        m, solution = self.solve_extension(product.first, "per_component", self.settings.solver_depth_bound, verify=False)
        return m, product.second.after(solution)

    def lift_commutes(self, t: PosetMap, g: PosetMap, m: int, lift: PosetMap) -> bool:
        i = self.level_depth(t.domain)
        return np.array_equal(g.assignment[lift.assignment], t.assignment[lift.domain.codes // 4 ** (m - i)])

    # =========================
    # 격자 쪽 (U), (A)
    # =========================

    def check_lattice_universality(self, poset: PosetBase) -> bool:
        """witness_u 의 유도 사상 𝒪(P_n) → 𝒪(P) 가 onto 인지 (모든 ideal B 에 대해 ĝ(g^{-1}B) = B)"""
        n, witness = self.witness_u(poset)
        induced = InducedMap(self.quotient_service.require_quotient(witness, "witness"))
        ideals = self.quotient_service.ideal_service.all_down_sets(poset)
        for mask in ideals.ideals:
            chosen = np.isin(witness.assignment, BitsetHelper.to_indices(mask))
            preimage = BitsetHelper.from_indices(np.nonzero(chosen)[0].tolist())
            if induced.action(preimage) != mask:
                return False
        return True

    def check_lattice_absorption(self, p: PosetMap, samples: int = 100) -> bool:
        """표본 ideal A ⊆ P_m 에 대해 p̂(ĝ(A)) = p̂_k^m(A)"""
        m, solution = self.solve_extension(p)
        k = self.level_depth(p.codomain)
        lifted = InducedMap(solution)
        projected = InducedMap(self.projection(m, k))
        base = InducedMap(p)
        rng = RandomHelper.rng(self.settings.seed, m, k, p.domain.size)
        down_masks = solution.domain.down_masks
        for _ in range(samples):
            mask = RandomHelper.random_down_mask(rng, down_masks)
            if base.action(lifted.action(mask)) != projected.action(mask):
                return False
        return True

    def p_system(self, depth: int) -> InverseSystem:
        """(P_n, p_n^{n+1}) 의 처음 depth 레벨"""
        levels = [self.level(n) for n in range(1, depth + 1)]
        steps = [self.projection(n + 1, n) for n in range(1, depth)]
        return InverseSystem(levels, steps, name="P")
