import logging
import time
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..exceptions import DepthBoundError, EncodingError
from ..models.lattice_model import FiniteLattice
from ..models.map_model import InducedMap
from ..models.poset_model import PosetMap
from ..models.ternary_model import ComponentIndex, TernaryFunction
from ..schemas.common import CheckResult
from ..schemas.lattice_schema import QuotientCriterionReport
from ..utils.bitset_utils import BitsetHelper
from ..utils.random_utils import RandomHelper
from .universal_sequence_service import UniversalSequenceService

logger = logging.getLogger(__name__)

# 전수 검증을 허용하는 최대 깊이 (|O(P_2)| = 3^8)
EXHAUSTIVE_DEPTH = 2


@lru_cache(maxsize=None)
def component_index(n: int) -> ComponentIndex:
    return ComponentIndex(n)


class TernaryEncodingService:
    """
    𝒪(P_n) ≅ {0,1,2}^{T_n} 표현

    - psi: down-set → 3진 함수 (component 마다 빠짐 / 아래만 / 둘 다)
    - q_step: 3진 함수 쪽에서 본 p̂_n^{n+1}
    - verify_square: q∘ψ = ψ∘p̂ 가환성 검사 (n=1 전수, n≥2 표본)
    """

    def __init__(self, settings: Optional[Settings] = None, universal_service: Optional[UniversalSequenceService] = None):
        self.settings = settings or get_settings()
        self.universal_service = universal_service or UniversalSequenceService(self.settings)
        self.quotient_service = self.universal_service.quotient_service
        self.ideal_service = self.quotient_service.ideal_service

    def _require_depth(self, n: int):
        if n < 1:
            raise EncodingError("깊이는 1 이상이어야 합니다")
        if n > self.settings.depth_bound:
            raise DepthBoundError(n, self.settings.depth_bound)

    # =========================
    # ψ
    # =========================

    def psi(self, n: int, mask: int) -> TernaryFunction:
        """
        ψ(A)(c) = [c 의 아래 끝점 ∈ A] + [위 끝점 ∈ A]

        Raises:
            EncodingError: A 가 P_n 의 down-set 이 아님
        """
        self._require_depth(n)
        level = self.universal_service.level(n)
        if mask < 0 or mask >> level.size or not level.is_down_set(mask):
            raise EncodingError(f"P_{n} 의 down-set 이 아닙니다")
        index = component_index(n)
        bits = np.array([mask >> code & 1 for code in range(level.size)], dtype=np.int8)
        return TernaryFunction(n, bits[index.lower] + bits[index.upper])

    def psi_decode(self, f: TernaryFunction) -> int:
        """ψ⁻¹: 값 ≥ 1 이면 아래 끝점, 값 2 이면 위 끝점까지 포함"""
        self._require_depth(f.n)
        index = component_index(f.n)
        codes = np.concatenate([index.lower[f.values >= 1], index.upper[f.values == 2]])
        return BitsetHelper.from_indices(codes.tolist())

    @staticmethod
    def psi_batch(n: int, members: np.ndarray) -> np.ndarray:
        """(표본 수, 4^n) bool 행렬 → (표본 수, |T_n|) 값 행렬"""
        index = component_index(n)
        return members[:, index.lower].astype(np.int8) + members[:, index.upper]

    @staticmethod
    def masks_to_members(masks: Sequence[int], size: int) -> np.ndarray:
        """비트셋 목록 → (개수, size) bool 행렬"""
        bits = np.arange(size, dtype=np.uint64)
        if size <= 64:
            values = np.array([int(mask) for mask in masks], dtype=np.uint64)
            return ((values[:, None] >> bits[None, :]) & np.uint64(1)).astype(bool)
        return np.array([[mask >> x & 1 for x in range(size)] for mask in masks], dtype=bool)

    # =========================
    # q_n^{n+1}
    # =========================

    def q_step(self, n: int, f: TernaryFunction) -> TernaryFunction:
        """
        q(f)(c) = max{f(c⌢0), f(c⌢1), min{f(c⌢2), 1}, 2·min{f(c⌢3), 1}}

        f 는 T_{n+1} 위의 함수이고 결과는 T_n 위의 함수입니다.
        """
        if f.n != n + 1:
            raise EncodingError(f"q_{n}^{n + 1} 의 입력은 T_{n + 1} 함수여야 합니다 (받은 깊이 {f.n})")
        return TernaryFunction(n, self.q_step_batch(f.values[None, :])[0])

    @staticmethod
    def q_step_batch(values: np.ndarray) -> np.ndarray:
        """(표본 수, |T_{n+1}|) → (표본 수, |T_n|); c⌢d 의 순위는 4·rank(c) + d"""
        children = values.reshape(values.shape[0], -1, 4)
        return np.maximum.reduce([
            children[:, :, 0],
            children[:, :, 1],
            np.minimum(children[:, :, 2], 1),
            2 * np.minimum(children[:, :, 3], 1),
        ]).astype(np.int8)

    def q_composite(self, k: int, f: TernaryFunction) -> TernaryFunction:
        """q_k^{k+1} ∘ ... ∘ q_{n-1}^n"""
        result = f
        for n in range(f.n - 1, k - 1, -1):
            result = self.q_step(n, result)
        return result

    # =========================
    # 격자 연산
    # =========================

    @staticmethod
    def ternary_join(f: TernaryFunction, g: TernaryFunction) -> TernaryFunction:
        return f | g

    @staticmethod
    def ternary_meet(f: TernaryFunction, g: TernaryFunction) -> TernaryFunction:
        return f & g

    @staticmethod
    def is_join_irreducible(f: TernaryFunction) -> bool:
        """0 이 아닌 값이 정확히 한 곳"""
        return int(np.count_nonzero(f.values)) == 1

    # =========================
    # p̂ 의 배치 계산
    # =========================

    def _induced_batch(self, members: np.ndarray, n: int, k: int) -> np.ndarray:
        """
        P_n 의 down-set 표본 → p̂_k^n 상 (P_k 의 down-set)

        자르기 사상의 상은 연속한 4^{n-k} 개 코드 중 하나라도 있으면 포함되고,
        P_k 의 2-chain 위 끝점이 있으면 아래 끝점을 더해 닫습니다.
        """
        image = members.reshape(members.shape[0], -1, 4 ** (n - k)).any(axis=2)
        lows, highs = self.universal_service.level(k).strict_pairs()
        image[:, lows] |= image[:, highs]
        return image

    def _random_members(self, rng: np.random.Generator, n: int, count: int) -> np.ndarray:
        """원소마다 밀도가 다른 무작위 부분집합의 아래 닫힘"""
        level = self.universal_service.level(n)
        density = rng.uniform(0.0, 1.0, size=(count, 1))
        members = rng.random((count, level.size)) < density
        lows, highs = level.strict_pairs()
        members[:, lows] |= members[:, highs]
        return members

    def _square_mismatch(self, n: int, members: np.ndarray) -> Optional[int]:
        """q∘ψ ≠ ψ∘p̂ 인 첫 행 (없으면 None)"""
        left = self.q_step_batch(self.psi_batch(n + 1, members))
        right = self.psi_batch(n, self._induced_batch(members, n + 1, n))
        bad = np.nonzero((left != right).any(axis=1))[0]
        return int(bad[0]) if bad.size else None

    @staticmethod
    def _members_label(members: np.ndarray) -> List[int]:
        return np.nonzero(members)[0].tolist()

    # =========================
    # 가환 사각형 검증
    # =========================

    def verify_square(self, n: int, samples: Optional[int] = None, seed: Optional[int] = None) -> CheckResult:
        """
        q_n^{n+1} ∘ ψ_{n+1} = ψ_n ∘ p̂_n^{n+1} 확인

        n = 1 은 𝒪(P_2) 전체 (라이브러리 p̂ 와도 대조), n ≥ 2 는 표본입니다.
        표본은 workers 개 파티션으로 나누어 SeedSequence.spawn 하위 시드로 병렬 생성합니다.
        """
        self._require_depth(n + 1)
        started = time.perf_counter()
        name = f"verify_square n={n}"
        logger.info(f"🔍 {name} 시작")

        if n + 1 <= EXHAUSTIVE_DEPTH:
            domain = self.universal_service.level(n + 1)
            ideals = self.ideal_service.all_down_sets(domain)
            members = self.masks_to_members(ideals.ideals, domain.size)
            bad = self._square_mismatch(n, members)
            if bad is None:
                induced = self.quotient_service.induce(self.universal_service.projection(n + 1, n))
                library = self.masks_to_members([induced(mask) for mask in ideals.ideals], 4 ** n)
                batch = self._induced_batch(members, n + 1, n)
                if not np.array_equal(library, batch):
                    row = int(np.nonzero((library != batch).any(axis=1))[0][0])
                    return self._square_result(name, False, ideals.count, started, f"p̂ 계산 불일치: {domain.labels_of(ideals.ideals[row])}")
            detail = None if bad is None else f"불일치 ideal: {domain.labels_of(ideals.ideals[bad])}"
            return self._square_result(name, bad is None, ideals.count, started, detail)

        samples = self.settings.sample_count if samples is None else samples
        seed = self.settings.seed if seed is None else seed
        workers = max(1, min(self.settings.workers, samples or 1))
        sizes = [samples // workers + (1 if i < samples % workers else 0) for i in range(workers)]
        seeds = RandomHelper.sub_seeds(seed, workers, n)

        def run(part: int) -> Tuple[int, Optional[List[int]]]:
            rng = np.random.default_rng(seeds[part])
            members = self._random_members(rng, n + 1, sizes[part])
            if part == 0:
                members = np.vstack([self._fixed_members(n + 1), members])
            bad = self._square_mismatch(n, members)
            return members.shape[0], None if bad is None else self._members_label(members[bad])

        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run, range(workers)))
        cases = sum(count for count, _ in outcomes)
        failures = [bad for _, bad in outcomes if bad is not None]
        detail = None if not failures else f"불일치 ideal 코드: {failures[0]}"
        return self._square_result(name, not failures, cases, started, detail)

    def _fixed_members(self, n: int) -> np.ndarray:
        """∅, 전체, 모든 principal down-set"""
        level = self.universal_service.level(n)
        fixed = np.zeros((level.size + 2, level.size), dtype=bool)
        fixed[1] = True
        codes = np.arange(level.size)
        fixed[2 + codes, codes] = True
        uppers = codes[~level.is_lower]
        fixed[2 + uppers, level.partner[uppers]] = True
        return fixed

    @staticmethod
    def _square_result(name: str, passed: bool, cases: int, started: float, detail: Optional[str]) -> CheckResult:
        seconds = round(time.perf_counter() - started, 3)
        if passed:
            logger.info(f"✅ {name}: {cases} 경우 통과 ({seconds}s)")
        else:
            logger.error(f"❌ {name}: {detail} ({seconds}s)")
        return CheckResult(name=name, passed=passed, cases=cases, detail=detail)

    def verify_composite(self, samples: int = 1000, seed: Optional[int] = None) -> CheckResult:
        """q_1² ∘ q_2³ ∘ ψ_3 = ψ_1 ∘ p̂_1³ (표본)"""
        started = time.perf_counter()
        rng = RandomHelper.rng(self.settings.seed if seed is None else seed, 3, 1)
        members = np.vstack([self._fixed_members(3), self._random_members(rng, 3, samples)])
        left = self.q_step_batch(self.q_step_batch(self.psi_batch(3, members)))
        right = self.psi_batch(1, self._induced_batch(members, 3, 1))
        bad = np.nonzero((left != right).any(axis=1))[0]
        detail = None if not bad.size else f"불일치 ideal 코드: {self._members_label(members[bad[0]])}"
        return self._square_result("q composite 1..3", not bad.size, members.shape[0], started, detail)

    def verify_psi(self, n: int, samples: int = 2000, seed: Optional[int] = None) -> CheckResult:
        """
        ψ 가 전단사이고 순서를 양방향으로 보존하며 join 을 보존하는지 확인합니다.

        n ≤ 2 는 모든 ideal 쌍, 그보다 깊으면 표본 쌍을 봅니다.
        """
        self._require_depth(n)
        started = time.perf_counter()
        name = f"psi isomorphism n={n}"
        level = self.universal_service.level(n)
        index = component_index(n)
        if n <= EXHAUSTIVE_DEPTH:
            ideals = self.ideal_service.all_down_sets(level)
            members = self.masks_to_members(ideals.ideals, level.size)
            values = self.psi_batch(n, members)
            if np.unique(values, axis=0).shape[0] != ideals.count or ideals.count != 3 ** index.count:
                return self._square_result(name, False, ideals.count, started, "ψ 가 전단사가 아닙니다")
            masks = np.array(ideals.ideals, dtype=np.uint64)
            for i in range(ideals.count):
                contained = (masks[i] & ~masks) == 0
                dominated = (values[i] <= values).all(axis=1)
                joined = self.psi_batch(n, members[i] | members)
                if not np.array_equal(contained, dominated) or not np.array_equal(joined, np.maximum(values[i], values)):
                    return self._square_result(name, False, ideals.count, started, f"위반 ideal: {level.labels_of(ideals.ideals[i])}")
            return self._square_result(name, True, ideals.count ** 2, started, None)

        rng = RandomHelper.rng(self.settings.seed if seed is None else seed, n)
        first = self._random_members(rng, n, samples)
        second = self._random_members(rng, n, samples)
        left, right = self.psi_batch(n, first), self.psi_batch(n, second)
        joins = np.array_equal(self.psi_batch(n, first | second), np.maximum(left, right))
        contained = ~(first & ~second).any(axis=1)
        order = np.array_equal(contained, (left <= right).all(axis=1))
        decoded = all(
            self.psi_decode(TernaryFunction(n, row)) == BitsetHelper.from_indices(np.nonzero(row_members)[0].tolist())
            for row, row_members in zip(left[:100], first[:100])
        )
        passed = joins and order and decoded
        return self._square_result(name, passed, samples, started, None if passed else "표본 쌍에서 위반")

    # =========================
    # 격자 사상 판정
    # =========================

    def quotient_isomorphism_criterion(
        self, source: FiniteLattice, target: FiniteLattice, assignment: Sequence[int]
    ) -> QuotientCriterionReport:
        """
        격자 사상 p: L → T 가 유도 사상 p̂_0 와 동형이 되는 충분 조건

        (ii) p(J(L)) = J(T), (i) p|J(L) 가 quotient, (iii) 0 과 이항 join 보존.
        모두 성립하면 Birkhoff 사각형 η_T∘p = p̂_0∘η_L 을 원소마다 확인합니다.

        Raises:
            NonDistributiveError: L 또는 T 가 분배 격자가 아님
        """
        values = np.asarray(assignment, dtype=np.int64)
        if values.shape != (source.size,) or (values.size and (values.min() < 0 or values.max() >= target.size)):
            raise EncodingError("격자 사상의 assignment 가 올바르지 않습니다")
        birkhoff_source = self.ideal_service.birkhoff_eta(source)
        birkhoff_target = self.ideal_service.birkhoff_eta(target)
        irreducible_source = birkhoff_source.irreducibles
        irreducible_target = birkhoff_target.irreducibles

        image = {int(values[j]) for j in irreducible_source}
        if image != set(irreducible_target):
            stray = sorted(image - set(irreducible_target))
            reason = (
                f"join-irreducible 이 아닌 {target.elements[stray[0]]} 로 갑니다" if stray
                else "J(T) 전체를 덮지 못합니다"
            )
            return QuotientCriterionReport(holds=False, failed_condition="ii", reason=reason)

        positions = {element: k for k, element in enumerate(irreducible_target)}
        restricted = PosetMap(
            birkhoff_source.irreducible_poset,
            birkhoff_target.irreducible_poset,
            [positions[int(values[j])] for j in irreducible_source],
        )
        classification = self.quotient_service.classify(restricted)
        if not classification.is_quotient:
            return QuotientCriterionReport(holds=False, failed_condition="i", reason=classification.reason)

        if values[source.bottom] != target.bottom:
            return QuotientCriterionReport(holds=False, failed_condition="iii", reason="0 을 0 으로 보내지 않습니다")
        joined = values[source.join]
        expected = target.join[values[:, None], values[None, :]]
        bad = np.argwhere(joined != expected)
        if bad.size:
            a, b = bad[0].tolist()
            return QuotientCriterionReport(
                holds=False, failed_condition="iii",
                reason=f"{source.elements[a]} ∨ {source.elements[b]} 의 상이 join 과 다릅니다",
            )

        induced = InducedMap(restricted)
        source_ideals = birkhoff_source.ideal_lattice.ideals
        target_ideals = birkhoff_target.ideal_lattice.ideals
        for a in range(source.size):
            transported = induced.action(source_ideals[birkhoff_source.eta[a]])
            if transported != target_ideals[birkhoff_target.eta[int(values[a])]]:
                return QuotientCriterionReport(
                    holds=True, square_commutes=False,
                    reason=f"{source.elements[a]} 에서 Birkhoff 사각형이 가환하지 않습니다",
                )
        return QuotientCriterionReport(holds=True, square_commutes=True)

    def induced_as_lattice_map(self, induced: InducedMap) -> Tuple[FiniteLattice, FiniteLattice, List[int]]:
        """p̂: 𝒪(Q) → 𝒪(P) 를 격자 표 형태 (L, T, assignment) 로 바꿉니다"""
        domain_ideals = induced.domain_ideals or self.ideal_service.all_down_sets(induced.domain)
        codomain_ideals = induced.codomain_ideals or self.ideal_service.all_down_sets(induced.codomain)
        assignment = [codomain_ideals.position(induced(mask)) for mask in domain_ideals.ideals]
        return (
            self.ideal_service.as_lattice(domain_ideals),
            self.ideal_service.as_lattice(codomain_ideals),
            assignment,
        )
