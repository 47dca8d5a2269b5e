import logging
import time
from itertools import combinations, product
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..exceptions import OrderToolkitError, ThreadSystemError
from ..models.poset_model import DownSet, FinitePoset, PosetMap
from ..models.thread_model import InverseSystem, SymbolicPoint
from ..schemas.common import CheckResult, VerificationReport
from ..utils.bitset_utils import BitsetHelper
from ..utils.random_utils import RandomHelper
from .ideal_lattice_service import IdealLatticeService
from .limit_thread_service import LimitThreadService
from .poset_service import PosetService
from .quotient_map_service import QuotientMapService
from .ternary_encoding_service import TernaryEncodingService
from .universal_sequence_service import UniversalSequenceService

logger = logging.getLogger(__name__)

# 한 항목 안에서 (통과 여부, 경우의 수, 실패 사유)
Outcome = Tuple[bool, int, Optional[str]]


class VerificationService:
    """
    수락 검증 모음 (verify-all)

    항목마다 seed 에서 파생한 독립 Generator 를 쓰므로 같은 seed 는 같은 보고서를 냅니다.
    """

    # (항목 이름, 메서드 이름)
    CHECKS: List[Tuple[str, str]] = [
        ("canonical_decomposition", "check_canonical_decomposition"),
        ("birkhoff", "check_birkhoff"),
        ("amalgamation", "check_amalgamation"),
        ("level_structure", "check_level_structure"),
        ("extension_solver", "check_extension_solver"),
        ("induced_maps", "check_induced_maps"),
        ("thread_solver", "check_thread_solver"),
        ("ideal_limit_lattice", "check_ideal_limit_lattice"),
        ("isolated_points", "check_isolated_points"),
        ("ternary_encoding", "check_ternary_encoding"),
        ("universality", "check_universality"),
    ]

    def __init__(
        self,
        settings: Optional[Settings] = None,
        poset_service: Optional[PosetService] = None,
        ideal_service: Optional[IdealLatticeService] = None,
        quotient_service: Optional[QuotientMapService] = None,
        universal_service: Optional[UniversalSequenceService] = None,
        limit_service: Optional[LimitThreadService] = None,
        ternary_service: Optional[TernaryEncodingService] = None,
    ):
        self.settings = settings or get_settings()
        self.poset_service = poset_service or PosetService(self.settings)
        self.ideal_service = ideal_service or IdealLatticeService(self.settings)
        self.quotient_service = quotient_service or QuotientMapService(self.settings, self.ideal_service)
        self.universal_service = universal_service or UniversalSequenceService(self.settings, self.quotient_service)
        self.limit_service = limit_service or LimitThreadService(self.settings, self.ideal_service)
        self.ternary_service = ternary_service or TernaryEncodingService(self.settings, self.universal_service)

    # =========================
    # 실행
    # =========================

    def verify_all(self, only: Optional[List[str]] = None) -> VerificationReport:
        """모든 항목을 차례로 실행합니다 (only 가 있으면 그 이름만)"""
        report = VerificationReport(seed=self.settings.seed)
        for name, method in self.CHECKS:
            if only and name not in only:
                continue
            report.checks.append(self.run_check(name, getattr(self, method)))
        status = "✅ 모든 검증 통과" if report.passed else "❌ 검증 실패 항목 있음"
        logger.info(f"{status} ({len(report.checks)} 항목)")
        return report

    def run_check(self, name: str, check: Callable[[], Outcome]) -> CheckResult:
        logger.info(f"🔍 {name} 검증 시작")
        started = time.perf_counter()
        try:
            passed, cases, detail = check()
        except OrderToolkitError as e:
            logger.error(f"❌ {name}: {e.message}")
            passed, cases, detail = False, 0, f"{e.error_code}: {e.message}"
        seconds = round(time.perf_counter() - started, 3)
        if passed:
            logger.info(f"✅ {name}: {cases} 경우 통과 ({seconds}s)")
        else:
            logger.error(f"❌ {name}: {detail} ({seconds}s)")
        return CheckResult(name=name, passed=passed, cases=cases, detail=detail)

    def _rng(self, *salt: int) -> np.random.Generator:
        return RandomHelper.rng(self.settings.seed, *salt)

    def _random_poset(self, rng: np.random.Generator, size: int) -> FinitePoset:
        return FinitePoset([str(i) for i in range(size)], RandomHelper.random_order_matrix(rng, size))

    def _random_quotient(self, rng: np.random.Generator, target, extra: int, prefix: str = "h") -> PosetMap:
        dense = target if isinstance(target, FinitePoset) else target.to_finite_poset()
        relation, images = RandomHelper.random_quotient_relation(rng, dense.le, extra)
        domain = FinitePoset([f"{prefix}{i}" for i in range(len(images))], relation)
        return PosetMap(domain, target, images)

    # =========================
    # 1. canonical decomposition
    # =========================

    def check_canonical_decomposition(self) -> Outcome:
        """크기 ≤ 5 인 모든 poset 의 모든 down-set"""
        cases = 0
        for poset in self.poset_service.all_posets_up_to(5):
            for mask in self.ideal_service.all_down_sets(poset).ideals:
                cases += 1
                parts = self.ideal_service.canonical_decomposition(DownSet(poset, mask, check=False))
                masks = [part.members for part in parts]
                if self.ideal_service.lattice_sup(masks) != mask:
                    return False, cases, f"합집합이 원래 down-set 과 다릅니다: {poset.labels_of(mask)}"
                if any(BitsetHelper.is_subset(a, b) for a, b in combinations(masks, 2)) or any(
                    BitsetHelper.is_subset(b, a) for a, b in combinations(masks, 2)
                ):
                    return False, cases, f"비교 가능한 조각이 있습니다: {poset.labels_of(mask)}"
                maxima = poset.maximal_in(mask)
                if sorted(masks) != sorted(poset.down_masks[x] for x in BitsetHelper.iter_indices(maxima)):
                    return False, cases, f"조각이 극대 원소의 principal down-set 이 아닙니다: {poset.labels_of(mask)}"
                # 모든 합 표현은 표준 분해를 포함하고, 비교 불가능한 표현은 표준 분해뿐
                for subset in BitsetHelper.iter_subsets(mask):
                    generators = BitsetHelper.to_indices(subset)
                    covered = self.ideal_service.lattice_sup(poset.down_masks[x] for x in generators)
                    if covered != mask:
                        continue
                    if not BitsetHelper.is_subset(maxima, subset):
                        return False, cases, f"표준 분해를 포함하지 않는 표현: {poset.labels_of(subset)}"
                    antichain = not any(poset.comparable(x, y) for x, y in combinations(generators, 2))
                    if antichain and subset != maxima:
                        return False, cases, f"다른 표현이 있습니다: {poset.labels_of(subset)}"
        return True, cases, None

    # =========================
    # 2. Birkhoff
    # =========================

    def check_birkhoff(self) -> Outcome:
        """η 가 격자 동형이고 J(𝒪(P)) ≅ P"""
        cases = 0
        for poset in self.poset_service.all_posets_up_to(5):
            cases += 1
            lattice = self.ideal_service.as_lattice(self.ideal_service.all_down_sets(poset))
            result = self.ideal_service.birkhoff_eta(lattice)
            if not self.poset_service.is_isomorphic(result.irreducible_poset, poset).isomorphic:
                return False, cases, f"J(O(P)) 가 P 와 동형이 아닙니다 (|P|={poset.size})"
        return True, cases, None

    # =========================
    # 3. amalgamation
    # =========================

    def check_amalgamation(self, count: int = 500) -> Outcome:
        rng = self._rng(3)
        for case in range(count):
            a_size = int(rng.integers(1, 4))
            apex_target = self._random_poset(rng, a_size)
            f = self._random_quotient(rng, apex_target, int(rng.integers(0, 5 - a_size)), "b")
            g = self._random_quotient(rng, apex_target, int(rng.integers(0, 5 - a_size)), "c")
            square = self.quotient_service.amalgamate(f, g)
            left = f.assignment[square.f_prime.assignment[square.q.assignment]]
            right = g.assignment[square.g_prime.assignment[square.p.assignment]]
            if not np.array_equal(left, right):
                return False, case + 1, f"사각형이 가환하지 않습니다 (case {case})"
            for name, arrow in (("q", square.q), ("p", square.p), ("f′", square.f_prime), ("g′", square.g_prime)):
                if not self.quotient_service.classify(arrow).is_quotient:
                    return False, case + 1, f"{name} 가 quotient 가 아닙니다 (case {case})"
        return True, count, None

    # =========================
    # 4. 레벨 구조
    # =========================

    def check_level_structure(self, max_depth: int = 4) -> Outcome:
        cases = 0
        for n in range(1, max_depth + 1):
            level = self.universal_service.level(n)
            cases += 1
            if level.size != 4 ** n:
                return False, cases, f"|P_{n}| = {level.size}"
            literal = self.universal_service.literal_level(n)
            if len(self.poset_service.two_components(literal)) != 2 * 4 ** (n - 1):
                return False, cases, f"P_{n} 의 2-component 수가 다릅니다"
            if self.poset_service.isolated_points(literal):
                return False, cases, f"P_{n} 에 고립점이 있습니다"
            lows, highs = literal.strict_pairs()
            expected_lows, expected_highs = level.strict_pairs()
            if not (np.array_equal(lows, expected_lows) and np.array_equal(highs, expected_highs)):
                return False, cases, f"P_{n} 의 순서 절 계산과 구조 계산이 다릅니다"

        for k in range(1, max_depth):
            for m in range(k + 1, max_depth + 1):
                d = m - k
                expected = (2 ** (d - 1) * (2 ** d - 1),) * 2 + (2 ** d,)
                for x, y in self.universal_service.level(k).components():
                    cases += 1
                    label = self.universal_service.level(k).label(x)
                    fiber = self.universal_service.fiber_pairs(m, k, label)
                    if fiber.counts() != expected or sum(fiber.counts()) != 4 ** d:
                        return False, cases, f"m={m}, k={k}, {label}: 쌍 수 {fiber.counts()} ≠ {expected}"
                    for endpoint, family in ((x, fiber.lower_type), (y, fiber.upper_type)):
                        canonical = self.universal_service.canonical_pairs(m, k, self.universal_service.level(k).label(endpoint))
                        rows = {tuple(row) for row in family.tolist()}
                        if len(canonical) != 2 ** (d - 1) or not all(tuple(row) in rows for row in canonical.tolist()):
                            return False, cases, f"m={m}, k={k}: x⌢2⌢t 쌍 가족이 다릅니다"
                    if self.universal_service.fiber_has_isolated(m, k, label):
                        return False, cases, f"m={m}, k={k}: fiber 에 고립점이 있습니다"
        return True, cases, None

    # =========================
    # 5. 확장 solver
    # =========================

    def check_extension_solver(self, count: int = 200) -> Outcome:
        """|H| ≤ 6 (k=1), k=2 는 P_2 사본에 원소 몇 개를 더한 H"""
        rng = self._rng(5)
        bound = self.settings.solver_depth_bound
        for case in range(count):
            k = 2 if case % 10 == 9 else 1
            p = self._random_quotient(rng, self.universal_service.level(k), int(rng.integers(0, 3)))
            m, solution = self.universal_service.solve_extension(p, "global", depth_bound=bound)
            relation_size = p.domain.relation_size()
            least = k + 1
            while 2 ** (least - k - 1) <= relation_size:
                least += 1
            if m != least:
                return False, case + 1, f"m={m} 이지만 가장 작은 m 은 {least} (case {case})"
            if not np.array_equal(p.assignment[solution.assignment], solution.domain.codes // 4 ** (m - k)):
                return False, case + 1, f"p∘g ≠ p_k^m (case {case})"
            if not self.universal_service.check_absorption(p, "per_component"):
                return False, case + 1, f"per_component 결과가 삼각형을 만족하지 않습니다 (case {case})"
        return True, count, None

    # =========================
    # 6. 유도 사상
    # =========================

    @staticmethod
    def _set_partitions(size: int):
        """restricted growth string 으로 나열한 {0..size-1} 의 분할"""
        if size == 0:
            yield ()
            return

        def grow(prefix: List[int], blocks: int):
            if len(prefix) == size:
                yield tuple(prefix)
                return
            for block in range(blocks + 1):
                yield from grow(prefix + [block], max(blocks, block + 1))

        yield from grow([0], 1)

    def _quotients_of(self, domain: FinitePoset) -> List[PosetMap]:
        """
        domain 의 모든 quotient (codomain 동형 사본은 하나씩)

        quotient 의 codomain 순서는 fiber 분할 위의 image 관계와 같으므로
        분할마다 image 관계가 부분순서인지만 보면 됩니다.
        """
        lows, highs = np.nonzero(domain.le)
        result = []
        for blocks in self._set_partitions(domain.size):
            assignment = np.asarray(blocks, dtype=np.int64)
            count = int(assignment.max()) + 1
            relation = np.zeros((count, count), dtype=bool)
            relation[assignment[lows], assignment[highs]] = True
            codomain = FinitePoset([f"b{i}" for i in range(count)], relation)
            if self.poset_service.validate(codomain).ok:
                result.append(PosetMap(domain, codomain, assignment))
        return result

    def _induced_outcome(self, p: PosetMap) -> Optional[str]:
        """p̂ 의 성질 하나라도 어긋나면 사유"""
        induced = self.quotient_service.induce(p)
        domain_ideals, codomain_ideals = induced.domain_ideals, induced.codomain_ideals
        images = [induced(mask) for mask in domain_ideals.ideals]
        for i, a in enumerate(domain_ideals.ideals):
            for j in range(i, domain_ideals.count):
                if induced(a | domain_ideals.ideals[j]) != images[i] | images[j]:
                    return "join 을 보존하지 않습니다"
        for x in range(p.domain.size):
            if induced(p.domain.down_masks[x]) != p.codomain.down_masks[p(x)]:
                return "principal down-set 을 보존하지 않습니다"
        lattice_map = PosetMap(domain_ideals.as_poset(), codomain_ideals.as_poset(), induced.table)
        if not self.quotient_service.classify(lattice_map).is_quotient:
            return "p̂ 가 quotient 가 아닙니다"
        criterion, _ = self.quotient_service.meet_preservation_criterion(p)
        preserved, _ = self.quotient_service.meets_preserved(induced)
        if criterion != preserved:
            return f"meet 판정 조건({criterion})과 전수 검사({preserved})가 다릅니다"
        return None

    def check_induced_maps(self, max_size: int = 5, samples: int = 300) -> Outcome:
        """
        |Q| ≤ max_size 인 모든 poset 의 모든 quotient 에 대해 p̂ 의 성질과 meet 판정 조건.
        합성 법칙은 quotient 쌍 표본으로 확인합니다.
        """
        cases = 0
        flat: List[PosetMap] = []
        for domain in self.poset_service.all_posets_up_to(max_size):
            for candidate in self._quotients_of(domain):
                cases += 1
                if not self.quotient_service.classify(candidate).is_quotient:
                    return False, cases, f"분할에서 만든 사상이 quotient 가 아닙니다: {candidate.assignment.tolist()}"
                reason = self._induced_outcome(candidate)
                if reason:
                    return False, cases, f"{reason}: {candidate.assignment.tolist()}"
                flat.append(candidate)
        logger.debug(f"🧮 |Q| ≤ {max_size} quotient {len(flat)} 개 전수 확인")

        rng = self._rng(6)
        followers_of: Dict[int, List[PosetMap]] = {}
        for _ in range(samples):
            first = flat[int(rng.integers(0, len(flat)))]
            if id(first.codomain) not in followers_of:
                followers_of[id(first.codomain)] = self._quotients_of(first.codomain)
            followers = followers_of[id(first.codomain)]
            second = followers[int(rng.integers(0, len(followers)))]
            composite = self.quotient_service.induce(self.quotient_service.compose(second, first))
            outer, inner = self.quotient_service.induce(second), self.quotient_service.induce(first)
            cases += 1
            for mask in inner.domain_ideals.ideals:
                if composite(mask) != outer(inner(mask)):
                    return False, cases, "(q∘p)^ ≠ q̂∘p̂"
        return True, cases, None

    # =========================
    # 7. thread solver
    # =========================

    def check_thread_solver(self, count: int = 100) -> Outcome:
        rng = self._rng(7)
        for case in range(count):
            system = self.limit_service.random_thread_system(rng, int(rng.integers(1, 7)), 8)
            thread = self.limit_service.solve_thread(system)
            for k in range(1, system.depth):
                if system.bond(k - 1, thread.entries[k]) != thread.entries[k - 1]:
                    return False, case + 1, f"결합 사상과 맞지 않는 thread (case {case}, level {k})"
        dead_end = self.limit_service.dead_end_system()
        try:
            self.limit_service.naive_greedy_thread(dead_end)
            return False, count + 1, "단순 탐욕이 막다른 체계에서 실패하지 않았습니다"
        except ThreadSystemError:
            pass
        if self.limit_service.solve_thread(dead_end).labels() != ["r", "a", "c"]:
            return False, count + 1, "막다른 체계의 thread 가 다릅니다"
        return True, count + 1, None

    # =========================
    # 8. ideal 극한 격자
    # =========================

    def check_ideal_limit_lattice(self, pair_count: int = 200, thread_count: int = 100) -> Outcome:
        depth = 2
        system = self.universal_service.p_system(depth)
        service = self.limit_service
        rng = self._rng(8)
        cases = 0
        for _ in range(pair_count):
            a = service.random_ideal_thread(system, rng)
            b = service.random_ideal_thread(system, rng)
            cases += 1
            if service.ideal_inf(a, b) != service.brute_force_inf(a, b):
                return False, cases, f"inf 불일치: {a.member_labels()} / {b.member_labels()}"
            if service.ideal_sup(a, b) != service.brute_force_sup(a, b):
                return False, cases, f"sup 불일치: {a.member_labels()} / {b.member_labels()}"

        checked = 0
        while checked < thread_count:
            a = service.random_ideal_thread(system, rng)
            if a.is_zero():
                continue
            checked += 1
            cases += 1
            atom = service.find_atom_below(a)
            if not (service.is_atom(atom) and service.thread_leq(atom, a) and service.is_compatible(atom)):
                return False, cases, f"atom 이 아닙니다: {atom.member_labels()}"
            parts = service.principal_decomposition(a)
            if service.ideal_lattice_sup(parts) != a or not all(service.thread_leq(part, a) for part in parts):
                return False, cases, f"principal 분해가 원래 thread 를 복원하지 않습니다: {a.member_labels()}"
        return True, cases, None

    # =========================
    # 9. 고립점
    # =========================

    def check_isolated_points(self, max_prefix: int = 5) -> Outcome:
        service = self.limit_service
        cases = 0
        for prefix in product(range(4), repeat=3):
            cases += 1
            witness = service.isolated_dense_witness(prefix)
            if witness.window(3) != prefix or not service.is_isolated(witness):
                return False, cases, f"cylinder {prefix} 의 고립점 후보가 고립점이 아닙니다"
        for length in range(3):
            for prefix in product(range(4), repeat=length):
                for tail in range(4):
                    point = SymbolicPoint(prefix, tail)
                    cases += 1
                    if service.is_isolated(point) != service.isolated_by_search(point, max_prefix):
                        return False, cases, f"{point} 의 고립 판정이 전수 탐색과 다릅니다"
        return True, cases, None

    # =========================
    # 10. ternary 표현
    # =========================

    def check_ternary_encoding(self) -> Outcome:
        ternary = self.ternary_service
        results = [
            ternary.verify_psi(1),
            ternary.verify_psi(2),
            ternary.verify_square(1),
            ternary.verify_square(2, samples=self.settings.sample_count),
            ternary.verify_composite(),
        ]
        failed = [result for result in results if not result.passed]
        cases = sum(result.cases for result in results)
        if failed:
            return False, cases, f"{failed[0].name}: {failed[0].detail}"
        return True, cases, None

    # =========================
    # 11. universal quotient
    # =========================

    def _random_system(self, rng: np.random.Generator, depth: int = 3, max_size: int = 4) -> InverseSystem:
        """|H_k| ≤ max_size 이고 결합 사상이 quotient 인 역계"""
        levels = [self._random_poset(rng, int(rng.integers(1, max_size + 1)))]
        steps = []
        for k in range(depth - 1):
            room = max_size - levels[-1].size
            step = self._random_quotient(rng, levels[-1], int(rng.integers(0, room + 1)), f"h{k + 1}_")
            levels.append(step.domain)
            steps.append(step)
        return InverseSystem(levels, steps, name="H")

    def check_universality(self, count: int = 50) -> Outcome:
        rng = self._rng(11)
        for case in range(count):
            system = self._random_system(rng)
            family = self.universal_service.build_universal_quotient(system)
            failures = self.universal_service.verify_family(family)
            if failures:
                return False, case + 1, f"{failures[0]} (case {case})"
            m, lift = self.universal_service.lift_through_quotient(family.maps[0], system.steps[0])
            if not self.universal_service.lift_commutes(family.maps[0], system.steps[0], m, lift):
                return False, case + 1, f"lift 삼각형이 가환하지 않습니다 (case {case})"
        return True, count, None
