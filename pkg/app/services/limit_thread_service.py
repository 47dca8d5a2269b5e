import logging
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import Settings, get_settings
from ..exceptions import PosetValidationError, SizeBoundError, ThreadSystemError
from ..models.level_model import LevelMapFamily, clause_leq
from ..models.map_model import InducedMap
from ..models.thread_model import (
    Comparison,
    IdealThread,
    InverseSystem,
    SymbolicPoint,
    Thread,
    ThreadSystem,
)
from ..utils.bitset_utils import BitsetHelper
from ..utils.random_utils import RandomHelper
from .ideal_lattice_service import IdealLatticeService

logger = logging.getLogger(__name__)


class LimitThreadService:
    """
    유한 깊이 역극한 계산

    - thread 비교와 선택 (solve_thread)
    - ℙ 의 끝이 상수인 점과 고립점 판정
    - ideal 역극한 𝕆(P) 의 sup / inf / atom / principal 분해 / 유도 사상
    """

    def __init__(self, settings: Optional[Settings] = None, ideal_service: Optional[IdealLatticeService] = None):
        self.settings = settings or get_settings()
        self.ideal_service = ideal_service or IdealLatticeService(self.settings)
        self._induced: Dict[Tuple[int, int], InducedMap] = {}
        self._tables: Dict[Tuple[int, int], Tuple[List[IdealThread], np.ndarray, np.ndarray]] = {}

    # =========================
    # thread
    # =========================

    def thread_order(self, x: Thread, y: Thread) -> Comparison:
        """모든 레벨에서 좌표별로 비교합니다"""
        if x.system is not y.system or x.depth != y.depth:
            raise PosetValidationError("같은 역계, 같은 깊이의 thread 만 비교할 수 있습니다")
        levels = x.system.levels
        below = all(levels[k].leq(a, b) for k, (a, b) in enumerate(zip(x.entries, y.entries)))
        above = all(levels[k].leq(b, a) for k, (a, b) in enumerate(zip(x.entries, y.entries)))
        return Comparison.from_flags(below, above)

    def thread_from_labels(self, system: InverseSystem, labels: Sequence[str]) -> Thread:
        return Thread(system, [system.levels[k].index_of(label) for k, label in enumerate(labels)])

    def _alive_sets(self, system: ThreadSystem) -> List[np.ndarray]:
        """A_i: 길이 i 호환 열의 마지막 좌표로 나타나는 원소들 (T_i 의 사영)"""
        alive = [np.ones(len(system.levels[0]), dtype=bool)]
        if not alive[0].any():
            raise ThreadSystemError("호환 집합 T_0 이 비어 있습니다", 0)
        for i, table in enumerate(system.maps):
            defined = table >= 0
            current = np.zeros(len(table), dtype=bool)
            current[defined] = alive[i][table[defined]]
            if not current.any():
                raise ThreadSystemError(f"호환 집합 T_{i + 1} 이 비어 있습니다", i + 1)
            alive.append(current)
        return alive

    def stable_sets(self, system: ThreadSystem) -> List[np.ndarray]:
        """
        V_k: 주어진 깊이까지 연장 가능한 k 번째 좌표들

        뒤에서부터 V_{N-1} = A_{N-1}, V_k = A_k ∩ q(V_{k+1}) 로 계산합니다.
        """
        alive = self._alive_sets(system)
        stable = [None] * system.depth
        stable[-1] = alive[-1]
        for k in range(system.depth - 2, -1, -1):
            reached = np.zeros(len(system.levels[k]), dtype=bool)
            table = system.maps[k]
            reached[table[stable[k + 1] & (table >= 0)]] = True
            stable[k] = alive[k] & reached
        return stable

    def solve_thread(self, system: ThreadSystem) -> Thread:
        """
        V_k 안에서만 고르는 탐욕 선택 (같은 조건이면 가장 작은 인덱스)

        Raises:
            ThreadSystemError: 어떤 T_i 가 비어 있음 (index 포함)
        """
        stable = self.stable_sets(system)
        entries = [int(np.nonzero(stable[0])[0][0])]
        for k in range(1, system.depth):
            candidates = np.nonzero(stable[k] & (system.maps[k - 1] == entries[-1]))[0]
            entries.append(int(candidates[0]))
        logger.debug(f"✅ thread 선택 완료: 깊이 {system.depth}")
        return Thread(system, entries)

    def naive_greedy_thread(self, system: ThreadSystem) -> Thread:
        """
        각 레벨에서 직전 좌표의 가장 작은 역상을 고르는 단순 탐욕 (비교용)

        Raises:
            ThreadSystemError: 막다른 원소에 도달한 레벨
        """
        if not system.levels[0]:
            raise ThreadSystemError("호환 집합 T_0 이 비어 있습니다", 0)
        entries = [0]
        for k in range(1, system.depth):
            candidates = np.nonzero(system.maps[k - 1] == entries[-1])[0]
            if not candidates.size:
                raise ThreadSystemError(f"레벨 {k} 에서 {system.levels[k - 1][entries[-1]]} 의 역상이 없습니다", k)
            entries.append(int(candidates[0]))
        return Thread(system, entries)

    def random_thread_system(self, rng: np.random.Generator, depth: int, width: int, partial: float = 0.15) -> ThreadSystem:
        """
        모든 T_i 가 비어 있지 않은 무작위 집합 열

        일부 원소는 상이 없어 막다른 원소가 생기지만 각 레벨에 적어도 하나는 연장됩니다.
        """
        sizes = rng.integers(1, width + 1, size=depth)
        levels = [[f"g{i}_{x}" for x in range(int(size))] for i, size in enumerate(sizes)]
        maps = []
        for i in range(depth - 1):
            table = rng.integers(0, int(sizes[i]), size=int(sizes[i + 1]))
            dropped = rng.random(int(sizes[i + 1])) < partial
            dropped[int(rng.integers(0, int(sizes[i + 1])))] = False
            table[dropped] = -1
            maps.append(table)
        system = ThreadSystem(levels, maps)
        try:
            self._alive_sets(system)
        except ThreadSystemError:
            return self.random_thread_system(rng, depth, width, partial=0.0)
        return system

    def dead_end_system(self) -> ThreadSystem:
        """레벨 1 의 가장 작은 원소 b 가 다음 레벨에 역상이 없는 체계"""
        return ThreadSystem.from_labels(
            [["r"], ["b", "a"], ["c"]],
            [{"b": "r", "a": "r"}, {"c": "a"}],
        )

    # =========================
    # ℙ 의 끝이 상수인 점
    # =========================

    def symbolic_leq(self, x: SymbolicPoint, y: SymbolicPoint) -> bool:
        """
        공통 접두부 + 1 길이 창에서 순서 절을 평가합니다.

        창 밖 좌표는 두 tail 이므로 x ≠ y 인 관계는 tail 이 같고 {0,1} 에 있어야 합니다.
        """
        if x == y:
            return True
        if x.tail != y.tail or x.tail not in (0, 1):
            return False
        window = max(len(x.prefix), len(y.prefix)) + 1
        return clause_leq(x.window(window), y.window(window))

    def symbolic_compare(self, x: SymbolicPoint, y: SymbolicPoint) -> Comparison:
        return Comparison.from_flags(self.symbolic_leq(x, y), self.symbolic_leq(y, x))

    def comparability_candidates(self, x: SymbolicPoint) -> List[SymbolicPoint]:
        """
        x 와 비교 가능할 수 있는 모든 모양: 창 안의 한 좌표만 바꾼 점들

        두 절 모두 정확히 한 좌표에서만 다른 쌍을 관계 짓습니다.
        """
        window = x.window(len(x.prefix) + 1)
        candidates = []
        for position in range(len(window)):
            for digit in range(4):
                if digit != window[position]:
                    changed = list(window)
                    changed[position] = digit
                    candidates.append(SymbolicPoint(changed, x.tail))
        return candidates

    def is_isolated(self, x: SymbolicPoint) -> bool:
        return not any(
            self.symbolic_compare(x, y) is not Comparison.INCOMPARABLE
            for y in self.comparability_candidates(x)
        )

    def isolated_by_search(self, x: SymbolicPoint, max_prefix: int) -> bool:
        """prefix 길이 ≤ max_prefix 인 모든 점과 비교하는 전수 탐색 (검증용)"""
        for length in range(max_prefix + 1):
            for prefix in product(range(4), repeat=length):
                for tail in range(4):
                    y = SymbolicPoint(prefix, tail)
                    if y != x and self.symbolic_compare(x, y) is not Comparison.INCOMPARABLE:
                        return False
        return True

    def isolated_dense_witness(self, prefix: Sequence[int]) -> SymbolicPoint:
        """cylinder [prefix] 안의 고립점 prefix·2^ω"""
        return SymbolicPoint(prefix, 2)

    # =========================
    # ideal thread
    # =========================

    def _step_map(self, system: InverseSystem, k: int) -> InducedMap:
        key = (id(system), k)
        if key not in self._induced:
            self._induced[key] = InducedMap(system.steps[k])
        return self._induced[key]

    def ideal_step(self, system: InverseSystem, k: int, mask: int) -> int:
        """p̂_k^{k+1}: levels[k+1] 의 down-set → levels[k] 의 down-set"""
        return self._step_map(system, k).action(mask)

    def ideal_thread_from_last(self, system: InverseSystem, last: int, depth: Optional[int] = None) -> IdealThread:
        """마지막 좌표 a_N 에서 p̂ 로 내려가며 나머지 좌표를 채웁니다"""
        depth = depth or system.depth
        if not system.levels[depth - 1].is_down_set(last):
            raise PosetValidationError("마지막 좌표가 down-set 이 아닙니다")
        entries = [0] * depth
        entries[-1] = last
        for k in range(depth - 2, -1, -1):
            entries[k] = self.ideal_step(system, k, entries[k + 1])
        return IdealThread(system, entries)

    def is_compatible(self, thread: IdealThread) -> bool:
        system = thread.system
        return all(system.levels[k].is_down_set(entry) for k, entry in enumerate(thread.entries)) and all(
            self.ideal_step(system, k, thread.entries[k + 1]) == thread.entries[k]
            for k in range(thread.depth - 1)
        )

    def require_compatible(self, thread: IdealThread) -> IdealThread:
        if not self.is_compatible(thread):
            raise PosetValidationError("결합 사상 p̂ 과 호환되지 않는 ideal thread 입니다")
        return thread

    def zero_thread(self, system: InverseSystem, depth: Optional[int] = None) -> IdealThread:
        return IdealThread(system, [0] * (depth or system.depth))

    def top_thread(self, system: InverseSystem, depth: Optional[int] = None) -> IdealThread:
        depth = depth or system.depth
        return IdealThread(system, [system.levels[k].full_mask for k in range(depth)])

    def principal_thread(self, system: InverseSystem, x, depth: Optional[int] = None) -> IdealThread:
        """(↓x_1, ..., ↓x_N), x_N = x (라벨 또는 인덱스), x_k = p_k^N(x)"""
        depth = depth or system.depth
        last = system.levels[depth - 1]
        index = x if isinstance(x, (int, np.integer)) else last.index_of(x)
        return IdealThread(
            system,
            [system.levels[k].down_masks[int(system.composite(k, depth - 1)[index])] for k in range(depth)],
        )

    def random_ideal_thread(self, system: InverseSystem, rng: np.random.Generator, depth: Optional[int] = None) -> IdealThread:
        depth = depth or system.depth
        last = RandomHelper.random_down_mask(rng, system.levels[depth - 1].down_masks)
        return self.ideal_thread_from_last(system, last, depth)

    def all_ideal_threads(self, system: InverseSystem, depth: Optional[int] = None) -> List[IdealThread]:
        """깊이 N thread 전체 (마지막 좌표로 결정됨, 검증용)"""
        depth = depth or system.depth
        ideals = self.ideal_service.all_down_sets(system.levels[depth - 1])
        return [self.ideal_thread_from_last(system, mask, depth) for mask in ideals.ideals]

    @staticmethod
    def thread_leq(a: IdealThread, b: IdealThread) -> bool:
        return all(BitsetHelper.is_subset(x, y) for x, y in zip(a.entries, b.entries))

    @staticmethod
    def _same_shape(a: IdealThread, b: IdealThread):
        if a.depth != b.depth or a.system is not b.system:
            raise PosetValidationError(f"깊이가 다른 thread 입니다 ({a.depth}, {b.depth})")

    def ideal_sup(self, a: IdealThread, b: IdealThread) -> IdealThread:
        """좌표별 합집합"""
        self._same_shape(a, b)
        return IdealThread(a.system, [x | y for x, y in zip(a.entries, b.entries)])

    def ideal_lattice_sup(self, family: Sequence[IdealThread]) -> IdealThread:
        """유한 모임의 좌표별 합집합"""
        if not family:
            raise PosetValidationError("빈 모임의 sup 은 깊이를 정할 수 없습니다")
        result = family[0]
        for thread in family[1:]:
            result = self.ideal_sup(result, thread)
        return result

    def ideal_inf(
        self, a: IdealThread, b: IdealThread, depth: Optional[int] = None, lookahead: Optional[int] = None
    ) -> IdealThread:
        """
        깊이 M (lookahead, 기본 N) thread 들 가운데 a, b 의 하계 중 가장 큰 것을 구해 N 으로 자릅니다.

        r_1 은 하계 thread 들의 첫 좌표 중 가장 큰 것, r_2 는 r_1 을 잇는 것 중 가장 큰 것, ...
        하계들의 합집합도 하계이므로 각 단계의 최댓값은 마지막 좌표
        S = {x ∈ a_M ∩ b_M : 모든 k 에서 p_k^M(x) ∈ a_k ∩ b_k} 의 상 p̂_k^M(S) 로 한 번에 얻습니다.
        """
        depth = depth or a.depth
        horizon = lookahead or depth
        if horizon < depth:
            raise PosetValidationError(f"lookahead {horizon} 는 깊이 {depth} 이상이어야 합니다")
        if a.depth < horizon or b.depth < horizon or a.system is not b.system:
            raise PosetValidationError(f"깊이 {horizon} 의 같은 역계 thread 가 필요합니다")
        system = a.system
        meets = [x & y for x, y in zip(a.entries[:horizon], b.entries[:horizon])]
        last = horizon - 1
        survivors = 0
        for x in BitsetHelper.iter_indices(meets[last]):
            if all(meets[k] >> int(system.composite(k, last)[x]) & 1 for k in range(last)):
                survivors |= 1 << x
        return self.ideal_thread_from_last(system, survivors, horizon).truncated(depth)

    def ideal_inf_stable(
        self, a: IdealThread, b: IdealThread, depth: int, max_lookahead: int
    ) -> Tuple[List[IdealThread], bool]:
        """lookahead N..max 에서의 결과 목록과 모두 같은지 여부"""
        results = [self.ideal_inf(a, b, depth, horizon) for horizon in range(depth, max_lookahead + 1)]
        stable = all(result == results[0] for result in results)
        if not stable:
            logger.info(f"⚠️ lookahead 에 따라 inf 가 달라집니다 (depth={depth}, max={max_lookahead})")
        return results, stable

    def _thread_table(self, system: InverseSystem, depth: int) -> Tuple[List[IdealThread], np.ndarray, np.ndarray]:
        """
        깊이 N thread 전체를 (목록, 좌표 배열, 원소 수 합) 으로 캐시합니다.

        Raises:
            SizeBoundError: 레벨 크기가 62 를 넘어 int64 비트셋으로 담을 수 없음
        """
        key = (id(system), depth)
        if key not in self._tables:
            widest = max(system.levels[k].size for k in range(depth))
            if widest > 62:
                raise SizeBoundError("전수 thread 표 레벨", widest, 62)
            threads = self.all_ideal_threads(system, depth)
            entries = np.array([thread.entries for thread in threads], dtype=np.int64)
            weights = np.array([sum(BitsetHelper.popcount(e) for e in thread.entries) for thread in threads])
            self._tables[key] = (threads, entries, weights)
        return self._tables[key]

    @staticmethod
    def _below(entries: np.ndarray, bound: Sequence[int]) -> np.ndarray:
        """entries 의 각 행이 bound 에 좌표별로 포함되는지"""
        return ((entries & ~np.asarray(bound, dtype=np.int64)) == 0).all(axis=1)

    @staticmethod
    def _above(entries: np.ndarray, bound: Sequence[int]) -> np.ndarray:
        return ((np.asarray(bound, dtype=np.int64) & ~entries) == 0).all(axis=1)

    def brute_force_inf(self, a: IdealThread, b: IdealThread) -> Optional[IdealThread]:
        """깊이 N 하계 전체를 열거해 최대 원소를 찾습니다 (없으면 None)"""
        threads, entries, weights = self._thread_table(a.system, a.depth)
        lower = np.nonzero(self._below(entries, a.entries) & self._below(entries, b.entries))[0]
        candidate = int(lower[np.argmax(weights[lower])])
        if not self._below(entries[lower], entries[candidate]).all():
            return None
        return threads[candidate]

    def brute_force_sup(self, a: IdealThread, b: IdealThread) -> Optional[IdealThread]:
        threads, entries, weights = self._thread_table(a.system, a.depth)
        upper = np.nonzero(self._above(entries, a.entries) & self._above(entries, b.entries))[0]
        candidate = int(upper[np.argmin(weights[upper])])
        if not self._above(entries[upper], entries[candidate]).all():
            return None
        return threads[candidate]

    # =========================
    # atom, principal 분해
    # =========================

    def find_atom_below(self, a: IdealThread) -> IdealThread:
        """
        좌표마다 연장 가능한 값 중 극소인 것을 고르고 (여럿이면 가장 작은 인덱스) 이어 갑니다.

        후보는 마지막 레벨에서 a_N 의 극소 원소 x 이고 k 번째 좌표 값은 ↓p_k^N(x) 입니다.
        """
        if a.is_zero():
            raise PosetValidationError("0 thread 아래에는 atom 이 없습니다")
        system, depth = a.system, a.depth
        last = depth - 1
        candidates = BitsetHelper.to_indices(system.levels[last].minimal_in(a.entries[last]))
        for k in range(depth):
            table = system.composite(k, last)
            values = {x: system.levels[k].down_masks[int(table[x])] for x in candidates}
            distinct = sorted(set(values.values()), key=BitsetHelper.sort_key)
            minimal = [v for v in distinct if not any(w != v and BitsetHelper.is_subset(w, v) for w in distinct)]
            chosen = minimal[0]
            candidates = [x for x in candidates if values[x] == chosen]
        return self.principal_thread(system, candidates[0], depth)

    def is_atom(self, thread: IdealThread) -> bool:
        """0 이 아니고 더 작은 0 아닌 깊이 N thread 가 없는지 전수 확인"""
        if thread.is_zero():
            return False
        _, entries, weights = self._thread_table(thread.system, thread.depth)
        smaller = self._below(entries, thread.entries) & (weights > 0) & (weights < sum(
            BitsetHelper.popcount(entry) for entry in thread.entries
        ))
        return not smaller.any()

    def principal_decomposition(self, a: IdealThread) -> List[IdealThread]:
        """
        각 레벨 n 의 canonical decomposition 조각 ↓t 마다 t 를 지나는 principal thread 를 만듭니다.

        n 보다 깊은 좌표는 a 의 극대 원소 중에서 solve_thread 로 고릅니다.
        결과의 좌표별 합집합은 a 와 같습니다.
        """
        if a.is_zero():
            raise PosetValidationError("0 thread 는 분해할 수 없습니다")
        system, depth = a.system, a.depth
        maxima = [BitsetHelper.to_indices(system.levels[k].maximal_in(a.entries[k])) for k in range(depth)]
        family: List[IdealThread] = []
        seen = set()
        for n in range(depth):
            for t in maxima[n]:
                levels = [[system.levels[n].elements[t]]] + [
                    [system.levels[j].elements[x] for x in maxima[j]] for j in range(n + 1, depth)
                ]
                tables = []
                for j in range(n, depth - 1):
                    below = [t] if j == n else maxima[j]
                    positions = {x: i for i, x in enumerate(below)}
                    tables.append([positions.get(system.steps[j](x), -1) for x in maxima[j + 1]])
                chosen = self.solve_thread(ThreadSystem(levels, tables))
                top = maxima[depth - 1][chosen.entries[-1]] if depth - 1 > n else t
                thread = self.principal_thread(system, top, depth)
                if thread not in seen:
                    seen.add(thread)
                    family.append(thread)
        return family

    # =========================
    # 유도 극한 사상
    # =========================

    def induced_limit_quotient(self, family: LevelMapFamily, a: IdealThread) -> IdealThread:
        """
        q(a)_l = ⋃ { ↓f_l(x) : ↓x 는 a_{i_l} 의 canonical decomposition 조각 }

        Raises:
            PosetValidationError: a 가 family 의 마지막 레벨 i_N 보다 얕음
        """
        if a.depth < family.indices[-1]:
            raise PosetValidationError(f"thread 깊이 {a.depth} 가 레벨 {family.indices[-1]} 보다 얕습니다")
        target = InverseSystem(family.targets, family.steps, name="H")
        entries = [InducedMap(level_map).action(a.entries[index - 1]) for index, level_map in zip(family.indices, family.maps)]
        return IdealThread(target, entries)
