from typing import List, Sequence, Tuple

import numpy as np


class RandomHelper:
    """
    시드 기반 무작위 생성 유틸리티 클래스

    모든 무작위 동작은 numpy SeedSequence 에서 파생되므로
    같은 seed 와 salt 는 항상 같은 결과를 냅니다.
    """

    @staticmethod
    def rng(seed: int, *salt: int) -> np.random.Generator:
        """seed 와 salt 로 결정되는 Generator"""
        return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(s) for s in salt]]))

    @staticmethod
    def sub_seeds(seed: int, count: int, *salt: int) -> List[np.random.SeedSequence]:
        """파티션별 하위 시드 (병렬 샘플 검증용)"""
        return np.random.SeedSequence([int(seed), *[int(s) for s in salt]]).spawn(count)

    @staticmethod
    def transitive_closure(relation: np.ndarray) -> np.ndarray:
        closure = relation.copy()
        while True:
            step = closure | ((closure.astype(np.int64) @ closure.astype(np.int64)) > 0)
            if np.array_equal(step, closure):
                return closure
            closure = step

    @staticmethod
    def random_order_matrix(rng: np.random.Generator, size: int, density: float = None) -> np.ndarray:
        """
        무작위 부분순서 행렬

        무작위 순열 위의 상삼각 관계를 만든 뒤 전이 닫힘을 취합니다.
        """
        if density is None:
            density = float(rng.uniform(0.1, 0.7))
        upper = np.triu(rng.random((size, size)) < density, k=1)
        closed = RandomHelper.transitive_closure(upper | np.eye(size, dtype=bool))
        permutation = rng.permutation(size)
        return closed[np.ix_(permutation, permutation)]

    @staticmethod
    def random_quotient_relation(
        rng: np.random.Generator, target_le: np.ndarray, extra: int
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        target 위로 가는 무작위 quotient 의 (domain 관계 행렬, assignment)

        domain 은 target 원소의 사본들과 extra 개의 추가 원소로 이루어집니다.
        - 서로 다른 fiber 사이: p(u) < p(v) 이고 below(u), above(v) 일 때만 u < v (사본은 둘 다 참)
        - 같은 fiber 안: 추가 원소는 사본 아래(below 필요) 또는 위(above 필요)에 붙을 수 있음
        사본들이 모든 관계를 들어 올리므로 결과는 항상 quotient 입니다.
        """
        target_size = target_le.shape[0]
        size = target_size + extra
        images = np.concatenate([np.arange(target_size), rng.integers(0, target_size, size=extra)])
        below = np.concatenate([np.ones(target_size, dtype=bool), rng.random(extra) < 0.6])
        above = np.concatenate([np.ones(target_size, dtype=bool), rng.random(extra) < 0.6])
        strict_target = target_le & ~np.eye(target_size, dtype=bool)
        relation = strict_target[np.ix_(images, images)] & below[:, None] & above[None, :]
        relation |= np.eye(size, dtype=bool)
        for offset in range(extra):
            element = target_size + offset
            copy = int(images[element])
            choice = rng.random()
            if choice < 0.3 and below[element]:
                relation[element, copy] = True
            elif choice < 0.6 and above[element]:
                relation[copy, element] = True
        return RandomHelper.transitive_closure(relation), images.astype(np.int64)

    @staticmethod
    def random_down_mask(rng: np.random.Generator, down_masks: Sequence[int]) -> int:
        """무작위 부분집합의 아래 닫힘"""
        probability = float(rng.uniform(0.0, 0.6))
        chosen = np.nonzero(rng.random(len(down_masks)) < probability)[0]
        mask = 0
        for index in chosen.tolist():
            mask |= down_masks[index]
        return mask
