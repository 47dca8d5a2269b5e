from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from ..exceptions import PosetValidationError
from .base import ValueModel
from .poset_model import FinitePoset, PairArrays, PosetBase, PosetMap

ALPHABET = (0, 1, 2, 3)


def word_to_code(word: Sequence[int]) -> int:
    code = 0
    for digit in word:
        code = code * 4 + int(digit)
    return code


def code_to_word(code: int, n: int) -> Tuple[int, ...]:
    digits = []
    for _ in range(n):
        digits.append(code % 4)
        code //= 4
    return tuple(reversed(digits))


def parse_word(text: str) -> Tuple[int, ...]:
    """'0123' 또는 '0,1,2,3' 형식의 단어"""
    cleaned = text.replace(",", "").replace(" ", "").strip("()")
    if not cleaned or any(ch not in "0123" for ch in cleaned):
        raise PosetValidationError(f"{{0,1,2,3}} 위의 단어가 아닙니다: {text!r}")
    return tuple(int(ch) for ch in cleaned)


def clause_leq(x: Sequence[int], y: Sequence[int]) -> bool:
    """
    P_n 순서 절을 그대로 평가합니다.

    x ≤ y 인 경우:
    - x = y
    - (i)  어떤 l 에서 앞부분이 같고 x(l)=2, y(l)=3, 이후 좌표는 같고 {0,1} 안에 있음
    - (ii) x(0)=0, y(0)=1, 나머지 좌표는 같고 {0,1} 안에 있음
    """
    n = len(x)
    if len(y) != n:
        raise PosetValidationError("길이가 다른 단어는 비교할 수 없습니다")
    if tuple(x) == tuple(y):
        return True
    for split in range(n):
        if tuple(x[:split]) != tuple(y[:split]):
            break
        if x[split] == 2 and y[split] == 3 and all(
            x[k] == y[k] and x[k] in (0, 1) for k in range(split + 1, n)
        ):
            return True
    return bool(
        n
        and x[0] == 0
        and y[0] == 1
        and all(x[k] == y[k] and x[k] in (0, 1) for k in range(1, n))
    )


class UniversalLevel(PosetBase):
    """
    P_n = {0,1,2,3}^n

    원소 인덱스는 단어의 4진수 값(사전순)입니다.
    모든 원소는 정확히 하나의 짝(partner)과 비교 가능하고 2-chain 들의 서로소 합이 됩니다.
    짝은 마지막 2/3 좌표를 2↔3 으로 바꾼 단어이고, 2/3 좌표가 없으면 첫 좌표를 0↔1 로 바꾼 단어입니다.
    """

    _fields = ("n",)

    def __init__(self, n: int):
        if n < 1:
            raise PosetValidationError("레벨 깊이는 1 이상이어야 합니다")
        self.n = n
        count = 4 ** n
        codes = np.arange(count, dtype=np.int64)
        flip_position = np.zeros(count, dtype=np.int64)
        for position in range(n):
            digit = (codes // 4 ** (n - 1 - position)) % 4
            flip_position = np.where(digit >= 2, position, flip_position)
        weight = 4 ** (n - 1 - flip_position)
        flip_digit = (codes // weight) % 4
        is_lower = flip_digit % 2 == 0
        partner = codes + np.where(is_lower, weight, -weight)
        is_lower.flags.writeable = False
        partner.flags.writeable = False
        self.codes = codes
        self.partner = partner
        self.is_lower = is_lower

    @property
    def size(self) -> int:
        return 4 ** self.n

    @cached_property
    def elements(self) -> Tuple[str, ...]:
        return tuple(self.label(code) for code in range(self.size))

    def index_of(self, label) -> int:
        word = parse_word(str(label))
        if len(word) != self.n:
            raise PosetValidationError(f"P_{self.n} 의 원소가 아닙니다: {label}")
        return word_to_code(word)

    def word(self, index: int) -> Tuple[int, ...]:
        return code_to_word(index, self.n)

    def label(self, index: int) -> str:
        return "".join(str(digit) for digit in self.word(index))

    def leq(self, i: int, j: int) -> bool:
        return i == j or (bool(self.is_lower[i]) and int(self.partner[i]) == j)

    def leq_many(self, lows: np.ndarray, highs: np.ndarray) -> np.ndarray:
        lows = np.asarray(lows, dtype=np.int64)
        highs = np.asarray(highs, dtype=np.int64)
        return (lows == highs) | (self.is_lower[lows] & (self.partner[lows] == highs))

    @cached_property
    def _strict(self) -> PairArrays:
        lows = self.codes[self.is_lower]
        return lows, self.partner[lows]

    def strict_pairs(self) -> PairArrays:
        return self._strict

    def components(self) -> List[Tuple[int, int]]:
        """2-component (아래, 위) 목록, 아래 끝점 사전순"""
        lows, highs = self._strict
        return list(zip(lows.tolist(), highs.tolist()))

    @property
    def component_count(self) -> int:
        return 2 * 4 ** (self.n - 1)

    def relation_size(self) -> int:
        return self.size + self.component_count

    def to_finite_poset(self) -> FinitePoset:
        matrix = np.eye(self.size, dtype=bool)
        lows, highs = self._strict
        matrix[lows, highs] = True
        return FinitePoset(self.elements, matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniversalLevel) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("P", self.n))


class LevelMapFamily(ValueModel):
    """
    목표 역계 (H_k, h_k^{k+1}) 로 가는 레벨 사상 모음

    indices[k] = i_k 이고 maps[k] 는 P_{i_k} → H_k quotient 입니다.
    steps[k] 는 H_{k+1} → H_k 결합 사상입니다.
    """

    _fields = ("indices",)

    def __init__(self, indices: Sequence[int], maps: Sequence[PosetMap], steps: Sequence[PosetMap]):
        if len(indices) != len(maps) or len(steps) != max(len(maps) - 1, 0):
            raise PosetValidationError("indices / maps / steps 길이가 맞지 않습니다")
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise PosetValidationError("레벨 인덱스는 증가해야 합니다")
        self.indices = [int(index) for index in indices]
        self.maps = list(maps)
        self.steps = list(steps)

    @property
    def depth(self) -> int:
        return len(self.maps)

    @property
    def targets(self) -> List[PosetBase]:
        return [level_map.codomain for level_map in self.maps]


class FiberPairs(ValueModel):
    """
    P_k 의 component (lower < upper) 위에 놓인 P_m 의 strict 쌍들

    각 배열은 (아래 코드, 위 코드) 행들이며 아래 끝점 사전순입니다.
    - lower_type: 두 끝점 모두 lower 로 감 (L)
    - upper_type: 두 끝점 모두 upper 로 감 (U)
    - cross_type: 아래 끝점은 lower, 위 끝점은 upper 로 감 (LU)
    """

    _fields = ("m", "k", "component")

    def __init__(self, m: int, k: int, component: Tuple[int, int],
                 lower_type: np.ndarray, upper_type: np.ndarray, cross_type: np.ndarray):
        self.m = m
        self.k = k
        self.component = component
        self.lower_type = lower_type
        self.upper_type = upper_type
        self.cross_type = cross_type

    def counts(self) -> Tuple[int, int, int]:
        return len(self.lower_type), len(self.upper_type), len(self.cross_type)
