from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import EncodingError
from .base import ValueModel
from .level_model import code_to_word, parse_word, word_to_code


class ComponentIndex(ValueModel):
    """
    T_n = {c ∈ {0,1,2,3}^n : c(0) ∈ {0,1}} 와 P_n 의 2-component 대응

    T_1 의 0, 1 은 P_1 의 {0<1}, {2<3} 입니다.
    c 가 {x<y} 를 가리키면
    - c⌢0 → {x0 < y0}, c⌢1 → {x1 < y1}  (둘 다 {x, y} 위로 가는 component)
    - c⌢2 → {x2 < x3}  (x 로 가는 component)
    - c⌢3 → {y2 < y3}  (y 로 가는 component)
    T_n 의 사전순 순위는 단어의 4진수 값과 같습니다.
    """

    _fields = ("n",)

    def __init__(self, n: int):
        if n < 1:
            raise EncodingError("깊이는 1 이상이어야 합니다")
        lower = np.array([0, 2], dtype=np.int64)
        upper = np.array([1, 3], dtype=np.int64)
        for _ in range(n - 1):
            next_lower = np.stack([4 * lower, 4 * lower + 1, 4 * lower + 2, 4 * upper + 2], axis=1)
            next_upper = np.stack([4 * upper, 4 * upper + 1, 4 * lower + 3, 4 * upper + 3], axis=1)
            lower, upper = next_lower.reshape(-1), next_upper.reshape(-1)
        self.n = n
        self.lower = lower
        self.upper = upper
        self.lower.flags.writeable = False
        self.upper.flags.writeable = False

    @property
    def count(self) -> int:
        return 2 * 4 ** (self.n - 1)

    def word(self, rank: int) -> Tuple[int, ...]:
        return code_to_word(rank, self.n)

    def label(self, rank: int) -> str:
        return "".join(str(digit) for digit in self.word(rank))

    def rank_of(self, label: str) -> int:
        word = parse_word(label)
        if len(word) != self.n or word[0] not in (0, 1):
            raise EncodingError(f"T_{self.n} 의 단어가 아닙니다: {label}")
        return word_to_code(word)

    @cached_property
    def component_of(self) -> np.ndarray:
        """P_n 원소 코드 → 그 원소가 속한 component 순위"""
        table = np.empty(4 ** self.n, dtype=np.int64)
        ranks = np.arange(self.count, dtype=np.int64)
        table[self.lower] = ranks
        table[self.upper] = ranks
        table.flags.writeable = False
        return table

    def labels(self) -> List[str]:
        return [self.label(rank) for rank in range(self.count)]


class TernaryFunction(ValueModel):
    """
    {0,1,2}^{T_n} 의 원소

    values[rank] ∈ {0,1,2}: 0 = component 가 빠짐, 1 = 아래 끝점만, 2 = 두 끝점 모두.
    join/meet 은 점별 max/min 입니다.
    """

    _fields = ("n", "values")

    def __init__(self, n: int, values: Sequence[int]):
        array = np.asarray(values, dtype=np.int8)
        if array.shape != (2 * 4 ** (n - 1),):
            raise EncodingError(f"T_{n} 함수의 길이는 {2 * 4 ** (n - 1)} 이어야 합니다")
        if array.size and (array.min() < 0 or array.max() > 2):
            raise EncodingError("값은 {0,1,2} 안에 있어야 합니다")
        array.flags.writeable = False
        self.n = n
        self.values = array

    @classmethod
    def zero(cls, n: int) -> "TernaryFunction":
        return cls(n, np.zeros(2 * 4 ** (n - 1), dtype=np.int8))

    @classmethod
    def from_mapping(cls, n: int, mapping: Dict[str, int], index: ComponentIndex = None) -> "TernaryFunction":
        index = index or ComponentIndex(n)
        values = np.zeros(index.count, dtype=np.int8)
        for label, value in mapping.items():
            if value not in (0, 1, 2):
                raise EncodingError(f"{label} 의 값 {value} 가 {{0,1,2}} 밖입니다")
            values[index.rank_of(label)] = value
        return cls(n, values)

    def to_mapping(self) -> Dict[str, int]:
        """0 이 아닌 값만 (생략된 단어는 0)"""
        return {
            "".join(str(digit) for digit in code_to_word(rank, self.n)): int(value)
            for rank, value in enumerate(self.values.tolist())
            if value
        }

    def __or__(self, other: "TernaryFunction") -> "TernaryFunction":
        return TernaryFunction(self.n, np.maximum(self.values, other.values))

    def __and__(self, other: "TernaryFunction") -> "TernaryFunction":
        return TernaryFunction(self.n, np.minimum(self.values, other.values))

    def __le__(self, other: "TernaryFunction") -> bool:
        return bool((self.values <= other.values).all())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TernaryFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash((self.n, self.values.tobytes()))

    def support(self) -> List[int]:
        return np.nonzero(self.values)[0].tolist()
