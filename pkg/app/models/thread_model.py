from enum import Enum
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from ..exceptions import PosetValidationError
from .base import ValueModel
from .poset_model import PosetBase, PosetMap


class Comparison(str, Enum):
    """두 원소(또는 thread) 비교 결과"""

    EQUAL = "="
    LESS = "≤"
    GREATER = "≥"
    INCOMPARABLE = "∥"

    @classmethod
    def from_flags(cls, below: bool, above: bool) -> "Comparison":
        if below and above:
            return cls.EQUAL
        if below:
            return cls.LESS
        if above:
            return cls.GREATER
        return cls.INCOMPARABLE


class InverseSystem(ValueModel):
    """
    유한 poset 역계

    levels[0] 이 가장 얕은 레벨이고 steps[k] 는 levels[k+1] → levels[k] 결합 사상입니다.
    합성 사상 p_k^n 은 처음 요청될 때 계산해 캐시합니다.
    """

    _fields = ("depth",)

    def __init__(self, levels: Sequence[PosetBase], steps: Sequence[PosetMap], name: str = "system"):
        if len(steps) != max(len(levels) - 1, 0):
            raise PosetValidationError("steps 개수는 levels 개수보다 하나 적어야 합니다")
        for k, step in enumerate(steps):
            if not (step.domain.same_order(levels[k + 1]) and step.codomain.same_order(levels[k])):
                raise PosetValidationError(f"step {k} 의 domain/codomain 이 레벨과 맞지 않습니다")
        self.levels = list(levels)
        self.steps = list(steps)
        self.name = name
        self._composites: Dict[Tuple[int, int], np.ndarray] = {}

    @property
    def depth(self) -> int:
        return len(self.levels)

    def composite(self, k: int, n: int) -> np.ndarray:
        """levels[n] → levels[k] (k ≤ n) 인덱스 배열"""
        if not 0 <= k <= n < self.depth:
            raise PosetValidationError(f"잘못된 레벨 쌍 ({k}, {n})")
        key = (k, n)
        if key not in self._composites:
            if k == n:
                table = np.arange(self.levels[n].size, dtype=np.int64)
            else:
                table = self.composite(k, n - 1)[self.steps[n - 1].assignment]
            table.flags.writeable = False
            self._composites[key] = table
        return self._composites[key]

    def truncated(self, depth: int) -> "InverseSystem":
        return InverseSystem(self.levels[:depth], self.steps[: max(depth - 1, 0)], name=self.name)

    def bond(self, k: int, x: int) -> int:
        return self.steps[k](x)

    def level_labels(self, k: int) -> Tuple[str, ...]:
        return self.levels[k].elements


class Thread(ValueModel):
    """
    역계(또는 집합 열)를 따라 결합 사상과 호환되는 원소 열 x_1..x_N

    system 은 InverseSystem 이나 ThreadSystem 이며 bond(k, x) 로 한 단계 내립니다.
    """

    _fields = ("entries",)

    def __init__(self, system: "Union[InverseSystem, ThreadSystem]", entries: Sequence[int], check: bool = True):
        values = [int(entry) for entry in entries]
        if len(values) > system.depth:
            raise PosetValidationError(f"thread 깊이 {len(values)} 가 역계 깊이 {system.depth} 보다 깊습니다")
        if check:
            for k in range(len(values) - 1):
                if system.bond(k, values[k + 1]) != values[k]:
                    raise PosetValidationError("결합 사상과 호환되지 않는 thread 입니다", witness=(k, k + 1))
        self.system = system
        self.entries = values

    @property
    def depth(self) -> int:
        return len(self.entries)

    def labels(self) -> List[str]:
        return [self.system.level_labels(k)[entry] for k, entry in enumerate(self.entries)]


class ThreadSystem(ValueModel):
    """
    유한 집합 G_i 와 사상 q_i^{i+1}: G_{i+1} → G_i 의 열

    maps[i][x] 는 levels[i+1] 의 인덱스 x 의 상(levels[i] 인덱스)이며,
    상이 G_i 밖이면 -1 입니다.
    """

    _fields = ("levels",)

    def __init__(self, levels: Sequence[Sequence[str]], maps: Sequence[Sequence[int]]):
        if len(maps) != max(len(levels) - 1, 0):
            raise PosetValidationError("maps 개수는 levels 개수보다 하나 적어야 합니다")
        self.levels = [tuple(str(label) for label in level) for level in levels]
        self.maps = [np.asarray(list(table), dtype=np.int64) for table in maps]
        for i, table in enumerate(self.maps):
            if table.shape != (len(self.levels[i + 1]),):
                raise PosetValidationError(f"map {i} 의 길이가 레벨 {i + 1} 크기와 다릅니다")
            if table.size and table.max() >= len(self.levels[i]):
                raise PosetValidationError(f"map {i} 의 값이 레벨 {i} 범위를 벗어났습니다")

    @classmethod
    def from_labels(cls, levels: Sequence[Sequence[str]], maps: Sequence[Dict[str, str]]) -> "ThreadSystem":
        tables = []
        for i, mapping in enumerate(maps):
            positions = {label: index for index, label in enumerate(levels[i])}
            tables.append([positions.get(mapping.get(label), -1) for label in levels[i + 1]])
        return cls(levels, tables)

    @property
    def depth(self) -> int:
        return len(self.levels)

    def bond(self, k: int, x: int) -> int:
        return int(self.maps[k][x])

    def level_labels(self, k: int) -> Tuple[str, ...]:
        return self.levels[k]


class SymbolicPoint(ValueModel):
    """
    ℙ = {0,1,2,3}^ω 의 끝이 상수인 점 prefix·tail^ω

    prefix 끝의 tail 과 같은 숫자는 정규화 과정에서 잘라냅니다.
    """

    _fields = ("prefix", "tail")

    def __init__(self, prefix: Sequence[int], tail: int):
        digits = [int(digit) for digit in prefix]
        if tail not in (0, 1, 2, 3) or any(digit not in (0, 1, 2, 3) for digit in digits):
            raise PosetValidationError("기호는 {0,1,2,3} 안에 있어야 합니다")
        while digits and digits[-1] == tail:
            digits.pop()
        self.prefix: Tuple[int, ...] = tuple(digits)
        self.tail = int(tail)

    @classmethod
    def parse(cls, text: str) -> "SymbolicPoint":
        """'01(2)' 또는 '01(2)^ω' 형식: 괄호 안 숫자가 반복되는 꼬리"""
        body = text.strip().removesuffix("^ω")
        head, sep, rest = body.partition("(")
        if not sep or not rest.endswith(")") or len(rest) != 2:
            raise PosetValidationError(f"점 표기가 아닙니다: {text!r} (예: 01(2))")
        if any(ch not in "0123" for ch in head + rest[0]):
            raise PosetValidationError(f"기호는 {{0,1,2,3}} 안에 있어야 합니다: {text!r}")
        return cls([int(ch) for ch in head], int(rest[0]))

    def digit(self, position: int) -> int:
        return self.prefix[position] if position < len(self.prefix) else self.tail

    def window(self, length: int) -> Tuple[int, ...]:
        return tuple(self.digit(position) for position in range(length))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicPoint):
            return NotImplemented
        return self.prefix == other.prefix and self.tail == other.tail

    def __hash__(self) -> int:
        return hash((self.prefix, self.tail))

    def __str__(self) -> str:
        return "".join(str(digit) for digit in self.prefix) + f"({self.tail})^ω"


class IdealThread(ValueModel):
    """
    ideal 역극한의 유한 깊이 원소 (a_1, ..., a_N)

    entries[k] 는 system.levels[k] 위의 down-set 비트셋입니다.
    결합 호환성(p̂(a_{k+1}) = a_k)은 LimitThreadService 가 검사합니다.
    """

    _fields = ("entries",)

    def __init__(self, system: InverseSystem, entries: Sequence[int]):
        if len(entries) > system.depth:
            raise PosetValidationError(f"thread 깊이 {len(entries)} 가 역계 깊이 {system.depth} 보다 깊습니다")
        self.system = system
        self.entries: List[int] = [int(entry) for entry in entries]

    @property
    def depth(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return all(entry == 0 for entry in self.entries)

    def member_labels(self) -> List[List[str]]:
        return [self.system.levels[k].labels_of(entry) for k, entry in enumerate(self.entries)]

    def truncated(self, depth: int) -> "IdealThread":
        return IdealThread(self.system, self.entries[:depth])

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdealThread):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(tuple(self.entries))

