from typing import Dict, List
from pydantic import BaseModel, Field

from ..exceptions import EncodingError
from ..models.level_model import LevelMapFamily
from ..models.poset_model import PosetMap
from ..models.thread_model import IdealThread, InverseSystem, Thread, ThreadSystem
from ..utils.bitset_utils import BitsetHelper
from .poset_schema import PosetMapSchema, PosetSchema


class InverseSystemSchema(BaseModel):
    """
    역계 JSON 스키마

    {"levels": [<poset>, ...], "steps": [[levels[1] → levels[0] assignment], ...]}
    """
    levels: List[PosetSchema] = Field(..., min_length=1, description="얕은 레벨부터 차례로")
    steps: List[List[int]] = Field(default_factory=list, description="steps[k]: levels[k+1] → levels[k]")

    def to_model(self, name: str = "H") -> InverseSystem:
        levels = [level.to_model() for level in self.levels]
        if len(self.steps) != len(levels) - 1:
            raise EncodingError("steps 개수는 levels 개수보다 하나 적어야 합니다")
        steps = [PosetMap(levels[k + 1], levels[k], step) for k, step in enumerate(self.steps)]
        return InverseSystem(levels, steps, name=name)

    @classmethod
    def from_model(cls, system: InverseSystem) -> "InverseSystemSchema":
        return cls(
            levels=[PosetSchema.from_model(level) for level in system.levels],
            steps=[step.assignment.tolist() for step in system.steps],
        )


class ThreadSystemSchema(BaseModel):
    """
    thread 선택용 집합 열

    {"levels": [["r"], ["a", "b"], ...], "maps": [{"a": "r", "b": "r"}, ...]}
    maps[i] 에 없는 원소는 상이 없는 막다른 원소입니다.
    """
    levels: List[List[str]] = Field(..., min_length=1, description="레벨별 원소 라벨")
    maps: List[Dict[str, str]] = Field(default_factory=list, description="maps[i]: levels[i+1] → levels[i] 부분 함수")

    def to_model(self) -> ThreadSystem:
        if len(self.maps) != len(self.levels) - 1:
            raise EncodingError("maps 개수는 levels 개수보다 하나 적어야 합니다")
        return ThreadSystem.from_labels(self.levels, self.maps)


class ThreadSchema(BaseModel):
    """
    thread 출력: 레벨별 원소 인덱스와 라벨
    """
    entries: List[int] = Field(..., description="레벨별 원소 인덱스")
    labels: List[str] = Field(..., description="레벨별 원소 라벨")

    @classmethod
    def from_model(cls, thread: Thread) -> "ThreadSchema":
        return cls(entries=list(thread.entries), labels=thread.labels())


class IdealThreadSchema(BaseModel):
    """
    ideal thread JSON 스키마

    {"entries": [[레벨 1 원소 인덱스], [레벨 2 원소 인덱스], ...]}
    """
    entries: List[List[int]] = Field(..., min_length=1, description="레벨별 down-set 원소 인덱스")

    def to_model(self, system: InverseSystem) -> IdealThread:
        if len(self.entries) > system.depth:
            raise EncodingError(f"thread 깊이 {len(self.entries)} 가 역계 깊이 {system.depth} 보다 깊습니다")
        masks = []
        for k, members in enumerate(self.entries):
            if any(not 0 <= x < system.levels[k].size for x in members):
                raise EncodingError(f"레벨 {k + 1} 인덱스가 범위를 벗어났습니다")
            masks.append(BitsetHelper.from_indices(members))
        return IdealThread(system, masks)

    @classmethod
    def from_model(cls, thread: IdealThread) -> "IdealThreadSchema":
        return cls(entries=[BitsetHelper.to_indices(mask) for mask in thread.entries])


class ExtensionResult(BaseModel):
    """
    solve_extension 출력: 깊이 m 과 g: P_m → H
    """
    m: int = Field(..., description="선택된 레벨 깊이")
    assignment: List[int] = Field(..., description="P_m 원소 코드별 H 인덱스")

    @classmethod
    def from_model(cls, m: int, poset_map: PosetMap) -> "ExtensionResult":
        return cls(m=m, assignment=poset_map.assignment.tolist())


class LevelMapFamilySchema(BaseModel):
    """
    universal quotient 구성 결과

    indices[k] = i_k, maps[k] 는 P_{i_k} → H_k assignment 입니다.
    """
    indices: List[int] = Field(..., description="레벨 깊이 i_1 < i_2 < ...")
    maps: List[List[int]] = Field(..., description="레벨 사상 assignment")
    targets: List[PosetSchema] = Field(..., description="H_k")

    @classmethod
    def from_model(cls, family: LevelMapFamily) -> "LevelMapFamilySchema":
        return cls(
            indices=family.indices,
            maps=[level_map.assignment.tolist() for level_map in family.maps],
            targets=[PosetSchema.from_model(target) for target in family.targets],
        )


class LiftResult(BaseModel):
    """
    lift_through_quotient 출력: l: P_m → A′ 와 깊이 m
    """
    m: int = Field(..., description="레벨 깊이")
    lift: PosetMapSchema = Field(..., description="P_m → A′")
