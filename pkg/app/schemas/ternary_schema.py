from typing import Dict
from pydantic import BaseModel, Field, field_validator

from ..models.ternary_model import TernaryFunction


class TernaryFunctionSchema(BaseModel):
    """
    {0,1,2}^{T_n} 원소 JSON 스키마

    {"n": 2, "values": {"01": 2, "12": 1}}; 생략된 단어의 값은 0 입니다.
    """
    n: int = Field(..., ge=1, description="깊이")
    values: Dict[str, int] = Field(default_factory=dict, description="단어 → 0|1|2")

    @field_validator("values")
    @classmethod
    def _values_are_ternary(cls, value):
        for word, digit in value.items():
            if digit not in (0, 1, 2):
                raise ValueError(f"{word} 의 값 {digit} 가 0, 1, 2 가 아닙니다")
        return value

    def to_model(self) -> TernaryFunction:
        return TernaryFunction.from_mapping(self.n, self.values)

    @classmethod
    def from_model(cls, f: TernaryFunction) -> "TernaryFunctionSchema":
        return cls(n=f.n, values=f.to_mapping())
