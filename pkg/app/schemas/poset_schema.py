from typing import List, Optional
from pydantic import BaseModel, Field, field_validator

from ..models.poset_model import FinitePoset, PosetBase, PosetMap, make_poset


class PosetSchema(BaseModel):
    """
    poset JSON 스키마

    {"elements": ["a","b",...], "le": [[i,j],...]}
    반사 쌍은 생략해도 되며 전이 닫힘은 추론하지 않습니다.
    """
    elements: List[str] = Field(..., description="원소 라벨 목록")
    le: List[List[int]] = Field(default_factory=list, description="i ≤ j 인 인덱스 쌍 목록")

    @field_validator("le")
    @classmethod
    def _pairs_have_two_entries(cls, value):
        for pair in value:
            if len(pair) != 2:
                raise ValueError(f"관계 쌍은 두 인덱스여야 합니다: {pair}")
        return value

    def to_model(self) -> FinitePoset:
        return make_poset(self.elements, [tuple(pair) for pair in self.le])

    @classmethod
    def from_model(cls, poset: PosetBase, include_reflexive: bool = False) -> "PosetSchema":
        lows, highs = poset.le_pairs() if include_reflexive else poset.strict_pairs()
        return cls(
            elements=list(poset.elements),
            le=[[int(low), int(high)] for low, high in zip(lows.tolist(), highs.tolist())],
        )


class PosetMapSchema(BaseModel):
    """
    사상 JSON 스키마

    {"domain": <poset>, "codomain": <poset>, "assignment": [codomain 인덱스]}
    """
    domain: PosetSchema = Field(..., description="정의역 poset")
    codomain: PosetSchema = Field(..., description="공역 poset")
    assignment: List[int] = Field(..., description="domain 인덱스별 codomain 인덱스")

    def to_model(self) -> PosetMap:
        return PosetMap(self.domain.to_model(), self.codomain.to_model(), self.assignment)

    @classmethod
    def from_model(cls, poset_map: PosetMap) -> "PosetMapSchema":
        return cls(
            domain=PosetSchema.from_model(poset_map.domain),
            codomain=PosetSchema.from_model(poset_map.codomain),
            assignment=poset_map.assignment.tolist(),
        )


class ValidationReport(BaseModel):
    """
    poset 공리 검사 결과
    """
    ok: bool = Field(..., description="모든 공리를 만족하는지")
    axiom: Optional[str] = Field(None, description="처음 위반된 공리 (reflexive / antisymmetric / transitive)")
    witness: Optional[List[str]] = Field(None, description="위반 증거 쌍")


class MapClassification(BaseModel):
    """
    사상 분류 결과

    is_quotient 이면 is_onto 와 is_homomorphism 도 참입니다.
    """
    is_homomorphism: bool = Field(..., description="순서 보존 여부")
    is_onto: bool = Field(..., description="전사 여부")
    is_quotient: bool = Field(..., description="quotient map 여부")
    witness: Optional[List[str]] = Field(None, description="처음 발견된 반례 (라벨)")
    reason: Optional[str] = Field(None, description="반례 종류 (not_homomorphism / not_onto / not_lifted)")


class IsomorphismResult(BaseModel):
    """
    동형 검사 결과
    """
    isomorphic: bool = Field(..., description="동형 여부")
    mapping: Optional[List[int]] = Field(None, description="첫 poset 인덱스 → 둘째 poset 인덱스")
