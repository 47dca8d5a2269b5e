from typing import Dict, List, Optional, Union
from pydantic import BaseModel, Field

from ..exceptions import EncodingError
from ..models.lattice_model import BirkhoffResult, IdealLattice
from ..models.map_model import InducedMap
from ..models.poset_model import PosetBase
from ..utils.bitset_utils import BitsetHelper
from .poset_schema import PosetSchema


class IdealSchema(BaseModel):
    """
    down-set JSON 스키마

    {"members": ["01", "03"]} 또는 {"members": [1, 3]} (라벨 또는 인덱스)
    """
    members: List[Union[int, str]] = Field(default_factory=list, description="원소 라벨 또는 인덱스")

    def to_mask(self, poset: PosetBase) -> int:
        indices = []
        for member in self.members:
            if isinstance(member, int):
                if not 0 <= member < poset.size:
                    raise EncodingError(f"인덱스 {member} 가 범위를 벗어났습니다")
                indices.append(member)
            else:
                indices.append(poset.index_of(member))
        mask = BitsetHelper.from_indices(indices)
        if not poset.is_down_set(mask):
            raise EncodingError("down-set 이 아닙니다", detail=f"members={self.members}")
        return mask

    @classmethod
    def from_mask(cls, poset: PosetBase, mask: int) -> "IdealSchema":
        return cls(members=list(poset.labels_of(mask)))


class IdealLatticeSchema(BaseModel):
    """
    𝒪(P) 출력 스키마

    ideals[i] 는 원소 인덱스 목록, le 는 포함 관계 strict 쌍 (ideals 인덱스) 입니다.
    """
    count: int = Field(..., description="down-set 개수")
    ideals: Optional[List[List[int]]] = Field(None, description="down-set 별 원소 인덱스")
    le: Optional[List[List[int]]] = Field(None, description="ideals[i] ⊊ ideals[j] 인 쌍")

    @classmethod
    def from_model(cls, ideals: IdealLattice, include_lattice: bool = False) -> "IdealLatticeSchema":
        if not include_lattice:
            return cls(count=ideals.count)
        matrix = ideals.inclusion_matrix()
        pairs = [[int(i), int(j)] for i, j in zip(*matrix.nonzero()) if i != j]
        return cls(
            count=ideals.count,
            ideals=[BitsetHelper.to_indices(mask) for mask in ideals.ideals],
            le=pairs,
        )


class BirkhoffReport(BaseModel):
    """
    Birkhoff η 결과

    eta 는 L 원소 라벨 → 그 아래에 있는 join-irreducible 라벨 목록입니다.
    """
    irreducibles: List[str] = Field(..., description="J(L) 원소 라벨")
    irreducible_poset: PosetSchema = Field(..., description="J(L) 의 유도 순서")
    eta: Dict[str, List[str]] = Field(..., description="L 원소별 η 값")
    is_isomorphism: bool = Field(True, description="η 가 격자 동형인지")

    @classmethod
    def from_model(cls, result: BirkhoffResult) -> "BirkhoffReport":
        labels = result.lattice.elements
        ideals = result.ideal_lattice.ideals
        irreducible_labels = [labels[j] for j in result.irreducibles]
        return cls(
            irreducibles=irreducible_labels,
            irreducible_poset=PosetSchema.from_model(result.irreducible_poset),
            eta={
                labels[a]: [irreducible_labels[k] for k in BitsetHelper.iter_indices(ideals[position])]
                for a, position in enumerate(result.eta)
            },
        )


class InducedMapReport(BaseModel):
    """
    p̂ 출력: domain ideal 별 상과 성질 검사 결과
    """
    domain_ideals: List[List[str]] = Field(..., description="𝒪(Q) 원소 (라벨 목록)")
    images: List[List[str]] = Field(..., description="각 ideal 의 p̂ 상")
    preserves_meets: bool = Field(..., description="모든 이항 meet 보존 여부")
    meet_witness: Optional[List[str]] = Field(None, description="meet 보존 판정 반례 [t, x, y]")

    @classmethod
    def from_model(cls, induced: InducedMap, ideals: IdealLattice, preserves_meets: bool,
                   meet_witness: Optional[List[str]] = None) -> "InducedMapReport":
        return cls(
            domain_ideals=[list(induced.domain.labels_of(mask)) for mask in ideals.ideals],
            images=[list(induced.codomain.labels_of(induced(mask))) for mask in ideals.ideals],
            preserves_meets=preserves_meets,
            meet_witness=meet_witness,
        )


class QuotientCriterionReport(BaseModel):
    """
    격자 사상이 유도 quotient 와 동형인지에 대한 판정

    failed_condition: 처음 실패한 조건 (ii → i → iii 순서로 검사)
    """
    holds: bool = Field(..., description="세 조건이 모두 성립하는지")
    failed_condition: Optional[str] = Field(None, description="실패한 조건 (i / ii / iii)")
    square_commutes: Optional[bool] = Field(None, description="Birkhoff 사각형 가환 여부 (조건 성립 시)")
    reason: Optional[str] = Field(None, description="실패 사유")
