from typing import Any, Generic, List, Optional, TypeVar
from pydantic import BaseModel, Field

# 제네릭 타입 변수 정의
T = TypeVar('T')


class SimpleListResponse(BaseModel, Generic[T]):
    """
    간단한 목록 응답을 위한 공통 스키마

    two_components, atoms 처럼 목록 하나만 돌려주는 명령에서 사용합니다.
    """
    items: List[T] = Field(..., description="결과 목록")
    total_count: int = Field(..., description="전체 항목 수")


class ErrorResponse(BaseModel):
    """
    에러 응답을 위한 공통 스키마 (CLI 는 stderr 로 출력)
    """
    error: str = Field(..., description="에러 메시지")
    detail: Optional[str] = Field(None, description="상세 에러 정보")
    error_code: Optional[str] = Field(None, description="에러 코드")


class CheckResult(BaseModel):
    """
    검증 항목 하나의 결과
    """
    name: str = Field(..., description="검증 항목 이름")
    passed: bool = Field(..., description="통과 여부")
    cases: int = Field(0, description="검사한 경우의 수")
    detail: Optional[str] = Field(None, description="실패 사유 또는 요약")


class VerificationReport(BaseModel):
    """
    여러 검증 항목을 묶은 보고서
    """
    seed: int = Field(..., description="사용한 시드")
    checks: List[CheckResult] = Field(default_factory=list, description="항목별 결과")

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def table(self) -> str:
        """항목별 PASS/FAIL 표"""
        width = max([len(check.name) for check in self.checks] + [4])
        lines = [f"{'check'.ljust(width)}  result  cases"]
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            lines.append(f"{check.name.ljust(width)}  {status:<6}  {check.cases}")
            if not check.passed and check.detail:
                lines.append(f"    ↳ {check.detail}")
        return "\n".join(lines)


class ValueResponse(BaseModel):
    """
    단일 값 결과 (bool, 비교 결과, 개수 등)
    """
    value: Any = Field(..., description="결과 값")
    detail: Optional[str] = Field(None, description="부가 설명")
