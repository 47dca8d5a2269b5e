"""
도메인 예외 계층

라이브러리 전체에서 발생하는 오류는 모두 OrderToolkitError 를 상속합니다.
ValueError 도 함께 상속하므로 호출 측에서 ValueError 로 잡아도 됩니다.
CLI 의 전역 예외 처리기는 exit_code 를 그대로 종료 코드로 사용합니다.
"""
from typing import Any, Optional, Tuple

# === 종료 코드 ===
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class OrderToolkitError(ValueError):
    """모든 도메인 오류의 기본 클래스"""

    error_code: str = "ORDER_ERROR"
    exit_code: int = EXIT_VERIFICATION_FAILED

    def __init__(self, message: str, detail: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_dict(self) -> dict:
        return {
            "error": self.message,
            "detail": self.detail,
            "error_code": self.error_code,
        }


class PosetValidationError(OrderToolkitError):
    """순서 관계 공리 위반, 중복 라벨, 외부 원소 참조"""

    error_code = "INVALID_POSET"

    def __init__(self, message: str, witness: Optional[Tuple[Any, Any]] = None):
        super().__init__(message, detail=f"witness={witness}" if witness is not None else None)
        self.witness = witness


class SizeBoundError(OrderToolkitError):
    """설정된 크기 한도를 넘는 입력"""

    error_code = "SIZE_BOUND"

    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what} 크기 {size} 가 한도 {bound} 를 초과합니다")
        self.size = size
        self.bound = bound


class DepthBoundError(SizeBoundError):
    """요구되는 레벨 깊이가 depth bound 를 넘음 (잘라내지 않고 거부)"""

    error_code = "DEPTH_BOUND"

    def __init__(self, required_depth: int, bound: int):
        super().__init__("레벨 깊이", required_depth, bound)
        self.required_depth = required_depth
        self.detail = f"required_depth={required_depth}"


class NotAQuotientError(OrderToolkitError):
    """quotient map 이 아닌 사상이 들어옴"""

    error_code = "NOT_A_QUOTIENT"

    def __init__(self, message: str, classification: Any = None):
        witness = getattr(classification, "witness", None)
        super().__init__(message, detail=f"witness={witness}" if witness is not None else None)
        self.classification = classification


class NotALatticeError(OrderToolkitError):
    """두 원소의 join 또는 meet 이 존재하지 않음"""

    error_code = "NOT_A_LATTICE"


class NonDistributiveError(OrderToolkitError):
    """분배 법칙 위반 (위반 삼중쌍 포함)"""

    error_code = "NON_DISTRIBUTIVE"

    def __init__(self, triple: Tuple[Any, Any, Any]):
        super().__init__("분배 법칙을 만족하지 않는 격자입니다", detail=f"triple={triple}")
        self.triple = triple


class ThreadSystemError(OrderToolkitError):
    """호환 집합 T_i 가 비어 있어 thread 를 만들 수 없음"""

    error_code = "EMPTY_COMPATIBILITY_SET"

    def __init__(self, message: str, index: int):
        super().__init__(message, detail=f"index={index}")
        self.index = index


class EncodingError(OrderToolkitError):
    """ternary 함수 또는 ideal 입력 오류"""

    error_code = "ENCODING_ERROR"


class VerificationFailure(OrderToolkitError):
    """검증 보고서가 실패로 끝남"""

    error_code = "VERIFICATION_FAILED"
    exit_code = EXIT_VERIFICATION_FAILED

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class InputFormatError(OrderToolkitError):
    """JSON 파싱/스키마 오류 (위치 포함)"""

    error_code = "INPUT_FORMAT"
    exit_code = EXIT_IO

    def __init__(self, message: str, position: Optional[str] = None):
        super().__init__(message, detail=f"position={position}" if position else None)
        self.position = position
