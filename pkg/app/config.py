from typing import Literal
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    실행 설정(RunConfig)을 관리하는 클래스

    Pydantic의 BaseSettings를 사용하여:
    1. 환경 변수 자동 로딩 (ORDER_ 접두사)
    2. 타입 검증
    3. 기본값 설정

    설정 값은 다음 순서로 결정됩니다:
    1. CLI 전역 플래그 (--seed, --depth, --samples, --format)
    2. 환경 변수
    3. 기본값

    설정 파일은 읽지 않습니다. seed 하나로 모든 무작위 동작이 결정됩니다.
    """

    # === 애플리케이션 기본 설정 ===
    app_name: str = Field("Profinite Order Toolkit", description="애플리케이션 이름")
    app_version: str = Field("1.0.0", description="애플리케이션 버전")

    # === 크기/깊이 한도 ===
    depth_bound: int = Field(6, ge=1, description="요청 시 만드는 P_n 의 최대 깊이, solve_extension 기본 한도")
    solver_depth_bound: int = Field(10, ge=1, description="universal quotient 구성 중 내부적으로 만드는 레벨 한도")
    dense_level_bound: int = Field(6, ge=1, description="P_n 을 dense 행렬로 만드는 최대 n")
    ideal_size_bound: int = Field(16, ge=1, description="all_down_sets 허용 최대 |P|")
    induced_table_bound: int = Field(10_000, ge=1, description="induce 를 표로 미리 계산하는 |O(Q)| 한도")
    lattice_table_bound: int = Field(1024, ge=1, description="join/meet 표를 만드는 격자 크기 한도")
    distributivity_bound: int = Field(10_000, ge=1, description="분배성 검사 허용 |L|")
    isomorphism_bound: int = Field(10, ge=1, description="전수 동형 검사 허용 |P|")

    # === 샘플링 설정 ===
    sample_count: int = Field(100_000, ge=0, description="verify_square 샘플 수")
    seed: int = Field(42, ge=0, lt=2**64, description="모든 무작위 동작의 시드 (64비트)")
    workers: int = Field(4, ge=1, description="샘플 검증 파티션 수")

    # === 출력 설정 ===
    output_format: Literal["json", "dot", "text"] = Field("json", description="출력 형식")

    # === 로깅 설정 ===
    log_level: str = Field("WARNING", description="로그 레벨")

    model_config = SettingsConfigDict(
        env_prefix="ORDER_",
        case_sensitive=False,
    )

    def with_overrides(self, **overrides) -> "Settings":
        """
        None 이 아닌 값만 덮어쓴 새 설정을 반환합니다.

        CLI 전역 플래그를 적용할 때 사용합니다.
        """
        update = {key: value for key, value in overrides.items() if value is not None}
        if not update:
            return self
        return self.__class__(**{**self.model_dump(), **update})


# 전역 설정 인스턴스
settings = Settings()


def get_settings() -> Settings:
    """
    설정 인스턴스를 반환하는 팩토리 함수

    테스트에서 다른 설정을 주입할 때 서비스 생성자에 직접 넘기면 됩니다.

    Returns:
        Settings: 설정 인스턴스
    """
    return settings


# === 로깅 설정 ===
def get_log_config(level: str = None) -> dict:
    """
    logging.config.dictConfig 에 넘길 로깅 설정을 반환합니다.

    Args:
        level: 루트 로그 레벨 (생략 시 settings.log_level)

    Returns:
        dict: 로깅 설정 딕셔너리
    """
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            },
        },
        "handlers": {
            "default": {
                "formatter": "default",
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
            },
        },
        "root": {
            "level": (level or settings.log_level).upper(),
            "handlers": ["default"],
        },
    }
