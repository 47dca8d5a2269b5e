from functools import cached_property
from typing import Optional

from .config import Settings, get_settings
from .services import (
    IdealLatticeService,
    LimitThreadService,
    PosetService,
    QuotientMapService,
    TernaryEncodingService,
    UniversalSequenceService,
    VerificationService,
)


class ServiceContainer:
    """
    한 Settings 에 묶인 서비스 인스턴스 모음

    CLI 명령은 ctx.obj 로 이 객체를 받아 씁니다.
    서비스는 처음 접근할 때 만들어지고 레벨/격자 캐시를 서로 공유합니다.

    사용 예시:
        services = get_services(settings.with_overrides(seed=7))
        m, g = services.universal.solve_extension(p)
    """

    def __init__(self, settings: Settings):
        self.settings = settings

    def with_overrides(self, **overrides) -> "ServiceContainer":
        """덮어쓸 값이 없으면 캐시를 그대로 쓰도록 자기 자신을 돌려줍니다"""
        config = self.settings.with_overrides(**overrides)
        return self if config is self.settings else ServiceContainer(config)

    @cached_property
    def poset(self) -> PosetService:
        return PosetService(self.settings)

    @cached_property
    def ideal(self) -> IdealLatticeService:
        return IdealLatticeService(self.settings)

    @cached_property
    def quotient(self) -> QuotientMapService:
        return QuotientMapService(self.settings, self.ideal)

    @cached_property
    def universal(self) -> UniversalSequenceService:
        return UniversalSequenceService(self.settings, self.quotient)

    @cached_property
    def limit(self) -> LimitThreadService:
        return LimitThreadService(self.settings, self.ideal)

    @cached_property
    def ternary(self) -> TernaryEncodingService:
        return TernaryEncodingService(self.settings, self.universal)

    @cached_property
    def verification(self) -> VerificationService:
        return VerificationService(
            self.settings,
            poset_service=self.poset,
            ideal_service=self.ideal,
            quotient_service=self.quotient,
            universal_service=self.universal,
            limit_service=self.limit,
            ternary_service=self.ternary,
        )


def get_services(config: Optional[Settings] = None) -> ServiceContainer:
    """
    설정에 맞는 서비스 모음을 반환하는 팩토리 함수

    Args:
        config: 생략하면 전역 settings
    """
    return ServiceContainer(config or get_settings())
