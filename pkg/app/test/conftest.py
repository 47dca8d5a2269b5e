import json

import pytest

from app.config import Settings
from app.dependencies import ServiceContainer


@pytest.fixture(scope="session")
def settings() -> Settings:
    """테스트용 설정: 표본 수를 줄이고 시드를 고정합니다"""
    return Settings(seed=42, sample_count=300, workers=2)


@pytest.fixture(scope="session")
def services(settings) -> ServiceContainer:
    return ServiceContainer(settings)


@pytest.fixture(scope="session")
def poset_service(services):
    return services.poset


@pytest.fixture(scope="session")
def ideal_service(services):
    return services.ideal


@pytest.fixture(scope="session")
def quotient_service(services):
    return services.quotient


@pytest.fixture(scope="session")
def universal_service(services):
    return services.universal


@pytest.fixture(scope="session")
def limit_service(services):
    return services.limit


@pytest.fixture(scope="session")
def ternary_service(services):
    return services.ternary


# =========================
# 자주 쓰는 poset
# =========================

@pytest.fixture
def v_poset(poset_service):
    """a ≤ c, b ≤ c"""
    return poset_service.build(["a", "b", "c"], [(0, 2), (1, 2)])


@pytest.fixture
def chain3(poset_service):
    return poset_service.chain(3)


@pytest.fixture
def antichain2(poset_service):
    return poset_service.antichain(2)


@pytest.fixture
def write_json(tmp_path):
    """payload 를 임시 파일로 쓰고 경로 문자열을 돌려줍니다"""

    def write(name: str, payload) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write
