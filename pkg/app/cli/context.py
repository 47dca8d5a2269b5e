import functools
from typing import Any, Callable, Optional

import click

from ..dependencies import ServiceContainer, get_services
from ..utils.io_utils import emit

# 루트 그룹과 모든 하위 명령이 함께 받는 실행 설정 플래그
# (하위 명령 쪽 값이 루트 값을 덮어씁니다: `verify-all --seed 42`, `level 1 --json`)
RUN_OPTIONS = [
    click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="무작위 동작 시드 (64비트)"),
    click.option("--depth", type=click.IntRange(min=1), default=None, help="P_n 깊이 한도"),
    click.option("--samples", type=click.IntRange(min=0), default=None, help="샘플 검증 표본 수"),
    click.option("--format", "output_format", type=click.Choice(["json", "dot", "text"]), default=None,
                 help="출력 형식"),
    click.option("--json", "as_json", is_flag=True, default=False, help="--format json 과 같음"),
]


def apply_run_options(function: Callable) -> Callable:
    for option in reversed(RUN_OPTIONS):
        function = option(function)
    return function


def run_overrides(seed=None, depth=None, samples=None, output_format=None, as_json=False) -> dict:
    """플래그 값을 Settings 필드 이름으로 바꿉니다"""
    return {
        "seed": seed,
        "depth_bound": depth,
        "sample_count": samples,
        "output_format": "json" if as_json else output_format,
    }


def with_services(command: Callable) -> Callable:
    """
    명령 함수에 실행 설정 플래그를 붙이고 ServiceContainer 를 첫 인자로 넘깁니다.

    사용 예시:
        @click.command("level")
        @click.argument("n", type=int)
        @with_services
        def level_command(services, n): ...
    """

    def wrapper(seed=None, depth=None, samples=None, output_format=None, as_json=False, **kwargs):
        ctx = click.get_current_context()
        services = ctx.find_object(ServiceContainer) or get_services()
        services = services.with_overrides(**run_overrides(seed, depth, samples, output_format, as_json))
        return command(services, **kwargs)

    functools.update_wrapper(wrapper, command)
    return apply_run_options(wrapper)


def emit_result(services: ServiceContainer, payload: Any, dot: Optional[str] = None, text: Optional[str] = None):
    emit(services.settings.output_format, payload, dot=dot, text=text)
