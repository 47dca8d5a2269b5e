import logging
import logging.config
from typing import Optional

import click

from . import __version__
from .cli import commands_command, register_commands
from .cli.context import apply_run_options, run_overrides
from .config import get_log_config, get_settings
from .dependencies import get_services
from .exceptions import EXIT_IO, OrderToolkitError
from .schemas.common import ErrorResponse

logger = logging.getLogger(__name__)


# =========================
# 전역 예외 처리
# =========================

class ToolkitGroup(click.Group):
    """
    도메인 예외를 종료 코드로 바꾸는 루트 그룹

    - OrderToolkitError: ErrorResponse JSON 을 stderr 로, 종료 코드는 예외의 exit_code
    - OSError: 입출력 오류 (종료 코드 3)
    - click 사용법 오류는 click 이 직접 처리합니다 (종료 코드 2)
    """

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except OrderToolkitError as exc:
            logger.error(f"❌ {exc.error_code}: {exc.message}")
            self._report(ErrorResponse(**exc.to_dict()))
            ctx.exit(exc.exit_code)
        except OSError as exc:
            logger.error(f"❌ 입출력 오류: {exc}")
            self._report(ErrorResponse(error=str(exc), error_code="IO_ERROR"))
            ctx.exit(EXIT_IO)

    @staticmethod
    def _report(response: ErrorResponse):
        click.echo(response.model_dump_json(exclude_none=True), err=True)


# =========================
# 루트 명령
# =========================

@click.group(cls=ToolkitGroup, context_settings={"help_option_names": ["-h", "--help"]})
@apply_run_options
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="로그 레벨 (stderr)")
@click.version_option(__version__, prog_name="order-toolkit")
@click.pass_context
def cli(ctx: click.Context, seed, depth, samples, output_format, as_json, log_level: Optional[str]):
    """
    유한 poset, quotient map, P_n = {0,1,2,3}^n 수열과 역극한 계산 도구

    전역 플래그는 하위 명령 뒤에 와도 됩니다 (예: verify-all --seed 42).
    """
    config = get_settings().with_overrides(log_level=log_level, **run_overrides(seed, depth, samples, output_format, as_json))
    logging.config.dictConfig(get_log_config(config.log_level))
    ctx.obj = get_services(config)
    logger.debug(f"🔍 실행 설정: seed={config.seed}, depth={config.depth_bound}, samples={config.sample_count}")


register_commands(cli)
cli.add_command(commands_command)


def main():
    cli(prog_name="order-toolkit")


if __name__ == "__main__":
    main()
