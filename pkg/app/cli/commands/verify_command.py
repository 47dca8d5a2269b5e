import logging
from typing import Optional, Tuple

import click

from ...exceptions import VerificationFailure
from ...services.verification_service import VerificationService
from ...utils.io_utils import render
from ..context import with_services

logger = logging.getLogger(__name__)

CHECK_NAMES = [name for name, _ in VerificationService.CHECKS]


@click.command("verify-all")
@click.option("--only", multiple=True, type=click.Choice(CHECK_NAMES), help="이 항목만 실행 (반복 가능)")
@click.option("--report", "report_file", default=None, help="JSON 보고서를 쓸 경로")
@with_services
def verify_all_command(services, only: Tuple[str, ...], report_file: Optional[str]):
    """
    수락 검증 전체 실행

    항목별 PASS/FAIL 표를 출력하고 하나라도 실패하면 종료 코드 1 로 끝납니다.
    --format json 이면 표 대신 JSON 보고서를 출력합니다.
    """
    report = services.verification.verify_all(list(only) or None)
    if services.settings.output_format == "json" and _json_requested():
        click.echo(render(report))
    else:
        click.echo(report.table())
    if report_file:
        with open(report_file, "w", encoding="utf-8") as handle:
            handle.write(render(report))
        logger.info(f"✅ 검증 보고서 저장: {report_file}")
    if not report.passed:
        failed = [check.name for check in report.checks if not check.passed]
        raise VerificationFailure(f"실패 항목: {', '.join(failed)}", report=report)


def _json_requested() -> bool:
    """--format json / --json 이 명시됐는지 (기본 형식일 때는 표를 출력)"""
    ctx = click.get_current_context()
    sources = [ctx.get_parameter_source("output_format"), ctx.get_parameter_source("as_json")]
    root = ctx.find_root()
    sources.append(root.get_parameter_source("output_format"))
    sources.append(root.get_parameter_source("as_json"))
    return any(source is click.core.ParameterSource.COMMANDLINE for source in sources)
