import json
from typing import Any, Optional, Type, TypeVar

import click
from pydantic import BaseModel, ValidationError

from ..exceptions import InputFormatError

SchemaT = TypeVar("SchemaT", bound=BaseModel)


def read_json(path: str) -> Any:
    """
    JSON 파일 읽기 ('-' 는 stdin)

    Raises:
        InputFormatError: 파일을 열 수 없거나 JSON 이 아님 (줄/열 위치 포함)
    """
    try:
        if path == "-":
            text = click.get_text_stream("stdin").read()
        else:
            with open(path, encoding="utf-8") as handle:
                text = handle.read()
    except OSError as e:
        raise InputFormatError(f"파일을 읽을 수 없습니다: {e.strerror or e}", position=path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"JSON 파싱 실패: {e.msg}", position=f"{path}:{e.lineno}:{e.colno}")


def load_schema(path: str, schema: Type[SchemaT]) -> SchemaT:
    """파일을 읽어 pydantic 스키마로 검증합니다 (첫 오류 위치를 담아 InputFormatError)"""
    data = read_json(path)
    try:
        return schema.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise InputFormatError(f"{schema.__name__} 형식 오류: {first['msg']}", position=f"{path}:{location}")


def render(payload: Any) -> str:
    """결과를 JSON 문자열로 (pydantic 모델은 model_dump 를 거침)"""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, indent=2, ensure_ascii=False)


def emit(output_format: str, payload: Any, dot: Optional[str] = None, text: Optional[str] = None):
    """
    전역 --format 에 맞춰 stdout 으로 출력합니다.

    dot 이 없는 명령에 --format dot 을 주면 사용법 오류입니다.
    text 가 없으면 text 형식도 JSON 으로 출력합니다.
    """
    if output_format == "dot":
        if dot is None:
            raise click.UsageError("이 명령은 DOT 출력을 지원하지 않습니다")
        click.echo(dot)
    elif output_format == "text" and text is not None:
        click.echo(text)
    else:
        click.echo(render(payload))
