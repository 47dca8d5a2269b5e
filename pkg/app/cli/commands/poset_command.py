from typing import Optional, Tuple

import click

from ...exceptions import VerificationFailure
from ...schemas.common import SimpleListResponse, ValueResponse
from ...schemas.poset_schema import PosetSchema
from ...utils.io_utils import load_schema
from ..context import emit_result, with_services

# =========================
# 검증, 구성
# =========================


@click.command("validate")
@click.argument("poset_file")
@with_services
def validate_command(services, poset_file: str):
    """poset JSON 의 반사/반대칭/전이 공리 검사 (위반 시 종료 코드 1)"""
    poset = load_schema(poset_file, PosetSchema).to_model()
    report = services.poset.validate(poset)
    emit_result(services, report)
    if not report.ok:
        raise VerificationFailure(f"{report.axiom} 공리 위반", report=report)


@click.command("construct")
@click.argument("kind", type=click.Choice(["chain", "antichain", "point"]))
@click.argument("size", type=click.IntRange(min=1), default=1)
@with_services
def construct_command(services, kind: str, size: int):
    """기본 poset 구성: chain n, antichain n, point"""
    builders = {
        "chain": lambda: services.poset.chain(size),
        "antichain": lambda: services.poset.antichain(size),
        "point": services.poset.point,
    }
    poset = builders[kind]()
    emit_result(services, PosetSchema.from_model(poset), dot=services.poset.to_dot(poset, name=kind))


@click.command("combine")
@click.argument("kind", type=click.Choice(["sum", "union"]))
@click.argument("first_file")
@click.argument("second_file")
@with_services
def combine_command(services, kind: str, first_file: str, second_file: str):
    """linear sum (첫째 전체가 둘째 아래) 또는 disjoint union"""
    first = services.poset.require_valid(load_schema(first_file, PosetSchema).to_model())
    second = services.poset.require_valid(load_schema(second_file, PosetSchema).to_model())
    if kind == "sum":
        poset = services.poset.linear_sum(first, second)
    else:
        poset = services.poset.disjoint_union(first, second)
    emit_result(services, PosetSchema.from_model(poset), dot=services.poset.to_dot(poset, name=kind))


# =========================
# 구조 질의
# =========================


@click.command("maximal")
@click.argument("poset_file")
@click.argument("labels", nargs=-1)
@with_services
def maximal_command(services, poset_file: str, labels: Tuple[str, ...]):
    """부분집합(생략 시 전체)의 극대 원소"""
    poset = services.poset.require_valid(load_schema(poset_file, PosetSchema).to_model())
    subset = labels or poset.elements
    items = services.poset.maximal_elements(poset, subset)
    emit_result(services, SimpleListResponse[str](items=items, total_count=len(items)))


@click.command("components")
@click.argument("poset_file")
@click.option("--pair", nargs=2, default=None, help="두 원소가 2-component 인지만 판정")
@with_services
def components_command(services, poset_file: str, pair: Optional[Tuple[str, str]]):
    """2-component {x < y} 목록과 고립점"""
    poset = services.poset.require_valid(load_schema(poset_file, PosetSchema).to_model())
    if pair:
        emit_result(services, ValueResponse(value=services.poset.is_two_component(poset, *pair)))
        return
    isolated = services.poset.isolated_points(poset)
    emit_result(services, {
        "two_components": [list(component) for component in services.poset.two_components(poset)],
        "isolated_points": [poset.elements[x] for x in isolated],
    })


@click.command("hasse")
@click.argument("poset_file")
@with_services
def hasse_command(services, poset_file: str):
    """cover 관계 (아래, 위) 목록, --format dot 이면 Hasse 도표"""
    poset = services.poset.require_valid(load_schema(poset_file, PosetSchema).to_model())
    edges = services.poset.hasse_edges(poset)
    labels = poset.elements
    emit_result(
        services,
        {"edges": [[labels[low], labels[high]] for low, high in edges]},
        dot=services.poset.to_dot(poset),
    )


@click.command("isomorphic")
@click.argument("first_file")
@click.argument("second_file")
@with_services
def isomorphic_command(services, first_file: str, second_file: str):
    """두 poset 의 동형 여부와 대응"""
    first = services.poset.require_valid(load_schema(first_file, PosetSchema).to_model())
    second = services.poset.require_valid(load_schema(second_file, PosetSchema).to_model())
    emit_result(services, services.poset.is_isomorphic(first, second))


@click.command("enumerate")
@click.argument("size", type=click.IntRange(min=1))
@click.option("--up-to", is_flag=True, help="크기 1..size 전체")
@with_services
def enumerate_command(services, size: int, up_to: bool):
    """동형 유형별 대표 poset 목록"""
    posets = services.poset.all_posets_up_to(size) if up_to else services.poset.all_posets(size)
    items = [PosetSchema.from_model(poset) for poset in posets]
    emit_result(services, SimpleListResponse[PosetSchema](items=items, total_count=len(items)))
