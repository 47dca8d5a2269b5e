from typing import Optional

import click

from ...exceptions import EncodingError
from ...models.thread_model import SymbolicPoint
from ...schemas.common import SimpleListResponse, ValueResponse
from ...schemas.system_schema import (
    IdealThreadSchema,
    InverseSystemSchema,
    ThreadSchema,
    ThreadSystemSchema,
)
from ...utils.io_utils import load_schema
from ..context import emit_result, with_services

system_option = click.option(
    "--system", "system_file", default=None, help="역계 JSON (생략 시 P_n 역계)"
)


def _load_threads(services, system_file: Optional[str], *thread_files: str):
    """ideal thread 들을 읽고 같은 역계 위에서 호환성을 확인합니다"""
    schemas = [load_schema(path, IdealThreadSchema) for path in thread_files]
    depth = max(len(schema.entries) for schema in schemas)
    if system_file:
        system = load_schema(system_file, InverseSystemSchema).to_model()
    else:
        system = services.universal.p_system(depth)
    return [services.limit.require_compatible(schema.to_model(system)) for schema in schemas]


# =========================
# thread
# =========================


@click.command("thread-solve")
@click.argument("system_file")
@click.option("--naive", is_flag=True, help="막다른 원소를 고려하지 않는 탐욕 선택 (실패할 수 있음)")
@with_services
def thread_solve_command(services, system_file: str, naive: bool):
    """모든 레벨에서 이어지는 thread 선택 (호환 집합이 비면 그 위치와 함께 종료 코드 1)"""
    system = load_schema(system_file, ThreadSystemSchema).to_model()
    thread = services.limit.naive_greedy_thread(system) if naive else services.limit.solve_thread(system)
    emit_result(services, ThreadSchema.from_model(thread))


@click.command("thread-order")
@click.argument("system_file")
@click.argument("first")
@click.argument("second")
@with_services
def thread_order_command(services, system_file: str, first: str, second: str):
    """역계 위 두 thread (쉼표로 구분한 레벨별 라벨) 의 비교"""
    system = load_schema(system_file, InverseSystemSchema).to_model()
    x = services.limit.thread_from_labels(system, first.split(","))
    y = services.limit.thread_from_labels(system, second.split(","))
    emit_result(services, ValueResponse(value=services.limit.thread_order(x, y).value))


# =========================
# 끝이 상수인 점
# =========================


@click.command("compare")
@click.argument("first")
@click.argument("second")
@with_services
def compare_command(services, first: str, second: str):
    """끝이 상수인 두 점 비교 (예: 0(1) 과 1(1))"""
    x, y = SymbolicPoint.parse(first), SymbolicPoint.parse(second)
    emit_result(services, ValueResponse(value=services.limit.symbolic_compare(x, y).value, detail=f"{x} vs {y}"))


@click.command("isolated")
@click.argument("point")
@click.option("--search", "max_prefix", type=click.IntRange(min=0), default=None,
              help="prefix 길이 ≤ K 인 모든 점과의 전수 비교로 교차 확인")
@with_services
def isolated_command(services, point: str, max_prefix: Optional[int]):
    """점이 고립점인지, 또는 prefix 단어가 주어지면 그 cylinder 안의 고립점"""
    if "(" in point:
        x = SymbolicPoint.parse(point)
    else:
        prefix = [int(ch) for ch in point if ch in "0123"]
        if len(prefix) != len(point):
            raise EncodingError(f"prefix 는 0-3 단어여야 합니다: {point!r}")
        x = services.limit.isolated_dense_witness(prefix)
    payload = {
        "point": str(x),
        "isolated": services.limit.is_isolated(x),
        "candidates": [str(y) for y in services.limit.comparability_candidates(x)],
    }
    if max_prefix is not None:
        payload["isolated_by_search"] = services.limit.isolated_by_search(x, max_prefix)
    emit_result(services, payload)


# =========================
# ideal thread 격자
# =========================


@click.command("ideal-thread")
@click.argument("kind", type=click.Choice(["zero", "top", "principal"]))
@click.argument("element", required=False)
@click.option("--levels", "thread_depth", type=click.IntRange(min=1), default=2, show_default=True,
              help="P_n 역계의 깊이 N")
@with_services
def ideal_thread_command(services, kind: str, element: Optional[str], thread_depth: int):
    """P_n 역계 위의 0, 1, principal thread (principal 은 마지막 레벨 원소 라벨 필요)"""
    system = services.universal.p_system(thread_depth)
    if kind == "zero":
        thread = services.limit.zero_thread(system)
    elif kind == "top":
        thread = services.limit.top_thread(system)
    else:
        if element is None:
            raise click.UsageError("principal thread 에는 원소 라벨이 필요합니다")
        thread = services.limit.principal_thread(system, element)
    emit_result(services, IdealThreadSchema.from_model(thread))


@click.command("ideal-inf")
@click.argument("first_file")
@click.argument("second_file")
@click.option("--levels", "thread_depth", type=click.IntRange(min=1), default=None, help="출력 깊이 N")
@click.option("--lookahead", type=click.IntRange(min=1), default=None, help="미리 보는 깊이 M ≥ N")
@click.option("--stable", is_flag=True, help="N..M 의 모든 lookahead 에서 결과가 같은지 보고")
@system_option
@with_services
def ideal_inf_command(services, first_file: str, second_file: str, thread_depth, lookahead, stable: bool,
                      system_file):
    """두 ideal thread 의 하한"""
    a, b = _load_threads(services, system_file, first_file, second_file)
    depth = thread_depth or a.depth
    if stable:
        results, is_stable = services.limit.ideal_inf_stable(a, b, depth, lookahead or a.depth)
        emit_result(services, {
            "stable": is_stable,
            "results": [IdealThreadSchema.from_model(result).model_dump() for result in results],
        })
        return
    emit_result(services, IdealThreadSchema.from_model(services.limit.ideal_inf(a, b, depth, lookahead)))


@click.command("ideal-sup")
@click.argument("thread_files", nargs=-1, required=True)
@system_option
@with_services
def ideal_sup_command(services, thread_files, system_file):
    """ideal thread 들의 상한 (좌표별 합집합)"""
    threads = _load_threads(services, system_file, *thread_files)
    emit_result(services, IdealThreadSchema.from_model(services.limit.ideal_lattice_sup(threads)))


@click.command("ideal-leq")
@click.argument("first_file")
@click.argument("second_file")
@system_option
@with_services
def ideal_leq_command(services, first_file: str, second_file: str, system_file):
    """좌표별 포함 a ≤ b"""
    a, b = _load_threads(services, system_file, first_file, second_file)
    emit_result(services, ValueResponse(value=services.limit.thread_leq(a, b)))


@click.command("atom")
@click.argument("thread_file")
@system_option
@with_services
def atom_command(services, thread_file: str, system_file):
    """0 이 아닌 thread 아래의 atom 하나 (principal thread)"""
    (a,) = _load_threads(services, system_file, thread_file)
    atom = services.limit.find_atom_below(a)
    emit_result(services, {
        "atom": IdealThreadSchema.from_model(atom).model_dump(),
        "is_atom": services.limit.is_atom(atom),
    })


@click.command("principal-decomposition")
@click.argument("thread_file")
@system_option
@with_services
def principal_decomposition_command(services, thread_file: str, system_file):
    """principal thread 들의 합으로 쓰기"""
    (a,) = _load_threads(services, system_file, thread_file)
    family = services.limit.principal_decomposition(a)
    items = [IdealThreadSchema.from_model(thread) for thread in family]
    emit_result(services, SimpleListResponse[IdealThreadSchema](items=items, total_count=len(items)))


@click.command("limit-quotient")
@click.argument("system_file")
@click.argument("thread_file")
@with_services
def limit_quotient_command(services, system_file: str, thread_file: str):
    """universal quotient 가 유도하는 ideal thread 사상 q(a)"""
    system = load_schema(system_file, InverseSystemSchema).to_model()
    family = services.universal.build_universal_quotient(system)
    schema = load_schema(thread_file, IdealThreadSchema)
    a = services.limit.require_compatible(schema.to_model(services.universal.p_system(len(schema.entries))))
    image = services.limit.induced_limit_quotient(family, a)
    emit_result(services, {"indices": family.indices, "image": IdealThreadSchema.from_model(image).model_dump()})
