import click
import numpy as np

from ...schemas.lattice_schema import InducedMapReport
from ...schemas.poset_schema import PosetMapSchema, PosetSchema
from ...utils.io_utils import load_schema
from ..context import emit_result, with_services


def _load_map(path: str):
    return load_schema(path, PosetMapSchema).to_model()


@click.command("classify")
@click.argument("map_file")
@with_services
def classify_command(services, map_file: str):
    """사상 분류: 순서 보존, onto, quotient (처음 반례 포함)"""
    poset_map = _load_map(map_file)
    emit_result(services, services.quotient.classify(poset_map), dot=services.quotient.to_dot(poset_map))


@click.command("compose")
@click.argument("first_file")
@click.argument("second_file")
@with_services
def compose_command(services, first_file: str, second_file: str):
    """second∘first (first 를 먼저 적용)"""
    first, second = _load_map(first_file), _load_map(second_file)
    composite = services.quotient.compose(second, first)
    emit_result(services, {
        "map": PosetMapSchema.from_model(composite).model_dump(),
        "classification": services.quotient.classify(composite).model_dump(),
    }, dot=services.quotient.to_dot(composite))


@click.command("sticks")
@click.argument("poset_file")
@with_services
def sticks_command(services, poset_file: str):
    """2-chain 서로소 합에서 가는 sticks cover"""
    poset = services.poset.require_valid(load_schema(poset_file, PosetSchema).to_model())
    cover = services.quotient.sticks_cover(poset)
    emit_result(services, {
        "count": cover.count,
        "pair_count": cover.pair_count,
        "map": PosetMapSchema.from_model(cover.map).model_dump(),
    }, dot=services.quotient.to_dot(cover.map))


@click.command("amalgamate")
@click.argument("f_file")
@click.argument("g_file")
@with_services
def amalgamate_command(services, f_file: str, g_file: str):
    """quotient f: B → A, g: C → A 의 amalgamation 사각형"""
    f, g = _load_map(f_file), _load_map(g_file)
    result = services.quotient.amalgamate(f, g)
    via_f = f.assignment[result.f_prime.assignment[result.q.assignment]]
    via_g = g.assignment[result.g_prime.assignment[result.p.assignment]]
    emit_result(services, {
        "apex": PosetSchema.from_model(result.apex).model_dump(),
        "q": result.q.assignment.tolist(),
        "p": result.p.assignment.tolist(),
        "f_prime": PosetMapSchema.from_model(result.f_prime).model_dump(),
        "g_prime": PosetMapSchema.from_model(result.g_prime).model_dump(),
        "commutes": bool(np.array_equal(via_f, via_g)),
    })


@click.command("fiber-product")
@click.argument("t_file")
@click.argument("g_file")
@with_services
def fiber_product_command(services, t_file: str, g_file: str):
    """t: A′ → A, g: B → A 의 fiber product A′ ×_A B 와 두 사영"""
    t, g = _load_map(t_file), _load_map(g_file)
    product = services.quotient.fiber_product(t, g)
    emit_result(services, {
        "poset": PosetSchema.from_model(product.poset).model_dump(),
        "first": product.first.assignment.tolist(),
        "second": product.second.assignment.tolist(),
    })


@click.command("induce")
@click.argument("map_file")
@with_services
def induce_command(services, map_file: str):
    """p̂: 𝒪(Q) → 𝒪(P) 전체 표와 meet 보존 판정"""
    poset_map = _load_map(map_file)
    induced = services.quotient.induce(poset_map)
    criterion, witness = services.quotient.meet_preservation_criterion(poset_map)
    ideals = induced.domain_ideals or services.ideal.all_down_sets(poset_map.domain)
    emit_result(services, InducedMapReport.from_model(induced, ideals, criterion, witness))
