from typing import Optional

import click

from ...exceptions import VerificationFailure
from ...schemas.common import ValueResponse
from ...schemas.lattice_schema import IdealSchema
from ...schemas.poset_schema import PosetMapSchema
from ...schemas.ternary_schema import TernaryFunctionSchema
from ...utils.io_utils import load_schema
from ..context import emit_result, with_services


def _load_function(path: str):
    return load_schema(path, TernaryFunctionSchema).to_model()


def _emit_check(services, result):
    emit_result(services, result, text=f"{result.name}: {'PASS' if result.passed else 'FAIL'} ({result.cases} cases)")
    if not result.passed:
        raise VerificationFailure(result.detail or f"{result.name} 실패")


# =========================
# ψ 와 q
# =========================


@click.command("encode")
@click.argument("n", type=click.IntRange(min=1))
@click.argument("ideal_file")
@with_services
def encode_command(services, n: int, ideal_file: str):
    """P_n 의 down-set → {0,1,2}^{T_n}"""
    level = services.universal.level(n)
    mask = load_schema(ideal_file, IdealSchema).to_mask(level)
    emit_result(services, TernaryFunctionSchema.from_model(services.ternary.psi(n, mask)))


@click.command("decode")
@click.argument("function_file")
@with_services
def decode_command(services, function_file: str):
    """{0,1,2}^{T_n} → P_n 의 down-set"""
    f = _load_function(function_file)
    mask = services.ternary.psi_decode(f)
    emit_result(services, IdealSchema.from_mask(services.universal.level(f.n), mask))


@click.command("q-step")
@click.argument("function_file")
@click.option("--to", "target", type=click.IntRange(min=1), default=None, help="내려갈 깊이 k (기본 n−1)")
@with_services
def q_step_command(services, function_file: str, target: Optional[int]):
    """q: {0,1,2}^{T_{n+1}} → {0,1,2}^{T_n} (여러 단계면 합성)"""
    f = _load_function(function_file)
    k = target or f.n - 1
    result = services.ternary.q_step(k, f) if k == f.n - 1 else services.ternary.q_composite(k, f)
    emit_result(services, TernaryFunctionSchema.from_model(result))


@click.command("ternary-op")
@click.argument("operation", type=click.Choice(["join", "meet"]))
@click.argument("first_file")
@click.argument("second_file")
@with_services
def ternary_op_command(services, operation: str, first_file: str, second_file: str):
    """좌표별 max (join) 또는 min (meet)"""
    f, g = _load_function(first_file), _load_function(second_file)
    result = services.ternary.ternary_join(f, g) if operation == "join" else services.ternary.ternary_meet(f, g)
    emit_result(services, TernaryFunctionSchema.from_model(result))


@click.command("irreducible")
@click.argument("function_file")
@with_services
def irreducible_command(services, function_file: str):
    """join-irreducible 여부 (0 아닌 값이 한 곳)"""
    f = _load_function(function_file)
    emit_result(services, ValueResponse(value=services.ternary.is_join_irreducible(f)))


# =========================
# 검증, 판정
# =========================


@click.command("verify-square")
@click.argument("n", type=click.IntRange(min=1))
@click.option("--composite", is_flag=True, help="세 단계 합성 q∘q∘ψ_3 = ψ_1∘p̂ 도 확인")
@with_services
def verify_square_command(services, n: int, composite: bool):
    """q∘ψ_{n+1} = ψ_n∘p̂ (n=1 은 전수, 이후는 --samples 표본)"""
    _emit_check(services, services.ternary.verify_square(n))
    if composite:
        _emit_check(services, services.ternary.verify_composite(seed=services.settings.seed))


@click.command("verify-psi")
@click.argument("n", type=click.IntRange(min=1))
@with_services
def verify_psi_command(services, n: int):
    """ψ_n 이 전단사이고 순서와 join 을 보존하는지"""
    samples = min(services.settings.sample_count, 2000) or 2000
    _emit_check(services, services.ternary.verify_psi(n, samples=samples, seed=services.settings.seed))


@click.command("criterion")
@click.argument("map_file")
@click.option("--induced", is_flag=True, help="입력을 poset quotient p 로 보고 p̂: 𝒪(Q) → 𝒪(P) 를 판정")
@with_services
def criterion_command(services, map_file: str, induced: bool):
    """격자 사상이 유도 quotient 와 동형인지 (조건 ii → i → iii)"""
    schema = load_schema(map_file, PosetMapSchema)
    if induced:
        source, target, assignment = services.ternary.induced_as_lattice_map(
            services.quotient.induce(schema.to_model())
        )
    else:
        source = services.ideal.lattice_from_poset(services.poset.require_valid(schema.domain.to_model()))
        target = services.ideal.lattice_from_poset(services.poset.require_valid(schema.codomain.to_model()))
        assignment = schema.assignment
    emit_result(services, services.ternary.quotient_isomorphism_criterion(source, target, assignment))
