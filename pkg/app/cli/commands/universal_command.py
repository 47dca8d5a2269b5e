import click

from ...exceptions import VerificationFailure
from ...schemas.common import ValueResponse
from ...schemas.poset_schema import PosetMapSchema, PosetSchema
from ...schemas.system_schema import ExtensionResult, InverseSystemSchema, LevelMapFamilySchema, LiftResult
from ...utils.io_utils import load_schema
from ..context import emit_result, with_services


def _load_map(path: str):
    return load_schema(path, PosetMapSchema).to_model()


# =========================
# 레벨 P_n
# =========================


@click.command("level")
@click.argument("n", type=click.IntRange(min=1))
@click.option("--literal", is_flag=True, help="순서 절을 모든 쌍에 적용해 만든 행렬 버전")
@with_services
def level_command(services, n: int, literal: bool):
    """P_n = {0,1,2,3}^n (원소는 사전순 단어, strict 쌍 출력)"""
    level = services.universal.literal_level(n) if literal else services.universal.level(n)
    emit_result(services, PosetSchema.from_model(level), dot=services.poset.to_dot(level, name=f"P{n}"))


@click.command("projection")
@click.argument("n", type=click.IntRange(min=2))
@click.argument("k", type=click.IntRange(min=1))
@with_services
def projection_command(services, n: int, k: int):
    """p_k^n: P_n → P_k (앞 k 좌표로 자르기)"""
    projection = services.universal.projection(n, k)
    emit_result(services, ValueResponse(value=projection.assignment.tolist(), detail=f"P_{n} → P_{k}"))


@click.command("fibers")
@click.argument("m", type=click.IntRange(min=2))
@click.argument("k", type=click.IntRange(min=1))
@click.argument("endpoint")
@with_services
def fibers_command(services, m: int, k: int, endpoint: str):
    """P_k 의 component 위에 놓인 P_m 쌍의 L / U / LU 분류와 canonical 쌍"""
    fiber = services.universal.fiber_pairs(m, k, endpoint)
    upper = services.universal.level(m)
    lower = services.universal.level(k)
    x, y = fiber.component

    def labelled(pairs):
        return [[upper.label(int(low)), upper.label(int(high))] for low, high in pairs.tolist()]

    emit_result(services, {
        "component": [lower.label(x), lower.label(y)],
        "counts": list(fiber.counts()),
        "lower_type": labelled(fiber.lower_type),
        "upper_type": labelled(fiber.upper_type),
        "cross_type": labelled(fiber.cross_type),
        "canonical": labelled(services.universal.canonical_pairs(m, k, lower.label(x))),
        "has_isolated": services.universal.fiber_has_isolated(m, k, endpoint),
    })


# =========================
# 확장 solver, (U), (A)
# =========================


@click.command("solve-extension")
@click.argument("map_file")
@click.option("--strategy", type=click.Choice(["global", "per_component"]), default="global", show_default=True)
@with_services
def solve_extension_command(services, map_file: str, strategy: str):
    """quotient p: H → P_k 에 대해 p∘g = p_k^m 인 quotient g: P_m → H"""
    p = _load_map(map_file)
    m, solution = services.universal.solve_extension(p, strategy=strategy)
    emit_result(services, ExtensionResult.from_model(m, solution))


@click.command("absorption")
@click.argument("map_file")
@click.option("--strategy", type=click.Choice(["global", "per_component"]), default="global", show_default=True)
@click.option("--lattice", "on_lattice", is_flag=True, help="ideal 격자 쪽에서 표본 검사")
@with_services
def absorption_command(services, map_file: str, strategy: str, on_lattice: bool):
    """solver 결과가 quotient 이고 삼각형이 가환인지 (실패 시 종료 코드 1)"""
    p = _load_map(map_file)
    if on_lattice:
        holds = services.universal.check_lattice_absorption(p, samples=min(services.settings.sample_count, 1000))
    else:
        holds = services.universal.check_absorption(p, strategy=strategy)
    emit_result(services, ValueResponse(value=holds))
    if not holds:
        raise VerificationFailure("흡수 성질이 성립하지 않습니다")


@click.command("witness-u")
@click.argument("poset_file")
@click.option("--lattice", "on_lattice", is_flag=True, help="유도 사상 𝒪(P_n) → 𝒪(P) 가 onto 인지도 확인")
@with_services
def witness_u_command(services, poset_file: str, on_lattice: bool):
    """가장 작은 n 과 quotient P_n → P"""
    poset = services.poset.require_valid(load_schema(poset_file, PosetSchema).to_model())
    n, witness = services.universal.witness_u(poset)
    payload = {"n": n, "assignment": witness.assignment.tolist()}
    if on_lattice:
        payload["lattice_onto"] = services.universal.check_lattice_universality(poset)
    emit_result(services, payload)


@click.command("factor")
@click.argument("map_file")
@click.option("--i", "rank", type=click.IntRange(min=1), required=True, help="cylinder 순위")
@with_services
def factor_command(services, map_file: str, rank: int):
    """rank-i cylinder 위에서 상수인 f: P_j → L 을 h∘p_i^j 로 분해"""
    factor = services.universal.factor_through_level(_load_map(map_file), rank)
    emit_result(services, ValueResponse(value=factor.assignment.tolist(), detail=f"h: P_{rank} → L"))


# =========================
# universal quotient, lift
# =========================


@click.command("universal")
@click.argument("system_file")
@click.option("--levels", type=click.IntRange(min=1), default=None, help="만들 레벨 수 (기본: 역계 전체)")
@with_services
def universal_command(services, system_file: str, levels):
    """역계 (H_k) 로 가는 가환 레벨 사상 f_k: P_{i_k} → H_k"""
    system = load_schema(system_file, InverseSystemSchema).to_model()
    family = services.universal.build_universal_quotient(system, levels)
    failures = services.universal.verify_family(family)
    emit_result(services, LevelMapFamilySchema.from_model(family))
    if failures:
        raise VerificationFailure("; ".join(failures))


@click.command("lift")
@click.argument("t_file")
@click.argument("g_file")
@with_services
def lift_command(services, t_file: str, g_file: str):
    """t: P_i → A 와 quotient g: B → A 에 대해 g∘l = t∘p_i^m 인 l: P_m → B"""
    t, g = _load_map(t_file), _load_map(g_file)
    m, lift = services.universal.lift_through_quotient(t, g)
    if not services.universal.lift_commutes(t, g, m, lift):
        raise VerificationFailure("lift 사각형이 가환이 아닙니다")
    emit_result(services, LiftResult(m=m, lift=PosetMapSchema.from_model(lift)))
