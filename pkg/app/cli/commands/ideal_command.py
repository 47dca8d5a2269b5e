from typing import Tuple

import click

from ...models.poset_model import DownSet
from ...schemas.common import SimpleListResponse, ValueResponse
from ...schemas.lattice_schema import BirkhoffReport, IdealLatticeSchema, IdealSchema
from ...schemas.poset_schema import PosetMapSchema, PosetSchema
from ...utils.io_utils import load_schema
from ..context import emit_result, with_services


def _load_poset(services, path: str):
    return services.poset.require_valid(load_schema(path, PosetSchema).to_model())


def _load_lattice(services, path: str):
    """poset JSON 을 격자로 읽습니다 (join/meet 이 없으면 NotALatticeError)"""
    return services.ideal.lattice_from_poset(_load_poset(services, path))


# =========================
# 𝒪(P)
# =========================


@click.command("ideals")
@click.argument("poset_file")
@click.option("--lattice", "include_lattice", is_flag=True, help="down-set 목록과 포함 관계까지 출력")
@click.option("--antichains", is_flag=True, help="antichain 수로 개수를 교차 확인")
@with_services
def ideals_command(services, poset_file: str, include_lattice: bool, antichains: bool):
    """모든 down-set 𝒪(P)"""
    poset = _load_poset(services, poset_file)
    ideals = services.ideal.all_down_sets(poset)
    payload = IdealLatticeSchema.from_model(ideals, include_lattice).model_dump(mode="json", exclude_none=True)
    if antichains:
        payload["antichains"] = services.ideal.count_antichains(poset)
    emit_result(services, payload, dot=services.poset.to_dot(ideals.as_poset(), name="O"))


@click.command("principal")
@click.argument("poset_file")
@click.argument("element")
@with_services
def principal_command(services, poset_file: str, element: str):
    """principal ideal ↓x"""
    poset = _load_poset(services, poset_file)
    down_set = services.ideal.principal(poset, element)
    emit_result(services, IdealSchema.from_mask(poset, down_set.members))


@click.command("embed")
@click.argument("poset_file")
@with_services
def embed_command(services, poset_file: str):
    """x ↦ ↓x 순서 매장 P → 𝒪(P)"""
    poset = _load_poset(services, poset_file)
    embedding = services.ideal.principal_embedding(poset)
    emit_result(services, PosetMapSchema.from_model(embedding))


@click.command("decompose")
@click.argument("poset_file")
@click.argument("members", nargs=-1)
@with_services
def decompose_command(services, poset_file: str, members: Tuple[str, ...]):
    """down-set 의 canonical decomposition (극대 원소별 principal ideal)"""
    poset = _load_poset(services, poset_file)
    down_set = DownSet(poset, IdealSchema(members=list(members)).to_mask(poset), check=False)
    pieces = services.ideal.canonical_decomposition(down_set)
    items = [IdealSchema.from_mask(poset, piece.members) for piece in pieces]
    emit_result(services, SimpleListResponse[IdealSchema](items=items, total_count=len(items)))


@click.command("ideal-ops")
@click.argument("poset_file")
@click.argument("operation", type=click.Choice(["sup", "inf"]))
@click.argument("ideal_files", nargs=-1, required=True)
@with_services
def ideal_ops_command(services, poset_file: str, operation: str, ideal_files: Tuple[str, ...]):
    """𝒪(P) 안의 합집합(sup) 또는 교집합(inf)"""
    poset = _load_poset(services, poset_file)
    masks = [load_schema(path, IdealSchema).to_mask(poset) for path in ideal_files]
    if operation == "sup":
        result = services.ideal.lattice_sup(masks)
    else:
        result = services.ideal.lattice_inf(poset, masks)
    emit_result(services, IdealSchema.from_mask(poset, result))


# =========================
# 유한 격자
# =========================


@click.command("lattice")
@click.argument("kind", type=click.Choice(["powerset", "chain", "m3", "n5"]))
@click.argument("size", type=click.IntRange(min=1), default=2)
@with_services
def lattice_command(services, kind: str, size: int):
    """예제 격자: powerset k, chain n, M3, N5"""
    builders = {
        "powerset": lambda: services.ideal.powerset_lattice(size),
        "chain": lambda: services.ideal.chain_lattice(size),
        "m3": services.ideal.diamond_m3,
        "n5": services.ideal.pentagon_n5,
    }
    lattice = builders[kind]()
    emit_result(services, PosetSchema.from_model(lattice.carrier), dot=services.poset.to_dot(lattice.carrier, kind))


@click.command("birkhoff")
@click.argument("lattice_file")
@with_services
def birkhoff_command(services, lattice_file: str):
    """η: L → 𝒪(J(L)) (분배 격자가 아니면 위반 삼중쌍과 함께 종료 코드 1)"""
    lattice = _load_lattice(services, lattice_file)
    emit_result(services, BirkhoffReport.from_model(services.ideal.birkhoff_eta(lattice)))


@click.command("irreducibles")
@click.argument("lattice_file")
@with_services
def irreducibles_command(services, lattice_file: str):
    """join-irreducible 원소, 분배성 반례, join-prime 반례"""
    lattice = _load_lattice(services, lattice_file)
    irreducibles, irreducible_poset = services.ideal.join_irreducibles(lattice)
    distributive_violation = services.ideal.check_distributive(lattice)
    prime_violation = services.ideal.join_prime_violation(lattice)
    emit_result(services, {
        "irreducibles": [lattice.elements[x] for x in irreducibles],
        "irreducible_poset": PosetSchema.from_model(irreducible_poset).model_dump(),
        "distributive_violation": list(distributive_violation) if distributive_violation else None,
        "join_prime_violation": list(prime_violation) if prime_violation else None,
    })


@click.command("atoms")
@click.argument("lattice_file")
@with_services
def atoms_command(services, lattice_file: str):
    """0 을 덮는 원소와 atomic 여부"""
    lattice = _load_lattice(services, lattice_file)
    atoms = [lattice.elements[x] for x in services.ideal.atoms(lattice)]
    emit_result(services, ValueResponse(value=atoms, detail=f"atomic={services.ideal.is_atomic(lattice)}"))
