import click

# 도메인별 명령 모듈 imports
from .commands import (
    # poset
    poset_command,
    # 𝒪(P), 유한 격자
    ideal_command,
    # quotient map
    quotient_command,
    # P_n, 확장 solver
    universal_command,
    # thread, 끝이 상수인 점, ideal thread
    limit_command,
    # ternary 부호화
    ternary_command,
    # 수락 검증
    verify_command,
)

# 명령 설정 구성 (명령, 카테고리, 설명, 담당 라이브러리 연산)
# 라이브러리 연산은 정확히 한 명령에만 속합니다 (test_cli 의 coverage 테스트가 확인)
COMMAND_CONFIGS = [
    # poset
    {
        "command": poset_command.validate_command,
        "category": "poset",
        "description": "반사/반대칭/전이 공리 검사",
        "operations": ["poset.validate"],
    },
    {
        "command": poset_command.construct_command,
        "category": "poset",
        "description": "chain, antichain, point 구성",
        "operations": ["poset.chain", "poset.antichain", "poset.point"],
    },
    {
        "command": poset_command.combine_command,
        "category": "poset",
        "description": "linear sum, disjoint union",
        "operations": ["poset.linear_sum", "poset.disjoint_union"],
    },
    {
        "command": poset_command.maximal_command,
        "category": "poset",
        "description": "부분집합의 극대 원소",
        "operations": ["poset.maximal_elements"],
    },
    {
        "command": poset_command.components_command,
        "category": "poset",
        "description": "2-component 와 고립점",
        "operations": ["poset.two_components", "poset.is_two_component", "poset.isolated_points"],
    },
    {
        "command": poset_command.hasse_command,
        "category": "poset",
        "description": "cover 관계와 DOT 출력",
        "operations": ["poset.hasse_edges", "poset.to_dot"],
    },
    {
        "command": poset_command.isomorphic_command,
        "category": "poset",
        "description": "동형 검사",
        "operations": ["poset.is_isomorphic", "poset.find_isomorphism"],
    },
    {
        "command": poset_command.enumerate_command,
        "category": "poset",
        "description": "작은 poset 동형류 열거",
        "operations": ["poset.all_posets", "poset.all_posets_up_to"],
    },
    # 𝒪(P), 유한 격자
    {
        "command": ideal_command.ideals_command,
        "category": "ideal",
        "description": "모든 down-set 과 개수",
        "operations": ["ideal.all_down_sets", "ideal.count_antichains"],
    },
    {
        "command": ideal_command.principal_command,
        "category": "ideal",
        "description": "principal ideal ↓x",
        "operations": ["ideal.principal"],
    },
    {
        "command": ideal_command.embed_command,
        "category": "ideal",
        "description": "순서 매장 P → 𝒪(P)",
        "operations": ["ideal.principal_embedding"],
    },
    {
        "command": ideal_command.decompose_command,
        "category": "ideal",
        "description": "canonical decomposition",
        "operations": ["ideal.canonical_decomposition"],
    },
    {
        "command": ideal_command.ideal_ops_command,
        "category": "ideal",
        "description": "down-set 모임의 sup / inf",
        "operations": ["ideal.lattice_sup", "ideal.lattice_inf"],
    },
    {
        "command": ideal_command.lattice_command,
        "category": "ideal",
        "description": "예제 격자 (powerset, chain, M3, N5)",
        "operations": ["ideal.powerset_lattice", "ideal.chain_lattice", "ideal.diamond_m3", "ideal.pentagon_n5"],
    },
    {
        "command": ideal_command.birkhoff_command,
        "category": "ideal",
        "description": "Birkhoff η: L → 𝒪(J(L))",
        "operations": ["ideal.birkhoff_eta", "ideal.lattice_from_poset"],
    },
    {
        "command": ideal_command.irreducibles_command,
        "category": "ideal",
        "description": "join-irreducible, 분배성, join-prime 반례",
        "operations": ["ideal.join_irreducibles", "ideal.check_distributive", "ideal.join_prime_violation"],
    },
    {
        "command": ideal_command.atoms_command,
        "category": "ideal",
        "description": "atom 과 atomic 여부",
        "operations": ["ideal.atoms", "ideal.is_atomic"],
    },
    # quotient map
    {
        "command": quotient_command.classify_command,
        "category": "quotient",
        "description": "사상 분류와 DOT 출력",
        "operations": ["quotient.classify", "quotient.to_dot"],
    },
    {
        "command": quotient_command.compose_command,
        "category": "quotient",
        "description": "사상 합성",
        "operations": ["quotient.compose"],
    },
    {
        "command": quotient_command.sticks_command,
        "category": "quotient",
        "description": "sticks cover",
        "operations": ["quotient.sticks_cover"],
    },
    {
        "command": quotient_command.amalgamate_command,
        "category": "quotient",
        "description": "amalgamation 사각형",
        "operations": ["quotient.amalgamate"],
    },
    {
        "command": quotient_command.fiber_product_command,
        "category": "quotient",
        "description": "fiber product",
        "operations": ["quotient.fiber_product"],
    },
    {
        "command": quotient_command.induce_command,
        "category": "quotient",
        "description": "유도 사상 p̂ 과 meet 보존 판정",
        "operations": ["quotient.induce", "quotient.meet_preservation_criterion"],
    },
    # P_n, 확장 solver
    {
        "command": universal_command.level_command,
        "category": "universal",
        "description": "레벨 P_n",
        "operations": ["universal.level", "universal.literal_level"],
    },
    {
        "command": universal_command.projection_command,
        "category": "universal",
        "description": "사영 p_k^n",
        "operations": ["universal.projection"],
    },
    {
        "command": universal_command.fibers_command,
        "category": "universal",
        "description": "component 위 fiber 쌍 분류",
        "operations": ["universal.fiber_pairs", "universal.canonical_pairs", "universal.fiber_has_isolated"],
    },
    {
        "command": universal_command.solve_extension_command,
        "category": "universal",
        "description": "확장 solver g: P_m → H",
        "operations": ["universal.solve_extension"],
    },
    {
        "command": universal_command.absorption_command,
        "category": "universal",
        "description": "흡수 성질 검사 (poset / 격자)",
        "operations": ["universal.check_absorption", "universal.check_lattice_absorption"],
    },
    {
        "command": universal_command.witness_u_command,
        "category": "universal",
        "description": "quotient P_n → P witness",
        "operations": ["universal.witness_u", "universal.check_lattice_universality"],
    },
    {
        "command": universal_command.factor_command,
        "category": "universal",
        "description": "cylinder 상수 사상 분해",
        "operations": ["universal.factor_through_level"],
    },
    {
        "command": universal_command.universal_command,
        "category": "universal",
        "description": "역계로 가는 universal quotient",
        "operations": ["universal.build_universal_quotient", "universal.verify_family"],
    },
    {
        "command": universal_command.lift_command,
        "category": "universal",
        "description": "quotient 를 통한 lift",
        "operations": ["universal.lift_through_quotient", "universal.lift_commutes"],
    },
    # thread, 끝이 상수인 점, ideal thread
    {
        "command": limit_command.thread_solve_command,
        "category": "limit",
        "description": "thread 선택 (막다른 원소 처리)",
        "operations": ["limit.solve_thread", "limit.naive_greedy_thread"],
    },
    {
        "command": limit_command.thread_order_command,
        "category": "limit",
        "description": "역계 위 thread 비교",
        "operations": ["limit.thread_order", "limit.thread_from_labels"],
    },
    {
        "command": limit_command.compare_command,
        "category": "limit",
        "description": "끝이 상수인 점 비교",
        "operations": ["limit.symbolic_compare"],
    },
    {
        "command": limit_command.isolated_command,
        "category": "limit",
        "description": "고립점 판정과 cylinder 안의 고립점",
        "operations": [
            "limit.is_isolated",
            "limit.isolated_dense_witness",
            "limit.isolated_by_search",
            "limit.comparability_candidates",
        ],
    },
    {
        "command": limit_command.ideal_thread_command,
        "category": "limit",
        "description": "0, 1, principal ideal thread",
        "operations": ["limit.zero_thread", "limit.top_thread", "limit.principal_thread"],
    },
    {
        "command": limit_command.ideal_inf_command,
        "category": "limit",
        "description": "ideal thread 하한 (lookahead)",
        "operations": ["limit.ideal_inf", "limit.ideal_inf_stable"],
    },
    {
        "command": limit_command.ideal_sup_command,
        "category": "limit",
        "description": "ideal thread 상한",
        "operations": ["limit.ideal_lattice_sup"],
    },
    {
        "command": limit_command.ideal_leq_command,
        "category": "limit",
        "description": "ideal thread 순서",
        "operations": ["limit.thread_leq"],
    },
    {
        "command": limit_command.atom_command,
        "category": "limit",
        "description": "thread 아래 atom",
        "operations": ["limit.find_atom_below", "limit.is_atom"],
    },
    {
        "command": limit_command.principal_decomposition_command,
        "category": "limit",
        "description": "principal thread 분해",
        "operations": ["limit.principal_decomposition"],
    },
    {
        "command": limit_command.limit_quotient_command,
        "category": "limit",
        "description": "universal quotient 의 유도 ideal 사상",
        "operations": ["limit.induced_limit_quotient"],
    },
    # ternary 부호화
    {
        "command": ternary_command.encode_command,
        "category": "ternary",
        "description": "ψ: down-set → {0,1,2}^{T_n}",
        "operations": ["ternary.psi"],
    },
    {
        "command": ternary_command.decode_command,
        "category": "ternary",
        "description": "ψ⁻¹",
        "operations": ["ternary.psi_decode"],
    },
    {
        "command": ternary_command.q_step_command,
        "category": "ternary",
        "description": "결합 사상 q 와 그 합성",
        "operations": ["ternary.q_step", "ternary.q_composite"],
    },
    {
        "command": ternary_command.ternary_op_command,
        "category": "ternary",
        "description": "좌표별 join / meet",
        "operations": ["ternary.ternary_join", "ternary.ternary_meet"],
    },
    {
        "command": ternary_command.irreducible_command,
        "category": "ternary",
        "description": "join-irreducible 판정",
        "operations": ["ternary.is_join_irreducible"],
    },
    {
        "command": ternary_command.verify_square_command,
        "category": "ternary",
        "description": "q∘ψ = ψ∘p̂ 사각형 검증",
        "operations": ["ternary.verify_square", "ternary.verify_composite"],
    },
    {
        "command": ternary_command.verify_psi_command,
        "category": "ternary",
        "description": "ψ 의 전단사/순서/join 보존 검증",
        "operations": ["ternary.verify_psi"],
    },
    {
        "command": ternary_command.criterion_command,
        "category": "ternary",
        "description": "격자 사상의 유도 quotient 판정",
        "operations": ["ternary.quotient_isomorphism_criterion", "ternary.induced_as_lattice_map"],
    },
    # 수락 검증
    {
        "command": verify_command.verify_all_command,
        "category": "verify",
        "description": "수락 검증 전체 실행",
        "operations": ["verification.verify_all"],
    },
]


def register_commands(group: click.Group):
    """COMMAND_CONFIGS 의 명령을 모두 등록합니다"""
    for config in COMMAND_CONFIGS:
        group.add_command(config["command"])


@click.command("commands")
def commands_command():
    """카테고리별 명령 목록"""
    categories = {}
    for config in COMMAND_CONFIGS:
        categories.setdefault(config["category"], []).append(
            f"{config['command'].name:<24} {config['description']}"
        )
    for category, lines in categories.items():
        click.echo(f"[{category}]")
        for line in lines:
            click.echo(f"  {line}")
