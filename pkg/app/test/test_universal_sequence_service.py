import numpy as np
import pytest

from app.exceptions import DepthBoundError, PosetValidationError
from app.models.level_model import clause_leq, parse_word
from app.models.poset_model import PosetMap


# =========================
# 레벨과 사영
# =========================

def test_first_level_has_two_sticks(universal_service):
    level = universal_service.level(1)
    assert level.elements == ("0", "1", "2", "3")
    lows, highs = level.strict_pairs()
    assert list(zip(lows.tolist(), highs.tolist())) == [(0, 1), (2, 3)]


def test_second_level_pairs(universal_service):
    level = universal_service.level(2)
    assert level.component_count == 8
    assert level.leq(level.index_of("00"), level.index_of("10"))
    assert level.leq(level.index_of("20"), level.index_of("30"))
    assert level.leq(level.index_of("12"), level.index_of("13"))
    assert not level.comparable(level.index_of("02"), level.index_of("12"))
    assert not level.comparable(level.index_of("00"), level.index_of("01"))


def test_every_element_has_exactly_one_partner(universal_service):
    level = universal_service.level(3)
    lows, highs = level.strict_pairs()
    assert sorted(np.concatenate([lows, highs]).tolist()) == list(range(level.size))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_literal_level_matches_structural_level(universal_service, n):
    assert universal_service.literal_level(n) == universal_service.level(n).to_finite_poset()


def test_order_clauses():
    assert clause_leq(parse_word("0"), parse_word("1"))
    assert clause_leq(parse_word("021"), parse_word("031"))
    assert not clause_leq(parse_word("022"), parse_word("032"))
    assert not clause_leq(parse_word("1"), parse_word("0"))


def test_level_depth_bound(universal_service, settings):
    with pytest.raises(DepthBoundError) as caught:
        universal_service.level(settings.depth_bound + 1)
    assert caught.value.exit_code == 1


def test_projection_truncates_words(universal_service):
    projection = universal_service.projection(2, 1)
    assert projection.image_label("20") == "2"
    assert projection.image_label("13") == "1"
    with pytest.raises(PosetValidationError):
        universal_service.projection(1, 1)


def test_projections_compose_and_are_quotients(quotient_service, universal_service):
    direct = universal_service.projection(3, 1)
    stepwise = universal_service.projection(2, 1).after(universal_service.projection(3, 2))
    assert direct == stepwise
    for n, k in [(2, 1), (3, 1), (3, 2)]:
        assert quotient_service.classify(universal_service.projection(n, k)).is_quotient


# =========================
# fiber 구조
# =========================

@pytest.mark.parametrize("m, k", [(2, 1), (3, 1), (3, 2)])
def test_fiber_pair_counts(universal_service, m, k):
    depth = m - k
    fiber = universal_service.fiber_pairs(m, k, "0" * k)
    expected = 2 ** (depth - 1) * (2 ** depth - 1)
    assert fiber.counts() == (expected, expected, 2 ** depth)
    assert universal_service.lower_type_capacity(depth) == expected


def test_fiber_component_from_either_endpoint(universal_service):
    assert universal_service.fiber_pairs(2, 1, "3").component == (2, 3)
    assert universal_service.fiber_pairs(2, 1, "0").component == (0, 1)


def test_canonical_pairs_are_lower_type(universal_service):
    fiber = universal_service.fiber_pairs(3, 1, "0")
    canonical = universal_service.canonical_pairs(3, 1, "0")
    assert len(canonical) == 2
    lower = {tuple(pair) for pair in fiber.lower_type.tolist()}
    assert {tuple(pair) for pair in canonical.tolist()} <= lower


def test_fibers_have_no_isolated_points(universal_service):
    assert not universal_service.fiber_has_isolated(3, 1, "0")
    assert not universal_service.fiber_has_isolated(2, 1, "2")


# =========================
# 확장 solver
# =========================

def test_solve_extension_identity_global(quotient_service, universal_service):
    identity = quotient_service.identity_map(universal_service.level(1))
    m, solution = universal_service.solve_extension(identity)
    assert m == 5
    assert quotient_service.classify(solution).is_quotient
    assert np.array_equal(solution.assignment, solution.domain.codes // 4 ** (m - 1))


def test_solve_extension_identity_per_component(quotient_service, universal_service):
    identity = quotient_service.identity_map(universal_service.level(1))
    m, solution = universal_service.solve_extension(identity, strategy="per_component")
    assert m == 2
    assert universal_service.check_absorption(identity, strategy="per_component")


def test_solve_extension_depth_bound(quotient_service, universal_service):
    identity = quotient_service.identity_map(universal_service.level(1))
    with pytest.raises(DepthBoundError) as caught:
        universal_service.solve_extension(identity, depth_bound=3)
    assert caught.value.required_depth == 5


def test_absorption_with_isolated_and_same_side_pairs(universal_service, poset_service):
    # r < b 와 고립점 u 는 component 0, s < t 와 x < y 는 component 1 위에 놓입니다
    poset = poset_service.build(["r", "b", "u", "s", "t", "x", "y"], [(0, 1), (3, 4), (5, 6)])
    p = PosetMap(poset, universal_service.level(1), [0, 1, 1, 2, 2, 2, 3])
    m, _ = universal_service.solve_extension(p, strategy="per_component")
    assert m == 2
    assert universal_service.check_absorption(p, strategy="per_component")
    assert universal_service.check_absorption(p)
    assert universal_service.check_lattice_absorption(p, samples=20)


def test_unknown_strategy_rejected(quotient_service, universal_service):
    identity = quotient_service.identity_map(universal_service.level(1))
    with pytest.raises(PosetValidationError):
        universal_service.solve_extension(identity, strategy="random")


# =========================
# (U) witness, 분해, lift
# =========================

def test_witness_u_depths(quotient_service, universal_service, poset_service, chain3):
    n, witness = universal_service.witness_u(poset_service.point())
    assert n == 1
    assert quotient_service.classify(witness).is_quotient
    n, witness = universal_service.witness_u(chain3)
    assert n == 2
    assert quotient_service.classify(witness).is_quotient


def test_lattice_universality(universal_service, v_poset, chain3):
    assert universal_service.check_lattice_universality(v_poset)
    assert universal_service.check_lattice_universality(chain3)


def test_factor_through_level(universal_service, poset_service):
    chain2 = poset_service.chain(2)
    h = PosetMap(universal_service.level(1), chain2, [0, 1, 0, 0])
    f = h.after(universal_service.projection(2, 1))
    factor = universal_service.factor_through_level(f, 1)
    assert factor.assignment.tolist() == [0, 1, 0, 0]


def test_factor_rejects_map_not_constant_on_cylinders(universal_service, chain3):
    _, witness = universal_service.witness_u(chain3)
    with pytest.raises(PosetValidationError):
        universal_service.factor_through_level(witness, 1)


def test_lift_through_quotient(quotient_service, universal_service, v_poset):
    _, t = universal_service.witness_u(v_poset)
    g = quotient_service.sticks_cover(v_poset).map
    m, lift = universal_service.lift_through_quotient(t, g)
    assert universal_service.lift_commutes(t, g, m, lift)


# =========================
# universal quotient
# =========================

def test_universal_quotient_onto_p_system(universal_service):
    system = universal_service.p_system(2)
    family = universal_service.build_universal_quotient(system)
    assert family.depth == 2
    assert family.indices[0] < family.indices[1]
    assert universal_service.verify_family(family) == []


def test_p_system_levels(universal_service):
    system = universal_service.p_system(3)
    assert system.depth == 3
    assert [level.size for level in system.levels] == [4, 16, 64]
