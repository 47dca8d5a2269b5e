import numpy as np
import pytest

from app.exceptions import DepthBoundError, EncodingError
from app.models.ternary_model import ComponentIndex, TernaryFunction


def _down(level, *labels) -> int:
    mask = 0
    for label in labels:
        mask |= level.down_masks[level.index_of(label)]
    return mask


# =========================
# T_n 과 ψ
# =========================

def test_component_index_matches_level_pairs(universal_service):
    for n in (1, 2, 3):
        index = ComponentIndex(n)
        lows, highs = universal_service.level(n).strict_pairs()
        assert index.count == len(lows)
        assert sorted(zip(index.lower.tolist(), index.upper.tolist())) == sorted(zip(lows.tolist(), highs.tolist()))


def test_component_index_children():
    index = ComponentIndex(2)
    assert index.labels()[:4] == ["00", "01", "02", "03"]
    # 02 는 P_1 의 0 위에, 03 은 1 위에 놓인 component
    assert (index.lower[2], index.upper[2]) == (2, 3)
    assert (index.lower[3], index.upper[3]) == (6, 7)
    with pytest.raises(EncodingError):
        index.rank_of("20")


def test_psi_examples(ternary_service, universal_service):
    level = universal_service.level(1)
    assert ternary_service.psi(1, 0) == TernaryFunction.zero(1)
    assert ternary_service.psi(1, _down(level, "1")).values.tolist() == [2, 0]
    assert ternary_service.psi(1, _down(level, "0", "2")).values.tolist() == [1, 1]
    assert ternary_service.psi(1, level.full_mask).values.tolist() == [2, 2]


def test_psi_rejects_non_down_set(ternary_service):
    with pytest.raises(EncodingError):
        ternary_service.psi(1, 0b10)


def test_psi_depth_bound(ternary_service, settings):
    with pytest.raises(DepthBoundError):
        ternary_service.psi(settings.depth_bound + 1, 0)


def test_psi_decode_inverts_psi(ternary_service, ideal_service, universal_service):
    level = universal_service.level(2)
    for mask in ideal_service.all_down_sets(level).ideals[::97]:
        assert ternary_service.psi_decode(ternary_service.psi(2, mask)) == mask


def test_ideal_count_of_second_level(ideal_service, universal_service):
    assert ideal_service.all_down_sets(universal_service.level(2)).count == 3 ** 8 == 6561


def test_mapping_form():
    f = TernaryFunction.from_mapping(2, {"03": 2, "10": 1})
    assert f.to_mapping() == {"03": 2, "10": 1}
    with pytest.raises(EncodingError):
        TernaryFunction.from_mapping(2, {"03": 3})
    with pytest.raises(EncodingError):
        TernaryFunction(1, [0, 1, 2])


# =========================
# q_n^{n+1}
# =========================

def test_q_step_examples(ternary_service):
    assert ternary_service.q_step(1, TernaryFunction.zero(2)) == TernaryFunction.zero(1)
    assert ternary_service.q_step(1, TernaryFunction.from_mapping(2, {"00": 1, "03": 2})).values.tolist() == [2, 0]
    assert ternary_service.q_step(1, TernaryFunction.from_mapping(2, {"02": 2})).values.tolist() == [1, 0]
    assert ternary_service.q_step(1, TernaryFunction.from_mapping(2, {"11": 1, "12": 1})).values.tolist() == [0, 1]


def test_q_step_depth_mismatch(ternary_service):
    with pytest.raises(EncodingError):
        ternary_service.q_step(2, TernaryFunction.zero(2))


def test_q_step_matches_induced_projection(ternary_service, quotient_service, universal_service):
    level = universal_service.level(2)
    induced = quotient_service.induce(universal_service.projection(2, 1))
    for labels in [("03",), ("10",), ("02", "13"), ("30", "01")]:
        mask = _down(level, *labels)
        left = ternary_service.q_step(1, ternary_service.psi(2, mask))
        assert left == ternary_service.psi(1, induced(mask))


def test_q_composite_is_repeated_step(ternary_service):
    f = TernaryFunction.from_mapping(3, {"003": 2, "102": 1})
    assert ternary_service.q_composite(1, f) == ternary_service.q_step(1, ternary_service.q_step(2, f))


# =========================
# 격자 연산
# =========================

def test_join_meet_and_irreducibles(ternary_service):
    f = TernaryFunction(1, [2, 0])
    g = TernaryFunction(1, [1, 1])
    assert ternary_service.ternary_join(f, g).values.tolist() == [2, 1]
    assert ternary_service.ternary_meet(f, g).values.tolist() == [1, 0]
    assert ternary_service.is_join_irreducible(f)
    assert not ternary_service.is_join_irreducible(g)
    assert not ternary_service.is_join_irreducible(TernaryFunction.zero(1))


# =========================
# 가환 사각형과 ψ 검증
# =========================

def test_square_first_level_is_exhaustive(ternary_service):
    result = ternary_service.verify_square(1)
    assert result.passed
    assert result.cases == 6561


def test_square_second_level_sampled(ternary_service):
    result = ternary_service.verify_square(2, samples=60, seed=7)
    assert result.passed
    # principal down-set, ∅, 전체가 표본 앞에 붙습니다
    assert result.cases == 60 + 64 + 2


def test_partitioned_sampling_is_reproducible(ternary_service):
    first = ternary_service.verify_square(2, samples=30, seed=3)
    second = ternary_service.verify_square(2, samples=30, seed=3)
    assert first == second
    assert first.cases == 30 + 64 + 2


def test_composite_square(ternary_service):
    assert ternary_service.verify_composite(samples=60).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_psi_is_lattice_isomorphism(ternary_service, n):
    assert ternary_service.verify_psi(n, samples=100).passed


# =========================
# 격자 사상 판정
# =========================

def test_criterion_on_identity(ternary_service, ideal_service):
    chain = ideal_service.chain_lattice(3)
    report = ternary_service.quotient_isomorphism_criterion(chain, chain, [0, 1, 2])
    assert report.holds
    assert report.square_commutes


def test_criterion_fails_when_irreducible_goes_to_reducible(ternary_service, ideal_service):
    chain = ideal_service.chain_lattice(3)
    square = ideal_service.powerset_lattice(2)
    # 인덱스 = 비트셋: 1 은 {0} (irreducible), 3 은 {0,1} (reducible)
    report = ternary_service.quotient_isomorphism_criterion(chain, square, [0, 1, 3])
    assert not report.holds
    assert report.failed_condition == "ii"


def test_criterion_on_induced_maps(ternary_service, quotient_service, poset_service):
    from app.models.poset_model import PosetMap

    for domain in (poset_service.chain(2), poset_service.antichain(2)):
        p = PosetMap(domain, poset_service.point(), [0, 0])
        source, target, assignment = ternary_service.induced_as_lattice_map(quotient_service.induce(p))
        report = ternary_service.quotient_isomorphism_criterion(source, target, assignment)
        assert report.holds and report.square_commutes


def test_criterion_rejects_bad_assignment(ternary_service, ideal_service):
    chain = ideal_service.chain_lattice(3)
    with pytest.raises(EncodingError):
        ternary_service.quotient_isomorphism_criterion(chain, chain, [0, 1, 5])


def test_psi_batch_agrees_with_psi(ternary_service, universal_service):
    level = universal_service.level(2)
    masks = [0, _down(level, "13"), level.full_mask]
    members = ternary_service.masks_to_members(masks, level.size)
    batch = ternary_service.psi_batch(2, members)
    for row, mask in zip(batch, masks):
        assert np.array_equal(row, ternary_service.psi(2, mask).values)
