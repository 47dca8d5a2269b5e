import numpy as np
import pytest

from app.exceptions import NotAQuotientError, PosetValidationError
from app.models.poset_model import PosetMap


def _map(domain, codomain, targets):
    return PosetMap(domain, codomain, [codomain.index_of(label) for label in targets])


# =========================
# 분류
# =========================

def test_constant_map_onto_point_is_quotient(quotient_service, poset_service, antichain2):
    result = quotient_service.classify(_map(antichain2, poset_service.point(), ["1", "1"]))
    assert result.is_quotient
    assert result.witness is None


def test_onto_homomorphism_that_is_not_quotient(quotient_service, poset_service, antichain2):
    result = quotient_service.classify(_map(antichain2, poset_service.chain(2), ["1", "2"]))
    assert result.is_homomorphism and result.is_onto
    assert not result.is_quotient
    assert result.reason == "not_lifted"
    assert result.witness == ["1", "2"]


def test_order_reversing_map_is_not_homomorphism(quotient_service, chain3, poset_service):
    result = quotient_service.classify(_map(chain3, poset_service.chain(2), ["2", "1", "1"]))
    assert not result.is_homomorphism
    assert result.reason == "not_homomorphism"


def test_missing_value_is_not_onto(quotient_service, chain3):
    result = quotient_service.classify(_map(chain3, chain3, ["1", "1", "2"]))
    assert result.reason == "not_onto"
    assert result.witness == ["3"]


def test_require_quotient_raises(quotient_service, poset_service, antichain2):
    with pytest.raises(NotAQuotientError):
        quotient_service.require_quotient(_map(antichain2, poset_service.chain(2), ["1", "2"]))


def test_out_of_range_assignment_rejected(chain3):
    with pytest.raises(PosetValidationError):
        PosetMap(chain3, chain3, [0, 1, 5])


def test_compose(quotient_service, poset_service, chain3):
    first = _map(chain3, poset_service.chain(2), ["1", "2", "2"])
    second = _map(poset_service.chain(2), poset_service.point(), ["1", "1"])
    composite = quotient_service.compose(second, first)
    assert composite.domain is chain3
    assert composite.assignment.tolist() == [0, 0, 0]
    assert quotient_service.classify(composite).is_quotient


def test_compose_rejects_mismatched_posets_of_same_size(quotient_service, poset_service, antichain2):
    first = _map(antichain2, antichain2, ["1", "2"])
    second = _map(poset_service.chain(2), poset_service.point(), ["1", "1"])
    with pytest.raises(PosetValidationError):
        quotient_service.compose(second, first)
    # 구조가 같으면 다른 객체여도 합성됩니다
    same = _map(poset_service.antichain(2), poset_service.point(), ["1", "1"])
    assert quotient_service.compose(same, first).assignment.tolist() == [0, 0]


# =========================
# sticks cover, amalgamation, fiber product
# =========================

def test_sticks_cover_counts(quotient_service, poset_service, v_poset):
    cover = quotient_service.sticks_cover(v_poset)
    assert (cover.count, cover.pair_count) == (2, 2)
    assert quotient_service.classify(cover.map).is_quotient

    mixed = poset_service.disjoint_union(poset_service.chain(2), poset_service.point())
    cover = quotient_service.sticks_cover(mixed)
    assert (cover.count, cover.pair_count) == (2, 1)
    # 고립점 component 는 두 끝이 같은 점으로 갑니다
    assert cover.map(2) == cover.map(3) == mixed.index_of("1.1")
    assert quotient_service.classify(cover.map).is_quotient


def test_amalgamation_square_commutes(quotient_service, poset_service, v_poset, chain3):
    target = poset_service.chain(2)
    f = _map(v_poset, target, ["1", "1", "2"])
    g = _map(chain3, target, ["1", "2", "2"])
    result = quotient_service.amalgamate(f, g)

    left = f.after(result.f_prime).after(result.q)
    right = g.after(result.g_prime).after(result.p)
    assert np.array_equal(left.assignment, right.assignment)
    for piece in (result.q, result.p, result.f_prime, result.g_prime):
        assert quotient_service.classify(piece).is_quotient


def test_amalgamation_needs_quotients(quotient_service, poset_service, antichain2):
    not_quotient = _map(antichain2, poset_service.chain(2), ["1", "2"])
    with pytest.raises(NotAQuotientError):
        quotient_service.amalgamate(not_quotient, not_quotient)


def test_fiber_product_over_point_is_product(quotient_service, poset_service):
    chain2 = poset_service.chain(2)
    t = _map(chain2, poset_service.point(), ["1", "1"])
    product = quotient_service.fiber_product(t, t)
    assert product.size == 4
    poset = product.poset
    bottom, top = poset.index_of("(1,1)"), poset.index_of("(2,2)")
    left, right = poset.index_of("(1,2)"), poset.index_of("(2,1)")
    assert poset.leq(bottom, top) and poset.leq(left, top) and poset.leq(bottom, right)
    assert not poset.comparable(left, right)
    assert np.array_equal(t.after(product.first).assignment, t.after(product.second).assignment)


# =========================
# 유도 사상 p̂
# =========================

def test_identity_induces_identity(quotient_service, ideal_service, v_poset):
    induced = quotient_service.induce(quotient_service.identity_map(v_poset))
    assert induced.eager
    for mask in ideal_service.all_down_sets(v_poset).ideals:
        assert induced(mask) == mask


def test_induced_map_sends_principal_to_principal(quotient_service, v_poset):
    p = quotient_service.sticks_cover(v_poset).map
    induced = quotient_service.induce(p)
    assert induced(0) == 0
    # component 0 은 a < c 위로 갑니다
    assert induced(p.domain.down_masks[0]) == v_poset.down_masks[v_poset.index_of("a")]
    assert induced(p.domain.down_masks[1]) == v_poset.down_masks[v_poset.index_of("c")]
    assert induced(p.domain.full_mask) == v_poset.full_mask


def test_meet_criterion_fails_for_antichain_onto_point(quotient_service, poset_service, antichain2):
    p = _map(antichain2, poset_service.point(), ["1", "1"])
    holds, witness = quotient_service.meet_preservation_criterion(p)
    assert not holds
    assert witness == ["1", "1", "2"]
    preserved, pair = quotient_service.meets_preserved(quotient_service.induce(p))
    assert not preserved
    assert pair == (["1"], ["2"])


def test_meet_criterion_holds_for_chain_onto_point(quotient_service, poset_service):
    p = _map(poset_service.chain(2), poset_service.point(), ["1", "1"])
    holds, witness = quotient_service.meet_preservation_criterion(p)
    assert holds and witness is None
    assert quotient_service.meets_preserved(quotient_service.induce(p))[0]


def test_meet_criterion_agrees_with_direct_check(quotient_service, poset_service):
    for domain in poset_service.all_posets_up_to(3):
        for codomain in poset_service.all_posets_up_to(domain.size):
            for values in np.ndindex(*([codomain.size] * domain.size)):
                p = PosetMap(domain, codomain, values)
                if not quotient_service.classify(p).is_quotient:
                    continue
                holds, _ = quotient_service.meet_preservation_criterion(p)
                assert holds == quotient_service.meets_preserved(quotient_service.induce(p))[0]


def test_to_dot_has_both_clusters(quotient_service, poset_service, antichain2):
    dot = quotient_service.to_dot(_map(antichain2, poset_service.point(), ["1", "1"]))
    assert "cluster_domain" in dot and "cluster_codomain" in dot
