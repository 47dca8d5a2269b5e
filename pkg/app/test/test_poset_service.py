import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.exceptions import PosetValidationError, SizeBoundError
from app.models.poset_model import FinitePoset, make_poset
from app.utils.random_utils import RandomHelper


# =========================
# 공리 검사
# =========================

def test_chain_is_valid(poset_service, chain3):
    report = poset_service.validate(chain3)
    assert report.ok
    assert report.axiom is None


def test_antisymmetry_violation_reports_pair(poset_service):
    poset = make_poset(["a", "b"], [(0, 1), (1, 0)])
    report = poset_service.validate(poset)
    assert not report.ok
    assert report.axiom == "antisymmetric"
    assert report.witness == ["a", "b"]


def test_transitivity_violation_reports_missing_pair(poset_service):
    poset = make_poset(["a", "b", "c"], [(0, 1), (1, 2)])
    report = poset_service.validate(poset)
    assert report.axiom == "transitive"
    assert report.witness == ["a", "c"]


def test_missing_reflexive_pair_is_reported(poset_service):
    poset = FinitePoset(["a", "b"], np.array([[True, False], [False, False]]))
    report = poset_service.validate(poset)
    assert report.axiom == "reflexive"
    assert report.witness == ["b", "b"]


def test_require_valid_raises(poset_service):
    with pytest.raises(PosetValidationError):
        poset_service.require_valid(make_poset(["a", "b"], [(0, 1), (1, 0)]))


def test_duplicate_labels_rejected():
    with pytest.raises(PosetValidationError):
        make_poset(["a", "a"], [])


def test_out_of_range_pair_rejected():
    with pytest.raises(PosetValidationError):
        make_poset(["a"], [(0, 3)])


# =========================
# 구성
# =========================

def test_chain_and_antichain_relation_sizes(poset_service):
    assert poset_service.chain(2).relation_size() == 3
    assert poset_service.antichain(2).relation_size() == 2
    assert poset_service.point().size == 1


def test_linear_sum_puts_first_below_second(poset_service, antichain2):
    total = poset_service.linear_sum(antichain2, poset_service.point())
    assert total.size == 3
    top = total.index_of("1.1")
    assert all(total.leq(total.index_of(label), top) for label in ("0.1", "0.2"))
    assert poset_service.validate(total).ok


def test_disjoint_union_has_no_cross_relations(poset_service):
    union = poset_service.disjoint_union(poset_service.chain(2), poset_service.chain(2))
    assert union.relation_size() == 6
    assert not union.comparable(union.index_of("0.1"), union.index_of("1.2"))


# =========================
# 구조 질의
# =========================

def test_maximal_elements(poset_service, chain3, v_poset):
    assert poset_service.maximal_elements(chain3, chain3.elements) == ["3"]
    assert poset_service.maximal_elements(poset_service.antichain(3), ["1", "2", "3"]) == ["1", "2", "3"]
    assert poset_service.maximal_elements(v_poset, ["a", "b"]) == ["a", "b"]


def test_two_components_literal_and_connected_readings(poset_service, chain3):
    union = poset_service.disjoint_union(poset_service.chain(2), poset_service.point())
    assert poset_service.two_components(union) == [("0.1", "0.2")]
    assert poset_service.isolated_points(union) == [2]
    # 문자 그대로의 판정은 chain 3 의 (1, 3) 도 받아들입니다
    assert poset_service.is_two_component(chain3, "1", "3")
    assert poset_service.two_components(chain3) == []


def test_hasse_edges_skip_transitive_pairs(poset_service, chain3):
    assert sorted(poset_service.hasse_edges(chain3)) == [(0, 1), (1, 2)]


def test_to_dot_mentions_every_label(poset_service, v_poset):
    dot = poset_service.to_dot(v_poset)
    assert dot.startswith("digraph")
    for label in v_poset.elements:
        assert f'"{label}"' in dot


def test_isomorphism_found_and_rejected(poset_service, v_poset):
    relabeled = poset_service.build(["x", "y", "z"], [(1, 0), (2, 0)])
    result = poset_service.is_isomorphic(v_poset, relabeled)
    assert result.isomorphic
    assert result.mapping[v_poset.index_of("c")] == relabeled.index_of("x")
    assert not poset_service.is_isomorphic(v_poset, poset_service.chain(3)).isomorphic


@pytest.mark.parametrize("size, expected", [(1, 1), (2, 2), (3, 5), (4, 16), (5, 63)])
def test_all_posets_counts_isomorphism_types(poset_service, size, expected):
    assert len(poset_service.all_posets(size)) == expected


def test_all_posets_bound(poset_service):
    with pytest.raises(SizeBoundError):
        poset_service.all_posets(7)


@hypothesis_settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32), size=st.integers(min_value=1, max_value=7))
def test_random_orders_validate(poset_service, seed, size):
    rng = RandomHelper.rng(seed)
    poset = FinitePoset([str(i) for i in range(size)], RandomHelper.random_order_matrix(rng, size))
    assert poset_service.validate(poset).ok
