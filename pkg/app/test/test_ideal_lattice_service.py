import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.exceptions import NonDistributiveError, NotALatticeError, PosetValidationError
from app.models.poset_model import DownSet, FinitePoset
from app.utils.bitset_utils import BitsetHelper
from app.utils.random_utils import RandomHelper


# =========================
# 𝒪(P)
# =========================

def test_ideal_counts(ideal_service, universal_service, chain3, antichain2):
    assert ideal_service.all_down_sets(chain3).count == 4
    assert ideal_service.all_down_sets(antichain2).count == 4
    assert ideal_service.all_down_sets(universal_service.level(1)).count == 9


def test_ideal_count_matches_antichains(ideal_service, v_poset):
    ideals = ideal_service.all_down_sets(v_poset)
    assert ideals.count == ideal_service.count_antichains(v_poset) == 5


def test_ideal_lattice_is_sorted_and_closed(ideal_service, v_poset):
    ideals = ideal_service.all_down_sets(v_poset)
    assert ideals.ideals[0] == 0
    assert ideals.ideals[-1] == v_poset.full_mask
    for a in ideals.ideals:
        for b in ideals.ideals:
            assert (a | b) in ideals and (a & b) in ideals


def test_principal_ideals(ideal_service, chain3, antichain2, v_poset):
    assert ideal_service.principal(chain3, "3").members == chain3.full_mask
    assert ideal_service.principal(antichain2, "1").labels() == ["1"]
    assert ideal_service.principal(v_poset, "c").labels() == ["a", "b", "c"]


def test_canonical_decomposition_examples(ideal_service, v_poset):
    pieces = ideal_service.canonical_decomposition(DownSet.from_labels(v_poset, ["a", "b"]))
    assert sorted(piece.labels() for piece in pieces) == [["a"], ["b"]]
    whole = ideal_service.canonical_decomposition(DownSet.from_labels(v_poset, ["a", "b", "c"]))
    assert [piece.labels() for piece in whole] == [["a", "b", "c"]]
    assert ideal_service.canonical_decomposition(DownSet(v_poset, 0)) == []


def test_non_down_set_rejected(v_poset):
    with pytest.raises(PosetValidationError):
        DownSet.from_labels(v_poset, ["c"])


def test_sup_and_inf_of_families(ideal_service, v_poset):
    a, b = v_poset.down_masks[0], v_poset.down_masks[1]
    assert ideal_service.lattice_sup([a, b]) == a | b
    assert ideal_service.lattice_inf(v_poset, [a, b]) == 0
    assert ideal_service.lattice_inf(v_poset, []) == v_poset.full_mask


# =========================
# 유한 격자, Birkhoff
# =========================

def test_birkhoff_on_powerset(ideal_service, poset_service):
    result = ideal_service.birkhoff_eta(ideal_service.powerset_lattice(2))
    assert len(result.irreducibles) == 2
    assert poset_service.is_isomorphic(result.irreducible_poset, poset_service.antichain(2)).isomorphic
    assert sorted(result.eta) == list(range(4))


def test_m3_is_rejected_with_triple(ideal_service):
    with pytest.raises(NonDistributiveError) as caught:
        ideal_service.birkhoff_eta(ideal_service.diamond_m3())
    assert len(caught.value.triple) == 3


def test_n5_violates_distributivity_and_join_prime(ideal_service):
    n5 = ideal_service.pentagon_n5()
    assert ideal_service.check_distributive(n5) is not None
    assert ideal_service.join_prime_violation(n5) is not None


def test_chain_lattice_irreducibles(ideal_service):
    chain = ideal_service.chain_lattice(4)
    irreducibles, _ = ideal_service.join_irreducibles(chain)
    assert len(irreducibles) == 3
    assert ideal_service.check_distributive(chain) is None


def test_non_lattice_rejected(ideal_service, antichain2):
    with pytest.raises(NotALatticeError):
        ideal_service.lattice_from_poset(antichain2)


def test_birkhoff_on_every_small_ideal_lattice(ideal_service, poset_service):
    for poset in poset_service.all_posets_up_to(4):
        ideals = ideal_service.all_down_sets(poset)
        result = ideal_service.birkhoff_eta(ideal_service.as_lattice(ideals))
        assert poset_service.is_isomorphic(result.irreducible_poset, poset).isomorphic


def test_principal_embedding_reflects_order(ideal_service, chain3, antichain2):
    embedding = ideal_service.principal_embedding(chain3)
    target = embedding.codomain
    assert target.leq(embedding(0), embedding(1)) and target.leq(embedding(1), embedding(2))
    pair = ideal_service.principal_embedding(antichain2)
    assert not pair.codomain.comparable(pair(0), pair(1))


def test_ideal_lattices_are_atomic(ideal_service, poset_service):
    for poset in poset_service.all_posets_up_to(4):
        ideals = ideal_service.all_down_sets(poset)
        lattice = ideal_service.as_lattice(ideals)
        assert ideal_service.is_atomic(lattice)
        assert sorted(ideal_service.atoms(lattice)) == sorted(ideal_service.ideal_atoms(ideals))


@hypothesis_settings(max_examples=30, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32), size=st.integers(min_value=1, max_value=6))
def test_decomposition_reconstructs_every_ideal(ideal_service, seed, size):
    rng = RandomHelper.rng(seed)
    poset = FinitePoset([str(i) for i in range(size)], RandomHelper.random_order_matrix(rng, size))
    for mask in ideal_service.all_down_sets(poset).ideals:
        pieces = ideal_service.decomposition_masks(poset, mask)
        assert ideal_service.lattice_sup(pieces) == mask
        for i, first in enumerate(pieces):
            for second in pieces[i + 1:]:
                assert not BitsetHelper.is_subset(first, second)
                assert not BitsetHelper.is_subset(second, first)


def test_every_union_representation_contains_decomposition(ideal_service, poset_service):
    for poset in poset_service.all_posets_up_to(4):
        for mask in ideal_service.all_down_sets(poset).ideals:
            canonical = set(ideal_service.decomposition_masks(poset, mask))
            for generators in BitsetHelper.iter_subsets(mask):
                principals = {poset.down_masks[x] for x in BitsetHelper.iter_indices(generators)}
                if ideal_service.lattice_sup(principals) == mask:
                    assert canonical <= principals
