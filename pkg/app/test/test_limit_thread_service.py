import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.exceptions import PosetValidationError, ThreadSystemError
from app.models.thread_model import Comparison, SymbolicPoint
from app.utils.random_utils import RandomHelper


@pytest.fixture(scope="module")
def p_system(universal_service):
    return universal_service.p_system(2)


# =========================
# thread 선택
# =========================

def test_solver_avoids_dead_end(limit_service):
    system = limit_service.dead_end_system()
    assert limit_service.solve_thread(system).labels() == ["r", "a", "c"]


def test_naive_greedy_reports_dead_end(limit_service):
    with pytest.raises(ThreadSystemError) as caught:
        limit_service.naive_greedy_thread(limit_service.dead_end_system())
    assert caught.value.index == 2


def test_empty_compatibility_set_reports_index(limit_service):
    from app.models.thread_model import ThreadSystem

    system = ThreadSystem.from_labels([["r"], ["a"], ["c"]], [{"a": "r"}, {"c": "x"}])
    with pytest.raises(ThreadSystemError) as caught:
        limit_service.solve_thread(system)
    assert caught.value.index == 2


@hypothesis_settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32), depth=st.integers(min_value=1, max_value=6))
def test_solver_succeeds_on_random_systems(limit_service, seed, depth):
    system = limit_service.random_thread_system(RandomHelper.rng(seed), depth, width=4)
    thread = limit_service.solve_thread(system)
    assert thread.depth == depth


# =========================
# 역계 위 thread 순서
# =========================

def test_thread_order_on_p_system(limit_service, p_system):
    lower = limit_service.thread_from_labels(p_system, ["0", "00"])
    upper = limit_service.thread_from_labels(p_system, ["1", "10"])
    other = limit_service.thread_from_labels(p_system, ["2", "20"])
    assert limit_service.thread_order(lower, upper) is Comparison.LESS
    assert limit_service.thread_order(upper, lower) is Comparison.GREATER
    assert limit_service.thread_order(lower, other) is Comparison.INCOMPARABLE
    assert limit_service.thread_order(lower, lower) is Comparison.EQUAL


def test_incompatible_thread_rejected(limit_service, p_system):
    with pytest.raises(PosetValidationError):
        limit_service.thread_from_labels(p_system, ["0", "10"])


# =========================
# 끝이 상수인 점
# =========================

def test_symbolic_point_parse_and_normalize():
    point = SymbolicPoint.parse("012(2)")
    assert point == SymbolicPoint([0, 1], 2)
    assert str(point) == "01(2)^ω"
    assert SymbolicPoint.parse("01(2)^ω") == point
    for bad in ("01", "01(4)", "0a(1)", "(12)"):
        with pytest.raises(PosetValidationError):
            SymbolicPoint.parse(bad)


def test_symbolic_compare(limit_service):
    parse = SymbolicPoint.parse
    assert limit_service.symbolic_compare(parse("0(0)"), parse("1(0)")) is Comparison.LESS
    assert limit_service.symbolic_compare(parse("3(1)"), parse("2(1)")) is Comparison.GREATER
    assert limit_service.symbolic_compare(parse("(2)"), parse("(3)")) is Comparison.INCOMPARABLE
    assert limit_service.symbolic_compare(parse("0(0)"), parse("(0)")) is Comparison.EQUAL


def test_isolated_points(limit_service):
    assert limit_service.is_isolated(SymbolicPoint.parse("012(2)"))
    assert not limit_service.is_isolated(SymbolicPoint.parse("(0)"))
    assert limit_service.isolated_by_search(SymbolicPoint.parse("012(2)"), 2)
    assert not limit_service.isolated_by_search(SymbolicPoint.parse("(0)"), 1)


@pytest.mark.parametrize("prefix", [[], [0], [1, 3], [2, 0, 1]])
def test_every_cylinder_has_isolated_point(limit_service, prefix):
    witness = limit_service.isolated_dense_witness(prefix)
    assert witness.window(len(prefix)) == tuple(prefix)
    assert limit_service.is_isolated(witness)


# =========================
# ideal thread 격자
# =========================

def test_zero_top_and_principal_threads(limit_service, p_system):
    zero = limit_service.zero_thread(p_system)
    top = limit_service.top_thread(p_system)
    assert zero.is_zero()
    assert limit_service.is_compatible(top)
    principal = limit_service.principal_thread(p_system, "30")
    assert principal.member_labels() == [["2", "3"], ["20", "30"]]
    assert limit_service.is_compatible(principal)
    assert limit_service.thread_leq(zero, principal) and limit_service.thread_leq(principal, top)


def test_incompatible_ideal_thread_rejected(limit_service, p_system):
    from app.models.thread_model import IdealThread

    level = p_system.levels[1]
    thread = IdealThread(p_system, [0, level.down_masks[level.index_of("00")]])
    with pytest.raises(PosetValidationError):
        limit_service.require_compatible(thread)


def test_ideal_sup_is_coordinatewise_union(limit_service, p_system):
    a = limit_service.principal_thread(p_system, "01")
    b = limit_service.principal_thread(p_system, "20")
    joined = limit_service.ideal_lattice_sup([a, b])
    assert joined.entries == [x | y for x, y in zip(a.entries, b.entries)]
    assert limit_service.is_compatible(joined)
    assert limit_service.brute_force_sup(a, b) == joined


@hypothesis_settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_ideal_inf_matches_brute_force(limit_service, p_system, seed):
    rng = RandomHelper.rng(seed)
    a = limit_service.random_ideal_thread(p_system, rng)
    b = limit_service.random_ideal_thread(p_system, rng)
    meet = limit_service.ideal_inf(a, b)
    assert limit_service.is_compatible(meet)
    assert limit_service.thread_leq(meet, a) and limit_service.thread_leq(meet, b)
    assert limit_service.brute_force_inf(a, b) == meet


def test_ideal_inf_lookahead_results(limit_service, universal_service):
    system = universal_service.p_system(3)
    a = limit_service.principal_thread(system, "100")
    b = limit_service.principal_thread(system, "000")
    results, _ = limit_service.ideal_inf_stable(a, b, 2, 3)
    assert len(results) == 2
    assert results[0] == limit_service.ideal_inf(a, b, 2)
    with pytest.raises(PosetValidationError):
        limit_service.ideal_inf(a, b, 3, 2)


def test_atom_below_top(limit_service, p_system):
    atom = limit_service.find_atom_below(limit_service.top_thread(p_system))
    assert limit_service.is_atom(atom)
    assert not limit_service.is_atom(limit_service.top_thread(p_system))
    with pytest.raises(PosetValidationError):
        limit_service.find_atom_below(limit_service.zero_thread(p_system))


def test_principal_decomposition_recovers_thread(limit_service, p_system):
    level = p_system.levels[1]
    last = level.down_masks[level.index_of("01")] | level.down_masks[level.index_of("20")]
    a = limit_service.ideal_thread_from_last(p_system, last)
    family = limit_service.principal_decomposition(a)
    assert len(family) == 2
    assert limit_service.ideal_lattice_sup(family) == a
    assert limit_service.principal_thread(p_system, "01") in family


@hypothesis_settings(max_examples=15, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32))
def test_principal_decomposition_of_random_threads(limit_service, p_system, seed):
    a = limit_service.random_ideal_thread(p_system, RandomHelper.rng(seed))
    if a.is_zero():
        return
    assert limit_service.ideal_lattice_sup(limit_service.principal_decomposition(a)) == a


# =========================
# 유도 극한 사상
# =========================

def test_induced_limit_quotient_keeps_bounds(limit_service, universal_service, p_system):
    family = universal_service.build_universal_quotient(p_system)
    source = universal_service.p_system(family.indices[-1])
    top = limit_service.induced_limit_quotient(family, limit_service.top_thread(source))
    assert top.entries == [target.full_mask for target in family.targets]
    zero = limit_service.induced_limit_quotient(family, limit_service.zero_thread(source))
    assert zero.is_zero()
