import pytest

from app.exceptions import DepthBoundError
from app.services.verification_service import VerificationService


@pytest.fixture(scope="module")
def verification_service(services):
    return services.verification


def test_check_registry_is_consistent():
    names = [name for name, _ in VerificationService.CHECKS]
    assert len(names) == len(set(names)) == 11
    for _, method in VerificationService.CHECKS:
        assert callable(getattr(VerificationService, method))


def test_run_check_turns_domain_errors_into_failures(verification_service):
    def broken():
        raise DepthBoundError(9, 6)

    result = verification_service.run_check("broken", broken)
    assert not result.passed
    assert result.cases == 0
    assert result.detail.startswith("DEPTH_BOUND")


@pytest.mark.parametrize(
    "method, kwargs",
    [
        ("check_canonical_decomposition", {}),
        ("check_birkhoff", {}),
        ("check_amalgamation", {"count": 30}),
        ("check_level_structure", {"max_depth": 3}),
        ("check_thread_solver", {"count": 20}),
        ("check_isolated_points", {"max_prefix": 2}),
        ("check_induced_maps", {"max_size": 3, "samples": 20}),
    ],
)
def test_individual_checks_pass(verification_service, method, kwargs):
    passed, cases, detail = getattr(verification_service, method)(**kwargs)
    assert passed, detail
    assert cases > 0


def test_verify_all_only_selected(verification_service):
    report = verification_service.verify_all(only=["birkhoff"])
    assert [check.name for check in report.checks] == ["birkhoff"]
    assert report.passed
    assert report.seed == 42
    assert "PASS" in report.table()


def test_same_seed_same_case_counts(verification_service):
    first = verification_service.verify_all(only=["amalgamation", "thread_solver"])
    second = verification_service.verify_all(only=["amalgamation", "thread_solver"])
    assert [check.cases for check in first.checks] == [check.cases for check in second.checks]


@pytest.mark.slow
def test_verify_all_passes(verification_service):
    report = verification_service.verify_all()
    assert len(report.checks) == 11
    assert report.passed, report.table()


def test_partition_quotients_of_chain(verification_service, poset_service, quotient_service):
    quotients = verification_service._quotients_of(poset_service.chain(3))
    # {1,3}|{2} 는 반대칭성이 깨져서 빠집니다
    assert sorted(q.assignment.tolist() for q in quotients) == [[0, 0, 0], [0, 0, 1], [0, 1, 1], [0, 1, 2]]
    assert all(quotient_service.classify(q).is_quotient for q in quotients)


def test_partition_quotients_cover_every_onto_quotient(verification_service, poset_service, quotient_service):
    from itertools import product

    from app.models.poset_model import PosetMap

    for domain in poset_service.all_posets_up_to(3):
        kernels = {
            tuple(q.assignment.tolist()) for q in verification_service._quotients_of(domain)
        }
        for codomain in poset_service.all_posets_up_to(domain.size):
            for values in product(range(codomain.size), repeat=domain.size):
                candidate = PosetMap(domain, codomain, values)
                if not quotient_service.classify(candidate).is_quotient:
                    continue
                # 처음 나온 순서대로 블록 번호를 다시 매긴 분할
                relabel = {}
                kernel = tuple(relabel.setdefault(value, len(relabel)) for value in values)
                assert kernel in kernels


def test_random_systems_reach_max_size(verification_service):
    rng = verification_service._rng(99)
    sizes = {verification_service._random_system(rng, depth=1, max_size=4).levels[0].size for _ in range(200)}
    assert sizes == {1, 2, 3, 4}
