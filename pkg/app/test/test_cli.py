import json
import re

import pytest
from click.testing import CliRunner

from app.cli import COMMAND_CONFIGS
from app.exceptions import EXIT_IO, EXIT_USAGE, EXIT_VERIFICATION_FAILED
from app.main import cli

# 명령에 묶이지 않은 내부 보조 연산
HELPER_OPERATIONS = {
    "poset": {"require_valid", "build", "disjoint_union_all"},
    "ideal": {"decomposition_masks", "as_lattice", "ideal_atoms"},
    "quotient": {"require_quotient", "identity_map", "sticks_poset", "meets_preserved"},
    "universal": {"level_depth", "component_table", "lower_type_capacity", "p_system"},
    "limit": {
        "stable_sets", "random_thread_system", "dead_end_system", "symbolic_leq", "ideal_step",
        "ideal_thread_from_last", "is_compatible", "require_compatible", "random_ideal_thread",
        "all_ideal_threads", "ideal_sup", "brute_force_inf", "brute_force_sup",
    },
    "ternary": {"psi_batch", "q_step_batch", "masks_to_members"},
    "verification": {"run_check"},
}


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, list(args), catch_exceptions=False)


# =========================
# 출력
# =========================

def test_level_json(runner):
    result = invoke(runner, "level", "1", "--json")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload == {"elements": ["0", "1", "2", "3"], "le": [[0, 1], [2, 3]]}


def test_global_flags_before_subcommand(runner):
    result = invoke(runner, "--format", "dot", "level", "1")
    assert result.exit_code == 0
    assert result.stdout.startswith("digraph")


def test_construct_chain(runner):
    result = invoke(runner, "construct", "chain", "3")
    assert json.loads(result.stdout)["le"] == [[0, 1], [0, 2], [1, 2]]


def test_compare_points(runner):
    result = invoke(runner, "compare", "0(0)", "1(0)")
    assert json.loads(result.stdout)["value"] == "≤"


def test_ternary_encode_and_decode(runner, write_json):
    path = write_json("ideal.json", {"members": ["0", "1"]})
    result = invoke(runner, "encode", "1", path)
    assert result.exit_code == 0, result.output
    encoded = json.loads(result.stdout)
    assert encoded == {"n": 1, "values": {"0": 2}}

    decoded = invoke(runner, "decode", write_json("f.json", encoded))
    assert json.loads(decoded.stdout) == {"members": ["0", "1"]}


def test_commands_listing(runner):
    result = invoke(runner, "commands")
    assert "[universal]" in result.stdout
    assert "verify-all" in result.stdout


# =========================
# 종료 코드
# =========================

def test_usage_error_exits_2(runner):
    result = invoke(runner, "level", "0")
    assert result.exit_code == EXIT_USAGE == 2


def test_dot_unsupported_is_usage_error(runner):
    result = invoke(runner, "projection", "2", "1", "--format", "dot")
    assert result.exit_code == EXIT_USAGE


def test_malformed_json_exits_3(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"elements\": [", encoding="utf-8")
    result = invoke(runner, "validate", str(path))
    assert result.exit_code == EXIT_IO == 3
    error = json.loads(result.stderr.strip().splitlines()[-1])
    assert error["error_code"] == "INPUT_FORMAT"


def test_schema_error_exits_3(runner, write_json):
    path = write_json("poset.json", {"elements": ["a"], "le": [[0]]})
    result = invoke(runner, "validate", path)
    assert result.exit_code == EXIT_IO


def test_missing_file_exits_3(runner, tmp_path):
    result = invoke(runner, "validate", str(tmp_path / "missing.json"))
    assert result.exit_code == EXIT_IO


def test_validation_failure_exits_1(runner, write_json):
    path = write_json("poset.json", {"elements": ["a", "b"], "le": [[0, 1], [1, 0]]})
    result = invoke(runner, "validate", path)
    assert result.exit_code == EXIT_VERIFICATION_FAILED == 1
    assert json.loads(result.stdout)["axiom"] == "antisymmetric"


def test_valid_poset_exits_0(runner, write_json):
    path = write_json("poset.json", {"elements": ["a", "b"], "le": [[0, 1]]})
    assert invoke(runner, "validate", path).exit_code == 0


def test_depth_bound_rejected(runner):
    result = invoke(runner, "level", "3", "--depth", "2")
    assert result.exit_code == EXIT_VERIFICATION_FAILED
    assert "DEPTH_BOUND" in result.stderr


# =========================
# verify-all
# =========================

def test_verify_all_single_check(runner):
    result = invoke(runner, "verify-all", "--only", "birkhoff", "--seed", "42")
    assert result.exit_code == 0
    assert re.search(r"birkhoff\s+PASS", result.stdout)


def test_verify_all_json_report(runner, tmp_path):
    report_path = tmp_path / "report.json"
    result = invoke(runner, "verify-all", "--only", "birkhoff", "--json", "--report", str(report_path))
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["seed"] == 42
    assert [check["name"] for check in payload["checks"]] == ["birkhoff"]
    assert set(payload["checks"][0]) == {"name", "passed", "cases", "detail"}
    assert json.loads(report_path.read_text(encoding="utf-8")) == payload


@pytest.mark.parametrize("extra", [[], ["--json"]])
def test_verify_all_same_seed_same_output(runner, extra):
    args = ["verify-all", "--only", "birkhoff", "--only", "thread_solver", "--seed", "7", *extra]
    first = invoke(runner, *args)
    second = invoke(runner, *args)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout


def test_verify_all_unknown_check_is_usage_error(runner):
    assert invoke(runner, "verify-all", "--only", "nope").exit_code == EXIT_USAGE


# =========================
# 명령 ↔ 라이브러리 연산 대응
# =========================

def test_every_operation_has_exactly_one_command():
    operations = [operation for config in COMMAND_CONFIGS for operation in config["operations"]]
    assert len(operations) == len(set(operations))
    names = [config["command"].name for config in COMMAND_CONFIGS]
    assert len(names) == len(set(names))


def test_operations_cover_public_service_methods(services):
    listed = {}
    for config in COMMAND_CONFIGS:
        for operation in config["operations"]:
            service, method = operation.split(".")
            listed.setdefault(service, set()).add(method)

    for service, helpers in HELPER_OPERATIONS.items():
        cls = type(getattr(services, service))
        public = {
            name for name in dir(cls)
            if not name.startswith("_") and callable(getattr(cls, name)) and not name.startswith("check_")
        }
        assert listed.get(service, set()) <= public, service
        assert public - listed.get(service, set()) == helpers, service
