"""Acceptance suite: one test per release criterion, one printed line each.

Every expected value is produced by an independent oracle: the 50-digit
formula evaluation and the step-by-step greedy simulator in oracles.py, plus
the scripted fixture whose history facts are known by construction. Run with
``pytest tests/test_acceptance.py -v -s`` to see the per-criterion lines.
"""

from __future__ import annotations

import json
import random
import time
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from fixture_repo import (
    ALICE_ID,
    BOB_ID,
    CAROL_ID,
    EXPECTED_ACTIVE,
    EXPECTED_COMMIT_COUNT,
    EXPECTED_FACTS,
    EXPECTED_FILES,
    EXPECTED_LAST_TOUCH_DAYS,
    REFERENCE_TS,
)
from oracles import doe_highprec, expected_knowledge, simulate_truck_factor

from repoknowledge.analysis import run_analysis
from repoknowledge.api import (
    PATH_GET_RESULT,
    PATH_LIST_PROCESSES,
    PATH_START_PROCESS,
    create_app,
)
from repoknowledge.doe import DoeEntry, FileKnowledge, compute_doe
from repoknowledge.mining import RepoSource
from repoknowledge.pipeline import JobStage
from repoknowledge.report import build_report, canonical_json
from repoknowledge.truckfactor import compute_truck_factor, is_active

DOCS = Path(__file__).resolve().parent.parent / "docs"
DAY = 86400


def report_line(number: int, title: str) -> None:
    print(f"\nACCEPTANCE {number}: {title}: PASS")


@pytest.fixture(scope="module")
def analyzed(main_repo, tmp_path_factory):
    version = run_analysis(
        RepoSource(url=str(main_repo.path)), tmp_path_factory.mktemp("acc")
    )
    return version


def test_criterion_1_doe_unit_suite():
    started = time.monotonic()
    assert compute_doe(0, 0, 0, 1) == 5.28223, "identity case must be exact"

    for args in [(100, 1, 0, 100), (0, 0, 364, 1000)]:
        oracle = doe_highprec(*args)
        assert abs(compute_doe(*args) - oracle) < 1e-6, args
    # Frozen oracle values, recorded from oracles.doe_highprec:
    assert abs(compute_doe(100, 1, 0, 100) - 5.3887088801755901) < 1e-6
    assert abs(compute_doe(0, 0, 364, 1000) - 2.1496714391726919) < 1e-6

    assert time.monotonic() - started < 1.0
    report_line(1, "expertise formula unit suite (exact + 1e-6)")


def _random_instance(seed: int):
    rng = random.Random(seed)
    devs = [f"d{i}" for i in range(rng.randint(1, 6))]
    files: list[FileKnowledge] = []
    expert_sets: dict[str, set[str]] = {}
    doe_sums: dict[str, float] = {dev: 0.0 for dev in devs}
    for i in range(rng.randint(1, 12)):
        contributors = rng.sample(devs, rng.randint(1, len(devs)))
        doe = {dev: float(rng.randint(0, 8)) for dev in contributors}
        experts = set(rng.sample(contributors, rng.randint(1, len(contributors))))
        top = max(doe.values())
        entries = [
            DoeEntry(developer_id=dev, path=f"f{i}", doe=value,
                     normalized_doe=value / top if top > 0 and value > 0 else 0.0)
            for dev, value in sorted(doe.items())
        ]
        files.append(FileKnowledge(
            path=f"f{i}", entries=entries, experts=experts,
            importance_score=sum(doe.values()),
        ))
        expert_sets[f"f{i}"] = experts
        for dev, value in doe.items():
            doe_sums[dev] += value
    return files, expert_sets, doe_sums


def test_criterion_2_greedy_algorithm_oracle_equivalence():
    started = time.monotonic()
    for seed in range(1000):
        files, expert_sets, doe_sums = _random_instance(seed)
        expected_tf, expected_removed = simulate_truck_factor(expert_sets, doe_sums)
        result = compute_truck_factor(files)
        assert result.value == expected_tf, f"seed {seed}"
        assert list(result.removed_developers) == expected_removed, f"seed {seed}"
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"took {elapsed:.1f}s, budget 10s"
    report_line(2, f"greedy loop matches simulator on 1000 instances ({elapsed:.1f}s)")


def test_criterion_3_monotonicity_suite():
    started = time.monotonic()
    rng = random.Random(20240601)
    fa_coef = 0.36151
    for _ in range(10_000):
        adds = rng.randint(0, 10**9)
        num_days = rng.randint(0, 10**5)
        size = rng.randint(1, 10**9)
        delta = rng.randint(1, 10)

        base = compute_doe(adds, 0, num_days, size)
        assert compute_doe(adds + delta, 0, num_days, size) > base
        assert compute_doe(adds, 0, num_days + delta, size) < base
        assert compute_doe(adds, 0, num_days, size + delta) < base
        # The first-authorship term is the final addition, so the toggle
        # shifts the result by exactly the coefficient (bitwise).
        assert compute_doe(adds, 1, num_days, size) == base + fa_coef
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"took {elapsed:.1f}s, budget 5s"
    report_line(3, f"monotone in all four variables over 10000 tuples ({elapsed:.1f}s)")


def test_criterion_4_end_to_end_fixture(analyzed):
    started = time.monotonic()
    version = analyzed

    actual_facts = {
        (fact.developer_id, fact.path): (
            fact.adds, fact.first_authorship, fact.last_commit_ts
        )
        for fact in version.facts
    }
    assert actual_facts == EXPECTED_FACTS

    assert version.summary.commit_count == EXPECTED_COMMIT_COUNT
    assert version.summary.developer_count == 3
    assert version.summary.file_count == len(EXPECTED_FILES)
    assert version.summary.reference_ts == REFERENCE_TS

    locs = {path: loc for path, (loc, _, _) in EXPECTED_FILES.items()}
    oracle = expected_knowledge(EXPECTED_FACTS, locs, REFERENCE_TS)
    by_path = {k.path: k for k in version.knowledge}
    for path, expected in oracle.items():
        knowledge = by_path[path]
        assert knowledge.experts == expected["experts"], path
        assert abs(knowledge.importance_score - expected["importance"]) < 1e-9, path
        for entry in knowledge.entries:
            assert abs(entry.doe - expected["doe"][entry.developer_id]) < 1e-9

    # Truck factors from the independent simulator, per node file set.
    def oracle_tf(paths):
        sums: dict[str, float] = {}
        for path in paths:
            for dev, value in oracle[path]["doe"].items():
                sums[dev] = sums.get(dev, 0.0) + value
        return simulate_truck_factor(
            {p: oracle[p]["experts"] for p in paths}, sums
        )

    root_tf, root_removed = oracle_tf(list(EXPECTED_FILES))
    assert version.root.truck_factor.value == root_tf == 2
    assert list(version.root.truck_factor.removed_developers) == root_removed

    directories = {c.name: c for c in version.root.children}
    src_tf, _ = oracle_tf(["src/core.py", "src/util.py"])
    docs_tf, _ = oracle_tf(["docs/readme.md"])
    assert directories["src"].truck_factor.value == src_tf == 1
    assert directories["docs"].truck_factor.value == docs_tf == 2

    elapsed = time.monotonic() - started
    assert elapsed < 30.0
    report_line(4, "end-to-end fixture facts, experts, TFs, importance")


def test_criterion_5_hierarchical_consistency(analyzed):
    version = analyzed
    by_path = {k.path: k for k in version.knowledge}

    def subtree_paths(node, prefix=""):
        if node.kind == "file":
            return [prefix + node.name]
        collected = []
        for child in node.children:
            child_prefix = prefix if node.name == "." else prefix + node.name + "/"
            collected.extend(subtree_paths(child, child_prefix))
        return collected

    checked = 0

    def walk(node, prefix=""):
        nonlocal checked
        paths = subtree_paths(node, prefix)
        direct = compute_truck_factor([by_path[p] for p in paths])
        assert node.truck_factor == direct, node.name
        if node.kind == "file":
            assert node.truck_factor.value == len(by_path[paths[0]].experts)
        checked += 1
        for child in node.children:
            child_prefix = prefix if node.name == "." else prefix + node.name + "/"
            walk(child, child_prefix)

    walk(version.root)
    assert checked == 6  # root, docs, src + three files
    report_line(5, "node TFs equal direct subtree computation at all 6 nodes")


def test_criterion_6_determinism(main_repo, tmp_path):
    first = run_analysis(RepoSource(url=str(main_repo.path)), tmp_path / "one")
    second = run_analysis(RepoSource(url=str(main_repo.path)), tmp_path / "two")
    bytes_one = canonical_json(build_report(first)).encode()
    bytes_two = canonical_json(build_report(second)).encode()
    assert bytes_one == bytes_two
    report_line(6, "two full analyses emit byte-identical reports")


def test_criterion_7_api_contract(service, main_repo):
    assert PATH_START_PROCESS == (
        "/git-repository-version-process/start-git-repository-version-process"
    )
    assert PATH_LIST_PROCESSES == "/git-repository-version-process/user/{id}"
    assert PATH_GET_RESULT == "/git-repository-version/{id}"

    client = TestClient(create_app(service))
    cred = "acceptance-credential"
    user_id = client.post(
        "/auth/register", json={"username": "acceptor", "credential": cred}
    ).json()["userId"]
    token = client.post(
        "/auth/login", json={"username": "acceptor", "credential": cred}
    ).json()["token"]
    headers = {"Authorization": f"Bearer {token}"}

    # 401 unauthenticated, 400 invalid body, 403 foreign listing
    assert client.post(PATH_START_PROCESS, json={"url": "x"}).status_code == 401
    assert client.post(PATH_START_PROCESS, json={}, headers=headers).status_code == 400
    assert client.get(
        PATH_LIST_PROCESSES.format(id="intruder"), headers=headers
    ).status_code == 403
    assert client.get(
        PATH_GET_RESULT.format(id="missing"), headers=headers
    ).status_code == 404

    start = client.post(
        PATH_START_PROCESS, json={"url": str(main_repo.path)}, headers=headers
    )
    assert start.status_code == 202
    job_id = start.json()["jobId"]

    deadline = time.monotonic() + 60
    row = None
    while time.monotonic() < deadline:
        listed = client.get(
            PATH_LIST_PROCESSES.format(id=user_id), headers=headers
        )
        assert listed.status_code == 200
        row = next(job for job in listed.json() if job["jobId"] == job_id)
        if row["stage"] == JobStage.FINISHED.value:
            break
        assert row["stage"] != JobStage.FAILED.value, row
        time.sleep(0.05)
    assert row and row["stage"] == JobStage.FINISHED.value

    result = client.get(PATH_GET_RESULT.format(id=row["resultId"]), headers=headers)
    assert result.status_code == 200
    schema = json.loads((DOCS / "report.schema.json").read_text())
    jsonschema.validate(result.json(), schema)

    # 409 for a job id that has not finished: parked-worker case is covered in
    # test_api.py; here assert the NotReady mapping via a fresh Initialized job
    # observed before completion, tolerating fast workers.
    second = client.post(
        PATH_START_PROCESS, json={"url": str(main_repo.path)}, headers=headers
    ).json()["jobId"]
    early = client.get(PATH_GET_RESULT.format(id=second), headers=headers)
    assert early.status_code in (200, 409)
    service.wait_for_job(second)

    report_line(7, "endpoint paths, status codes, schema-valid result")


def test_criterion_8_activity_rule(analyzed):
    version = analyzed
    assert EXPECTED_LAST_TOUCH_DAYS == {ALICE_ID: 10, BOB_ID: 365, CAROL_ID: 400}

    flags = {identity.canonical_id: active for identity, active in version.developers}
    assert flags == EXPECTED_ACTIVE

    for dev, days in EXPECTED_LAST_TOUCH_DAYS.items():
        assert is_active(dev, version.facts, REFERENCE_TS) == (days <= 365), dev

    report_line(8, "10/365/400-day developers flag active/active/inactive")
