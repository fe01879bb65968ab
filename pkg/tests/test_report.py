from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import pytest

from repoknowledge.analysis import run_analysis
from repoknowledge.mining import RepoSource, clone_repository, mine_checkout
from repoknowledge.report import build_report, canonical_json, facts_document

DOCS = Path(__file__).resolve().parent.parent / "docs"


@pytest.fixture(scope="module")
def report(main_repo, tmp_path_factory):
    version = run_analysis(
        RepoSource(url=str(main_repo.path)), tmp_path_factory.mktemp("wd")
    )
    return build_report(version)


def test_report_validates_against_shipped_schema(report):
    schema = json.loads((DOCS / "report.schema.json").read_text())
    jsonschema.validate(report, schema)


def test_facts_document_validates_against_shipped_schema(main_repo, tmp_path):
    checkout = clone_repository(RepoSource(url=str(main_repo.path)), tmp_path)
    document = facts_document(mine_checkout(checkout))
    schema = json.loads((DOCS / "facts.schema.json").read_text())
    jsonschema.validate(document, schema)


def test_round_trip_is_lossless(report):
    serialized = canonical_json(report)
    assert json.loads(serialized) == report
    assert canonical_json(json.loads(serialized)) == serialized


def test_serialization_is_stable_under_key_order(report):
    shuffled = json.loads(json.dumps(report, sort_keys=False))
    assert canonical_json(shuffled) == canonical_json(report)


def test_doe_numbers_are_rounded_to_five_places(report):
    def walk(node):
        for top in node["topFiles"]:
            scaled = top["importance"] * 10**5
            assert abs(scaled - round(scaled)) < 1e-6, top
        for child in node["children"]:
            walk(child)

    walk(report["tree"])


def test_summary_carries_root_truck_factor(report):
    assert report["summary"]["truckFactor"] == report["tree"]["truckFactor"]["value"]


def test_config_snapshot_present(report):
    config = report["config"]
    assert config["expertThreshold"] == 0.75
    assert config["coefficients"]["intercept"] == 5.28223
    assert config["coefficients"]["adds"] == 0.23173
    assert config["coefficients"]["firstAuthorship"] == 0.36151
    assert config["coefficients"]["numDays"] == 0.19421
    assert config["coefficients"]["size"] == 0.28761
