from __future__ import annotations

import json

import pytest

from repoknowledge.config import AnalysisConfig, ServiceConfig, load_config
from repoknowledge.errors import ValidationError


class TestAnalysisConfig:
    def test_defaults(self):
        config = AnalysisConfig()
        assert config.expert_threshold == 0.75
        assert config.top_files_limit == 50
        assert config.coefficients.intercept == 5.28223

    def test_threshold_bounds(self):
        AnalysisConfig(expert_threshold=1.0)
        with pytest.raises(ValidationError):
            AnalysisConfig(expert_threshold=1.5)
        with pytest.raises(ValidationError):
            AnalysisConfig(expert_threshold=0.0)

    def test_top_files_limit_bound(self):
        with pytest.raises(ValidationError):
            AnalysisConfig(top_files_limit=0)


class TestServiceConfig:
    def test_worker_count_bound(self):
        with pytest.raises(ValidationError):
            ServiceConfig(worker_count=0)


class TestLoadConfig:
    def test_missing_path_gives_defaults(self):
        config = load_config(None)
        assert config.worker_count == 2
        assert config.analysis.expert_threshold == 0.75

    def test_file_values_and_coefficient_override(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "expertThreshold": 0.6,
            "coefficients": {"intercept": 4.0, "adds": 0.5},
            "excludes": ["vendor/*"],
            "topFilesLimit": 10,
            "service": {"workerCount": 4, "port": 9000},
        }))
        config = load_config(path)
        assert config.analysis.expert_threshold == 0.6
        assert config.analysis.coefficients.intercept == 4.0
        assert config.analysis.coefficients.adds == 0.5
        # untouched coefficients keep their defaults
        assert config.analysis.coefficients.size == 0.28761
        assert config.analysis.excludes == ("vendor/*",)
        assert config.analysis.top_files_limit == 10
        assert config.worker_count == 4
        assert config.port == 9000

    def test_alias_override_file_resolved_relative_to_config(self, tmp_path):
        (tmp_path / "aliases.txt").write_text("canon@x.com <- old@y.com\n")
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"aliasOverrides": "aliases.txt"}))
        config = load_config(path)
        assert config.analysis.overrides_mapping == {"old@y.com": "canon@x.com"}

    def test_inline_alias_overrides(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"aliasOverrides": {"Old@Y.com": "canon@x.com"}}))
        config = load_config(path)
        assert config.analysis.overrides_mapping == {"old@y.com": "canon@x.com"}

    def test_env_overrides_take_precedence(self, tmp_path, monkeypatch):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"service": {"workerCount": 4, "port": 9000}}))
        monkeypatch.setenv("REPOKNOWLEDGE_WORKERS", "7")
        monkeypatch.setenv("REPOKNOWLEDGE_PORT", "9911")
        monkeypatch.setenv("REPOKNOWLEDGE_STORE", str(tmp_path / "other.db"))
        config = load_config(path)
        assert config.worker_count == 7
        assert config.port == 9911
        assert config.store_path == str(tmp_path / "other.db")

    def test_unreadable_config_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError):
            load_config(path)


class TestConfigThroughCli:
    def test_coefficient_override_flows_into_report(self, main_repo, tmp_path, capsys):
        from repoknowledge.cli import main

        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({
            "coefficients": {"numDays": 0.0},
        }))
        code = main([
            "analyze", str(main_repo.path), "--config", str(config_path),
        ])
        out = capsys.readouterr().out
        assert code == 0
        document = json.loads(out)
        assert document["config"]["coefficients"]["numDays"] == 0.0
        # With the recency penalty switched off, every expertise value grows,
        # so importance scores differ from the default run.
        default_code = main(["analyze", str(main_repo.path)])
        default_doc = json.loads(capsys.readouterr().out)
        assert default_code == 0
        assert (
            document["tree"]["topFiles"][0]["importance"]
            > default_doc["tree"]["topFiles"][0]["importance"]
        )
