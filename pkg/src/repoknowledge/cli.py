"""Command line front-end: analyze a repository offline or serve the API.

``analyze`` runs the whole pipeline synchronously and emits either the JSON
report or an indented tree; ``tf`` prints the truck factor of one subtree;
``serve`` hosts the HTTP API. Progress goes to standard error, results to
standard output (or --output).

Exit codes: 0 success, 1 clone/mining/analysis failure, 2 invalid flags.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path
from typing import Any

from .analysis import run_analysis
from .config import AnalysisConfig, load_config
from .errors import RepoKnowledgeError, ValidationError
from .mining import RepoSource
from .report import build_report, canonical_json

__all__ = ["main"]


def _threshold(value: str) -> float:
    try:
        parsed = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}")
    if not 0.0 < parsed <= 1.0:
        raise argparse.ArgumentTypeError(
            f"threshold must be in (0, 1], got {parsed}"
        )
    return parsed


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repoknowledge",
        description="Mine git history and locate knowledge concentration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze a repository")
    analyze.add_argument("source", help="clone URL or local repository path")
    analyze.add_argument("--branch", default=None, help="branch to analyze")
    analyze.add_argument("--threshold", type=_threshold, default=None,
                         help="normalized expertise cutoff in (0, 1]")
    analyze.add_argument("--exclude", action="append", default=[],
                         metavar="GLOB", help="path pattern to skip (repeatable)")
    analyze.add_argument("--format", choices=("json", "tree"), default="json")
    analyze.add_argument("--output", default=None, help="write to file instead of stdout")
    analyze.add_argument("--config", default=None, help="JSON configuration file")

    tf = sub.add_parser("tf", help="truck factor of one subtree")
    tf.add_argument("source", help="clone URL or local repository path")
    tf.add_argument("--path", default=".", help="subtree path (default: root)")
    tf.add_argument("--branch", default=None)
    tf.add_argument("--threshold", type=_threshold, default=None)
    tf.add_argument("--exclude", action="append", default=[], metavar="GLOB")
    tf.add_argument("--config", default=None)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--config", default=None, help="JSON configuration file")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    return parser


def _analysis_config(args: argparse.Namespace) -> AnalysisConfig:
    config = load_config(args.config).analysis
    updates: dict[str, Any] = {}
    if args.threshold is not None:
        updates["expert_threshold"] = args.threshold
    if args.exclude:
        updates["excludes"] = config.excludes + tuple(args.exclude)
    if updates:
        from dataclasses import replace

        config = replace(config, **updates)
    return config


def _analyze(args: argparse.Namespace) -> dict:
    config = _analysis_config(args)
    source = RepoSource(url=args.source, branch=args.branch)
    with tempfile.TemporaryDirectory(prefix="repoknowledge-") as workdir:
        version = run_analysis(
            source, workdir, config=config,
            on_stage=lambda phase: print(f"[{phase}] ...", file=sys.stderr),
        )
        return build_report(version)


def _render_tree(node: dict, depth: int = 0) -> list[str]:
    label = f"{'  ' * depth}{node['name']} [TF={node['truckFactor']['value']}]"
    if node["kind"] == "file":
        importance = node["topFiles"][0]["importance"] if node["topFiles"] else 0.0
        label += f" (importance={importance:.5f})"
    lines = [label]
    for child in node["children"]:
        lines.extend(_render_tree(child, depth + 1))
    return lines


def _find_node(tree: dict, subpath: str) -> dict | None:
    if subpath in (".", "", "/"):
        return tree
    node = tree
    for part in subpath.strip("/").split("/"):
        for child in node["children"]:
            if child["name"] == part:
                node = child
                break
        else:
            return None
    return node


def _cmd_analyze(args: argparse.Namespace) -> int:
    report = _analyze(args)
    if args.format == "json":
        payload = canonical_json(report)
    else:
        payload = "\n".join(_render_tree(report["tree"])) + "\n"
    if args.output:
        Path(args.output).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_tf(args: argparse.Namespace) -> int:
    report = _analyze(args)
    node = _find_node(report["tree"], args.path)
    if node is None:
        print(f"error: no such path in analyzed tree: {args.path}", file=sys.stderr)
        return 1
    value = node["truckFactor"]["value"]
    removed = node["truckFactor"]["removedDevelopers"]
    print(f"{args.path}: TF={value}")
    print("removal order: " + (", ".join(removed) if removed else "(none)"))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app
    from .pipeline import AnalysisService

    config = load_config(args.config)
    host = args.host or config.host
    port = args.port if args.port is not None else config.port
    service = AnalysisService(config)
    try:
        uvicorn.run(create_app(service), host=host, port=port, log_level="info")
    finally:
        service.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "tf":
            return _cmd_tf(args)
        return _cmd_serve(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RepoKnowledgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
