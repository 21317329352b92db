"""Command line entry point: ``dgvc run`` and ``dgvc check``.

Exit codes: 0 when every statement succeeded and every embedded verdict
passed, 1 otherwise, 2 for unreadable or unparsable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..config import limits_from_env
from ..syntax import ParseError
from .parser import parse
from .runner import Runner

SUFFIX = ".dgvc"


def run_source(text: str, source: str, truncate: int | None = None, alpha_bound: int | None = None,
               seed: int = 0):
    limits = limits_from_env()
    if truncate is not None:
        limits = limits.with_(truncate=truncate)
    sc = parse(text)
    return Runner(limits, alpha_bound, seed).run(sc, source)


def _parse_error_json(e: ParseError, source: str) -> str:
    import json
    return json.dumps({"source": source, "error": {"type": "ParseError", "message": str(e),
                                                    "span": str(e.span), "expected": e.expected}},
                      sort_keys=True, indent=2) + "\n"


def cmd_run(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        print(f"dgvc: cannot read {path}: {e}", file=sys.stderr)
        return 2
    try:
        report = run_source(text, path.name, args.truncate, args.alpha_bound, args.seed)
    except ParseError as e:
        if args.output == "json":
            sys.stdout.write(_parse_error_json(e, path.name))
        else:
            print(f"{path.name}:{e}", file=sys.stderr)
        return 2
    sys.stdout.write(report.dumps() if args.output == "json" else report.text())
    return 0 if report.ok else 1


def cmd_check(args) -> int:
    root = Path(args.dir)
    files = sorted(root.glob("*" + SUFFIX))
    if not files:
        print(f"dgvc: no *{SUFFIX} scenarios in {root}", file=sys.stderr)
        return 2
    failures = 0
    for f in files:
        golden = f.with_name(f.name[: -len(SUFFIX)] + ".golden.json")
        try:
            report = run_source(f.read_text(encoding="utf-8"), f.name, args.truncate, args.alpha_bound, args.seed)
            body = report.dumps()
            ok = report.ok
        except ParseError as e:
            body = _parse_error_json(e, f.name)
            ok = False
        if args.update:
            golden.write_text(body, encoding="utf-8")
            status = "updated"
            match = True
        else:
            match = golden.exists() and golden.read_text(encoding="utf-8") == body
            status = "match" if match else ("missing golden" if not golden.exists() else "MISMATCH")
        # the golden file records expected statuses, negative scenarios included
        verdict = "PASS" if match else "FAIL"
        failures += verdict == "FAIL"
        print(f"{verdict} {f.name}: {status}, report {'ok' if ok else 'not ok'}")
    print(f"{len(files) - failures}/{len(files)} scenarios passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgvc", description="Virtual classes of [0,1]-dg-manifolds.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--truncate", type=int, default=None, help="truncation degree D")
        sp.add_argument("--alpha-bound", type=int, default=None, help="partition bound for certificates")
        sp.add_argument("--seed", type=int, default=0, help="recorded in the report; the engine is deterministic")

    r = sub.add_parser("run", help="evaluate a scenario file")
    r.add_argument("file")
    r.add_argument("--output", choices=("json", "text"), default="text")
    common(r)
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("check", help="run all scenarios in a directory against golden files")
    c.add_argument("dir")
    c.add_argument("--update", action="store_true", help="rewrite golden files")
    common(c)
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
