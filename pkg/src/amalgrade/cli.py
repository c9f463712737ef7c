"""Command line driver: ``amalgrade run FILES...`` and ``amalgrade corpus``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .report import DEFAULT_SEED, RunReport, corpus_paths, run_files


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="amalgrade", description=__doc__)
    p.add_argument("--version", action="version", version=f"amalgrade {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--field", default=None,
                        help="override coefficient field of every ring: qq or fp:P")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for unseeded families and the reverification pass")
        sp.add_argument("--json", dest="json_out", default=None, help="write the JSON report here")
        sp.add_argument("--budget", type=int, default=None,
                        help="Groebner step budget per computation (default: AMALGRADE_BUDGET)")
        sp.add_argument("--jobs", type=int, default=1, help="worker threads")
        sp.add_argument("-q", "--quiet", action="store_true", help="only print the summary line")

    run = sub.add_parser("run", help="run instance files")
    run.add_argument("files", nargs="+")
    common(run)
    corpus = sub.add_parser("corpus", help="run the bundled corpus")
    common(corpus)
    sub.add_parser("list", help="list bundled corpus files")
    return p


def _print(report: RunReport, quiet: bool) -> None:
    for r in report.results:
        print(f"{r.name}: {r.status}" + (f" ({r.error})" if r.error else ""))
        if quiet:
            continue
        for c in r.checks:
            mark = ""
            if "expect" in c:
                mark = "  [ok]" if c["matched"] else f"  [MISMATCH: expected {c['expect']}]"
            print(f"  {c['check']}({c['subject']}): {c['verdict']}{mark}")
            w = c.get("witness")
            if w and c["verdict"] in ("counterexample", "fails"):
                vals = ", ".join(f"{k}={v}" for k, v in w["values"].items())
                print(f"    witness {w['ideal']}: {vals}")
            for n in c["notes"]:
                if n.startswith("warning"):
                    print(f"    {n}")
    ok = sum(r.status == "ok" for r in report.results)
    print(f"{ok}/{len(report.results)} instances ok, exit {report.exit_code}")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        for p in corpus_paths():
            print(p.name)
        return 0
    if args.field:
        from .fields import field_from_tag
        try:
            field_from_tag(args.field)
        except ValueError as e:
            print(f"amalgrade: {e}", file=sys.stderr)
            return 4
    paths = corpus_paths() if args.command == "corpus" else [Path(f) for f in args.files]
    missing = [str(p) for p in paths if not p.exists()]
    if missing:
        print(f"amalgrade: no such file: {', '.join(missing)}", file=sys.stderr)
        return 4
    report = run_files(paths, args.field, args.seed, args.budget, args.jobs)
    if args.json_out:
        Path(args.json_out).write_text(report.to_json() + "\n", encoding="utf-8")
    _print(report, args.quiet)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
