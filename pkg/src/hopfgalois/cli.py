"""Command line: enumerate, build, check, report.

Exit codes: 0 every applicable verdict passed, 1 a verdict or internal
consistency check failed, 2 something was inconclusive, 3 bad input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report as rp
from .errors import HopfGaloisError, InternalInconsistencyError, ResourceLimitError
from .instance import catalog_names, load_catalog, resolve
from .pipeline import Options, build_report, enumerate_report, run_pipeline

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


def _primes(text: str) -> list[int]:
    try:
        ps = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated prime list: {text!r}")
    if any(p < 2 for p in ps):
        raise argparse.ArgumentTypeError("primes must be at least 2")
    return ps


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-points", type=int, default=8, help="largest coset space searched")
    common.add_argument("--scan-budget", type=int, default=10 ** 6, help="largest p^n residue scan")
    common.add_argument("--threads", type=int, default=1)

    ap = argparse.ArgumentParser(prog="hopfgalois", description=__doc__.splitlines()[0])
    ap.add_argument("--catalog", action="store_true", help="list built-in instances and exit")
    sub = ap.add_subparsers(dest="command")

    e = sub.add_parser("enumerate", parents=[common], help="list Hopf-Galois structures")
    e.add_argument("instance")
    e.add_argument("--format", choices=["json", "text"], default="text")

    b = sub.add_parser("build", parents=[common], help="Hopf algebra basis and structure constants")
    b.add_argument("instance")
    b.add_argument("--structure", type=int, required=True)

    for name, helptext in (("check", "run the full pipeline"), ("report", "run and render")):
        c = sub.add_parser(name, parents=[common], help=helptext)
        c.add_argument("instance")
        c.add_argument("--primes", type=_primes, default=None)
        c.add_argument("--global-search", type=int, default=None, metavar="B")
        c.add_argument("--sweep-bound", type=int, default=None)
        c.add_argument("--timings", action="store_true", help="include wall-clock seconds")
        c.add_argument("--format", choices=["json", "text"], default="text" if name == "check" else "json")
        c.add_argument("--output", "-o", help="write the report here instead of stdout")
        if name == "report":
            c.add_argument("--figures", metavar="DIR", help="also write PNG figures to DIR")
    return ap


def _options(ns) -> Options:
    return Options(primes=getattr(ns, "primes", None), global_search=getattr(ns, "global_search", None),
                   sweep_bound=getattr(ns, "sweep_bound", None), scan_budget=ns.scan_budget,
                   max_points=ns.max_points, threads=ns.threads, timings=getattr(ns, "timings", False))


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    ap = make_parser()
    ns = ap.parse_args(argv)
    if ns.catalog:
        for name in catalog_names():
            spec = load_catalog(name)
            print(f"{name:8s} {spec.description}")
        return EXIT_OK
    if not ns.command:
        ap.print_help()
        return EXIT_INPUT
    try:
        spec = resolve(ns.instance)
        opts = _options(ns)
        if ns.command == "enumerate":
            rep = enumerate_report(spec, opts)
            _emit(rp.to_json(rep) if ns.format == "json" else rp.render_enumeration(rep), None)
            return EXIT_OK
        if ns.command == "build":
            _emit(rp.to_json(build_report(spec, ns.structure, opts)), None)
            return EXIT_OK
        rep = run_pipeline(spec, opts)
    except ResourceLimitError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (HopfGaloisError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(rp.to_json(rep) if ns.format == "json" else rp.render_text(rep), ns.output)
    if getattr(ns, "figures", None):
        for p in rp.render_figures(rep, ns.figures):
            print(f"wrote {p}", file=sys.stderr)
    return rep["summary"]["exit_code"]


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
