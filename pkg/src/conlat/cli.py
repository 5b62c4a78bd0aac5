"""Command-line interface.

Subcommands: con, build-i, build-ii, check, perms.  Exit codes: 0 on
success, 1 when a verification fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import UnaryAlgebra, con, from_permutations
from .lattice import FiniteLattice, leq_matrix_of, to_dot
from .overalgebra import OverISpec, OverIISpec, OverResult, build_i, build_ii
from .verify import check_residuation, check_thm1, check_thm2_thm3

DEFAULT_UNIVERSE_BUDGET = 64
DOT_LABEL_CAP = 60


def universe_budget() -> int:
    return int(os.environ.get("CONLAT_MAX_UNIVERSE", DEFAULT_UNIVERSE_BUDGET))


def _load_algebra(path: str) -> UnaryAlgebra:
    with open(path, encoding="utf-8") as fh:
        return UnaryAlgebra.loads(fh.read())


def _parse_ints(s: str) -> list[int]:
    s = s.strip()
    if not s:
        return []
    return [int(t) for t in s.split(",")]


def _parse_blocks(s: str | None):
    if s is None:
        return None
    s = s.strip()
    if not s:
        return []
    return [_parse_ints(part) for part in s.split("|")]


def _parse_pairs(s: str) -> list[tuple]:
    out = []
    for t in s.split(","):
        t = t.strip()
        if not t:
            continue
        a, sep, b = t.partition(":")
        if not sep:
            raise ValueError(f"pair must look like a:b, got {t!r}")
        out.append((int(a), int(b)))
    return out


def _check_universe(n: int):
    if n > universe_budget():
        raise ValueError(
            f"universe size {n} exceeds CONLAT_MAX_UNIVERSE={universe_budget()}"
        )


def _derived(path: str, new_suffix: str) -> str:
    stem = path[: -len(".json")] if path.endswith(".json") else path
    return stem + new_suffix


def _write_build(res: OverResult, out: str):
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(res.ambient.dumps() + "\n")
    emb = _derived(out, ".embedding.json")
    with open(emb, "w", encoding="utf-8") as fh:
        json.dump(res.embedding.to_dict(), fh, indent=2)
        fh.write("\n")
    for i, c in enumerate(res.embedding.copies):
        print(f"B_{i} = {{{','.join(str(x) for x in c)}}}")
    print(f"wrote {out} and {emb}", file=sys.stderr)


def _con_lattice_of(partitions):
    parts = sorted(partitions, key=lambda p: (-p.block_count(), p.bar()))
    bars = [p.bar() for p in parts]
    return FiniteLattice(leq_matrix_of(parts), labels=bars, check=False), parts


def cmd_con(args) -> int:
    a = _load_algebra(args.algebra)
    _check_universe(a.n)
    L = con(a)
    for p in L:
        if args.list:
            print(json.dumps(p.to_blocks_json()))
        else:
            print(p.bar())
    print(f"|Con| = {len(L)}", file=sys.stderr)
    if args.json:
        doc = {
            "algebra": a.name,
            "size": a.n,
            "count": len(L),
            "congruences": [
                {"bar": p.bar(), "blocks": p.to_blocks_json()} for p in L
            ],
        }
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    if args.dot or args.fig:
        lat, parts = _con_lattice_of(list(L))
        if args.dot:
            labels = lat.labels
            if len(parts) > DOT_LABEL_CAP:
                labels = [str(i) for i in range(len(parts))]
                legend = _derived(args.dot, ".legend.txt")
                with open(legend, "w", encoding="utf-8") as fh:
                    for i, p in enumerate(parts):
                        fh.write(f"{i}\t{p.bar()}\n")
                print(f"wrote label legend {legend}", file=sys.stderr)
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(to_dot(lat, name=a.name or "con", labels=labels))
        if args.fig:
            from .render import draw_lattice

            draw_lattice(
                lat,
                args.fig,
                title=f"{a.name or 'algebra'}: {len(parts)} congruences",
            )
    return 0


def _spec_i_from_args(args, base: UnaryAlgebra) -> OverISpec:
    tiepoints = _parse_ints(args.tiepoints)
    return OverISpec(base, tiepoints, _parse_blocks(args.blocks))


def _spec_ii_from_args(args, base: UnaryAlgebra) -> OverIISpec:
    pairs = _parse_pairs(args.pairs)
    return OverIISpec(base, pairs, args.u, _parse_blocks(args.blocks))


def cmd_build_i(args) -> int:
    base = _load_algebra(args.algebra)
    spec = _spec_i_from_args(args, base)
    _check_universe(base.n + spec.K * (base.n - 1))
    res = build_i(spec)
    out = args.out or _derived(os.path.basename(args.algebra), "_over_i.json")
    _write_build(res, out)
    return 0


def cmd_build_ii(args) -> int:
    base = _load_algebra(args.algebra)
    spec = _spec_ii_from_args(args, base)
    _check_universe(base.n + spec.u * spec.K * (base.n - 1))
    res = build_ii(spec)
    out = args.out or _derived(os.path.basename(args.algebra), "_over_ii.json")
    _write_build(res, out)
    return 0


def cmd_check(args) -> int:
    base = _load_algebra(args.algebra)
    if args.thm == "1":
        if args.tiepoints is None:
            raise ValueError("--thm 1 needs --tiepoints")
        spec = _spec_i_from_args(args, base)
        _check_universe(base.n + spec.K * (base.n - 1))
        report = check_thm1(spec)
    elif args.thm in ("2", "3"):
        if args.pairs is None:
            raise ValueError(f"--thm {args.thm} needs --pairs")
        spec = _spec_ii_from_args(args, base)
        _check_universe(base.n + spec.u * spec.K * (base.n - 1))
        report = check_thm2_thm3(spec)
    else:  # lemma
        if args.tiepoints is not None:
            spec = _spec_i_from_args(args, base)
            _check_universe(base.n + spec.K * (base.n - 1))
            res = build_i(spec)
        elif args.pairs is not None:
            spec = _spec_ii_from_args(args, base)
            _check_universe(base.n + spec.u * spec.K * (base.n - 1))
            res = build_ii(spec)
        else:
            raise ValueError("--thm lemma needs --tiepoints or --pairs")
        report = check_residuation(
            res.ambient, res.embedding.sub0, res.retraction
        )
    for f in report.fibers:
        d = f.to_dict()
        shape = "-" if f.predicted is None else f.predicted.label()
        print(
            f"beta={d['beta']} fiber={d['fiber_size']} "
            f"predicted={shape} exact={f.exact_match}"
        )
    print(
        f"{'PASS' if report.passed else 'FAIL'}: theorem={report.theorem_id} "
        f"|Con base|={report.base_con_size} |Con ambient|={report.ambient_con_size}"
    )
    for msg in report.failures:
        print(f"failure: {msg}", file=sys.stderr)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
        if not args.no_fig:
            from .render import draw_lattice

            elems = [p for f in report.fibers for p in f.fiber]
            lat, parts = _con_lattice_of(elems)
            biggest = max(report.fibers, key=lambda f: len(f.fiber))
            hi = [
                i for i, p in enumerate(parts) if p in set(biggest.fiber)
            ] if len(biggest.fiber) > 1 else []
            fig_path = _derived(args.report, ".png")
            draw_lattice(
                lat,
                fig_path,
                highlight=hi,
                title=f"ambient congruences ({len(parts)}), "
                f"largest fiber {len(biggest.fiber)}",
            )
            print(f"wrote figure {fig_path}", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_perms(args) -> int:
    a = from_permutations(args.n, [_parse_ints(p) for p in args.perm], name=args.name)
    text = a.dumps() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="conlat",
        description="Congruence lattices of finite unary algebras: "
        "compute, expand, verify.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("con", help="print the congruence lattice of an algebra")
    p.add_argument("algebra", help="algebra JSON path")
    p.add_argument("--dot", metavar="PATH", help="write a DOT Hasse diagram")
    p.add_argument("--json", metavar="PATH", help="write congruences as JSON")
    p.add_argument("--fig", metavar="PATH", help="render the diagram to an image")
    p.add_argument(
        "--list", action="store_true", help="print JSON block lists, not bars"
    )
    p.set_defaults(func=cmd_con)

    p = sub.add_parser("build-i", help="glue fresh copies at chosen tie-points")
    p.add_argument("algebra")
    p.add_argument(
        "--tiepoints", required=True, help="comma list, e.g. 0,2 (empty for none)"
    )
    p.add_argument(
        "--blocks",
        help="partition of copy indices 1..K, e.g. '1,2|3,4'; default one block",
    )
    p.add_argument("--out", metavar="PATH", help="ambient algebra JSON path")
    p.set_defaults(func=cmd_build_i)

    p = sub.add_parser("build-ii", help="chain copies along generating pairs")
    p.add_argument("algebra")
    p.add_argument("--pairs", required=True, help="comma list of a:b pairs, e.g. 0:3")
    p.add_argument("--u", type=int, default=1, help="number of repetitions")
    p.add_argument(
        "--blocks",
        help="partition of the multiples 0,K,..,uK, e.g. '0,2|4'; default one block",
    )
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_build_ii)

    p = sub.add_parser("check", help="verify interval structure against enumeration")
    p.add_argument("--thm", choices=["1", "2", "3", "lemma"], required=True)
    p.add_argument("algebra")
    p.add_argument("--tiepoints")
    p.add_argument("--blocks")
    p.add_argument("--pairs")
    p.add_argument("--u", type=int, default=1)
    p.add_argument("--report", metavar="PATH", help="write a JSON report")
    p.add_argument(
        "--no-fig",
        action="store_true",
        help="skip the figure normally rendered next to the report",
    )
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("perms", help="make an algebra from permutation tables")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--perm", action="append", required=True, metavar="TABLE",
        help="comma list image table; repeatable",
    )
    p.add_argument("--name", default="")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_perms)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
