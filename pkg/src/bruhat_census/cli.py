"""Command-line interface: ``bruhat-census <command> ...``.

Exit codes: 0 success, 1 usage error, 2 a verification failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import __version__
from .ancestry import CosetData
from .clifford import CliffordElement, QuatMonomial, acute_word, orbit_decomposition, thin_stats
from .complex import build_census, component_report, euler, to_dot
from .oracle import bruhat_perm, gamma_fixture_check, load_gamma_families, signed_cell
from .perm import ReducedWord, all_perms, canonical_word, format_perm, format_word, parse_perm, parse_word
from .splits import detect_moves, verify_product_lemma
from .verify import SUITES

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
DEFAULT_MAX_N = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which we reserve
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def resolve_input(target: str | None, word: str | None, size: int | None) -> ReducedWord:
    """Reduced word from a one-line permutation, a comma-separated word, or --word."""
    n = None if size is None else size - 1
    try:
        if word is not None:
            w = parse_word(word, n)
            if target is not None and "," not in target and w.perm() != parse_perm(target):
                raise UsageError(f"--word {word} does not evaluate to {target}")
            return w
        if target is None:
            raise UsageError("a permutation or a word is required")
        if "," in target:
            return parse_word(target, n)
        p = parse_perm(target)
        if n is not None and p.n != n:
            raise UsageError(f"{target} does not have {size} entries")
        return canonical_word(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_MONOMIAL = re.compile(r"^([+-]?)((?:h\d+)*|1)$")


def parse_z(text: str, w: ReducedWord) -> CliffordElement:
    """z from its JSON serialization, or as a signed monomial times acute(sigma) such as '-h1h3'."""
    text = text.strip()
    try:
        if text.startswith("["):
            z = CliffordElement.deserialize(w.n, json.loads(text))
        else:
            m = _MONOMIAL.match(text.replace(" ", ""))
            if not m:
                raise UsageError(f"cannot read z from {text!r}")
            idx = [int(i) for i in re.findall(r"h(\d+)", m.group(2))]
            if any(not 1 <= i <= w.n for i in idx):
                raise UsageError(f"generator index out of range in {text!r}")
            q = QuatMonomial(1, 0)
            for i in idx:
                q = q * QuatMonomial(1, 1 << i)
            if m.group(1) == "-":
                q = -q
            z = CliffordElement.monomial(w.n, q) * acute_word(w)
        CosetData(w).code_of(z)
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(str(exc)) from None
    return z


# ---------------------------------------------------------------------------
# analyze


def _census_json(census) -> dict:
    return {
        "z": census.z.serialize(),
        "zText": str(census.z),
        "counts": census.counts,
        "chi": euler(census.counts),
        "thin": census.thin,
        "components": [c.to_json() for c in census.components],
    }


def _print_report(report) -> None:
    t = report.totals
    print(f"sigma {format_perm(report.sigma)}  word {format_word(report.word.letters)}")
    for o in report.orbits:
        comps = ", ".join(f"{tuple(c.cells)} chi={c.chi}" for c in o.components if not c.thin)
        thin = f" + {o.thin} thin" if o.thin else ""
        print(f"  orbit of {o.z}  size {o.size}  counts {o.counts}  components: {comps or '-'}{thin}")
    print(f"components {t['components']}  cells {t['cells']}  chi {t['chi']}  "
          f"chi histogram {t['chiHistogram']}  labels {t['labels']}")


def cmd_analyze(args) -> int:
    w = resolve_input(args.target, args.word, args.size)
    if args.orbit_rep is not None or args.dot is not None:
        z = parse_z(args.orbit_rep, w) if args.orbit_rep is not None else acute_word(w)
        census = build_census(w, z)
        if args.dot is not None:
            with open(args.dot, "w") as fh:
                fh.write(to_dot(census))
        if args.orbit_rep is not None:
            out = {"sigma": format_perm(w.perm()), "word": format_word(w.letters), **_census_json(census)}
            if args.json:
                sys.stdout.write(dumps(out))
            else:
                print(f"z = {census.z}: counts {census.counts}, chi {census.chi}, "
                      f"{len(census.components)} components ({census.thin} thin)")
                for c in census.components:
                    print(f"  {c.cells} chi={c.chi} {c.label()}")
            return EXIT_OK
    report = component_report(w, check_orbits=args.check_orbits)
    if args.json:
        sys.stdout.write(dumps(report.to_json()))
    else:
        _print_report(report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# orbits


def cmd_orbits(args) -> int:
    w = resolve_input(args.target, args.word, args.size)
    stats = thin_stats(w)
    rows = []
    for o in orbit_decomposition(w):
        rows.append({"z": o.representative.serialize(), "zText": str(o.representative),
                     "size": o.size, "real": str(o.representative.real_part()),
                     "containsAcute": acute_word(w) in o.members})
    out = {"sigma": format_perm(w.perm()), "word": format_word(w.letters),
           "orbits": rows, "cTilde": stats.c_tilde}
    if args.json:
        sys.stdout.write(dumps(out))
    else:
        for r in rows:
            mark = "  (acute)" if r["containsAcute"] else ""
            print(f"size {r['size']:3d}  R={r['real']:>10}  {r['zText']}{mark}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# split


def cmd_split(args) -> int:
    w = resolve_input(args.target, args.word, args.size)
    moves = detect_moves(w)
    out = []
    failed = False
    cache: dict = {}
    for m in moves:
        entry = m.to_json()
        if args.check:
            check = verify_product_lemma(m, w, cache)
            entry["product"] = {"components": check.components,
                                "predicted": check.predicted_components, "ok": check.ok}
            failed |= not check.ok
        out.append(entry)
    if args.json:
        sys.stdout.write(dumps({"sigma": format_perm(w.perm()), "word": format_word(w.letters), "moves": out}))
    else:
        if not out:
            print("no split moves apply")
        for e in out:
            side = f" ({e['side']})" if "side" in e else ""
            extra = ""
            if "product" in e:
                extra = f"  {e['product']['components']} vs {e['product']['predicted']}"
                extra += " ok" if e["product"]["ok"] else " MISMATCH"
            print(f"{e['kind']} at {e['site']}{side}: {e['factors'][0]} | {e['factors'][1]}{extra}")
    return EXIT_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# verify and gamma


def cmd_verify(args) -> int:
    fn = SUITES[args.suite]
    kwargs = {}
    if args.suite == "oracle":
        kwargs["seed"] = args.seed
    if args.n is not None:
        if args.suite in ("splits", "thin"):
            kwargs["perms"] = all_perms(args.n + 1)
        elif args.suite == "formulas":
            kwargs["words"] = [canonical_word(p) for p in all_perms(args.n + 1)]
        elif args.suite == "oracle":
            kwargs["size"] = args.n + 1
    report = fn(**kwargs)
    if args.json:
        sys.stdout.write(dumps({**report.to_json(), "elapsed": round(report.elapsed, 3)}))
    else:
        status = "pass" if report.ok else "FAIL"
        print(f"{args.suite}: {status} ({report.checked} checks, {report.elapsed:.1f} s)")
        for f in report.failures[:20]:
            print(f"  {f}")
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_gamma(args) -> int:
    families = load_gamma_families(args.fixture)
    report = gamma_fixture_check(families)
    detail = []
    for fam in families:
        L = fam.paths[0].at(0)
        detail.append({"family": fam.name, "paths": len(fam.paths), "sigma": format_perm(bruhat_perm(L)),
                       "signedCell": {"perm": format_perm(signed_cell(L).perm),
                                      "signs": list(signed_cell(L).row_sign)}})
    if args.json:
        sys.stdout.write(dumps({**report.to_json(), "families": detail}))
    else:
        for d in detail:
            print(f"{d['family']}: {d['paths']} paths in the cell of {d['sigma']}")
        print(f"gamma: {'pass' if report.ok else 'FAIL'} ({report.checked} checks)")
        for f in report.failures:
            print(f"  {f}")
    return EXIT_OK if report.ok else EXIT_FAILED


# ---------------------------------------------------------------------------
# catalog


def catalog_entry(sigma_text: str, seed: int) -> tuple[dict, float]:
    start = time.perf_counter()
    w = canonical_word(parse_perm(sigma_text))
    report = component_report(w)
    entry = {
        "sigma": sigma_text,
        "inv": w.length,
        "word": format_word(w.letters),
        "report": report.to_json(),
        "version": __version__,
        "seed": seed,
    }
    return entry, time.perf_counter() - start


def _catalog_task(job: tuple[str, int]) -> tuple[dict, float]:
    return catalog_entry(*job)


def cmd_catalog(args) -> int:
    if args.n < 1:
        raise UsageError("n must be at least 1")
    if args.n > DEFAULT_MAX_N and not args.force:
        raise UsageError(f"n={args.n} is beyond the default limit {DEFAULT_MAX_N}; pass --force")
    os.makedirs(args.out_dir, exist_ok=True)
    jobs = [(format_perm(p), args.seed) for p in sorted(all_perms(args.n + 1), key=lambda p: p.oneline)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_catalog_task, jobs, chunksize=8))
    else:
        results = [_catalog_task(j) for j in jobs]
    by_inv: dict[int, dict] = {}
    for entry, _ in results:
        with open(os.path.join(args.out_dir, f"{entry['sigma']}.json"), "w") as fh:
            fh.write(dumps(entry))
        row = by_inv.setdefault(entry["inv"], {"perms": 0, "components": 0, "thin": 0, "chi": {}})
        t = entry["report"]["totals"]
        row["perms"] += 1
        row["components"] += t["components"]
        row["thin"] += t["thin"]
        for k, v in t["chiHistogram"].items():
            row["chi"][int(k)] = row["chi"].get(int(k), 0) + v
    with open(os.path.join(args.out_dir, "summary.csv"), "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["inv", "permutations", "components", "thin", "chi_values", "chi_histogram"])
        for inv in sorted(by_inv):
            row = by_inv[inv]
            hist = ";".join(f"{k}:{v}" for k, v in sorted(row["chi"].items()))
            out.writerow([inv, row["perms"], row["components"], row["thin"],
                          " ".join(str(k) for k in sorted(row["chi"])), hist])
    with open(os.path.join(args.out_dir, "permutations.csv"), "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["sigma", "inv", "components", "thin", "chi_histogram"])
        for entry, _ in sorted(results, key=lambda r: (r[0]["inv"], r[0]["sigma"])):
            t = entry["report"]["totals"]
            hist = ";".join(f"{k}:{v}" for k, v in t["chiHistogram"].items())
            out.writerow([entry["sigma"], entry["inv"], t["components"], t["thin"], hist])
    if args.timings:
        # wall-clock data lives apart from the entries so those stay reproducible
        with open(os.path.join(args.out_dir, "timings.csv"), "w", newline="") as fh:
            out = csv.writer(fh)
            out.writerow(["sigma", "seconds"])
            for entry, secs in results:
                out.writerow([entry["sigma"], f"{secs:.4f}"])
    print(f"wrote {len(results)} entries to {args.out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bruhat-census", description="Census of Bruhat cell intersections BL_sigma.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def target_args(p):
        p.add_argument("target", nargs="?", help="one-line permutation (563412) or word (2,1,4,3)")
        p.add_argument("--word", help="reduced word to use instead of the canonical one")
        p.add_argument("--size", type=int, help="number of strands n+1 for a word input")
        p.add_argument("--json", action="store_true", help="emit JSON")

    p = sub.add_parser("analyze", help="component report for one permutation")
    target_args(p)
    p.add_argument("--orbit-rep", help="report only BL_z; z as JSON or as a monomial such as -h1h3")
    p.add_argument("--dot", help="write the 1-skeleton of BL_z as DOT to this path")
    p.add_argument("--check-orbits", action="store_true", help="census every z, not one per orbit")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("orbits", help="orbits of the sign group on acute(sigma) Quat")
    target_args(p)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("split", help="applicable split moves")
    target_args(p)
    p.add_argument("--check", action="store_true", help="verify the product identity for each move")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--n", type=int, help="run over all of S_{n+1} instead of the default scope")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gamma", help="check the closed matrix loops")
    p.add_argument("--fixture", help="alternative fixture JSON")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("catalog", help="reports for every permutation of S_{n+1}")
    p.add_argument("n", type=int)
    p.add_argument("out_dir")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true", help=f"allow n > {DEFAULT_MAX_N}")
    p.add_argument("--timings", action="store_true", help="also write wall-clock times")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bruhat-census: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"bruhat-census: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
