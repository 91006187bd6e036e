"""Command-line front end.

Parses and evaluates games, computes power indices, reproduces the
certified enumeration tables with on-disk caching, measures the gap
between complete simple games and their best weighted approximations,
and runs inverse searches.  Output formats: aligned text, CSV, JSON.

Exit codes: 0 success, 1 usage or input errors, 2 a certified count
failed to verify.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import certified, pipeline
from .certified import CountMismatchError
from .council import council_game, parse_populations
from .enumeration import CatalogFormatError, weighted_certificate
from .games import (
    BoolCombo,
    GameParseError,
    WeightedGame,
    coalition_mask,
    coalition_members,
    evaluate,
    game_to_text,
    parse_game,
)
from .geometry import Metric, VectorFormatError, count_distinct, distance, omega
from .indices import KINDS, decimal_str, pbi_dp, power_vector, ssi_dp
from .inverse import (
    InverseMode,
    InverseResult,
    Target,
    beta_target,
    inverse_exact,
    inverse_heuristic,
    padded_target_search,
    parse_target_file,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 is reserved for certified
    count mismatches here, so usage errors are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _UsageError(Exception):
    """Input problems detected after argparse is done."""


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _aligned(headers, rows, out):
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(), file=out)
    print("  ".join("-" * w for w in widths), file=out)
    for row in rows:
        print("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip(), file=out)


class _Report:
    """One command's output: tabular sections plus a JSON mirror."""

    def __init__(self, config: dict):
        self.config = config
        self.results: dict = {}
        self.sections: list[tuple[str, list[str], list[list[str]]]] = []
        self.started = time.monotonic()

    def section(self, title: str, headers, rows) -> None:
        self.sections.append(
            (title, [str(h) for h in headers], [[str(c) for c in row] for row in rows])
        )

    def emit(self, fmt: str, out=None) -> None:
        out = out or sys.stdout
        if fmt == "json":
            payload = {
                "config": self.config,
                "results": self.results,
                "timing": {"seconds": round(time.monotonic() - self.started, 6)},
            }
            print(json.dumps(payload, indent=2), file=out)
        elif fmt == "csv":
            w = csv.writer(out)
            for _, headers, rows in self.sections:
                w.writerow(headers)
                w.writerows(rows)
        else:
            for i, (title, headers, rows) in enumerate(self.sections):
                if i:
                    print(file=out)
                if title:
                    print(title, file=out)
                _aligned(headers, rows, out)


def _config(args, **extra) -> dict:
    cfg = {"subcommand": args.cmd, "format": args.format}
    for name in ("n", "index", "metric", "threads", "long_running", "seed"):
        if hasattr(args, name):
            cfg[name] = getattr(args, name)
    if hasattr(args, "cache_dir"):
        cfg["cache_dir"] = str(_cache_dir(args))
    cfg.update(extra)
    return cfg


def _vec_json(v) -> dict:
    fracs = v.fractions()
    return {
        "kind": v.kind,
        "values": [str(f) for f in fracs],
        "decimals": [decimal_str(f) for f in fracs],
    }


def _cache_dir(args) -> Path:
    if getattr(args, "cache_dir", None):
        return Path(args.cache_dir)
    return pipeline.default_cache_dir()


def _long_ok(args) -> bool:
    if getattr(args, "long_running", False):
        return True
    return os.environ.get("VOTEKIT_LONG_RUNNING") == "1"


def _require_big(args) -> Path:
    """The 8-voter tier: reuse cache files, else build behind the flag."""
    cache = _cache_dir(args)
    if pipeline.big_files_present(cache):
        return cache
    if not _long_ok(args):
        raise _UsageError(
            "the 8-voter run takes hours and is not cached yet; "
            "pass --long-running (or set VOTEKIT_LONG_RUNNING=1) to build it"
        )

    def progress(done, total):
        if done % (64 * 16384) < 16384 or done == total:
            print(f"\r  enumerated {done}/{total} complete games", end="", file=sys.stderr)
            if done == total:
                print(file=sys.stderr)

    pipeline.build_big_tables(cache, workers=args.threads, progress=progress)
    return cache


def _pick_kinds(args) -> tuple[str, ...]:
    return KINDS if args.index == "both" else (args.index,)


def _pick_metrics(args) -> tuple[Metric, ...]:
    if args.metric == "both":
        return (Metric.L1, Metric.LINF)
    return (Metric.parse(args.metric),)


def _parse_n_range(text: str) -> range:
    if ".." in text:
        a, _, b = text.partition("..")
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad voter range {text!r}")
    return range(lo, hi + 1)


def _auto_vector(g, kind: str, state_cap: int):
    """Weighted games and combinations stay in weight space; everything
    else goes through the explicit table."""
    if isinstance(g, (WeightedGame, BoolCombo)):
        return ssi_dp(g, state_cap) if kind == "ssi" else pbi_dp(g, state_cap)
    return power_vector(g, kind)


def _parse_coalition(text: str, n: int) -> int:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1].strip()
    if not body:
        return 0
    try:
        members = [int(tok) for tok in body.split(",")]
    except ValueError:
        raise _UsageError(f"bad coalition {text!r}; write it like {{1,3}}") from None
    for m in members:
        if not 1 <= m <= n:
            raise _UsageError(f"voter {m} is out of range 1..{n}")
    return coalition_mask(members)


def _set_text(mask: int) -> str:
    return "{" + ",".join(str(i) for i in coalition_members(mask)) + "}"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_index(args) -> int:
    kinds = [k for k, on in (("ssi", args.ssi), ("pbi", args.pbi)) if on]
    if not kinds:
        kinds = list(KINDS)
    rep = _Report(_config(args, index=",".join(kinds)))
    out_games = []
    for text in args.game:
        g = parse_game(text)
        canonical = game_to_text(g)
        vecs = {k: _auto_vector(g, k, args.state_cap) for k in kinds}
        headers = ["voter"]
        for k in kinds:
            headers += [k, f"{k} decimal"]
        rows = []
        for i in range(g.n):
            row = [i + 1]
            for k in kinds:
                f = vecs[k].fractions()[i]
                row += [f, decimal_str(f, args.places)]
            rows.append(row)
        rep.section(canonical, headers, rows)
        entry = {"game": canonical, "n": g.n}
        for k in kinds:
            entry[k] = _vec_json(vecs[k])
        if len(kinds) == 2:
            gaps = {
                m.value: distance(vecs["ssi"].fractions(), vecs["pbi"].fractions(), m)
                for m in (Metric.L1, Metric.LINF)
            }
            rep.section(
                "disagreement between the two indices",
                ["metric", "distance", "decimal"],
                [[m, d, decimal_str(d)] for m, d in gaps.items()],
            )
            entry["disagreement"] = {
                m: {"distance": str(d), "decimal": decimal_str(d)}
                for m, d in gaps.items()
            }
        out_games.append(entry)
    rep.results["games"] = out_games
    rep.emit(args.format)
    return EXIT_OK


def cmd_eval(args) -> int:
    g = parse_game(args.game)
    rep = _Report(_config(args, game=game_to_text(g)))
    rows = []
    outcomes = []
    for text in args.coalition:
        mask = _parse_coalition(text, g.n)
        win = bool(evaluate(g, mask))
        rows.append([_set_text(mask), "win" if win else "lose"])
        outcomes.append({"coalition": list(coalition_members(mask)), "win": win})
    rep.section(game_to_text(g), ["coalition", "outcome"], rows)
    rep.results["game"] = game_to_text(g)
    rep.results["outcomes"] = outcomes
    rep.emit(args.format)
    return EXIT_OK


def cmd_tables(args) -> int:
    ns = _parse_n_range(args.n)
    klasses = ("cg", "wg") if args.klass == "both" else (args.klass,)
    kinds = _pick_kinds(args)
    cache = _cache_dir(args)
    if ns.stop - 1 > 8:
        raise _UsageError("enumeration stops at 8 voters; larger tiers are documented only")
    if 8 in ns:
        _require_big(args)
    rep = _Report(_config(args, klass=args.klass))
    rows = []
    out = []
    for klass in klasses:
        for n in ns:
            if n <= 7:
                cat = pipeline.ensure_catalog(klass, n, cache, workers=args.threads)
                games = len(cat)
                got = {}
                for kind in kinds:
                    pipeline.ensure_vectors(cat, kind, cache)
                    got[kind] = count_distinct(cat, kind)
            else:
                # certified during the streamed build that produced the cache
                games = (
                    certified.COMPLETE_COUNTS[n]
                    if klass == "cg"
                    else certified.WEIGHTED_COUNTS[n]
                )
                got = {k: certified.DISTINCT_VECTOR_COUNTS[klass, k][n] for k in kinds}
            for kind in kinds:
                expected = certified.DISTINCT_VECTOR_COUNTS.get((klass, kind), {}).get(n)
                if expected is not None and got[kind] != expected:
                    raise CountMismatchError(
                        f"distinct {kind} vectors over {klass} ({n} voters)",
                        expected,
                        got[kind],
                    )
            row = [klass, n, games] + [got[k] for k in kinds]
            rows.append(row)
            out.append({"class": klass, "n": n, "games": games, **got})
    rep.section(
        "distinct power vectors",
        ["class", "n", "games"] + [f"distinct {k}" for k in kinds],
        rows,
    )
    rep.results["rows"] = out
    rep.emit(args.format)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    klass = args.klass
    n = args.n if args.n is not None else (4 if klass == "sg4" else None)
    if n is None:
        raise _UsageError("--n is required")
    if klass == "sg4" and n != 4:
        raise _UsageError("the simple-game catalog exists for 4 voters only")
    if n > 8:
        doc = ", ".join(
            f"{certified.DOCUMENTED_COUNTS[k, m]} {k}({m})"
            for (k, m) in sorted(certified.DOCUMENTED_COUNTS)
        )
        raise _UsageError(
            f"enumeration stops at 8 voters; documented counts beyond that: {doc}"
        )
    cache = _cache_dir(args)
    rep = _Report(_config(args, klass=klass))
    if n == 8:
        if klass not in ("cg", "wg"):
            raise _UsageError("the 8-voter tier holds complete and weighted games only")
        if args.list:
            raise _UsageError("listing millions of games is not supported; use the cache files")
        _require_big(args)
        count = certified.COMPLETE_COUNTS[8] if klass == "cg" else certified.WEIGHTED_COUNTS[8]
        rep.section("catalog", ["class", "n", "games"], [[klass, 8, count]])
        rep.results.update({"class": klass, "n": 8, "count": count})
        rep.emit(args.format)
        return EXIT_OK
    cat = pipeline.ensure_catalog(klass, n, cache, workers=args.threads)
    rep.results.update({"class": klass, "n": n, "count": len(cat)})
    if klass == "sg4":
        certs = (
            cat.certificates
            if cat.certificates is not None
            else [cat.certificate(i) for i in range(len(cat))]
        )
        weighted = sum(c is not None for c in certs)
        if weighted != certified.SIMPLE_4_WEIGHTED:
            raise CountMismatchError("weighted sg4", certified.SIMPLE_4_WEIGHTED, weighted)
        rep.section(
            "catalog",
            ["class", "n", "games", "weighted", "not weighted"],
            [[klass, n, len(cat), weighted, len(cat) - weighted]],
        )
        rep.results["weighted"] = weighted
        if args.list:
            rows = [
                [
                    i,
                    game_to_text(g),
                    game_to_text(certs[i]) if certs[i] is not None else "-",
                ]
                for i, g in enumerate(cat.games)
            ]
            rep.section("games", ["#", "game", "weighted form"], rows)
            rep.results["games"] = [
                {
                    "game": game_to_text(g),
                    "weighted": certs[i] is not None,
                    "representation": game_to_text(certs[i]) if certs[i] else None,
                }
                for i, g in enumerate(cat.games)
            ]
    else:
        rep.section("catalog", ["class", "n", "games"], [[klass, n, len(cat)]])
        if args.list:
            rows = []
            out = []
            for i, g in enumerate(cat.games):
                text = game_to_text(g)
                if klass == "wg":
                    cert = cat.certificate(i)
                    rows.append([i, game_to_text(cert), text])
                    out.append({"game": text, "representation": game_to_text(cert)})
                else:
                    rows.append([i, text])
                    out.append({"game": text})
            headers = ["#", "representation", "game"] if klass == "wg" else ["#", "game"]
            rep.section("games", headers, rows)
            rep.results["games"] = out
    rep.emit(args.format)
    return EXIT_OK


def _gap_reports(args, n=None, kinds=None, metrics=None):
    """(kind, metric) -> GapReport, plus a nearest-game resolver."""
    cache = _cache_dir(args)
    n = args.n if n is None else n
    kinds = kinds if kinds is not None else _pick_kinds(args)
    metrics = metrics if metrics is not None else _pick_metrics(args)
    if n == 8:
        _require_big(args)

        def progress(kind, done, total):
            if done % (64 * 65536) < 65536 or done == total:
                print(f"\r  scanned {done}/{total} {kind} vectors", end="", file=sys.stderr)
                if done == total:
                    print(file=sys.stderr)

        reports = pipeline.omega_big(cache, kinds, metrics, progress=progress)

        def nearest_game(report):
            if report.nearest_index is None:
                return None
            path = pipeline.catalog_path(cache, "wg", 8)
            g = pipeline.fetch_catalog_games(path, [report.nearest_index])[report.nearest_index]
            return weighted_certificate(g)

        return reports, nearest_game

    cg = pipeline.ensure_catalog("cg", n, cache, workers=args.threads)
    reports = {}
    wg_cats = {}
    for kind in kinds:
        pipeline.ensure_vectors(cg, kind, cache)
        wg_cat, store = pipeline.ensure_store("wg", n, kind, cache, args.threads)
        wg_cats[kind] = wg_cat
        for metric in metrics:
            reports[kind, metric.value] = omega(cg, store, metric)

    def nearest_game(report):
        if report.nearest_index is None:
            return None
        return wg_cats[report.kind].certificate(report.nearest_index)

    return reports, nearest_game


def cmd_omega(args) -> int:
    if args.n > 8:
        raise _UsageError("gap computation is certified through 8 voters only")
    rep = _Report(_config(args))
    reports, nearest_game = _gap_reports(args)
    gap_rows = []
    witness_rows = []
    out = []
    for (kind, metric), report in sorted(reports.items()):
        gap_rows.append(
            [kind, metric, report.omega, report.decimal, len(report.attaining)]
        )
        near = nearest_game(report)
        near_text = game_to_text(near) if near is not None else "-"
        entry = {
            "n": report.n,
            "kind": kind,
            "metric": metric,
            "omega": str(report.omega),
            "decimal": report.decimal,
            "attaining": [],
            "nearest": None,
        }
        for idx, game, vec in report.attaining:
            witness_rows.append([kind, metric, idx, game_to_text(game), near_text])
            entry["attaining"].append(
                {"index": idx, "game": game_to_text(game), "vector": _vec_json(vec)}
            )
        if near is not None:
            entry["nearest"] = {
                "index": report.nearest_index,
                "game": near_text,
                "vector": _vec_json(report.nearest_vector),
            }
        out.append(entry)
    rep.section(
        f"worst weighted-approximation gap, n={args.n}",
        ["index", "metric", "omega", "decimal", "attaining"],
        gap_rows,
    )
    if witness_rows:
        rep.section(
            "attaining games",
            ["index", "metric", "#", "game", "nearest weighted"],
            witness_rows,
        )
    rep.results["reports"] = out
    rep.emit(args.format)
    return EXIT_OK


def _single_kind(args) -> str:
    if args.index == "both":
        raise _UsageError("pick one index kind with --index ssi or --index pbi")
    return args.index


def _single_metric(args) -> Metric:
    if args.metric == "both":
        raise _UsageError("pick one metric with --metric l1 or --metric linf")
    return Metric.parse(args.metric)


def _render_inverse(rep: _Report, res: InverseResult, label: str) -> dict:
    game_text = game_to_text(res.game)
    rep.section(
        label,
        ["mode", "metric", "distance", "decimal", "game", "evaluations"],
        [[res.mode.value, res.metric.value, res.distance, res.decimal, game_text, res.evaluations]],
    )
    pairs = [
        [i + 1, t, decimal_str(t), a, decimal_str(a)]
        for i, (t, a) in enumerate(zip(res.target.values, res.vector.fractions()))
    ]
    rep.section(
        "target vs achieved",
        ["voter", "target", "target decimal", "achieved", "achieved decimal"],
        pairs,
    )
    return {
        "mode": res.mode.value,
        "metric": res.metric.value,
        "distance": str(res.distance),
        "decimal": res.decimal,
        "game": game_text,
        "vector": _vec_json(res.vector),
        "target": [str(v) for v in res.target.values],
        "evaluations": res.evaluations,
        "seed": res.seed,
    }


def cmd_inverse(args) -> int:
    cache = _cache_dir(args)
    metric = _single_metric(args)
    rep = _Report(_config(args, target=args.target))

    if args.target == "padded":
        kind = _single_kind(args)
        if args.n is None or args.n < 8:
            raise _UsageError("--target padded needs --n of at least 8")
        reports, _ = _gap_reports(args, n=7, kinds=(kind,), metrics=(metric,))
        base_report = reports[kind, metric.value]
        bases = [g for _, g, _ in base_report.attaining]
        if not bases:
            raise _UsageError("no gap at 7 voters for this configuration; nothing to pad")
        search = padded_target_search(
            bases, args.n, metric, kind, budget=args.budget, seed=args.seed
        )
        rows = []
        out = []
        for base, res in zip(bases, search.results):
            rows.append(
                [game_to_text(base), res.distance, res.decimal, game_to_text(res.game)]
            )
            out.append({"base": game_to_text(base), **_inverse_json(res)})
        rep.section(
            f"padded bases from 7 to {args.n} voters ({search.mode.value})",
            ["base game", "distance", "decimal", "found game"],
            rows,
        )
        rep.section(
            "gap bound",
            ["bound", "decimal"],
            [[search.bound, search.decimal]],
        )
        rep.results.update(
            {
                "mode": search.mode.value,
                "bound": str(search.bound),
                "decimal": search.decimal,
                "searches": out,
            }
        )
        rep.emit(args.format)
        return EXIT_OK

    if args.target == "beta":
        if args.n is None:
            raise _UsageError("--target beta needs --n")
        target = beta_target(args.n, _single_kind(args))
    elif args.target == "eu":
        if not args.populations:
            raise _UsageError("--target eu needs --populations FILE")
        pops = parse_populations(Path(args.populations).read_text())
        game = council_game([p for _, p in pops], args.quantize)
        vec = _auto_vector(game, _single_kind(args), args.state_cap)
        target = Target.from_vector(vec)
    else:
        text = Path(args.target).read_text()
        target = parse_target_file(text, normalize=args.normalize)
        if args.index != "both" and args.index != target.kind:
            raise _UsageError(
                f"target file declares index={target.kind}, but --index {args.index} was given"
            )

    mode = args.mode
    if mode == "auto":
        mode = "exact" if target.n <= 7 else "heuristic"
    if mode == "exact":
        if target.n > 8:
            raise _UsageError("exact minimization needs the full catalog; 8 voters is the cap")
        if target.n == 8:
            _require_big(args)
            res = _exact_big(target, metric, cache)
        else:
            cat, store = pipeline.ensure_store("wg", target.n, target.kind, cache, args.threads)
            res = inverse_exact(target, metric, cat, store)
    else:
        res = inverse_heuristic(
            target,
            metric,
            weight_total=args.weight_total,
            budget=args.budget,
            seed=args.seed,
        )
    rep.results.update(_render_inverse(rep, res, "inverse search"))
    rep.emit(args.format)
    return EXIT_OK


def _inverse_json(res: InverseResult) -> dict:
    return {
        "mode": res.mode.value,
        "distance": str(res.distance),
        "decimal": res.decimal,
        "game": game_to_text(res.game),
        "evaluations": res.evaluations,
        "seed": res.seed,
    }


def _exact_big(target: Target, metric: Metric, cache) -> InverseResult:
    store = pipeline.load_big_store(cache, target.kind)
    nums, den = target.common_ints()
    hit = store.nearest(nums, den, metric)
    rep_idx = int(store.reps[hit.index])
    path = pipeline.catalog_path(cache, "wg", pipeline.BIG_N)
    game = pipeline.fetch_catalog_games(path, [rep_idx])[rep_idx]
    cert = weighted_certificate(game)
    return InverseResult(
        mode=InverseMode.EXACT_MIN,
        target=target,
        metric=metric,
        game=cert,
        vector=store.vector(hit.index),
        distance=hit.dist,
    )


def cmd_eu(args) -> int:
    pops = parse_populations(Path(args.populations).read_text())
    game = council_game([p for _, p in pops], args.quantize)
    shares = game.parts[0].parts[1].weights
    kinds = _pick_kinds(args)
    vecs = {k: _auto_vector(game, k, args.state_cap) for k in kinds}
    rep = _Report(_config(args, quantize=args.quantize, members=len(pops)))
    headers = ["member", "population", "share"]
    for k in kinds:
        headers.append(k)
    rows = []
    for i, (name, p) in enumerate(pops):
        row = [name, p, shares[i]]
        for k in kinds:
            row.append(decimal_str(vecs[k].fractions()[i]))
        rows.append(row)
    rep.section("council rule power distribution", headers, rows)
    rep.results["game"] = game_to_text(game)
    rep.results["members"] = [
        {"name": name, "population": p, "share": str(shares[i])}
        for i, (name, p) in enumerate(pops)
    ]
    for k in kinds:
        rep.results[k] = _vec_json(vecs[k])
    rep.emit(args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------


def build_parser() -> _ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument(
        "--format", choices=("table", "csv", "json"), default="table", help="output format"
    )
    cachep = argparse.ArgumentParser(add_help=False)
    cachep.add_argument("--cache-dir", default=None, help="cache directory (default: VOTEKIT_CACHE or ~/.cache/votekit)")
    cachep.add_argument("--threads", type=int, default=1, help="worker processes for classification")
    cachep.add_argument(
        "--long-running",
        action="store_true",
        help="opt in to the multi-hour 8-voter build (or set VOTEKIT_LONG_RUNNING=1)",
    )

    p = _ArgumentParser(prog="votekit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_ArgumentParser)

    q = sub.add_parser("index", parents=[fmt], help="power indices of one or more games")
    q.add_argument("game", nargs="+", help='game text, e.g. "[3;3,2,1,1]"')
    q.add_argument("--ssi", action="store_true", help="Shapley-Shubik only")
    q.add_argument("--pbi", action="store_true", help="Penrose-Banzhaf only")
    q.add_argument("--state-cap", type=int, default=10**6, help="weight-space size limit")
    q.add_argument("--places", type=int, default=7, help="decimal places")
    q.set_defaults(func=cmd_index)

    q = sub.add_parser("eval", parents=[fmt], help="evaluate coalitions in a game")
    q.add_argument("game")
    q.add_argument("coalition", nargs="+", help="coalitions like {1,3} (voters are 1-based)")
    q.set_defaults(func=cmd_eval)

    q = sub.add_parser("tables", parents=[fmt, cachep], help="distinct power-vector counts")
    q.add_argument("--n", required=True, help="voter count or range like 3..7")
    q.add_argument("--class", dest="klass", choices=("cg", "wg", "both"), default="both")
    q.add_argument("--index", choices=("ssi", "pbi", "both"), default="both")
    q.set_defaults(func=cmd_tables)

    q = sub.add_parser("enumerate", parents=[fmt, cachep], help="build or load a game catalog")
    q.add_argument("--class", dest="klass", choices=("cg", "wg", "sg4"), required=True)
    q.add_argument("--n", type=int, default=None)
    q.add_argument("--list", action="store_true", help="list the games, not just the count")
    q.set_defaults(func=cmd_enumerate)

    q = sub.add_parser("omega", parents=[fmt, cachep], help="worst-case weighted-approximation gap")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--index", choices=("ssi", "pbi", "both"), default="both")
    q.add_argument("--metric", choices=("l1", "linf", "both"), default="both")
    q.set_defaults(func=cmd_omega)

    q = sub.add_parser("inverse", parents=[fmt, cachep], help="find a weighted game matching a target power distribution")
    q.add_argument(
        "--target",
        required=True,
        help="target file, or one of: beta (near-symmetric), eu (council rule), padded (7-voter extremal games padded to --n)",
    )
    q.add_argument("--n", type=int, default=None, help="voter count (for built-in targets)")
    q.add_argument("--index", choices=("ssi", "pbi", "both"), default="both")
    q.add_argument("--metric", choices=("l1", "linf", "both"), default="l1")
    q.add_argument("--mode", choices=("auto", "exact", "heuristic"), default="auto")
    q.add_argument("--budget", type=int, default=800, help="heuristic evaluation budget")
    q.add_argument("--weight-total", type=int, default=100, help="starting weight total for the heuristic")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--normalize", action="store_true", help="rescale file targets to sum to 1")
    q.add_argument("--populations", default=None, help="population file for --target eu")
    q.add_argument("--quantize", type=int, default=None, help="share grid for --target eu, e.g. 1000")
    q.add_argument("--state-cap", type=int, default=10**6)
    q.set_defaults(func=cmd_inverse)

    q = sub.add_parser("eu", parents=[fmt], help="council rule for given member populations")
    q.add_argument("populations", help="file with name,population lines")
    q.add_argument("--quantize", type=int, default=None, help="round shares to this grid, e.g. 1000")
    q.add_argument("--index", choices=("ssi", "pbi", "both"), default="both")
    q.add_argument("--state-cap", type=int, default=10**6)
    q.set_defaults(func=cmd_eu)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CountMismatchError as exc:
        print(f"votekit: certified count mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except GameParseError as exc:
        print(f"votekit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_UsageError, CatalogFormatError, VectorFormatError) as exc:
        print(f"votekit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"votekit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
