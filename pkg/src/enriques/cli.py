"""Command-line front end.

    enriques invariants check [--char P --k K --a A --b B]
    enriques construct --char P --k K --group G --seed N [--out FILE]
    enriques verify --in FILE [--max-ext K]
    enriques quotient --in FILE --point "1,0,0,0,0,0"
    enriques count-points --q Q --tower T --in FILE
    enriques lattice {gram|phi|weight|reduce|count-check}
    enriques campaign run|report

Output is JSON (one object per line) except for ``campaign report``.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import lattice_e10 as lat
from . import point_engine as pe
from . import surface_forge as sf
from .ff_core import ZAB, FieldError, make_field
from .group_scheme import (
    BASIS_LABELS,
    MIXED_SIGN,
    GroupSchemeParams,
    GroupType,
    check_invariance,
    invariant_basis,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CHAR2_GROUPS = ("etale2", "mu2", "alpha2")


class UsageError(ValueError):
    pass


# -- campaigns ------------------------------------------------------------------------

def admissible_groups(char: int) -> tuple[str, ...]:
    return CHAR2_GROUPS if char == 2 else (GroupType.MIXED_ORDINARY.value,)


@dataclass
class CampaignConfig:
    char: int
    k: int = 1
    groups: tuple[str, ...] = CHAR2_GROUPS
    seed_start: int = 0
    seeds: int = 200
    max_ext: int = sf.MAX_EXT
    fixed_plane_ext: int = sf.FIXED_PLANE_EXT
    budget: int = pe.DEFAULT_BUDGET
    out: str | None = None
    stop_after: int | None = None  # accepted candidates per group before moving on
    workers: int = 1

    def validate(self) -> None:
        try:
            make_field(self.char, self.k)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
        allowed = admissible_groups(self.char)
        for g in self.groups:
            if g not in allowed:
                raise UsageError(f"group {g!r} is not admissible in characteristic {self.char} (allowed: {', '.join(allowed)})")
        if self.seeds < 1:
            raise UsageError("need at least one seed")
        if not 0 <= self.seed_start < 2**64 or self.seed_start + self.seeds > 2**64:
            raise UsageError("seeds are 64-bit unsigned integers")


@dataclass
class GroupSummary:
    attempted: int = 0
    accepted: int = 0
    rejected: int = 0
    reasons: dict[str, int] = dc_field(default_factory=dict)
    accepted_seeds: list[int] = dc_field(default_factory=list)
    point_counts: dict[str, dict[str, list[int]]] = dc_field(default_factory=dict)


@dataclass
class CampaignSummary:
    groups: dict[str, GroupSummary]

    @property
    def ok(self) -> bool:
        return all(g.accepted >= 1 for g in self.groups.values())

    def to_json(self) -> dict:
        return {"groups": {k: asdict(v) for k, v in self.groups.items()}, "ok": self.ok}


def _verify_seed(field, params, seed: int, config: CampaignConfig) -> sf.SurfaceCandidate:
    system = sf.sample_system(field, params, seed)
    return sf.verify(system, max_ext=config.max_ext, fixed_plane_ext=config.fixed_plane_ext, budget=config.budget)


def run_campaign(config: CampaignConfig) -> tuple[CampaignSummary, list[sf.SurfaceCandidate]]:
    """Verify consecutive seeds for every requested group.

    The result depends only on the config: seeds are processed in order in
    batches of ``workers`` and results beyond ``stop_after`` acceptances
    are discarded, so thread count does not change the output.
    """
    config.validate()
    field = make_field(config.char, config.k)
    summary = CampaignSummary({})
    catalog: list[sf.SurfaceCandidate] = []
    pool = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    try:
        for g in config.groups:
            params = GroupSchemeParams.for_group(field, g)
            gs = GroupSummary()
            reasons: Counter = Counter()
            seeds = range(config.seed_start, config.seed_start + config.seeds)
            batch = max(1, config.workers)
            done = False
            for start in range(0, len(seeds), batch):
                chunk = list(seeds[start : start + batch])
                if pool is None:
                    results = [_verify_seed(field, params, s, config) for s in chunk]
                else:
                    results = list(pool.map(lambda s: _verify_seed(field, params, s, config), chunk))
                for cand in results:
                    gs.attempted += 1
                    catalog.append(cand)
                    if cand.accepted:
                        gs.accepted += 1
                        gs.accepted_seeds.append(cand.system.seed)
                        gs.point_counts[str(cand.system.seed)] = {
                            str(k): v for k, v in cand.report.point_counts.items()
                        }
                    else:
                        gs.rejected += 1
                        reasons[cand.status.split(":", 1)[1]] += 1
                    if config.stop_after and gs.accepted >= config.stop_after:
                        done = True
                        break
                if done:
                    break
            gs.reasons = dict(sorted(reasons.items()))
            summary.groups[g] = gs
    finally:
        if pool is not None:
            pool.shutdown()
    if config.out:
        write_catalog(config.out, catalog)
    return summary, catalog


def write_catalog(path: str | Path, candidates: Iterable[sf.SurfaceCandidate], append: bool = False) -> None:
    with open(path, "a" if append else "w", encoding="utf-8") as fh:
        for c in candidates:
            fh.write(c.dumps() + "\n")


def read_catalog(path: str | Path) -> list[sf.SurfaceCandidate]:
    out = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read catalog: {exc}") from None
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(sf.SurfaceCandidate.from_json(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"{path}:{n}: malformed catalog line ({exc})") from None
    return out


def report(candidates: Sequence[sf.SurfaceCandidate]) -> str:
    """Plain-text tables: status totals, then one block per candidate."""
    lines = [f"candidates: {len(candidates)}"]
    totals = Counter(c.status for c in candidates)
    for status, n in sorted(totals.items()):
        lines.append(f"  {status:<28} {n}")
    for i, c in enumerate(candidates):
        s, r = c.system, c.report
        lines.append("")
        lines.append(f"[{i}] {s.group.value} over F_{s.q} seed={s.seed} status={c.status}")
        if r.hilbert_dims:
            lines.append("  hilbert  " + " ".join(f"d{d}={v}" for d, v in enumerate(r.hilbert_dims)))
        if r.fixed_plane_clear:
            lines.append("  planes   " + " ".join(f"{k}={'clear' if v else 'HIT'}" for k, v in r.fixed_plane_clear.items()))
        if r.singular_points:
            lines.append(f"  singular {len(r.singular_points)} point(s), first {r.singular_points[0]}")
        for k, f in sorted(r.psi_fibers.items()):
            lines.append(f"  psi k={k}  points={f['points']} images={f['images']} max_fiber={f['max_fiber']}")
        if r.point_counts:
            lines.append("  k   cover  quotient  1+q^2k   margin")
            for k, (cover, quot) in sorted(r.point_counts.items()):
                Q = s.q**k
                margin = sf.B2 * Q - abs(quot - 1 - Q * Q)
                lines.append(f"  {k:<3} {cover:<6} {quot:<9} {1 + Q * Q:<8} {margin}")
    return "\n".join(lines)


# -- argument helpers ----------------------------------------------------------------------

def parse_ints(text: str) -> list[int]:
    parts = [p for p in re.split(r"[\s,:;\[\]()]+", text.strip()) if p]
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"expected a list of integers, got {text!r}") from None


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _select(cands: list[sf.SurfaceCandidate], index: int | None) -> list[sf.SurfaceCandidate]:
    if index is None:
        return cands
    if not 0 <= index < len(cands):
        raise UsageError(f"catalog has {len(cands)} candidate(s); index {index} out of range")
    return [cands[index]]


# -- subcommands -----------------------------------------------------------------------

def cmd_invariants(args) -> int:
    if args.char is None:
        settings = [("Z[a,b]/(ab-2)", GroupSchemeParams.universal())]
    else:
        try:
            field = make_field(args.char, args.k)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
        if args.a is not None or args.b is not None:
            if args.a is None or args.b is None:
                raise UsageError("--a and --b go together")
            try:
                params = GroupSchemeParams(field.element(args.a % field.q), field.element(args.b % field.q), field)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            settings = [(f"F_{field.q}", params)]
        else:
            settings = [(f"F_{field.q} {g}", GroupSchemeParams.for_group(field, g)) for g in admissible_groups(args.char)]
    ok = True
    for name, params in settings:
        results = [check_invariance(q, params) for q in invariant_basis(params, args.sign)]
        ok &= all(results)
        _emit({
            "ring": name,
            "a": str(params.a),
            "b": str(params.b),
            "sign": args.sign,
            "invariant": dict(zip(BASIS_LABELS, results)),
            "all": all(results),
        })
    return EXIT_OK if ok else EXIT_FAIL


def cmd_construct(args) -> int:
    cfg = CampaignConfig(args.char, args.k, (args.group,), args.seed, 1)
    cfg.validate()
    field = make_field(args.char, args.k)
    params = GroupSchemeParams.for_group(field, args.group)
    system = sf.sample_system(field, params, args.seed)
    if args.no_verify:
        cand = sf.SurfaceCandidate(system, sf.VerificationReport(), "unverified")
    else:
        cand = sf.verify(system, max_ext=args.max_ext, fixed_plane_ext=args.fixed_plane_ext)
    print(cand.dumps())
    if args.out:
        write_catalog(args.out, [cand], append=True)
    return EXIT_OK if cand.accepted or args.no_verify else EXIT_FAIL


def cmd_verify(args) -> int:
    cands = _select(read_catalog(args.inp), args.index)
    out = [sf.verify(c.system, max_ext=args.max_ext, fixed_plane_ext=args.fixed_plane_ext) for c in cands]
    for c in out:
        print(c.dumps())
    if args.out:
        write_catalog(args.out, out)
    return EXIT_OK if all(c.accepted for c in out) else EXIT_FAIL


def cmd_quotient(args) -> int:
    cands = _select(read_catalog(args.inp), args.index if args.index is not None else 0)
    system = cands[0].system
    field = sf.extension(system.field, args.ext)
    pt = parse_ints(args.point)
    if len(pt) != 6 or not any(pt) or any(not 0 <= v < field.q for v in pt):
        raise UsageError(f"point needs 6 codes in [0, {field.q}), not all zero")
    try:
        image = sf.quotient_point(system, pt, field)
    except ValueError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_FAIL
    norm = pe.normalize(np.array([pt]), field.tables())[0]
    _emit({"point": [int(v) for v in norm], "image": list(image), "field": field.descriptor()})
    return EXIT_OK


def cmd_count_points(args) -> int:
    cands = _select(read_catalog(args.inp), args.index)
    status = EXIT_OK
    for i, c in enumerate(cands):
        if args.q is not None and c.system.q != args.q:
            raise UsageError(f"candidate {i} lives over F_{c.system.q}, not F_{args.q}")
        for k in range(1, args.tower + 1):
            try:
                cover, quot = sf.count_quotient_points(c, k)
            except sf.NotAcceptedError as exc:
                print(json.dumps({"error": str(exc), "candidate": i}), file=sys.stderr)
                status = EXIT_FAIL
                break
            except pe.BudgetExceeded as exc:
                raise UsageError(str(exc)) from None
            _emit({"candidate": i, "k": k, "cover": cover, "quotient": quot})
    return status


def _vector_arg(args) -> np.ndarray:
    if args.weight is not None:
        if args.weight not in range(10):
            raise UsageError("weight index must be 0..9")
        return lat.fundamental_weight(args.weight)
    if args.vector is None:
        raise UsageError("give --vector or --weight")
    v = parse_ints(args.vector)
    if len(v) != lat.RANK:
        raise UsageError(f"vector needs {lat.RANK} coordinates (alpha_1..alpha_9, alpha_0)")
    return np.array(v, dtype=np.int64)


def cmd_lattice(args) -> int:
    if args.what == "gram":
        _emit({"gram": lat.GRAM.tolist(), "det": lat.determinant(), "signature": list(lat.signature())})
    elif args.what == "weight":
        w = lat.fundamental_weight(args.index)
        _emit({"index": args.index, "weight": w.tolist(), "square": lat.square(w)})
    elif args.what == "phi":
        x = _vector_arg(args)
        try:
            value, witness = lat.phi_with_witness(x, args.box, args.basis)
        except lat.LatticeError as exc:
            raise UsageError(str(exc)) from None
        _emit({
            "vector": x.tolist(),
            "square": lat.square(x),
            "box": args.box,
            "basis": args.basis,
            "phi": value,
            "witness": None if witness is None else witness.tolist(),
        })
        return EXIT_OK if value is not None else EXIT_FAIL
    elif args.what == "reduce":
        x = _vector_arg(args)
        try:
            red, word = lat.chamber_reduce(x)
        except lat.LatticeError as exc:
            raise UsageError(str(exc)) from None
        _emit({"vector": x.tolist(), "reduced": red.tolist(), "word": word, "reflections": len(word)})
    elif args.what == "count-check":
        try:
            n = lat.orbit_count_check()
        except AssertionError as exc:
            print(json.dumps({"error": str(exc)}), file=sys.stderr)
            return EXIT_FAIL
        _emit({"classes": n, "numerator": lat.O_PLUS_10_F2, "denominator": lat.D9_QUOTIENT})
    return EXIT_OK


def cmd_campaign(args) -> int:
    if args.action == "report":
        print(report(read_catalog(args.inp)))
        return EXIT_OK
    groups = tuple(args.groups.split(",")) if args.groups else admissible_groups(args.char)
    cfg = CampaignConfig(
        char=args.char,
        k=args.k,
        groups=groups,
        seed_start=args.seed,
        seeds=args.seeds,
        max_ext=args.max_ext,
        fixed_plane_ext=args.fixed_plane_ext,
        budget=args.budget,
        out=args.out,
        stop_after=args.stop_after,
        workers=args.workers,
    )
    summary, _ = run_campaign(cfg)
    _emit(summary.to_json())
    return EXIT_OK if summary.ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------------------

def _check_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-ext", type=int, default=sf.MAX_EXT, help="extension degree K for point checks (default: %(default)s)")
    p.add_argument("--fixed-plane-ext", type=int, default=sf.FIXED_PLANE_EXT, help="extension degree for fixed-plane checks (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="enriques", description="Invariant quadrics, E10 lattice queries and Enriques-cover campaigns.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="check invariance of the 12 quadrics")
    p.add_argument("action", choices=["check"])
    p.add_argument("--char", type=int, help="characteristic (omit for the universal ring)")
    p.add_argument("--k", type=int, default=1, help="extension degree (default: 1)")
    p.add_argument("--a", type=int, help="code of a (with --b)")
    p.add_argument("--b", type=int, help="code of b (with --a)")
    p.add_argument("--sign", type=int, choices=[1, -1], default=MIXED_SIGN, help="sign of the b*y_i*y_j term (default: %(default)s)")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("construct", help="sample and verify one quadric system")
    p.add_argument("--char", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--group", required=True, choices=[g.value for g in GroupType])
    p.add_argument("--seed", type=int, required=True, help="64-bit seed for numpy PCG64")
    p.add_argument("--out", help="append the candidate to this catalog")
    p.add_argument("--no-verify", action="store_true", help="sample only")
    _check_flags(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-verify catalog candidates")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--index", type=int)
    p.add_argument("--out", help="write re-verified candidates here")
    _check_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("quotient", help="image of a point under Psi: P^5 -> P^11")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--index", type=int, help="catalog line (default: 0)")
    p.add_argument("--point", required=True, help='six element codes, e.g. "1,0,0,0,0,0"')
    p.add_argument("--ext", type=int, default=1, help="codes live in F_{q^ext} (default: 1)")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("count-points", help="cover and quotient point counts over a tower")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--q", type=int, help="expected base field order")
    p.add_argument("--tower", type=int, default=1, help="count over F_{q^k}, k = 1..T (default: 1)")
    p.add_argument("--index", type=int)
    p.set_defaults(func=cmd_count_points)

    p = sub.add_parser("lattice", help="E10 queries")
    p.add_argument("what", choices=["gram", "phi", "weight", "reduce", "count-check"])
    p.add_argument("--vector", help="coordinates alpha_1..alpha_9, alpha_0")
    p.add_argument("--weight", type=int, help="use the fundamental weight omega_i")
    p.add_argument("--index", type=int, default=1, choices=range(10), metavar="I", help="weight index for 'weight' (default: 1)")
    p.add_argument("--box", type=int, default=3, help="coefficient box for phi (default: 3)")
    p.add_argument("--basis", choices=["weight", "alpha"], default="weight", help="basis the phi box is taken in (default: weight)")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("campaign", help="seeded construction campaigns")
    p.add_argument("action", choices=["run", "report"])
    p.add_argument("--char", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--groups", help="comma-separated group tags (default: all admissible)")
    p.add_argument("--seed", type=int, help="first seed (required for run)")
    p.add_argument("--seeds", type=int, default=200, help="seeds per group (default: 200)")
    p.add_argument("--stop-after", type=int, help="stop a group after this many acceptances")
    p.add_argument("--budget", type=int, default=pe.DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="catalog output (JSON lines)")
    p.add_argument("--in", dest="inp", help="catalog input for report")
    _check_flags(p)
    p.set_defaults(func=cmd_campaign)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "campaign":
        if args.action == "run" and args.seed is None:
            ap.error("campaign run requires --seed")
        if args.action == "report" and not args.inp:
            ap.error("campaign report requires --in")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"enriques: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
