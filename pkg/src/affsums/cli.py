"""
Command-line driver.

    affsums --mode verify-classic --p 3,5,7
    affsums --mode lfunction --instances line.json
    affsums --mode scan --p 5 --n 3 --d 1 --instances random:100 --seed 7
    affsums --mode census --p 3 --n 2 --d 1
    affsums --mode param --p 5 --n 3 --d 1 --instances random:50

A JSON config file (``--config``) may hold any of the flags (same names,
dashes or underscores); flags given on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .characters import (
    AddChar,
    MultChar,
    all_chars,
    gauss_sum,
    jacobi_sum,
    jacobi_via_gauss,
    product_char,
)
from .charsum import hyperplane_reduction_check, param_sum
from .corpus import random_chars, random_form_system
from .cyclotomic import conj
from .errors import AffsumsError, CapExceeded, ConfigInvalid
from .ff import DEFAULT_CAP, Field, make_field
from .lfunc import expected_general_weights, l_polynomial, verify_bounds, weight_profile
from .rng import SplitMix64
from .subspace import (
    ENUM_CAP,
    GENERAL,
    AffineSubspace,
    all_subspaces,
    classify_position,
    minors_criterion,
    random_subspace,
    translates_criterion,
)

log = logging.getLogger("affsums")

MODES = ("verify-classic", "lfunction", "scan", "census", "param")
CSV_FIELDS = ["index", "q", "n", "d", "classification", "D_L", "abs_S", "bound", "margin", "weights", "status"]
TIMING_KEYS = {"elapsed"}

DEFAULTS = {
    "mode": None,
    "p": "3",
    "a": "1",
    "n": None,
    "d": None,
    "chars": "random",
    "instances": None,
    "seed": 0,
    "cap": ENUM_CAP,
    "extra": 2,
    "out": None,
    "format": "json",
    "threads": 1,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="affsums", description=__doc__.split("\n\n")[0].strip())
    ap.add_argument("--config", help="JSON file with default values for any flag")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--p", help="prime, or comma list for verify-classic")
    ap.add_argument("--a", help="extension degree(s), comma list allowed")
    ap.add_argument("--n", help="ambient dimension (comma list for verify-classic)")
    ap.add_argument("--d", type=int, help="subspace dimension")
    ap.add_argument("--chars", help="comma list of exponents, 'all-nontrivial' or 'random'")
    ap.add_argument("--instances", help="path to JSON, random:COUNT or exhaustive")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--cap", type=int, help="enumeration cap (points per sum)")
    ap.add_argument("--extra", type=int, help="consistency power sums beyond the degree")
    ap.add_argument("--out", help="report path (stdout if omitted)")
    ap.add_argument("--format", choices=("json", "csv"))
    ap.add_argument("--threads", type=int, help="worker threads over instances")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--version", action="version", version=f"affsums {__version__}")
    return ap


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid(f"cannot read config {args.config}: {exc}") from exc
        for k, v in raw.items():
            key = k.replace("-", "_").lstrip("_")
            if key not in DEFAULTS:
                raise ConfigInvalid(f"unknown config key {k!r}")
            cfg[key] = v
    for k in DEFAULTS:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    if cfg["mode"] not in MODES:
        raise ConfigInvalid(f"--mode must be one of {', '.join(MODES)}")
    if cfg["format"] not in ("json", "csv"):
        raise ConfigInvalid("--format must be json or csv")
    for key in ("threads", "extra", "cap", "seed"):
        try:
            cfg[key] = int(cfg[key])
        except (TypeError, ValueError):
            raise ConfigInvalid(f"--{key} must be an integer") from None
    if cfg["threads"] < 1 or cfg["extra"] < 0 or cfg["cap"] < 1:
        raise ConfigInvalid("--threads and --cap must be positive, --extra non-negative")
    return cfg


def _int_list(value, name) -> list[int]:
    if value is None:
        return []
    if isinstance(value, int):
        return [value]
    if isinstance(value, list):
        return [int(v) for v in value]
    try:
        return [int(v) for v in str(value).split(",") if v.strip()]
    except ValueError:
        raise ConfigInvalid(f"--{name} must be an integer or comma list") from None


def _single(cfg, name, default=None) -> int:
    vals = _int_list(cfg[name], name)
    if not vals:
        if default is None:
            raise ConfigInvalid(f"--{name} is required for mode {cfg['mode']}")
        return default
    if len(vals) != 1:
        raise ConfigInvalid(f"--{name} takes a single value in mode {cfg['mode']}")
    return vals[0]


def _field(cfg) -> Field:
    try:
        return make_field(_single(cfg, "p"), _single(cfg, "a", 1), cap=max(DEFAULT_CAP, cfg["cap"]))
    except AffsumsError as exc:
        raise ConfigInvalid(str(exc)) from exc


def _random_count(cfg, default=None):
    spec = cfg["instances"]
    if spec is None:
        return default
    if isinstance(spec, str) and spec.startswith("random:"):
        try:
            return int(spec.split(":", 1)[1])
        except ValueError:
            raise ConfigInvalid(f"bad instance spec {spec!r}") from None
    return None


def _chars_for(cfg, f, n, rng, given=None):
    """List of character tuples to run on one subspace."""
    spec = cfg["chars"]
    if given is not None:
        return [[MultChar(f, e) for e in given]]
    if spec in (None, "random"):
        return [random_chars(f, n, rng, force_trivial_product=rng.below(2) == 0)]
    if spec == "all-nontrivial":
        return [list(t) for t in itertools.product(all_chars(f), repeat=n)]
    es = _int_list(spec, "chars")
    if len(es) == 1:
        es = es * n
    if len(es) != n:
        raise ConfigInvalid(f"--chars needs {n} exponents")
    return [[MultChar(f, e) for e in es]]


# ---------------------------------------------------------------------------
# per-instance work


def _repro(mode, cfg, instance, error) -> dict:
    return {
        "mode": mode,
        "instance": instance,
        "error": error,
        "config": {k: cfg[k] for k in ("p", "a", "n", "d", "seed", "cap", "extra")},
    }


def _lfunction_row(cfg, L: AffineSubspace, chis) -> dict:
    inst = L.to_dict()
    inst["chars"] = [c.e for c in chis]
    q, n, d = L.field.q, L.n, L.d
    row = {"q": q, "n": n, "d": d, "instance": inst}
    rep = classify_position(L)
    row.update(classification=rep.classification, D_L=rep.D_L, a=list(rep.a))
    if not rep.admissible:
        row["status"] = "skipped"
        return row
    try:
        P = l_polynomial(L, chis, extra=cfg["extra"], cap=cfg["cap"])
        W = weight_profile(P)
        B = verify_bounds(L, chis, P)
        problems = []
        if W.unclassified:
            problems.append(f"unclassified roots {W.unclassified}")
        if rep.classification == GENERAL:
            want = expected_general_weights(n, d, product_char(chis).is_trivial)
            if W.counts != want:
                problems.append(f"weight counts {W.counts} != {want}")
        row.update(
            abs_S=B.modulus,
            bound=B.general_bound if B.general_bound is not None else B.bound,
            margin=B.general_margin if B.general_margin is not None else B.margin,
            weights=W.to_dict()["counts"],
            lpoly=P.to_dict(),
            bounds=B.to_dict(),
            status="fail" if problems else "ok",
        )
        if problems:
            row["error"] = "; ".join(problems)
    except CapExceeded as exc:
        row.update(status="skipped", error=f"CapExceeded: {exc}")
    except AffsumsError as exc:
        row.update(status="fail", error=f"{type(exc).__name__}: {exc}")
    return row


def _collect_instances(cfg) -> list[tuple[AffineSubspace, list | None]]:
    spec = cfg["instances"]
    if spec is None:
        raise ConfigInvalid("--instances is required for this mode")
    count = _random_count(cfg)
    if count is not None:
        f = _field(cfg)
        n = _single(cfg, "n", 3)
        d = cfg["d"] if cfg["d"] is not None else n - 1
        if not 0 <= d < n:
            raise ConfigInvalid("need 0 <= d < n")
        rng = SplitMix64(cfg["seed"])
        return [(random_subspace(f, n, n - d, rng), None) for _ in range(count)]
    if spec == "exhaustive":
        raise ConfigInvalid("'exhaustive' is only meaningful for census mode")
    try:
        with open(spec) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid(f"cannot read instances {spec}: {exc}") from exc
    if isinstance(raw, dict):
        raw = raw.get("instances", [raw])
    out = []
    for item in raw:
        try:
            out.append((AffineSubspace.from_dict(item, cap=max(DEFAULT_CAP, cfg["cap"])), item.get("chars")))
        except (AffsumsError, KeyError, ValueError) as exc:
            raise ConfigInvalid(f"bad instance {item!r}: {exc}") from exc
    return out


def run_lfunction(cfg) -> list[dict]:
    rng = SplitMix64(cfg["seed"] ^ 0x5EED)
    jobs = []
    for L, given in _collect_instances(cfg):
        for chis in _chars_for(cfg, L.field, L.n, rng, given):
            jobs.append((L, chis))
    with ThreadPoolExecutor(max_workers=cfg["threads"]) as pool:
        return list(pool.map(lambda job: _lfunction_row(cfg, *job), jobs))


def run_scan(cfg) -> list[dict]:
    if cfg["instances"] is None:
        cfg = dict(cfg, instances="random:100")
    if _random_count(cfg) is None:
        raise ConfigInvalid("scan mode samples subspaces; use --instances random:COUNT")
    return run_lfunction(cfg)


def run_verify_classic(cfg) -> list[dict]:
    rows = []
    primes = _int_list(cfg["p"], "p")
    degrees = _int_list(cfg["a"], "a") or [1]
    ns = _int_list(cfg["n"], "n") or [2, 3]
    for p, a in itertools.product(primes, degrees):
        try:
            f = make_field(p, a, cap=max(DEFAULT_CAP, cfg["cap"]))
        except AffsumsError as exc:
            raise ConfigInvalid(str(exc)) from exc
        chars = all_chars(f)
        psis = [AddChar(f, 1), AddChar(f, f.generator)]
        bad = []
        for chi, psi in itertools.product(chars, psis):
            g = gauss_sum(chi, psi)
            if not (g * conj(g) - f.q).is_zero():
                bad.append({"e": chi.e, "psi_b": psi.b})
        rows.append(_classic_row(f, "gauss_modulus", len(chars) * len(psis), bad))
        for n in ns:
            tuples = list(itertools.product(chars, repeat=n))
            bad = []
            for t in tuples:
                if jacobi_sum(t) != jacobi_via_gauss(t):
                    bad.append({"chars": [c.e for c in t]})
            rows.append(_classic_row(f, f"jacobi_gauss_n{n}", len(tuples), bad, n=n))
            # twisted hyperplane a_i = i + 1 (mod p, skipping 0), b = generator
            coeffs = [f.elem(1 + i % (p - 1)) if p > 2 else 1 for i in range(n)]
            L = AffineSubspace(f, [coeffs], [f.generator])
            bad = [{"chars": [c.e for c in t]} for t in tuples if not hyperplane_reduction_check(L, t)]
            rows.append(_classic_row(f, f"hyperplane_identity_n{n}", len(tuples), bad, n=n))
    return rows


def _classic_row(f, check, count, bad, n=None) -> dict:
    row = {"q": f.q, "p": f.p, "a": f.a, "check": check, "checked": count, "failures": bad}
    if n is not None:
        row["n"] = n
    row["status"] = "fail" if bad else "ok"
    if bad:
        row["instance"] = {"field": f.descriptor(), "cases": bad}
        row["error"] = f"{len(bad)} of {count} cases failed"
    return row


def run_census(cfg) -> list[dict]:
    if cfg["instances"] not in (None, "exhaustive"):
        raise ConfigInvalid("census mode enumerates exhaustively; use --instances exhaustive or omit it")
    f = _field(cfg)
    n = _single(cfg, "n")
    d = cfg["d"] if cfg["d"] is not None else n - 1
    if not 0 <= d < n:
        raise ConfigInvalid("need 0 <= d < n")
    counts = {"GeneralPosition": 0, "GeneralAmongTranslates": 0, "Neither": 0}
    rows = []
    total = 0
    for A, b in all_subspaces(f, n, n - d):
        L = AffineSubspace(f, A, b)
        rep = classify_position(L)
        total += 1
        counts[rep.classification] += 1
        gp, tr = minors_criterion(L), translates_criterion(L)
        if gp != (rep.classification == GENERAL) or tr != rep.admissible:
            rows.append(
                {
                    "q": f.q,
                    "n": n,
                    "d": d,
                    "classification": rep.classification,
                    "minors": gp,
                    "translates": tr,
                    "instance": L.to_dict(),
                    "status": "fail",
                    "error": "classifier disagreement",
                }
            )
    rows.insert(
        0,
        {
            "q": f.q,
            "n": n,
            "d": d,
            "check": "census",
            "pairs": total,
            "counts": counts,
            "disagreements": len(rows),
            "status": "fail" if rows else "ok",
        },
    )
    return rows


def run_param(cfg) -> list[dict]:
    f = _field(cfg)
    n = _single(cfg, "n", 3)
    d = cfg["d"] if cfg["d"] is not None else 1
    count = _random_count(cfg, default=50)
    if count is None:
        raise ConfigInvalid("param mode takes --instances random:COUNT")
    if not 0 <= d <= n:
        raise ConfigInvalid("need 0 <= d <= n")
    rng = SplitMix64(cfg["seed"])
    jobs = []
    for _ in range(count):
        F = random_form_system(f, n, d, rng)
        for chis in _chars_for(cfg, f, n, rng):
            jobs.append((F, chis))

    def one(job):
        F, chis = job
        inst = F.to_dict()
        inst["chars"] = [c.e for c in chis]
        row = {"q": f.q, "n": n, "d": d, "instance": inst}
        try:
            res = param_sum(F, chis, cap=cfg["cap"])
        except AffsumsError as exc:
            row.update(status="fail", error=f"{type(exc).__name__}: {exc}")
            return row
        row.update(res.to_dict())
        row.update(abs_S=row["modulus"], classification="hypothesis" if res.hypothesis_ok else "no-hypothesis")
        problems = []
        if not res.matches_image:
            problems.append("parametrized sum differs from the image-subspace sum")
        if res.hypothesis_ok and not res.within_bound:
            problems.append(f"|S| = {row['modulus']} exceeds D_L q^(d/2) = {res.bound}")
        row["margin"] = res.bound - row["modulus"] if res.hypothesis_ok else None
        row["status"] = "fail" if problems else "ok"
        if problems:
            row["error"] = "; ".join(problems)
        return row

    with ThreadPoolExecutor(max_workers=cfg["threads"]) as pool:
        return list(pool.map(one, jobs))


# ---------------------------------------------------------------------------
# output


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def render(cfg, rows) -> str:
    for i, row in enumerate(rows):
        row.setdefault("index", i)
    if cfg["format"] == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            flat = dict(row)
            if isinstance(flat.get("weights"), dict):
                flat["weights"] = ";".join(f"{k}:{v}" for k, v in flat["weights"].items())
            w.writerow(flat)
        return buf.getvalue()
    failures = sum(1 for r in rows if r.get("status") == "fail")
    report = {
        "config": {k: cfg[k] for k in DEFAULTS if k not in ("out",)},
        "rows": rows,
        "summary": {"rows": len(rows), "failures": failures},
    }
    return json.dumps(report, sort_keys=True, indent=1, default=str) + "\n"


def write_repros(cfg, rows, stream=sys.stderr):
    fails = [r for r in rows if r.get("status") == "fail"]
    if not fails:
        return []
    paths = []
    if cfg["out"]:
        root = cfg["out"] + ".repro"
        os.makedirs(root, exist_ok=True)
        for r in fails:
            path = os.path.join(root, f"fail_{r['index']:05d}.json")
            with open(path, "w") as fh:
                json.dump(_repro(cfg["mode"], cfg, r.get("instance"), r.get("error")), fh, sort_keys=True, indent=1)
            paths.append(path)
    else:
        for r in fails:
            stream.write(json.dumps(_repro(cfg["mode"], cfg, r.get("instance"), r.get("error")), sort_keys=True) + "\n")
    return paths


RUNNERS = {
    "verify-classic": run_verify_classic,
    "lfunction": run_lfunction,
    "scan": run_scan,
    "census": run_census,
    "param": run_param,
}


def run(cfg: dict) -> int:
    rows = RUNNERS[cfg["mode"]](cfg)
    text = render(cfg, rows)
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    write_repros(cfg, rows)
    failures = sum(1 for r in rows if r.get("status") == "fail")
    log.info("%d rows, %d failures", len(rows), failures)
    return 1 if failures else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = resolve_config(args)
        return run(cfg)
    except ConfigInvalid as exc:
        print(f"affsums: config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
