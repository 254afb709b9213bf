"""Command-line interface.

Exit codes: 0 success / valid, 2 structured algorithmic failure or invalid
artifact, 1 misuse or bad input.  Every failure also prints a JSON
diagnostic (``schemas/diagnostic-v1.json``) on standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import generators, oracle, sweep
from .digraph import (Bipartition, Digraph, DigraphError, induced_min_out_degree, infer_parts,
                      is_k_partite_tournament, is_strongly_connected, is_tournament,
                      side_degrees)
from .edgelist import read_edge_list, write_edge_list
from .lll import admissible_max_indegree, check_weighted_lll, delta0_lll, moser_tardos_split
from .pairing import (DEFAULT_MAX_TRIALS, Pairing, SplitFailure, bad_vertices,
                      find_good_bisection)
from .peeling import (HypothesisWarning, SplitSpec, is_minimal_core, is_s_minimal,
                      lemma2_bound, max_minimal_vertices, peel_split, split_multipartite,
                      strong_split)
from .probability import (BadThreshold, BoundNotValid, PairProfile, Partner, chernoff_cap,
                          delta0_theorem1, i0_dyadic, prob_bad, prob_too_few, prob_too_many,
                          profile_of)

RESULT_SCHEMA = "digsplit/result-v1"
DIAG_SCHEMA = "digsplit/diagnostic-v1"
SCHEMA_DIR = Path(__file__).parent / "schemas"

log = logging.getLogger("digsplit")


class UsageError(Exception):
    pass


class Invalid(Exception):
    """Structured failure: exit code 2."""

    def __init__(self, message, details=None, kind="failed"):
        super().__init__(message)
        self.details = details or {}
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def _dump(doc) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True)


def _emit(text: str, out: str | None):
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _diag(kind: str, message: str, code: int, details=None):
    doc = {"schema": DIAG_SCHEMA, "error": kind, "message": message, "exit_code": code}
    if details:
        doc["details"] = details
    sys.stderr.write(_dump(doc) + "\n")


def _read_graph(path: str | None) -> Digraph:
    if path is None:
        raise UsageError("--in is required")
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return read_edge_list(text)


def _threshold(args) -> BadThreshold:
    if args.eps is not None and getattr(args, "k", None) is not None:
        raise UsageError("give --eps or --k, not both")
    if args.eps is not None:
        return BadThreshold.relative(args.eps)
    if getattr(args, "k", None) is not None:
        return BadThreshold.absolute(args.k)
    raise UsageError("a threshold is required (--eps or --k)")


def _parse_eps(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _result_doc(method, seed, params, part: Bipartition, stats, verified):
    return {
        "schema": RESULT_SCHEMA, "method": method, "seed": seed, "params": params,
        "A": sorted(part.A), "B": sorted(part.B), "stats": stats, "verified": verified,
    }


# -- subcommands -------------------------------------------------------------

def cmd_generate(args):
    fam = args.family
    if fam in ("tournament", "rotational", "minout") and args.n is None:
        raise UsageError(f"--n is required for family {fam}")
    if fam == "kpartite" and not args.parts:
        raise UsageError("--parts is required for family kpartite")
    if fam == "minout" and args.d is None:
        raise UsageError("--d is required for family minout")
    parts = [int(x) for x in args.parts.split(",")] if args.parts else None
    D = generators.make_family(fam, n=args.n, seed=args.seed, parts=parts, d=args.d)
    _emit(write_edge_list(D), args.out)
    return 0


def _check_eps_split(D, part, spec):
    return not bad_vertices(D, part, spec) and part.is_bisection


def cmd_split(args):
    D = _read_graph(args.input)
    method = args.method
    if method in ("pairing", "lll"):
        spec = _threshold(args)
        params = {"n": D.n, **spec.describe()}
        if method == "pairing":
            params["max_trials"] = args.max_trials
            res = find_good_bisection(D, spec, max_trials=args.max_trials, seed=args.seed,
                                      jobs=args.jobs)
        else:
            if spec.epsilon is None:
                raise UsageError("--method lll needs --eps")
            params["max_resamples"] = args.max_resamples
            res = moser_tardos_split(D, spec.epsilon, seed=args.seed,
                                     max_resamples=args.max_resamples)
            if not args.trace and not isinstance(res, SplitFailure):
                res.stats.pop("trace", None)
        if isinstance(res, SplitFailure):
            raise Invalid(res.reason, {"method": method, "seed": res.seed, **res.stats},
                          kind="split_failed")
        stats = {"trials_used": res.trials_used, **res.stats}
        verified = _check_eps_split(D, res.bipartition, spec)
        doc = _result_doc(method, res.seed, params, res.bipartition, stats, verified)
    else:
        if args.eps is not None:
            if args.s is not None or args.t is not None:
                raise UsageError("give --eps or --s/--t, not both")
            if not is_tournament(D):
                raise UsageError("--method peel --eps needs a tournament")
            spec = BadThreshold.relative(args.eps)
            base = find_good_bisection(D, spec, max_trials=args.max_trials, seed=args.seed,
                                       jobs=args.jobs)
            if isinstance(base, SplitFailure):
                raise Invalid(base.reason, {"method": method, "seed": base.seed, **base.stats},
                              kind="split_failed")
            res = strong_split(D, base.bipartition, spec.epsilon)
            params = {"n": D.n, **spec.describe(), "max_trials": args.max_trials}
            stats = {"core_size": res.core_size, "trials_used": base.trials_used, **res.stats}
            verified = _check_strong(D, res.bipartition, spec)
            doc = _result_doc(method, base.seed, params, res.bipartition, stats, verified)
        else:
            if args.s is None or args.t is None:
                raise UsageError("--method peel needs --s and --t (or --eps)")
            spec = SplitSpec(args.s, args.t)
            multi = D.parts is not None or infer_parts(D) is not None
            if multi and is_k_partite_tournament(D, len(D.parts or infer_parts(D))):
                with warnings.catch_warnings(record=True) as caught:
                    warnings.simplefilter("always", HypothesisWarning)
                    res = split_multipartite(D, spec, strict=args.strict)
                for w in caught:
                    log.warning("%s", w.message)
            else:
                res = peel_split(D, spec.s, spec.t)
            if isinstance(res, SplitFailure):
                raise Invalid(res.reason, res.stats, kind="split_failed")
            params = {"n": D.n, "s": spec.s, "t": spec.t}
            A, B = res.bipartition.A, res.bipartition.B
            verified = (induced_min_out_degree(D, A) >= spec.s
                        and induced_min_out_degree(D, B) >= spec.t)
            stats = {"hypothesis_met": res.hypothesis_met, **res.stats}
            doc = _result_doc(method, None, params, res.bipartition, stats, verified)
    _emit(_dump(doc) + "\n", args.out)
    return 0 if doc["verified"] else 2


def _check_strong(D, part: Bipartition, spec: BadThreshold) -> bool:
    th = spec.thresholds(D.out_degrees)
    into_a, into_b = side_degrees(D, part)
    side = part.side_array(D.n)
    own = np.where(side == 0, into_a, into_b)
    strong = not part.A or is_strongly_connected(D.induced_subdigraph(part.A))
    return bool((own >= th).all() and strong)


def _load_profile(text: str) -> tuple[int, int, Partner]:
    try:
        a, b, rel = text.split(",")
        return int(a), int(b), Partner(rel.strip())
    except ValueError:
        raise UsageError(f"--profile expects a,b,rel with rel in plus|minus|singleton; "
                         f"got {text!r}") from None


def cmd_prob(args):
    if args.profile:
        a, b, rel = _load_profile(args.profile)
        prof = PairProfile(a, b, rel, 2 * a + b)
    else:
        if args.vertex is None or args.pairing is None:
            raise UsageError("give --profile, or --vertex with --pairing and --in")
        D = _read_graph(args.input)
        pairing = Pairing.from_json(json.loads(Path(args.pairing).read_text()))
        pairing.check(D.n)
        prof = profile_of(D, args.vertex, pairing)
    if (args.eps is None) == (args.t is None):
        raise UsageError("give exactly one of --eps or --t")
    t = args.t if args.t is not None else BadThreshold.relative(args.eps).threshold(prof.dplus)
    few, many = prob_too_few(prof, t), prob_too_many(prof, t)
    doc = {
        "profile": {"a": prof.a, "b": prof.b, "partner": prof.partner.value, "dplus": prof.dplus},
        "t": t,
        "prob_too_few": few, "prob_too_many": many, "prob_bad": prob_bad(prof, t),
        "prob_too_few_float": float(few), "prob_too_many_float": float(many),
    }
    if args.eps is not None:
        try:
            doc["chernoff_cap"] = chernoff_cap(prof.dplus, args.eps)
        except BoundNotValid as exc:
            doc["chernoff_cap"] = None
            doc["chernoff_cap_invalid"] = str(exc)
    _emit(_dump(doc) + "\n", None)
    return 0


def cmd_verify(args):
    D = _read_graph(args.input)
    checks: dict = {}
    doc = json.loads(Path(args.split).read_text()) if args.split else {}
    params = doc.get("params", {})
    eps = args.eps if args.eps is not None else (
        Fraction(params["epsilon"]) if "epsilon" in params else None)
    if args.lll:
        if eps is None:
            raise UsageError("--lll needs --eps")
        rep = check_weighted_lll(D, eps)
        checks["lll"] = rep.to_json()
        checks["lll_passes"] = rep.passes
    if args.split:
        part = Bipartition.for_digraph(D, doc["A"], doc["B"])
        method = doc.get("method")
        s = args.s if args.s is not None else params.get("s")
        t = args.t if args.t is not None else params.get("t")
        k = params.get("k")
        if eps is not None or k is not None:
            spec = BadThreshold.relative(eps) if eps is not None else BadThreshold.absolute(k)
            if method == "peel":
                checks["own_side_thresholds_and_strong"] = _check_strong(D, part, spec)
            else:
                bad = bad_vertices(D, part, spec)
                checks["is_bisection"] = part.is_bisection
                checks["no_bad_vertices"] = not bad
                if bad:
                    checks["first_bad_vertex"] = {"vertex": bad[0].vertex, "x": bad[0].x,
                                                  "t": bad[0].t}
            theta = spec.thresholds(D.out_degrees)
        elif s is not None and t is not None:
            da, db = induced_min_out_degree(D, part.A), induced_min_out_degree(D, part.B)
            checks["min_out_degree_A"] = da is not None and da >= s
            checks["min_out_degree_B"] = db is not None and db >= t
            theta = s
        else:
            raise UsageError("cannot tell which guarantee to verify: give --eps or --s/--t")
        if args.minimal:
            checks["A_is_minimal_core"] = is_minimal_core(D, part.A, theta)
    elif args.minimal:
        if args.s is None:
            raise UsageError("--minimal without --split needs --s")
        checks["is_s_minimal"] = is_s_minimal(D, args.s)
    if not checks:
        raise UsageError("nothing to verify: give --split, --lll or --minimal")
    valid = all(v for v in checks.values() if isinstance(v, bool))
    _emit(_dump({"valid": valid, "checks": checks}) + "\n", None)
    return 0 if valid else 2


def cmd_bound(args):
    if args.delta0 is not None:
        val, detail = delta0_theorem1(args.delta0), {"i0": i0_dyadic(args.delta0)}
    elif args.lemma2 is not None:
        s, k = args.lemma2
        val = lemma2_bound(s, k)
        detail = {"max_vertices": max_minimal_vertices(s, k), "strict": k > 2}
    elif args.max_indegree is not None:
        eps, delta = args.max_indegree
        val, detail = admissible_max_indegree(eps, int(delta)), {}
    elif args.delta0_lll is not None:
        val, detail = delta0_lll(args.delta0_lll), {}
    else:
        raise UsageError("choose one of --delta0, --lemma2, --max-indegree, --delta0-lll")
    if args.json:
        _emit(_dump({"value": val, **detail}) + "\n", None)
    else:
        if isinstance(val, float):
            text = repr(val)
        else:
            text = str(val)
        _emit(text + "\n", None)
    return 0


def _split_list(text, conv):
    return [conv(x) for x in text.split(",") if x.strip()]


def cmd_sweep(args):
    eps = _split_list(args.eps, str.strip)
    for e in eps:
        _parse_eps(e)
    ns = _split_list(args.n, int)
    if args.kind == "expected-bad":
        rows = sweep.sweep_expected_bad(args.family, eps, ns, args.trials, args.seed,
                                        jobs=args.jobs, d=args.d)
    else:
        if len(eps) != 1:
            raise UsageError("--kind threshold takes a single --eps")
        rows = sweep.sweep_success_threshold(args.family, eps[0], ns, args.trials, args.seed,
                                             jobs=args.jobs, d=args.d)
        log.info("empirical frontier (99%% success): %s", sweep.empirical_frontier(rows))
    _emit(sweep.write_csv(rows), args.out)
    return 0


def cmd_oracle(args):
    if args.exists_split:
        if args.s is None or args.t is None:
            raise UsageError("--exists-split needs --s and --t")
        D = _read_graph(args.input)
        part = oracle.exists_split(D, args.s, args.t, bisection_only=args.bisection)
        doc = {"exists": part is not None}
        if part is not None:
            doc.update({"A": sorted(part.A), "B": sorted(part.B)})
        _emit(_dump(doc) + "\n", None)
        return 0 if part is not None else 2
    if args.xv_dist:
        if args.vertex is None or args.pairing is None:
            raise UsageError("--xv-dist needs --vertex and --pairing")
        D = _read_graph(args.input)
        pairing = Pairing.from_json(json.loads(Path(args.pairing).read_text()))
        dist = oracle.exact_Xv_distribution(D, args.vertex, pairing)
        _emit(_dump({"vertex": args.vertex, "distribution": dist}) + "\n", None)
        return 0
    if args.scan_minimal:
        if args.s is None or args.max_part is None:
            raise UsageError("--scan-minimal needs --max-part and --s")
        found = oracle.exhaustive_bipartite_minimal_scan(args.max_part, args.s)
        doc = {"count": len(found), "max_vertices": max((g.n for g in found), default=0),
               "found": [{"n": g.n, "parts": [list(p) for p in g.parts],
                          "arcs": g.arc_array.tolist()} for g in found]}
        _emit(_dump(doc) + "\n", None)
        return 0
    raise UsageError("choose one of --exists-split, --xv-dist, --scan-minimal")


# -- parser ------------------------------------------------------------------

def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("DIGSPLIT_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="digsplit", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a seeded instance as an edge list")
    g.add_argument("--family", required=True, choices=sorted(generators.FAMILIES))
    g.add_argument("--n", type=int)
    g.add_argument("--parts", help="comma-separated part sizes (kpartite)")
    g.add_argument("--d", type=int, help="out-degree (minout)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("split", help="compute a split and emit result JSON")
    s.add_argument("--method", required=True, choices=["pairing", "lll", "peel"])
    s.add_argument("--eps", type=_parse_eps)
    s.add_argument("--k", type=int, help="absolute threshold (pairing)")
    s.add_argument("--s", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-trials", type=int, default=DEFAULT_MAX_TRIALS)
    s.add_argument("--max-resamples", type=int, default=10 ** 6)
    s.add_argument("--strict", action="store_true",
                   help="peel: fail when the degree hypothesis does not hold")
    s.add_argument("--trace", action="store_true", help="lll: keep the resample trace")
    s.add_argument("--in", dest="input")
    s.add_argument("--out")
    s.add_argument("--jobs", type=int, default=_default_jobs())
    s.set_defaults(func=cmd_split)

    pr = sub.add_parser("prob", help="exact bad-event probabilities")
    pr.add_argument("--profile", help="a,b,rel with rel in plus|minus|singleton")
    pr.add_argument("--vertex", type=int)
    pr.add_argument("--pairing", help="pairing JSON file")
    pr.add_argument("--in", dest="input")
    pr.add_argument("--eps", type=_parse_eps)
    pr.add_argument("--t", type=int)
    pr.set_defaults(func=cmd_prob)

    v = sub.add_parser("verify", help="re-check a split or a digraph")
    v.add_argument("--split", help="result JSON file")
    v.add_argument("--in", dest="input")
    v.add_argument("--eps", type=_parse_eps)
    v.add_argument("--s", type=int)
    v.add_argument("--t", type=int)
    v.add_argument("--lll", action="store_true")
    v.add_argument("--minimal", action="store_true")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bound", help="print analytic quantities")
    grp = b.add_mutually_exclusive_group(required=True)
    grp.add_argument("--delta0", type=_parse_eps, metavar="EPS")
    grp.add_argument("--lemma2", type=int, nargs=2, metavar=("S", "K"))
    grp.add_argument("--max-indegree", nargs=2, type=_parse_eps, metavar=("EPS", "DELTA"))
    grp.add_argument("--delta0-lll", type=_parse_eps, metavar="EPS")
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bound)

    w = sub.add_parser("sweep", help="bound vs Monte Carlo grid, CSV output")
    w.add_argument("--kind", choices=["expected-bad", "threshold"], default="expected-bad")
    w.add_argument("--family", required=True, choices=sorted(generators.FAMILIES))
    w.add_argument("--eps", required=True, help="comma-separated")
    w.add_argument("--n", required=True, help="comma-separated")
    w.add_argument("--d", type=int)
    w.add_argument("--trials", type=int, default=200)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--out")
    w.add_argument("--jobs", type=int, default=_default_jobs())
    w.set_defaults(func=cmd_sweep)

    o = sub.add_parser("oracle", help="exhaustive ground truth on small instances")
    og = o.add_mutually_exclusive_group(required=True)
    og.add_argument("--exists-split", action="store_true")
    og.add_argument("--xv-dist", action="store_true")
    og.add_argument("--scan-minimal", action="store_true")
    o.add_argument("--in", dest="input")
    o.add_argument("--s", type=int)
    o.add_argument("--t", type=int)
    o.add_argument("--bisection", action="store_true")
    o.add_argument("--vertex", type=int)
    o.add_argument("--pairing")
    o.add_argument("--max-part", type=int)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        return args.func(args)
    except UsageError as exc:
        _diag("usage", str(exc), 1)
        return 1
    except Invalid as exc:
        _diag(exc.kind, str(exc), 2, exc.details)
        return 2
    except (DigraphError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        _diag(type(exc).__name__, str(exc), 1)
        return 1


if __name__ == "__main__":
    sys.exit(main())
