"""Command-line interface.

    drgkit certify   --family petersen
    drgkit spectral  --input g.g6 --dense-limit 1024
    drgkit classical --family hermitian:3,2
    drgkit bounded   --family hermitian:3,2 --max-distance 3
    drgkit delta     --family hermitian:3,2 --sample 5 --seed 7
    drgkit gen       --family hermitian:3,2 --out her32.g6

Exit status: 0 when every requested certification passed, 1 for a certified
negative (the JSON then carries a ``"witness"``), 2 for usage or I/O errors.
The JSON certificate goes to ``--out`` (written atomically) or to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import certificate as certmod
from .classical import (
    classical_equivalence_crosscheck,
    fit_classical_parameters,
    verify_dual_relation,
)
from .closure import check_i_bounded, construct_delta, parallelogram_free_evidence
from .drg import COUNT_LIMIT, NonDRGWitness, certify_distance_regular, hypothesis_gate
from .errors import (
    CertificationFailed,
    DegenerateDual,
    DRGKitError,
    Disconnected,
    EdgeListError,
    EigenFailure,
    Graph6Error,
    HypothesisViolated,
    NonIntegerMultiplicity,
    OracleMismatch,
    UnsupportedParameters,
)
from .families import gen_family
from .graph import DistanceOracle, parse_edge_list, parse_graph6, write_graph6
from .spectral import (
    DENSE_LIMIT,
    Tolerances,
    adjacency_dense,
    eigen_from_array,
    find_qpoly_orderings,
    gram_residual,
    idempotent_identities,
    krein_dense,
    krein_fast,
    krein_parameters,
    primitive_idempotents_dense,
    sample_representation_residuals,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
COMMANDS = ("certify", "spectral", "classical", "bounded", "delta", "gen")


class Negative(Exception):
    """A certified negative result; ``witness`` goes into the JSON."""

    def __init__(self, witness: dict):
        super().__init__(witness.get("reason", "negative"))
        self.witness = witness


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="graph file ('-' for stdin)")
    src.add_argument("--family", metavar="SPEC", help="generated family, e.g. hermitian:3,2")
    common.add_argument("--format", choices=("graph6", "edges"),
                        help="input format (default: from the suffix, else graph6)")
    common.add_argument("--out", metavar="PATH", help="write the JSON certificate here")
    common.add_argument("--tol", type=float, default=1e-8,
                        help="residual tolerance for floating-point checks (default 1e-8)")
    common.add_argument("--sample", type=int, metavar="N",
                        help="number of random samples drawn by the command")
    common.add_argument("--seed", type=int, default=0, metavar="S")
    common.add_argument("--max-distance", type=int, metavar="I",
                        help="largest pair distance checked by 'bounded' (default min(3, D))")
    common.add_argument("--dense-limit", type=int, default=DENSE_LIMIT, metavar="N",
                        help=f"largest n for dense idempotents (default {DENSE_LIMIT})")
    common.add_argument("--sources", type=int, default=50, metavar="N",
                        help=f"base vertices for spot certification when n > {COUNT_LIMIT}")
    common.add_argument("--quiet", action="store_true", help="no summary on stderr")

    parser = argparse.ArgumentParser(prog="drgkit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "certify": "decide distance-regularity and report the intersection array",
        "spectral": "eigenvalues, idempotents, Krein parameters, Q-polynomial orderings",
        "classical": "fit classical parameters and check the dual-eigenvalue relation",
        "bounded": "certify closed subgraphs for all (or sampled) pairs up to a distance",
        "delta": "build and certify [x, C] for sampled distance-3 pairs",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    gen = sub.add_parser("gen", help="write a family graph as graph6 plus a .meta.json sidecar")
    gen.add_argument("--family", metavar="SPEC", required=True)
    gen.add_argument("--out", metavar="PATH", help="graph6 path (default stdout, no sidecar)")
    gen.add_argument("--quiet", action="store_true")
    return parser


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

class Run:
    """State shared by the stages of one invocation."""

    def __init__(self, args):
        self.args = args
        self.tol = Tolerances(abs_tol=args.tol)
        self.doc: dict = {}
        self.g = None
        self.cert = None
        self.spec = None
        self._oracle = None

    def timed(self, key: str, fn, *a, **kw):
        t0 = time.perf_counter()
        try:
            return fn(*a, **kw)
        finally:
            self.doc["timings"][key] = round(time.perf_counter() - t0, 6)

    @property
    def oracle(self) -> DistanceOracle:
        if self._oracle is None:
            self._oracle = DistanceOracle(self.g)
        return self._oracle

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.args.seed, salt])


def load_graph(args):
    if args.family:
        fam = gen_family(args.family)
        return fam.graph, {"family": args.family, "metadata": fam.metadata}
    fmt = args.format
    if fmt is None:
        fmt = "edges" if args.input.endswith((".edges", ".txt", ".el")) else "graph6"
    try:
        if args.input == "-":
            data = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="ascii") as fh:
                data = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    g = parse_graph6(data) if fmt == "graph6" else parse_edge_list(data)
    return g, {"path": args.input, "format": fmt}


def stage_certify(run: Run, sources: int | None = None):
    g = run.g
    if sources is None and g.n > COUNT_LIMIT:
        sources = run.args.sources
    picked = None
    if sources is not None:
        picked = np.sort(run.rng(1).choice(g.n, size=min(sources, g.n), replace=False)).tolist()
    try:
        res = run.timed("certify", certify_distance_regular, g, picked)
    except Disconnected as exc:
        w = {"distance_regular": False, "reason": "disconnected",
             "source": exc.source, "unreachable": exc.unreachable}
        run.doc["drg"] = dict(w, **certmod.EXACT)
        raise Negative(w) from None
    if isinstance(res, NonDRGWitness):
        run.doc["drg"] = dict(res.to_json(), **certmod.EXACT)
        run.doc["graph"] = certmod.graph_section(g, None, "not-certified")
        raise Negative(res.to_json())
    run.cert = res
    drg = res.to_json()
    drg["gate"] = hypothesis_gate(res).to_json()
    if picked is not None and len(picked) < g.n:
        drg["base_vertices"] = picked
    run.doc["drg"] = dict(drg, **certmod.EXACT)
    run.doc["graph"] = certmod.graph_section(g, res.D, f"drg-{res.mode}")
    return res


def require_gate(run: Run):
    gate = hypothesis_gate(run.cert)
    if not gate.admissible:
        raise Negative({"reason": "hypothesis-gate", **gate.to_json()})
    return gate


def stage_spectral(run: Run, dense: bool = True) -> dict:
    cert, g, tol = run.cert, run.g, run.tol
    try:
        spec = run.timed("spectral_fast", eigen_from_array, cert.array, g.n, tol)
    except (EigenFailure, NonIntegerMultiplicity) as exc:
        raise Negative({"reason": "spectral-inconsistent", "detail": str(exc)}) from None
    run.spec = spec
    kt = krein_parameters(spec)
    orders = find_qpoly_orderings(spec, kt, tol)
    sec = {
        "theta": spec.theta.tolist(),
        "mult": spec.mult.tolist(),
        "krein_min": float(kt.q.min()),
        "krein_zero_bitset": certmod.krein_bitset(kt.zero_pattern(tol)),
        "krein_index_order": "h,i,j row-major over 0..D, natural eigenvalue order; 1 = zero",
        "orderings": [o.to_json() for o in orders],
        "regime": tol.to_json(),
    }
    failures = []
    if kt.q.min() < -tol.abs_tol * max(1.0, np.abs(kt.q).max()):
        failures.append("negative Krein parameter")
    if dense and g.n <= run.args.dense_limit:
        run.timed("spectral_dense", _dense_checks, run, spec, orders, sec, failures)
    elif dense:
        sec["dense"] = {"skipped": f"n = {g.n} > dense limit {run.args.dense_limit}"}
    sec["failures"] = failures
    run.doc["spectral"] = sec
    if failures:
        raise Negative({"reason": "spectral-check-failed", "failures": failures})
    return sec


def _dense_checks(run: Run, spec, orders, sec: dict, failures: list) -> None:
    g, tol = run.g, run.tol
    E = primitive_idempotents_dense(g, spec, run.args.dense_limit)
    dmat = run.oracle.matrix()
    ids = idempotent_identities(E, spec.theta, adjacency_dense(g))
    gram = max(gram_residual(E[l], spec.Q[:, l], dmat) for l in range(spec.D + 1))
    kerr = float(np.abs(krein_fast(spec) - krein_dense(E, spec.mult)).max())
    dense = {"identities": ids, "gram_residual": gram, "krein_fast_vs_dense": kerr,
             "krein_agree_tol": 1e-7}
    for k, v in ids.items():
        if v > tol.abs_tol:
            failures.append(f"identity {k} residual {v:.3g}")
    if gram > tol.abs_tol:
        failures.append(f"Gram residual {gram:.3g}")
    if kerr > 1e-7:
        failures.append(f"Krein fast/dense disagreement {kerr:.3g}")
    count = run.args.sample if run.args.sample is not None else 100
    reps = []
    for idx, o in enumerate(orders):
        e1 = o.order[1]
        r = sample_representation_residuals(g, E[e1], o.dual.theta_star, count,
                                            run.rng(100 + idx), dmat, tol)
        reps.append({"order": list(o.order), "samples": r["samples"],
                     "max_residual": r["max_residual"]})
        if r["max_residual"] > tol.abs_tol:
            failures.append(f"representation identity residual {r['max_residual']:.3g}")
    dense["representation_identity"] = reps
    sec["dense"] = dense


def stage_classical(run: Run) -> dict:
    cert = run.cert
    try:
        fit = run.timed("classical_fit", fit_classical_parameters, cert.array)
    except HypothesisViolated as exc:
        raise Negative({"reason": "hypothesis", "detail": str(exc), "D": cert.D}) from None
    sec = fit.to_json()
    if run.spec is None:
        stage_spectral(run, dense=False)
    orders = find_qpoly_orderings(run.spec, None, run.tol)
    rel = []
    for cand in fit.candidates:
        for o in orders:
            try:
                dev = verify_dual_relation(o.dual, cand.params.b)
            except DegenerateDual as exc:
                dev = str(exc)
            rel.append({"b": cand.to_json()["b"], "order": list(o.order), "deviation": dev})
    sec["dual_relation"] = rel
    sec["dual_relation_regime"] = run.tol.to_json()
    gate = hypothesis_gate(cert)
    if gate.admissible and run.g.n <= run.args.dense_limit:
        rep = run.timed("classical_crosscheck", classical_equivalence_crosscheck,
                        run.g, cert, run.spec, run.oracle)
        sec["equivalence"] = rep.to_json()
    run.doc["classical"] = sec
    if not fit.matched:
        c = cert.array.c
        raise Negative({"reason": "no-classical-fit", "matched": False,
                        "c2": c[1], "c3": c[2], "b0": cert.array.b[0]})
    return sec


def stage_bounded(run: Run) -> dict:
    require_gate(run)
    a = run.args
    i = a.max_distance if a.max_distance is not None else min(3, run.cert.D)
    sampling = "exhaustive" if a.sample is None else ("random", a.sample, a.seed)
    try:
        rep = run.timed("bounded", check_i_bounded, run.g, run.cert, i, sampling, run.oracle)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except CertificationFailed as exc:
        raise Negative({"reason": "certification-failed", "detail": str(exc),
                        **exc.witness}) from None
    except HypothesisViolated as exc:
        raise Negative({"reason": "hypothesis", "detail": str(exc)}) from None
    sec = dict(rep.to_json(), regime="exact-integer")
    run.doc["boundedness"] = sec
    if not rep.passed:
        raise Negative({"reason": "bounded-check-failed", "per_distance": sec["per_distance"]})
    return sec


def stage_delta(run: Run) -> dict:
    require_gate(run)
    g, cert, oracle = run.g, run.cert, run.oracle
    count = run.args.sample if run.args.sample is not None else 3
    try:
        evidence = parallelogram_free_evidence(g, cert, oracle)
    except HypothesisViolated as exc:
        raise Negative({"reason": "hypothesis", "detail": str(exc)}) from None
    rng = run.rng(2)
    records, cache = [], {}
    t0 = time.perf_counter()
    for _ in range(count):
        x = int(rng.integers(g.n))
        ys = np.flatnonzero(oracle.row(x) == 3)
        y = int(rng.choice(ys))
        try:
            c = construct_delta(g, cert, x, y, oracle, evidence, cache=cache)
        except CertificationFailed as exc:
            run.doc["delta"] = {"records": records, "regime": "exact-integer"}
            raise Negative({"reason": "certification-failed", "detail": str(exc),
                            **exc.witness}) from None
        records.append(c.to_json())
    run.doc["timings"]["delta"] = round(time.perf_counter() - t0, 6)
    sec = {"samples": count, "seed": run.args.seed, "evidence": evidence,
           "expected_valency": cert.array.a[3] + cert.array.cs[3],
           "records": records, "regime": "exact-integer"}
    run.doc["delta"] = sec
    return sec


PIPELINES = {
    "certify": (),
    "spectral": (stage_spectral,),
    "classical": (stage_classical,),
    "bounded": (stage_bounded,),
    "delta": (stage_delta,),
}


def _summary(doc: dict) -> str:
    parts = [f"status={doc['status']}"]
    drg = doc.get("drg", {})
    if drg.get("distance_regular"):
        parts.append(f"array={drg['array_text']}")
    elif "reason" in drg:
        parts.append(f"drg={drg['reason']}")
    if "classical" in doc:
        parts.append(f"classical_matched={doc['classical']['matched']}")
    if "boundedness" in doc:
        parts.append(f"bounded_passed={doc['boundedness']['passed']}")
    if "delta" in doc:
        recs = doc["delta"]["records"]
        parts.append("delta=" + ",".join(f"{r['size']}/{r['valency']}" for r in recs))
    if "witness" in doc:
        parts.append(f"witness={doc['witness'].get('reason')}")
    return " ".join(parts)


def _emit(doc: dict, args) -> None:
    text = certmod.dumps(doc)
    if args.out:
        certmod.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    if not args.quiet:
        print(_summary(doc), file=sys.stderr)


def run_gen(args) -> int:
    fam = gen_family(args.family)
    g6 = write_graph6(fam.graph) + "\n"
    meta = dict(fam.metadata, format="graph6", digest=certmod.graph_digest(fam.graph))
    if args.out:
        certmod.write_atomic(args.out, g6)
        certmod.write_atomic(args.out + ".meta.json", json.dumps(meta, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(g6)
    if not args.quiet:
        print(f"generated {args.family}: n={fam.graph.n} edges={fam.graph.edge_count}",
              file=sys.stderr)
    return EXIT_OK


def run_command(args) -> int:
    run = Run(args)
    g, source = load_graph(args)
    run.g = g
    opts = {k: getattr(args, k) for k in ("tol", "sample", "seed", "max_distance", "dense_limit",
                                         "sources")}
    run.doc = certmod.new_certificate(g, source, args.command, opts)
    status = EXIT_OK
    try:
        stage_certify(run, args.sample if args.command == "certify" else None)
        for stage in PIPELINES[args.command]:
            stage(run)
    except Negative as neg:
        run.doc["witness"] = neg.witness
        status = EXIT_NEGATIVE
    except OracleMismatch as exc:
        run.doc["witness"] = {"reason": "oracle-mismatch", "detail": str(exc)}
        status = EXIT_NEGATIVE
    run.doc["status"] = "pass" if status == EXIT_OK else "negative"
    _emit(run.doc, args)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        if args.command == "gen":
            return run_gen(args)
        return run_command(args)
    except (UsageError, UnsupportedParameters, Graph6Error, EdgeListError, OSError) as exc:
        print(f"drgkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DRGKitError as exc:
        print(f"drgkit: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
