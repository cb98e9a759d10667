"""Batch front door: load groups, run constructions and verifications, emit reports.

Run as ``python -m wbarlab.workbench <command> ...``.  Exit codes: 0 all
checks pass, 1 a verification failed, 2 bad input, 3 a size budget or cap
was exceeded.  Reports are deterministic: identical job specifications
(including the seed) produce byte-identical output.  The environment
variable ``WORKBENCH_THREADS`` caps the verification worker pool.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .bisimplicial import (
    Diagonal,
    NerveBisimplicial,
    TauNerveBisimplicial,
    TotalComplex,
    comparison_maps,
    verify_category_nerve_iso,
)
from .bundles import (
    bundle_from_classifying_map,
    canonical_pseudo_section,
    classifying_map_r_hat,
    random_classifying_map,
    random_complex,
    transition_functor_check,
    TransitionAssignment,
)
from .errors import (
    BudgetExceeded,
    CapExceeded,
    InsufficientTruncation,
    NotSimplicial,
    VerificationFailure,
)
from .groups import TauDescriptor, builtin_group, group_from_json
from .homology import homology_report
from .simplicial import check_simplicial_map, truncate
from .simplicial_groups import DiscreteSimplicialGroup, LoopVsPi1Dec
from .wbar import BarConstruction, TauBarConstruction, TotalBarConstruction


@dataclass
class JobSpec:
    command: str
    group: str = ""
    tau: str = "free"
    trunc: int = 3
    chain_cap: int = 2
    ordinal_cap: int = 2
    seed: int = 0
    out: str = ""
    fmt: str = "json"
    target: str = ""
    k: int = 3
    i_max: int = 1
    construction: str = "wbar"
    seeds: int = 20

    def __post_init__(self):
        if self.chain_cap <= 0 or self.ordinal_cap <= 0:
            raise ValueError("caps must be positive")


def _load_group(spec: str):
    if spec.startswith("builtin:"):
        return builtin_group(spec.removeprefix("builtin:"))
    with open(spec, "r", encoding="utf-8") as fh:
        return group_from_json(fh.read())


def _worker_count():
    env = os.environ.get("WORKBENCH_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def _run_jobs(jobs):
    """Run callables on the pool; results keep submission order."""
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        futures = [pool.submit(job) for job in jobs]
        return [f.result() for f in futures]


# -- commands ---------------------------------------------------------------------


def cmd_counts(spec: JobSpec):
    g = _load_group(spec.group)
    tau = TauDescriptor.parse(spec.tau)
    k = DiscreteSimplicialGroup(g)
    w = (
        BarConstruction(k)
        if tau.variant == "free"
        else TauBarConstruction(tau, k)
    )
    rows = [
        {"degree": d, "count": w.level_count(d)} for d in range(spec.trunc + 1)
    ]
    return {
        "command": "counts",
        "group": g.name,
        "tau": tau.label(),
        "rows": rows,
    }


def _verify_epsilon(spec: JobSpec):
    iso = LoopVsPi1Dec(spec.k)
    iso.verify(spec.trunc)
    return {"target": "epsilon", "k": spec.k, "degrees": spec.trunc, "status": "pass"}


def _comparison_verdicts(spec: JobSpec, tau, k):
    cr_res, bk, cr_bar = comparison_maps(
        None if tau.variant == "free" else tau, k, spec.ordinal_cap
    )
    jobs = [
        lambda m=m: check_simplicial_map(m, spec.trunc)
        for m in (cr_res, bk, cr_bar)
    ]
    return _run_jobs(jobs)


def _verify_cr(spec: JobSpec):
    g = _load_group(spec.group)
    tau = TauDescriptor.parse(spec.tau)
    k = DiscreteSimplicialGroup(g)
    nerve = (
        NerveBisimplicial(k)
        if tau.variant == "free"
        else TauNerveBisimplicial(tau, k)
    )
    _, _, cr_bar = comparison_maps(
        None if tau.variant == "free" else tau, k, spec.ordinal_cap
    )
    verdict = check_simplicial_map(cr_bar, spec.trunc)
    table = []
    if verdict["status"] == "pass":
        d_side = truncate(Diagonal(nerve), spec.trunc)
        w_side = truncate(cr_bar.codomain, spec.trunc)
        i_top = max(0, spec.trunc - 1)
        left = homology_report(d_side, i_top)
        right = homology_report(w_side, i_top)
        table = [
            {
                "degree": i,
                "diagonal": left[i],
                "bar": right[i],
                "agree": left[i]["betti"] == right[i]["betti"]
                and left[i]["torsion"] == right[i]["torsion"],
            }
            for i in range(i_top + 1)
        ]
    out = {"target": "cr", "verdict": verdict, "homology": table}
    out["status"] = (
        "pass"
        if verdict["status"] == "pass" and all(row["agree"] for row in table)
        else "fail"
    )
    return out


def _verify_bk(spec: JobSpec):
    g = _load_group(spec.group)
    tau = TauDescriptor.parse(spec.tau)
    k = DiscreteSimplicialGroup(g)
    _, bk, _ = comparison_maps(
        None if tau.variant == "free" else tau, k, spec.ordinal_cap
    )
    verdict = check_simplicial_map(bk, spec.trunc)
    return {"target": "bk", "verdict": verdict, "status": verdict["status"]}


def _verify_tonks(spec: JobSpec):
    g = _load_group(spec.group)
    tau = TauDescriptor.parse(spec.tau)
    k = DiscreteSimplicialGroup(g)
    verify_category_nerve_iso(
        k,
        spec.ordinal_cap,
        spec.trunc,
        tau=None if tau.variant == "free" else tau,
    )
    return {
        "target": "tonks",
        "degrees": spec.trunc,
        "ordinal_cap": spec.ordinal_cap,
        "status": "pass",
    }


def _verify_zigzag(spec: JobSpec):
    g = _load_group(spec.group)
    tau = TauDescriptor.parse(spec.tau)
    k = DiscreteSimplicialGroup(g)
    verdicts = _comparison_verdicts(spec, tau, k)
    verify_category_nerve_iso(
        k,
        spec.ordinal_cap,
        min(spec.trunc, 2),
        tau=None if tau.variant == "free" else tau,
    )
    status = "pass" if all(v["status"] == "pass" for v in verdicts) else "fail"
    return {"target": "zigzag", "legs": verdicts, "status": status}


def _bundle_fleet(spec: JobSpec):
    g = _load_group(spec.group)
    k = DiscreteSimplicialGroup(g)
    rng = random.Random(spec.seed)
    for index in range(spec.seeds):
        base = random_complex(rng, complex_id=f"B{index}", max_dim=3)
        pruned, r = random_classifying_map(rng, base, k)
        yield bundle_from_classifying_map(pruned, k, r)


def _verify_bundle_roundtrip(spec: JobSpec):
    count = 0
    for bundle in _bundle_fleet(spec):
        sigma = canonical_pseudo_section(bundle)
        assignment = TransitionAssignment(bundle, sigma)
        rhat = classifying_map_r_hat(bundle, assignment)
        for n in range(bundle.truncation + 1):
            for b in bundle.base.level(n):
                if rhat(n, b) != bundle.r(n, b):
                    return {
                        "target": "bundle-roundtrip",
                        "status": "fail",
                        "counterexample": {"bundle": count, "simplex": repr(b)},
                    }
        count += 1
    return {"target": "bundle-roundtrip", "bundles": count, "status": "pass"}


def _verify_cocycle(spec: JobSpec):
    count = 0
    for bundle in _bundle_fleet(spec):
        sigma = canonical_pseudo_section(bundle)
        assignment = TransitionAssignment(bundle, sigma)
        verdict = transition_functor_check(assignment, max_degree=2)
        if verdict["status"] != "pass":
            return {
                "target": "cocycle",
                "status": "fail",
                "bundle": count,
                "counterexample": verdict["counterexample"],
            }
        count += 1
    return {"target": "cocycle", "bundles": count, "status": "pass"}


VERIFY_TARGETS = {
    "epsilon": _verify_epsilon,
    "cr": _verify_cr,
    "bk": _verify_bk,
    "tonks": _verify_tonks,
    "zigzag": _verify_zigzag,
    "bundle-roundtrip": _verify_bundle_roundtrip,
    "cocycle": _verify_cocycle,
}


def cmd_verify(spec: JobSpec):
    if spec.target not in VERIFY_TARGETS:
        raise ValueError(f"unknown verify target {spec.target!r}")
    report = VERIFY_TARGETS[spec.target](spec)
    report["command"] = "verify"
    return report


def cmd_homology(spec: JobSpec):
    g = _load_group(spec.group)
    tau = TauDescriptor.parse(spec.tau)
    k = DiscreteSimplicialGroup(g)
    if spec.i_max > spec.trunc - 1:
        raise InsufficientTruncation(
            f"homology up to degree {spec.i_max} needs truncation {spec.i_max + 1}"
        )
    if spec.construction == "wbar":
        oracle = BarConstruction(k)
    elif spec.construction == "wbar_tau":
        oracle = TauBarConstruction(tau, k)
    elif spec.construction == "diagonal":
        nerve = (
            NerveBisimplicial(k)
            if tau.variant == "free"
            else TauNerveBisimplicial(tau, k)
        )
        oracle = Diagonal(nerve)
    elif spec.construction == "total":
        nerve = (
            NerveBisimplicial(k)
            if tau.variant == "free"
            else TauNerveBisimplicial(tau, k)
        )
        oracle = TotalComplex(nerve)
    elif spec.construction == "w_total":
        oracle = TotalBarConstruction(k)
    else:
        raise ValueError(f"unknown construction {spec.construction!r}")
    tc = truncate(oracle, spec.trunc)
    return {
        "command": "homology",
        "construction": spec.construction,
        "group": g.name,
        "tau": tau.label(),
        "report": homology_report(tc, spec.i_max),
    }


# -- rendering and entry point ------------------------------------------------------


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        rows = report.get("rows") or report.get("report") or [report]
        writer = csv.DictWriter(buf, fieldnames=sorted({k for r in rows for k in r}))
        writer.writeheader()
        for r in rows:
            writer.writerow({k: json.dumps(v, sort_keys=True) for k, v in r.items()})
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def build_parser():
    parser = argparse.ArgumentParser(prog="wbarlab.workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--group", default="builtin:z2")
        p.add_argument("--tau", default="free")
        p.add_argument("--trunc", type=int, default=3)
        p.add_argument("--chain-cap", type=int, default=2, dest="chain_cap")
        p.add_argument("--ordinal-cap", type=int, default=2, dest="ordinal_cap")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="")
        p.add_argument("--format", default="json", dest="fmt", choices=["json", "csv"])

    p_counts = sub.add_parser("counts")
    common(p_counts)

    p_verify = sub.add_parser("verify")
    common(p_verify)
    p_verify.add_argument("target", choices=sorted(VERIFY_TARGETS))
    p_verify.add_argument("--k", type=int, default=3)
    p_verify.add_argument("--seeds", type=int, default=20)

    p_hom = sub.add_parser("homology")
    common(p_hom)
    p_hom.add_argument(
        "construction",
        choices=["wbar", "wbar_tau", "diagonal", "total", "w_total"],
    )
    p_hom.add_argument("--i-max", type=int, default=1, dest="i_max")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit:
        return 2
    try:
        spec = JobSpec(
            command=ns.command,
            group=getattr(ns, "group", ""),
            tau=getattr(ns, "tau", "free"),
            trunc=getattr(ns, "trunc", 3),
            chain_cap=getattr(ns, "chain_cap", 2),
            ordinal_cap=getattr(ns, "ordinal_cap", 2),
            seed=getattr(ns, "seed", 0),
            out=getattr(ns, "out", ""),
            fmt=getattr(ns, "fmt", "json"),
            target=getattr(ns, "target", ""),
            k=getattr(ns, "k", 3),
            i_max=getattr(ns, "i_max", 1),
            construction=getattr(ns, "construction", "wbar"),
            seeds=getattr(ns, "seeds", 20),
        )
        if spec.command == "counts":
            report = cmd_counts(spec)
        elif spec.command == "verify":
            report = cmd_verify(spec)
        else:
            report = cmd_homology(spec)
    except (BudgetExceeded, CapExceeded) as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return 3
    except (VerificationFailure, NotSimplicial) as exc:
        payload = {"status": "fail", "error": str(exc), "witness": repr(getattr(exc, "witness", None))}
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return 1
    except (ValueError, KeyError, OSError, InsufficientTruncation) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    text = render(report, spec.fmt)
    if spec.out:
        with open(spec.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.get("status", "pass") == "pass" else 1


if __name__ == "__main__":
    raise SystemExit(main())
