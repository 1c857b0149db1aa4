"""Command-line front end: ``supersle <subcommand> ...`` or ``python3 -m supersle``."""
from __future__ import annotations

import argparse
import csv
import json
import random
import shlex
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import catalog
from .grassmann import as_fraction, fraction_sqrt
from .itocalc import check_process, verify_solution
from .linkmaps import (WalkSpec, build_sde, expected_state, martingale_check, quotient_projection,
                       solve_locus, verify_link)
from .sim import Report, SimConfig, estimate_martingale, simulate_sle
from .superalg import NS, RAMOND, VIRASORO, find_singular, gram_matrix, jacobi_sweep
from .superspace import CONV, check_superconformal, gts_residuals
from . import linalg

SINGULAR_CASES = {
    # name: (sector, level, locus polynomial, rendering)
    "ns32": (NS, Fraction(3, 2), catalog.ns_level_three_halves, "(2*Delta+1)*c = 3*Delta*(3-2*Delta)"),
    "r1": (RAMOND, Fraction(1), catalog.ramond_level_one, "(16*Delta+3)*c = 8*Delta*(9-16*Delta)"),
    "vir2": (VIRASORO, Fraction(2), catalog.virasoro_level_two, "16*Delta^2 + 2*(c-5)*Delta + c = 0"),
}
MARTINGALE_WALKS = ("classical", "ns", "ramond")
DEFAULT_K = Fraction(2, 3)


def _k_from(args) -> Fraction:
    kappa = as_fraction(args.kappa) if args.kappa is not None else DEFAULT_K ** 2
    try:
        return fraction_sqrt(kappa)
    except ValueError:
        raise SystemExit(f"kappa = {kappa} has no rational square root; symbolic checks need exact sqrt(kappa)")


def _str_dict(d: dict) -> dict:
    return {k: str(v) for k, v in d.items()}


# ---------------------------------------------------------------- checks

def check_algebra(args) -> list[Report]:
    sectors = [args.sector] if args.sector else [NS, RAMOND]
    rng = random.Random(args.seed)
    cs = [as_fraction(args.c)] if args.c is not None else [
        Fraction(rng.randint(-40, 40), rng.randint(1, 12)) for _ in range(3)]
    out = []
    for sector in sectors:
        bad = jacobi_sweep(sector, cs, args.range)
        out.append(Report(f"check-algebra {sector}", "fail" if bad else "pass",
                          {"range": str(args.range), "c": [str(c) for c in cs],
                           "failures": [" ".join(map(str, t)) for t in bad[:20]]},
                          ("graded-jacobi",)))
    return out


def check_singular(args) -> list[Report]:
    sector, level, poly, text = SINGULAR_CASES[args.case]
    c = as_fraction(args.c)
    delta = as_fraction(args.delta)
    found = find_singular(level, sector, c, delta)
    on_locus = poly(c, delta) == 0
    gram, keys = gram_matrix(level, sector, c, delta)
    kernel = linalg.nullspace(gram, len(keys))
    vecs = [s.vector(keys) for s in found]
    gram_ok = linalg.rank(kernel + vecs) == len(kernel) if kernel else not vecs
    if gram_ok and kernel:
        gram_ok = linalg.rank(vecs) == len(kernel)
    # c on the locus for this Delta (the locus is linear in c for the two super cases)
    solved = None
    if sector != VIRASORO:
        p0, p1 = poly(0, delta), poly(1, delta)
        if p1 != p0:
            solved = str(-p0 / (p1 - p0))
    status = "pass" if (on_locus and found and gram_ok) else "fail"
    return [Report(f"singular {args.case}", status, {
        "sector": sector, "level": str(level), "c": str(c), "delta": str(delta),
        "locus": text, "locus_residual": str(poly(c, delta)), "c_on_locus": solved,
        "singular_vectors": [s.to_json(level) for s in found], "gram_kernel_agrees": gram_ok,
    }, ("singular-vector",))]


def check_link(args) -> list[Report]:
    k = _k_from(args)
    cfg = catalog.CONFIGURATIONS[args.config]
    w = cfg.walk(k, structure=cfg.structure)
    built = build_sde(w)
    diff = [str(d) for d in built.difference(cfg.sde(k)) if d]
    link = verify_link(w, built)
    status = "pass" if not diff and not link else "fail"
    return [Report(f"link {args.config}", status, {
        "k": str(k), "structure": cfg.structure, "sde": built.to_json(),
        "transcription_mismatch": diff, "jet_residual": _str_dict(link),
    }, ("walk-to-sde", "primary-field-law"))]


def check_solution(args) -> list[Report]:
    k = _k_from(args)
    cfg = catalog.CONFIGURATIONS[args.config]
    sol = cfg.solution(k)
    sde = cfg.sde(k)
    res = verify_solution(sol, sde)
    sc = check_superconformal(sol, cfg.structure)
    details = {"k": str(k), "residual": res.to_json(), "superconformal_residual": str(sc),
               "half_integer_exponents": sde.has_half_integer_exponents()
               or sol.zmap.has_half_integer_exponents() or sol.thetamap.has_half_integer_exponents()}
    ok = res.is_zero() and sc.is_zero()
    if cfg.structure == CONV:
        gts = gts_residuals(sol)
        details["gts_residuals"] = [str(r) for r in gts]
        ok &= all(r.is_zero() for r in gts)
    if cfg.intermediates:
        inter = {}
        for it in cfg.intermediates(k):
            r = check_process(it.definition, sol, it.value, it.drift, (it.diffusion,))
            inter[it.name] = _str_dict(r)
            ok &= not r
        details["intermediates"] = inter
    return [Report(f"verify-solution {args.config}", "pass" if ok else "fail", details,
                   ("closed-form-solution",))]


def _walk_from(args) -> WalkSpec:
    if args.walk:
        with open(args.walk) as fh:
            return WalkSpec.from_json(json.load(fh))
    kind = args.which
    if kind == "classical":
        kappa = as_fraction(args.kappa) if args.kappa is not None else Fraction(8, 3)
        return catalog.walk_classical(kappa, args.c, args.delta)
    k = _k_from(args)
    maker = catalog.walk_ns if kind == "ns" else catalog.walk_ramond
    return maker(k, args.c, args.delta)


def check_martingale(args) -> list[Report]:
    w = _walk_from(args)
    rep = martingale_check(w)
    details = rep.to_json()
    locus = solve_locus(w)
    details["solved_locus"] = None if locus is None else {"c": str(locus[0]), "delta": str(locus[1])}
    level = as_fraction(args.level) if args.level is not None else (
        Fraction(4) if w.sector == VIRASORO else Fraction(2))
    e = expected_state(w, level)
    q = quotient_projection(e, level)
    hw = w.module().highest_weight(w.coeffs)
    details["quotient_is_highest_weight"] = q == hw
    details["quotient_projection"] = q.to_json(level)
    out = [Report(f"martingale {args.which}", "pass" if rep.passed and q == hw else "fail", details,
                  ("drift-state", "conservation-in-mean"))]
    if args.numeric:
        if w.sector != VIRASORO:
            raise SystemExit("--numeric needs scalar walk coefficients (classical walk only)")
        cfg = SimConfig(kappa=w.kappa, paths=args.paths, steps=args.steps, t_max=args.t_max, seed=args.seed)
        out.append(estimate_martingale(cfg, w, int(level)))
    return out


def run_simulation(args) -> list[Report]:
    cfg = SimConfig(kappa=as_fraction(args.kappa) if args.kappa is not None else Fraction(8, 3),
                    paths=args.paths, steps=args.steps, t_max=args.t_max, seed=args.seed,
                    checkpoints=args.checkpoints, out=args.out)
    tr = simulate_sle(cfg)
    rows = []
    n = tr.n_paths
    for ti, t in enumerate(tr.times):
        for gi, z in enumerate(cfg.grid):
            for name, arr in (("re_g", tr.g[ti, :, gi].real), ("im_g", tr.g[ti, :, gi].imag),
                              ("re_f", tr.f[ti, :, gi].real), ("im_f", tr.f[ti, :, gi].imag)):
                se = float(arr.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
                rows.append((float(t), f"{name}[{z}]", float(arr.mean()), se, n))
    # f + sqrt(kappa) B - g vanishes identically
    gap = float(np.max(np.abs(tr.f + tr.driver[:, :, None] - tr.g)))
    details = {"kappa": str(cfg.kappa), "paths": cfg.paths, "steps": cfg.steps, "t_max": cfg.t_max,
               "seed": cfg.seed, "swallowed_fraction": float(tr.swallowed.mean()),
               "rewrite_gap": gap, "all_swallowed": tr.all_swallowed()}
    if args.out:
        if args.format == "csv":
            with open(args.out, "w", newline="") as fh:
                wr = csv.writer(fh)
                wr.writerow(["t", "observable", "mean", "stderr", "n_paths"])
                wr.writerows(rows)
        else:
            with open(args.out, "w") as fh:
                json.dump([dict(zip(("t", "observable", "mean", "stderr", "n_paths"), r)) for r in rows], fh)
        details["output"] = args.out
    else:
        details["rows"] = len(rows)
    return [Report("simulate", "pass" if gap < 1e-9 else "fail", details, ("loewner",))]


DEFAULT_SUITE = (
    "check-algebra",
    "singular ns32 --c 7/5 --delta 1/3",
    "singular r1 --c 148/115 --delta 1/10",
    "singular vir2 --c 1 --delta 1/4",
    "link ns-conv", "link r-conv", "link r-alt", "link ns-alt",
    "verify-solution ns-conv", "verify-solution r-conv", "verify-solution r-alt", "verify-solution ns-alt",
    "martingale classical", "martingale ns", "martingale ramond",
)


def run_suite(names: Sequence[str] | None = None) -> list[Report]:
    """Run named checks (subcommand strings); unknown names raise ValueError."""
    parser = build_parser()
    out: list[Report] = []
    for name in names or DEFAULT_SUITE:
        argv = shlex.split(name)
        if not argv or argv[0] not in COMMANDS or argv[0] == "suite":
            raise ValueError(f"unknown check {name!r}")
        try:
            args = parser.parse_args(argv)
        except SystemExit:
            raise ValueError(f"cannot parse check {name!r}") from None
        out.extend(args.func(args))
    return out


def _suite(args) -> list[Report]:
    try:
        return run_suite(args.names or None)
    except ValueError as exc:
        raise SystemExit(str(exc))


COMMANDS = {
    "check-algebra": check_algebra, "singular": check_singular, "link": check_link,
    "verify-solution": check_solution, "martingale": check_martingale,
    "simulate": run_simulation, "suite": _suite,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="supersle", description="Exact super-SLE checks and Loewner Monte Carlo.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa")
    common.add_argument("--c")
    common.add_argument("--delta")
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--seed", type=int, default=20240601)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-algebra", parents=[common], help="graded Jacobi identity over a mode range")
    s.add_argument("--sector", choices=(NS, RAMOND))
    s.add_argument("--range", type=int, default=5)

    s = sub.add_parser("singular", parents=[common], help="singular vector and its locus")
    s.add_argument("case", choices=sorted(SINGULAR_CASES))

    for name, helptext in (("link", "walk -> SDE and jet residual"),
                           ("verify-solution", "closed-form solution residuals")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("config", choices=sorted(catalog.CONFIGURATIONS))
        s.add_argument("--structure", choices=("conv", "alt"),
                       help="informational; fixed by the configuration")

    s = sub.add_parser("martingale", parents=[common], help="drift state and conservation in mean")
    s.add_argument("which", choices=MARTINGALE_WALKS)
    s.add_argument("--walk", help="walk JSON file overriding the named walk")
    s.add_argument("--level")
    s.add_argument("--numeric", action="store_true", help="also run the Monte Carlo estimate")
    s.add_argument("--paths", type=int, default=10000)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--t-max", type=float, default=1.0)

    s = sub.add_parser("simulate", parents=[common], help="Loewner flow Monte Carlo")
    s.add_argument("--paths", type=int, default=1000)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--t-max", type=float, default=1.0)
    s.add_argument("--checkpoints", type=int, default=10)

    s = sub.add_parser("suite", parents=[common], help="run several checks")
    s.add_argument("names", nargs="*", help="quoted subcommand strings")

    for name, sp in sub.choices.items():
        sp.set_defaults(func=COMMANDS[name])
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    reports = args.func(args)
    payload = json.dumps([r.to_json() for r in reports], indent=2)
    if args.out and args.command != "simulate":
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        sys.stdout.write(payload + "\n")
    for r in reports:
        print(f"{r.status.upper():4} {r.name}", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
