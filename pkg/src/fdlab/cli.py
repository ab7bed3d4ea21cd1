"""``lab``: experiment driver writing CSV/JSON artifacts.

Subcommands::

    lab lemma --eps 0.25,0.5,1 --grid 256 --jmax 256
    lab construct --spec spec.json [--oracle]
    lab decay --builtin cantor --jmax 65536
    lab oracle

Exit codes: 0 every asserted inequality holds, 1 violation or error,
2 inconclusive (e.g. no witness frequency found below ``r_max``).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy

from . import __version__, construction, energy, fourier, lemma, measures, oracles

OK, VIOLATION, INCONCLUSIVE = 0, 1, 2
BUILTINS = ("lebesgue", "cantor", "construction-A", "construction-AuB")
LARGE_SET = 1 << 16


# -- output helpers ------------------------------------------------------------

def header(command: str, params: dict) -> dict:
    return {
        "tool": "fdlab",
        "command": command,
        "params": params,
        "versions": {"fdlab": __version__, "numpy": np.__version__, "scipy": scipy.__version__},
    }


def _plain(obj):
    """JSON-ready copy: Fractions as strings, non-finite floats as strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _plain(obj.item())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def write_json(path: Path, head: dict, body: dict) -> None:
    path.write_text(json.dumps(_plain({"header": head, **body}), indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, head: dict, columns: list[str], rows) -> None:
    buf = io.StringIO()
    for line in json.dumps(_plain(head), indent=1, sort_keys=True).splitlines():
        buf.write(f"# {line}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(columns)
    for row in rows:
        wr.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row])
    path.write_text(buf.getvalue())


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


# -- lemma ---------------------------------------------------------------------

def cmd_lemma(eps_list, Q: int = 256, J: int = 256, R: int = 32, out=".") -> int:
    """Pulse bound and LP minimax per epsilon; writes ``lemma.csv`` and ``lemma.json``."""
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        return OK
    out = _outdir(out)
    head = header("lemma", {"eps": eps_list, "grid": Q, "jmax": J, "rotations": R})
    rows, details, status = [], [], OK
    for eps in eps_list:
        try:
            res = lemma.minimize_sup_transform(eps, Q, J, R)
        except RuntimeError as exc:
            print(f"lemma: solver failure at eps={eps}: {exc}", file=sys.stderr)
            return VIOLATION
        K = lemma.default_terms(eps)
        psum, pbound = lemma.pulse_sum_bound(eps, K)
        ok = res.consistent and psum <= pbound
        status = status if ok else VIOLATION
        rows.append([eps, res.lower_bound, eps / 5.0, res.optimal_value, res.slack, psum, pbound,
                     res.corrected_value, res.achieved_sup, K, "yes" if ok else "no"])
        details.append({**res.to_dict(), "pulse_terms": K, "pulse_sum": psum, "pulse_bound": pbound,
                        "holds": ok})
        print(f"eps={eps}: minimax {res.optimal_value:.6f} (corrected {res.corrected_value:.6f}) "
              f"+ slack {res.slack:.5f} vs bound {res.lower_bound:.6f} -> {'ok' if ok else 'VIOLATION'}")
    write_csv(out / "lemma.csv", head,
              ["epsilon", "paper_bound", "eps_over_5", "minimax_value", "slack", "pulse_sum",
               "pulse_bound", "corrected_value", "achieved_sup", "pulse_terms", "holds"], rows)
    write_json(out / "lemma.json", head, {"results": details, "exit_status": status})
    return status


# -- construct -----------------------------------------------------------------

def load_spec(path) -> construction.DigitBlockSpec:
    """Read ``{s, b, l, depth}``; stages whose blocks end past the depth are dropped."""
    with open(path) as fh:
        cfg = json.load(fh)
    missing = [k for k in ("s", "b", "l") if k not in cfg]
    if missing:
        raise construction.SpecError("missing-field", f"spec file lacks {missing}")
    spec = construction.validate_parameters(cfg["s"], cfg["b"], cfg["l"])
    if cfg.get("depth") is None:
        return spec.truncated(measures.MAX_DEPTH)
    depth = int(cfg["depth"])
    if depth > measures.MAX_DENSE_DEPTH:
        raise construction.SpecError("depth", f"depth {depth} exceeds {measures.MAX_DENSE_DEPTH}")
    return spec.truncated(depth).with_depth(depth)


def _set_entry(cset: measures.CylinderSet) -> dict:
    entry = {"depth": cset.depth, "count": len(cset), "lebesgue": cset.lebesgue_measure()}
    if len(cset) <= LARGE_SET:
        entry["indices"] = cset.indices.tolist()
    else:
        entry["omitted"] = True
    return entry


def _mask_entry(mask: np.ndarray, depth: int) -> dict:
    count = int(np.count_nonzero(mask))
    entry = {"depth": depth, "count": count, "lebesgue": Fraction(count, 1 << depth)}
    if count <= LARGE_SET:
        entry["indices"] = np.flatnonzero(mask).tolist()
    else:
        entry["omitted"] = True
    return entry


def run_construct_oracles(spec, mu, masses, target: str) -> list[dict]:
    out = []
    for k in range(1, spec.K + 1):
        rep = construction.mass_of_f_infinite_bound(spec, k)
        ie = oracles.inclusion_exclusion_union(spec.m[k - 1:])
        out.append({"name": f"inclusion-exclusion k={k}", "passed": rep.exact_mass == ie,
                    "detail": f"counted {rep.exact_mass}, inclusion-exclusion {ie}"})
    if spec.working_depth <= 14:
        ref = oracles.enumerate_stage_masses(mu.weights, spec, target)
        exact = construction.stage_masses(mu, spec, target, exact=True)
        same = all(exact.alpha[k] == ref["alpha"].get(k, 0) for k in exact.alpha) and \
            all(exact.alpha_kj[kj] == ref["alpha_kj"].get(kj, 0) for kj in exact.alpha_kj)
        out.append({"name": "stage-mass enumeration", "passed": same,
                    "detail": f"depth {spec.working_depth}, {1 << spec.working_depth} strings"})
    else:
        out.append({"name": "stage-mass enumeration", "passed": True,
                    "detail": f"skipped: depth {spec.working_depth} > 14"})
    return out


def cmd_construct(spec_path, oracle: bool = False, out=".", candidate: str = "lebesgue-A",
                  r_max: int = 64) -> int:
    """Stage masses, P-flags and both dichotomy branches for one candidate measure."""
    spec = load_spec(spec_path)
    target = candidate.split("-")[-1] if candidate.startswith("lebesgue-") else "A"
    if target not in ("A", "B"):
        raise construction.SpecError("candidate", f"candidate {candidate!r} is not supported on A or B")
    out = _outdir(out)
    head = header("construct", {"spec": spec.to_dict(), "candidate": candidate, "target": target,
                                "r_max": r_max, "oracle": oracle})
    status = OK
    n = spec.working_depth

    a_mask = construction.predicate_mask(spec, "f-even")
    lam_a = Fraction(int(np.count_nonzero(a_mask)), 1 << n)
    lam_b = Fraction(int(np.count_nonzero(~a_mask)), 1 << n)
    sets = {"A": _mask_entry(a_mask, n), "B": _mask_entry(~a_mask, n)}
    del a_mask
    if lam_a + lam_b != 1:
        status = VIOLATION
    for k in range(1, spec.K + 1):
        depth = spec.block_end(k)
        cells = np.arange(1 << depth, dtype=np.int64)
        sets[f"block-{k}-zero"] = _set_entry(measures.CylinderSet(
            depth, cells[construction.block_zero(cells, spec, k, depth)]))
    bounds = []
    for k in range(1, spec.K + 1):
        rep = construction.mass_of_f_infinite_bound(spec, k)
        bounds.append({"k": k, "bound": rep.union_bound, "exact": rep.exact_mass, "holds": rep.holds})
        status = status if rep.holds else VIOLATION

    mu = construction.candidate_measure(spec, candidate)
    masses = construction.stage_masses(mu, spec, target, exact=True)
    en = energy.riesz_energy(mu, spec.s)
    verdicts = construction.dichotomy(mu, spec, target, r_max, masses=masses, energy=en)
    rows, stages = [], []
    for v in verdicts:
        for rep in v.energy_reports:
            sets[f"cover-{v.k}-{rep.j}"] = _set_entry(construction.cover_cells(spec, v.k, rep.j))
            rows.append([v.k, rep.j, float(masses.alpha_kj[v.k, rep.j]), float(masses.thresholds[v.k, rep.j]),
                         "yes" if v.in_p else "no",
                         v.witness.combined_bound if v.witness else None, rep.bound,
                         float(masses.alpha[v.k]), float(masses.residual[v.k]), v.branch,
                         str(masses.alpha_kj[v.k, rep.j])])
        if v.fired != 1:
            status = VIOLATION
        if v.witness is not None and v.witness.inconclusive and status == OK:
            status = INCONCLUSIVE
        stages.append({
            "k": v.k, "in_p": v.in_p, "branch": v.branch, "fired": v.fired,
            "alpha": masses.alpha[v.k], "residual": masses.residual[v.k],
            "witness": None if v.witness is None else {
                key: getattr(v.witness, key) for key in (
                    "r_star", "nu_sup", "required", "lemma_required", "slack", "leaked_mass",
                    "exponent", "combined_bound", "frequency", "identity_error", "certified")},
            "energy": [{"j": r.j, "alpha_kj": r.alpha_kj, "threshold": r.threshold,
                        "violates_threshold": r.violates_threshold, "cells": r.cell_count,
                        "bound": r.bound, "cover_bound": r.cover_bound, "holds": r.holds}
                       for r in v.energy_reports],
        })
    check_oracles = run_construct_oracles(spec, mu, masses, target) if oracle else []
    if any(not o["passed"] for o in check_oracles):
        status = VIOLATION

    write_csv(out / "stages.csv", head,
              ["k", "j", "alpha", "threshold", "in_P", "witness_bound", "energy_bound",
               "alpha_k", "residual", "branch", "alpha_exact"], rows)
    write_json(out / "sets.json", head, {"sets": sets})
    write_json(out / "summary.json", head, {
        "lambda_A": lam_a, "lambda_B": lam_b, "lambda_sum": lam_a + lam_b,
        "mass_of_f_infinite_bound": bounds,
        "energy": {"s": en.s, "value": en.value, "diagonal_share": en.diagonal_share, "method": en.method},
        "mass_off_target": masses.mass_off_target,
        "stages": stages, "oracles": check_oracles, "exit_status": status})
    print(f"construct: depth {n}, l={list(spec.l)}, m={list(spec.m)}, dropped l={list(spec.dropped)}")
    print(f"  lambda(A) + lambda(B) = {lam_a} + {lam_b} = {lam_a + lam_b}")
    for st in stages:
        print(f"  stage {st['k']}: in P={st['in_p']}, branch={st['branch']}, fired={st['fired']}")
    for o in check_oracles:
        print(f"  {'PASS' if o['passed'] else 'FAIL'} {o['name']}: {o['detail']}")
    return status


# -- decay ---------------------------------------------------------------------

def builtin_measures(name: str, spec=None):
    """``[(label, measure, default offset)]`` for a builtin name."""
    if name == "lebesgue":
        return [("lebesgue", measures.lebesgue(0), 0.5)]
    if name == "cantor":
        return [("cantor", measures.CantorMeasure(12), 0.0)]
    spec = construction.default_spec() if spec is None else spec
    if name == "construction-AuB":
        return [("lebesgue-AuB", construction.candidate_measure(spec, "lebesgue-AuB"), 0.5)]
    if name == "construction-A":
        return [(c, None, 0.5) for c in construction.candidate_names(spec, "A")]
    raise ValueError(f"unknown builtin {name!r}; choose from {BUILTINS}")


def decay_of(name: str, j_max: int, offset: float | None = None, spec=None):
    """Best (largest dimension estimate) DecayReport over the builtin's measures."""
    spec = construction.default_spec() if spec is None else spec
    best, table = None, []
    for label, mu, off in builtin_measures(name, spec):
        if mu is None:
            mu = construction.candidate_measure(spec, label)
        rep = fourier.estimate_decay(mu, j_max, offset=off if offset is None else offset)
        del mu
        table.append({"candidate": label, **rep.summary()})
        key = (rep.fourier_dim_estimate, min(rep.fitted_exponent, 1e300))
        if best is None or key > best[0]:
            best = (key, label, rep)
    return best[1], best[2], table


def cmd_decay(builtin: str | None = None, measure: str | None = None, j_max: int = 1 << 16,
              offset: float | None = None, out=".") -> int:
    out = _outdir(out)
    if measure is not None:
        try:
            mu = measures.load_measure(measure)
        except (OSError, ValueError, KeyError) as exc:
            print(f"decay: cannot read measure {measure}: {exc}", file=sys.stderr)
            return VIOLATION
        label = Path(measure).name
        rep = fourier.estimate_decay(mu, j_max, offset=0.0 if offset is None else offset)
        table = [{"candidate": label, **rep.summary()}]
    elif builtin is not None:
        label, rep, table = decay_of(builtin, j_max, offset)
    else:
        print("decay: give --builtin or --measure", file=sys.stderr)
        return VIOLATION
    head = header("decay", {"builtin": builtin, "measure": measure, "jmax": j_max, "offset": rep.offset})
    rows = [[lo, hi, float(v), js] for (lo, hi), v, js in zip(rep.bands, rep.sup_abs, rep.j_star)]
    write_csv(out / "decay.csv", head, ["band_lo", "band_hi", "sup_abs", "j_star"], rows)
    write_json(out / "decay.json", head, {"best": label, **rep.summary(), "notes": rep.notes,
                                           "candidates": table})
    print(f"decay: {label}: exponent {rep.fitted_exponent:.4f}, "
          f"dimension estimate {rep.fourier_dim_estimate:.4f} (j_max={j_max})")
    return OK


# -- oracle --------------------------------------------------------------------

def cmd_oracle(out=None) -> int:
    results = oracles.run_oracle_suite()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail} [{r.seconds:.1f}s]")
    status = OK if all(r.passed for r in results) else VIOLATION
    if out is not None:
        write_json(_outdir(out) / "oracle.json", header("oracle", {}),
                   {"results": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
                    "exit_status": status})
    return status


# -- entry point ---------------------------------------------------------------

def _eps_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lab", description=__doc__.splitlines()[0])
    p.add_argument("--out", default="lab_out", help="output directory (default: lab_out)")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("lemma", help="pulse bound and discretized minimax per epsilon")
    q.add_argument("--eps", type=_eps_list, default=[0.25, 0.5, 1.0])
    q.add_argument("--grid", type=int, default=256, help="atoms Q in [eps, 1]")
    q.add_argument("--jmax", type=int, default=256, help="frequencies J")
    q.add_argument("--rotations", type=int, default=32)

    q = sub.add_parser("construct", help="stage masses and dichotomy for a digit-block spec")
    q.add_argument("--spec", required=True, help="JSON file {s, b, l, depth}")
    q.add_argument("--oracle", action="store_true", help="cross-check against brute force")
    q.add_argument("--candidate", default="lebesgue-A")
    q.add_argument("--rmax", type=int, default=64)

    q = sub.add_parser("decay", help="Fourier decay estimate of a measure")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--builtin", choices=BUILTINS)
    g.add_argument("--measure", help="DyadicMeasure JSON file")
    q.add_argument("--jmax", type=int, default=1 << 16)
    q.add_argument("--offset", type=float, default=None, help="sample at j + offset")

    sub.add_parser("oracle", help="run the independent oracle suite")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "lemma":
            return cmd_lemma(args.eps, args.grid, args.jmax, args.rotations, out=args.out)
        if args.command == "construct":
            return cmd_construct(args.spec, args.oracle, out=args.out, candidate=args.candidate,
                                 r_max=args.rmax)
        if args.command == "decay":
            return cmd_decay(args.builtin, args.measure, args.jmax, args.offset, out=args.out)
        return cmd_oracle(out=args.out)
    except construction.SpecError as exc:
        print(f"lab: invalid spec ({exc.reason}): {exc}", file=sys.stderr)
        return VIOLATION
    except (OSError, json.JSONDecodeError) as exc:
        print(f"lab: {exc}", file=sys.stderr)
        return VIOLATION


if __name__ == "__main__":
    sys.exit(main())
