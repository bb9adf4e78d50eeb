"""Command-line driver: verification sweeps, simulations, and kernel probes.

Exit-code contract: 0 all checks pass, 1 numerical failure (a residual above
tolerance, a failed simulation pre-check, or an aborted run), 2 usage or
configuration error.  Reports are deterministic: the same command with the
same seed produces byte-identical JSON (timing is kept out of the JSON
payload for exactly that reason).
"""

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import __version__
from . import evolve as ev
from . import identities as idn
from . import models_2d as m2
from .errors import DomainError, NonUnitaryError, SingularityError
from .rmat import RFamily, detect_unitarity_normalization, unitarity_scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_TAU = 0.21 + 0.93j

SUITES = ("fay", "aybe", "structure", "heat", "identities", "all")


def _parse_complex(text):
    try:
        return complex(text)
    except ValueError:
        raise DomainError(f"cannot parse {text!r} as a complex number")


def _families_from_args(args):
    """The family list a command operates on; flags narrow the default set."""
    tau = complex(args.tau[0], args.tau[1]) if args.tau else DEFAULT_TAU
    lam = _parse_complex(args.lam) if args.lam is not None else 0.0
    if args.family is None:
        return [
            RFamily.elliptic(2, tau),
            RFamily.elliptic(3, tau),
            RFamily.yang(2),
            RFamily.yang(3),
            RFamily.trig7v(lam),
            RFamily.rat11v(),
        ]
    kind = args.family
    n = args.n
    if kind == "elliptic":
        return [RFamily.elliptic(n or 2, tau)]
    if kind == "yang":
        return [RFamily.yang(n or 2)]
    if kind == "trig7v":
        return [RFamily.trig7v(lam)]
    return [RFamily.rat11v()]


def _fmt_family(fam):
    d = fam.descriptor()
    parts = [d["kind"], f"n={d['n']}"]
    if "tau" in d:
        parts.append(f"tau={d['tau'][0]}+{d['tau'][1]}j")
    if "lambda" in d:
        parts.append(f"lambda={d['lambda'][0]}+{d['lambda'][1]}j")
    return " ".join(parts)


# -- verify ----------------------------------------------------------------


def _suite_fay(families, samples, seed, tol):
    registry = idn.registry()
    records = []
    for flavor in ("rational", "trigonometric", "elliptic"):
        rng = np.random.default_rng(seed)
        worst, worst_p = 0.0, None
        done = 0
        while done < samples:
            pts = rng.uniform(0.1, 0.9, size=5) + 1j * rng.uniform(
                0.1, 0.9, size=5
            )
            try:
                resid = idn.scalar_fay_residual(flavor, *pts, tau=1j)
            except SingularityError:
                continue
            if resid > worst:
                worst, worst_p = resid, pts
            done += 1
        use_tol = tol if tol else (1e-10 if flavor == "elliptic" else 1e-12)
        records.append(
            {
                "suite": "fay",
                "name": "fay-addition",
                "anchor": registry["fay-addition"][0],
                "family": {"kind": "scalar", "flavor": flavor},
                "residual": worst,
                "tolerance": use_tol,
                "params": idn._param_repr(
                    dict(zip(("hbar", "eta", "z1", "z2", "z3"), worst_p))
                ),
                "status": "pass" if worst < use_tol else "fail",
            }
        )
    return records


def _suite_aybe(families, samples, seed, tol):
    registry = idn.registry()
    records = []
    for fam in families:
        for kind, name in (("AYBE", "aybe"), ("QYBE", "qybe"), ("CYBE", "cybe")):
            rng = np.random.default_rng(seed)
            worst, worst_p = 0.0, None
            for _ in range(samples):
                hb, eta, z1, z2, z3 = idn._sample_points(fam, rng, 5)
                p = {"hbar": hb, "eta": eta, "z1": z1, "z2": z2, "z3": z3}
                resid = idn.check_yb(kind, fam, p)
                if resid > worst:
                    worst, worst_p = resid, p
            use_tol = tol or 1e-9
            records.append(
                {
                    "suite": "aybe",
                    "name": name,
                    "anchor": registry[name][0],
                    "family": fam.descriptor(),
                    "residual": worst,
                    "tolerance": use_tol,
                    "params": idn._param_repr(worst_p),
                    "status": "pass" if worst < use_tol else "fail",
                }
            )
    return records


def _suite_structure(families, samples, seed, tol):
    registry = idn.registry()
    records = []
    for fam in families:
        try:
            report = idn.check_structure(fam, samples=samples, seed=seed)
        except NonUnitaryError as exc:
            records.append(
                {
                    "suite": "structure",
                    "name": "unitarity",
                    "anchor": registry["unitarity"][0],
                    "family": fam.descriptor(),
                    "residual": float("inf"),
                    "tolerance": tol or 1e-9,
                    "status": "fail",
                    "note": str(exc),
                }
            )
            continue
        form, dev = detect_unitarity_normalization(fam)
        for name, resid in report.items():
            use_tol = tol or 1e-9
            rec = {
                "suite": "structure",
                "name": name,
                "anchor": registry[name][0],
                "family": fam.descriptor(),
                "residual": float(resid),
                "tolerance": use_tol,
                "status": "pass" if resid < use_tol else "fail",
            }
            if name == "unitarity":
                rec["note"] = f"detected normalization: {form} (dev {dev:.2e})"
            records.append(rec)
    return records


def _suite_heat(families, samples, seed, tol):
    registry = idn.registry()
    records = []
    for fam in families:
        base = {"suite": "heat", "family": fam.descriptor()}
        if fam.kind != "elliptic":
            for name in ("heat-quantum", "heat-classical"):
                records.append(
                    dict(
                        base,
                        name=name,
                        anchor=registry[name][0],
                        status="skip",
                        note="requires the elliptic modulus",
                    )
                )
            continue
        rng = np.random.default_rng(seed)
        worst = {"quantum": 0.0, "classical": 0.0}
        worst_p = {"quantum": None, "classical": None}
        for _ in range(max(1, samples // 4)):
            p = idn._sample_heat(fam, rng)
            out = idn.check_heat(fam, p["hbar"], p["z1"], dtau=p["dtau"])
            for key in worst:
                if out[key] > worst[key]:
                    worst[key], worst_p[key] = out[key], p
        for key, name in (("quantum", "heat-quantum"), ("classical", "heat-classical")):
            use_tol = tol or 1e-5
            records.append(
                dict(
                    base,
                    name=name,
                    anchor=registry[name][0],
                    residual=worst[key],
                    tolerance=use_tol,
                    params=idn._param_repr(worst_p[key]),
                    status="pass" if worst[key] < use_tol else "fail",
                )
            )
    return records


def _suite_identities(families, samples, seed, tol):
    records = idn.run_catalogue(families, samples=samples, seed=seed)
    for rec in records:
        rec["suite"] = "identities"
        if tol and rec["status"] != "skip":
            rec["tolerance"] = tol
            rec["status"] = "pass" if rec["residual"] < tol else "fail"
    return records


SUITE_RUNNERS = {
    "fay": _suite_fay,
    "aybe": _suite_aybe,
    "structure": _suite_structure,
    "heat": _suite_heat,
    "identities": _suite_identities,
}


def _emit_report(report, records, args, stem):
    fmt = args.format
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    elif fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(
            ["suite", "name", "anchor", "family", "status", "residual", "tolerance"]
        )
        for r in records:
            writer.writerow(
                [
                    r.get("suite", ""),
                    r["name"],
                    r["anchor"],
                    json.dumps(r["family"], sort_keys=True),
                    r["status"],
                    r.get("residual", ""),
                    r.get("tolerance", ""),
                ]
            )
    else:
        for r in records:
            fam = r["family"]
            fam_text = (
                f"{fam['kind']}-n{fam['n']}" if "n" in fam else fam.get("flavor", "")
            )
            line = f"[{r['status']:>4}] {r['name']:<28} {fam_text:<14} ({r['anchor']})"
            if "residual" in r:
                line += f"  residual {r['residual']:.3e} < {r['tolerance']:.0e}"
            if r.get("note"):
                line += f"  -- {r['note']}"
            print(line)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, stem + ".json")
        with open(path, "w") as fh:
            fh.write(json.dumps(report, sort_keys=True, indent=2))
        print(f"report written to {path}", file=sys.stderr)


def cmd_verify(args):
    suites = args.suite or ["all"]
    for s in suites:
        if s not in SUITES:
            print(
                f"unknown suite {s!r}; choose from {', '.join(SUITES)}",
                file=sys.stderr,
            )
            return EXIT_USAGE
    if "all" in suites:
        suites = [s for s in SUITES if s != "all"]
    try:
        families = _families_from_args(args)
    except DomainError as exc:
        print(f"invalid family selection: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.time()
    records = []
    for s in suites:
        records.extend(
            SUITE_RUNNERS[s](families, args.samples, args.seed, args.tol)
        )
    elapsed = time.time() - t0
    counts = {"pass": 0, "fail": 0, "skip": 0}
    for r in records:
        counts[r["status"]] += 1
    report = {
        "tool": "aybelab",
        "version": __version__,
        "seed": args.seed,
        "suites": suites,
        "records": records,
        "counts": counts,
    }
    _emit_report(report, records, args, "verify_report")
    if args.format == "table":
        print(
            f"{counts['pass']} passed, {counts['fail']} failed, "
            f"{counts['skip']} skipped in {elapsed:.1f}s"
        )
    return EXIT_OK if counts["fail"] == 0 else EXIT_FAIL


# -- simulate --------------------------------------------------------------


def _load_sim_config(path):
    with open(path) as fh:
        doc = json.load(fh)
    state = m2.FieldState.from_json(doc["state"])
    flow = tuple(doc["flow"])
    if not flow or flow[0] not in ("first", "first_difference", "second"):
        raise DomainError(f"unknown flow kind {flow[:1]!r}")
    probes = [complex(p[0], p[1]) for p in doc.get("z_probes", [])]
    cfg = ev.SimConfig(
        state,
        flow,
        dt=float(doc["dt"]),
        steps=int(doc["steps"]),
        z_probes=probes,
        record_every=int(doc.get("record_every", 1)),
        readings=doc.get("readings"),
        monodromy_refine=int(doc.get("monodromy_refine", 1)),
    )
    return cfg, doc


def cmd_simulate(args):
    if not args.config:
        print("simulate requires --config PATH", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg, doc = _load_sim_config(args.config)
    except (OSError, ValueError, KeyError, DomainError, SingularityError) as exc:
        print(f"cannot load config {args.config!r}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    anchor = idn.registry()["zs"][0]

    # pre-check: the flow must satisfy the zero-curvature equation at t = 0
    pre_tol = args.tol or 1e-8
    probes = cfg.z_probes or [8.0 + 1.0j]
    try:
        pre = max(
            m2.zs_residual(
                cfg.state, cfg.flow, probes, readings=cfg.readings
            )
        )
    except (DomainError, SingularityError) as exc:
        print(f"pre-check could not be evaluated: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"zero-curvature pre-check ({anchor}): residual {pre:.3e}")
    if pre > pre_tol:
        print(
            f"pre-check failed (tolerance {pre_tol:.0e}); not stepping",
            file=sys.stderr,
        )
        return EXIT_FAIL

    traj = ev.run(cfg)
    csv_path = os.path.join(out_dir, "invariants.csv")
    traj.export_csv(csv_path)
    traj.export_snapshots(os.path.join(out_dir, "snapshot_t{t}.json"))
    drift = ev.drift_summary(traj)
    print(f"{len(traj.snapshots)} snapshots; invariants in {csv_path}")
    for (site, name), val in sorted(drift.items(), key=lambda kv: str(kv[0])):
        print(f"  drift {name:<24} site {site!s:<3} {val:.3e}")
    if traj.aborted:
        print(f"run aborted: {traj.abort_reason}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- expand / probe --------------------------------------------------------


def _print_op(label, op):
    mat = op.mat if hasattr(op, "mat") else np.asarray(op)
    print(f"{label}:")
    print(np.array2string(mat, precision=12, suppress_small=True))


def cmd_expand(args):
    try:
        fam = _families_from_args(args)[0]
    except DomainError as exc:
        print(f"invalid family selection: {exc}", file=sys.stderr)
        return EXIT_USAGE
    z = _parse_complex(args.z) if args.z else 0.31 + 0.14j
    print(f"family: {_fmt_family(fam)}  (nres = {fam.nres})")
    try:
        r, m = fam.classical_parts(z)
        r0, m0 = fam.constant_parts()
        _print_op(f"r({z})", r)
        _print_op(f"m({z})", m)
        _print_op("r0", r0)
        _print_op("m(0)", m0)
        _print_op(f"dr({z})", fam.dr(z))
        _print_op(f"dm({z})", fam.dm(z))
    except SingularityError as exc:
        print(f"singular evaluation at z = {z}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_probe(args):
    try:
        fam = _families_from_args(args)[0]
    except DomainError as exc:
        print(f"invalid family selection: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"family: {_fmt_family(fam)}")
    try:
        if args.R:
            hb, z = (_parse_complex(t) for t in args.R)
            _print_op(f"R(hbar={hb}, z={z})", fam.eval_R(hb, z))
            f, dev = unitarity_scalar(fam, hb, z)
            print(f"F(hbar={hb}, z={z}) = {f}  (off-identity {dev:.2e})")
        if args.z:
            z = _parse_complex(args.z)
            r, m = fam.classical_parts(z)
            _print_op(f"r({z})", r)
            _print_op(f"m({z})", m)
        r0, m0 = fam.constant_parts()
        _print_op("r0", r0)
        _print_op("m(0)", m0)
        if args.config and args.z:
            with open(args.config) as fh:
                state = m2.FieldState.from_json(json.load(fh)["state"])
            z = _parse_complex(args.z)
            U = m2.build_U(state, z)
            V = m2.build_V(state, ("first", 0), z)
            _print_op(f"U({z}) at x=0", U[0])
            _print_op(f"V({z}) at x=0 (first flow)", V[0])
    except SingularityError as exc:
        print(f"singular evaluation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NonUnitaryError as exc:
        print(f"unitarity violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (OSError, ValueError, KeyError, DomainError) as exc:
        print(f"probe error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


# -- entry point -----------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aybelab",
        description="Verification sweeps, simulations, and kernel probes "
        "for the R-matrix laboratory.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def add_common(p):
        p.add_argument(
            "--family",
            choices=["elliptic", "trig7v", "rat11v", "yang"],
            help="restrict to one R-matrix family",
        )
        p.add_argument("--n", type=int, help="matrix size for elliptic/yang")
        p.add_argument(
            "--tau",
            nargs=2,
            type=float,
            metavar=("RE", "IM"),
            help="elliptic modulus",
        )
        p.add_argument(
            "--lambda",
            dest="lam",
            metavar="L",
            help="trig7v deformation parameter",
        )
        p.add_argument(
            "--seed",
            type=int,
            default=int(os.environ.get("AYBE_LAB_SEED", "0")),
            help="RNG seed (default: AYBE_LAB_SEED or 0)",
        )
        p.add_argument("--tol", type=float, help="override tolerance")
        p.add_argument("--out", help="directory for report/trajectory files")
        p.add_argument(
            "--format",
            choices=["json", "table", "csv"],
            default="table",
            help="stdout format for reports",
        )
        p.add_argument("--config", help="JSON configuration file")

    pv = sub.add_parser("verify", help="run identity suites")
    add_common(pv)
    pv.add_argument(
        "--suite",
        action="append",
        help=f"suite selector, repeatable ({', '.join(SUITES)})",
    )
    pv.add_argument("--samples", type=int, default=20)
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("simulate", help="integrate a configured flow")
    add_common(ps)
    ps.set_defaults(func=cmd_simulate)

    pe = sub.add_parser("expand", help="print classical expansion kernels")
    add_common(pe)
    pe.add_argument("--z", help="spectral point (complex literal)")
    pe.set_defaults(func=cmd_expand)

    pp = sub.add_parser("probe", help="print R, F, kernels, and U-V values")
    add_common(pp)
    pp.add_argument(
        "--R",
        nargs=2,
        metavar=("HBAR", "Z"),
        help="evaluate the quantum kernel at (hbar, z)",
    )
    pp.add_argument("--z", help="spectral point (complex literal)")
    pp.set_defaults(func=cmd_probe)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
