"""
Command-line driver.

    ljmin pair --r 1.0
    ljmin cluster --n 13 --seed 1 --xyz best.xyz
    ljmin embed constraints.txt --eps
    ljmin contacts model.pdb
    ljmin relax model.pdb pairs.txt --out relaxed.pdb
    ljmin bench --n 2..8 --format json

Exit codes: 0 success, 1 negative domain result (clashes present, relaxation
failed), 2 usage or input error.  Option values resolve as command-line flag,
then ``--config`` JSON file, then built-in default; the resolved set is echoed
on stderr (text mode) or in the JSON document.
"""
import argparse
import json
import logging
import sys
import time

from . import __version__
from .distgeom import DEFAULT_EPS, PerturbationVector, embed, triangle_violations
from .globalopt import BasinHopOptions, basin_hop
from .io import FormatError, read_constraints, write_xyz
from .localopt import LocalOptOptions
from .potential import PairPotentialParams, SingularityError, lj_pair_energy
from .structure import (
    PDBParseError,
    UnknownElementError,
    classify_contacts,
    find_clashes,
    load_radii,
    read_pairs,
    read_pdb,
    relax_structure,
    write_pdb,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

DEFAULTS = {
    "pair": {"r": None, "eps": 1.0, "sigma": 1.0},
    "cluster": {"n": None, "hops": 1000, "restarts": 10, "perturb": 0.35,
                "temperature": 0.8, "xyz": None, "workers": 1},
    "embed": {"constraints": None, "eps": None, "restarts": 20, "xyz": None},
    "contacts": {"pdb": None, "tol": 0.4, "window": 0.1, "radii": None},
    "relax": {"pdb": None, "pairs": None, "out": None, "tol": 0.4, "radii": None},
    "bench": {"n": "2..8", "hops": 1000, "restarts": 10, "workers": 1},
}
COMMON = {"seed": 0, "format": "text"}


class UsageError(Exception):
    pass


def _fmt(value):
    text = f"{value:.10g}"
    return "0" if text == "-0" else text


def _parse_range(spec):
    """``"2..5"`` -> [2, 3, 4, 5]; also accepts ``"7"`` and ``"2,4,6"``."""
    spec = str(spec)
    try:
        if ".." in spec:
            lo, hi = spec.split("..", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(v) for v in spec.split(",")]
    except ValueError:
        raise UsageError(f"bad range {spec!r}; use A..B or a comma list") from None
    if not values:
        raise UsageError(f"empty range {spec!r}")
    return values


def _emit(cfg, payload, text_lines):
    if cfg["format"] == "json":
        print(json.dumps({"config": cfg, **payload}, indent=2, sort_keys=True))
    else:
        print("# config: " + json.dumps(cfg, sort_keys=True), file=sys.stderr)
        for line in text_lines:
            print(line)


def cmd_pair(cfg):
    if cfg["r"] is None:
        raise UsageError("pair needs --r")
    r = float(cfg["r"])
    if not r > 0:
        raise UsageError(f"domain error: pair distance must be positive, got {r}")
    try:
        params = PairPotentialParams(float(cfg["eps"]), float(cfg["sigma"]))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    e = lj_pair_energy(r, params)
    _emit(cfg, {"energy": e}, [_fmt(e)])
    return EXIT_OK


def _bh_options(cfg, n):
    try:
        return BasinHopOptions(n_atoms=n, hops=int(cfg["hops"]), restarts=int(cfg["restarts"]),
                               perturb_magnitude=float(cfg.get("perturb", 0.35)),
                               temperature=float(cfg.get("temperature", 0.8)),
                               seed=int(cfg["seed"]))
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_cluster(cfg):
    if cfg["n"] is None:
        raise UsageError("cluster needs --n")
    opts = _bh_options(cfg, int(cfg["n"]))
    report = basin_hop(opts, workers=int(cfg["workers"]))
    if cfg["xyz"]:
        write_xyz(cfg["xyz"], report.best_config,
                  comment=f"LJ{opts.n_atoms} energy={report.best_energy!r} seed={opts.seed}")
    payload = {"best_energy": report.best_energy, "hops_taken": report.hops_taken,
               "accepted": report.accepted, "restarts_used": report.restarts_used,
               "failed": report.failed, "per_restart_best": report.per_restart_best,
               "best_config": report.best_config.positions.tolist()}
    lines = [f"n: {opts.n_atoms}",
             f"best energy: {report.best_energy:.6f}",
             f"hops: {report.hops_taken}  accepted: {report.accepted}  "
             f"failed: {report.failed}  restarts: {report.restarts_used}"]
    if cfg["xyz"]:
        lines.append(f"wrote {cfg['xyz']}")
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_embed(cfg):
    s = read_constraints(cfg["constraints"])
    eps = None
    if cfg["eps"] is not None:
        eps = PerturbationVector.uniform(s.n_atoms, float(cfg["eps"]))
    triangles = triangle_violations(s)
    res = embed(s, eps=eps, restarts=int(cfg["restarts"]), seed=int(cfg["seed"]),
                local_opts=LocalOptOptions())
    if cfg["xyz"]:
        write_xyz(cfg["xyz"], res.positions, comment=f"embedding P*={res.stress!r}")
    lines = [f"P*: {res.stress:.6e}"]
    if eps is not None:
        lines.append(f"P_eps*: {res.objective:.6e}")
    lines += [f"converged: {'yes' if res.converged else 'no'}",
              f"feasible: {'yes' if res.feasible else 'no'}",
              f"violated constraints: {len(res.violations)}"]
    lines += [f"  {v.i} {v.j} distance {v.distance:.6f} target {v.target:.6f}"
              for v in res.violations]
    lines.append(f"triangle violations: {len(triangles)}")
    lines += [f"  {i} {j} {k}" for i, j, k in triangles]
    if triangles and eps is None:
        lines.append("hint: targets violate the triangle inequality; "
                     f"--eps {DEFAULT_EPS:g} minimizes the perturbed stress")
    payload = {"stress": res.stress, "objective": res.objective, "perturbed": res.perturbed,
               "converged": res.converged, "grad_norm": res.grad_norm,
               "feasible": res.feasible,
               "violations": [{"i": v.i, "j": v.j, "distance": v.distance, "target": v.target}
                              for v in res.violations],
               "triangle_violations": [list(t) for t in triangles],
               "coordinates": res.positions.tolist()}
    _emit(cfg, payload, lines)
    return EXIT_OK


def _radii(cfg):
    return load_radii(cfg["radii"]) if cfg.get("radii") else None


def _contact_line(kind, structure, c):
    a, b = structure.atoms[c.i], structure.atoms[c.j]
    return (f"{kind} {a.serial} {a.name} {a.residue_name}{a.residue_seq} - "
            f"{b.serial} {b.name} {b.residue_name}{b.residue_seq} "
            f"d={c.distance:.3f} vdw_sum={c.vdw_sum:.3f}")


def cmd_contacts(cfg):
    structure = read_pdb(cfg["pdb"])
    radii = _radii(cfg)
    clashes = find_clashes(structure, float(cfg["tol"]), radii)
    classes = classify_contacts(structure, float(cfg["window"]), radii=radii)
    lines = [f"atoms: {len(structure)}",
             f"clashes: {len(clashes.clashes)}",
             f"optimal contacts: {len(classes.optimal)}",
             f"far contacts: {len(classes.far)}"]
    lines += [_contact_line("clash", structure, c) for c in clashes.clashes]
    lines += [_contact_line("optimal", structure, c) for c in classes.optimal]
    payload = {"atoms": len(structure), "clashes": clashes.to_dict(structure)["clashes"],
               "classification": classes.to_dict(structure)}
    _emit(cfg, payload, lines)
    return EXIT_NEGATIVE if clashes.clashes else EXIT_OK


def cmd_relax(cfg):
    if not cfg["out"]:
        raise UsageError("relax needs --out")
    structure = read_pdb(cfg["pdb"])
    radii = _radii(cfg)
    vdw, hb = read_pairs(cfg["pairs"], structure)
    res = relax_structure(structure, vdw, hb, LocalOptOptions(), radii=radii,
                          overlap_tol=float(cfg["tol"]))
    with open(cfg["out"], "w") as fh:
        fh.write(write_pdb(res.structure))
    lines = [f"pairs: {len(vdw)} vdw, {len(hb)} hb",
             f"clashes before: {len(res.before.clashes)}",
             f"clashes after: {len(res.after.clashes)}",
             f"listed pairs clashing after: {len(res.listed_clashes)}",
             f"energy: {res.energy_before:.6g} -> {res.energy_after:.6g}",
             f"status: {'ok' if res.success else 'failed'}"]
    if res.message and not res.success:
        lines.append(f"diagnostics: {res.message}")
    lines.append(f"wrote {cfg['out']}")
    payload = {"success": res.success, "message": res.message,
               "clashes_before": len(res.before.clashes),
               "clashes_after": len(res.after.clashes),
               "listed_clashes_after": len(res.listed_clashes),
               "energy_before": res.energy_before, "energy_after": res.energy_after,
               "iters": res.iters}
    _emit(cfg, payload, lines)
    return EXIT_OK if res.success else EXIT_NEGATIVE


def cmd_bench(cfg):
    rows = []
    for n in _parse_range(cfg["n"]):
        opts = _bh_options(cfg, n)
        t0 = time.perf_counter()
        report = basin_hop(opts, workers=int(cfg["workers"]))
        rows.append({"n": n, "energy": report.best_energy, "hops": report.hops_taken,
                     "seconds": round(time.perf_counter() - t0, 3)})
    # JSON output is the bare row array; the resolved config goes to stderr
    print("# config: " + json.dumps(cfg, sort_keys=True), file=sys.stderr)
    if cfg["format"] == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'n':>4} {'energy':>16} {'hops':>8} {'seconds':>9}")
        for row in rows:
            print(f"{row['n']:>4} {row['energy']:>16.8f} {row['hops']:>8} {row['seconds']:>9.3f}")
    return EXIT_OK


COMMANDS = {"pair": cmd_pair, "cluster": cmd_cluster, "embed": cmd_embed,
            "contacts": cmd_contacts, "relax": cmd_relax, "bench": cmd_bench}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    parser = _Parser(prog="ljmin", description="Lennard-Jones minimization and contact tools")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--format", choices=["text", "json"], default=None)
    common.add_argument("--config", default=None, help="JSON file with option values")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("pair", parents=[common], help="LJ energy of one pair")
    p.add_argument("--r", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--sigma", type=float)

    p = sub.add_parser("cluster", parents=[common], help="basin hopping for an LJ cluster")
    p.add_argument("--n", type=int)
    p.add_argument("--hops", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--perturb", type=float)
    p.add_argument("--temperature", type=float)
    p.add_argument("--xyz", help="write the best configuration here")
    p.add_argument("--workers", type=int)

    p = sub.add_parser("embed", parents=[common], help="embed a distance-constraint file")
    p.add_argument("constraints", nargs="?")
    p.add_argument("--eps", type=float, nargs="?", const=DEFAULT_EPS,
                   help=f"minimize the perturbed stress (default per-component {DEFAULT_EPS:g})")
    p.add_argument("--restarts", type=int)
    p.add_argument("--xyz")

    p = sub.add_parser("contacts", parents=[common], help="clash and contact report for a PDB file")
    p.add_argument("pdb", nargs="?")
    p.add_argument("--tol", type=float)
    p.add_argument("--window", type=float)
    p.add_argument("--radii", help="radius override file ('El radius' lines)")

    p = sub.add_parser("relax", parents=[common], help="relax listed pairs of a PDB file")
    p.add_argument("pdb", nargs="?")
    p.add_argument("pairs", nargs="?")
    p.add_argument("--out")
    p.add_argument("--tol", type=float)
    p.add_argument("--radii")

    p = sub.add_parser("bench", parents=[common], help="basin hopping over a range of N")
    p.add_argument("--n", help="range such as 2..8")
    p.add_argument("--hops", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--workers", type=int)
    return parser


def resolve_config(args):
    """Merge defaults, the optional JSON config file and explicit flags."""
    command = args.command
    cfg = dict(COMMON)
    cfg.update(DEFAULTS[command])
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {args.config} is not valid JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError(f"config {args.config} must hold a JSON object")
        unknown = sorted(set(loaded) - set(cfg))
        if unknown:
            raise UsageError(f"unknown config key(s) for {command}: {', '.join(unknown)}")
        cfg.update(loaded)
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["format"] not in ("text", "json"):
        raise UsageError(f"format must be text or json, got {cfg['format']!r}")
    for key in ("constraints", "pdb", "pairs"):
        if key in cfg and cfg[key] is None:
            raise UsageError(f"{command} needs a {key} file")
    return cfg


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except UnknownElementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PDBParseError, FormatError, SingularityError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
