"""Command-line interface: ``telescope {gen,dist,cluster,test3,homog,bounds,experiment}``.

Exit codes: 0 success, 1 usage error, 2 data or computation error.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import secrets
import sys
from pathlib import Path

import numpy as np

from . import bounds as bnd
from .classifiers import ExactOracle, KernelSVM, SvmConfig
from .clustering import average_linkage, farthest_point, threshold_clustering
from .core import DepthPolicy, WeightScheme
from .distance import TelescopeConfig, distance_matrix
from .experiment import ExperimentSpec, run_experiment
from .inference import DEFAULT_EXPONENT, homogeneity_test, three_sample_test
from .io import (ManifestEntry, read_manifest, read_matrix_csv, read_sample_csv,
                 write_json, write_manifest, write_matrix_csv, write_sample_csv)
from .synthgen import ALPHA_1, ALPHA_2, MarkovSpec, RotationProcessSpec, generate_markov, generate_rotation

log = logging.getLogger("telescope")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- config


NAMED_ALPHAS = {"alpha1": ALPHA_1, "alpha2": ALPHA_2}


def parse_alpha(v):
    if isinstance(v, str):
        return NAMED_ALPHAS[v] if v in NAMED_ALPHAS else np.longdouble(v)
    return float(v)


def parse_weights(v) -> WeightScheme:
    if isinstance(v, list):
        return WeightScheme.custom(v)
    table = {"inv-square": "inverse-square", "inverse-square": "inverse-square", "geometric": "geometric"}
    if v not in table:
        raise UsageError(f"unknown weights {v!r}")
    return WeightScheme(table[v])


def parse_depth(v) -> DepthPolicy:
    if v in ("log", "log-length"):
        return DepthPolicy.log_length()
    if v == "full":
        return DepthPolicy.full()
    if isinstance(v, str) and v.startswith("fixed:"):
        try:
            return DepthPolicy.fixed(int(v.split(":", 1)[1]))
        except ValueError:
            pass
    raise UsageError(f"invalid depth {v!r}; expected log, full or fixed:<k>")


_CONFIG_KEYS = {"estimator", "weights", "depth", "svm"}
_SVM_KEYS = {"kernel", "bandwidth", "cost", "max_iterations", "tolerance", "seed"}


def _check_fields(obj: dict, allowed: set, where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise UsageError(f"{where}: unexpected field(s) {', '.join(sorted(unknown))}")


def build_config(raw: dict, args=None) -> TelescopeConfig:
    """Telescope configuration from a JSON-like dict; command-line flags take precedence."""
    raw = dict(raw or {})
    _check_fields(raw, _CONFIG_KEYS, "config")
    for key in ("estimator", "weights", "depth"):
        val = getattr(args, key, None) if args is not None else None
        if val is not None:
            raw[key] = val
    svm_raw = raw.get("svm", {}) or {}
    _check_fields(svm_raw, _SVM_KEYS, "config.svm")
    est_name = raw.get("estimator", "svm")
    if est_name == "oracle":
        est = ExactOracle()
    elif est_name == "svm":
        est = KernelSVM(SvmConfig(**svm_raw))
    else:
        raise UsageError(f"unknown estimator {est_name!r}")
    return TelescopeConfig(parse_weights(raw.get("weights", "inv-square")),
                           parse_depth(raw.get("depth", "log")), est)


def _load_config(args) -> TelescopeConfig:
    raw = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            raw = json.load(fh)
    return build_config(raw, args)


def _seed(args, spec_seed=None) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if spec_seed is not None:
        return int(spec_seed)
    seed = secrets.randbits(32)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _alphabet(v):
    return None if v is None else tuple(int(a) for a in v.split(","))


# ---------------------------------------------------------------- commands

_GEN_KEYS = {
    "rotation": {"process", "alpha", "length", "count", "seed", "mean0", "mean1", "variance"},
    "markov": {"process", "transition", "initial", "length", "count", "seed", "alphabet"},
}


def cmd_gen(args):
    with open(args.spec) as fh:
        spec = json.load(fh)
    if not isinstance(spec, dict):
        raise UsageError("spec must be a JSON object")
    process = spec.get("process")
    if process not in _GEN_KEYS:
        raise UsageError(f"spec field 'process' must be one of {sorted(_GEN_KEYS)}")
    _check_fields(spec, _GEN_KEYS[process], "spec")
    for req in ("length",) + (("alpha",) if process == "rotation" else ("transition", "initial")):
        if req not in spec:
            raise UsageError(f"spec is missing required field '{req}'")
    count = int(spec.get("count", 1))
    if count < 1:
        raise UsageError("spec field 'count' must be positive")
    seed = _seed(args, spec.get("seed"))
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(count)):
        sub_seed = int(child.generate_state(1)[0])
        sid = f"{process}_{i:03d}"
        if process == "rotation":
            rs = RotationProcessSpec(parse_alpha(spec["alpha"]), int(spec["length"]), sub_seed,
                                     spec.get("mean0", 0.0), spec.get("mean1", 1.0), spec.get("variance", 0.25))
            sample = generate_rotation(rs, id=sid)
        else:
            ms = MarkovSpec(tuple(map(tuple, spec["transition"])), tuple(spec["initial"]),
                            int(spec["length"]), sub_seed,
                            None if spec.get("alphabet") is None else tuple(spec["alphabet"]))
            sample = generate_markov(ms, id=sid)
        path = out / f"{sid}.csv"
        write_sample_csv(path, sample)
        side = {k: v for k, v in spec.items() if k != "count"}
        side.update({"seed": sub_seed, "parent_seed": seed, "index": i})
        write_json(out / f"{sid}.json", side)
        entries.append(ManifestEntry(sid, path.name, "csv", sample.alphabet))
    write_manifest(out / "manifest.json", entries)
    log.info("wrote %d samples to %s", count, out)
    return 0


def _progress(done, total):
    if done == total or done % max(1, total // 20) == 0:
        log.info("pairs %d/%d", done, total)


def cmd_dist(args):
    cfg = _load_config(args)
    manifest = read_manifest(args.manifest)
    dm = distance_matrix(cfg, manifest.load(), ids=manifest.ids, progress=_progress)
    if args.out:
        write_matrix_csv(args.out, dm)
    else:
        write_matrix_csv(sys.stdout, dm)
    return 0


def cmd_cluster(args):
    if (args.k is None) == (args.epsilon is None):
        raise UsageError("give exactly one of --k or --epsilon")
    if args.k is not None and args.k < 1:
        raise UsageError("--k must be at least 1")
    if args.epsilon is not None and args.epsilon < 0:
        raise UsageError("--epsilon must be non-negative")
    if (args.matrix is None) == (args.manifest is None):
        raise UsageError("give exactly one of --matrix or --manifest")
    if args.matrix:
        dm = read_matrix_csv(args.matrix)
    else:
        manifest = read_manifest(args.manifest)
        dm = distance_matrix(_load_config(args), manifest.load(), ids=manifest.ids, progress=_progress)
    if args.epsilon is not None:
        result = threshold_clustering(dm, args.epsilon)
    else:
        algo = average_linkage if args.algorithm == "average-linkage" else farthest_point
        result = algo(dm, args.k)
    _emit(json.dumps(result.to_dict(), indent=2) + "\n", args.out)
    return 0


def cmd_test3(args):
    alpha = _alphabet(args.alphabet)
    x, y, z = (read_sample_csv(p, alpha, id=Path(p).stem) for p in (args.x, args.y, args.z))
    verdict = three_sample_test(_load_config(args), x, y, z)
    _emit(json.dumps(verdict.to_dict(), indent=2) + "\n", args.out)
    return 0


def cmd_homog(args):
    alpha = _alphabet(args.alphabet)
    x, y = (read_sample_csv(p, alpha, id=Path(p).stem) for p in (args.x, args.y))
    verdict = homogeneity_test(_load_config(args), x, y, args.exponent)
    _emit(json.dumps(verdict.to_dict(), indent=2) + "\n", args.out)
    return 0


_SCENARIO_FIELDS = {
    "q": ("n", "k", "epsilon"),
    "delta": ("n", "epsilon"),
    "homogeneity-type1": ("n", "epsilon"),
    "homogeneity-type2": ("n", "epsilon", "delta"),
    "clustering-known-k": ("n", "N", "delta"),
    "clustering-unknown-k": ("n", "N", "epsilon", "delta"),
}


def _grid(text, cast):
    return [cast(v) for v in text.split(",")] if text else []


def bound_value(p, scenario, **kw):
    if scenario == "q":
        return bnd.q_bound(p, kw["n"], kw["k"], kw["epsilon"])
    if scenario == "delta":
        return bnd.delta(p, kw["n"], kw["epsilon"])
    if scenario == "homogeneity-type1":
        sc = bnd.HomogeneityTypeI(kw["epsilon"], kw["n"])
    elif scenario == "homogeneity-type2":
        sc = bnd.HomogeneityTypeII(kw["epsilon"], kw["delta"], kw["n"])
    elif scenario == "clustering-known-k":
        sc = bnd.ClusteringKnownK(kw["delta"], kw["N"], kw["n"])
    else:
        sc = bnd.ClusteringUnknownK(kw["epsilon"], kw["delta"], kw["N"], kw["n"])
    return bnd.theorem_bounds(p, sc)


def cmd_bounds(args):
    fields = _SCENARIO_FIELDS[args.scenario]
    grids = {"n": _grid(args.n, int), "k": _grid(args.k, int), "N": _grid(args.N, int),
             "epsilon": _grid(args.epsilon, float), "delta": _grid(args.delta, float)}
    missing = [f for f in fields if not grids[f]]
    if missing:
        raise UsageError(f"scenario {args.scenario} needs --{', --'.join(missing)}")
    params = bnd.MixingBoundParams(args.gamma, lambda k: args.vc_slope * k + args.vc_offset)
    rows = [["gamma"] + list(fields) + ["bound"]]
    for combo in itertools.product(*(grids[f] for f in fields)):
        kw = dict(zip(fields, combo))
        rows.append([repr(args.gamma)] + [repr(v) for v in combo] + [repr(bound_value(params, args.scenario, **kw))])
    if args.out:
        with open(args.out, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    else:
        csv.writer(sys.stdout).writerows(rows)
    return 0


_EXPERIMENT_KEYS = {"alphas", "series_per_cluster", "lengths", "runs", "algorithm", "seed", "config"}


def build_experiment(raw: dict, args) -> ExperimentSpec:
    _check_fields(raw, _EXPERIMENT_KEYS, "experiment spec")
    kw = {}
    if "alphas" in raw:
        kw["alphas"] = tuple(parse_alpha(a) for a in raw["alphas"])
    for key in ("series_per_cluster", "runs"):
        if key in raw:
            kw[key] = int(raw[key])
    if "lengths" in raw:
        kw["lengths"] = tuple(int(n) for n in raw["lengths"])
    if getattr(args, "lengths", None):
        kw["lengths"] = tuple(_grid(args.lengths, int))
    if getattr(args, "runs", None) is not None:
        kw["runs"] = args.runs
    kw["algorithm"] = args.algorithm or raw.get("algorithm", "average-linkage")
    kw["seed"] = _seed(args, raw.get("seed"))
    kw["config"] = build_config(raw.get("config", {}), args)
    return ExperimentSpec(**kw)


def cmd_experiment(args):
    raw = {}
    if args.spec:
        with open(args.spec) as fh:
            raw = json.load(fh)
    spec = build_experiment(raw, args)
    rows = run_experiment(spec)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out)
        header = ["length", "mean_error", "stderr"] + ([] if args.no_timing else ["wall_seconds"])
        w.writerow(header)
        for r in rows:
            vals = [r.length, repr(r.mean_error), repr(r.stderr)]
            if not args.no_timing:
                vals.append(f"{r.wall_seconds:.3f}")
            w.writerow(vals)
    finally:
        if args.out:
            out.close()
    return 0


# ---------------------------------------------------------------- parser


def _telescope_flags(p):
    p.add_argument("--config", help="telescope configuration JSON")
    p.add_argument("--estimator", choices=["oracle", "svm"])
    p.add_argument("--weights", choices=["inv-square", "geometric"])
    p.add_argument("--depth", help="log, full or fixed:<k>")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="telescope", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="progress and timing on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate synthetic samples and a manifest")
    p.add_argument("spec")
    p.add_argument("--out", help="output directory (default: current)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dist", help="pairwise telescope distance matrix")
    p.add_argument("manifest")
    p.add_argument("--out")
    _telescope_flags(p)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("cluster", help="cluster samples or a precomputed matrix")
    p.add_argument("--matrix")
    p.add_argument("--manifest")
    p.add_argument("--algorithm", choices=["average-linkage", "farthest-point"], default="average-linkage")
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--out")
    _telescope_flags(p)
    p.set_defaults(func=cmd_cluster)

    for name, func, files in (("test3", cmd_test3, ("x", "y", "z")), ("homog", cmd_homog, ("x", "y"))):
        p = sub.add_parser(name)
        for f in files:
            p.add_argument(f)
        p.add_argument("--alphabet", help="comma-separated integer symbols for discrete samples")
        p.add_argument("--out")
        if name == "homog":
            p.add_argument("--exponent", type=float, default=DEFAULT_EXPONENT)
        _telescope_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("bounds", help="table of error bounds over parameter grids (CSV)")
    p.add_argument("--scenario", choices=sorted(_SCENARIO_FIELDS), required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--vc-slope", type=int, default=1, help="d_k = slope*k + offset")
    p.add_argument("--vc-offset", type=int, default=1)
    for f in ("n", "k", "N", "epsilon", "delta"):
        p.add_argument(f"--{f}", help="comma-separated grid")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("experiment", help="rotation-process clustering error versus length")
    p.add_argument("spec", nargs="?")
    p.add_argument("--lengths")
    p.add_argument("--runs", type=int)
    p.add_argument("--algorithm", choices=["average-linkage", "farthest-point"])
    p.add_argument("--seed", type=int)
    p.add_argument("--no-timing", action="store_true", help="omit the wall_seconds column")
    p.add_argument("--out")
    _telescope_flags(p)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"telescope {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"telescope {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
