"""Command-line interface: dataset generation, single-pair runs, benchmarks.

Configuration precedence is command-line flags over config-file entries over
the built-in defaults (which reproduce the reference hyperparameters for each
dataset tag, including the larger regularization weight for the SIM set).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bench import format_summary, persist_results, run_benchmark
from .criterion import Decision, GridSpec, estimation_capacity, gamma
from .data import SimLinSpec, gen_simlin, load_pairs, write_pairs, zscore
from .rbm import EncoderScaling, RbmParams
from .regularizer import RangeBox
from .trainer import TrainConfig, train

_CONFIG_KEYS = {
    "m": int,
    "sigma": float,
    "lambda": float,
    "eta": float,
    "q": float,
    "epochs": int,
    "patience": int,
    "min_delta": float,
    "rounds": int,
    "base_seed": int,
    "jobs": int,
    "encoder_scaling": str,
}

_DATASET_TAGS = ("cep", "sim", "sim-c", "sim-lin")


def _read_config_file(path: str) -> dict:
    """Parse flat `key = value` lines; unknown keys are rejected."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _CONFIG_KEYS[key](value.strip())
    return values


def _infer_dataset_tag(data_dir: str) -> str:
    name = Path(data_dir).name.lower().replace("_", "-")
    if "sim-c" in name or "simc" in name:
        return "sim-c"
    if "sim-lin" in name or "simlin" in name:
        return "sim-lin"
    if "sim" in name:
        return "sim"
    if "cep" in name or "tue" in name:
        return "cep"
    return "cep"


def _resolve(args, key: str, file_values: dict, default):
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return flag
    if key in file_values:
        return file_values[key]
    return default


def _build_train_config(args, dataset_tag: str) -> TrainConfig:
    file_values = _read_config_file(args.config) if getattr(args, "config", None) else {}
    lam_default = 3.0 if dataset_tag == "sim" else 1.0
    lam = args.lambda_ if getattr(args, "lambda_", None) is not None else file_values.get("lambda", lam_default)
    scaling = _resolve(args, "encoder_scaling", file_values, EncoderScaling.ENERGY_CONSISTENT.value)
    return TrainConfig(
        m=_resolve(args, "m", file_values, 5),
        sigma=_resolve(args, "sigma", file_values, 0.5),
        lam=lam,
        eta=_resolve(args, "eta", file_values, 1e-3),
        decay_q=_resolve(args, "q", file_values, 0.9),
        max_epochs=_resolve(args, "epochs", file_values, 5000),
        patience=_resolve(args, "patience", file_values, 50),
        min_delta=_resolve(args, "min_delta", file_values, 1e-5),
        seed=_resolve(args, "base_seed", file_values, 0),
        encoder_scaling=EncoderScaling(scaling),
    )


def _add_train_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--m", type=int, help="hidden unit count (default 5)")
    parser.add_argument("--sigma", type=float, help="decoder width (default 0.5)")
    parser.add_argument("--lambda", dest="lambda_", type=float,
                        help="regularization weight (default 1, or 3 for the sim tag)")
    parser.add_argument("--eta", type=float, help="initial step size (default 0.001)")
    parser.add_argument("--q", type=float, help="per-epoch step decay (default 0.9)")
    parser.add_argument("--epochs", type=int, help="epoch budget (default 5000)")
    parser.add_argument("--patience", type=int, help="early-stop patience (default 50)")
    parser.add_argument("--min-delta", type=float, help="early-stop tolerance (default 1e-5)")
    parser.add_argument("--base-seed", type=int, help="base RNG seed (default 0)")
    parser.add_argument("--encoder-scaling", choices=[s.value for s in EncoderScaling],
                        help="encoder pre-activation convention")


def cmd_gen_simlin(args) -> int:
    spec = SimLinSpec(n_pairs=args.pairs, n_obs=args.obs, seed=args.seed)
    pairs = gen_simlin(spec)
    out = write_pairs(pairs, args.out_dir)
    print(f"wrote {len(pairs)} pairs of {spec.n_obs} observations to {out}")
    return 0


def _capacity_report(params: RbmParams, ranges: RangeBox, nodes: int) -> dict:
    report = {}
    for j, name in ((1, "x"), (2, "y")):
        grid = GridSpec.covering(ranges.interval(j), params.sigma, nodes)
        report[name] = estimation_capacity(params, j, grid)
    return report


def _print_decision(dec: Decision):
    print(f"gamma     {dec.gamma:.6g}")
    print(f"d_x       {dec.d_x:.6g}")
    print(f"d_y       {dec.d_y:.6g}")
    print(f"decision  {dec.direction.value}")


def cmd_train_pair(args) -> int:
    table = np.loadtxt(args.pair_file, ndmin=2)
    if table.shape[1] != 2:
        raise ValueError(f"{args.pair_file}: expected 2 columns, got {table.shape[1]}")
    config = _build_train_config(args, dataset_tag="cep")
    xy = np.column_stack([zscore(table[:, 0]), zscore(table[:, 1])])
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, args.round]))
    result = train(xy, config, rng)
    dec = gamma(result.params, result.ranges)
    _print_decision(dec)
    print(f"recon_error  {result.recon_error:.6g}")
    caps = _capacity_report(result.params, result.ranges, args.nodes)
    print(f"capacity_x   {caps['x']:.6g}")
    print(f"capacity_y   {caps['y']:.6g}")
    print(f"epochs_run   {result.epochs_run}")
    if args.save_params:
        _save_params(result.params, result.ranges, args.save_params)
        print(f"params saved to {args.save_params}")
    return 0


def _sig6(value: float) -> float:
    return float(f"{value:.6g}")


def _save_params(params: RbmParams, ranges: RangeBox, path: str):
    payload = {
        "weights": [[_sig6(v) for v in row] for row in params.weights],
        "vis_bias": [_sig6(v) for v in params.vis_bias],
        "hid_bias": [_sig6(v) for v in params.hid_bias],
        "sigma": _sig6(params.sigma),
        "ranges": {
            "lo": [_sig6(v) for v in ranges.lo],
            "hi": [_sig6(v) for v in ranges.hi],
        },
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _load_params(path: str) -> tuple[RbmParams, RangeBox]:
    payload = json.loads(Path(path).read_text())
    params = RbmParams(
        weights=np.array(payload["weights"], dtype=float),
        vis_bias=np.array(payload["vis_bias"], dtype=float),
        hid_bias=np.array(payload["hid_bias"], dtype=float),
        sigma=float(payload["sigma"]),
    )
    ranges = RangeBox(np.array(payload["ranges"]["lo"]), np.array(payload["ranges"]["hi"]))
    return params, ranges


def cmd_bench(args) -> int:
    dataset = args.dataset or _infer_dataset_tag(args.data_dir)
    config = _build_train_config(args, dataset_tag=dataset)
    pairs = load_pairs(args.data_dir, source=dataset)
    if not pairs:
        raise ValueError(f"no loadable pairs in {args.data_dir}")
    rounds = args.rounds if args.rounds is not None else 10
    try:
        summary = run_benchmark(
            pairs, args.method, config, n_rounds=rounds, dataset=dataset, jobs=args.jobs
        )
    except Exception as err:
        marker = {"partial": True, "dataset": dataset, "method": args.method, "error": str(err)}
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.json").write_text(json.dumps(marker, indent=2) + "\n")
        raise
    persist_results(summary, args.out_dir)
    print(format_summary(summary))
    return 0


def cmd_capacity(args) -> int:
    params, ranges = _load_params(args.params)
    caps = _capacity_report(params, ranges, args.nodes)
    dec = gamma(params, ranges)
    print(f"capacity_x  {caps['x']:.6g}")
    print(f"capacity_y  {caps['y']:.6g}")
    _print_decision(dec)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crbm",
        description="Bivariate causal direction inference via a mode-uniformity "
        "regularized Gaussian-Bernoulli RBM, with slope/entropy baselines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-simlin", help="generate a linear-mechanism pair dataset")
    gen.add_argument("--pairs", type=int, default=100)
    gen.add_argument("--obs", type=int, default=1000)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out-dir", required=True)
    gen.set_defaults(func=cmd_gen_simlin)

    tp = sub.add_parser("train-pair", help="train on one 2-column pair file and report the decision")
    tp.add_argument("pair_file")
    tp.add_argument("--round", type=int, default=0, help="round index mixed into the seed")
    tp.add_argument("--nodes", type=int, default=2001, help="capacity grid nodes")
    tp.add_argument("--save-params", help="write trained parameters (6 significant digits)")
    _add_train_flags(tp)
    tp.set_defaults(func=cmd_train_pair)

    bench = sub.add_parser("bench", help="run a benchmark over a pair dataset directory")
    bench.add_argument("--data-dir", required=True)
    bench.add_argument("--out-dir", default="results")
    bench.add_argument("--method", choices=("crbm", "igci1", "igci2"), default="crbm")
    bench.add_argument("--dataset", choices=_DATASET_TAGS,
                       help="dataset tag (default: inferred from the directory name)")
    bench.add_argument("--rounds", type=int, help="training rounds (default 10)")
    bench.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    _add_train_flags(bench)
    bench.set_defaults(func=cmd_bench)

    cap = sub.add_parser("capacity", help="capacity diagnostic for saved parameters")
    cap.add_argument("--params", required=True, help="params.json from train-pair --save-params")
    cap.add_argument("--nodes", type=int, default=2001)
    cap.set_defaults(func=cmd_capacity)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
