"""Command-line experiment driver.

Subcommands: gen-data, train, sample, eval, sweep. Every command takes
--config/--seed/--out; each output directory receives a manifest that is
sufficient to re-run the producing command bit-identically.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O error.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import config as cfgmod
from . import data as datamod
from .denoiser import GcnnDenoiser, TrainConfig, load_checkpoint, save_checkpoint, train
from .errors import NumericalError, ValidationError
from .graphs import Spectrum, generate_sbm, generate_smooth_signals, sbm_communities
from .metrics import evaluate
from .sampling import SamplerConfig, TweedieScore, euler_maruyama_reverse

# Seed-stream tags: every purpose draws from default_rng([seed, tag, ...]).
_SEED_GRAPH = 0
_SEED_TRAIN_SIGNALS = 1
_SEED_TEST_SIGNALS = 2
_SEED_TRAIN = 3
_SEED_SAMPLE = 4


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _write_manifest(out_dir, command, cfg, extra=None):
    doc = {"command": command, "config": cfg}
    if extra:
        doc.update(extra)
    _write_json(os.path.join(out_dir, "manifest.json"), doc)


def resolve_dataset(cfg):
    """Materialize (graph, communities, train_signals, test_signals) per config.

    SBM sources are regenerated deterministically from the seed, so a config
    alone pins the entire dataset; CSV sources are loaded from disk.
    """
    gcfg = cfg["graph"]
    seed = cfg["seed"]
    if gcfg["source"] == "sbm":
        graph = generate_sbm(
            gcfg["nodes_per_community"],
            gcfg["num_communities"],
            gcfg["p_in"],
            gcfg["p_out"],
            seed=[seed, _SEED_GRAPH],
        )
        communities = sbm_communities(gcfg["nodes_per_community"], gcfg["num_communities"])
        tau = cfg["dataset"]["tau"]
        train_signals = generate_smooth_signals(
            graph, communities, cfg["dataset"]["num_train"],
            seed=[seed, _SEED_TRAIN_SIGNALS], tau=tau,
        )
        test_signals = generate_smooth_signals(
            graph, communities, cfg["dataset"]["num_test"],
            seed=[seed, _SEED_TEST_SIGNALS], tau=tau,
        )
        return graph, communities, train_signals, test_signals
    graph = datamod.load_adjacency_csv(gcfg["adjacency"])
    train_signals = datamod.load_signals_csv(gcfg["train_signals"])
    test_signals = datamod.load_signals_csv(gcfg["test_signals"])
    for name, sig in (("train_signals", train_signals), ("test_signals", test_signals)):
        if sig.shape[1] != graph.num_nodes:
            raise ValidationError(
                f"graph.{name}: {sig.shape[1]} nodes but adjacency has {graph.num_nodes}"
            )
    communities = (
        datamod.load_community_csv(gcfg["community"]) if gcfg.get("community") else None
    )
    return graph, communities, train_signals, test_signals


def cmd_gen_data(cfg):
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    graph, communities, train_signals, test_signals = resolve_dataset(cfg)
    datamod.save_adjacency_csv(os.path.join(out, "adjacency.csv"), graph)
    datamod.save_signals_csv(os.path.join(out, "train_signals.csv"), train_signals)
    datamod.save_signals_csv(os.path.join(out, "test_signals.csv"), test_signals)
    if communities is not None:
        datamod.save_community_csv(os.path.join(out, "communities.csv"), communities)
    _write_manifest(out, "gen-data", cfg, {"graph_hash": datamod.adjacency_hash(graph)})
    print(f"wrote dataset to {out}")
    return 0


def _train_one(cfg, spectrum, graph_hash, train_signals, method, seed_tag, out_dir):
    process = cfgmod.build_process(cfg, spectrum, method)
    dcfg = cfg["denoiser"]
    tcfg = cfg["train"]
    denoiser = GcnnDenoiser(
        spectrum,
        num_layers=dcfg["num_layers"],
        filter_order=dcfg["filter_order"],
        hidden_width=dcfg["hidden_width"],
        horizon=process.horizon,
        seed=np.random.SeedSequence([cfg["seed"], _SEED_TRAIN, seed_tag, 0]),
    )
    train_config = TrainConfig(
        learning_rate=tcfg["learning_rate"],
        num_iterations=tcfg["num_iterations"],
        batch_size=tcfg["batch_size"],
        momentum=tcfg["momentum"],
        seed=np.random.SeedSequence([cfg["seed"], _SEED_TRAIN, seed_tag, 1]),
    )
    _, trace = train(denoiser, train_signals, process, train_config)
    os.makedirs(out_dir, exist_ok=True)
    ckpt_path = os.path.join(out_dir, "checkpoint.json")
    save_checkpoint(ckpt_path, denoiser, process, graph_hash)
    with open(os.path.join(out_dir, "loss_trace.csv"), "w") as fh:
        fh.write("iteration,loss\n")
        for i, v in enumerate(trace):
            fh.write(f"{i},{v:.17g}\n")
    return ckpt_path, denoiser, process, trace


def cmd_train(cfg):
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    graph, _, train_signals, _ = resolve_dataset(cfg)
    spectrum = Spectrum.from_graph(graph)
    graph_hash = datamod.adjacency_hash(
        cfg["graph"]["adjacency"] if cfg["graph"]["source"] == "csv" else graph
    )
    method = cfg["method"]
    _, _, _, trace = _train_one(cfg, spectrum, graph_hash, train_signals, method, 0, out)
    _write_manifest(out, "train", cfg, {"graph_hash": graph_hash, "method": method})
    print(f"trained {method}: final loss {trace[-1]:.6g} (see {out})")
    return 0


def _sample_batch(cfg, process, denoiser, num_samples, steps, seed_list):
    score = TweedieScore(process, denoiser, t_floor_frac=cfg["sampler"]["t_floor_frac"])
    sampler_config = SamplerConfig(
        num_steps=steps,
        seed=seed_list,
        final_denoise=cfg["sampler"]["final_denoise"],
        t_floor_frac=cfg["sampler"]["t_floor_frac"],
    )
    return euler_maruyama_reverse(process, score, sampler_config, num_samples=num_samples)


def cmd_sample(cfg, checkpoint_path, num_samples, steps):
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    graph, _, _, _ = resolve_dataset(cfg)
    spectrum = Spectrum.from_graph(graph)
    graph_hash = datamod.adjacency_hash(
        cfg["graph"]["adjacency"] if cfg["graph"]["source"] == "csv" else graph
    )
    denoiser, process = load_checkpoint(checkpoint_path, spectrum, graph_hash)
    signals = _sample_batch(
        cfg, process, denoiser, num_samples, steps, [cfg["seed"], _SEED_SAMPLE, steps]
    )
    datamod.save_signals_csv(os.path.join(out, "generated_signals.csv"), signals)
    _write_json(
        os.path.join(out, "sample_metadata.json"),
        {
            "checkpoint": os.path.abspath(checkpoint_path),
            "graph_hash": graph_hash,
            "method": process.method,
            "num_samples": num_samples,
            "num_steps": steps,
            "seed": cfg["seed"],
        },
    )
    _write_manifest(out, "sample", cfg, {"num_samples": num_samples, "num_steps": steps})
    print(f"wrote {num_samples} samples ({steps} steps) to {out}")
    return 0


def cmd_eval(generated_csv, test_csv, adjacency_csv, out_dir, method="", num_steps=None):
    graph = datamod.load_adjacency_csv(adjacency_csv)
    spectrum = Spectrum.from_graph(graph)
    generated = datamod.load_signals_csv(generated_csv)
    test = datamod.load_signals_csv(test_csv)
    for name, sig in (("generated", generated), ("test", test)):
        if sig.shape[1] != graph.num_nodes:
            raise ValidationError(
                f"{name} signals have {sig.shape[1]} nodes, adjacency has {graph.num_nodes}"
            )
    report = evaluate(generated, test, spectrum, method=method, num_steps=num_steps)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "metrics.json"), "w") as fh:
            fh.write(report.to_json())
    print(f"ammd {report.ammd:.17g}")
    return 0


def cmd_sweep(cfg):
    out = cfg["out_dir"]
    os.makedirs(out, exist_ok=True)
    graph, _, train_signals, test_signals = resolve_dataset(cfg)
    spectrum = Spectrum.from_graph(graph)
    graph_hash = datamod.adjacency_hash(
        cfg["graph"]["adjacency"] if cfg["graph"]["source"] == "csv" else graph
    )
    steps_list = cfgmod.step_counts(cfg)
    rows = []
    for mi, method in enumerate(cfg["methods"]):
        method_dir = os.path.join(out, method)
        # One checkpoint per method, reused across step counts: the denoiser
        # is step-count-agnostic.
        _, denoiser, process, _ = _train_one(
            cfg, spectrum, graph_hash, train_signals, method, mi, method_dir
        )
        for steps in steps_list:
            cell_dir = os.path.join(method_dir, f"s{steps}")
            os.makedirs(cell_dir, exist_ok=True)
            signals = _sample_batch(
                cfg, process, denoiser, cfg["sampler"]["num_samples"], steps,
                [cfg["seed"], _SEED_SAMPLE, mi, steps],
            )
            datamod.save_signals_csv(os.path.join(cell_dir, "generated_signals.csv"), signals)
            report = evaluate(signals, test_signals, spectrum, method=method.upper(),
                              num_steps=steps)
            with open(os.path.join(cell_dir, "metrics.json"), "w") as fh:
                fh.write(report.to_json())
            rows.append((method, steps, report))
    sweep_path = os.path.join(out, "sweep.csv")
    with open(sweep_path, "w") as fh:
        fh.write("method,steps,qv_mmd,sc_mmd,dc_mmd,ammd\n")
        for method, steps, report in rows:
            dc = "" if report.dc_mmd is None else f"{report.dc_mmd:.17g}"
            fh.write(
                f"{method},{steps},{report.qv_mmd:.17g},{report.sc_mmd:.17g},"
                f"{dc},{report.ammd:.17g}\n"
            )
    _write_manifest(out, "sweep", cfg, {"graph_hash": graph_hash})
    print(f"wrote {len(rows)} sweep rows to {sweep_path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="graphdiff",
        description="Graph-aware generative diffusion for signals on a fixed graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--out", help="override the output directory")

    common(sub.add_parser("gen-data", help="synthesize an SBM dataset and write CSVs"))
    p_train = sub.add_parser("train", help="train a denoiser; writes checkpoint + loss trace")
    common(p_train)
    p_train.add_argument("--method", choices=cfgmod.METHODS, help="override config method")
    p_sample = sub.add_parser("sample", help="generate signals from a checkpoint")
    common(p_sample)
    p_sample.add_argument("--checkpoint", required=True)
    p_sample.add_argument("--num-samples", type=int, default=100)
    p_sample.add_argument("--steps", type=int, required=True)
    p_eval = sub.add_parser("eval", help="compare generated vs test signal sets")
    common(p_eval)
    p_eval.add_argument("--generated", required=True)
    p_eval.add_argument("--test", required=True)
    p_eval.add_argument("--adjacency", required=True)
    common(sub.add_parser("sweep", help="train/sample/eval over methods x step counts"))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        overrides = {"seed": args.seed, "out_dir": args.out}
        if getattr(args, "method", None):
            overrides["method"] = args.method
        cfg = cfgmod.load_config(args.config, overrides)
        if args.command == "gen-data":
            return cmd_gen_data(cfg)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "sample":
            return cmd_sample(cfg, args.checkpoint, args.num_samples, args.steps)
        if args.command == "eval":
            return cmd_eval(args.generated, args.test, args.adjacency, args.out)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        raise ValidationError(f"unknown command {args.command!r}")
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
