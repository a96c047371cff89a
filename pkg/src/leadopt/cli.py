"""Command-line interface.

Subcommands: prep (dataset -> pools), train (ensemble + cross-validation
report), campaign run|resume|report, eval (metrics on a SMILES file),
serve (HTTP API), and modify (one-shot interactive modification).
"""

from __future__ import annotations

import argparse
import json
import sys
import uuid
from pathlib import Path

from leadopt.campaign import CampaignState, eval_batch, run_campaign
from leadopt.config import load_config
from leadopt.data import prepare_pools
from leadopt.errors import LeadoptError
from leadopt.features import build_fragment_vocabulary
from leadopt.generation import modify_molecule
from leadopt.generation.parsing import GeneratedBatch, classify_smiles
from leadopt.molgraph import parse_smiles
from leadopt.qsar import GbtParams, cross_validate, train_ensemble
from leadopt.service.store import Store


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leadopt",
        description="Iterative many-shot lead-optimization platform",
    )
    parser.add_argument("--data-dir", default="leadopt-data",
                        help="root directory for datasets, campaigns, sessions")
    parser.add_argument("--config", default=None,
                        help="JSON campaign/backend configuration file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the configured random seed")
    sub = parser.add_subparsers(dest="command", required=True)

    prep = sub.add_parser("prep", help="load a dataset and build its pools")
    prep.add_argument("--input", required=True, help="CSV file (smiles,activity,...)")
    prep.add_argument("--target", required=True, help="dataset/target name")
    prep.add_argument("--threshold", type=float, default=0.65,
                      help="clustering similarity threshold")
    prep.add_argument("--min-activity", type=float, default=None)

    train = sub.add_parser("train", help="train the ensemble and cross-validate")
    train.add_argument("--dataset", required=True)
    train.add_argument("--folds", type=int, default=10)

    camp = sub.add_parser("campaign", help="run, resume, or report a campaign")
    camp.add_argument("action", choices=["run", "resume", "report"])
    camp.add_argument("--dataset", default=None)
    camp.add_argument("--id", default=None)
    camp.add_argument("--iterations", type=int, default=None)
    camp.add_argument("--format", choices=["json", "csv"], default="json",
                      help="report output format")

    ev = sub.add_parser("eval", help="evaluate a SMILES file against a dataset")
    ev.add_argument("--input", required=True, help="text file, one SMILES per line")
    ev.add_argument("--dataset", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    mod = sub.add_parser("modify", help="one-shot molecule modification")
    mod.add_argument("--smiles", required=True)
    mod.add_argument("--instruction", required=True)
    return parser


def _cmd_prep(args) -> int:
    store = Store(args.data_dir)
    from leadopt.data import load_dataset

    ds = load_dataset(args.input, args.target, min_activity=args.min_activity)
    for line_no, message in ds.row_errors:
        print(f"row {line_no}: {message}", file=sys.stderr)
    prepare_pools(ds, threshold=args.threshold)
    store.save_dataset(ds)
    print(f"dataset {args.target}: {len(ds.records)} records "
          f"({len(ds.row_errors)} rows rejected)")
    print(f"pools: best20={len(ds.best20)} pool50={len(ds.pool50)} "
          f"allminus20={len(ds.allminus20)}")
    return 0


def _cmd_train(args, config) -> int:
    store = Store(args.data_dir)
    ds = store.load_dataset(args.dataset, min_activity=None)
    mols = [parse_smiles(r.smiles) for r in ds.records]
    labels = [r.activity for r in ds.records]
    vocab = build_fragment_vocabulary(
        mols,
        radius=config.vocab_radius,
        dim=config.vocab_dim,
        seed=config.seed,
        epochs=config.vocab_epochs,
    )
    ens = train_ensemble(mols, labels, vocab, config.gbt)
    vocab.save(store.root / "datasets" / f"{args.dataset}.vocab.json")
    ens.save(store.root / "datasets" / f"{args.dataset}.ensemble.json")
    reports = cross_validate(mols, labels, vocab, config.gbt,
                             folds=args.folds, seed=config.seed)
    print(f"{args.dataset}: {len(mols)} molecules, {args.folds}-fold CV")
    print(f"{'view':<12} {'R2':>8} {'RMSE':>8}")
    for view, report in reports.items():
        print(f"{view:<12} {report.mean_r2:>8.4f} {report.mean_rmse:>8.4f}")
    return 0


def _cmd_campaign(args, config) -> int:
    store = Store(args.data_dir)
    if args.action == "report":
        if not args.id:
            print("campaign report needs --id", file=sys.stderr)
            return 2
        handle = store.get_campaign(args.id)
        print(f"campaign {handle.id}: {handle.status}")
        reports = store.campaign_reports(args.id)
        if args.format == "csv":
            columns = ("iteration", "cutoff", "generated", "valid", "unique",
                       "novel", "accepted", "context_size",
                       "internal_diversity", "frechet_to_lead")
            print(",".join(columns))
            for r in reports:
                print(",".join("" if r.get(c) is None else str(r[c]) for c in columns))
        else:
            for r in reports:
                print(json.dumps(r))
        return 0

    if args.action == "run":
        if not args.dataset:
            print("campaign run needs --dataset", file=sys.stderr)
            return 2
        if args.iterations is not None:
            from dataclasses import replace

            config = replace(config, max_iterations=args.iterations)
        campaign_id = args.id or uuid.uuid4().hex[:12]
        ds = store.load_dataset(args.dataset, min_activity=None)
        store.create_campaign(campaign_id, args.dataset, config.to_dict())
        store.set_campaign_status(campaign_id, "running")
        try:
            reports, ctx = run_campaign(
                ds, config, state_dir=store.campaign_dir(campaign_id)
            )
            store.set_campaign_status(campaign_id, "finished")
        except Exception as exc:
            store.set_campaign_status(campaign_id, "failed", error=str(exc))
            raise
    else:  # resume
        if not args.id:
            print("campaign resume needs --id", file=sys.stderr)
            return 2
        campaign_id = args.id
        handle = store.get_campaign(campaign_id)
        state = CampaignState.load(store.campaign_dir(campaign_id))
        ds = store.load_dataset(handle.dataset, min_activity=None)
        store.set_campaign_status(campaign_id, "running")
        try:
            reports, ctx = run_campaign(
                ds, state.config,
                state_dir=store.campaign_dir(campaign_id),
                resume=True,
            )
            store.set_campaign_status(campaign_id, "finished")
        except Exception as exc:
            store.set_campaign_status(campaign_id, "failed", error=str(exc))
            raise

    print(f"campaign {campaign_id}: {len(reports)} iterations, "
          f"context {len(ctx)} molecules")
    for r in reports:
        print(f"  iter {r.iteration}: cutoff {r.cutoff:.3f} "
              f"generated {r.generated} accepted {r.accepted} "
              f"context {r.context_size}")
    return 0


def _cmd_eval(args, config) -> int:
    store = Store(args.data_dir)
    ds = store.load_dataset(args.dataset, min_activity=None)
    lines = [
        line.strip() for line in Path(args.input).read_text().splitlines()
        if line.strip() and not line.startswith("#")
    ]
    batch = GeneratedBatch(raw_response="(file input)")
    seen: set[str] = set()
    for smiles in lines:
        mol = classify_smiles(smiles)
        if mol.canonical is not None:
            if mol.canonical in seen:
                mol.duplicate = True
            seen.add(mol.canonical)
        batch.molecules.append(mol)

    mols = [parse_smiles(r.smiles) for r in ds.records]
    vocab = build_fragment_vocabulary(
        mols, radius=config.vocab_radius, dim=config.vocab_dim,
        seed=config.seed, epochs=config.vocab_epochs,
    )
    lead = [parse_smiles(r.smiles) for r in ds.pool_records("pool50")] \
        if ds.pools_ready else mols[:50]
    metrics = eval_batch(batch, {r.smiles for r in ds.records}, lead, vocab)
    for key, value in metrics.to_dict().items():
        rendered = "n/a" if value is None else f"{value:.4f}"
        print(f"{key:<22} {rendered}")
    return 0


def _cmd_serve(args, config) -> int:
    from leadopt.service import serve

    serve(args.data_dir, host=args.host, port=args.port, backend=config.backend)
    return 0


def _cmd_modify(args, config) -> int:
    store = Store(args.data_dir)
    vocab = store.default_vocabulary()
    result = modify_molecule(
        config.backend, args.smiles, args.instruction, fragment_stats=vocab,
    )
    print(json.dumps(result.to_dict(), indent=2))
    return 0 if result.valid else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config, seed=args.seed)
        if args.command == "prep":
            return _cmd_prep(args)
        if args.command == "train":
            return _cmd_train(args, config)
        if args.command == "campaign":
            return _cmd_campaign(args, config)
        if args.command == "eval":
            return _cmd_eval(args, config)
        if args.command == "serve":
            return _cmd_serve(args, config)
        if args.command == "modify":
            return _cmd_modify(args, config)
        raise AssertionError(f"unhandled command {args.command}")
    except LeadoptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
