"""Command-line front end: one subcommand per pipeline stage.

Every subcommand prints a single JSON report to stdout so runs can be
logged and diffed.  Exit codes: 0 success, 1 usage error, 2 data error
(unreadable input, malformed file, empty corpus, and the like).  Any
subcommand that draws random numbers requires an explicit --seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import pipeline
from .bpe import SubwordModel, train_subword
from .errors import CloneforgeError
from .ingest import (
    build_identifier_vocab,
    ingest,
    read_corpus,
    write_corpus,
)
from .labels import LabelVocab, build_label_vocab, label_sequence
from .lang import parse
from .losses import (
    ContrastiveBatch,
    LossBreakdown,
    clr_loss,
    ltsp_loss,
    mlm_loss,
)
from .encoder import ToyConfig, ToyEncoder, toy_train
from .metrics import (
    RetrievalDataset,
    map_at_r,
    pca_project,
    read_embeddings,
    zero_shot_study,
)
from .sequences import MASK_RATE, MAX_LEN, encode, mask_for_mlm
from .sequences import read_sequences, write_sequences

_DATA_ERRORS = (OSError, ValueError, KeyError, CloneforgeError)


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def _languages(raw: str) -> tuple:
    parts = tuple(p.strip() for p in raw.split(",") if p.strip())
    if not parts:
        raise ValueError("no languages given")
    return parts


def _load_run_config(args) -> pipeline.RunConfig:
    """Config file (if any) with the command line's --seed laid on top."""
    cfg = pipeline.load_config(args.config) if args.config else pipeline.RunConfig()
    return dataclasses.replace(cfg, seed=args.seed)


def _corpus_functions(path):
    return [entry.to_function() for entry in read_corpus(path)]


# ---------------------------------------------------------------- stages


def _cmd_ingest(args) -> int:
    entries, manifest = ingest(args.root, _languages(args.languages))
    write_corpus(args.corpus, entries)
    if args.manifest:
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(manifest.to_json())
    _emit({
        "corpus": args.corpus,
        "functions": len(entries),
        "identifier_vocab_size": manifest.identifier_vocab_size,
        "manifest_digest": manifest.digest(),
        "skipped": {reason: count for reason, count in manifest.skipped},
    })
    return 0


def _cmd_vocab(args) -> int:
    ranked = build_identifier_vocab(_corpus_functions(args.corpus))
    lines = [f"{name}\t{count}" for name, count in ranked]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + ("\n" if lines else ""))
    else:
        for line in lines:
            print(line)
        return 0
    _emit({"identifiers": len(ranked), "out": args.out})
    return 0


def _cmd_augment(args) -> int:
    entries = read_corpus(args.corpus)
    records, skips = pipeline.augment_corpus(entries, args.seed)
    pipeline.write_triplets(args.out, records)
    total = len(entries)
    _emit({
        "seed": args.seed,
        "functions": total,
        "triplets": len(records),
        "skips": skips,
        "skip_rates": {
            reason: count / total for reason, count in sorted(skips.items())
        },
        "out": args.out,
    })
    return 0


def _cmd_labels(args) -> int:
    vocab = build_label_vocab(_corpus_functions(args.corpus))
    vocab.save(args.out)
    _emit({"labels": len(vocab), "out": args.out})
    return 0


def _cmd_tokenizer_train(args) -> int:
    streams = [
        [t.text for t in parse(fn).terminals()]
        for fn in _corpus_functions(args.corpus)
    ]
    model = train_subword(streams, args.vocab_size)
    model.save(args.out)
    _emit({
        "target_vocab": args.vocab_size,
        "subword_vocab": model.vocab_size,
        "total_vocab": len(model),
        "corpus_sha256": model.corpus_sha256,
        "out": args.out,
    })
    return 0


def _cmd_encode(args) -> int:
    model = SubwordModel.load(args.model)
    vocab = LabelVocab.load(args.labels)
    seqs = []
    truncated = 0
    for fn in _corpus_functions(args.corpus):
        root = parse(fn)
        tokens = [t.text for t in root.terminals()]
        label_ids = vocab.encode(label_sequence(root))
        seq = encode(model, tokens, label_ids, max_len=args.max_len)
        truncated += int(seq.truncated)
        seqs.append(seq)
    write_sequences(args.out, seqs)
    _emit({
        "sequences": len(seqs),
        "truncated": truncated,
        "max_len": args.max_len,
        "out": args.out,
    })
    return 0


def _cmd_mask(args) -> int:
    seqs = read_sequences(args.sequences)
    masked = [
        mask_for_mlm(seq, pipeline.derive_seed(args.seed, "mask", str(i)),
                     rate=args.rate)
        for i, seq in enumerate(seqs)
    ]
    write_sequences(args.out, masked)
    _emit({
        "seed": args.seed,
        "rate": args.rate,
        "sequences": len(masked),
        "masked_positions": sum(len(s.mask_positions) for s in masked),
        "out": args.out,
    })
    return 0


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _cmd_loss_check(args) -> int:
    """Compute all three objectives on seeded random inputs.

    A smoke check that the loss plumbing and the weighted combination
    behave, with the full default configuration echoed for the record.
    """
    cfg = _load_run_config(args)
    rng = np.random.default_rng(args.seed)
    cases = []
    for _ in range(args.cases):
        length = int(rng.integers(3, 9))
        token_dists = _softmax_rows(rng.standard_normal((length, 40)))
        token_ids = rng.integers(0, 40, length)
        label_dists = _softmax_rows(rng.standard_normal((length, 12)))
        label_ids = rng.integers(4, 12, length)  # past the frame ids
        n = int(rng.integers(2, 6))
        batch = ContrastiveBatch(
            anchors=rng.standard_normal((n, 8)),
            positives=rng.standard_normal((n, 8)),
            negatives=rng.standard_normal((n, 8)),
            tau=cfg.tau,
        )
        _, clr = clr_loss(batch)
        breakdown = LossBreakdown(
            mlm=mlm_loss(token_dists, token_ids),
            ltsp=ltsp_loss(label_dists, label_ids),
            clr=clr,
            lambdas=cfg.lambdas,
        )
        cases.append({
            "mlm": breakdown.mlm,
            "ltsp": breakdown.ltsp,
            "clr": breakdown.clr,
            "combined": breakdown.combined,
        })
    _emit({
        "config": cfg.echo(),
        "seed": args.seed,
        "cases": cases,
        "combined_mean": sum(c["combined"] for c in cases) / len(cases),
    })
    return 0


def _cmd_train_toy(args) -> int:
    records = pipeline.read_triplets(args.triplets)
    model = SubwordModel.load(args.model)
    triples = pipeline.record_id_triples(records, model)
    toy_cfg = ToyConfig(
        vocab_size=len(model),
        d=args.d,
        steps=args.steps,
        lr=args.lr,
        batch=args.batch,
        seed=pipeline.derive_seed(args.seed, "toy"),
        tau=args.tau,
    )
    enc = toy_train(triples, toy_cfg)
    enc.save(args.out)
    if args.curve:
        enc.save_curve(args.curve)
    _emit({
        "seed": args.seed,
        "triplets": len(triples),
        "steps": len(enc.curve),
        "final_loss": enc.curve[-1][1],
        "d": args.d,
        "out": args.out,
    })
    return 0


def _cmd_eval_map(args) -> int:
    items = read_embeddings(args.embeddings)
    value = map_at_r(RetrievalDataset(items=tuple(items), r=args.r))
    _emit({"items": len(items), "r": args.r, "map_at_r": value})
    return 0


def _cmd_eval_zeroshot(args) -> int:
    records = pipeline.read_triplets(args.triplets)
    model = SubwordModel.load(args.model)
    enc = ToyEncoder.load(args.encoder)
    triples = pipeline.record_id_triples(records, model)
    study = zero_shot_study(enc.embed, triples, min_triplets=args.min_triplets)
    _emit({
        "triplets": len(triples),
        "avg_clone_sim": study.avg_clone_sim,
        "avg_deviant_sim": study.avg_deviant_sim,
        "avg_random_sim": study.avg_random_sim,
        "top1_counts": dict(study.top1_counts),
    })
    return 0


def _cmd_pca(args) -> int:
    items = read_embeddings(args.embeddings)
    coords, ratios = pca_project([vec for _, vec, _ in items], k=args.k)
    with open(args.out, "w", encoding="utf-8") as fh:
        axes = ",".join(f"c{i}" for i in range(args.k))
        fh.write(f"id,group,{axes}\n")
        for (item_id, _, group), row in zip(items, coords):
            vals = ",".join(f"{v:.10g}" for v in row)
            fh.write(f"{item_id},{group},{vals}\n")
    _emit({
        "items": len(items),
        "k": args.k,
        "explained_variance": [float(r) for r in ratios[:args.k]],
        "out": args.out,
    })
    return 0


def _cmd_end_to_end(args) -> int:
    cfg = _load_run_config(args)
    report = pipeline.end_to_end(args.root, cfg, holdout=args.holdout)
    text = pipeline.report_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="cloneforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = command("ingest", _cmd_ingest,
                "Extract deduplicated functions from source trees.")
    p.add_argument("--root", action="append", required=True,
                   help="source tree root (repeatable)")
    p.add_argument("--languages", default="c,cpp,java",
                   help="comma-separated subset of c,cpp,java")
    p.add_argument("--corpus", required=True, help="output corpus JSONL")
    p.add_argument("--manifest", help="optional manifest JSON path")

    p = command("vocab", _cmd_vocab,
                "Rank identifier names in a corpus by frequency.")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", help="write name<TAB>count lines here instead of stdout")

    p = command("augment", _cmd_augment,
                "Build (original, clone, deviant) triplets from a corpus.")
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output triplets JSONL")

    p = command("labels", _cmd_labels,
                "Build the terminal#parent label vocabulary for a corpus.")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)

    p = command("tokenizer-train", _cmd_tokenizer_train,
                "Train the subword tokenizer on a corpus.")
    p.add_argument("--corpus", required=True)
    p.add_argument("--vocab-size", type=int, default=pipeline.DEFAULT_VOCAB_SIZE)
    p.add_argument("--out", required=True)

    p = command("encode", _cmd_encode,
                "Encode corpus functions into framed sub-token sequences.")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True, help="trained tokenizer file")
    p.add_argument("--labels", required=True, help="label vocabulary file")
    p.add_argument("--max-len", type=int, default=MAX_LEN)
    p.add_argument("--out", required=True)

    p = command("mask", _cmd_mask,
                "Apply masking to encoded sequences for reconstruction training.")
    p.add_argument("--sequences", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rate", type=float, default=MASK_RATE)
    p.add_argument("--out", required=True)

    p = command("loss-check", _cmd_loss_check,
                "Evaluate the three objectives on seeded random inputs.")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--cases", type=int, default=5)
    p.add_argument("--config", help="optional run-config file")

    p = command("train-toy", _cmd_train_toy,
                "Train the small contrastive encoder on triplets.")
    p.add_argument("--triplets", required=True)
    p.add_argument("--model", required=True, help="trained tokenizer file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--d", type=int, default=64)
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--curve", help="optional loss-curve JSON path")
    p.add_argument("--out", required=True, help="encoder weights file")

    p = command("eval-map", _cmd_eval_map,
                "Score stored embeddings with mean average precision at r.")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--r", type=int, default=1)

    p = command("eval-zeroshot", _cmd_eval_zeroshot,
                "Similarity study of originals vs clones, deviants, and others.")
    p.add_argument("--triplets", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--encoder", required=True)
    p.add_argument("--min-triplets", type=int, default=1)

    p = command("pca", _cmd_pca,
                "Project stored embeddings to k principal components (CSV).")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--out", required=True)

    p = command("end-to-end", _cmd_end_to_end,
                "Run ingest, augment, tokenize, train, and evaluate in one go.")
    p.add_argument("--root", action="append", required=True,
                   help="source tree root (repeatable)")
    p.add_argument("--seed", type=int, required=True,
                   help="master seed (overrides the config file's)")
    p.add_argument("--config", help="key=value run-config file")
    p.add_argument("--holdout", type=int, help="held-out triplet count")
    p.add_argument("--out", help="also write the report JSON here")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"cloneforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
