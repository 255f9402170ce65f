"""End-to-end orchestration: corpus -> triplets -> encoder -> metrics.

Every stage is seeded from one master seed; per-item seeds are derived
by hashing (master, role, item id), so results never depend on corpus
order, machine, or process.  The end-to-end report is a pure function
of (corpus bytes, config) except for its timestamp, which lives in a
dedicated field so reruns can be compared byte for byte without it.
"""

from __future__ import annotations

import datetime
import hashlib
import json
import random
from dataclasses import dataclass, field

from .bpe import train_subword
from .clones import generate_clone
from .deviants import generate_deviant
from .encoder import ToyConfig, toy_train
from .errors import NoApplicableBug, NoApplicableTransform, ParseError
from .ingest import ingest
from .labels import build_label_vocab, label_sequence
from .lang import SourceFunction, parse
from .losses import DEFAULT_LAMBDAS, DEFAULT_TAU
from .metrics import RetrievalDataset, map_at_r, zero_shot_study
from .sequences import MASK_RATE, MAX_LEN, encode, mask_for_mlm

DEFAULT_VOCAB_SIZE = 50000


@dataclass(frozen=True)
class ToySettings:
    d: int = 64
    steps: int = 300
    lr: float = 0.05
    batch: int = 32


@dataclass(frozen=True)
class RunConfig:
    """One run's knobs; the defaults are the reference settings."""

    seed: int = 0
    languages: tuple = ("c", "cpp", "java")
    vocab_size: int = DEFAULT_VOCAB_SIZE
    max_len: int = MAX_LEN
    mask_rate: float = MASK_RATE
    tau: float = DEFAULT_TAU
    lambdas: tuple = DEFAULT_LAMBDAS
    toy: ToySettings = field(default_factory=ToySettings)

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.vocab_size < 1 or self.max_len < 3:
            raise ValueError("vocab_size and max_len must be positive")
        if not 0.0 <= self.mask_rate < 1.0:
            raise ValueError("mask_rate must lie in [0, 1)")
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        if len(self.lambdas) != 3:
            raise ValueError("exactly three loss weights expected")

    def echo(self) -> dict:
        """Flat mapping of every knob, defaults included, for reports."""
        return {
            "seed": self.seed,
            "languages": ",".join(self.languages),
            "vocab_size": self.vocab_size,
            "max_len": self.max_len,
            "mask_rate": self.mask_rate,
            "tau": self.tau,
            "lambda1": self.lambdas[0],
            "lambda2": self.lambdas[1],
            "lambda3": self.lambdas[2],
            "toy_d": self.toy.d,
            "toy_steps": self.toy.steps,
            "toy_lr": self.toy.lr,
            "toy_batch": self.toy.batch,
        }


_CONFIG_PARSERS = {
    "seed": int,
    "languages": lambda v: tuple(p.strip() for p in v.split(",") if p.strip()),
    "vocab_size": int,
    "max_len": int,
    "mask_rate": float,
    "tau": float,
    "lambda1": float,
    "lambda2": float,
    "lambda3": float,
    "toy_d": int,
    "toy_steps": int,
    "toy_lr": float,
    "toy_batch": int,
}


def parse_config(text: str) -> RunConfig:
    """key=value lines; blank lines and # comments ignored.

    Unknown keys are rejected so a typo cannot silently fall back to a
    default.  Any key left out keeps its default.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_PARSERS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _CONFIG_PARSERS[key](val.strip())

    toy = ToySettings(
        d=values.pop("toy_d", ToySettings.d),
        steps=values.pop("toy_steps", ToySettings.steps),
        lr=values.pop("toy_lr", ToySettings.lr),
        batch=values.pop("toy_batch", ToySettings.batch),
    )
    lambdas = (
        values.pop("lambda1", DEFAULT_LAMBDAS[0]),
        values.pop("lambda2", DEFAULT_LAMBDAS[1]),
        values.pop("lambda3", DEFAULT_LAMBDAS[2]),
    )
    return RunConfig(toy=toy, lambdas=lambdas, **values)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def derive_seed(master: int, role: str, item_id: str = "") -> int:
    """Stable 63-bit seed for one (role, item) under a master seed."""
    digest = hashlib.sha256(f"{master}:{role}:{item_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class VariantView:
    """One triplet member, parsed and labeled.

    provenance is empty for originals; clones carry their transform
    trail and deviants the planted bug, both in rendered form.
    """

    text: str
    tokens: tuple
    label_ids: tuple
    provenance: tuple = ()
    seed: int = 0


@dataclass(frozen=True)
class TripletRecord:
    id: str
    language: str
    original: VariantView
    clone: VariantView
    deviant: VariantView
    seed: int


def _view(fn: SourceFunction, label_vocab, provenance=(), seed: int = 0) -> VariantView:
    root = parse(fn)
    terms = list(root.terminals())
    return VariantView(
        text=fn.text,
        tokens=tuple(t.text for t in terms),
        label_ids=tuple(label_vocab.encode(label_sequence(root))),
        provenance=tuple(provenance),
        seed=seed,
    )


def _clone_provenance(result) -> tuple:
    return tuple(
        f"{kind.value}@[{span[0]},{span[1]}):{detail}"
        for kind, span, detail in result.applied
    )


def _deviant_provenance(result) -> tuple:
    kind, span, before, after = result.bug
    return (f"{kind.value}@[{span[0]},{span[1]}):{before!r}->{after!r}",)


def augment_corpus(entries, seed: int, label_vocab=None):
    """One TripletRecord per function that admits both augmentations.

    Returns (records, skips); skips counts each rejected function under
    the exception class that rejected it, so successes plus skips always
    partition the input.
    """
    functions = [
        e.to_function() if hasattr(e, "to_function") else e for e in entries
    ]
    if label_vocab is None:
        label_vocab = build_label_vocab(functions)
    records = []
    skips = {}

    def skip(reason: str):
        skips[reason] = skips.get(reason, 0) + 1

    for fn in functions:
        try:
            original = _view(fn, label_vocab)
            clone = generate_clone(fn, derive_seed(seed, "clone", fn.id))
            deviant = generate_deviant(fn, derive_seed(seed, "deviant", fn.id))
        except (NoApplicableTransform, NoApplicableBug, ParseError) as exc:
            skip(type(exc).__name__)
            continue
        if clone.text == deviant.text:
            # transforms are independent draws; a collision is possible
            # in principle and must not produce a contradictory triplet
            skip("DegenerateTriplet")
            continue
        records.append(
            TripletRecord(
                id=fn.id,
                language=str(fn.language.value),
                original=original,
                clone=_view(
                    SourceFunction(fn.id, fn.language, clone.text),
                    label_vocab, _clone_provenance(clone), clone.seed,
                ),
                deviant=_view(
                    SourceFunction(fn.id, fn.language, deviant.text),
                    label_vocab, _deviant_provenance(deviant), deviant.seed,
                ),
                seed=seed,
            )
        )
    return records, skips


def _view_to_json(view: VariantView) -> dict:
    return {
        "text": view.text,
        "tokens": list(view.tokens),
        "label_ids": list(view.label_ids),
        "provenance": list(view.provenance),
        "seed": view.seed,
    }


def _view_from_json(row: dict) -> VariantView:
    return VariantView(
        text=row["text"],
        tokens=tuple(row["tokens"]),
        label_ids=tuple(row["label_ids"]),
        provenance=tuple(row["provenance"]),
        seed=row["seed"],
    )


def write_triplets(path, records) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({
                "id": r.id,
                "language": r.language,
                "original": _view_to_json(r.original),
                "clone": _view_to_json(r.clone),
                "deviant": _view_to_json(r.deviant),
                "seed": r.seed,
            }, sort_keys=True) + "\n")


def read_triplets(path) -> list:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            records.append(TripletRecord(
                id=row["id"],
                language=row["language"],
                original=_view_from_json(row["original"]),
                clone=_view_from_json(row["clone"]),
                deviant=_view_from_json(row["deviant"]),
                seed=row["seed"],
            ))
    return records


def batch_stream(items, batch_size: int, seed: int) -> list:
    """Seeded-shuffle partition into full batches; the short tail drops.

    One pass over the items: no item appears twice, and the same seed
    reproduces the same batches.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    if len(items) < batch_size:
        raise ValueError(f"{len(items)} items cannot fill a batch of {batch_size}")
    order = list(range(len(items)))
    random.Random(seed).shuffle(order)
    batches = []
    for lo in range(0, len(order) - batch_size + 1, batch_size):
        batches.append([items[i] for i in order[lo:lo + batch_size]])
    return batches


def _subword_ids(model, tokens) -> list:
    ids = []
    for tok in tokens:
        ids.extend(model.encode_token(tok))
    return ids


def record_id_triples(records, model) -> list:
    """(anchor, positive, negative) sub-token id triples for training."""
    return [
        (
            _subword_ids(model, r.original.tokens),
            _subword_ids(model, r.clone.tokens),
            _subword_ids(model, r.deviant.tokens),
        )
        for r in records
    ]


def masking_report(records, model, config: RunConfig) -> dict:
    """Mask every original sequence once and summarize the positions."""
    if config.mask_rate == 0.0:
        return {"disabled": True, "sequences": len(records)}
    total_masked = 0
    total_inner = 0
    truncated = 0
    for r in records:
        seq = encode(model, list(r.original.tokens), list(r.original.label_ids),
                     max_len=config.max_len)
        masked = mask_for_mlm(seq, derive_seed(config.seed, "mask", r.id),
                              rate=config.mask_rate)
        total_masked += len(masked.mask_positions)
        total_inner += seq.inner_length
        truncated += int(seq.truncated)
    return {
        "disabled": False,
        "sequences": len(records),
        "masked_positions": total_masked,
        "inner_positions": total_inner,
        "truncated_sequences": truncated,
    }


def _retrieval_value(records, encoder, model) -> float:
    """MAP@R over held-out originals and clones, grouped by source id."""
    items = []
    for r in records:
        items.append((f"{r.id}#orig",
                      encoder.embed(_subword_ids(model, r.original.tokens)), r.id))
        items.append((f"{r.id}#clone",
                      encoder.embed(_subword_ids(model, r.clone.tokens)), r.id))
    return map_at_r(RetrievalDataset(items=tuple(items), r=1))


def end_to_end(root_dirs, config: RunConfig, holdout: int = None) -> dict:
    """Run the whole pipeline and return the report mapping.

    The metric block is deterministic given (corpus bytes, config);
    only the "timestamp" field varies between reruns.
    """
    entries, manifest = ingest(root_dirs, config.languages)
    if not entries:
        raise ValueError("corpus is empty after ingestion")
    functions = [e.to_function() for e in entries]
    label_vocab = build_label_vocab(functions)
    records, skips = augment_corpus(entries, config.seed, label_vocab)
    if not records:
        raise ValueError("no function admitted both augmentations")

    model = train_subword([list(fn.tokens) for fn in
                           (r.original for r in records)], config.vocab_size)
    mask_stats = masking_report(records, model, config)

    triples = record_id_triples(records, model)
    if holdout is None:
        holdout = min(500, max(1, len(triples) // 4))
    if holdout >= len(triples):
        raise ValueError(f"holdout {holdout} swallows all {len(triples)} triplets")
    order = list(range(len(triples)))
    random.Random(derive_seed(config.seed, "split")).shuffle(order)
    held_idx = sorted(order[:holdout])
    train_idx = sorted(order[holdout:])

    toy_cfg = ToyConfig(
        vocab_size=len(model),
        d=config.toy.d,
        steps=config.toy.steps,
        lr=config.toy.lr,
        batch=config.toy.batch,
        seed=derive_seed(config.seed, "toy"),
        tau=config.tau,
    )
    encoder = toy_train([triples[i] for i in train_idx], toy_cfg)

    held = [triples[i] for i in held_idx]
    study = zero_shot_study(encoder.embed, held, min_triplets=1)
    held_records = [records[i] for i in held_idx]

    report = {
        "config": config.echo(),
        "corpus": {
            "functions": len(entries),
            "manifest_digest": manifest.digest(),
            "skipped": {reason: count for reason, count in manifest.skipped},
        },
        "augment": {
            "triplets": len(records),
            "skips": skips,
        },
        "tokenizer": {
            "subword_vocab": model.vocab_size,
            "total_vocab": len(model),
            "corpus_sha256": model.corpus_sha256,
        },
        "labels": {"size": len(label_vocab)},
        "masking": mask_stats,
        "training": {
            "triplets": len(train_idx),
            "steps": len(encoder.curve),
            "final_loss": encoder.curve[-1][1],
            "curve_sha256": hashlib.sha256(
                json.dumps(encoder.curve).encode("utf-8")).hexdigest(),
        },
        "eval": {
            "held_out": len(held),
            "avg_clone_sim": study.avg_clone_sim,
            "avg_deviant_sim": study.avg_deviant_sim,
            "avg_random_sim": study.avg_random_sim,
            "top1_counts": dict(study.top1_counts),
            "map_at_r": _retrieval_value(held_records, encoder, model),
        },
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def metric_block(report: dict) -> dict:
    """The deterministic part of a report: everything but the timestamp."""
    return {k: v for k, v in report.items() if k != "timestamp"}
