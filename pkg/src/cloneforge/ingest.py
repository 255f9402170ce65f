"""Corpus construction: walk source trees, extract functions, dedup.

Only .c, .cpp, and .java files are considered.  C and C++ contribute
top-level function definitions; Java contributes method declarations
(bodies of nested classes included).  Every accepted function re-parses
standalone without errors, exact duplicates (whitespace-normalized) are
dropped, and emission order is (relative path, byte offset) so the same
inputs always produce the same corpus file, wherever the tree lives.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path, PurePosixPath

from .lang import Language, SourceFunction, parse, parse_file

log = logging.getLogger(__name__)

EXTENSIONS = {".c": Language.C, ".cpp": Language.CPP, ".java": Language.JAVA}
MAX_FUNCTION_BYTES = 100 * 1024
DEDUP_POLICY = "sha256-whitespace-normalized"


@dataclass(frozen=True)
class CorpusEntry:
    """One extracted function plus where it came from."""

    id: str
    language: str
    path: str
    byte_span: tuple
    text: str

    def to_function(self) -> SourceFunction:
        return SourceFunction(self.id, self.language, self.text)


@dataclass(frozen=True)
class CorpusManifest:
    """What a corpus was built from and how."""

    sources: tuple          # (root, language, file count, function count)
    dedup: str
    identifier_vocab_size: int
    skipped: tuple          # (reason, count), reason-sorted

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    def to_json(self) -> str:
        return json.dumps(
            {
                "sources": [list(row) for row in self.sources],
                "dedup": self.dedup,
                "identifier_vocab_size": self.identifier_vocab_size,
                "skipped": {reason: count for reason, count in self.skipped},
            },
            sort_keys=True,
            indent=2,
        )


def _normalized_hash(text: str) -> str:
    return hashlib.sha256(" ".join(text.split()).encode("utf-8")).hexdigest()


def _function_nodes(root, language: Language):
    if language is Language.JAVA:
        return [n for n in root.find_all("method_declaration")]
    return [n for n in root.children if n.kind == "function_definition"]


def ingest(root_dirs, languages=("c", "cpp", "java")):
    """Extract functions under the given roots.

    Returns (entries, manifest).  Unreadable or unparsable files are
    logged and skipped; oversized functions, standalone parse failures,
    and duplicates are counted in the manifest.
    """
    wanted = {Language.of(l) for l in languages}
    entries = []
    seen_hashes = set()
    skip_counts = {"parse_error": 0, "oversized": 0, "duplicate": 0, "unreadable": 0}
    source_rows = {}

    for root_dir in root_dirs:
        root_path = Path(root_dir)
        if not root_path.is_dir():
            raise ValueError(f"not a directory: {root_dir}")
        files = sorted(
            p for p in root_path.rglob("*")
            if p.is_file() and EXTENSIONS.get(p.suffix) in wanted
        )
        for file_path in files:
            language = EXTENSIONS[file_path.suffix]
            rel = PurePosixPath(file_path.relative_to(root_path).as_posix())
            row = source_rows.setdefault((str(root_dir), language.value), [0, 0])
            row[0] += 1
            try:
                text = file_path.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                log.warning("skipping unreadable %s: %s", file_path, exc)
                skip_counts["unreadable"] += 1
                continue
            tree = parse_file(text, language)
            for node in _function_nodes(tree, language):
                body = text[node.start:node.end]
                if len(body.encode("utf-8")) > MAX_FUNCTION_BYTES:
                    skip_counts["oversized"] += 1
                    continue
                fn_id = f"{rel}:{node.start}"
                fn = SourceFunction(fn_id, language, body)
                try:
                    parse(fn)
                except Exception as exc:
                    log.warning("skipping %s: %s", fn_id, exc)
                    skip_counts["parse_error"] += 1
                    continue
                key = _normalized_hash(body)
                if key in seen_hashes:
                    skip_counts["duplicate"] += 1
                    continue
                seen_hashes.add(key)
                row[1] += 1
                entries.append(
                    CorpusEntry(
                        id=fn_id,
                        language=language.value,
                        path=str(rel),
                        byte_span=(node.start, node.end),
                        text=body,
                    )
                )

    vocab = build_identifier_vocab(entries)
    manifest = CorpusManifest(
        sources=tuple(
            (root, lang, counts[0], counts[1])
            for (root, lang), counts in sorted(source_rows.items())
        ),
        dedup=DEDUP_POLICY,
        identifier_vocab_size=len(vocab),
        skipped=tuple(sorted(skip_counts.items())),
    )
    return entries, manifest


def build_identifier_vocab(corpus):
    """Frequency-ranked identifier names across the corpus.

    Accepts anything with id/language/text attributes.  Only terminals
    of identifier kind count, so keywords and type names never appear.
    Ties rank lexicographically; the result is reproducible.
    """
    counts = {}
    for item in corpus:
        fn = SourceFunction(item.id, item.language, item.text)
        for term in parse(fn).terminals():
            if term.kind == "identifier":
                counts[term.text] = counts.get(term.text, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def write_corpus(path, entries) -> None:
    """One JSON object per function, field order fixed."""
    with open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(
                json.dumps(
                    {
                        "id": e.id,
                        "language": e.language,
                        "path": e.path,
                        "byte_span": list(e.byte_span),
                        "text": e.text,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def read_corpus(path):
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            row = json.loads(line)
            entries.append(
                CorpusEntry(
                    id=row["id"],
                    language=row["language"],
                    path=row["path"],
                    byte_span=tuple(row["byte_span"]),
                    text=row["text"],
                )
            )
    return entries
