"""Corpus ingestion: extraction, dedup, determinism, identifier vocab."""

import json

import pytest

from cloneforge.ingest import (
    MAX_FUNCTION_BYTES,
    CorpusEntry,
    build_identifier_vocab,
    ingest,
    read_corpus,
    write_corpus,
)

TWO_FUNCS = """\
#include <stdio.h>

int add(int a, int b) {
    return a + b;
}

int sub(int a, int b) {
    return a - b;
}
"""


def make_tree(tmp_path, files):
    for rel, text in files.items():
        p = tmp_path / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    return tmp_path


class TestExtraction:
    def test_two_functions_in_one_file(self, tmp_path):
        make_tree(tmp_path, {"a.c": TWO_FUNCS})
        entries, manifest = ingest([tmp_path])
        assert len(entries) == 2
        assert [e.text.split("(")[0] for e in entries] == ["int add", "int sub"]

    def test_spans_slice_back_to_text(self, tmp_path):
        make_tree(tmp_path, {"a.c": TWO_FUNCS})
        entries, _ = ingest([tmp_path])
        for e in entries:
            lo, hi = e.byte_span
            assert TWO_FUNCS[lo:hi] == e.text

    def test_ids_are_relative_path_and_offset(self, tmp_path):
        make_tree(tmp_path, {"sub/dir/a.c": "int f(void) { return 0; }\n"})
        entries, _ = ingest([tmp_path])
        assert entries[0].id == "sub/dir/a.c:0"
        assert entries[0].path == "sub/dir/a.c"

    def test_python_files_ignored(self, tmp_path):
        make_tree(tmp_path, {
            "a.c": "int f(void) { return 0; }\n",
            "b.py": "def f(): return 0\n",
            "c.txt": "int g(void) { return 1; }\n",
        })
        entries, _ = ingest([tmp_path])
        assert [e.path for e in entries] == ["a.c"]

    def test_java_methods_extracted(self, tmp_path):
        make_tree(tmp_path, {"M.java": (
            "class M {\n"
            "    int one() { return 1; }\n"
            "    int two() { return 2; }\n"
            "}\n"
        )})
        entries, _ = ingest([tmp_path])
        assert len(entries) == 2
        assert all(e.language == "java" for e in entries)

    def test_language_filter(self, tmp_path):
        make_tree(tmp_path, {
            "a.c": "int f(void) { return 0; }\n",
            "M.java": "class M { int g() { return 1; } }\n",
        })
        entries, _ = ingest([tmp_path], languages=("c",))
        assert [e.language for e in entries] == ["c"]

    def test_globals_and_structs_not_extracted(self, tmp_path):
        make_tree(tmp_path, {"a.c": (
            "int counter = 0;\n"
            "struct point { int x; int y; };\n"
            "int probe(void) { return counter; }\n"
        )})
        entries, _ = ingest([tmp_path])
        assert len(entries) == 1
        assert entries[0].text.startswith("int probe")

    def test_missing_root_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="not a directory"):
            ingest([tmp_path / "nope"])

    def test_entry_round_trips_to_function(self, tmp_path):
        make_tree(tmp_path, {"a.c": "int f(void) { return 0; }\n"})
        entries, _ = ingest([tmp_path])
        fn = entries[0].to_function()
        assert fn.id == entries[0].id
        assert fn.text == entries[0].text


class TestSkips:
    def test_duplicate_bodies_collapse(self, tmp_path):
        # whitespace variants normalize to the same dedup key
        make_tree(tmp_path, {
            "a.c": "int add(int a, int b) {\n    return a + b;\n}\n",
            "b.c": "int add(int a,    int b) {\n        return a + b;\n}\n",
        })
        entries, manifest = ingest([tmp_path])
        assert len(entries) == 1
        assert entries[0].path == "a.c"
        assert dict(manifest.skipped)["duplicate"] == 1

    def test_broken_function_skipped_and_counted(self, tmp_path):
        make_tree(tmp_path, {"a.c": (
            "int ok(void) {\n    return 1;\n}\n"
            "int broken(void) {\n    int x = ;\n    return x;\n}\n"
        )})
        entries, manifest = ingest([tmp_path])
        assert [e.text.split("(")[0] for e in entries] == ["int ok"]
        assert dict(manifest.skipped)["parse_error"] == 1

    def test_oversized_function_skipped(self, tmp_path):
        filler = "    x = x + 1;\n" * (MAX_FUNCTION_BYTES // 15 + 1)
        big = "int f(void) {\n    int x = 0;\n%s    return x;\n}\n" % filler
        assert len(big.encode()) > MAX_FUNCTION_BYTES
        make_tree(tmp_path, {"a.c": big + "int g(void) { return 0; }\n"})
        entries, manifest = ingest([tmp_path])
        assert [e.text.split("(")[0] for e in entries] == ["int g"]
        assert dict(manifest.skipped)["oversized"] == 1

    def test_undecodable_file_skipped(self, tmp_path):
        make_tree(tmp_path, {"a.c": "int f(void) { return 0; }\n"})
        (tmp_path / "bad.c").write_bytes(b"int f(void) { return \xff\xfe; }\n")
        entries, manifest = ingest([tmp_path])
        assert len(entries) == 1
        assert dict(manifest.skipped)["unreadable"] == 1

    def test_counts_partition_the_input(self, tmp_path):
        make_tree(tmp_path, {
            "a.c": TWO_FUNCS,
            "b.c": "int add(int a, int b) {\n    return a + b;\n}\n",
            "c.c": "int broken(void) {\n    int x = ;\n    return x;\n}\n",
        })
        entries, manifest = ingest([tmp_path])
        skipped = dict(manifest.skipped)
        assert len(entries) + skipped["duplicate"] + skipped["parse_error"] == 4


class TestDeterminism:
    def test_reingestion_byte_identical(self, tmp_path):
        make_tree(tmp_path, {"a.c": TWO_FUNCS, "M.java": "class M { int g() { return 1; } }\n"})
        out1 = tmp_path / "c1.jsonl"
        out2 = tmp_path / "c2.jsonl"
        e1, m1 = ingest([tmp_path])
        e2, m2 = ingest([tmp_path])
        write_corpus(out1, e1)
        write_corpus(out2, e2)
        assert out1.read_bytes() == out2.read_bytes()
        assert m1.to_json() == m2.to_json()
        assert m1.digest() == m2.digest()

    def test_relocated_tree_same_corpus_bytes(self, tmp_path):
        # ids carry relative paths, so moving the tree changes nothing
        files = {"x/a.c": TWO_FUNCS}
        r1 = make_tree(tmp_path / "here", files)
        r2 = make_tree(tmp_path / "elsewhere", files)
        o1, o2 = tmp_path / "c1.jsonl", tmp_path / "c2.jsonl"
        write_corpus(o1, ingest([r1])[0])
        write_corpus(o2, ingest([r2])[0])
        assert o1.read_bytes() == o2.read_bytes()

    def test_order_is_path_then_offset(self, tmp_path):
        make_tree(tmp_path, {
            "z.c": "int zf(void) { return 0; }\n",
            "a.c": TWO_FUNCS,
        })
        entries, _ = ingest([tmp_path])
        keys = [(e.path, e.byte_span[0]) for e in entries]
        assert keys == sorted(keys)

    def test_corpus_file_round_trip(self, tmp_path):
        make_tree(tmp_path, {"a.c": TWO_FUNCS})
        entries, _ = ingest([tmp_path])
        out = tmp_path / "corpus.jsonl"
        write_corpus(out, entries)
        assert read_corpus(out) == entries
        # one JSON object per line
        lines = out.read_text().splitlines()
        assert len(lines) == len(entries)
        assert all(isinstance(json.loads(l), dict) for l in lines)


class TestIdentifierVocab:
    def entry(self, text, n=0):
        return CorpusEntry(id=f"e{n}", language="c", path="e.c", byte_span=(0, len(text)), text=text)

    def test_declaration_and_use_both_count(self):
        vocab = build_identifier_vocab([self.entry("int foo(){int bar=0; return bar;}")])
        assert dict(vocab) == {"foo": 1, "bar": 2}

    def test_ranked_by_frequency_then_name(self):
        vocab = build_identifier_vocab([
            self.entry("int f(int b, int a) { return a + b + a + b; }")
        ])
        assert vocab == [("a", 3), ("b", 3), ("f", 1)]

    def test_keywords_and_types_never_appear(self):
        vocab = build_identifier_vocab([
            self.entry("int f(void) { for (int i = 0; i < 3; i++) { if (i) return i; } return 0; }")
        ])
        names = {name for name, _ in vocab}
        assert names == {"f", "i"}

    def test_two_runs_identical(self, tmp_path):
        make_tree(tmp_path, {"a.c": TWO_FUNCS})
        entries, _ = ingest([tmp_path])
        assert build_identifier_vocab(entries) == build_identifier_vocab(entries)

    def test_vocab_size_recorded_in_manifest(self, tmp_path):
        make_tree(tmp_path, {"a.c": TWO_FUNCS})
        entries, manifest = ingest([tmp_path])
        assert manifest.identifier_vocab_size == len(build_identifier_vocab(entries))
