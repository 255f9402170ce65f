"""Differential harness: splicing, compilation, behavior comparison."""

import json

import pytest

from cloneforge.clones import generate_clone
from cloneforge.difftest import (
    CompileFailure,
    ProgramCase,
    RunOutcome,
    case_behavior,
    check_clone_preservation,
    check_deviant_behavior,
    compile_c,
    extract_worker,
    function_name,
    load_suite,
    run_binary,
    splice_worker,
    worker_span,
)

PROG = """\
#include <stdio.h>

int gather_span_total(int lo, int hi) {
    int total = 0;
    for (int i = lo; i < hi; i++) {
        total = total + i * 2;
    }
    if (total > 100) {
        total = total - lo;
    }
    return total;
}

int main(void) {
    int lo;
    int hi;
    if (scanf("%d %d", &lo, &hi) != 2) {
        return 2;
    }
    printf("%d\\n", gather_span_total(lo, hi));
    return 0;
}
"""

CASE = ProgramCase(name="span_total", text=PROG, target="gather_span_total",
                   drivers=("0 10\n", "3 9\n", "5 5\n"))

RECURSIVE = """\
#include <stdio.h>

long fold_depth_sum(long n) {
    if (n <= 0) {
        return 0;
    }
    return n + fold_depth_sum(n - 1);
}

int main(void) {
    long n;
    if (scanf("%ld", &n) != 1) {
        return 2;
    }
    printf("%ld\\n", fold_depth_sum(n));
    return 0;
}
"""

RECURSIVE_CASE = ProgramCase(name="depth_sum", text=RECURSIVE,
                             target="fold_depth_sum",
                             drivers=("0\n", "7\n", "100\n"))


class TestExtraction:
    def test_worker_span_slices_the_definition(self):
        lo, hi = worker_span(PROG, "gather_span_total")
        body = PROG[lo:hi]
        assert body.startswith("int gather_span_total")
        assert body.endswith("}")
        assert "main" not in body

    def test_missing_target_rejected(self):
        with pytest.raises(ValueError, match="found 0"):
            worker_span(PROG, "no_such_function")

    def test_duplicate_target_rejected(self):
        lo, hi = worker_span(PROG, "gather_span_total")
        doubled = PROG + "\n" + PROG[lo:hi] + "\n"
        with pytest.raises(ValueError, match="found 2"):
            worker_span(doubled, "gather_span_total")

    def test_extract_worker_parses_standalone(self):
        worker = extract_worker(CASE)
        assert function_name(worker.text) == "gather_span_total"

    def test_case_needs_drivers(self):
        with pytest.raises(ValueError, match="driver"):
            ProgramCase(name="x", text=PROG, target="gather_span_total", drivers=())


class TestSplice:
    def test_identity_splice_is_byte_identical(self):
        worker = extract_worker(CASE)
        assert splice_worker(CASE, worker.text) == PROG

    def test_renamed_worker_updates_call_sites(self):
        worker = extract_worker(CASE)
        renamed = worker.text.replace("gather_span_total", "merged_probe")
        spliced = splice_worker(CASE, renamed)
        assert "gather_span_total" not in spliced
        assert "merged_probe(lo, hi)" in spliced

    def test_renamed_splice_preserves_behavior(self, tmp_path):
        baseline = case_behavior(compile_c(PROG, tmp_path, "orig"), CASE.drivers)
        renamed = extract_worker(CASE).text.replace("gather_span_total", "merged_probe")
        binary = compile_c(splice_worker(CASE, renamed), tmp_path, "renamed")
        assert all(w.matches(h) for w, h in zip(baseline, case_behavior(binary, CASE.drivers)))


class TestCompileAndRun:
    def test_compile_failure_carries_gcc_log(self, tmp_path):
        with pytest.raises(CompileFailure) as exc:
            compile_c("int main(void) { return undeclared; }\n", tmp_path, "bad")
        assert "undeclared" in exc.value.log

    def test_run_captures_stdout_and_exit(self, tmp_path):
        binary = compile_c(PROG, tmp_path, "p")
        out = run_binary(binary, "0 10\n")
        assert out == RunOutcome(stdout="90\n", exit_code=0, timed_out=False)
        assert run_binary(binary, "garbage\n").exit_code == 2

    def test_timeout_flagged(self, tmp_path):
        binary = compile_c("int main(void) { for (;;) { } }\n", tmp_path, "spin")
        out = run_binary(binary, "", timeout=0.2)
        assert out.timed_out
        assert out.exit_code is None

    def test_matches_semantics(self):
        a = RunOutcome("90\n", 0, False)
        assert a.matches(RunOutcome("90\n", 0, False))
        assert not a.matches(RunOutcome("91\n", 0, False))
        assert not a.matches(RunOutcome("90\n", 1, False))
        assert not a.matches(RunOutcome("", None, True))
        assert RunOutcome("", None, True).matches(RunOutcome("", None, True))


class TestClonePreservation:
    def test_inline_program_five_seeds(self, tmp_path):
        report = check_clone_preservation(CASE, seeds=range(5), workdir=tmp_path)
        assert report.passed, report.failures
        assert report.clones_built == 5

    def test_recursive_worker(self, tmp_path):
        report = check_clone_preservation(RECURSIVE_CASE, seeds=range(5), workdir=tmp_path)
        assert report.passed, report.failures

    def test_a_rename_of_the_worker_itself_survives(self, tmp_path):
        # hunt a seed whose clone renames the function, then check it runs
        worker = extract_worker(CASE)
        seed = next(
            s for s in range(64)
            if function_name(generate_clone(worker, rng_seed=s).text) != CASE.target
        )
        report = check_clone_preservation(CASE, seeds=[seed], workdir=tmp_path)
        assert report.passed, report.failures

    def test_harness_detects_a_real_change(self, tmp_path):
        # sensitivity: a worker computing something else must not pass
        baseline = case_behavior(compile_c(PROG, tmp_path, "orig2"), CASE.drivers)
        bad = extract_worker(CASE).text.replace("i * 2", "i * 3")
        binary = compile_c(splice_worker(CASE, bad), tmp_path, "bad2")
        got = case_behavior(binary, CASE.drivers)
        assert not all(w.matches(h) for w, h in zip(baseline, got))


class TestDeviantBehavior:
    def test_counts_partition(self, tmp_path):
        report = check_deviant_behavior(CASE, seeds=range(10), workdir=tmp_path)
        assert report.attempted == report.reparsed == 10
        assert report.compiled <= report.attempted
        assert report.behavior_changed + report.behavior_same == report.compiled

    def test_every_datatype_substitution_compiles(self, tmp_path):
        report = check_deviant_behavior(CASE, seeds=range(3), workdir=tmp_path)
        assert report.datatype_sites > 0
        assert report.datatype_compiled == report.datatype_sites
        assert report.failures == ()


class TestSuiteLoading:
    def test_manifest_round_trip(self, tmp_path):
        (tmp_path / "prog.c").write_text(PROG)
        manifest = tmp_path / "manifest.json"
        manifest.write_text(json.dumps([
            {"file": "prog.c", "target": "gather_span_total",
             "drivers": ["0 10\n", "3 9\n", "5 5\n"]},
        ]))
        cases = load_suite(manifest)
        assert len(cases) == 1
        assert cases[0].name == "prog"
        assert cases[0].text == PROG
        assert cases[0].drivers == ("0 10\n", "3 9\n", "5 5\n")
