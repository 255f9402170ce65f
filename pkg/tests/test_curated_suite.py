"""Curated program suite: hygiene rules, originals run clean, spot checks.

The suite underwrites the differential harness, so its programs keep to
strict rules: one worker plus main, no globals, and no identifier
outside the worker that a worker rename could collide with.  The full
clone/deviant matrices run in the acceptance tests; here every program
is linted and compiled, and a few are spot-checked end to end.
"""

import re
from itertools import permutations
from pathlib import Path

import pytest

from cloneforge.clones import DEFAULT_NAME_POOL
from cloneforge.difftest import (
    case_behavior,
    check_clone_preservation,
    check_deviant_behavior,
    compile_c,
    extract_worker,
    load_suite,
    worker_span,
)
from cloneforge.lang import parse_file

SUITE_DIR = Path(__file__).resolve().parent.parent / "data" / "curated_suite"

CASES = load_suite(SUITE_DIR / "manifest.json")

# identifiers main may legitimately use
ALLOWED_OUTSIDE = {"main", "printf", "scanf"}


def rename_candidates(target: str) -> set:
    """Names a worker rename could produce: subword shuffles and drops."""
    parts = target.split("_")
    derived = set()
    for r in range(1, len(parts) + 1):
        for combo in permutations(parts, r):
            derived.add("_".join(combo))
    return derived


def outside_identifiers(case):
    lo, hi = worker_span(case.text, case.target)
    tree = parse_file(case.text, "c")
    return {
        t.text
        for t in tree.terminals()
        if t.kind == "identifier" and (t.end <= lo or t.start >= hi)
    }


class TestSuiteShape:
    def test_at_least_thirty_programs(self):
        assert len(CASES) >= 30

    def test_unique_names(self):
        assert len({c.name for c in CASES}) == len(CASES)

    def test_three_drivers_each(self):
        for case in CASES:
            assert len(case.drivers) >= 3, case.name

    @pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
    def test_worker_extracts_and_parses(self, case):
        worker = extract_worker(case)
        assert worker.text.strip().endswith("}")

    @pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
    def test_no_globals(self, case):
        # every top-level item is an include, a function, or blank
        tree = parse_file(case.text, "c")
        kinds = {n.kind for n in tree.children}
        assert kinds <= {"function_definition", "preproc_directive"}, kinds


class TestSuiteHygiene:
    @pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
    def test_main_avoids_rename_pool(self, case):
        outside = outside_identifiers(case) - ALLOWED_OUTSIDE - {case.target}
        clash = outside & set(DEFAULT_NAME_POOL)
        assert not clash, f"{case.name}: main uses pool names {clash}"

    @pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
    def test_main_avoids_worker_derived_names(self, case):
        outside = outside_identifiers(case) - ALLOWED_OUTSIDE - {case.target}
        clash = outside & rename_candidates(case.target)
        assert not clash, f"{case.name}: main uses derivable names {clash}"

    @pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
    def test_worker_name_outside_only_at_call_sites(self, case):
        # the splice renames whole-word occurrences outside the worker,
        # so the name must never hide in a string or comment
        lo, hi = worker_span(case.text, case.target)
        tree = parse_file(case.text, "c")
        spans = [
            t.span
            for t in tree.terminals()
            if t.kind == "identifier" and t.text == case.target
        ]
        for m in re.finditer(rf"\b{case.target}\b", case.text):
            if lo <= m.start() < hi:
                continue
            assert any(s == m.start() and e == m.end() for s, e in spans), (
                f"{case.name}: stray occurrence at {m.start()}"
            )


class TestOriginalsRun:
    @pytest.mark.parametrize("case", CASES, ids=lambda c: c.name)
    def test_compiles_and_answers_every_driver(self, case, tmp_path):
        binary = compile_c(case.text, tmp_path, case.name)
        for i, out in enumerate(case_behavior(binary, case.drivers)):
            assert not out.timed_out, f"driver {i} timed out"
            assert out.exit_code == 0, f"driver {i} exited {out.exit_code}"
            assert out.stdout.strip(), f"driver {i} printed nothing"


class TestSpotChecks:
    # the exhaustive 30x5 matrix runs with the acceptance criteria;
    # these keep the default suite fast while still covering the path
    @pytest.mark.parametrize("name", ["01_even_span", "04_mixing_hash", "24_power_residue"])
    def test_clone_preservation_sample(self, name, tmp_path):
        case = next(c for c in CASES if c.name == name)
        report = check_clone_preservation(case, seeds=(0, 1), workdir=tmp_path)
        assert report.passed, report.failures

    def test_deviant_sample(self, tmp_path):
        case = next(c for c in CASES if c.name == "20_gcd_loop")
        report = check_deviant_behavior(case, seeds=(0, 1, 2), workdir=tmp_path)
        assert report.attempted == report.reparsed
        assert report.datatype_compiled == report.datatype_sites
        assert report.failures == ()
