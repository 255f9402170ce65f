"""Differential execution of program transformations under a C compiler.

A curated program is a self-contained C file with one worker function
plus main; main exercises the worker on stdin-driven inputs.  To test a
transformation, the transformed worker is spliced back over the
original's byte span, call sites are renamed if the transform renamed
the worker, and the result is compiled and run against the original on
every driver input.  Identical (stdout, exit code) on all drivers means
behavior was preserved.

Splice correctness requires the worker's name to occur in the rest of
the file only where it means the worker (the curated suite guarantees
this); renames inside the worker body are already consistent because
the transforms are capture-free.
"""

from __future__ import annotations

import json
import re
import subprocess
from dataclasses import dataclass
from pathlib import Path

from .clones import generate_clone
from .deviants import BugKind, bug_sites, generate_deviant, inject_bug
from .errors import InjectionFailed, NoApplicableBug
from .lang import SourceFunction, analyze_scopes, function_name_node, parse, parse_file

COMPILE_TIMEOUT = 60.0
RUN_TIMEOUT = 10.0


class CompileFailure(RuntimeError):
    """gcc rejected the program; .log carries its stderr."""

    def __init__(self, message: str, log: str = ""):
        super().__init__(message)
        self.log = log


@dataclass(frozen=True)
class ProgramCase:
    """One curated program: source text, worker name, driver inputs."""

    name: str
    text: str
    target: str
    drivers: tuple

    def __post_init__(self):
        if len(self.drivers) < 1:
            raise ValueError(f"{self.name}: needs at least one driver input")


@dataclass(frozen=True)
class RunOutcome:
    stdout: str
    exit_code: object   # int, or None when the run timed out
    timed_out: bool

    def matches(self, other: "RunOutcome") -> bool:
        # timed-out stdout is partial, so timeouts compare by flag alone
        if self.timed_out or other.timed_out:
            return self.timed_out and other.timed_out
        return self.stdout == other.stdout and self.exit_code == other.exit_code


def load_suite(manifest_path) -> list:
    """Read a curated-suite manifest: [{file, target, drivers}, ...]."""
    manifest_path = Path(manifest_path)
    rows = json.loads(manifest_path.read_text(encoding="utf-8"))
    cases = []
    for row in rows:
        path = manifest_path.parent / row["file"]
        cases.append(
            ProgramCase(
                name=Path(row["file"]).stem,
                text=path.read_text(encoding="utf-8"),
                target=row["target"],
                drivers=tuple(row["drivers"]),
            )
        )
    return cases


def worker_span(text: str, target: str) -> tuple:
    """Byte span of the named top-level function definition."""
    tree = parse_file(text, "c")
    spans = []
    for node in tree.children:
        if node.kind != "function_definition":
            continue
        name = function_name_node(node)
        if name is not None and name.text == target:
            spans.append(node.span)
    if len(spans) != 1:
        raise ValueError(f"expected one definition of {target!r}, found {len(spans)}")
    return spans[0]


def extract_worker(case: ProgramCase) -> SourceFunction:
    lo, hi = worker_span(case.text, case.target)
    return SourceFunction(f"{case.name}:{case.target}", "c", case.text[lo:hi])


def function_name(worker_text: str) -> str:
    node = function_name_node(parse(SourceFunction("w", "c", worker_text)))
    if node is None:
        raise ValueError("cannot find function name")
    return node.text


def splice_worker(case: ProgramCase, new_worker_text: str) -> str:
    """Program text with the worker replaced by its transformed version.

    If the transform renamed the worker, every whole-word occurrence of
    the old name outside the worker (i.e. main's call sites) is renamed
    to match.
    """
    lo, hi = worker_span(case.text, case.target)
    head, tail = case.text[:lo], case.text[hi:]
    new_name = function_name(new_worker_text)
    if new_name != case.target:
        pattern = re.compile(rf"\b{re.escape(case.target)}\b")
        head = pattern.sub(new_name, head)
        tail = pattern.sub(new_name, tail)
    return head + new_worker_text + tail


def compile_c(text: str, workdir, stem: str, cc: str = "gcc"):
    """Write text as <stem>.c, compile it, return the binary path."""
    workdir = Path(workdir)
    src = workdir / f"{stem}.c"
    binary = workdir / stem
    src.write_text(text, encoding="utf-8")
    proc = subprocess.run(
        [cc, "-O0", "-o", str(binary), str(src), "-lm"],
        capture_output=True,
        text=True,
        timeout=COMPILE_TIMEOUT,
    )
    if proc.returncode != 0:
        raise CompileFailure(f"{stem}: compile failed", log=proc.stderr)
    return binary


def run_binary(binary, stdin_text: str, timeout: float = RUN_TIMEOUT) -> RunOutcome:
    try:
        proc = subprocess.run(
            [str(binary)],
            input=stdin_text,
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except subprocess.TimeoutExpired:
        return RunOutcome(stdout="", exit_code=None, timed_out=True)
    return RunOutcome(stdout=proc.stdout, exit_code=proc.returncode, timed_out=False)


def case_behavior(binary, drivers) -> tuple:
    return tuple(run_binary(binary, d) for d in drivers)


@dataclass(frozen=True)
class CloneCheck:
    case: str
    seeds: tuple
    clones_built: int
    failures: tuple     # human-readable strings, empty when all seeds pass

    @property
    def passed(self) -> bool:
        return not self.failures


def check_clone_preservation(case: ProgramCase, seeds, workdir, cc: str = "gcc") -> CloneCheck:
    """Compile and run each seed's clone against the original program."""
    baseline = case_behavior(compile_c(case.text, workdir, case.name, cc), case.drivers)
    worker = extract_worker(case)
    failures = []
    built = 0
    for seed in seeds:
        stem = f"{case.name}_clone_{seed}"
        try:
            clone = generate_clone(worker, rng_seed=seed)
            built += 1
            binary = compile_c(splice_worker(case, clone.text), workdir, stem, cc)
        except CompileFailure as exc:
            failures.append(f"seed {seed}: {exc} :: {exc.log.strip()[:400]}")
            continue
        except Exception as exc:
            failures.append(f"seed {seed}: {type(exc).__name__}: {exc}")
            continue
        got = case_behavior(binary, case.drivers)
        for i, (want, have) in enumerate(zip(baseline, got)):
            if not want.matches(have):
                failures.append(
                    f"seed {seed} driver {i}: expected "
                    f"{(want.stdout, want.exit_code)}, got {(have.stdout, have.exit_code)}"
                )
    return CloneCheck(case=case.name, seeds=tuple(seeds), clones_built=built,
                      failures=tuple(failures))


@dataclass(frozen=True)
class DeviantCheck:
    case: str
    seeds: tuple
    reparsed: int            # deviants that parse standalone
    attempted: int           # deviants generated
    compiled: int            # deviants gcc accepted (best effort, all kinds)
    behavior_changed: int    # compiled deviants with any driver mismatch
    behavior_same: int
    datatype_sites: int      # every DataType site, exhaustively
    datatype_compiled: int
    failures: tuple          # DataType compile failures only: those must not happen


def check_deviant_behavior(case: ProgramCase, seeds, workdir, cc: str = "gcc") -> DeviantCheck:
    """Measure deviant compile and behavior-change rates on one program.

    Random-kind deviants are compiled best effort; behavior change is
    counted, not asserted.  DataType substitutions are enumerated
    exhaustively and every one of them must compile.
    """
    baseline = case_behavior(compile_c(case.text, workdir, case.name, cc), case.drivers)
    worker = extract_worker(case)
    attempted = reparsed = compiled = changed = same = 0
    for seed in seeds:
        try:
            deviant = generate_deviant(worker, rng_seed=seed)
        except NoApplicableBug:
            continue
        attempted += 1
        parse(SourceFunction(worker.id, "c", deviant.text))
        reparsed += 1
        stem = f"{case.name}_dev_{seed}"
        try:
            binary = compile_c(splice_worker(case, deviant.text), workdir, stem, cc)
        except CompileFailure:
            continue
        compiled += 1
        if all(w.matches(h) for w, h in zip(baseline, case_behavior(binary, case.drivers))):
            same += 1
        else:
            changed += 1

    root = parse(worker)
    scope = analyze_scopes(root, worker.text, worker.language)
    datatype_sites = datatype_compiled = 0
    failures = []
    for i, site in enumerate(bug_sites(BugKind.DATA_TYPE, root, scope, worker.language)):
        for pick in range(3):   # several substitutes can exist per site
            try:
                deviant = inject_bug(BugKind.DATA_TYPE, site, worker,
                                     root=root, scope=scope, rng_seed=pick)
            except InjectionFailed:
                continue
            datatype_sites += 1
            stem = f"{case.name}_dt_{i}_{pick}"
            try:
                compile_c(splice_worker(case, deviant.text), workdir, stem, cc)
                datatype_compiled += 1
            except CompileFailure as exc:
                failures.append(
                    f"site {i} pick {pick} ({deviant.bug[2]} -> {deviant.bug[3]}): "
                    f"{exc.log.strip()[:400]}"
                )
    return DeviantCheck(case=case.name, seeds=tuple(seeds), reparsed=reparsed,
                        attempted=attempted, compiled=compiled,
                        behavior_changed=changed, behavior_same=same,
                        datatype_sites=datatype_sites,
                        datatype_compiled=datatype_compiled,
                        failures=tuple(failures))
