"""Seeded generator of small self-contained C functions.

Tests and demos need corpora of thousands of parseable functions with
enough surface variety (loops, branches, arrays, arithmetic) to give
the augmentation transforms something to work with.  Every generated
function declares typed int locals, applies binary operators, and
carries integer literals, so clone and deviant generation always find
at least one applicable site.  Generation is pure string assembly from
a seeded stdlib RNG: same (count, seed) in, same functions out.
"""

from __future__ import annotations

import random
from pathlib import Path

from .lang import SourceFunction

_VERBS = (
    "scan", "fold", "merge", "pack", "trim", "rank",
    "probe", "shift", "blend", "carve", "weigh", "braid",
)

_NOUNS = (
    "delta", "ridge", "basin", "chord", "facet", "gauge",
    "ledger", "margin", "octave", "prism", "quota", "strand",
)


def _lit(rng: random.Random) -> int:
    return rng.randrange(1, 10)


def _frag_for_accum(rng):
    step = _lit(rng)
    return [
        "for (int i = 0; i < a; i++) {",
        f"    total = total + i * {step};",
        "}",
    ]


def _frag_while_reduce(rng):
    floor, drop = _lit(rng), _lit(rng)
    return [
        f"while (b > {floor}) {{",
        f"    b = b - {drop};",
        "    total = total + b;",
        "}",
    ]


def _frag_branch(rng):
    pivot, bump = _lit(rng) * 10, _lit(rng)
    return [
        f"if (total > {pivot}) {{",
        "    total = total - a;",
        "} else {",
        f"    total = total + {bump};",
        "}",
    ]


def _frag_array(rng):
    size = rng.randrange(4, 9)
    scale = _lit(rng)
    return [
        f"int buf[{size}];",
        f"for (int i = 0; i < {size}; i++) {{",
        f"    buf[i] = i * {scale} + b;",
        "}",
        f"for (int i = 0; i < {size}; i++) {{",
        "    total = total + buf[i];",
        "}",
    ]


def _frag_parity(rng):
    factor = rng.randrange(2, 5)
    return [
        "if (a % 2 == 0) {",
        f"    step = step * {factor};",
        "} else {",
        "    step = step + a;",
        "}",
    ]


def _frag_clamp(rng):
    hi = _lit(rng) * 100
    return [
        f"if (total > {hi}) {{",
        f"    total = {hi};",
        "}",
    ]


_FRAGMENTS = (
    _frag_for_accum,
    _frag_while_reduce,
    _frag_branch,
    _frag_array,
    _frag_parity,
    _frag_clamp,
)

_RETURNS = (
    "return total;",
    "return total + step;",
    "return total - step;",
    "return total + a - b;",
)

# Compact bodies are single statements over total/a/b.  Every template
# carries an operator and a literal so both clone and deviant transforms
# always find a site even in a three-line function.  Two-digit literal
# ranges keep template collisions rare across a few thousand draws;
# colliding bodies would make retrieval confuse one function's clone
# with another's.
_COMPACT_STMTS = (
    "total = total + a * {l1};",
    "total = (a + b) % {l2} + total;",
    "total = a * {l1} - b / {l2};",
    "if (a > b) {{ total = total + {l1}; }}",
    "while (total < a) {{ total = total + {l2}; }}",
    "for (int i = 0; i < {l2}; i++) {{ total = total + b; }}",
    "total = (a - b) * {l1} + a % {l2};",
    "total = (a << 1) + b % {l2};",
    "total = a > {l1} ? total + b : total - b;",
    "total = (a & {l1}) + (b | {l2});",
)

_COMPACT_RETURNS = ("return total;", "return total + a - b;")


def generate_function(rng: random.Random, index: int, compact: bool = False) -> str:
    """One compilable C function; the index keeps names corpus-unique.

    compact=True emits a three-statement body (init, one templated
    statement, return).  A single-token edit in a ~20-token function
    moves a pooled embedding far more than the same edit buried in a
    multi-fragment body, which is what contrastive toy training needs
    to separate deviants from clones.
    """
    name = f"{rng.choice(_VERBS)}_{rng.choice(_NOUNS)}_{index}"
    if compact:
        stmt = rng.choice(_COMPACT_STMTS).format(
            l1=rng.randrange(1, 100), l2=rng.randrange(2, 100))
        lines = [
            f"int {name}(int a, int b) {{",
            f"    int total = {_lit(rng)};",
            "    " + stmt,
            "    " + rng.choice(_COMPACT_RETURNS),
            "}",
        ]
        return "\n".join(lines) + "\n"
    three = rng.random() < 0.3
    params = "int a, int b, int c" if three else "int a, int b"
    lines = [
        f"int {name}({params}) {{",
        f"    int total = {_lit(rng)};",
        f"    int step = {_lit(rng)};",
    ]
    if three:
        lines.append("    total = total + c;")
    count = rng.randrange(1, 4)
    picks = rng.sample(range(len(_FRAGMENTS)), count)
    for pick in sorted(picks):
        for row in _FRAGMENTS[pick](rng):
            lines.append("    " + row)
    lines.append("    " + rng.choice(_RETURNS))
    lines.append("}")
    return "\n".join(lines) + "\n"


def generate_corpus(count: int, seed: int, compact: bool = False) -> list:
    """count distinct SourceFunctions, ids synth/<index>."""
    if count < 1:
        raise ValueError("count must be positive")
    rng = random.Random(seed)
    return [
        SourceFunction(f"synth/{i}", "c", generate_function(rng, i, compact))
        for i in range(count)
    ]


def write_sample_tree(root, count: int, seed: int, per_file: int = 5) -> list:
    """Write the generated functions as .c files under root.

    Returns the file paths.  Layout is per_file functions per file,
    zero-padded names, so ingest re-reads them in generation order.
    """
    functions = generate_corpus(count, seed)
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    paths = []
    width = len(str((count - 1) // per_file))
    for chunk_start in range(0, count, per_file):
        chunk = functions[chunk_start:chunk_start + per_file]
        path = root / f"synth_{chunk_start // per_file:0{width}d}.c"
        path.write_text("\n".join(fn.text for fn in chunk), encoding="utf-8")
        paths.append(path)
    return paths
