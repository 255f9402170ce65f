"""Single-fault variants: plant one small bug in a parsed function.

A deviant is the hard-negative counterpart of a clone: it stays lexically
close to the original (one edited site, everything else byte-identical)
while the behavior is allowed to drift.  Seven bug families are covered,
from operator swaps down to call-argument shuffling.

Every injection is a single contiguous splice, so

    original[:start] + after + original[end:] == deviant

holds exactly for the recorded bug span.  Injected text must still parse;
whether the result still compiles is only enforced for data-type bugs,
which are restricted to substitutions the declaring language accepts.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum

from .errors import InjectionFailed, NoApplicableBug, PostEditParseFailure
from .lang import Language, SourceFunction, parse
from .lang.query import (
    ARITHMETIC_OPS,
    COMPARISON_OPS,
    binding_is_const,
    binding_shape,
    decl_type_child,
    is_write_position,
    token_count,
    value_unused,
)
from .lang.render import Edit, apply_edits
from .lang.scope import ScopeInfo, analyze_scopes
from .lang.tree import AstNode


class BugKind(Enum):
    OPERATOR = "operator"
    DATA_TYPE = "data-type"
    VARIABLE = "variable"
    VALUE = "value"
    POINTER = "pointer"
    STATEMENT = "statement"
    FUNCTION_CALL = "function-call"


@dataclass
class DeviantResult:
    """A buggy variant plus the exact splice that produced it."""

    text: str
    bug: tuple        # (BugKind, (start, end) in source coords, before, after)
    seed: int


# deleted statements may not exceed this share of the function's tokens
_EDIT_BUDGET_SHARE = 0.10

_INT_FAMILY = ("size_t", "int", "short", "long")
_FLOAT_FAMILY = ("float", "double")

# widening conversions only: the initializer and arithmetic still compile
_JAVA_WIDEN = {"int": "long", "float": "double"}

_PLAIN_INT_RE = re.compile(r"[0-9]+\Z")
_FLOATISH_RE = re.compile(r"[.eEfF]")


def _text(node: AstNode, src: str) -> str:
    return src[node.start:node.end]


def _null_text(root: AstNode, language: Language) -> str:
    if language is Language.JAVA:
        return "null"
    if language is Language.CPP:
        return "nullptr"
    # NULL needs a header; plain 0 is always a valid C null pointer constant
    if any(t.text == "NULL" for t in root.terminals()):
        return "NULL"
    return "0"


# ---------------------------------------------------------------- operator

def _operator_targets(node: AstNode) -> list:
    op = node.children[1].text
    if op in COMPARISON_OPS:
        return sorted(COMPARISON_OPS - {op})
    if op not in ARITHMETIC_OPS:
        return []
    if op in ("+", "-", "*"):
        pool = {"+", "-", "*"}
    else:
        # / and % prove the operands take the full integer-ish set, except
        # that / on floating operands must not become %
        pool = set(ARITHMETIC_OPS)
        if any(t.kind == "number_literal" and _FLOATISH_RE.search(t.text)
               for t in node.terminals()):
            pool.discard("%")
    return sorted(pool - {op})


def _operator_sites(root, scope, language):
    sites = []
    for node in root.walk():
        if node.kind != "binary_expression":
            continue
        if _operator_targets(node):
            sites.append(node)
    return sites


def _operator_edit(site, src, root, scope, language, rng) -> Edit:
    targets = _operator_targets(site)
    if not targets:
        raise InjectionFailed("operator: no replacement at this site")
    op = site.children[1]
    return Edit(op.start, op.end, rng.choice(targets))


# --------------------------------------------------------------- data type

def _declared_bindings(decl: AstNode, scope: ScopeInfo) -> list:
    out = []
    for term in decl.terminals():
        b = scope.resolve(term)
        if b is not None and b.decl_node is term:
            out.append(b)
    return out


def _java_widen_ok(b, scope: ScopeInfo) -> bool:
    """Every use of the binding survives a widened numeric type.

    Subscripts, call arguments, returns, and assignments into other
    variables all reject a widened operand, so only uses whose value
    stays inside comparisons, own-variable updates, or this variable's
    own assignment survive.
    """
    for u in b.uses:
        p = u.parent
        if p is None:
            return False
        if p.kind == "binary_expression" and p.children[1].text in COMPARISON_OPS:
            continue
        if p.kind == "update_expression" and value_unused(p):
            continue
        if p.kind == "assignment_expression" and p.children[0] is u:
            continue
        if p.kind == "binary_expression" and p.children[1].text in ARITHMETIC_OPS:
            top = p
            while top.parent is not None and top.parent.kind in (
                    "binary_expression", "parenthesized_expression"):
                top = top.parent
            q = top.parent
            if (q is not None and q.kind == "assignment_expression"
                    and q.children[0].kind == "identifier"
                    and scope.resolve(q.children[0]) is b):
                continue
        return False
    return True


def _data_type_targets(decl, scope, language, root) -> list:
    type_term = decl_type_child(decl)
    if type_term is None or not type_term.is_terminal:
        return []
    if type_term.kind != "primitive_type":
        return []
    # a second type token ("long long", "long int") would make the swap a
    # spelling change rather than a width change
    idx = decl.children.index(type_term)
    if idx + 1 < len(decl.children):
        nxt = decl.children[idx + 1]
        if nxt.is_terminal and nxt.kind == "primitive_type":
            return []
    name = type_term.text
    if language is Language.JAVA:
        if decl.kind != "declaration" or name not in _JAVA_WIDEN:
            return []
        if not all(_java_widen_ok(b, scope) for b in _declared_bindings(decl, scope)):
            return []
        return [_JAVA_WIDEN[name]]
    if language is Language.CPP:
        # short* does not convert to int*; C merely warns, C++ refuses
        shapes = [binding_shape(b) for b in _declared_bindings(decl, scope)]
        if any(stars or ref for _t, stars, _a, ref in shapes):
            return []
    for fam in (_INT_FAMILY, _FLOAT_FAMILY):
        if name in fam:
            targets = [t for t in fam if t != name]
            if "size_t" in targets and not any(
                    t.text == "size_t" for t in root.terminals()):
                targets.remove("size_t")    # typedef may not be in scope
            return targets
    return []


def _data_type_sites(root, scope, language):
    sites = []
    for node in root.walk():
        if node.kind not in ("declaration", "parameter_declaration"):
            continue
        if _data_type_targets(node, scope, language, root):
            sites.append(node)
    return sites


def _data_type_edit(site, src, root, scope, language, rng) -> Edit:
    targets = _data_type_targets(site, scope, language, root)
    if not targets:
        raise InjectionFailed("data-type: no substitute at this site")
    type_term = decl_type_child(site)
    return Edit(type_term.start, type_term.end, rng.choice(targets))


# ---------------------------------------------------------------- variable

def _swap_candidates(use: AstNode, b, scope: ScopeInfo) -> list:
    shape = binding_shape(b)
    out = set()
    for b2 in scope.bindings:
        if b2 is b or b2.name == b.name:
            continue
        if len(scope.by_name(b2.name)) != 1:
            continue                # the written name must resolve to b2
        if binding_shape(b2) != shape:
            continue
        if not scope.reachable(b2.name, use):
            continue
        if is_write_position(use) and binding_is_const(b2):
            continue
        out.add(b2.name)
    return sorted(out)


def _init_removal_ok(init_decl: AstNode, scope: ScopeInfo, language: Language) -> bool:
    """Dropping `= expr` from this declarator keeps the code compilable."""
    if language is Language.JAVA:
        return False                # definite assignment forbids it
    if len(init_decl.children) != 3 or init_decl.children[1].text != "=":
        return False
    bs = _declared_bindings(init_decl, scope)
    if len(bs) != 1:
        return False
    _type, stars, array, ref = binding_shape(bs[0])
    if stars or ref or array:
        return False                # pointer inits belong to the pointer kind
    if language is Language.CPP and binding_is_const(bs[0]):
        return False
    return True


def _variable_sites(root, scope, language):
    sites = []
    for b in scope.bindings:
        for u in b.uses:
            if _swap_candidates(u, b, scope):
                sites.append(u)
    for node in root.walk():
        if node.kind == "init_declarator" and _init_removal_ok(node, scope, language):
            sites.append(node)
    return sites


def _variable_edit(site, src, root, scope, language, rng) -> Edit:
    if site.kind == "init_declarator":
        return Edit(site.children[0].end, site.children[2].end, "")
    b = scope.resolve(site)
    if b is None:
        raise InjectionFailed("variable: unresolved identifier site")
    cands = _swap_candidates(site, b, scope)
    if not cands:
        raise InjectionFailed("variable: no same-shape replacement in scope")
    return Edit(site.start, site.end, rng.choice(cands))


# ------------------------------------------------------------------- value

def _value_candidates(term: AstNode) -> list:
    v = int(term.text)
    cands = {0, 1, -1, v - 1, v + 1, 2 * v} - {v}
    if any(a.kind == "array_declarator" for a in term.ancestors()):
        cands = {c for c in cands if c > 0}     # negative array size
    return sorted(cands)


def _value_ok(term: AstNode) -> bool:
    if term.kind in ("true", "false"):
        return True
    if term.kind != "number_literal" or not _PLAIN_INT_RE.match(term.text):
        return False
    p = term.parent
    if p is not None and p.kind == "unary_expression" and p.children[0].text == "-":
        return False                # the literal alone misstates the value
    node = term
    while p is not None:
        if p.kind == "case_statement":
            if len(p.children) > 1 and node is p.children[1]:
                return False        # a changed label risks a duplicate case
            break                   # the arm's body is fair game
        node, p = p, p.parent
    return bool(_value_candidates(term))


def _value_sites(root, scope, language):
    return [t for t in root.terminals() if _value_ok(t)]


def _value_edit(site, src, root, scope, language, rng) -> Edit:
    if site.kind in ("true", "false"):
        flip = "false" if site.text == "true" else "true"
        return Edit(site.start, site.end, flip)
    cands = _value_candidates(site)
    if not cands:
        raise InjectionFailed("value: no replacement constant")
    c = rng.choice(cands)
    return Edit(site.start, site.end, str(c) if c >= 0 else f"(-{-c})")


# ----------------------------------------------------------------- pointer

def _pointer_decl_ok(init_decl: AstNode, scope: ScopeInfo, language: Language) -> bool:
    if len(init_decl.children) != 3 or init_decl.children[1].text != "=":
        return False
    bs = _declared_bindings(init_decl, scope)
    if len(bs) != 1:
        return False
    if binding_shape(bs[0])[1] < 1:
        return False
    if language is Language.CPP and binding_is_const(bs[0]):
        return False
    return True


def _pointer_assign_ok(node: AstNode, scope: ScopeInfo) -> bool:
    lhs, op, rhs = node.children[0], node.children[1], node.children[2]
    if op.text != "=" or lhs.kind != "identifier":
        return False
    if rhs.kind == "null_literal" or (
            rhs.is_terminal and rhs.text in ("0", "NULL", "nullptr", "null")):
        return False                # nulling it again changes nothing
    b = scope.resolve(lhs)
    return b is not None and binding_shape(b)[1] >= 1


def _pointer_sites(root, scope, language):
    if language is Language.JAVA:
        return []                   # no raw pointers to corrupt
    sites = []
    for node in root.walk():
        if node.kind == "init_declarator" and _pointer_decl_ok(node, scope, language):
            sites.append(node)
        elif node.kind == "assignment_expression" and _pointer_assign_ok(node, scope):
            sites.append(node)
    return sites


def _pointer_edit(site, src, root, scope, language, rng) -> Edit:
    null = _null_text(root, language)
    if site.kind == "init_declarator":
        value = site.children[2]
        ops = ["remove"]
        if value.kind != "null_literal" and _text(value, src) != null:
            ops.append("null")
        op = rng.choice(ops)
        if op == "remove":
            return Edit(site.children[0].end, value.end, "")
        return Edit(value.start, value.end, null)
    rhs = site.children[2]
    if rhs.kind == "null_literal" or _text(rhs, src) == null:
        raise InjectionFailed("pointer: assignment is already null")
    return Edit(rhs.start, rhs.end, null)


# --------------------------------------------------------------- statement

def _branch_stmt_count(branch: AstNode) -> int:
    if branch.kind != "compound_statement":
        return 1
    return sum(1 for ch in branch.children if not ch.is_terminal)


def _statement_ok(node: AstNode, language: Language, budget: int) -> bool:
    if node.kind != "if_statement" or len(node.children) != 3:
        return False                # guards only: an else would dangle
    if _branch_stmt_count(node.children[2]) > 3:
        return False
    if token_count(node) > budget:
        return False
    if language is Language.JAVA:
        cond = node.children[1]
        if any(n.kind in ("assignment_expression", "update_expression")
               for n in cond.walk()):
            return False            # the condition feeds definite assignment
    return True


def _statement_sites(root, scope, language):
    budget = max(1, int(token_count(root) * _EDIT_BUDGET_SHARE))
    return [n for n in root.walk() if _statement_ok(n, language, budget)]


def _statement_edit(site, src, root, scope, language, rng) -> Edit:
    return Edit(site.start, site.end, "")


# ----------------------------------------------------------- function call

def _call_args(call: AstNode) -> list:
    arglist = call.children[-1]
    return [c for c in arglist.children
            if not (c.is_terminal and c.text in ("(", ")", ","))]


def _function_call_sites(root, scope, language):
    return [n for n in root.walk() if n.kind == "call_expression"]


def _call_ops(call: AstNode, src: str, null: str) -> list:
    args = _call_args(call)
    ops = ["add"]
    if args:
        ops.append("remove")
    if any(_text(a, src) != null for a in args):
        ops.append("null")
    texts = [_text(a, src) for a in args]
    if len(set(texts)) >= 2:
        ops.append("swap")
    return sorted(ops)


def _function_call_edit(site, src, root, scope, language, rng) -> Edit:
    null = _null_text(root, language)
    args = _call_args(site)
    op = rng.choice(_call_ops(site, src, null))
    if op == "swap":
        pairs = [(i, j)
                 for i in range(len(args)) for j in range(i + 1, len(args))
                 if _text(args[i], src) != _text(args[j], src)]
        i, j = pairs[rng.randrange(len(pairs))]
        a, b = args[i], args[j]
        mid = src[a.end:b.start]
        return Edit(a.start, b.end, f"{_text(b, src)}{mid}{_text(a, src)}")
    if op == "remove":
        idx = rng.randrange(len(args))
        if len(args) == 1:
            return Edit(args[0].start, args[0].end, "")
        if idx > 0:
            return Edit(args[idx - 1].end, args[idx].end, "")
        return Edit(args[0].start, args[1].start, "")
    if op == "null":
        pool = [a for a in args if _text(a, src) != null]
        a = pool[rng.randrange(len(pool))]
        return Edit(a.start, a.end, null)
    # add: a visible name when one exists, otherwise a null-ish constant
    names = sorted({b.name for b in scope.bindings
                    if len(scope.by_name(b.name)) == 1
                    and scope.reachable(b.name, site)})
    extra = rng.choice(names) if names else null
    close = site.children[-1].children[-1]
    lead = ", " if args else ""
    return Edit(close.start, close.start, f"{lead}{extra}")


# ------------------------------------------------------------ entry points

_SITE_FINDERS = {
    BugKind.OPERATOR: _operator_sites,
    BugKind.DATA_TYPE: _data_type_sites,
    BugKind.VARIABLE: _variable_sites,
    BugKind.VALUE: _value_sites,
    BugKind.POINTER: _pointer_sites,
    BugKind.STATEMENT: _statement_sites,
    BugKind.FUNCTION_CALL: _function_call_sites,
}

_EDIT_BUILDERS = {
    BugKind.OPERATOR: _operator_edit,
    BugKind.DATA_TYPE: _data_type_edit,
    BugKind.VARIABLE: _variable_edit,
    BugKind.VALUE: _value_edit,
    BugKind.POINTER: _pointer_edit,
    BugKind.STATEMENT: _statement_edit,
    BugKind.FUNCTION_CALL: _function_call_edit,
}


def bug_sites(kind: BugKind, root: AstNode, scope: ScopeInfo,
              language: Language) -> list:
    """Candidate sites for one bug kind, ordered by source position."""
    sites = _SITE_FINDERS[kind](root, scope, language)
    return sorted(sites, key=lambda n: (n.start, n.end))


def inject_bug(kind: BugKind, site: AstNode, fn: SourceFunction,
               root: AstNode = None, scope: ScopeInfo = None,
               rng_seed: int = 0) -> DeviantResult:
    """Plant one bug of the given kind at one site; result re-parses."""
    if root is None:
        root = parse(fn)
    if scope is None:
        scope = analyze_scopes(root, fn.text, fn.language)
    rng = random.Random(rng_seed)
    edit = _EDIT_BUILDERS[kind](site, fn.text, root, scope, fn.language, rng)
    try:
        new_text, _tree = apply_edits(fn, [edit])
    except PostEditParseFailure as exc:
        raise InjectionFailed(
            f"{kind.value} at [{site.start},{site.end}): {exc}") from exc
    if new_text == fn.text:
        raise InjectionFailed(f"{kind.value} produced identical text")
    before = fn.text[edit.start:edit.end]
    return DeviantResult(text=new_text,
                         bug=(kind, (edit.start, edit.end), before, edit.text),
                         seed=rng_seed)


def token_edit_distance(a: list, b: list) -> int:
    """Levenshtein distance over token text sequences."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ta in enumerate(a, 1):
        cur = [i]
        for j, tb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[-1] + 1,
                           prev[j - 1] + (ta != tb)))
        prev = cur
    return prev[-1]


_MAX_ATTEMPTS = 16


def generate_deviant(fn: SourceFunction, rng_seed: int) -> DeviantResult:
    """Plant exactly one bug, kind drawn uniformly over applicable kinds.

    The token-level edit distance to the original stays within 10% of the
    function's token count (at least one token for very short functions).
    """
    rng = random.Random(rng_seed)
    root = parse(fn)
    scope = analyze_scopes(root, fn.text, fn.language)
    kinds = [k for k in BugKind
             if bug_sites(k, root, scope, fn.language)]
    if not kinds:
        raise NoApplicableBug(f"no bug site in function {fn.id!r}")
    orig_tokens = [t.text for t in root.terminals()]
    budget = max(1, int(len(orig_tokens) * _EDIT_BUDGET_SHARE))
    for _attempt in range(_MAX_ATTEMPTS):
        kind = rng.choice(kinds)
        sites = bug_sites(kind, root, scope, fn.language)
        site = sites[rng.randrange(len(sites))]
        try:
            out = inject_bug(kind, site, fn, root=root, scope=scope,
                             rng_seed=rng.getrandbits(64))
        except InjectionFailed:
            continue
        new_tokens = [t.text for t in parse(
            SourceFunction(fn.id, fn.language, out.text)).terminals()]
        if token_edit_distance(orig_tokens, new_tokens) > budget:
            continue
        return DeviantResult(text=out.text, bug=out.bug, seed=rng_seed)
    raise NoApplicableBug(
        f"no bug survived {_MAX_ATTEMPTS} attempts in function {fn.id!r}")
