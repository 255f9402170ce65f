"""Semantics-preserving clone synthesis for C/C++/Java functions.

Five rewrite families produce near-duplicates of a function whose runtime
behavior is unchanged: identifier renaming, statement rewriting (ternary
to if/else, increment desugaring, comparison mirroring), block rewriting
(loop form swaps, if/else branch swaps), dead-code insertion, and
reordering of independent declarations.

Every application builds character-span edits against the current text,
splices them in one pass, and re-parses; a rewrite that fails to parse is
reported as TransformFailed and skipped by the driver.  All randomness
flows through a single seeded generator, so generate_clone is a pure
function of (function text, seed, name pool).
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum

from .errors import NoApplicableTransform, PostEditParseFailure, TransformFailed
from .lang import Language, SourceFunction, parse
from .lang.lexer import PRIMITIVE_TYPES, reserved_words
from .lang.query import (
    COMPARISON_OPS,
    LOOP_KINDS,
    binding_is_final,
    decl_type_child,
    for_parts,
    is_pure,
    owned_continues,
    value_unused,
)
from .lang.render import Edit, apply_edits
from .lang.scope import (
    ScopeInfo,
    analyze_scopes,
    declarator_name,
    function_body,
    function_name_node,
    independent_decls,
)
from .lang.tree import AstNode


class CloneTransformKind(Enum):
    RENAME_IDENTIFIER = "rename-identifier"
    REWRITE_STATEMENT = "rewrite-statement"
    REWRITE_BLOCK = "rewrite-block"
    INSERT_DEAD_CODE = "insert-dead-code"
    PERMUTE_DECLS = "permute-decls"


@dataclass
class CloneResult:
    """A transformed function plus the record of how it was produced."""

    text: str
    applied: list     # ordered (CloneTransformKind, site span, detail) entries
    seed: int


# fallback vocabulary for random renaming when no corpus vocabulary is given
DEFAULT_NAME_POOL = (
    "acc", "arg", "aux", "buf", "cnt", "cur", "dst", "elem", "flag", "idx",
    "item", "len", "lhs", "mem", "num", "pos", "ptr", "res", "rhs", "slot",
    "src_val", "tmp", "total", "val",
)

_MIRROR = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "==": "==", "!=": "!="}
_NEGATE = {"<": ">=", ">": "<=", "<=": ">", ">=": "<", "==": "!=", "!=": "=="}

# statically-false guards; Java allows dead if-branches but not dead loop bodies
_DEAD_GUARDS = {
    Language.C: ("if (0)", "while (2 < 0)"),
    Language.CPP: ("if (false)", "while (2 < 0)"),
    Language.JAVA: ("if (false)",),
}

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# Java compound assignment carries an implicit narrowing cast; x = x + 1
# does not, so only these operand types desugar cleanly
_JAVA_INC_TYPES = frozenset({"int", "long", "float", "double"})


def _text(node: AstNode, src: str) -> str:
    return src[node.start:node.end]


def _token_texts(node: AstNode):
    return tuple(t.text for t in node.terminals())


# ---- site discovery ------------------------------------------------------


def applicable(kind: CloneTransformKind, root: AstNode, scope: ScopeInfo,
               language: Language):
    """Candidate sites where `kind` is provably semantics-preserving."""
    finder = _SITE_FINDERS[kind]
    sites = finder(root, scope, language)
    return sorted(sites, key=lambda n: (n.start, n.end))


def _rename_sites(root, scope, language):
    sites = [b.decl_node for b in scope.bindings]
    fname = function_name_node(root)
    # the exported name only counts once the function binds something of
    # its own; a variant differing solely in its outward name is a linkage
    # break, not a clone
    if sites and fname is not None and fname.text != "main":
        # a method invoked through an explicit receiver is spelled as a
        # field name; renaming the declaration would orphan those calls
        shadowed = any(t.kind == "field_identifier" and t.text == fname.text
                       for t in root.terminals())
        if not shadowed:
            sites.append(fname)
    return sites


def _ternary_statement_ok(stmt):
    expr = stmt.children[0]
    if expr.kind == "conditional_expression":
        return True
    if expr.kind == "assignment_expression":
        lhs, _op, rhs = expr.children
        return lhs.kind == "identifier" and rhs.kind == "conditional_expression"
    return False


def _update_target(node: AstNode):
    """(identifier terminal, '++' or '--' text) of an update expression."""
    if len(node.children) != 2:
        return None, None
    a, b = node.children
    if a.kind == "identifier" and b.text in ("++", "--"):
        return a, b.text
    if b.kind == "identifier" and a.text in ("++", "--"):
        return b, a.text
    return None, None


def _increment_operand_ok(term: AstNode, scope: ScopeInfo, language: Language) -> bool:
    b = scope.resolve(term)
    if language is Language.C:
        # any identifier the original compiled with is arithmetic or pointer
        return True
    if b is None:
        return False
    if language is Language.JAVA:
        return b.type_text in _JAVA_INC_TYPES
    # C++: stick to primitive-typed locals so operator overloads stay out
    # (auto may deduce a class type, so it does not count)
    toks = b.type_text.replace("*", " ").replace("&", " ").split()
    allowed = (PRIMITIVE_TYPES[Language.CPP] - {"auto"}) | {"unsigned", "signed", "const"}
    return bool(toks) and all(t in allowed for t in toks)


def _increment_assign_parts(stmt, scope, language):
    """For `y = x++;` style statements: (lhs, target, sign) or None."""
    expr = stmt.children[0]
    if expr.kind != "assignment_expression":
        return None
    lhs, op, rhs = expr.children
    if lhs.kind != "identifier" or op.text != "=" or rhs.kind != "update_expression":
        return None
    target, sign = _update_target(rhs)
    if target is None or target.text == lhs.text:
        return None
    if not _increment_operand_ok(target, scope, language):
        return None
    prefix = rhs.children[0].is_terminal and rhs.children[0].text in ("++", "--")
    return lhs, target, sign, prefix


def _rewrite_statement_sites(root, scope, language):
    sites = []
    for node in root.walk():
        if node.kind == "expression_statement" and len(node.children) == 2:
            if _ternary_statement_ok(node):
                sites.append(node)
            elif _increment_assign_parts(node, scope, language) is not None:
                sites.append(node)
        elif node.kind == "update_expression":
            target, _sign = _update_target(node)
            if (target is not None and value_unused(node)
                    and _increment_operand_ok(target, scope, language)):
                sites.append(node)
        elif node.kind == "binary_expression":
            left, op, right = node.children
            if op.text not in COMPARISON_OPS:
                continue
            if not (is_pure(left) and is_pure(right)):
                continue
            # a comparison operand would re-associate once the sides swap
            if any(ch.kind == "binary_expression"
                   and ch.children[1].text in COMPARISON_OPS
                   for ch in (left, right)):
                continue
            sites.append(node)
    return sites


def _decl_declared_bindings(decl: AstNode, scope: ScopeInfo):
    out = []
    for term in decl.terminals():
        b = scope.resolve(term)
        if b is not None and b.decl_node is term:
            out.append(b)
    return out


def _hoist_safe(decl: AstNode, scope: ScopeInfo) -> bool:
    """Moving this declaration into the enclosing block must not collide."""
    for b in _decl_declared_bindings(decl, scope):
        if len(scope.by_name(b.name)) != 1 or b.name in scope.external:
            return False
    return True


def _rewrite_block_sites(root, scope, language):
    sites = []
    for node in root.walk():
        if node.kind == "for_statement":
            if node.parent is None or node.parent.kind != "compound_statement":
                continue
            init, init_is_decl, _cond, update, body = for_parts(node)
            if init_is_decl and not _hoist_safe(init, scope):
                continue
            owned = owned_continues(body)
            if owned and update is not None and update.kind == "comma_expression":
                continue            # multi-part update before continue is fragile
            sites.append(node)
        elif node.kind == "while_statement":
            sites.append(node)
        elif node.kind == "if_statement" and len(node.children) == 4:
            sites.append(node)      # has an else clause
    return sites


def _dead_copy_ok(stmt: AstNode, scope: ScopeInfo, language: Language) -> bool:
    for n in stmt.walk():
        if n.kind == "labeled_statement":
            return False            # C gives labels function scope; keep uniform
        if language is Language.JAVA and n.kind == "assignment_expression":
            lhs = n.children[0]
            if lhs.kind == "identifier":
                b = scope.resolve(lhs)
                if b is not None and binding_is_final(b):
                    return False    # a copied write trips definite-assignment
    return True


def _dead_code_sites(root, scope, language):
    sites = []
    for node in root.walk():
        if node.kind != "compound_statement":
            continue
        for ch in node.children:
            if not ch.is_terminal and _dead_copy_ok(ch, scope, language):
                sites.append(ch)
    return sites


def _movable_decls(root, scope):
    """Top-level declarations safe to hoist to the head of the body."""
    body = function_body(root)
    if body is None:
        return None, []
    indep = {id(d) for d in independent_decls(root, scope)}
    movable = []
    for ch in body.children:
        if ch.is_terminal or ch.kind != "declaration" or id(ch) not in indep:
            continue
        type_child = decl_type_child(ch)
        ok = True
        for term in ch.terminals():
            if term.kind != "identifier":
                continue
            b = scope.resolve(term)
            if b is not None and b.decl_node is term:
                continue
            # type names stay external by construction; anything else the
            # initializer reads could be written by the statements we cross
            if type_child is not None and type_child.start <= term.start < type_child.end:
                continue
            ok = False
            break
        if ok and _hoist_safe(ch, scope):
            movable.append(ch)
    return body, movable


def _permute_decl_sites(root, scope, language):
    body, movable = _movable_decls(root, scope)
    if not movable:
        return []
    first_stmt = next((ch for ch in body.children if not ch.is_terminal), None)
    if len(movable) == 1 and movable[0] is first_stmt:
        return []                   # moving the sole candidate changes nothing
    return [body]


_SITE_FINDERS = {
    CloneTransformKind.RENAME_IDENTIFIER: _rename_sites,
    CloneTransformKind.REWRITE_STATEMENT: _rewrite_statement_sites,
    CloneTransformKind.REWRITE_BLOCK: _rewrite_block_sites,
    CloneTransformKind.INSERT_DEAD_CODE: _dead_code_sites,
    CloneTransformKind.PERMUTE_DECLS: _permute_decl_sites,
}


# ---- edit builders -------------------------------------------------------


def _split_subwords(name: str):
    if "_" in name.strip("_"):
        return [w for w in name.split("_") if w]
    return re.findall(r"[A-Z]+(?![a-z])|[A-Z][a-z0-9]*|[a-z0-9]+", name)


def _join_subwords(words, template: str) -> str:
    if "_" in template.strip("_"):
        return "_".join(words)
    head = words[0]
    if template[:1].islower():
        head = head[:1].lower() + head[1:]
    elif template[:1].isupper():
        head = head[:1].upper() + head[1:]
    rest = [w[:1].upper() + w[1:] for w in words[1:]]
    return "".join([head] + rest)


def _candidate_names(old: str, rng: random.Random, name_pool):
    """Rename candidates, best strategy first: single-char swap, sub-word
    permutation or drop, then random vocabulary draws."""
    out = []
    if len(old) == 1:
        letters = [c for c in "abcdefghijklmnopqrstuvwxyz" if c != old.lower()]
        rng.shuffle(letters)
        out.extend(letters)
    else:
        words = _split_subwords(old)
        if len(words) >= 2:
            cands = set()
            perm = list(words)
            for _ in range(6):
                rng.shuffle(perm)
                if perm != words:
                    cands.add(_join_subwords(perm, old))
            for _ in range(4):
                k = rng.randrange(1, len(words))
                keep = sorted(rng.sample(range(len(words)), k))
                if keep != list(range(len(words))):
                    cands.add(_join_subwords([words[i] for i in keep], old))
            ordered = sorted(cands)
            rng.shuffle(ordered)
            out.extend(ordered)
    pool = [n for n in name_pool if n != old]
    rng.shuffle(pool)
    out.extend(pool)
    return out


def _rename_edits(site, src, root, scope, language, rng, name_pool):
    binding = scope.resolve(site)
    if binding is not None and binding.decl_node is site:
        old = binding.name
        targets = binding.sites
    else:
        fname = function_name_node(root)
        if fname is not site:
            raise TransformFailed("rename site is not a declared name")
        old = site.text
        # recursion shows up as unresolved uses of the function's own name
        targets = [t for t in root.terminals()
                   if t.kind == "identifier" and t.text == old
                   and scope.resolve(t) is None]
    taken = {t.text for t in root.terminals()
             if t.text and (t.text[0].isalpha() or t.text[0] == "_")}
    taken |= reserved_words(language)
    new = None
    for cand in _candidate_names(old, rng, name_pool):
        if cand != old and cand not in taken and _IDENT_RE.match(cand):
            new = cand
            break
    if new is None:
        n = 2
        while f"{old}{n}" in taken:
            n += 1
        new = f"{old}{n}"
    edits = [Edit(t.start, t.end, new) for t in targets]
    return edits, f"{old}->{new}"


def _strip_parens(node: AstNode, src: str) -> str:
    if node.kind == "parenthesized_expression":
        return _text(node.children[1], src)
    return _text(node, src)


def _rewrite_statement_edits(site, src, root, scope, language, rng, name_pool):
    if site.kind == "binary_expression":
        left, op, right = site.children
        new = f"{_text(right, src)} {_MIRROR[op.text]} {_text(left, src)}"
        return [Edit(site.start, site.end, new)], "mirror-comparison"

    if site.kind == "update_expression":
        target, sign = _update_target(site)
        x = target.text
        new = f"{x} = {x} {sign[0]} 1"
        return [Edit(site.start, site.end, new)], "desugar-increment"

    expr = site.children[0]
    if expr.kind == "conditional_expression":
        cond, _q, a, _c, b = expr.children
        cond_text = _strip_parens(cond, src)
        new = f"if ({cond_text}) {{{_text(a, src)};}} else {{{_text(b, src)};}}"
        return [Edit(site.start, site.end, new)], "ternary-to-if"

    lhs, op, rhs = expr.children
    if rhs.kind == "conditional_expression":
        cond, _q, a, _c, b = rhs.children
        cond_text = _strip_parens(cond, src)
        l, o = _text(lhs, src), op.text
        new = (f"if ({cond_text}) {{{l} {o} {_text(a, src)};}}"
               f" else {{{l} {o} {_text(b, src)};}}")
        return [Edit(site.start, site.end, new)], "ternary-to-if"

    parts = _increment_assign_parts(site, scope, language)
    if parts is None:
        raise TransformFailed("statement shape changed under this site")
    lhs, target, sign, prefix = parts
    y, x = lhs.text, target.text
    step = f"{x} = {x} {sign[0]} 1;"
    new = f"{step} {y} = {x};" if prefix else f"{y} = {x}; {step}"
    return [Edit(site.start, site.end, new)], "desugar-increment"


def _brace(stmt: AstNode, src: str) -> str:
    if stmt.kind == "compound_statement":
        return _text(stmt, src)
    return "{" + _text(stmt, src) + "}"


def _true_literal(language: Language) -> str:
    return "1" if language is Language.C else "true"


def _rewrite_block_edits(site, src, root, scope, language, rng, name_pool):
    if site.kind == "while_statement":
        _kw, paren, body = site.children
        cond_text = _text(paren.children[1], src)
        return [Edit(site.start, body.start, f"for (; {cond_text}; ) ")], "while-to-for"

    if site.kind == "if_statement":
        _kw, paren, then_stmt, else_clause = site.children
        else_stmt = else_clause.children[1]
        cond = paren.children[1]
        if cond.kind == "binary_expression" and cond.children[1].text in _NEGATE:
            l, op, r = cond.children
            neg = f"{_text(l, src)} {_NEGATE[op.text]} {_text(r, src)}"
        else:
            neg = f"!({_text(cond, src)})"
        new = f"if ({neg}) {_brace(else_stmt, src)} else {_brace(then_stmt, src)}"
        return [Edit(site.start, site.end, new)], "swap-if-else"

    init, init_is_decl, cond, update, body = for_parts(site)
    head = ""
    if init is not None:
        head = _text(init, src) + ("" if init_is_decl else ";") + " "
    cond_text = _text(cond, src) if cond is not None else _true_literal(language)
    head += f"while ({cond_text}) "
    edits = [Edit(site.start, body.start, head)]
    if update is not None:
        upd = _text(update, src)
        for cont in owned_continues(body):
            edits.append(Edit(cont.start, cont.end, f"{{ {upd}; continue; }}"))
        if body.kind == "compound_statement":
            edits.append(Edit(body.end - 1, body.end - 1, f"{upd}; "))
        else:
            edits.append(Edit(body.start, body.start, "{ "))
            edits.append(Edit(body.end, body.end, f" {upd}; }}"))
    return edits, "for-to-while"


def _dead_code_edits(site, src, root, scope, language, rng, name_pool):
    block = site.parent
    stmts = [ch for ch in block.children if not ch.is_terminal]
    idx = stmts.index(site)
    stretch = 0
    for st in stmts[idx:idx + 3]:
        if not _dead_copy_ok(st, scope, language):
            break
        stretch += 1
    count = rng.randint(1, stretch)
    run = stmts[idx:idx + count]
    run_text = src[run[0].start:run[-1].end]
    guard = _DEAD_GUARDS[language][rng.randrange(len(_DEAD_GUARDS[language]))]
    inserted = f"{guard} {{ {run_text} }}"
    line_start = src.rfind("\n", 0, site.start) + 1
    lead = src[line_start:site.start]
    tail = "\n" + lead if lead.strip() == "" else " "
    edits = [Edit(site.start, site.start, inserted + tail)]
    detail = f"guard={guard!r} copied={count} +[{site.start},{site.start + len(inserted + tail)})"
    return edits, detail


def _permute_decl_edits(site, src, root, scope, language, rng, name_pool):
    body, movable = _movable_decls(root, scope)
    if not movable:
        raise TransformFailed("no movable declarations under this site")
    order = list(range(len(movable)))
    rng.shuffle(order)
    if order == sorted(order) and len(order) > 1:
        order[0], order[1] = order[1], order[0]
    snippets = [_text(d, src) for d in movable]
    first_stmt = next(ch for ch in body.children if not ch.is_terminal)
    edits = [Edit(first_stmt.start, first_stmt.start,
                  " ".join(snippets[i] for i in order) + " ")]
    edits.extend(Edit(d.start, d.end, "") for d in movable)
    names = [b.name for d in movable for b in _decl_declared_bindings(d, scope)]
    return edits, f"names={','.join(names)} order={order}"


_EDIT_BUILDERS = {
    CloneTransformKind.RENAME_IDENTIFIER: _rename_edits,
    CloneTransformKind.REWRITE_STATEMENT: _rewrite_statement_edits,
    CloneTransformKind.REWRITE_BLOCK: _rewrite_block_edits,
    CloneTransformKind.INSERT_DEAD_CODE: _dead_code_edits,
    CloneTransformKind.PERMUTE_DECLS: _permute_decl_edits,
}


# ---- drivers -------------------------------------------------------------


def apply_transform(kind: CloneTransformKind, site: AstNode, fn: SourceFunction,
                    root: AstNode = None, scope: ScopeInfo = None,
                    rng_seed: int = 0, name_pool=DEFAULT_NAME_POOL) -> CloneResult:
    """Apply one transform at one site; the result re-parses or this raises."""
    if root is None:
        root = parse(fn)
    if scope is None:
        scope = analyze_scopes(root, fn.text, fn.language)
    rng = random.Random(rng_seed)
    builder = _EDIT_BUILDERS[kind]
    edits, detail = builder(site, fn.text, root, scope, fn.language, rng, name_pool)
    try:
        new_text, _tree = apply_edits(fn, edits)
    except PostEditParseFailure as exc:
        raise TransformFailed(
            f"{kind.value} at [{site.start},{site.end}): {exc}") from exc
    if new_text == fn.text:
        raise TransformFailed(f"{kind.value} produced identical text")
    return CloneResult(text=new_text, applied=[(kind, site.span, detail)],
                       seed=rng_seed)


def generate_clone(fn: SourceFunction, rng_seed: int,
                   name_pool=DEFAULT_NAME_POOL) -> CloneResult:
    """Compose 1-4 randomly chosen transforms, re-parsing between steps."""
    rng = random.Random(rng_seed)
    want = rng.choice((1, 2, 3, 4))
    cur = fn
    applied: list = []
    for _step in range(want):
        nxt = _advance(cur, rng, applied, name_pool, avoid=None)
        if nxt is None:
            break
        cur = nxt
    if not applied:
        raise NoApplicableTransform(f"{fn.id}: no transform site found")
    if cur.text == fn.text:
        # transforms can cancel (a comparison mirrored twice); force one more
        nxt = _advance(cur, rng, applied, name_pool, avoid=fn.text)
        if nxt is None:
            raise NoApplicableTransform(f"{fn.id}: transforms cancelled out")
        cur = nxt
    return CloneResult(text=cur.text, applied=applied, seed=rng_seed)


def _advance(cur: SourceFunction, rng: random.Random, applied: list,
             name_pool, avoid):
    """Apply one random applicable transform to `cur`.

    Returns the new SourceFunction and appends the transform record to
    `applied`, or returns None when every kind/site combination fails.
    `avoid` is a text the result must differ from (cancellation breaker).
    """
    root = parse(cur)
    scope = analyze_scopes(root, cur.text, cur.language)
    kinds = [k for k in CloneTransformKind
             if applicable(k, root, scope, cur.language)]
    rng.shuffle(kinds)
    for kind in kinds:
        sites = applicable(kind, root, scope, cur.language)
        order = list(range(len(sites)))
        rng.shuffle(order)
        for idx in order[:3]:
            try:
                res = apply_transform(kind, sites[idx], cur, root, scope,
                                      rng_seed=rng.getrandbits(64),
                                      name_pool=name_pool)
            except TransformFailed:
                continue
            if avoid is not None and res.text == avoid:
                continue
            applied.extend(res.applied)
            return SourceFunction(cur.id, cur.language, res.text)
    return None
