"""Read-only structural questions about parsed trees.

Shared by the clone and deviant generators; nothing here mutates a tree
or consults randomness.
"""

from __future__ import annotations

from .tree import AstNode

SIDE_EFFECT_KINDS = frozenset({
    "call_expression", "assignment_expression", "update_expression",
    "new_expression", "delete_expression",
})

LOOP_KINDS = frozenset({
    "for_statement", "while_statement", "do_statement", "enhanced_for_statement",
})

COMPARISON_OPS = frozenset({"<", ">", "<=", ">=", "==", "!="})
ARITHMETIC_OPS = frozenset({"+", "-", "*", "/", "%"})

_STORAGE_MODIFIERS = frozenset({
    "static", "register", "extern", "volatile", "restrict", "final",
    "const", "constexpr",
})

_CONST_MARKERS = ("const", "constexpr", "final")

_DECL_STATEMENT_KINDS = (
    "declaration", "field_declaration", "parameter_declaration", "formal_parameter",
)


def is_pure(node: AstNode) -> bool:
    """No calls, writes, or allocations anywhere in the subtree."""
    return not any(n.kind in SIDE_EFFECT_KINDS for n in node.walk())


def for_parts(loop: AstNode):
    """(init, init_is_decl, cond, update, body) of a for_statement."""
    kids = loop.children
    i = 2
    init = None
    init_is_decl = False
    if kids[i].is_terminal and kids[i].text == ";":
        i += 1
    elif kids[i].kind == "declaration":
        init, init_is_decl = kids[i], True
        i += 1
    else:
        init = kids[i]
        i += 2                      # expression then ';'
    cond = None
    if not (kids[i].is_terminal and kids[i].text == ";"):
        cond = kids[i]
        i += 1
    i += 1                          # ';'
    update = None
    if not (kids[i].is_terminal and kids[i].text == ")"):
        update = kids[i]
        i += 1
    return init, init_is_decl, cond, update, kids[-1]


def value_unused(node: AstNode) -> bool:
    """True when the expression's value is discarded (stmt or for-update)."""
    cur = node
    while cur.parent is not None and cur.parent.kind == "comma_expression":
        cur = cur.parent
    parent = cur.parent
    if parent is None:
        return False
    if parent.kind == "expression_statement":
        return True
    if parent.kind == "for_statement":
        return for_parts(parent)[3] is cur
    return False


def owned_continues(body: AstNode):
    """Unlabeled continue statements that target this loop's body."""
    out = []
    stack = [body] if body.kind not in LOOP_KINDS else []
    while stack:
        n = stack.pop()
        if n.kind in LOOP_KINDS:
            continue
        if n.kind == "continue_statement":
            if not any(ch.kind == "statement_identifier" for ch in n.children):
                out.append(n)
            continue
        stack.extend(n.children)
    return out


def decl_type_child(decl: AstNode):
    """The type node of a declaration, skipping storage modifiers."""
    for ch in decl.children:
        if ch.is_terminal and ch.text in _STORAGE_MODIFIERS:
            continue
        return ch
    return None


def decl_statement_of(node: AstNode):
    for anc in node.ancestors():
        if anc.kind in _DECL_STATEMENT_KINDS:
            return anc
    return None


def binding_is_final(b) -> bool:
    decl = decl_statement_of(b.decl_node)
    return decl is not None and any(t.text == "final" for t in decl.terminals())


def binding_is_const(b) -> bool:
    decl = decl_statement_of(b.decl_node)
    return decl is not None and any(t.text in _CONST_MARKERS for t in decl.terminals())


def binding_shape(b) -> tuple:
    """(normalized type, pointer depth, array?, reference?) of a binding.

    The declarator carries pointer/array structure that type_text alone
    misses; two bindings may swap roles in an expression only when their
    shapes match.
    """
    stars = 0
    array = False
    ref = False
    node = b.decl_node
    while node is not None:
        node = node.parent
        if node is None or node.kind in _DECL_STATEMENT_KINDS:
            break
        if node.kind == "pointer_declarator":
            stars += 1
        elif node.kind == "array_declarator":
            array = True
        elif node.kind == "reference_declarator":
            ref = True
        elif node.kind == "enhanced_for_statement":
            break
    words = b.type_text.split()
    if stars == 0 and not ref:
        # a copied value sheds its qualifiers; through a pointer they bind
        words = [w for w in words if w not in _CONST_MARKERS and w != "volatile"]
    return (" ".join(words), stars, array, ref)


def is_write_position(use: AstNode) -> bool:
    """The use is assigned or stepped, so a const name cannot stand there."""
    p = use.parent
    if p is None:
        return False
    if p.kind == "assignment_expression" and p.children[0] is use:
        return True
    if p.kind == "update_expression":
        return True
    if p.kind == "pointer_expression" and p.children[0].text == "&":
        return True
    return False


def token_count(root: AstNode) -> int:
    return sum(1 for _ in root.terminals())
