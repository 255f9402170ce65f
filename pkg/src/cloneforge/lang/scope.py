"""Name binding and scope resolution over concrete syntax trees.

Resolution is intentionally lexical and sequential: a use binds to the
nearest enclosing declaration whose declaration point precedes the use.
Names that never resolve (library calls, globals, class fields) are
reported as external and left alone by every transform.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .query import SIDE_EFFECT_KINDS, binding_is_const
from .tree import AstNode, Language

log = logging.getLogger(__name__)

# node kinds that open a visibility region for declarations inside them
SCOPE_KINDS = frozenset({
    "compound_statement",
    "for_statement",
    "enhanced_for_statement",
    "catch_clause",
    "switch_body",
    "function_definition",
    "method_declaration",
})

_DECLARATOR_WRAPPERS = frozenset({
    "pointer_declarator", "reference_declarator", "array_declarator",
    "init_declarator", "function_declarator", "parenthesized_declarator",
})


@dataclass
class Binding:
    """One declared name: its declaration site and every use."""

    name: str
    kind: str                      # "param" | "local" | "foreach" | "catch"
    decl_node: AstNode             # the identifier terminal being declared
    scope: AstNode                 # region in which the name is visible
    type_text: str = ""
    uses: list = field(default_factory=list)   # identifier terminals, decl excluded

    @property
    def sites(self) -> list[AstNode]:
        return [self.decl_node] + self.uses

    def __repr__(self):
        return f"Binding({self.name!r}, {self.kind}, decl@{self.decl_node.start}, {len(self.uses)} uses)"


@dataclass
class ScopeInfo:
    """Full resolution result for one function tree."""

    root: AstNode
    bindings: list
    external: set                  # used names with no local declaration
    _by_node: dict = field(default_factory=dict)

    def resolve(self, node: AstNode):
        """Binding for an identifier terminal (decl site or use), else None."""
        return self._by_node.get(id(node))

    def by_name(self, name: str) -> list:
        return [b for b in self.bindings if b.name == name]

    def declared_names(self) -> set:
        return {b.name for b in self.bindings}

    @property
    def declarations(self) -> dict:
        """name -> list of declaring identifier terminals (source order)."""
        out: dict[str, list[AstNode]] = {}
        for b in self.bindings:
            out.setdefault(b.name, []).append(b.decl_node)
        for sites in out.values():
            sites.sort(key=lambda n: n.start)
        return out

    @property
    def uses(self) -> dict:
        """name -> list of use-site identifier terminals (source order)."""
        out: dict[str, list[AstNode]] = {}
        for b in self.bindings:
            for u in b.uses:
                out.setdefault(b.name, []).append(u)
        for sites in out.values():
            sites.sort(key=lambda n: n.start)
        return out

    def reachable(self, name: str, site) -> bool:
        """True when a local declaration of `name` is visible at `site`.

        `site` is an AstNode or a character offset.  Visibility follows
        block nesting and declaration order: the declaring scope must
        enclose the site and the declaration point must precede it.
        """
        at = site.start if isinstance(site, AstNode) else int(site)
        for b in self.bindings:
            if b.name != name:
                continue
            if b.decl_node.start > at:
                continue
            if b.scope.start <= at < b.scope.end:
                return True
        return False


def declarator_name(decl: AstNode):
    """The core identifier terminal of a (possibly wrapped) declarator."""
    node = decl
    while node is not None and not node.is_terminal:
        picked = None
        for ch in node.children:
            if ch.kind == "identifier" or ch.kind in _DECLARATOR_WRAPPERS:
                picked = ch
                break
        node = picked
    if node is not None and node.kind == "identifier":
        return node
    return None


def function_name_node(root: AstNode):
    """The identifier terminal that names the function or method."""
    if root.kind == "method_declaration":
        for ch in root.children:
            if ch.kind == "identifier":
                return ch
        return None
    fd = root.first("function_declarator")
    if fd is None:
        return None
    return declarator_name(fd.children[0]) or (
        fd.children[0] if fd.children[0].kind == "identifier" else None
    )


def function_body(root: AstNode):
    """The outermost compound_statement of a function or method."""
    for ch in root.children:
        if ch.kind == "compound_statement":
            return ch
    return None


def _nearest_scope(node: AstNode, root: AstNode) -> AstNode:
    for anc in node.ancestors():
        if anc.kind in SCOPE_KINDS:
            return anc
    return root


def _span_text(node: AstNode, src) -> str:
    if src is not None:
        return src[node.start:node.end]
    # no source at hand: joined terminal texts, whitespace-normalized
    return " ".join(t.text for t in node.terminals())


def _collect_bindings(root: AstNode, src: str, language: Language) -> list:
    bindings: list[Binding] = []

    def add(name_node, kind, scope, type_node=None):
        if name_node is None:
            return
        bindings.append(Binding(
            name=name_node.text,
            kind=kind,
            decl_node=name_node,
            scope=scope,
            type_text=_span_text(type_node, src) if type_node is not None else "",
        ))

    for node in root.walk():
        if node.kind in ("parameter_declaration", "formal_parameter"):
            # parameters of nested declarators (function pointers) are not
            # names visible in the body; leave them unresolved
            if any(a.kind in ("parameter_declaration", "formal_parameter") for a in node.ancestors()):
                continue
            type_node = None
            name_node = None
            for ch in node.children:
                if ch.kind in ("identifier",) or ch.kind in _DECLARATOR_WRAPPERS:
                    name_node = declarator_name(ch)
                    break
                if ch.kind not in ("final", "..."):
                    type_node = ch
            add(name_node, "param", root, type_node)
        elif node.kind in ("declaration", "field_declaration"):
            scope = _nearest_scope(node, root)
            type_node = None
            for ch in node.children:
                if ch.kind in _DECLARATOR_WRAPPERS or ch.kind == "identifier":
                    add(declarator_name(ch), "local", scope, type_node)
                elif ch.kind not in (",", ";") and type_node is None and not (
                    ch.is_terminal and ch.text in ("static", "register", "extern", "final")
                ):
                    type_node = ch
        elif node.kind == "enhanced_for_statement":
            type_node = None
            for ch in node.children:
                if ch.kind == "identifier":
                    add(ch, "foreach", node, type_node)
                    break
                if ch.kind not in ("for", "("):
                    type_node = ch
        elif node.kind == "catch_parameter":
            name_node = None
            type_node = None
            for ch in node.children:
                if ch.kind == "identifier" or ch.kind in _DECLARATOR_WRAPPERS:
                    name_node = declarator_name(ch) or (ch if ch.kind == "identifier" else None)
                    break
                type_node = ch
            add(name_node, "catch", _nearest_scope(node, root), type_node)
    return bindings


def analyze_scopes(root: AstNode, src=None, language=None) -> ScopeInfo:
    """Resolve every identifier in the tree to a binding or to "external".

    `src` only affects the spelling of Binding.type_text; when omitted the
    type is rebuilt from terminal texts (whitespace-normalized).
    """
    bindings = _collect_bindings(root, src, language)
    by_node: dict[int, Binding] = {id(b.decl_node): b for b in bindings}
    decl_ids = set(by_node.keys())
    fname = function_name_node(root)
    if fname is not None:
        decl_ids.add(id(fname))

    by_scope: dict[int, list[Binding]] = {}
    for b in bindings:
        by_scope.setdefault(id(b.scope), []).append(b)

    external: set[str] = set()
    for term in root.terminals():
        if term.kind != "identifier" or id(term) in decl_ids:
            continue
        resolved = None
        node = term
        while node is not None:
            scope = node if node is root or node.kind in SCOPE_KINDS else None
            if scope is not None:
                best = None
                for b in by_scope.get(id(scope), ()):
                    if b.name == term.text and b.decl_node.start <= term.start:
                        if best is None or b.decl_node.start > best.decl_node.start:
                            best = b
                if best is not None:
                    resolved = best
                    break
            node = node.parent if node is not root else None
        if resolved is not None:
            resolved.uses.append(term)
            by_node[id(term)] = resolved
        else:
            external.add(term.text)

    return ScopeInfo(root=root, bindings=bindings, external=external, _by_node=by_node)


def scope_of(root: AstNode) -> ScopeInfo:
    """analyze_scopes without source text (types spelled from terminals)."""
    return analyze_scopes(root)


def independent_decls(root: AstNode, scope: ScopeInfo) -> list:
    """Local declarations whose value does not depend on mutable local state.

    A declaration qualifies when its entire subtree (initializers and
    array sizes included) performs no call, assignment, increment, or
    allocation, and references no local name other than const-qualified
    ones.  External names are allowed: they cannot be moved past a local
    write by reordering declarations alone.
    """
    out = []
    for node in root.walk():
        if node.kind != "declaration":
            continue
        if any(sub.kind in SIDE_EFFECT_KINDS for sub in node.walk()):
            continue
        ok = True
        for term in node.terminals():
            if term.kind != "identifier":
                continue
            b = scope.resolve(term)
            if b is None or b.decl_node is term:
                continue
            if not binding_is_const(b):
                ok = False
                break
        if ok:
            out.append(node)
    return out
