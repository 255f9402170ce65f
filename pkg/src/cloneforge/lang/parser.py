"""Recursive-descent parser for the C / C++ / Java function subset.

Produces concrete syntax trees (see tree.AstNode): every token is a
terminal node, children tile the parent span in source order, and kind
names follow the usual grammar vocabulary ("if_statement",
"binary_expression", ...).  Keyword and punctuation terminals use their
own text as the kind.

Two entry points:

* parse(fn)        one function definition (C/C++) or method (Java)
* parse_file(...)  a whole source file, tolerant of constructs outside
                   the subset; non-function regions become opaque
                   "top_level_item" / "class_member" nodes

With allow_errors=True, statements that fail to parse are wrapped in
ERROR nodes extending to the next ';' or block boundary instead of
aborting.  Lexical errors (unterminated literals, stray bytes) always
raise ParseError from parse(); parse_file() turns them into ERROR
terminals at file level.
"""

from __future__ import annotations

import logging

from ..errors import ParseError
from .lexer import (
    BOOL_LITERALS,
    CHAR,
    EOF,
    IDENT,
    NULL_LITERALS,
    NUMBER,
    PREPROC,
    PRIMITIVE_TYPES,
    PUNCT,
    STRING,
    Token,
    keywords,
    lex,
)
from .tree import ERROR_KIND, AstNode, Language, SourceFunction

log = logging.getLogger(__name__)

FUNCTION_KINDS = frozenset({"function_definition", "method_declaration"})

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}

_BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
)

_DECL_MODIFIERS = {
    Language.C: {"const", "static", "volatile", "register", "extern", "restrict"},
    Language.CPP: {"const", "static", "volatile", "register", "extern"},
    Language.JAVA: {"final"},
}

_METHOD_MODIFIERS = {
    "public", "private", "protected", "static", "final", "abstract",
    "synchronized", "native", "strictfp", "default",
}

_FUNC_MODIFIERS = {"static", "inline", "extern", "const"}


class _SyntaxError(Exception):
    def __init__(self, span: tuple[int, int], message: str):
        super().__init__(message)
        self.span = span
        self.message = message


def parse(fn: SourceFunction, allow_errors: bool = False) -> AstNode:
    """Parse one function/method.  Raises ParseError on failure.

    allow_errors=True recovers from statement-level syntax errors by
    wrapping the bad region in an ERROR node; the header and overall
    shape must still parse, and lexical errors are never recovered.
    """
    lr = lex(fn.text, fn.language)
    if lr.errors:
        raise ParseError(lr.errors, message=f"{fn.id}: unlexable input")
    p = _Parser(fn.text, lr.tokens, fn.language, allow_errors)
    try:
        root = p.parse_function()
        tail = p.peek()
        if tail.type != EOF:
            raise _SyntaxError(tail.span, f"trailing input {tail.text!r}")
    except _SyntaxError as exc:
        raise ParseError([exc.span], message=f"{fn.id}: {exc.message}") from None
    if root.has_errors() and not allow_errors:
        raise ParseError(root.error_spans(), tree=root, message=f"{fn.id}: syntax errors")
    return root


def parse_file(text: str, language) -> AstNode:
    """Parse a whole source file into a translation_unit tree.

    Function definitions and Java methods come out fully structured;
    everything else (globals, typedefs, structs, nested classes, broken
    code) is preserved as flat opaque nodes so the file still round-trips
    token for token.  Unlexable byte ranges become ERROR terminals.
    """
    language = Language.of(language)
    lr = lex(text, language)
    p = _Parser(text, lr.tokens, language, allow_errors=True)
    items: list[AstNode] = []
    while p.peek().type != EOF:
        tok = p.peek()
        if tok.type == PREPROC:
            items.append(p._consume_terminal())
            continue
        if language is Language.JAVA:
            if tok.text in ("package", "import"):
                items.append(p._line_item(f"{tok.text}_declaration"))
            else:
                items.append(p._java_top_item())
        else:
            mark = p.pos
            try:
                items.append(p.parse_function_definition())
            except _SyntaxError:
                p.pos = mark
                items.append(p._opaque_item("top_level_item"))
    for start, end in lr.errors:
        items.append(AstNode(ERROR_KIND, start, end, [], text[start:end]))
    items.sort(key=lambda n: n.start)
    if items:
        root = AstNode("translation_unit", items[0].start, items[-1].end, items)
    else:
        root = AstNode("translation_unit", 0, 0, [])
    return root


class _Parser:
    def __init__(self, src: str, tokens: list[Token], language: Language, allow_errors: bool):
        self.src = src
        self.toks = tokens
        self.pos = 0
        self.language = language
        self.allow_errors = allow_errors
        self.keywords = keywords(language)
        self.primitives = PRIMITIVE_TYPES[language]

    # ---- token plumbing -------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.toks) - 1)
        return self.toks[i]

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.type in (PUNCT, IDENT)

    def at_any(self, texts) -> bool:
        tok = self.peek()
        return tok.type in (PUNCT, IDENT) and tok.text in texts

    def _default_kind(self, tok: Token) -> str:
        if tok.type == NUMBER:
            return "number_literal"
        if tok.type == STRING:
            return "string_literal"
        if tok.type == CHAR:
            return "char_literal"
        if tok.type == PREPROC:
            return "preproc_directive"
        if tok.type == PUNCT:
            return tok.text
        if tok.text in NULL_LITERALS:
            return "null_literal"
        if tok.text in BOOL_LITERALS and self.language is not Language.C:
            return tok.text
        if tok.text in self.primitives:
            return "primitive_type"
        if tok.text in self.keywords:
            return tok.text
        return "identifier"

    def _consume_terminal(self, kind: str | None = None) -> AstNode:
        tok = self.peek()
        if tok.type == EOF:
            raise _SyntaxError(tok.span, "unexpected end of input")
        self.pos += 1
        return AstNode(kind or self._default_kind(tok), tok.start, tok.end, [], tok.text)

    def expect(self, text: str) -> AstNode:
        if not self.at(text):
            tok = self.peek()
            raise _SyntaxError(tok.span, f"expected {text!r}, found {tok.text!r}")
        return self._consume_terminal()

    def expect_name(self, kind: str = "identifier") -> AstNode:
        tok = self.peek()
        if tok.type != IDENT or tok.text in self.keywords or tok.text in self.primitives:
            raise _SyntaxError(tok.span, f"expected name, found {tok.text!r}")
        return self._consume_terminal(kind)

    @staticmethod
    def _node(kind: str, children: list[AstNode]) -> AstNode:
        if not children:
            raise AssertionError(f"empty {kind} node")
        return AstNode(kind, children[0].start, children[-1].end, children)

    # ---- entry points ---------------------------------------------------

    def parse_function(self) -> AstNode:
        if self.language is Language.JAVA:
            return self.parse_method_declaration()
        return self.parse_function_definition()

    def parse_function_definition(self) -> AstNode:
        kids: list[AstNode] = []
        while self.peek().type == IDENT and self.peek().text in _FUNC_MODIFIERS:
            # "const" can also open the return type; let parse_type own it
            if self.peek().text == "const":
                break
            kids.append(self._consume_terminal())
        kids.append(self.parse_type())
        decl = self.parse_declarator(need_name=True)
        if decl is None or decl.first("function_declarator") is None:
            span = decl.span if decl is not None else self.peek().span
            raise _SyntaxError(span, "not a function definition")
        kids.append(decl)
        kids.append(self.parse_compound_statement())
        return self._node("function_definition", kids)

    def parse_method_declaration(self) -> AstNode:
        kids: list[AstNode] = []
        mods: list[AstNode] = []
        while True:
            tok = self.peek()
            if tok.text == "@" and tok.type == PUNCT:
                mods.append(self._parse_annotation())
            elif tok.type == IDENT and tok.text in _METHOD_MODIFIERS:
                mods.append(self._consume_terminal())
            else:
                break
        if mods:
            kids.append(self._node("modifiers", mods))
        kids.append(self.parse_type())
        kids.append(self.expect_name())
        kids.append(self.parse_formal_parameters())
        if self.at("throws"):
            th = [self._consume_terminal()]
            th.append(self._parse_java_type_name())
            while self.at(","):
                th.append(self._consume_terminal())
                th.append(self._parse_java_type_name())
            kids.append(self._node("throws_clause", th))
        kids.append(self.parse_compound_statement())
        return self._node("method_declaration", kids)

    def _parse_annotation(self) -> AstNode:
        kids = [self.expect("@"), self.expect_name()]
        if self.at("("):
            depth = 0
            while True:
                tok = self.peek()
                if tok.type == EOF:
                    raise _SyntaxError(tok.span, "unterminated annotation")
                kids.append(self._consume_terminal())
                if tok.text == "(":
                    depth += 1
                elif tok.text == ")":
                    depth -= 1
                    if depth == 0:
                        break
        return self._node("annotation", kids)

    # ---- types ----------------------------------------------------------

    def parse_type(self) -> AstNode:
        if self.language is Language.JAVA:
            return self._parse_java_type()
        return self._parse_c_type()

    def _parse_c_type(self) -> AstNode:
        mods: list[AstNode] = []
        while self.at_any(("const", "volatile")):
            mods.append(self._consume_terminal())
        tok = self.peek()
        if tok.text in ("struct", "union", "enum") and tok.type == IDENT:
            kw = self._consume_terminal()
            name = self.expect_name("type_identifier")
            base = self._node(f"{tok.text}_specifier", [kw, name])
        elif tok.type == IDENT and tok.text in self.primitives:
            prims = [self._consume_terminal()]
            while self.peek().type == IDENT and self.peek().text in self.primitives:
                prims.append(self._consume_terminal())
            base = prims[0] if len(prims) == 1 else self._node("sized_type_specifier", prims)
        elif tok.type == IDENT and tok.text not in self.keywords:
            base = self._consume_terminal("type_identifier")
            if self.language is Language.CPP:
                while self.at("::") and self.peek(1).type == IDENT:
                    parts = [base, self._consume_terminal()]
                    parts.append(self.expect_name("type_identifier"))
                    base = self._node("qualified_identifier", parts)
                if self.at("<"):
                    base = self._node("generic_type", [base, self._parse_type_arguments()])
        else:
            raise _SyntaxError(tok.span, f"expected type, found {tok.text!r}")
        while self.at_any(("const", "volatile")):
            mods.append(self._consume_terminal())
        if mods:
            return self._node("qualified_type", sorted(mods + [base], key=lambda n: n.start))
        return base

    def _parse_java_type(self) -> AstNode:
        tok = self.peek()
        if tok.type == IDENT and tok.text in self.primitives:
            base = self._consume_terminal()
        else:
            base = self._parse_java_type_name()
            if self.at("<"):
                base = self._node("generic_type", [base, self._parse_type_arguments()])
        while self.at("[") and self.peek(1).text == "]":
            base = self._node("array_type", [base, self._consume_terminal(), self._consume_terminal()])
        return base

    def _parse_java_type_name(self) -> AstNode:
        base = self.expect_name("type_identifier")
        while self.at(".") and self.peek(1).type == IDENT:
            parts = [base, self._consume_terminal(), self.expect_name("type_identifier")]
            base = self._node("qualified_identifier", parts)
        return base

    def _parse_type_arguments(self) -> AstNode:
        kids = [self.expect("<")]
        if not self._angle_at_close():
            kids.append(self._parse_type_argument())
            while self.at(","):
                kids.append(self._consume_terminal())
                kids.append(self._parse_type_argument())
        kids.append(self._close_angle())
        return self._node("type_arguments", kids)

    def _parse_type_argument(self) -> AstNode:
        if self.at("?"):
            kids = [self._consume_terminal()]
            if self.at_any(("extends", "super")):
                kids.append(self._consume_terminal())
                kids.append(self.parse_type())
            return self._node("wildcard", kids) if len(kids) > 1 else kids[0]
        return self.parse_type()

    def _angle_at_close(self) -> bool:
        tok = self.peek()
        return tok.type == PUNCT and tok.text and set(tok.text) == {">"}

    def _close_angle(self) -> AstNode:
        tok = self.peek()
        if tok.type == PUNCT and tok.text == ">":
            return self._consume_terminal()
        if tok.type == PUNCT and tok.text and set(tok.text) == {">"}:
            # split ">>" / ">>>" left over from nested generics
            self.toks[self.pos] = Token(PUNCT, tok.text[1:], tok.start + 1, tok.end)
            return AstNode(">", tok.start, tok.start + 1, [], ">")
        raise _SyntaxError(tok.span, f"expected '>', found {tok.text!r}")

    # ---- declarators ----------------------------------------------------

    def parse_declarator(self, need_name: bool) -> AstNode | None:
        tok = self.peek()
        if tok.type == PUNCT and tok.text in ("*", "&"):
            star = self._consume_terminal()
            inner = self.parse_declarator(need_name)
            kind = "pointer_declarator" if star.text == "*" else "reference_declarator"
            if inner is None:
                return self._node(f"abstract_{kind}", [star])
            return self._node(kind, [star, inner])
        if tok.type == PUNCT and tok.text == "(" and self.peek(1).text in ("*", "&"):
            # function-pointer style: (*name)(...)
            lp = self._consume_terminal()
            inner = self.parse_declarator(need_name)
            rp = self.expect(")")
            kids = [lp] + ([inner] if inner is not None else []) + [rp]
            return self._declarator_suffixes(self._node("parenthesized_declarator", kids))
        if tok.type != IDENT or tok.text in self.keywords or tok.text in self.primitives:
            if need_name:
                raise _SyntaxError(tok.span, f"expected declarator, found {tok.text!r}")
            return None
        return self._declarator_suffixes(self._consume_terminal("identifier"))

    def _declarator_suffixes(self, node: AstNode) -> AstNode:
        while True:
            if self.at("("):
                node = self._node("function_declarator", [node, self.parse_parameter_list()])
            elif self.at("["):
                kids = [node, self._consume_terminal()]
                if not self.at("]"):
                    kids.append(self.parse_assignment())
                kids.append(self.expect("]"))
                node = self._node("array_declarator", kids)
            else:
                break
        return node

    def parse_parameter_list(self) -> AstNode:
        kids = [self.expect("(")]
        if not self.at(")"):
            while True:
                if self.at("..."):
                    kids.append(self._consume_terminal())
                else:
                    kids.append(self._parse_parameter_declaration())
                if self.at(","):
                    kids.append(self._consume_terminal())
                else:
                    break
        kids.append(self.expect(")"))
        return self._node("parameter_list", kids)

    def _parse_parameter_declaration(self) -> AstNode:
        kids: list[AstNode] = [self.parse_type()]
        decl = self.parse_declarator(need_name=False)
        if decl is not None:
            kids.append(decl)
        return self._node("parameter_declaration", kids)

    def parse_formal_parameters(self) -> AstNode:
        kids = [self.expect("(")]
        if not self.at(")"):
            while True:
                kids.append(self._parse_formal_parameter())
                if self.at(","):
                    kids.append(self._consume_terminal())
                else:
                    break
        kids.append(self.expect(")"))
        return self._node("formal_parameters", kids)

    def _parse_formal_parameter(self) -> AstNode:
        kids: list[AstNode] = []
        if self.at("final"):
            kids.append(self._consume_terminal())
        kids.append(self.parse_type())
        if self.at("..."):
            kids.append(self._consume_terminal())
        kids.append(self.expect_name())
        while self.at("[") and self.peek(1).text == "]":
            kids.append(self._consume_terminal())
            kids.append(self._consume_terminal())
        return self._node("formal_parameter", kids)

    # ---- statements -----------------------------------------------------

    def parse_compound_statement(self) -> AstNode:
        kids = [self.expect("{")]
        while not self.at("}"):
            if self.peek().type == EOF:
                raise _SyntaxError(self.peek().span, "unterminated block")
            kids.append(self.parse_statement())
        kids.append(self.expect("}"))
        return self._node("compound_statement", kids)

    def parse_statement(self) -> AstNode:
        mark = self.pos
        try:
            return self._statement()
        except _SyntaxError:
            if not self.allow_errors:
                raise
            self.pos = mark
            return self._error_statement()

    def _error_statement(self) -> AstNode:
        kids: list[AstNode] = []
        depth = 0
        while True:
            tok = self.peek()
            if tok.type == EOF:
                break
            if depth == 0 and tok.text == "}" and kids:
                break
            kids.append(self._consume_terminal())
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
                if depth <= 0:
                    break
            elif tok.text == ";" and depth == 0:
                break
        if not kids:
            tok = self.peek()
            raise _SyntaxError(tok.span, "cannot recover")
        return self._node(ERROR_KIND, kids)

    def _statement(self) -> AstNode:
        tok = self.peek()
        if tok.text == "{" and tok.type == PUNCT:
            return self.parse_compound_statement()
        if tok.text == ";" and tok.type == PUNCT:
            return self._node("expression_statement", [self._consume_terminal()])
        if tok.type == IDENT:
            handler = {
                "if": self._if_statement,
                "while": self._while_statement,
                "do": self._do_statement,
                "for": self._for_statement,
                "return": self._return_statement,
                "break": self._jump_statement,
                "continue": self._jump_statement,
                "switch": self._switch_statement,
            }.get(tok.text)
            if handler is not None:
                return handler()
            if tok.text == "goto" and self.language is not Language.JAVA:
                kids = [self._consume_terminal(), self.expect_name("statement_identifier"), self.expect(";")]
                return self._node("goto_statement", kids)
            if tok.text == "throw" and self.language is not Language.C:
                kids = [self._consume_terminal()]
                if not self.at(";"):
                    kids.append(self.parse_expression(comma_ok=False))
                kids.append(self.expect(";"))
                return self._node("throw_statement", kids)
            if tok.text == "try" and self.language is not Language.C:
                return self._try_statement()
            if tok.text == "assert" and self.language is Language.JAVA:
                kids = [self._consume_terminal(), self.parse_expression(comma_ok=False)]
                if self.at(":"):
                    kids.append(self._consume_terminal())
                    kids.append(self.parse_expression(comma_ok=False))
                kids.append(self.expect(";"))
                return self._node("assert_statement", kids)
            if tok.text == "synchronized" and self.language is Language.JAVA:
                kids = [self._consume_terminal(), self._parenthesized(), self.parse_compound_statement()]
                return self._node("synchronized_statement", kids)
            if (
                tok.text not in self.keywords
                and tok.text not in self.primitives
                and self.peek(1).text == ":"
                and self.peek(1).type == PUNCT
            ):
                kids = [self._consume_terminal("statement_identifier"), self._consume_terminal()]
                kids.append(self.parse_statement())
                return self._node("labeled_statement", kids)
        if self._looks_like_declaration():
            return self.parse_declaration()
        kids = [self.parse_expression(comma_ok=True), self.expect(";")]
        return self._node("expression_statement", kids)

    def _parenthesized(self) -> AstNode:
        kids = [self.expect("("), self.parse_expression(comma_ok=True), self.expect(")")]
        return self._node("parenthesized_expression", kids)

    def _if_statement(self) -> AstNode:
        kids = [self._consume_terminal(), self._parenthesized(), self.parse_statement()]
        if self.at("else"):
            kids.append(self._node("else_clause", [self._consume_terminal(), self.parse_statement()]))
        return self._node("if_statement", kids)

    def _while_statement(self) -> AstNode:
        kids = [self._consume_terminal(), self._parenthesized(), self.parse_statement()]
        return self._node("while_statement", kids)

    def _do_statement(self) -> AstNode:
        kids = [self._consume_terminal(), self.parse_statement(), self.expect("while"),
                self._parenthesized(), self.expect(";")]
        return self._node("do_statement", kids)

    def _for_statement(self) -> AstNode:
        kids = [self._consume_terminal(), self.expect("(")]
        if self.language is Language.JAVA and self._enhanced_for_ahead():
            kids.append(self.parse_type())
            kids.append(self.expect_name())
            kids.append(self.expect(":"))
            kids.append(self.parse_expression(comma_ok=False))
            kids.append(self.expect(")"))
            kids.append(self.parse_statement())
            return self._node("enhanced_for_statement", kids)
        if self.at(";"):
            kids.append(self._consume_terminal())
        elif self._looks_like_declaration():
            kids.append(self.parse_declaration())
        else:
            kids.append(self.parse_expression(comma_ok=True))
            kids.append(self.expect(";"))
        if not self.at(";"):
            kids.append(self.parse_expression(comma_ok=False))
        kids.append(self.expect(";"))
        if not self.at(")"):
            kids.append(self.parse_expression(comma_ok=True))
        kids.append(self.expect(")"))
        kids.append(self.parse_statement())
        return self._node("for_statement", kids)

    def _enhanced_for_ahead(self) -> bool:
        # inside "for (": a ':' at paren depth 0 before any ';' marks a for-each
        depth = 0
        i = self.pos
        while i < len(self.toks):
            t = self.toks[i]
            if t.type == EOF or t.text == ";":
                return False
            if t.text in ("(", "["):
                depth += 1
            elif t.text in (")", "]"):
                if depth == 0:
                    return False
                depth -= 1
            elif t.text == ":" and depth == 0:
                return True
            elif t.text == "?":
                return False
            i += 1
        return False

    def _return_statement(self) -> AstNode:
        kids = [self._consume_terminal()]
        if not self.at(";"):
            kids.append(self.parse_expression(comma_ok=True))
        kids.append(self.expect(";"))
        return self._node("return_statement", kids)

    def _jump_statement(self) -> AstNode:
        kw = self._consume_terminal()
        kind = f"{kw.text}_statement"
        kids = [kw]
        if (
            self.language is Language.JAVA
            and self.peek().type == IDENT
            and self.peek().text not in self.keywords
            and self.peek(1).text == ";"
        ):
            kids.append(self._consume_terminal("statement_identifier"))
        kids.append(self.expect(";"))
        return self._node(kind, kids)

    def _switch_statement(self) -> AstNode:
        kids = [self._consume_terminal(), self._parenthesized()]
        body = [self.expect("{")]
        while not self.at("}"):
            body.append(self._case_statement())
        body.append(self.expect("}"))
        kids.append(self._node("switch_body", body))
        return self._node("switch_statement", kids)

    def _case_statement(self) -> AstNode:
        if self.at("default"):
            kids = [self._consume_terminal(), self.expect(":")]
        elif self.at("case"):
            kids = [self._consume_terminal(), self.parse_expression(comma_ok=False), self.expect(":")]
        else:
            raise _SyntaxError(self.peek().span, f"expected case label, found {self.peek().text!r}")
        while not self.at_any(("case", "default", "}")):
            if self.peek().type == EOF:
                raise _SyntaxError(self.peek().span, "unterminated switch body")
            kids.append(self.parse_statement())
        return self._node("case_statement", kids)

    def _try_statement(self) -> AstNode:
        kids = [self._consume_terminal(), self.parse_compound_statement()]
        saw_handler = False
        while self.at("catch"):
            saw_handler = True
            c = [self._consume_terminal(), self.expect("(")]
            if self.at("..."):
                c.append(self._consume_terminal())
            else:
                param = [self.parse_type()]
                decl = (
                    self.parse_declarator(need_name=False)
                    if self.language is not Language.JAVA
                    else (self.expect_name() if self.peek().type == IDENT else None)
                )
                if decl is not None:
                    param.append(decl)
                c.append(self._node("catch_parameter", param))
            c.append(self.expect(")"))
            c.append(self.parse_compound_statement())
            kids.append(self._node("catch_clause", c))
        if self.language is Language.JAVA and self.at("finally"):
            saw_handler = True
            kids.append(self._node("finally_clause", [self._consume_terminal(), self.parse_compound_statement()]))
        if not saw_handler:
            raise _SyntaxError(self.peek().span, "try without catch/finally")
        return self._node("try_statement", kids)

    # ---- declarations ---------------------------------------------------

    def _looks_like_declaration(self) -> bool:
        i = self.pos
        toks = self.toks
        mods = _DECL_MODIFIERS[self.language]
        while toks[i].type == IDENT and toks[i].text in mods:
            i += 1
        t = toks[i]
        if t.type != IDENT:
            return False
        if t.text in ("struct", "union", "enum") and self.language is not Language.JAVA:
            return toks[i + 1].type == IDENT
        if t.text in self.primitives:
            return True
        if t.text in self.keywords:
            return False
        i += 1
        # qualified name: a::b (C++) or a.b (Java)
        sep = "::" if self.language is Language.CPP else "."
        if self.language is not Language.C:
            while (
                toks[i].text == sep
                and toks[i].type == PUNCT
                and toks[i + 1].type == IDENT
                and toks[i + 1].text not in self.keywords
            ):
                i += 2
        if toks[i].text == "<" and self.language is not Language.C:
            j = self._scan_angle(i)
            if j < 0:
                return False
            i = j
        if self.language is Language.JAVA:
            while toks[i].text == "[" and toks[i + 1].text == "]":
                i += 2
        else:
            while toks[i].type == PUNCT and toks[i].text in ("*", "&"):
                i += 1
        t = toks[i]
        if t.type != IDENT or t.text in self.keywords or t.text in self.primitives:
            return False
        return toks[i + 1].text in ("=", ";", ",", "[", "(")

    def _scan_angle(self, i: int) -> int:
        """Token index just past a balanced <...>, or -1 if it is not one."""
        toks = self.toks
        depth = 0
        steps = 0
        while steps < 64:
            t = toks[i]
            if t.type == EOF:
                return -1
            if t.text == "<":
                depth += 1
            elif t.type == PUNCT and t.text and set(t.text) == {">"}:
                depth -= len(t.text)
                if depth < 0:
                    return -1
                if depth == 0:
                    return i + 1
            elif t.type == PUNCT and t.text in (";", "{", "}", ")", "&&", "||"):
                return -1
            elif t.type in (STRING, CHAR):
                return -1
            i += 1
            steps += 1
        return -1

    def parse_declaration(self, kind: str = "declaration") -> AstNode:
        kids: list[AstNode] = []
        mods = _DECL_MODIFIERS[self.language] - {"const"}
        while self.peek().type == IDENT and self.peek().text in mods:
            kids.append(self._consume_terminal())
        kids.append(self.parse_type())
        kids.append(self._init_declarator())
        while self.at(","):
            kids.append(self._consume_terminal())
            kids.append(self._init_declarator())
        kids.append(self.expect(";"))
        return self._node(kind, kids)

    def _init_declarator(self) -> AstNode:
        if self.language is Language.JAVA:
            decl: AstNode = self.expect_name()
            while self.at("[") and self.peek(1).text == "]":
                decl = self._node("array_declarator", [decl, self._consume_terminal(), self._consume_terminal()])
        else:
            got = self.parse_declarator(need_name=True)
            assert got is not None
            decl = got
        if self.at("="):
            eq = self._consume_terminal()
            init = self._initializer()
            return self._node("init_declarator", [decl, eq, init])
        return decl

    def _initializer(self) -> AstNode:
        if self.at("{"):
            kids = [self._consume_terminal()]
            if not self.at("}"):
                kids.append(self._initializer())
                while self.at(","):
                    kids.append(self._consume_terminal())
                    if self.at("}"):
                        break
                    kids.append(self._initializer())
            kids.append(self.expect("}"))
            return self._node("initializer_list", kids)
        return self.parse_assignment()

    # ---- expressions ----------------------------------------------------

    def parse_expression(self, comma_ok: bool) -> AstNode:
        expr = self.parse_assignment()
        if comma_ok and self.at(","):
            kids = [expr]
            while self.at(","):
                kids.append(self._consume_terminal())
                kids.append(self.parse_assignment())
            return self._node("comma_expression", kids)
        return expr

    def parse_assignment(self) -> AstNode:
        left = self._conditional()
        tok = self.peek()
        if tok.type == PUNCT and tok.text in _ASSIGN_OPS:
            op = self._consume_terminal()
            right = self.parse_assignment()
            return self._node("assignment_expression", [left, op, right])
        return left

    def _conditional(self) -> AstNode:
        cond = self._binary(0)
        if self.at("?"):
            kids = [cond, self._consume_terminal(), self.parse_assignment(),
                    self.expect(":"), self.parse_assignment()]
            return self._node("conditional_expression", kids)
        return cond

    def _binary(self, level: int) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self._unary()
        ops = _BINARY_LEVELS[level]
        left = self._binary(level + 1)
        while True:
            tok = self.peek()
            if tok.text not in ops:
                break
            if tok.text == "instanceof":
                if self.language is not Language.JAVA or tok.type != IDENT:
                    break
                op = self._consume_terminal()
                right: AstNode = self.parse_type()
            else:
                if tok.type != PUNCT:
                    break
                op = self._consume_terminal()
                right = self._binary(level + 1)
            left = self._node("binary_expression", [left, op, right])
        return left

    def _unary(self) -> AstNode:
        tok = self.peek()
        if tok.type == PUNCT:
            if tok.text in ("!", "~"):
                return self._node("unary_expression", [self._consume_terminal(), self._unary()])
            if tok.text in ("+", "-"):
                return self._node("unary_expression", [self._consume_terminal(), self._unary()])
            if tok.text in ("*", "&") and self.language is not Language.JAVA:
                kind = "pointer_expression"
                return self._node(kind, [self._consume_terminal(), self._unary()])
            if tok.text in ("++", "--"):
                return self._node("update_expression", [self._consume_terminal(), self._unary()])
            if tok.text == "(":
                cast = self._try_cast()
                if cast is not None:
                    return cast
                return self._postfix()
        if tok.type == IDENT:
            if tok.text == "sizeof" and self.language is not Language.JAVA:
                return self._sizeof()
            if tok.text == "new" and self.language is not Language.C:
                return self._new_expression()
            if tok.text == "delete" and self.language is Language.CPP:
                kids = [self._consume_terminal()]
                if self.at("[") and self.peek(1).text == "]":
                    kids.append(self._consume_terminal())
                    kids.append(self._consume_terminal())
                kids.append(self._unary())
                return self._node("delete_expression", kids)
        return self._postfix()

    def _type_descriptor(self) -> AstNode:
        base = self.parse_type()
        stars: list[AstNode] = []
        while self.at("*"):
            stars.append(self._consume_terminal())
        if stars:
            return self._node("type_descriptor", [base] + stars)
        return base

    def _try_cast(self) -> AstNode | None:
        mark = self.pos
        try:
            lp = self.expect("(")
            ty = self._type_descriptor()
            rp = self.expect(")")
        except _SyntaxError:
            self.pos = mark
            return None
        strong = ty.kind in (
            "type_descriptor", "sized_type_specifier", "generic_type", "array_type",
            "struct_specifier", "union_specifier", "enum_specifier",
        ) or ty.kind == "primitive_type"
        if not strong:
            nxt = self.peek()
            ok = nxt.type in (NUMBER, STRING, CHAR) or (
                nxt.type == IDENT and nxt.text not in self.keywords and nxt.text not in self.primitives
            ) or (nxt.type == PUNCT and nxt.text == "(")
            if not ok:
                self.pos = mark
                return None
        try:
            operand = self._unary()
        except _SyntaxError:
            self.pos = mark
            return None
        return self._node("cast_expression", [lp, ty, rp, operand])

    def _sizeof(self) -> AstNode:
        kw = self._consume_terminal()
        if self.at("("):
            mark = self.pos
            try:
                lp = self._consume_terminal()
                ty = self._type_descriptor()
                rp = self.expect(")")
                if ty.kind in ("type_descriptor", "primitive_type", "sized_type_specifier",
                               "struct_specifier", "union_specifier", "enum_specifier"):
                    return self._node("sizeof_expression", [kw, lp, ty, rp])
            except _SyntaxError:
                pass
            self.pos = mark
        return self._node("sizeof_expression", [kw, self._unary()])

    def _new_expression(self) -> AstNode:
        kids = [self._consume_terminal()]
        if self.language is Language.JAVA:
            tok = self.peek()
            if tok.type == IDENT and tok.text in self.primitives:
                base = self._consume_terminal()
            else:
                base = self._parse_java_type_name()
                if self.at("<"):
                    base = self._node("generic_type", [base, self._parse_type_arguments()])
        else:
            base = self.parse_type()
        kids.append(base)
        if self.at("("):
            kids.append(self._argument_list())
        elif self.at("["):
            while self.at("["):
                kids.append(self._consume_terminal())
                if not self.at("]"):
                    kids.append(self.parse_assignment())
                kids.append(self.expect("]"))
            if self.at("{"):
                kids.append(self._initializer())
        elif self.at("{"):
            kids.append(self._initializer())
        return self._node("new_expression", kids)

    def _argument_list(self) -> AstNode:
        kids = [self.expect("(")]
        if not self.at(")"):
            kids.append(self.parse_assignment())
            while self.at(","):
                kids.append(self._consume_terminal())
                kids.append(self.parse_assignment())
        kids.append(self.expect(")"))
        return self._node("argument_list", kids)

    def _postfix(self) -> AstNode:
        expr = self._primary()
        while True:
            tok = self.peek()
            if tok.type != PUNCT:
                break
            if tok.text == "(":
                expr = self._node("call_expression", [expr, self._argument_list()])
            elif tok.text == "[":
                kids = [expr, self._consume_terminal(), self.parse_expression(comma_ok=False), self.expect("]")]
                expr = self._node("subscript_expression", kids)
            elif tok.text in (".", "->"):
                if tok.text == "->" and self.language is Language.JAVA:
                    break
                op = self._consume_terminal()
                name = self.expect_name("field_identifier")
                expr = self._node("field_expression", [expr, op, name])
            elif tok.text in ("++", "--"):
                expr = self._node("update_expression", [expr, self._consume_terminal()])
            else:
                break
        return expr

    def _primary(self) -> AstNode:
        tok = self.peek()
        if tok.type == NUMBER:
            return self._consume_terminal()
        if tok.type == STRING:
            node = self._consume_terminal()
            # adjacent string literal concatenation (C/C++)
            while self.peek().type == STRING and self.language is not Language.JAVA:
                node = self._node("concatenated_string", [node, self._consume_terminal()])
            return node
        if tok.type == CHAR:
            return self._consume_terminal()
        if tok.type == PUNCT and tok.text == "(":
            return self._parenthesized()
        if tok.type == IDENT:
            if tok.text in NULL_LITERALS:
                return self._consume_terminal("null_literal")
            if tok.text in BOOL_LITERALS and self.language is not Language.C:
                return self._consume_terminal()
            if tok.text == "this" and self.language is not Language.C:
                return self._consume_terminal()
            if tok.text == "super" and self.language is Language.JAVA:
                return self._consume_terminal()
            if tok.text in self.keywords or tok.text in self.primitives:
                raise _SyntaxError(tok.span, f"unexpected {tok.text!r} in expression")
            node = self._consume_terminal("identifier")
            if self.language is Language.CPP:
                while self.at("::") and self.peek(1).type == IDENT:
                    sep = self._consume_terminal()
                    part = self.expect_name("identifier")
                    node = self._node("qualified_identifier", [node, sep, part])
            return node
        raise _SyntaxError(tok.span, f"unexpected {tok.text!r} in expression")

    # ---- file-level helpers ----------------------------------------------

    def _line_item(self, kind: str) -> AstNode:
        kids = []
        while True:
            tok = self.peek()
            if tok.type == EOF:
                break
            kids.append(self._consume_terminal())
            if tok.text == ";":
                break
        return self._node(kind, kids)

    def _opaque_item(self, kind: str) -> AstNode:
        """Consume one balanced top-level construct we do not model."""
        kids: list[AstNode] = []
        depth = 0
        while True:
            tok = self.peek()
            if tok.type == EOF or tok.type == PREPROC:
                break
            if depth == 0 and kids and tok.text == "}":
                break
            kids.append(self._consume_terminal())
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
                if depth <= 0:
                    depth = 0
                    nxt = self.peek()
                    # "} name;" style tails (typedefs, globals) continue the item
                    cont = nxt.text in (";", ",", "=") or (
                        nxt.type == IDENT
                        and nxt.text not in self.keywords
                        and nxt.text not in self.primitives
                    )
                    if not cont:
                        break
            elif tok.text == ";" and depth == 0:
                break
        if not kids:
            kids.append(self._consume_terminal())
        return self._node(kind, kids)

    def _java_top_item(self) -> AstNode:
        mark = self.pos
        try:
            return self._java_class_declaration()
        except _SyntaxError:
            self.pos = mark
            return self._opaque_item("top_level_item")

    def _java_class_declaration(self) -> AstNode:
        kids: list[AstNode] = []
        mods: list[AstNode] = []
        while True:
            tok = self.peek()
            if tok.text == "@" and tok.type == PUNCT:
                mods.append(self._parse_annotation())
            elif tok.type == IDENT and tok.text in _METHOD_MODIFIERS:
                mods.append(self._consume_terminal())
            else:
                break
        if mods:
            kids.append(self._node("modifiers", mods))
        kids.append(self.expect("class"))
        kids.append(self.expect_name("type_identifier"))
        if self.at("<"):
            kids.append(self._parse_type_arguments())
        if self.at("extends"):
            kids.append(self._consume_terminal())
            kids.append(self._parse_java_type())
        if self.at("implements"):
            kids.append(self._consume_terminal())
            kids.append(self._parse_java_type())
            while self.at(","):
                kids.append(self._consume_terminal())
                kids.append(self._parse_java_type())
        body = [self.expect("{")]
        while not self.at("}"):
            if self.peek().type == EOF:
                raise _SyntaxError(self.peek().span, "unterminated class body")
            if self.at(";"):
                body.append(self._consume_terminal())
                continue
            mark = self.pos
            try:
                body.append(self.parse_method_declaration())
                continue
            except _SyntaxError:
                self.pos = mark
            try:
                body.append(self.parse_declaration(kind="field_declaration"))
                continue
            except _SyntaxError:
                self.pos = mark
            body.append(self._opaque_item("class_member"))
        body.append(self.expect("}"))
        kids.append(self._node("class_body", body))
        return self._node("class_declaration", kids)
