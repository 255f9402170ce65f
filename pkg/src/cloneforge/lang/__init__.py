"""Lexing, parsing, scope analysis, and tree editing for C/C++/Java."""

from .lexer import LexResult, Token, keywords, lex, reserved_words
from .parser import FUNCTION_KINDS, parse, parse_file
from .render import Edit, apply_edits, render
from .scope import (
    Binding,
    ScopeInfo,
    analyze_scopes,
    declarator_name,
    function_body,
    function_name_node,
    independent_decls,
    scope_of,
)
from .tree import (
    ERROR_KIND,
    AstNode,
    FlatToken,
    Language,
    SourceFunction,
    flatten_tokens,
)

__all__ = [
    "AstNode",
    "Binding",
    "ERROR_KIND",
    "Edit",
    "FUNCTION_KINDS",
    "FlatToken",
    "Language",
    "LexResult",
    "ScopeInfo",
    "SourceFunction",
    "Token",
    "analyze_scopes",
    "apply_edits",
    "declarator_name",
    "flatten_tokens",
    "function_body",
    "function_name_node",
    "independent_decls",
    "keywords",
    "lex",
    "parse",
    "parse_file",
    "reserved_words",
    "render",
    "scope_of",
]
