"""Tokenizer for the C / C++ / Java function-level subset.

Comments are trivia: they are recorded with spans but never become
terminals, so renders splice around them untouched.  Preprocessor lines
lex as single PREPROC tokens; the parser only accepts them at file level.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tree import Language

IDENT = "IDENT"
NUMBER = "NUMBER"
STRING = "STRING"
CHAR = "CHAR"
PUNCT = "PUNCT"
PREPROC = "PREPROC"
BAD = "BAD"
EOF = "EOF"

# longest first so maximal munch falls out of the scan order
_OPERATORS = [
    ">>>=", "<<=", ">>=", "...", ">>>",
    "->", "::", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}", "@",
]

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")

C_KEYWORDS = {
    "auto", "break", "case", "char", "const", "continue", "default", "do",
    "double", "else", "enum", "extern", "float", "for", "goto", "if",
    "inline", "int", "long", "register", "restrict", "return", "short",
    "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
    "unsigned", "void", "volatile", "while", "_Bool",
}

CPP_KEYWORDS = C_KEYWORDS | {
    "bool", "class", "delete", "false", "namespace", "new", "nullptr",
    "operator", "private", "protected", "public", "template", "this",
    "throw", "true", "try", "catch", "typename", "using", "virtual",
}

JAVA_KEYWORDS = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch",
    "char", "class", "const", "continue", "default", "do", "double",
    "else", "enum", "extends", "final", "finally", "float", "for", "goto",
    "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return",
    "short", "static", "strictfp", "super", "switch", "synchronized",
    "this", "throw", "throws", "transient", "try", "void", "volatile",
    "while", "true", "false", "null",
}

# type keywords that lex as primitive_type terminals
PRIMITIVE_TYPES = {
    Language.C: {"void", "char", "short", "int", "long", "float", "double",
                 "signed", "unsigned", "_Bool", "size_t", "ssize_t", "bool",
                 "int8_t", "int16_t", "int32_t", "int64_t",
                 "uint8_t", "uint16_t", "uint32_t", "uint64_t"},
    Language.CPP: {"void", "char", "short", "int", "long", "float", "double",
                   "signed", "unsigned", "bool", "size_t", "ssize_t", "wchar_t",
                   "int8_t", "int16_t", "int32_t", "int64_t",
                   "uint8_t", "uint16_t", "uint32_t", "uint64_t", "auto"},
    Language.JAVA: {"void", "boolean", "byte", "char", "short", "int", "long",
                    "float", "double"},
}

BOOL_LITERALS = {"true", "false"}
NULL_LITERALS = {"NULL", "nullptr", "null"}


def keywords(language: Language) -> frozenset:
    if language is Language.C:
        return frozenset(C_KEYWORDS)
    if language is Language.CPP:
        return frozenset(CPP_KEYWORDS)
    return frozenset(JAVA_KEYWORDS)


def reserved_words(language: Language) -> frozenset:
    """Names that must never be introduced by a rename."""
    return keywords(language) | PRIMITIVE_TYPES[language] | BOOL_LITERALS | NULL_LITERALS


@dataclass
class Token:
    type: str
    text: str
    start: int
    end: int

    @property
    def span(self):
        return (self.start, self.end)


@dataclass
class LexResult:
    tokens: list    # Token list, EOF-terminated
    comments: list  # (start, end) trivia spans
    errors: list    # (start, end) spans of unlexable input


def lex(src: str, language: Language) -> LexResult:
    tokens: list[Token] = []
    comments: list[tuple[int, int]] = []
    errors: list[tuple[int, int]] = []
    i = 0
    n = len(src)
    allow_preproc = language in (Language.C, Language.CPP)
    at_line_start = True

    while i < n:
        c = src[i]
        if c in " \t\r\n":
            if c == "\n":
                at_line_start = True
            i += 1
            continue
        if c == "/" and i + 1 < n and src[i + 1] == "/":
            j = src.find("\n", i)
            j = n if j < 0 else j
            comments.append((i, j))
            i = j
            continue
        if c == "/" and i + 1 < n and src[i + 1] == "*":
            j = src.find("*/", i + 2)
            if j < 0:
                errors.append((i, n))
                i = n
                break
            comments.append((i, j + 2))
            i = j + 2
            continue
        if c == "#" and allow_preproc and at_line_start:
            j = i
            while j < n:
                k = src.find("\n", j)
                if k < 0:
                    j = n
                    break
                # line continuation keeps the directive going
                if src[k - 1] == "\\" if k > 0 else False:
                    j = k + 1
                    continue
                j = k
                break
            tokens.append(Token(PREPROC, src[i:j], i, j))
            i = j
            continue

        at_line_start = False

        if c in _IDENT_START:
            j = i + 1
            while j < n and src[j] in _IDENT_CONT:
                j += 1
            tokens.append(Token(IDENT, src[i:j], i, j))
            i = j
            continue
        if c in _DIGITS or (c == "." and i + 1 < n and src[i + 1] in _DIGITS):
            j = _scan_number(src, i)
            tokens.append(Token(NUMBER, src[i:j], i, j))
            i = j
            continue
        if c == '"':
            j, ok = _scan_quoted(src, i, '"')
            (tokens.append(Token(STRING, src[i:j], i, j)) if ok else errors.append((i, j)))
            i = j
            continue
        if c == "'":
            j, ok = _scan_quoted(src, i, "'")
            (tokens.append(Token(CHAR, src[i:j], i, j)) if ok else errors.append((i, j)))
            i = j
            continue

        op = _match_operator(src, i)
        if op is not None:
            tokens.append(Token(PUNCT, op, i, i + len(op)))
            i += len(op)
            continue

        errors.append((i, i + 1))
        i += 1

    tokens.append(Token(EOF, "", n, n))
    return LexResult(tokens, comments, errors)


def _scan_number(src: str, i: int) -> int:
    n = len(src)
    j = i
    if src[j] == "0" and j + 1 < n and src[j + 1] in "xXbB":
        j += 2
        while j < n and (src[j] in "0123456789abcdefABCDEF_"):
            j += 1
    else:
        while j < n and src[j] in "0123456789_":
            j += 1
        if j < n and src[j] == ".":
            j += 1
            while j < n and src[j] in "0123456789_":
                j += 1
        if j < n and src[j] in "eE":
            k = j + 1
            if k < n and src[k] in "+-":
                k += 1
            if k < n and src[k] in _DIGITS:
                j = k
                while j < n and src[j] in _DIGITS:
                    j += 1
    while j < n and src[j] in "uUlLfFdD":
        j += 1
    return j


def _scan_quoted(src: str, i: int, quote: str) -> tuple[int, bool]:
    n = len(src)
    j = i + 1
    while j < n:
        c = src[j]
        if c == "\\":
            j += 2
            continue
        if c == quote:
            return j + 1, True
        if c == "\n":
            return j, False
        j += 1
    return n, False


def _match_operator(src: str, i: int):
    for op in _OPERATORS:
        if src.startswith(op, i):
            return op
    return None
