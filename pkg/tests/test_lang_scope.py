"""Name resolution: binding collection, shadowing, externals."""

import pytest

from cloneforge.lang import Language, SourceFunction, parse
from cloneforge.lang.scope import (
    analyze_scopes,
    declarator_name,
    function_body,
    function_name_node,
    independent_decls,
    scope_of,
)

from .samples import ALL_FUNCS


def _info(lang, text):
    root = parse(SourceFunction("t", lang, text))
    return root, analyze_scopes(root, text)


def test_params_and_locals_collected():
    src = """int sum_array(const int *xs, int n) {
    int total = 0;
    for (int i = 0; i < n; i++) {
        total += xs[i];
    }
    return total;
}"""
    root, info = _info("c", src)
    names = {(b.name, b.kind) for b in info.bindings}
    assert names == {("xs", "param"), ("n", "param"), ("total", "local"), ("i", "local")}


def test_use_counts():
    src = "int f(int a, int b) { int c = a + b; c = c * a; return c; }"
    _, info = _info("c", src)
    uses = {b.name: len(b.uses) for b in info.bindings}
    assert uses == {"a": 2, "b": 1, "c": 3}


def test_function_name_is_not_a_binding():
    src = "int fact(int n) { if (n < 2) return 1; return n * fact(n - 1); }"
    root, info = _info("c", src)
    assert "fact" not in info.declared_names()
    assert "fact" in info.external
    assert function_name_node(root).text == "fact"


def test_library_calls_are_external():
    src = 'void f(int n) { printf("%d", n); }'
    _, info = _info("c", src)
    assert "printf" in info.external
    assert "n" not in info.external


def test_shadowing_resolves_to_innermost():
    src = """int shadow(int x) {
    int y = x;
    {
        int x = 2;
        y += x;
    }
    return y + x;
}"""
    _, info = _info("c", src)
    xs = [b for b in info.bindings if b.name == "x"]
    assert len(xs) == 2
    outer = next(b for b in xs if b.kind == "param")
    inner = next(b for b in xs if b.kind == "local")
    assert len(outer.uses) == 2
    assert len(inner.uses) == 1
    assert inner.uses[0].start > inner.decl_node.start


def test_declaration_point_ordering():
    # the use on the initializer's right-hand side precedes the declaration
    src = "int f(int a) { int b = a; int c = b + 1; return c; }"
    _, info = _info("c", src)
    b = next(x for x in info.bindings if x.name == "b")
    assert len(b.uses) == 1


def test_loop_variable_scope_covers_body_and_condition():
    src = "int f(int n) { int s = 0; for (int i = 0; i < n; i++) { s += i; } return s; }"
    _, info = _info("c", src)
    i = next(b for b in info.bindings if b.name == "i")
    assert len(i.uses) == 3  # condition, update, body
    assert i.scope.kind == "for_statement"


def test_foreach_and_catch_bindings_java():
    src = """public int count(List<String> items) {
    int hits = 0;
    for (String s : items) {
        if (s.length() > 0) hits++;
    }
    try {
        hits += 1;
    } catch (Exception e) {
        return e.hashCode();
    }
    return hits;
}"""
    _, info = _info("java", src)
    kinds = {b.name: b.kind for b in info.bindings}
    assert kinds["s"] == "foreach"
    assert kinds["e"] == "catch"
    s = next(b for b in info.bindings if b.name == "s")
    assert len(s.uses) == 1


def test_field_access_not_counted_as_use():
    src = "public int get(Point p) { return p.x; }"
    _, info = _info("java", src)
    p = next(b for b in info.bindings if b.name == "p")
    assert len(p.uses) == 1  # p itself, not .x
    assert "x" not in info.external


def test_resolve_maps_decl_and_uses_to_same_binding():
    src = "int f(int a) { int b = a; return b + a; }"
    root, info = _info("c", src)
    a_terms = [t for t in root.terminals() if t.kind == "identifier" and t.text == "a"]
    bindings = {id(info.resolve(t)) for t in a_terms}
    assert len(bindings) == 1
    assert info.resolve(a_terms[0]) is not None


def test_goto_labels_are_not_identifiers():
    src = "int f(int n) { if (n < 0) goto fail; return n; fail: return -1; }"
    root, info = _info("c", src)
    assert "fail" not in info.external
    assert "fail" not in info.declared_names()


@pytest.mark.parametrize("lang,fid,text", ALL_FUNCS, ids=[f[1] for f in ALL_FUNCS])
def test_every_sample_resolves_cleanly(lang, fid, text):
    root, info = _info(lang, text)
    # every binding's uses share the binding's name and live inside its scope span
    for b in info.bindings:
        for u in b.uses:
            assert u.text == b.name
            assert b.scope.start <= u.start < b.scope.end
    # declared names and external names never overlap unless shadowed by design
    for b in info.bindings:
        if b.name in info.external:
            pytest.fail(f"{b.name} is both bound and external in {fid}")


def test_declarator_name_unwraps_pointers_and_arrays():
    src = "void f() { int *p; int arr[4]; int **pp; }"
    root, info = _info("c", src)
    assert {b.name for b in info.bindings} == {"p", "arr", "pp"}


def test_body_accessor():
    root = parse(SourceFunction("t", "c", "void f() { ; }"))
    assert function_body(root).kind == "compound_statement"


class TestPublicSurface:
    def test_reachable_respects_block_nesting(self):
        fn = SourceFunction("t", Language.C, "void f() { int a; { int b; b = a; } a = 1; }")
        root = parse(fn)
        info = scope_of(root)
        body = function_body(root)
        inner = [n for n in body.find_all("compound_statement") if n is not body][0]
        # just before the closing brace of each region
        assert info.reachable("a", inner.end - 1)
        assert info.reachable("b", inner.end - 2)
        assert not info.reachable("b", body.end - 1)

    def test_loop_header_scope_ends_with_loop(self):
        fn = SourceFunction("t", Language.C, "void f(int n) { for (int i = 0; i < n; i++) { n += i; } n = 0; }")
        root = parse(fn)
        info = scope_of(root)
        loop = root.first("for_statement")
        assert info.reachable("i", loop.end - 1)
        assert not info.reachable("i", loop.end + 1)

    def test_params_reachable_throughout_body(self):
        fn = SourceFunction("t", Language.JAVA, "int get(Ctx context, Node node) { return node.id + context.id; }")
        root = parse(fn)
        info = scope_of(root)
        body = function_body(root)
        assert info.reachable("context", body.start + 1)
        assert info.reachable("node", body.end - 1)

    def test_declaration_and_use_maps(self):
        fn = SourceFunction("t", Language.C, "int f(int n) { int k = n; k += n; return k; }")
        info = scope_of(parse(fn))
        assert len(info.declarations["k"]) == 1
        assert len(info.uses["k"]) == 2
        assert len(info.uses["n"]) == 2
        assert [u.start for u in info.uses["n"]] == sorted(u.start for u in info.uses["n"])

    def test_type_text_without_source_from_terminals(self):
        fn = SourceFunction("t", Language.C, "void f() { unsigned long x = 0; }")
        info = scope_of(parse(fn))
        (b,) = info.by_name("x")
        assert b.type_text == "unsigned long"


class TestIndependentDecls:
    def _decls(self, text, lang=Language.C):
        root = parse(SourceFunction("t", lang, text))
        info = scope_of(root)
        return [root_src(d) for d in independent_decls(root, info)], root

    def test_plain_and_constant_init_both_qualify(self):
        texts, _ = self._decls("void f() { int x; int y = 0; }")
        assert texts == ["int x ;", "int y = 0 ;"]

    def test_dependency_on_prior_local_disqualifies(self):
        texts, _ = self._decls("void f() { int x = 1; int y = x; }")
        assert texts == ["int x = 1 ;"]

    def test_call_in_initializer_disqualifies(self):
        texts, _ = self._decls("void f() { int x = g(); }")
        assert texts == []

    def test_const_local_reference_allowed(self):
        texts, _ = self._decls("void f() { const int k = 5; int y = k; }")
        assert "int y = k ;" in texts

    def test_param_reference_disqualifies(self):
        texts, _ = self._decls("void f(int n) { int a[10]; int b = n + 1; }")
        assert texts == ["int a [ 10 ] ;"]

    def test_external_reference_allowed(self):
        texts, _ = self._decls("void f() { int x = LIMIT; }")
        assert texts == ["int x = LIMIT ;"]


def root_src(node):
    return " ".join(t.text for t in node.terminals())
