"""Quick manual exercise of the parser across all three languages."""

from cloneforge.lang import Language, SourceFunction, flatten_tokens, parse

SAMPLES = [
    ("c", "void f(){}"),
    ("c", """int gcd(int a, int b) {
    while (b != 0) {
        int t = a % b;
        a = b;
        b = t;
    }
    return a;
}"""),
    ("c", """int sum_array(const int *xs, size_t n) {
    int total = 0;
    for (size_t i = 0; i < n; i++) {
        total += xs[i];
    }
    return total;
}"""),
    ("c", """char *find_char(char *s, char c) {
    if (s == NULL) return NULL;
    while (*s != '\\0') {
        if (*s == c) { return s; }
        s++;
    }
    return NULL;
}"""),
    ("c", """int classify(int x) {
    int y;
    y = (x != 0) ? 2 / x : 0;
    switch (y) {
        case 0: return -1;
        case 1: break;
        default: y = y * 2;
    }
    do { y--; } while (y > 10);
    goto done;
done:
    return y;
}"""),
    ("c", """double mean(double vals[], int n) {
    double acc = 0.0, scale = 1.0;
    unsigned long long big = 0x1fULL;
    struct Point p;
    int m[3] = {1, 2, 3};
    if (n <= 0) return 0.0;
    acc = acc + (double)big * scale;
    return acc / n;
}"""),
    ("cpp", """int sum(std::vector<int>& xs) {
    int total = 0;
    for (auto it = xs.begin(); it != xs.end(); ++it) {
        total += *it;
    }
    std::sort(xs.begin(), xs.end());
    return total;
}"""),
    ("cpp", """bool check(int n) {
    try {
        if (n < 0) throw n;
        int *buf = new int(5);
        delete buf;
    } catch (...) {
        return false;
    }
    return n % 2 == 0 && true;
}"""),
    ("java", """public static int fib(int n) {
    if (n < 2) return n;
    int[] memo = new int[n + 1];
    memo[0] = 0;
    memo[1] = 1;
    for (int i = 2; i <= n; i++) {
        memo[i] = memo[i - 1] + memo[i - 2];
    }
    return memo[n];
}"""),
    ("java", """public String join(List<String> parts, String sep) {
    StringBuilder sb = new StringBuilder();
    boolean first = true;
    for (String p : parts) {
        if (!first) sb.append(sep);
        sb.append(p);
        first = false;
    }
    return sb.toString();
}"""),
    ("java", """private static Map<String, List<Integer>> index(String[] words) throws RuntimeException {
    Map<String, List<Integer>> out = new HashMap<>();
    for (int i = 0; i < words.length; i++) {
        if (out.get(words[i]) == null) {
            out.put(words[i], new ArrayList<>());
        }
        out.get(words[i]).add(i);
    }
    return out;
}"""),
]


def main():
    for idx, (lang, text) in enumerate(SAMPLES):
        fn = SourceFunction(id=f"s{idx}", language=lang, text=text)
        root = parse(fn)
        toks = flatten_tokens(root, text)
        rebuilt = []
        last = 0
        for t in toks:
            rebuilt.append(text[last:t.start])
            rebuilt.append(t.text)
            last = t.end
        rebuilt.append(text[last:])
        assert "".join(rebuilt) == text, f"s{idx}: token round-trip failed"
        spans_ok = all(
            a.end <= b.start for a, b in zip(toks, toks[1:])
        )
        assert spans_ok, f"s{idx}: overlapping terminals"
        print(f"s{idx} ({lang}): OK, {len(toks)} tokens, root={root.kind}")
    v = SourceFunction(id="tiny", language="c", text="void f(){}")
    print(parse(v).pretty())


if __name__ == "__main__":
    main()
