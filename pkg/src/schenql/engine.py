"""Backtracking grammar engine over token lists.

The grammar is plain data (trees of Term/Seq/Alt/Rule/Eps/Map nodes held in
a Grammar registry) and every front-door feature is a different traversal of
the same tree:

* parsing runs a depth-first backtracking recognizer that applies build
  actions to produce syntax trees;
* next-token computation records which terminals were probed exactly at the
  end of the input across all branches, which (for a grammar without dead
  nonterminals) is precisely the set of tokens that extend the prefix;
* shortest-completion synthesis turns the continuation captured at a probe
  into a concrete suffix, used for diagnostics and as parse witnesses;
* sentence generation samples random token strings with per-rule coverage
  counters and a bound on query-nesting depth.

Keeping a single grammar object means these views cannot drift apart.

The recognizer is iterative (explicit task stack) so deeply nested queries
never hit the interpreter recursion limit. Continuations are immutable
linked frames, which makes capturing them at a probe free.
"""

from __future__ import annotations

import random
from typing import Any, Callable

from .lexer import KEYWORD, NUMBER, STRING, Token


class Node:
    __slots__ = ()


class Term(Node):
    """A single terminal: token kind plus, for keywords, the exact lexeme."""

    __slots__ = ("kind", "lexeme", "label", "category", "slot", "suggestible")

    def __init__(
        self,
        kind: str,
        lexeme: str | None = None,
        label: str | None = None,
        category: str = "filter",
        slot: str | None = None,
        suggestible: bool = True,
    ) -> None:
        self.kind = kind
        self.lexeme = lexeme
        self.label = label if label is not None else _default_label(kind, lexeme)
        self.category = category
        self.slot = slot
        self.suggestible = suggestible

    def matches(self, tok: Token) -> bool:
        return tok.kind == self.kind and (self.lexeme is None or tok.lexeme == self.lexeme)


def _default_label(kind: str, lexeme: str | None) -> str:
    if kind == KEYWORD and lexeme is not None:
        return lexeme
    return {
        STRING: '"STRING"',
        NUMBER: "NUMBER",
        "tilde": "~",
        "equals": "=",
        "lparen": "(",
        "rparen": ")",
        "lbracket": "[",
        "rbracket": "]",
        "comma": ",",
    }.get(kind, lexeme or kind)


class Seq(Node):
    __slots__ = ("children", "build")

    def __init__(self, children: list[Node], build: Callable[[tuple], Any] | None = None) -> None:
        self.children = children
        self.build = build


class Alt(Node):
    __slots__ = ("children", "gweights", "tag")

    def __init__(
        self,
        children: list[Node],
        gweights: list[float] | None = None,
        tag: str | None = None,
    ) -> None:
        self.children = children
        self.gweights = gweights
        self.tag = tag


class Rule(Node):
    __slots__ = ("name",)

    def __init__(self, name: str) -> None:
        self.name = name


class Eps(Node):
    """Matches nothing and yields a constant value."""

    __slots__ = ("value",)

    def __init__(self, value: Any = None) -> None:
        self.value = value


class Map(Node):
    __slots__ = ("child", "fn")

    def __init__(self, child: Node, fn: Callable[[Any], Any]) -> None:
        self.child = child
        self.fn = fn


# Continuation frames. A continuation is either _DONE or a frame pointing at
# its parent; frames are immutable so probes can keep references for later
# completion synthesis.

_DONE = object()


class _SeqCont:
    __slots__ = ("node", "idx", "values", "parent")

    def __init__(self, node: Seq, idx: int, values: tuple, parent) -> None:
        self.node = node
        self.idx = idx
        self.values = values
        self.parent = parent


class _MapCont:
    __slots__ = ("fn", "parent")

    def __init__(self, fn, parent) -> None:
        self.fn = fn
        self.parent = parent


class ParseRun:
    """One recognizer run over a fixed token list.

    After run() finishes, `results` holds the built values of full parses
    (first one only unless exhaustive) and `expected` maps each probed
    position to {label: (term, continuation)}.
    """

    def __init__(self, grammar: "Grammar", tokens: list[Token], exhaustive: bool = False) -> None:
        self.grammar = grammar
        self.tokens = tokens
        self.n = len(tokens)
        self.exhaustive = exhaustive
        self.results: list[Any] = []
        self.expected: dict[int, dict[str, tuple[Term, Any]]] = {}

    def run(self) -> None:
        rules = self.grammar.rules
        tokens = self.tokens
        n = self.n
        expected = self.expected
        # Each task is ("n", node, pos, cont) to parse a node, or
        # ("r", cont, value, pos) to resume a continuation with a value.
        stack: list[tuple] = [("n", rules[self.grammar.start], 0, _DONE)]
        push = stack.append
        while stack:
            task = stack.pop()
            if task[0] == "n":
                _, node, pos, cont = task
                t = type(node)
                if t is Term:
                    rec = expected.setdefault(pos, {})
                    if node.label not in rec:
                        rec[node.label] = (node, cont)
                    if pos < n and node.matches(tokens[pos]):
                        push(("r", cont, tokens[pos], pos + 1))
                elif t is Seq:
                    if node.children:
                        push(("n", node.children[0], pos, _SeqCont(node, 1, (), cont)))
                    else:
                        value = node.build(()) if node.build else ()
                        push(("r", cont, value, pos))
                elif t is Alt:
                    for child in reversed(node.children):
                        push(("n", child, pos, cont))
                elif t is Rule:
                    push(("n", rules[node.name], pos, cont))
                elif t is Eps:
                    push(("r", cont, node.value, pos))
                else:  # Map
                    push(("n", node.child, pos, _MapCont(node.fn, cont)))
            else:
                _, cont, value, pos = task
                while True:
                    if cont is _DONE:
                        if pos == n:
                            self.results.append(value)
                            if not self.exhaustive:
                                return
                        break
                    if type(cont) is _MapCont:
                        value = cont.fn(value)
                        cont = cont.parent
                        continue
                    # _SeqCont
                    values = cont.values + (value,)
                    seq = cont.node
                    if cont.idx < len(seq.children):
                        push(("n", seq.children[cont.idx], pos, _SeqCont(seq, cont.idx + 1, values, cont.parent)))
                        break
                    value = seq.build(values) if seq.build else values
                    cont = cont.parent

    def completion(self, cont) -> list[tuple[str, str]]:
        """Shortest token suffix that discharges a captured continuation."""
        out: list[tuple[str, str]] = []
        g = self.grammar
        while cont is not _DONE:
            if type(cont) is _SeqCont:
                for child in cont.node.children[cont.idx :]:
                    out.extend(g.min_tokens(child))
            cont = cont.parent
        return out


class Grammar:
    def __init__(self, start: str) -> None:
        self.start = start
        self.rules: dict[str, Node] = {}
        self.depth_rules: set[str] = set()
        self._anon = 0
        self._min_len: dict[int, float] = {}
        self._min_toks: dict[int, list[tuple[str, str]]] = {}
        self._qdepth: dict[int, float] = {}

    def rule(self, name: str, node: Node) -> Rule:
        if name in self.rules:
            raise ValueError(f"duplicate rule {name}")
        self.rules[name] = node
        return Rule(name)

    # -- sugar -------------------------------------------------------------

    def rep0(self, item: Node, stop_weight: float = 0.65) -> Node:
        """Zero or more repetitions of item; value is a list."""
        self._anon += 1
        name = f"__rep{self._anon}"
        body = Alt(
            [
                Seq([item, Rule(name)], build=lambda v: [v[0]] + v[1]),
                Eps([]),
            ],
            gweights=[1.0 - stop_weight, stop_weight],
        )
        self.rules[name] = body
        return Rule(name)

    def rep1sep(self, item: Node, sep: Node) -> Node:
        rest = self.rep0(Seq([sep, item], build=lambda v: v[1]))
        return Seq([item, rest], build=lambda v: [v[0]] + v[1])

    # -- parsing -----------------------------------------------------------

    def run(self, tokens: list[Token], exhaustive: bool = False) -> ParseRun:
        r = ParseRun(self, tokens, exhaustive=exhaustive)
        r.run()
        return r

    # -- static analysis ---------------------------------------------------

    def _compute_min_lengths(self) -> None:
        # Fixpoint over rules: length of the shortest terminal string each
        # node derives. Needed both for completion synthesis and to prove
        # the grammar has no dead nonterminals.
        lengths: dict[str, float] = {name: float("inf") for name in self.rules}

        def node_len(node: Node) -> float:
            t = type(node)
            if t is Term:
                return 1.0
            if t is Eps:
                return 0.0
            if t is Seq:
                return sum(node_len(c) for c in node.children)
            if t is Alt:
                return min(node_len(c) for c in node.children)
            if t is Map:
                return node_len(node.child)
            return lengths[node.name]  # Rule

        changed = True
        while changed:
            changed = False
            for name, body in self.rules.items():
                ln = node_len(body)
                if ln < lengths[name]:
                    lengths[name] = ln
                    changed = True
        dead = [n for n, ln in lengths.items() if ln == float("inf")]
        if dead:
            raise ValueError(f"rules cannot terminate: {dead}")
        self._rule_len = lengths

    def _node_len(self, node: Node) -> float:
        t = type(node)
        if t is Term:
            return 1.0
        if t is Eps:
            return 0.0
        if t is Seq:
            return sum(self._node_len(c) for c in node.children)
        if t is Alt:
            return min(self._node_len(c) for c in node.children)
        if t is Map:
            return self._node_len(node.child)
        return self._rule_len[node.name]

    def min_tokens(self, node: Node) -> list[tuple[str, str]]:
        """Shortest token string (as (kind, lexeme) templates) derivable from node."""
        if not hasattr(self, "_rule_len"):
            self._compute_min_lengths()
        key = id(node)
        cached = self._min_toks.get(key)
        if cached is not None:
            return cached
        t = type(node)
        if t is Term:
            out = [_term_template(node)]
        elif t is Eps:
            out = []
        elif t is Seq:
            out = []
            for c in node.children:
                out.extend(self.min_tokens(c))
        elif t is Alt:
            best = min(node.children, key=self._node_len)
            out = self.min_tokens(best)
        elif t is Map:
            out = self.min_tokens(node.child)
        else:
            out = self.min_tokens(self.rules[node.name])
        self._min_toks[key] = out
        return out

    def query_depth(self, node: Node) -> float:
        """Minimal nesting of depth-counted rules needed to finish node."""
        if not self._qdepth:
            self._compute_qdepth()
        return self._qdepth_node(node)

    def _compute_qdepth(self) -> None:
        depths: dict[str, float] = {name: float("inf") for name in self.rules}

        def nd(node: Node) -> float:
            t = type(node)
            if t is Term or t is Eps:
                return 0.0
            if t is Seq:
                return max((nd(c) for c in node.children), default=0.0)
            if t is Alt:
                return min(nd(c) for c in node.children)
            if t is Map:
                return nd(node.child)
            extra = 1.0 if node.name in self.depth_rules else 0.0
            return extra + depths[node.name]

        changed = True
        while changed:
            changed = False
            for name, body in self.rules.items():
                d = nd(body)
                if d < depths[name]:
                    depths[name] = d
                    changed = True
        self._rule_qdepth = depths

    def _qdepth_node(self, node: Node) -> float:
        key = id(node)
        cached = self._qdepth.get(key)
        if cached is not None:
            return cached
        t = type(node)
        if t is Term or t is Eps:
            out = 0.0
        elif t is Seq:
            out = max((self._qdepth_node(c) for c in node.children), default=0.0)
        elif t is Alt:
            out = min(self._qdepth_node(c) for c in node.children)
        elif t is Map:
            out = self._qdepth_node(node.child)
        else:
            extra = 1.0 if node.name in self.depth_rules else 0.0
            out = extra + self._rule_qdepth[node.name]
        self._qdepth[key] = out
        return out

    # -- generation ----------------------------------------------------------

    def generate(
        self,
        rng: random.Random,
        pools: dict[str, list[str]],
        max_depth: int = 6,
        coverage: dict[str, int] | None = None,
    ) -> list[tuple[str, str]]:
        """Sample one random token string from the start rule.

        `pools` supplies lexemes for variable terminals keyed by slot name.
        `coverage`, when given, counts rule entries and chosen alternatives
        (as "rule" and "rule/idx" keys).
        """
        if not self._qdepth:
            self._compute_qdepth()
        out: list[tuple[str, str]] = []
        if coverage is not None:
            coverage[self.start] = coverage.get(self.start, 0) + 1
        self._gen(self.rules[self.start], rng, pools, max_depth, coverage, out)
        return out

    def _gen(self, node, rng, pools, budget, coverage, out) -> None:
        t = type(node)
        if t is Term:
            out.append(_term_instance(node, rng, pools))
        elif t is Eps:
            return
        elif t is Seq:
            for c in node.children:
                self._gen(c, rng, pools, budget, coverage, out)
        elif t is Alt:
            pairs = [
                (i, c)
                for i, c in enumerate(node.children)
                if self._qdepth_node(c) <= budget
            ]
            if not pairs:
                i, c = min(enumerate(node.children), key=lambda p: self._qdepth_node(p[1]))
                pairs = [(i, c)]
            weights = None
            if node.gweights is not None:
                weights = [node.gweights[i] for i, _ in pairs]
            idx = rng.choices(range(len(pairs)), weights=weights)[0]
            i, child = pairs[idx]
            if coverage is not None and node.tag is not None:
                key = f"{node.tag}/{i}"
                coverage[key] = coverage.get(key, 0) + 1
            self._gen(child, rng, pools, budget, coverage, out)
        elif t is Map:
            self._gen(node.child, rng, pools, budget, coverage, out)
        else:  # Rule
            name = node.name
            if coverage is not None and not name.startswith("__"):
                coverage[name] = coverage.get(name, 0) + 1
            nb = budget - 1 if name in self.depth_rules else budget
            self._gen(self.rules[name], rng, pools, nb, coverage, out)

    # -- coverage bookkeeping ------------------------------------------------

    def tag_alternatives(self) -> None:
        """Give every Alt under a named rule a stable tag for coverage counts."""
        for name, body in self.rules.items():
            if name.startswith("__"):
                continue
            counter = [0]

            def walk(node: Node) -> None:
                t = type(node)
                if t is Alt:
                    node.tag = f"{name}.a{counter[0]}"
                    counter[0] += 1
                    for c in node.children:
                        walk(c)
                elif t is Seq:
                    for c in node.children:
                        walk(c)
                elif t is Map:
                    walk(node.child)

            walk(body)

    def coverage_targets(self) -> set[str]:
        """All coverage keys generation can record: rule names and alt choices."""
        targets = {name for name in self.rules if not name.startswith("__")}

        def walk(node: Node) -> None:
            t = type(node)
            if t is Alt:
                if node.tag is not None:
                    for i in range(len(node.children)):
                        targets.add(f"{node.tag}/{i}")
                for c in node.children:
                    walk(c)
            elif t is Seq:
                for c in node.children:
                    walk(c)
            elif t is Map:
                walk(node.child)

        for name, body in self.rules.items():
            if not name.startswith("__"):
                walk(body)
        return targets

    # -- terminals ----------------------------------------------------------

    def terminals(self) -> list[Term]:
        seen: dict[int, Term] = {}

        def walk(node: Node) -> None:
            t = type(node)
            if t is Term:
                seen[id(node)] = node
            elif t is Seq:
                for c in node.children:
                    walk(c)
            elif t is Alt:
                for c in node.children:
                    walk(c)
            elif t is Map:
                walk(node.child)

        for body in self.rules.values():
            walk(body)
        return list(seen.values())


def _term_template(term: Term) -> tuple[str, str]:
    if term.lexeme is not None:
        return (term.kind, term.lexeme)
    if term.kind == STRING:
        return (STRING, "x")
    if term.kind == NUMBER:
        return (NUMBER, "2")
    fixed = {"tilde": "~", "equals": "=", "lparen": "(", "rparen": ")", "lbracket": "[", "rbracket": "]", "comma": ","}
    return (term.kind, fixed[term.kind])


def _term_instance(term: Term, rng: random.Random, pools: dict[str, list[str]]) -> tuple[str, str]:
    if term.lexeme is not None or term.kind not in (STRING, NUMBER):
        return _term_template(term)
    pool = pools.get(term.slot or "")
    if pool:
        return (term.kind, rng.choice(pool))
    return _term_template(term)


def tokens_to_text(templates: list[tuple[str, str]]) -> str:
    """Render (kind, lexeme) templates to parseable query text."""
    parts: list[str] = []
    for kind, lexeme in templates:
        if kind == STRING:
            escaped = lexeme.replace("\\", "\\\\").replace('"', '\\"')
            parts.append(f'"{escaped}"')
        else:
            parts.append(lexeme)
    return " ".join(parts)
