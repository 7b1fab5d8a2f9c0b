"""Concrete syntax for TCP models, plus JSON and DOT renderings of LTSs.

Model files look like::

    alphabet { tau, l, u }
    proc Ph : 1 -> 1 = fix P0 {
        P0 : 1 -> 1 = <tau/tau>.P0 + <l/tau>.P1;
        P1 : 1 -> 1 = <tau/tau>.P1 + <tau/l>.P0;
    };
    proc Ring : 0 -> 0 = eta ; (Ph || id) ; eps;

``;`` is the communicating parallel, ``||`` the non-communicating one,
``+`` summation and ``<a,b/c>.P`` an action prefix.  Binding strength,
tightest first: prefix, ``+``, ``||``, ``;``; binary operators associate to
the left.  ``#`` starts a comment.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import MissingTau, ParseError, SchemaError, SortMismatch, UnknownAction, UnknownName
from .kernel import (
    BUILTIN_WIRES,
    TAU,
    Alphabet,
    Expr,
    Fix,
    Label,
    Sort,
    Star,
    Sum,
    Tensor,
    Var,
    VarRef,
    WireRelation,
    alpha_canonical,
    mk_wire,
    render,
    sort_of,
)
from .lts import Lts, Transition

KEYWORDS = {"alphabet", "proc", "nil", "wire", "fix"} | set(BUILTIN_WIRES)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>\|\||->|[<>/,.+;:=()\[\]{}~])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "nat", "ident", "sym" or "eof"
    value: str
    line: int
    column: int


def tokenize(text: str) -> list:
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


@dataclass
class ModelFile:
    alphabet: Alphabet
    definitions: dict = field(default_factory=dict)  # name -> Expr, in file order

    def __getitem__(self, name):
        try:
            return self.definitions[name]
        except KeyError:
            raise UnknownName(f"no definition named {name!r}") from None


class _Parser:
    def __init__(self, text, alphabet=None, definitions=None):
        self.toks = tokenize(text)
        self.i = 0
        self.alphabet = alphabet
        self.definitions = dict(definitions or {})

    # token helpers

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value, tok=None):
        tok = tok or self.tok
        return tok.kind in ("sym", "ident") and tok.value == value

    def error(self, message, tok=None, cls=ParseError):
        tok = tok or self.tok
        return cls(message, tok.line, tok.column)

    def expect(self, value):
        if not self.at(value):
            raise self.error(f"expected {value!r}, found {self.tok.value or 'end of input'!r}")
        tok = self.tok
        self.i += 1
        return tok

    def nat(self):
        if self.tok.kind != "nat":
            raise self.error(f"expected a number, found {self.tok.value or 'end of input'!r}")
        self.i += 1
        return int(self.toks[self.i - 1].value)

    def ident(self, what="identifier", allow_keywords=False):
        tok = self.tok
        if tok.kind != "ident" or (not allow_keywords and tok.value in KEYWORDS):
            raise self.error(f"expected {what}, found {tok.value or 'end of input'!r}")
        self.i += 1
        return tok.value

    def sort_decl(self):
        m = self.nat()
        self.expect("->")
        return Sort(m, self.nat())

    def checked(self, e, tok):
        try:
            sort_of(e)
        except SortMismatch as exc:
            raise SortMismatch(str(exc), exc.path, tok.line, tok.column) from None
        return e

    # grammar

    def model(self):
        start = self.tok
        self.expect("alphabet")
        self.expect("{")
        names = [self.ident("action name", allow_keywords=True)]
        while self.at(","):
            self.i += 1
            names.append(self.ident("action name", allow_keywords=True))
        self.expect("}")
        if TAU not in names:
            raise self.error("alphabet must contain 'tau'", start, MissingTau)
        if len(set(names)) != len(names):
            raise self.error("duplicate action in alphabet", start)
        self.alphabet = Alphabet(tuple(names))
        model = ModelFile(self.alphabet)
        while not self.tok.kind == "eof":
            kw = self.expect("proc")
            name_tok = self.tok
            name = self.ident("process name")
            if name in self.definitions:
                raise self.error(f"process {name!r} defined twice", name_tok)
            self.expect(":")
            declared = self.sort_decl()
            self.expect("=")
            body = self.expr({})
            self.expect(";")
            got = sort_of(body)
            if got != declared:
                raise SortMismatch(f"{name} is declared {declared} but has sort {got}", (), kw.line, kw.column)
            self.definitions[name] = body
            model.definitions[name] = body
        return model

    def starts_term(self, k):
        tok, nxt = self.peek(k), self.peek(k + 1)
        if self.at("<", tok) or self.at("(", tok):
            return True
        return tok.kind == "ident" and tok.value not in ("proc", "alphabet") and not self.at(":", nxt)

    def expr(self, scope):
        e = self.term(scope)
        while self.at(";") and self.starts_term(1):
            op = self.expect(";")
            e = self.checked(Star(e, self.term(scope)), op)
        return e

    def term(self, scope):
        e = self.factor(scope)
        while self.at("||"):
            op = self.expect("||")
            e = self.checked(Tensor(e, self.factor(scope)), op)
        return e

    def factor(self, scope):
        if not self.at("<"):
            return self.atom(scope)
        start = self.tok
        branches = [self.prefix(scope)]
        while self.at("+"):
            self.i += 1
            branches.append(self.prefix(scope))
        return self.checked(Sum(tuple(branches), branches[0][0].sort), start)

    def prefix(self, scope):
        self.expect("<")
        left = self.avec()
        self.expect("/")
        right = self.avec()
        self.expect(">")
        self.expect(".")
        body_tok = self.tok
        body = self.atom(scope)
        lab = Label(left, right)
        if sort_of(body) != lab.sort:
            raise SortMismatch(
                f"prefix {lab} has sort {lab.sort} but continues as {sort_of(body)}",
                (),
                body_tok.line,
                body_tok.column,
            )
        return lab, body

    def avec(self):
        out = []
        if self.tok.kind != "ident":
            return ()
        while True:
            tok = self.tok
            name = self.ident("action name", allow_keywords=True)
            if name not in self.alphabet:
                raise self.error(f"unknown action {name!r}", tok, UnknownName)
            out.append(name)
            if not self.at(","):
                return tuple(out)
            self.i += 1

    def atom(self, scope):
        tok = self.tok
        if self.at("("):
            self.i += 1
            e = self.expr(scope)
            self.expect(")")
            return e
        if tok.kind != "ident":
            raise self.error(f"expected an expression, found {tok.value or 'end of input'!r}")
        name = tok.value
        if name == "nil":
            self.i += 1
            self.expect("[")
            m = self.nat()
            self.expect(",")
            n = self.nat()
            self.expect("]")
            return Sum((), Sort(m, n))
        if name == "wire":
            return self.wire()
        if name == "fix":
            return self.fix(scope)
        if name in BUILTIN_WIRES:
            self.i += 1
            return mk_wire(BUILTIN_WIRES[name], self.alphabet)
        if name in KEYWORDS:
            raise self.error(f"unexpected keyword {name!r}")
        self.i += 1
        if name in scope:
            return VarRef(scope[name])
        if name in self.definitions:
            return self.definitions[name]
        raise self.error(f"unknown process {name!r}", tok, UnknownName)

    def wire(self):
        self.expect("wire")
        self.expect("[")
        sort = self.sort_decl()
        self.expect("]")
        self.expect("{")
        pairs = []
        while self.tok.kind == "nat":
            tok = self.tok
            i = self.nat()
            self.expect("~")
            j = self.nat()
            n = sort.left + sort.right
            if not (1 <= i <= n and 1 <= j <= n):
                raise self.error(f"wire index pair {i}~{j} outside 1..{n}", tok)
            pairs.append((i, j))
            if not self.at(","):
                break
            self.i += 1
        self.expect("}")
        return mk_wire(WireRelation(sort, frozenset(pairs)), self.alphabet)

    def fix(self, scope):
        start = self.expect("fix")
        sel_tok = self.tok
        selected = self.ident("variable name")
        self.expect("{")
        headers = self.scan_headers()
        if not headers:
            raise self.error("fix needs at least one binding")
        names = [v.name for v, _ in headers]
        for v, tok in headers:
            if names.count(v.name) > 1:
                raise self.error(f"variable {v.name!r} bound twice", tok)
        if selected not in names:
            raise self.error(f"fix selects {selected!r}, which it does not bind", sel_tok, UnknownName)
        inner = dict(scope)
        inner.update({v.name: v for v, _ in headers})
        bindings = []
        for v, _ in headers:
            self.ident("variable name")
            self.expect(":")
            self.sort_decl()
            self.expect("=")
            body_tok = self.tok
            body = self.expr(inner)
            self.expect(";")
            if sort_of(body) != v.sort:
                raise SortMismatch(
                    f"body of {v.name} has sort {sort_of(body)}, declared {v.sort}",
                    (),
                    body_tok.line,
                    body_tok.column,
                )
            bindings.append((v, body))
        self.expect("}")
        return self.checked(Fix(names.index(selected), tuple(bindings)), start)

    def scan_headers(self):
        """Binding headers (``NAME : m -> n``) of the fix block starting here."""
        out, depth, k = [], 0, self.i
        toks = self.toks
        while toks[k].kind != "eof":
            t = toks[k]
            if self.at("{", t):
                depth += 1
            elif self.at("}", t):
                if depth == 0:
                    return out
                depth -= 1
            elif depth == 0 and t.kind == "ident" and self.at(":", toks[k + 1]):
                if t.value in KEYWORDS:
                    raise self.error(f"keyword {t.value!r} used as variable name", t)
                if toks[k + 2].kind != "nat" or not self.at("->", toks[k + 3]) or toks[k + 4].kind != "nat":
                    raise self.error("malformed binding header, expected NAME : m -> n", t)
                out.append((Var(t.value, Sort(int(toks[k + 2].value), int(toks[k + 4].value))), t))
                k += 4
            k += 1
        raise self.error("unterminated fix block", toks[k])


def parse_model(text: str) -> ModelFile:
    """Parse a model file; every definition is sort-checked."""
    return _Parser(text).model()


def parse_expr(text: str, alphabet: Alphabet, definitions: Optional[dict] = None) -> Expr:
    """Parse a single expression over ``alphabet``."""
    p = _Parser(text, alphabet, definitions)
    e = p.expr({})
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.value!r} after expression")
    return e


def print_expr(e: Expr) -> str:
    """Deterministic text for ``e``; parsing it gives back ``alpha_canonical(e)``."""
    return render(alpha_canonical(e))


def print_model(model: ModelFile) -> str:
    lines = [f"alphabet {{ {', '.join(model.alphabet.actions)} }}"]
    for name, e in model.definitions.items():
        s = sort_of(e)
        lines.append(f"proc {name} : {s.left} -> {s.right} = {print_expr(e)};")
    return "\n".join(lines) + "\n"


# -- LTS serialisation ------------------------------------------------------


def lts_to_json(t: Lts) -> str:
    doc = {
        "left": t.sort.left,
        "right": t.sort.right,
        "alphabet": list(t.alphabet),
        "states": list(t.states),
        "initial": t.initial,
        "transitions": [
            {"from": tr.source, "label": {"left": list(tr.label.left), "right": list(tr.label.right)}, "to": tr.target}
            for tr in t.ordered_transitions()
        ],
    }
    if t.payload is not None:
        doc["payload"] = {str(k): t.payload[k] for k in t.states if k in t.payload}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _require(doc, key, kind):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise SchemaError(f"field {key!r} has the wrong type")
    return value


def _state_id(x):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"state id {x!r} must be an integer or a string")
    return x


def json_to_lts(text: str) -> Lts:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise SchemaError("LTS document must be a JSON object")
    sort = Sort(_require(doc, "left", int), _require(doc, "right", int))
    if sort.left < 0 or sort.right < 0:
        raise SchemaError("interface counts must be nonnegative")
    alphabet = tuple(_require(doc, "alphabet", list))
    if not all(isinstance(a, str) for a in alphabet):
        raise SchemaError("alphabet entries must be strings")
    states = tuple(_state_id(x) for x in _require(doc, "states", list))
    members = set(states)
    if len(members) != len(states):
        raise SchemaError("duplicate state ids")
    initial = _state_id(doc.get("initial"))
    if initial not in members:
        raise SchemaError(f"initial state {initial!r} is not listed")
    known = set(alphabet)
    transitions = set()
    for k, raw in enumerate(_require(doc, "transitions", list)):
        if not isinstance(raw, dict) or not isinstance(raw.get("label"), dict):
            raise SchemaError(f"transition {k} is malformed")
        src, dst = _state_id(raw.get("from")), _state_id(raw.get("to"))
        if src not in members or dst not in members:
            raise SchemaError(f"transition {k} uses an unknown state")
        left, right = raw["label"].get("left"), raw["label"].get("right")
        if not isinstance(left, list) or not isinstance(right, list):
            raise SchemaError(f"transition {k} label needs 'left' and 'right' lists")
        if len(left) != sort.left or len(right) != sort.right:
            raise SchemaError(f"transition {k} label has arity {len(left)}/{len(right)}, sort is {sort}")
        for a in left + right:
            if a not in known:
                raise UnknownAction(f"transition {k} uses action {a!r} outside the alphabet")
        tr = Transition(src, Label(tuple(left), tuple(right)), dst)
        if tr in transitions:
            raise SchemaError(f"transition {k} is a duplicate")
        transitions.add(tr)
    payload = doc.get("payload")
    if payload is not None:
        by_text = {str(x): x for x in states}
        payload = {by_text[k]: v for k, v in payload.items() if k in by_text}
    return Lts(sort, states, initial, frozenset(transitions), alphabet, payload)


def _dot_quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def lts_to_dot(t: Lts) -> str:
    """Graphviz source: one node per state, one edge per transition."""
    lines = ["digraph lts {", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for x in t.states:
        shape = "doublecircle" if x == t.initial else "circle"
        attrs = f"shape={shape}"
        if t.payload and x in t.payload:
            attrs += f", tooltip={_dot_quote(t.payload[x])}"
        lines.append(f"  {_dot_quote(x)} [{attrs}];")
    lines.append(f"  __start -> {_dot_quote(t.initial)};")
    for tr in t.ordered_transitions():
        text = f"⟨{','.join(tr.label.left)} / {','.join(tr.label.right)}⟩"
        lines.append(f"  {_dot_quote(tr.source)} -> {_dot_quote(tr.target)} [label={_dot_quote(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
