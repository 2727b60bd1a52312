"""Square-group documents: named declarations and requested checks.

A document is line oriented::

    # comment
    abelian A = [2, 3]
    abelian B = rels(2; [2 0], [0 3])
    square  M = znil_set{s,t}
    square  N = atensor(A)
    square  X = tensor(M, N)
    monoid  C2 = table{e,t; t*t=e}
    morphism twice = times(M, 2)
    check   homotopy M --max 3

Declarations are resolved in order, so every name must be declared before
it is used. ``check`` lines may also name registry fixtures.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import registry
from .boxcomp import box
from .constructors import (
    a_tensor,
    e_involution,
    free_sq,
    from_abelian,
    involution_by_name,
    v_free,
    znil,
    znil_set,
    zq,
)
from .limits import coproduct
from .nil2 import Nil2Hom
from .qrings import FiniteMonoid
from .sqcore import SquareGroup, n_star, product
from .tensor import tensor
from .utils import DocumentSyntaxError, UnresolvedReferenceError, setup_logger
from .zalgebra import FgAbelianGroup


logger = setup_logger(__name__)


KINDS = ("abelian", "square", "monoid", "morphism")


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Name:
    text: str


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class ListTerm:
    items: Tuple["Term", ...]


@dataclass(frozen=True)
class Rule:
    """``a*b=c`` inside a monoid table."""

    left: str
    right: str
    result: str


@dataclass(frozen=True)
class Call:
    """``head(...)`` or ``head{...}``; ``groups`` are the ``;``-separated argument groups."""

    head: str
    groups: Tuple[Tuple["Term", ...], ...]
    brace: bool = False

    @property
    def args(self) -> Tuple["Term", ...]:
        return tuple(t for group in self.groups for t in group)


Term = Union[Name, Int, ListTerm, Rule, Call]


@dataclass
class Declaration:
    kind: str
    name: str
    expr: Term
    line: int = field(default=0, compare=False)


@dataclass
class CheckLine:
    command: str
    args: Tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass
class SqDocument:
    """A parsed document with its resolved objects.

    Attributes:
        declarations: Declarations in source order
        checks: Requested computations in source order
        objects: Resolved objects by name
    """

    declarations: List[Declaration] = field(default_factory=list)
    checks: List[CheckLine] = field(default_factory=list)
    objects: Dict[str, object] = field(default_factory=dict, compare=False)

    def kind_of(self, name: str) -> Optional[str]:
        for decl in self.declarations:
            if decl.name == name:
                return decl.kind
        return None

    def squares(self) -> Dict[str, SquareGroup]:
        return {d.name: self.objects[d.name] for d in self.declarations if d.kind == "square"}


# ---------------------------------------------------------------------------
# Tokenizer


TOKEN_RE = re.compile(
    r"(?P<ws>[ \t]+)|(?P<comment>\#.*)|(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>[=()\[\]{},;*])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize_line(text: str, line: int) -> List[Token]:
    """Split one line into tokens, dropping whitespace and comments.

    Raises:
        DocumentSyntaxError: On a character no token starts with
    """
    tokens = []
    pos = 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if match is None:
            raise DocumentSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = match.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, match.group(), line, pos + 1))
        pos = match.end()
    return tokens


class _TermParser:
    def __init__(self, tokens: Sequence[Token], line: int, width: int):
        self.tokens = list(tokens)
        self.pos = 0
        self.line = line
        self.width = width

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str) -> DocumentSyntaxError:
        tok = self.peek()
        column = tok.column if tok is not None else self.width + 1
        return DocumentSyntaxError(message, self.line, column)

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            found = "end of line" if tok is None else repr(tok.text)
            raise self.error(f"expected {text!r}, found {found}")
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "punct" and tok.text == text

    def done(self) -> bool:
        return self.pos == len(self.tokens)

    def term(self) -> Term:
        tok = self.peek()
        if tok is None:
            raise self.error("expected an expression, found end of line")
        if tok.kind == "int":
            self.pos += 1
            return Int(int(tok.text))
        if tok.text == "[":
            self.pos += 1
            items = []
            while not self.at("]"):
                items.append(self.term())
                if self.at(","):
                    self.pos += 1
            self.expect("]")
            return ListTerm(tuple(items))
        if tok.kind != "name":
            raise self.error(f"unexpected {tok.text!r}")
        self.pos += 1
        if self.at("("):
            return Call(tok.text, self.groups("(", ")"), brace=False)
        if self.at("{"):
            return Call(tok.text, self.groups("{", "}"), brace=True)
        if self.at("*"):
            self.pos += 1
            right = self.name()
            self.expect("=")
            return Rule(tok.text, right, self.name())
        return Name(tok.text)

    def name(self) -> str:
        tok = self.peek()
        if tok is None or tok.kind != "name":
            raise self.error("expected a name")
        self.pos += 1
        return tok.text

    def groups(self, opening: str, closing: str) -> Tuple[Tuple[Term, ...], ...]:
        self.expect(opening)
        groups: List[List[Term]] = [[]]
        while not self.at(closing):
            if self.peek() is None:
                raise self.error(f"expected {closing!r}, found end of line")
            groups[-1].append(self.term())
            if self.at(","):
                self.pos += 1
            elif self.at(";"):
                self.pos += 1
                groups.append([])
            elif not self.at(closing):
                raise self.error(f"expected ',', ';' or {closing!r}")
        self.expect(closing)
        if groups == [[]]:
            return ()
        return tuple(tuple(g) for g in groups)


# ---------------------------------------------------------------------------
# Parsing


def _parse_line(text: str, number: int) -> Union[Declaration, CheckLine, None]:
    stripped = text.strip()
    if not stripped or stripped.startswith("#"):
        return None
    head = stripped.split()[0]
    if head == "check":
        words = stripped.split("#", 1)[0].split()
        if len(words) < 2:
            raise DocumentSyntaxError("check needs a command", number, len(text) + 1)
        return CheckLine(words[1], tuple(words[2:]), number)

    tokens = tokenize_line(text, number)
    parser = _TermParser(tokens, number, len(text))
    keyword = parser.name()
    if keyword not in KINDS:
        raise DocumentSyntaxError(f"unknown declaration kind '{keyword}'", number, tokens[0].column)
    name = parser.name()
    parser.expect("=")
    expr = parser.term()
    if not parser.done():
        raise parser.error("trailing input after declaration")
    return Declaration(keyword, name, expr, number)


def parse_syntax(text: str) -> SqDocument:
    """Parse without resolving references."""
    doc = SqDocument()
    seen: Dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        item = _parse_line(line, number)
        if isinstance(item, Declaration):
            if item.name in seen:
                raise DocumentSyntaxError(
                    f"'{item.name}' is already declared on line {seen[item.name]}", number, 1
                )
            seen[item.name] = number
            doc.declarations.append(item)
        elif isinstance(item, CheckLine):
            doc.checks.append(item)
    return doc


def parse_document(text: str) -> SqDocument:
    """Parse and resolve a document.

    Every declaration is built in order; square groups are validated as
    they are constructed.

    Args:
        text: Document source

    Returns:
        SqDocument with ``objects`` filled in

    Raises:
        DocumentSyntaxError: For malformed input, with line and column
        UnresolvedReferenceError: For a name that is declared nowhere
        ValidationError: If a declared object fails its axioms
    """
    doc = parse_syntax(text)
    resolver = _Resolver(doc)
    for decl in doc.declarations:
        doc.objects[decl.name] = resolver.build(decl)
        logger.debug(f"line {decl.line}: {decl.kind} {decl.name} resolved")
    for check in doc.checks:
        for arg in check.args:
            if _is_reference(arg) and arg not in doc.objects and not _in_registry(arg):
                raise UnresolvedReferenceError(arg, check.line)
    return doc


def _is_reference(arg: str) -> bool:
    return not arg.startswith("-") and not re.fullmatch(r"-?\d+", arg)


def _in_registry(name: str) -> bool:
    return name in registry.SQUARES or name in registry.RINGS or name in registry.COSYMMETRIES


# ---------------------------------------------------------------------------
# Resolution


class _Resolver:
    def __init__(self, doc: SqDocument):
        self.doc = doc
        self.line = 0

    def fail(self, message: str) -> DocumentSyntaxError:
        return DocumentSyntaxError(message, self.line, 1)

    def lookup(self, name: str, kind: str):
        if name not in self.doc.objects:
            raise UnresolvedReferenceError(name, self.line)
        if self.doc.kind_of(name) != kind:
            raise self.fail(f"'{name}' is a {self.doc.kind_of(name)}, expected a {kind}")
        return self.doc.objects[name]

    def build(self, decl: Declaration):
        self.line = decl.line
        builder = getattr(self, f"build_{decl.kind}")
        return builder(decl.expr)

    # -- abelian ------------------------------------------------------------

    def build_abelian(self, expr: Term) -> FgAbelianGroup:
        if isinstance(expr, ListTerm):
            return FgAbelianGroup.diagonal(self.ints(expr))
        if isinstance(expr, Name):
            return self.lookup(expr.text, "abelian")
        if isinstance(expr, Call) and expr.head == "rels" and not expr.brace:
            if not expr.groups or len(expr.groups[0]) != 1 or not isinstance(expr.groups[0][0], Int):
                raise self.fail("rels needs the generator count first: rels(N; [..], ...)")
            ngens = expr.groups[0][0].value
            rows = [self.ints(row) for group in expr.groups[1:] for row in group]
            try:
                return FgAbelianGroup(ngens, rows)
            except ValueError as e:
                raise self.fail(str(e))
        raise self.fail("an abelian group is [d1, d2, ...], rels(N; ...) or a declared name")

    def ints(self, term: Term) -> List[int]:
        if not isinstance(term, ListTerm) or not all(isinstance(t, Int) for t in term.items):
            raise self.fail("expected a list of integers")
        return [t.value for t in term.items]

    def names(self, term: Term) -> List[str]:
        if not isinstance(term, Name):
            raise self.fail("expected a name")
        return [term.text]

    # -- square -------------------------------------------------------------

    def build_square(self, expr: Term) -> SquareGroup:
        if isinstance(expr, Name):
            if expr.text == "znil":
                return znil()
            if expr.text == "zq":
                return zq()
            return self.lookup(expr.text, "square")
        if not isinstance(expr, Call):
            raise self.fail("expected a square-group constructor")
        head, args = expr.head, expr.args
        if expr.brace:
            if head == "znil_set":
                return znil_set(self.labels(args))
            if head == "vfree":
                return v_free(self.labels(args))
            if head == "free":
                groups = expr.groups + ((),) * (2 - len(expr.groups))
                if len(groups) != 2:
                    raise self.fail("free{...; ...} takes at most two groups")
                return free_sq(self.labels(groups[0]), self.labels(groups[1]))
            raise self.fail(f"unknown constructor '{head}{{...}}'")
        if head in ("atensor", "abelian"):
            self.arity(expr, 1)
            a = self.build_abelian(args[0])
            return a_tensor(a) if head == "atensor" else from_abelian(a)
        if head == "involution":
            self.arity(expr, 2)
            if not isinstance(args[1], Name):
                raise self.fail("involution takes neg, id or swap")
            try:
                lattice, tau = involution_by_name(self.build_abelian(args[0]), args[1].text)
            except ValueError as e:
                raise self.fail(str(e))
            return e_involution(lattice, tau)
        if head in ("tensor", "box", "coproduct", "product"):
            self.arity(expr, 2)
            m, n = (self.build_square(a) for a in args)
            if head == "tensor":
                return tensor(m, n).result
            if head == "box":
                return box(m, n)
            if head == "coproduct":
                return coproduct(m, n).square
            return product(m, n).square
        raise self.fail(f"unknown constructor '{head}'")

    def labels(self, terms: Sequence[Term]) -> List[str]:
        out = []
        for t in terms:
            out.extend(self.names(t))
        if len(set(out)) != len(out):
            raise self.fail(f"generator names must be distinct: {out}")
        return out

    def arity(self, expr: Call, n: int) -> None:
        if len(expr.args) != n:
            raise self.fail(f"{expr.head} takes {n} argument(s), got {len(expr.args)}")

    # -- monoid / morphism --------------------------------------------------

    def build_monoid(self, expr: Term) -> FiniteMonoid:
        if not (isinstance(expr, Call) and expr.head == "table" and expr.brace and expr.groups):
            raise self.fail("a monoid is table{unit, a, ...; a*a=b, ...}")
        names = self.labels(expr.groups[0])
        rules = {}
        for group in expr.groups[1:]:
            for rule in group:
                if not isinstance(rule, Rule):
                    raise self.fail("expected a product rule a*b=c")
                rules[(rule.left, rule.right)] = rule.result
        try:
            return FiniteMonoid.from_rules(names, rules)
        except ValueError as e:
            raise self.fail(str(e))

    def build_morphism(self, expr: Term) -> Nil2Hom:
        if not (isinstance(expr, Call) and expr.head == "times" and not expr.brace):
            raise self.fail("a morphism is times(X, n)")
        self.arity(expr, 2)
        target, k = expr.args
        if not isinstance(k, Int):
            raise self.fail("times(X, n) needs an integer n")
        return n_star(self.build_square(target), k.value)


# ---------------------------------------------------------------------------
# Emission


def emit_term(term: Term) -> str:
    if isinstance(term, Name):
        return term.text
    if isinstance(term, Int):
        return str(term.value)
    if isinstance(term, ListTerm):
        return "[" + ", ".join(emit_term(t) for t in term.items) + "]"
    if isinstance(term, Rule):
        return f"{term.left}*{term.right}={term.result}"
    opening, closing = ("{", "}") if term.brace else ("(", ")")
    inner = "; ".join(", ".join(emit_term(t) for t in group) for group in term.groups)
    return f"{term.head}{opening}{inner}{closing}"


def emit_document(doc: SqDocument) -> str:
    """Normal form of a document: declarations first, then checks."""
    lines = [f"{d.kind} {d.name} = {emit_term(d.expr)}" for d in doc.declarations]
    lines += [" ".join(("check", c.command) + c.args) for c in doc.checks]
    return "\n".join(lines) + ("\n" if lines else "")
