"""Plain-text ``.qalg`` format for algebras, Hopf data, and contractions.

Example::

    name: uso22
    generators: D H P K C1 C2
    brackets:
      [K,P] = (exp(tau*H) - 1)/tau
    coproducts:
      Delta(P) = 1 (x) P + P (x) exp(tau*H)
    rmatrix:
      R = exp(tau*H (x) D) * exp(-tau*D (x) H)
    realization:
      H = dt
    contraction:
      H: 1
      tau: 1

``#`` starts a comment.  Expressions use ``+ - * / ^``, ``exp(...)``,
parentheses, rational literals, and the symbol ``tau``.  ``(x)`` is the
tensor separator; it binds looser than ``*`` and tighter than ``+``.
Division is only allowed by rationals and powers of ``tau``.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .contraction import ContractionMap
from .hopf import HopfSpec, TensorElement
from .ncalgebra import AlgebraSpec, FreeElement, SpecDefinitionError
from .realization import PhaseSpaceOperator, PolynomialFunction
from .scalars import DEFAULT_ORDER, SeriesError

log = logging.getLogger(__name__)

SECTIONS = ("name", "generators", "brackets", "coproducts", "rmatrix", "realization", "contraction")
COORDINATES = ("x", "t", "dx", "dt")
RESERVED = {"tau", "exp", "Delta", "R", "S", *COORDINATES}
MAX_DEPTH = 100
MAX_AST_DEPTH = 400
MAX_EXPONENT = 64
MAX_TAU_DIVISIONS = 32


class SpecError(ValueError):
    """A located error in a ``.qalg`` document or expression."""

    def __init__(self, message, line=None, col=None, expected=None):
        self.message = message
        self.line = line
        self.col = col
        self.expected = sorted(expected) if expected else []
        where = f"{line}:{col}: " if line is not None else ""
        extra = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{extra}")


class SpecSyntaxError(SpecError):
    pass


class ElaborationError(SpecError):
    pass


# -- AST -----------------------------------------------------------------------
@dataclass(frozen=True)
class Num:
    value: Fraction
    span: tuple


@dataclass(frozen=True)
class Sym:
    name: str
    span: tuple


@dataclass(frozen=True)
class Neg:
    arg: object
    span: tuple


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    span: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    span: tuple


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object
    span: tuple


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object
    span: tuple


# -- tokens --------------------------------------------------------------------
_TOKEN = re.compile(r"(?P<ws>[ \t\r\f\v]+)|(?P<tensor>\(x\))|(?P<num>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),\[\]=:])")
_TOKEN_NO_TENSOR = re.compile(r"(?P<ws>[ \t\r\f\v]+)|(?P<num>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),\[\]=:])")


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, tensor, end
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col0: int = 1, tensor: bool = True) -> list[Token]:
    pattern = _TOKEN if tensor else _TOKEN_NO_TENSOR
    tokens = []
    pos = 0
    while pos < len(text):
        m = pattern.match(text, pos)
        if not m:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, col0 + pos))
        pos = m.end()
    tokens.append(Token("end", "", line, col0 + len(text)))
    return tokens


# -- expression parser -----------------------------------------------------------
@dataclass(frozen=True)
class Context:
    """What an expression may mention."""

    symbols: frozenset
    functions: frozenset = frozenset({"exp"})
    tensor: bool = False
    coordinates: bool = False
    label: str = "expression"


class _Parser:
    def __init__(self, tokens, ctx: Context):
        self.tokens = tokens
        self.pos = 0
        self.ctx = ctx
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, msg, expected=None, tok=None):
        tok = tok or self.tok
        raise SpecSyntaxError(msg, tok.line, tok.col, expected)

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def accept(self, text) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.advance()
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of line"
            self.error(f"unexpected {found!r}", {text})

    def parse_top(self, tensor_ok: bool):
        node = self.sum(tensor_ok)
        if self.tok.kind != "end":
            if self.tok.kind == "op" and self.tok.text == ")":
                self.error("unbalanced ')'")
            self.error(f"unexpected {self.tok.text!r}", {"+", "-", "*", "/", "end of line"})
        if _ast_depth(node) > MAX_AST_DEPTH:
            tok = self.tokens[0]
            raise SpecSyntaxError("expression too long or too deeply nested", tok.line, tok.col)
        return node

    def sum(self, tensor_ok=False):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.error("expression nested too deeply")
        node = self.term(tensor_ok)
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance()
            right = self.term(tensor_ok)
            node = BinOp(op.text, node, right, (op.line, op.col))
        self.depth -= 1
        return node

    def term(self, tensor_ok):
        node = self.product()
        if self.tok.kind == "tensor":
            tok = self.advance()
            if not (tensor_ok and self.ctx.tensor):
                raise SpecSyntaxError(f"tensor separator outside coproduct context ({self.ctx.label})", tok.line, tok.col)
            right = self.product()
            if self.tok.kind == "tensor":
                self.error("only two tensor factors are supported")
            node = Tensor(node, right, (tok.line, tok.col))
        return node

    def product(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance()
            right = self.unary()
            if op.text == "/":
                _check_denominator(right)
            node = BinOp(op.text, node, right, (op.line, op.col))
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            tok = self.advance()
            self.depth += 1
            if self.depth > MAX_DEPTH:
                self.error("expression nested too deeply")
            node = Neg(self.unary(), (tok.line, tok.col))
            self.depth -= 1
            return node
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
        return self.power()

    def power(self):
        node = self.atom()
        if self.accept("^"):
            tok = self.tok
            if tok.kind != "num":
                self.error("exponent must be a non-negative integer literal", {"integer"})
            self.advance()
            if int(tok.text) > MAX_EXPONENT:
                self.error(f"exponent larger than {MAX_EXPONENT}", tok=tok)
            node = Pow(node, int(tok.text), (tok.line, tok.col))
        return node

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(Fraction(int(tok.text)), (tok.line, tok.col))
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if self.tok.kind == "op" and self.tok.text == "(":
                if name not in self.ctx.functions:
                    raise SpecSyntaxError(f"unknown function {name!r}", tok.line, tok.col)
                self.advance()
                arg = self.sum(tensor_ok=False)
                self.expect(")")
                return Call(name, arg, (tok.line, tok.col))
            if name in COORDINATES and not self.ctx.coordinates:
                raise SpecSyntaxError(f"coordinate {name!r} is only allowed in realization sections", tok.line, tok.col)
            if name not in self.ctx.symbols:
                raise SpecSyntaxError(f"unknown symbol {name!r}", tok.line, tok.col)
            return Sym(name, (tok.line, tok.col))
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.sum(tensor_ok=False)
            self.expect(")")
            return node
        if tok.kind == "tensor":
            raise SpecSyntaxError(f"tensor separator outside coproduct context ({self.ctx.label})", tok.line, tok.col)
        found = tok.text or "end of line"
        self.error(f"unexpected {found!r}", {"number", "identifier", "(", "-"})


def _children(node):
    if isinstance(node, (BinOp, Tensor)):
        return (node.left, node.right)
    if isinstance(node, (Neg, Call)):
        return (node.arg,)
    if isinstance(node, Pow):
        return (node.base,)
    return ()


def _ast_depth(node) -> int:
    deepest = 0
    stack = [(node, 1)]
    while stack:
        n, d = stack.pop()
        deepest = max(deepest, d)
        stack.extend((c, d + 1) for c in _children(n))
    return deepest


def _check_denominator(node):
    """Only rationals and powers of tau may divide."""
    if isinstance(node, Num):
        if node.value == 0:
            raise SpecSyntaxError("division by zero", *node.span)
        return
    if isinstance(node, Sym) and node.name == "tau":
        return
    if isinstance(node, Neg):
        return _check_denominator(node.arg)
    if isinstance(node, Pow):
        return _check_denominator(node.base)
    if isinstance(node, BinOp) and node.op in "*/":
        _check_denominator(node.left)
        _check_denominator(node.right)
        return
    span = getattr(node, "span", (None, None))
    raise SpecSyntaxError("division only by rational literals or by tau", *span)


def parse_expression(text: str, ctx: Context, line: int = 1, col: int = 1, tensor_ok: bool | None = None):
    if tensor_ok is None:
        tensor_ok = ctx.tensor
    tokens = tokenize(text, line, col, tensor=not ctx.coordinates)
    return _Parser(tokens, ctx).parse_top(tensor_ok)


# -- document --------------------------------------------------------------------
@dataclass
class BracketItem:
    left: str
    right: str
    expr: object
    span: tuple


@dataclass
class CoproductItem:
    generator: str
    expr: object
    span: tuple


@dataclass
class RealizationItem:
    generator: str
    expr: object
    span: tuple


@dataclass
class SpecDocument:
    name: str = "unnamed"
    generators: list = field(default_factory=list)
    brackets: list = field(default_factory=list)
    coproducts: list = field(default_factory=list)
    rmatrix: list | None = None  # list of exp-argument ASTs
    realization: list = field(default_factory=list)
    contraction: dict | None = None  # {"scale": {...}, "tau": int}
    spans: dict = field(default_factory=dict)


_HEADER = re.compile(r"^\s*(name|generators|brackets|coproducts|rmatrix|realization|contraction)\s*:(.*)$")
_IDENT = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_bytes(data: bytes, source: str = "<bytes>") -> SpecDocument:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SpecSyntaxError(f"input is not valid UTF-8 (byte {exc.start})", 1, 1) from None
    return parse(text)


def parse(text: str) -> SpecDocument:
    """Parse a ``.qalg`` document into ASTs with line/column spans."""
    doc = SpecDocument()
    section = None
    seen_sections = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _HEADER.match(line)
        if m and not (section == "contraction" and m.group(1) not in SECTIONS):
            section = m.group(1)
            if section in seen_sections:
                raise SpecSyntaxError(f"duplicate section {section!r}", lineno, 1)
            seen_sections.add(section)
            rest = m.group(2)
            col = m.start(2) + 1
            if section == "name":
                name = rest.strip()
                if not name:
                    raise SpecSyntaxError("empty name", lineno, col)
                doc.name = name
                section = None
            elif section == "generators":
                _add_generators(doc, rest, lineno, col)
            elif rest.strip():
                raise SpecSyntaxError(f"unexpected text after '{section}:'", lineno, col)
            if section == "rmatrix":
                doc.rmatrix = []
            if section == "contraction":
                doc.contraction = {"scale": {}, "tau": None}
            continue
        if section is None:
            raise SpecSyntaxError("content outside any section", lineno, 1, {f"{s}:" for s in SECTIONS})
        if section != "generators" and not doc.generators:
            raise SpecSyntaxError("generators must be declared before other sections", lineno, 1)
        handler = _HANDLERS[section]
        handler(doc, line, lineno)
    if not doc.generators:
        raise SpecSyntaxError("no generators declared", 1, 1, {"generators:"})
    return doc


def _add_generators(doc, text, lineno, col):
    for m in re.finditer(r"[^\s,]+", text):
        name = m.group()
        c = col + m.start()
        if not _IDENT.match(name):
            raise SpecSyntaxError(f"invalid generator name {name!r}", lineno, c)
        if name in RESERVED:
            raise SpecSyntaxError(f"{name!r} is a reserved word", lineno, c)
        if name in doc.generators:
            raise SpecSyntaxError(f"duplicate generator {name!r}", lineno, c)
        doc.generators.append(name)
        doc.spans[("generator", name)] = (lineno, c)


def _gen_context(doc, tensor=False, label="brackets") -> Context:
    return Context(frozenset(doc.generators) | {"tau"}, tensor=tensor, label=label)


def _split_eq(line, lineno):
    i = line.find("=")
    if i < 0:
        raise SpecSyntaxError("missing '='", lineno, len(line.rstrip()) + 1, {"="})
    return line[:i], line[i + 1:], i + 2


def _require_rhs(rhs, lineno, col):
    if not rhs.strip():
        raise SpecSyntaxError("syntax error: missing expression", lineno, col + len(rhs), {"expression"})


def _parse_bracket(doc, line, lineno):
    lhs, rhs, col = _split_eq(line, lineno)
    _require_rhs(rhs, lineno, col)
    m = re.match(r"^\s*\[\s*([^\s,\]]+)\s*,\s*([^\s\]]+)\s*\]\s*$", lhs)
    if not m:
        raise SpecSyntaxError("expected '[A,B] = expression'", lineno, 1, {"[A,B]"})
    a, b = m.group(1), m.group(2)
    for name, grp in ((a, 1), (b, 2)):
        if name not in doc.generators:
            raise SpecSyntaxError(f"unknown generator {name!r}", lineno, m.start(grp) + 1)
    if a == b:
        raise SpecSyntaxError(f"bracket [{a},{a}] is identically zero", lineno, 1)
    _require_rhs(rhs, lineno, col)
    expr = parse_expression(rhs, _gen_context(doc), lineno, col)
    doc.brackets.append(BracketItem(a, b, expr, (lineno, 1)))


def _parse_coproduct(doc, line, lineno):
    lhs, rhs, col = _split_eq(line, lineno)
    m = re.match(r"^\s*Delta\s*\(\s*([^\s)]+)\s*\)\s*$", lhs)
    if not m:
        raise SpecSyntaxError("expected 'Delta(A) = tensor expression'", lineno, 1, {"Delta(A)"})
    g = m.group(1)
    if g not in doc.generators:
        raise SpecSyntaxError(f"unknown generator {g!r}", lineno, m.start(1) + 1)
    if any(item.generator == g for item in doc.coproducts):
        raise SpecSyntaxError(f"duplicate coproduct for {g!r}", lineno, 1)
    _require_rhs(rhs, lineno, col)
    expr = parse_expression(rhs, _gen_context(doc, tensor=True, label="coproducts"), lineno, col)
    doc.coproducts.append(CoproductItem(g, expr, (lineno, 1)))


def _parse_rmatrix(doc, line, lineno):
    lhs, rhs, col = _split_eq(line, lineno)
    if lhs.strip() != "R":
        raise SpecSyntaxError("expected 'R = exp(...) * exp(...)'", lineno, 1, {"R"})
    if doc.rmatrix:
        raise SpecSyntaxError("duplicate R definition", lineno, 1)
    _require_rhs(rhs, lineno, col)
    ctx = _gen_context(doc, tensor=True, label="rmatrix")
    tokens = tokenize(rhs, lineno, col)
    p = _Parser(tokens, ctx)
    factors = []
    if p.tok.kind == "num" and p.tok.text == "1" and tokens[1].kind == "end":
        doc.rmatrix = []
        return
    while True:
        tok = p.tok
        if tok.kind != "ident" or tok.text != "exp":
            p.error("R must be a product of exp(...) factors", {"exp"})
        p.advance()
        p.expect("(")
        factors.append(p.sum(tensor_ok=True))
        p.expect(")")
        if p.tok.kind == "end":
            break
        p.expect("*")
    doc.rmatrix = factors


def _parse_realization(doc, line, lineno):
    lhs, rhs, col = _split_eq(line, lineno)
    g = lhs.strip()
    if g not in doc.generators:
        raise SpecSyntaxError(f"unknown generator {g!r}", lineno, 1)
    if any(item.generator == g for item in doc.realization):
        raise SpecSyntaxError(f"duplicate realization for {g!r}", lineno, 1)
    _require_rhs(rhs, lineno, col)
    ctx = Context(frozenset({"tau", *COORDINATES}), coordinates=True, label="realization")
    doc.realization.append(RealizationItem(g, parse_expression(rhs, ctx, lineno, col), (lineno, 1)))


def _parse_contraction(doc, line, lineno):
    m = re.match(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*:\s*(-?[0-9]+)\s*$", line)
    if not m:
        raise SpecSyntaxError("expected 'NAME: integer'", lineno, 1, {"NAME: integer"})
    name, value = m.group(1), int(m.group(2))
    if name == "tau":
        if doc.contraction["tau"] is not None:
            raise SpecSyntaxError("duplicate tau rule", lineno, 1)
        doc.contraction["tau"] = value
        return
    if name not in doc.generators:
        raise SpecSyntaxError(f"unknown generator {name!r}", lineno, m.start(1) + 1)
    if name in doc.contraction["scale"]:
        raise SpecSyntaxError(f"duplicate scale for {name!r}", lineno, 1)
    doc.contraction["scale"][name] = value


_HANDLERS = {
    "generators": lambda doc, line, lineno: _add_generators(doc, line, lineno, 1),
    "brackets": _parse_bracket,
    "coproducts": _parse_coproduct,
    "rmatrix": _parse_rmatrix,
    "realization": _parse_realization,
    "contraction": _parse_contraction,
}


# -- evaluation ------------------------------------------------------------------
def tau_divisions(node) -> int:
    """Upper bound on precision lost to divisions by tau inside ``node``."""
    if isinstance(node, BinOp):
        extra = _tau_power(node.right) if node.op == "/" else 0
        return extra + tau_divisions(node.left) + tau_divisions(node.right)
    if isinstance(node, (Neg, Call)):
        return tau_divisions(node.arg)
    if isinstance(node, Pow):
        return tau_divisions(node.base) * max(node.exponent, 1)
    if isinstance(node, Tensor):
        return tau_divisions(node.left) + tau_divisions(node.right)
    return 0


def _tau_power(node) -> int:
    """(tau power) of a checked denominator."""
    if isinstance(node, Sym):
        return 1
    if isinstance(node, Num):
        return 0
    if isinstance(node, Neg):
        return _tau_power(node.arg)
    if isinstance(node, Pow):
        return _tau_power(node.base) * node.exponent
    if isinstance(node, BinOp):
        if node.op == "*":
            return _tau_power(node.left) + _tau_power(node.right)
        return _tau_power(node.left) - _tau_power(node.right)
    return 0


def _denominator(node) -> tuple[Fraction, int]:
    if isinstance(node, Num):
        return node.value, 0
    if isinstance(node, Sym):
        return Fraction(1), 1
    if isinstance(node, Neg):
        c, k = _denominator(node.arg)
        return -c, k
    if isinstance(node, Pow):
        c, k = _denominator(node.base)
        return c ** node.exponent, k * node.exponent
    c1, k1 = _denominator(node.left)
    c2, k2 = _denominator(node.right)
    if node.op == "*":
        return c1 * c2, k1 + k2
    return c1 / c2, k1 - k2


class Evaluator:
    """Evaluate an AST into any value type supporting ring operations,
    ``div_tau``, ``mul_tau``, and ``exp``.
    """

    def __init__(self, symbol, one, tensor=None, functions=None):
        self.symbol = symbol
        self.one = one
        self.tensor = tensor
        self.functions = functions or {}

    def __call__(self, node):
        try:
            return self._eval(node)
        except SpecError:
            raise
        except (SeriesError, TypeError, ValueError, KeyError) as exc:
            span = getattr(node, "span", (None, None))
            raise ElaborationError(str(exc), *span) from None

    def _eval(self, node):
        if isinstance(node, Num):
            return self.one() * node.value
        if isinstance(node, Sym):
            if node.name == "tau":
                return self.one().mul_tau(1)
            return self.symbol(node.name)
        if isinstance(node, Neg):
            return -self._eval(node.arg)
        if isinstance(node, Pow):
            return self._eval(node.base) ** node.exponent
        if isinstance(node, Call):
            arg = self._eval(node.arg)
            try:
                if node.fn == "exp":
                    return arg.exp()
                return self.functions[node.fn](arg)
            except SeriesError as exc:
                raise ElaborationError(f"exp: {exc}", *node.span) from None
        if isinstance(node, Tensor):
            if self.tensor is None:
                raise ElaborationError("tensor separator not allowed here", *node.span)
            return self.tensor(self._eval(node.left), self._eval(node.right))
        if isinstance(node, BinOp):
            left = self._eval(node.left)
            if node.op == "/":
                c, k = _denominator(node.right)
                value = left * (1 / c)
                try:
                    if k < 0:
                        return value.mul_tau(-k)
                    for _ in range(k):
                        value = value.div_tau()
                except SeriesError as exc:
                    raise ElaborationError(str(exc), *node.span) from None
                return value
            right = self._eval(node.right)
            try:
                if node.op == "+":
                    return left + right
                if node.op == "-":
                    return left - right
                return left * right
            except (TypeError, ValueError) as exc:
                if self.tensor is not None:
                    raise ElaborationError("every coproduct term needs a tensor separator", *node.span) from None
                raise ElaborationError(str(exc), *node.span) from None
        raise ElaborationError(f"cannot evaluate {node!r}")


def _free_evaluator(generators, order):
    def symbol(name):
        return FreeElement.generator(generators, name, order)

    return Evaluator(symbol, lambda: FreeElement.scalar(generators, 1, order))


def _working_order(order, node):
    extra = tau_divisions(node)
    if extra > MAX_TAU_DIVISIONS:
        raise ElaborationError(f"more than {MAX_TAU_DIVISIONS} divisions by tau", *node.span)
    return order + extra


def _finish(value, order, span):
    if value.order < order:
        raise ElaborationError(f"expression is only exact to tau^{value.order}", *span)
    return value.truncate(order)


@dataclass
class Elaborated:
    algebra: AlgebraSpec
    hopf: HopfSpec | None = None
    contraction: ContractionMap | None = None
    realization: dict | None = None
    warnings: list = field(default_factory=list)
    name: str = "unnamed"


def elaborate(doc: SpecDocument, order: int = DEFAULT_ORDER) -> Elaborated:
    """Turn a parsed document into normal-ordered tables at truncation ``order``."""
    gens = tuple(doc.generators)
    warnings = []
    brackets = {}
    for item in doc.brackets:
        work = _working_order(order, item.expr)
        value = _free_evaluator(gens, work)(item.expr)
        brackets[(item.left, item.right)] = _finish(value, order, item.span)
    given = {frozenset(p) for p in brackets}
    if len(given) != len(brackets):
        raise ElaborationError("a bracket pair is specified twice")
    for a, b in itertools.combinations(gens, 2):
        if frozenset((a, b)) not in given:
            msg = f"bracket [{b},{a}] not given; assuming 0"
            warnings.append(msg)
            log.debug(msg)
    try:
        spec = AlgebraSpec.from_brackets(doc.name, gens, brackets, order)
    except SpecDefinitionError as exc:
        raise ElaborationError(str(exc)) from None

    def tensor_eval(work):
        free = _free_evaluator(gens, work)

        def pair(left, right):
            return TensorElement.pure(spec.normal_form(left), spec.normal_form(right))

        return Evaluator(free.symbol, free.one, tensor=pair)

    hopf = None
    if doc.coproducts:
        missing = [g for g in gens if g not in {c.generator for c in doc.coproducts}]
        if missing:
            raise ElaborationError(f"coproducts missing for {', '.join(missing)}")
        cop = {}
        for item in doc.coproducts:
            value = tensor_eval(_working_order(order, item.expr))(item.expr)
            if not isinstance(value, TensorElement):
                raise ElaborationError("coproduct must be a tensor expression", *item.span)
            cop[item.generator] = _finish(value, order, item.span)
        rs = []
        for node in doc.rmatrix or []:
            value = tensor_eval(_working_order(order, node))(node)
            if not isinstance(value, TensorElement):
                raise ElaborationError("R factors must be exponentials of tensors", *node.span)
            rs.append(_finish(value, order, node.span))
        hopf = HopfSpec(spec, cop, r_exponents=tuple(rs))
    elif doc.rmatrix:
        raise ElaborationError("an rmatrix section needs a coproducts section")

    cmap = None
    if doc.contraction is not None:
        scale = {g: doc.contraction["scale"].get(g, 0) for g in gens}
        tau = doc.contraction["tau"]
        cmap = ContractionMap(scale, 1 if tau is None else tau, doc.name)

    realization = None
    if doc.realization:
        realization = {}
        for item in doc.realization:
            work = _working_order(order, item.expr)
            value = operator_evaluator(work)(item.expr)
            realization[item.generator] = _finish(value, order, item.span)
        missing = [g for g in gens if g not in realization]
        if missing:
            raise ElaborationError(f"realization missing for {', '.join(missing)}")

    return Elaborated(spec, hopf, cmap, realization, warnings, doc.name)


def operator_evaluator(order):
    def symbol(name):
        key = {"x": (1, 0, 0, 0), "t": (0, 1, 0, 0), "dx": (0, 0, 1, 0), "dt": (0, 0, 0, 1)}[name]
        return PhaseSpaceOperator({(key, 0): Fraction(1)}, order)

    return Evaluator(symbol, lambda: PhaseSpaceOperator({((0, 0, 0, 0), 0): Fraction(1)}, order))


FUNCTION_CONTEXT = Context(frozenset({"x", "t", "tau"}), frozenset(), coordinates=True, label="function")


def parse_function(text: str, order: int = DEFAULT_ORDER) -> PolynomialFunction:
    """Polynomial literal in ``x`` and ``t`` such as ``"x^2 + t^2"``."""
    node = parse_expression(text, FUNCTION_CONTEXT)
    work = _working_order(order, node)

    def symbol(name):
        key = {"x": (1, 0), "t": (0, 1)}[name]
        return PolynomialFunction({(key, 0): Fraction(1)}, work)

    value = Evaluator(symbol, lambda: PolynomialFunction({((0, 0), 0): Fraction(1)}, work))(node)
    return _finish(value, order, node.span)


def load(text: str, order: int = DEFAULT_ORDER) -> Elaborated:
    return elaborate(parse(text), order)


# -- pretty printing ---------------------------------------------------------------
def format_document(elab: Elaborated) -> str:
    """Canonical text of an elaborated spec; re-parses to the same tables."""
    spec = elab.algebra
    lines = [f"name: {elab.name}", f"generators: {' '.join(spec.generators)}", "brackets:"]
    for i, j in itertools.combinations(range(spec.n), 2):
        a, b = spec.generators[j], spec.generators[i]
        lines.append(f"  [{a},{b}] = {spec.table_entry(a, b).to_dsl()}")
    if elab.hopf is not None:
        lines.append("coproducts:")
        for g in spec.generators:
            lines.append(f"  Delta({g}) = {elab.hopf.coproducts[g].to_dsl()}")
        lines.append("rmatrix:")
        if elab.hopf.r_exponents:
            lines.append("  R = " + " * ".join(f"exp({x.to_dsl()})" for x in elab.hopf.r_exponents))
        else:
            lines.append("  R = 1")
    if elab.realization:
        lines.append("realization:")
        for g in spec.generators:
            lines.append(f"  {g} = {elab.realization[g].to_dsl()}")
    if elab.contraction is not None:
        lines.append("contraction:")
        for g in spec.generators:
            lines.append(f"  {g}: {elab.contraction.generator_scale.get(g, 0)}")
        lines.append(f"  tau: {elab.contraction.tau_exponent}")
    return "\n".join(lines) + "\n"


def canonical(elab: Elaborated) -> tuple:
    """Comparable summary of everything an elaborated document defines."""
    hopf = elab.hopf.canonical() if elab.hopf else None
    real = None
    if elab.realization:
        real = tuple((g, tuple(sorted(elab.realization[g].data.items()))) for g in elab.algebra.generators)
    cmap = None
    if elab.contraction is not None:
        cmap = (tuple(sorted(elab.contraction.generator_scale.items())), elab.contraction.tau_exponent)
    return (elab.algebra.canonical(), hopf, real, cmap)
