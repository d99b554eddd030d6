from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qalg import builtins, realization
from qalg.ncalgebra import check_jacobi, normal_order
from qalg.specdsl import (
    BinOp,
    Call,
    ElaborationError,
    Num,
    SpecError,
    SpecSyntaxError,
    Sym,
    Tensor,
    canonical,
    format_document,
    load,
    parse,
    parse_bytes,
    parse_function,
)

HEADER = "generators: D H P K C1 C2\nbrackets:\n"
FILES = ("so22", "uso22", "uiso21", "usl2")


def test_bracket_ast():
    doc = parse(HEADER + "  [K,P] = (exp(tau*H) - 1)/tau\n")
    item = doc.brackets[0]
    assert (item.left, item.right) == ("K", "P")
    expr = item.expr
    assert isinstance(expr, BinOp) and expr.op == "/" and isinstance(expr.right, Sym) and expr.right.name == "tau"
    inner = expr.left
    assert isinstance(inner, BinOp) and inner.op == "-"
    assert isinstance(inner.left, Call) and inner.left.fn == "exp"
    assert isinstance(inner.right, Num) and inner.right.value == 1
    assert expr.span == (3, 27)


def test_coproduct_ast():
    doc = parse(HEADER + "coproducts:\n  Delta(P) = 1 (x) P + P (x) exp(tau*H)\n")
    expr = doc.coproducts[0].expr
    assert isinstance(expr, BinOp) and expr.op == "+"
    assert isinstance(expr.left, Tensor) and isinstance(expr.right, Tensor)
    assert isinstance(expr.right.right, Call)


def test_precedence():
    e = parse(HEADER + "  [K,P] = -H*P + 2*D^2\n").brackets[0].expr
    assert e.op == "+" and e.left.op == "*"


@pytest.mark.parametrize(
    "text, message, where",
    [
        (HEADER + "  [K,P] = \n", "missing expression", (3, 11)),
        ("generators: D H D\n", "duplicate generator", (1, 17)),
        (HEADER + "  [K,P] = Q\n", "unknown symbol", (3, 11)),
        (HEADER + "  [K,P] = H (x) P\n", "tensor separator outside coproduct context", (3, 13)),
        (HEADER + "  [K,P] = x*H\n", "only allowed in realization", (3, 11)),
        (HEADER + "  [K,P] = 1/H\n", "division only by rational literals or by tau", (3, 13)),
        (HEADER + "  [K,P] = (H\n", "unexpected", (3, 13)),
        (HEADER + "  [K,P] = H $ P\n", "unexpected character", (3, 13)),
        (HEADER + "  [K,Q] = H\n", "unknown generator", (3, 6)),
        ("brackets:\n  [K,P] = H\n", "generators must be declared", (2, 1)),
        (HEADER + "coproducts:\n  Delta(H) = 1 (x) (H (x) H)\n", "tensor separator", (4, 23)),
    ],
)
def test_syntax_errors(text, message, where):
    with pytest.raises(SpecSyntaxError, match=message) as exc:
        parse(text)
    assert (exc.value.line, exc.value.col) == where


def test_end_of_line_error_names_expected():
    with pytest.raises(SpecSyntaxError) as exc:
        parse("generators: A B\nbrackets:\n  [A,B] = \n")
    assert exc.value.expected == ["expression"]
    assert "3:11" in str(exc.value)
    with pytest.raises(SpecSyntaxError) as exc:
        parse(HEADER + "  [K,P] = (H\n")
    assert exc.value.expected == [")"]


def test_not_divisible_by_tau():
    with pytest.raises(ElaborationError, match="not divisible by tau") as exc:
        load(HEADER + "  [D,H] = (1 + exp(-tau*H))/tau\n", 3)
    assert (exc.value.line, exc.value.col) == (3, 28)


def test_exp_precondition_has_span():
    with pytest.raises(ElaborationError, match="exp") as exc:
        load(HEADER + "  [D,H] = exp(1 + H)\n", 3)
    assert exc.value.line == 3


def test_missing_pair_warns():
    text = builtins.builtin_file_text("uso22").replace("  [K,D] = 0\n", "")
    elab = load(text, 3)
    assert elab.warnings == ["bracket [K,D] not given; assuming 0"]
    assert elab.algebra.canonical() == builtins.uso22(3).base.canonical()


def test_incomplete_coproducts():
    with pytest.raises(ElaborationError, match="coproducts missing"):
        load(HEADER + "coproducts:\n  Delta(H) = 1 (x) H + H (x) 1\n", 2)
    with pytest.raises(ElaborationError, match="tensor"):
        load("generators: H\ncoproducts:\n  Delta(H) = H\n", 2)


@pytest.mark.parametrize("name", FILES)
@pytest.mark.parametrize("order", [2, 6])
def test_shipped_files_match_builtins(name, order):
    elab = load(builtins.builtin_file_text(name), order)
    hs = builtins.builtin(name, order)
    assert elab.warnings == []
    assert elab.algebra.canonical() == hs.base.canonical()
    assert elab.hopf.canonical() == hs.canonical()
    if name in ("so22", "uso22"):
        kind = "classical" if name == "so22" else "deformed"
        table = realization.realization_table(kind, order)
        assert {g: op.data for g, op in elab.realization.items()} == {g: op.data for g, op in table.items()}


def test_uso22_file_passes_jacobi():
    assert check_jacobi(load(builtins.builtin_file_text("uso22"), 6).algebra).ok


@pytest.mark.parametrize("name", FILES)
def test_round_trip(name):
    elab = load(builtins.builtin_file_text(name), 6)
    text = format_document(elab)
    again = load(text, 6)
    assert canonical(again) == canonical(elab)
    assert format_document(again) == text


def test_contraction_section():
    elab = load(builtins.builtin_file_text("uso22"), 2)
    assert elab.contraction.generator_scale == {"D": 0, "H": 1, "P": 0, "K": 1, "C1": 1, "C2": 0}
    assert elab.contraction.tau_exponent == 1


def test_parse_function():
    f = parse_function("x^2 + t^2")
    assert f.data == {((2, 0), 0): Fraction(1), ((0, 2), 0): Fraction(1)}
    assert parse_function("(x + 1/2*tau)*t").data == {((1, 1), 0): 1, ((0, 1), 1): Fraction(1, 2)}
    with pytest.raises(SpecSyntaxError):
        parse_function("H")


# -- properties ---------------------------------------------------------------------
@given(st.binary(max_size=400))
def test_fuzz_bytes_never_crash(data):
    try:
        parse_bytes(data)
    except SpecError as exc:
        assert exc.line is not None


TOKENS = ["(", ")", "[", "]", "=", ":", "+", "-", "*", "/", "^", " ", "\n", "#", ",", "tau", "exp", "H", "D", "K",
          "x", "(x)", "Delta", "generators:", "brackets:", "coproducts:", "contraction:", "1", "2", "0"]


@given(st.lists(st.sampled_from(TOKENS), max_size=80))
def test_fuzz_tokens_never_crash(tokens):
    text = "generators: D H K\nbrackets:\n  [K,H] = " + "".join(tokens)
    try:
        load(text, 2)
    except SpecError:
        pass


@given(st.text(max_size=200))
def test_fuzz_text_never_crash(text):
    try:
        load(text, 1)
    except SpecError:
        pass


@given(st.data())
def test_element_text_round_trip(data):
    spec = builtins.uso22(3).base
    total = spec.zero()
    for _ in range(data.draw(st.integers(1, 4))):
        w = data.draw(st.lists(st.integers(0, 5), max_size=3))
        c = data.draw(st.fractions(min_value=-3, max_value=3, max_denominator=4))
        total = total + normal_order(spec, w) * c * spec.tau() ** data.draw(st.integers(0, 2))
    text = builtins.builtin_file_text("uso22").replace("  [K,D] = 0", f"  [K,D] = 0\n  # {total.to_dsl()}")
    from qalg.specdsl import Context, Evaluator, parse_expression

    node = parse_expression(total.to_dsl(), Context(frozenset(spec.generators) | {"tau"}))
    again = Evaluator(spec.gen, spec.one)(node)
    assert again == total
    assert load(text, 3).algebra.canonical() == spec.canonical()
