from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qalg import builtins
from qalg.ncalgebra import (
    AlgebraSpec,
    RewriteLimitError,
    check_jacobi,
    commutator,
    exp_element,
    multiply,
    normal_order,
    relabel_generators,
    specialize_tau_zero,
    subalgebra_closure,
)

from conftest import algebra_terms

SMALL = 3


def uso22(order=SMALL):
    return builtins.uso22(order).base


def words(n_gens=6, max_len=5):
    return st.lists(st.integers(0, n_gens - 1), min_size=0, max_size=max_len)


@st.composite
def elements(draw, spec, max_terms=3, max_len=3):
    total = spec.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        w = draw(st.lists(st.integers(0, spec.n - 1), max_size=max_len))
        c = draw(st.integers(-3, 3))
        k = draw(st.integers(0, 1))
        total = total + normal_order(spec, w) * c * spec.tau() ** k
    return total


# -- examples ----------------------------------------------------------------
def test_unit_law():
    spec = uso22()
    for name in spec.generators:
        x = spec.gen(name)
        assert multiply(spec, spec.one(), x) == x
        assert multiply(spec, x, spec.one()) == x


def test_pbw_products_match_oracle(frozen):
    spec = uso22(6)
    g = spec.gens()
    D, H, P, K = g["D"], g["H"], g["P"], g["K"]
    cases = {
        "H^1*D": H * D, "H^2*D": H**2 * D, "H^3*D": H**3 * D,
        "K*P^1": K * P, "K*P^2": K * P**2, "K*P^3": K * P**3,
        "K*H^1": K * H, "K*H^2": K * H**2,
    }
    for key, value in cases.items():
        assert value.data == algebra_terms(frozen["pbw_products"][key]), key


def test_hd_at_order_two():
    spec = uso22(2)
    g = spec.gens()
    D, H, tau = g["D"], g["H"], spec.tau()
    got = multiply(spec, H, D)
    short = D * H - H + tau * H * H / 2
    # exact to tau^2: the next Taylor term of (1 - exp(-tau H))/tau survives
    assert got == short - tau**2 * H**3 / 6
    assert got.truncate(1) == short.truncate(1)


def test_kp_at_order_two():
    spec = uso22(2)
    got = normal_order(spec, ["K", "P"])
    g = spec.gens()
    tau, H = spec.tau(), g["H"]
    short = g["P"] * g["K"] + H + tau * H * H / 2
    assert got == short + tau**2 * H**3 / 6
    assert got.truncate(1) == short.truncate(1)


def test_other_examples():
    spec = uso22(2)
    g = spec.gens()
    assert normal_order(spec, ["P", "H"]) == g["H"] * g["P"]
    assert normal_order(spec, ["D", "H", "P"]).data == {((1, 1, 1, 0, 0, 0), 0): Fraction(1)}
    tau = spec.tau()
    assert commutator(spec, g["K"], g["H"]) == g["P"] - tau * g["H"] * g["P"] + tau**2 * g["H"] ** 2 * g["P"] / 2
    assert commutator(spec, g["K"], g["K"]).is_zero()
    assert commutator(builtins.uiso21(2).base, builtins.uiso21(2).base.gen("K"), builtins.uiso21(2).base.gen("H")).is_zero()
    so22 = builtins.so22(2).base
    assert normal_order(so22, ["C2", "C1"]) == normal_order(so22, ["C1", "C2"])


def test_exp_element():
    spec = uso22(2)
    H, tau = spec.gen("H"), spec.tau()
    assert exp_element(spec, -tau * H) == 1 - tau * H + tau**2 * H * H / 2
    assert exp_element(spec, spec.zero()) == spec.one()
    assert exp_element(spec, tau * H) * exp_element(spec, -tau * H) == spec.one()
    with pytest.raises(ValueError):
        exp_element(spec, H)


# -- jacobi and tables --------------------------------------------------------------
@pytest.mark.parametrize("name", builtins.BUILTIN_NAMES)
def test_jacobi_builtins(name):
    report = check_jacobi(builtins.builtin(name, 4).base)
    assert report.ok, str(report)


def test_jacobi_broken_spec():
    gens = ("D", "H", "P")
    free = AlgebraSpec("free", gens, 2).free()
    spec = AlgebraSpec.from_brackets("broken", gens, {("D", "H"): free["H"], ("D", "P"): free["P"], ("H", "P"): free["D"]}, 2)
    report = check_jacobi(spec)
    assert not report.ok
    # [[D,H],P] + [[P,D],H] + [[H,P],D] = D + D + 0
    assert report.item("(D,H,P)").residual == "2 D"


def test_tau_zero_table_is_classical():
    for order in (2, 6):
        assert specialize_tau_zero(uso22(order)).canonical()[1:] == builtins.so22(order).base.canonical()[1:]


def test_table_vs_vector_field_structure_constants(frozen):
    spec = builtins.so22(2).base
    for pair, row in frozen["structure_constants"].items():
        a, b = pair.split(",")
        expected = spec.zero()
        for g, c in row.items():
            expected = expected + spec.gen(g) * Fraction(c)
        assert spec.table_entry(a, b) == expected, pair


def test_relabel():
    spec = uso22()
    assert relabel_generators(spec, {g: g for g in spec.generators}).canonical()[1:] == spec.canonical()[1:]
    swapped = relabel_generators(spec, builtins.SWAP, "swapped")
    assert check_jacobi(swapped).ok
    # names move, PBW positions stay: [K,H] in the variant is [K,P] of the source
    assert swapped.generators == ("D", "P", "H", "K", "C2", "C1")
    assert swapped.table_entry("K", "H").data == spec.table_entry("K", "P").data
    with pytest.raises(KeyError):
        relabel_generators(spec, {"Q": "H"})
    with pytest.raises(ValueError, match="bijection"):
        relabel_generators(spec, {"H": "P"})


def test_subalgebra_closure():
    assert subalgebra_closure(uso22(), ["D", "H", "C1"]).ok
    so22 = builtins.so22(2).base
    assert subalgebra_closure(so22, ["H", "P", "K"]).ok
    report = subalgebra_closure(so22, ["H", "C1"])
    assert not report.ok and report.item("[C1,H]").residual == "2 D"


def test_rewrite_cap(monkeypatch):
    import qalg.ncalgebra as nc

    monkeypatch.setattr(nc, "MAX_REWRITE_STEPS", 3)
    with pytest.raises(RewriteLimitError):
        normal_order(uso22(), ["C2", "C1", "K", "P", "H", "D"], strategy="leftmost")


# -- properties ---------------------------------------------------------------------
@pytest.mark.parametrize("name", builtins.BUILTIN_NAMES)
@given(data=st.data())
def test_confluence(name, data):
    spec = builtins.builtin(name, SMALL).base
    w = data.draw(words(spec.n))
    left = normal_order(spec, w, strategy="leftmost")
    right = normal_order(spec, w, strategy="rightmost")
    engine = normal_order(spec, w)
    assert left == right == engine


@given(data=st.data())
def test_associativity(data):
    spec = uso22()
    a, b, c = (data.draw(elements(spec)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@given(data=st.data())
def test_commutator_antisymmetric_and_bilinear(data):
    spec = uso22()
    a, b, c = (data.draw(elements(spec)) for _ in range(3))
    assert commutator(spec, a, b) == -commutator(spec, b, a)
    assert commutator(spec, a + c, b) == commutator(spec, a, b) + commutator(spec, c, b)
    assert commutator(spec, a * 3, b) == commutator(spec, a, b) * 3
