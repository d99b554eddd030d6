import itertools

import pytest

from qalg import builtins
from qalg.contraction import (
    CLASSICAL_LIMIT_MAP,
    IDENTITY_MAP,
    POINCARE_MAP,
    ContractionMap,
    _contract_tensor,
    check_cybe,
    contract_coproduct,
    contract_full,
    contract_relation,
    schouten,
    tensor_components,
    wedge,
)
from qalg.hopf import HopfSpec, check_intertwining, check_qybe, classical_r, hopf_suite, tensor
from qalg.ncalgebra import check_jacobi, commutator, subalgebra_closure
from qalg.report import DIVERGED

N = 6


@pytest.fixture(scope="module")
def source():
    return builtins.uso22(N)


@pytest.fixture(scope="module")
def target():
    return builtins.uiso21(N)


def test_relation_examples(source, target):
    tb = target.base
    assert contract_relation(POINCARE_MAP, source.base, ("K", "H"), tb).value.is_zero()
    assert contract_relation(POINCARE_MAP, source.base, ("K", "P"), tb).value == tb.table_entry("K", "P")
    assert contract_relation(POINCARE_MAP, source.base, ("D", "C1"), tb).value == -tb.gen("C1")


def test_coproduct_examples(source, target):
    tb = target.base
    one, K, H = tb.one(), tb.gen("K"), tb.gen("H")
    assert contract_coproduct(POINCARE_MAP, source, "K", tb).value == tensor(one, K) + tensor(K, one)
    assert contract_coproduct(POINCARE_MAP, source, "H", tb).value == tensor(one, H) + tensor(H, one)
    assert contract_coproduct(POINCARE_MAP, source, "C2", tb).value == target.coproducts["C2"]


def test_full_poincare_map(source, target):
    report = contract_full(POINCARE_MAP, source, target)
    assert len(report.items) == 22
    assert report.ok, str(report)


def test_no_rescale_diverges(source, target):
    report = contract_full(POINCARE_MAP.without_param_rescale(), source, target)
    kh = report.item("[K,H]")
    assert kh.status == DIVERGED
    assert "eps^-1" in kh.residual
    assert not report.ok


def test_classical_limit_and_identity(source):
    assert contract_full(CLASSICAL_LIMIT_MAP, source, builtins.so22(N)).ok
    assert contract_full(IDENTITY_MAP, source, source).ok


def test_commutes_with_commutator(source, target):
    tb = target.base
    for a, b in itertools.permutations(tb.generators, 2):
        got = contract_relation(POINCARE_MAP, source.base, (a, b), tb).value
        assert got == commutator(tb, tb.gen(a), tb.gen(b)), (a, b)


def test_contracted_hopf_data_passes_suite(source, target):
    tb = target.base
    cop = {g: contract_coproduct(POINCARE_MAP, source, g, tb).value for g in tb.generators}
    rs = tuple(_contract_tensor(POINCARE_MAP, x, 0, tb).value for x in source.r_exponents)
    hs = HopfSpec(tb, cop, r_exponents=rs)
    assert check_jacobi(tb).ok
    assert hopf_suite(hs).ok
    assert check_intertwining(hs).ok
    small = builtins.uiso21(4)
    cop4 = {g: contract_coproduct(POINCARE_MAP, builtins.uso22(4), g, small.base).value for g in small.base.generators}
    assert check_qybe(HopfSpec(small.base, cop4, r_exponents=small.r_exponents)).ok
    assert subalgebra_closure(tb, ["D", "H", "C1"]).ok


def test_swapped_variant_is_reported_only():
    hs = builtins.uso22_swapped(4)
    report = contract_full(POINCARE_MAP, hs)
    assert report.title.endswith("[poincare]")
    assert all(item.detail for item in report.items if item.ok)


def test_map_helpers():
    m = ContractionMap({"H": 2}, 1)
    assert m.exponent(("D", "H"), (3, 1)) == 2
    assert m.without_param_rescale().tau_exponent == 0


def test_cybe_examples(frozen):
    so22 = builtins.so22(2).base
    cases = {"-D^H": wedge(so22, "D", "H", -1), "H^P": wedge(so22, "H", "P"), "K^C1": wedge(so22, "K", "C1")}
    for label, r in cases.items():
        report = check_cybe(so22, r, label)
        assert report.ok == (frozen["cybe_norms"][label] == 0), label
    assert schouten(so22, wedge(so22, "K", "C1"))


def test_cybe_of_the_r_matrix():
    hs = builtins.uso22(3)
    r = tensor_components(classical_r(hs.base, hs.r_exponents))
    so22 = builtins.so22(2).base
    assert r == wedge(so22, "H", "D")
    assert check_cybe(so22, r).ok
