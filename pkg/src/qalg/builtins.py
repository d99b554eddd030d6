"""The shipped algebras, written out directly in Python.

Generators are ordered ``D < H < P < K < C1 < C2`` everywhere.

* ``so22``   classical conformal algebra of (1+1) Minkowski space
* ``uso22``  its non-standard quantum deformation with ``sl(2,R) = {D,H,C1}``
             kept as a Hopf subalgebra
* ``uiso21`` the contracted quantum (2+1) Poincare algebra
* ``usl2``   the ``{D,H,C1}`` Hopf subalgebra of ``uso22``
* ``uso22-swapped``  ``uso22`` relabelled by ``H <-> P``, ``C1 <-> C2``

The same content ships as ``.qalg`` text files under ``qalg/data``.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .hopf import HopfSpec, relabel_hopf, tensor
from .ncalgebra import AlgebraSpec, relabel_generators
from .scalars import DEFAULT_ORDER

GENERATORS = ("D", "H", "P", "K", "C1", "C2")
SL2 = ("D", "H", "C1")
SWAP = {"H": "P", "P": "H", "C1": "C2", "C2": "C1"}

BUILTIN_NAMES = ("so22", "uso22", "uiso21", "usl2", "uso22-swapped")


def so22_brackets(order: int) -> dict:
    g = AlgebraSpec("free", GENERATORS, order).free()
    D, H, P, K, C1, C2 = (g[n] for n in GENERATORS)
    return {
        ("K", "H"): P, ("K", "P"): H, ("H", "P"): 0,
        ("D", "H"): H, ("D", "C1"): -C1, ("H", "C1"): -2 * D,
        ("D", "P"): P, ("D", "C2"): -C2, ("P", "C2"): 2 * D,
        ("K", "C1"): C2, ("K", "C2"): C1, ("C1", "C2"): 0,
        ("H", "C2"): 2 * K, ("P", "C1"): -2 * K, ("K", "D"): 0,
    }


def uso22_brackets(order: int) -> dict:
    # one extra order of working precision is spent by each division by tau
    w = order + 1
    g = AlgebraSpec("free", GENERATORS, w).free()
    D, H, P, K, C1, C2 = (g[n] for n in GENERATORS)
    tau = D.one().mul_tau(1)
    e_m = (-(tau * H)).exp()
    e_p = (tau * H).exp()
    return {
        ("K", "H"): e_m * P,
        ("K", "P"): (e_p - 1).div_tau(),
        ("H", "P"): 0,
        ("D", "H"): (1 - e_m).div_tau(),
        ("D", "C1"): -C1 + tau * D * D,
        ("H", "C1"): -2 * D,
        ("D", "P"): P,
        ("D", "C2"): -C2,
        ("P", "C2"): 2 * D,
        ("K", "C1"): C2,
        ("K", "C2"): C1 - tau * D * D,
        ("C1", "C2"): -tau * (D * C2 + C2 * D),
        ("H", "C2"): e_m * K + K * e_m,
        ("P", "C1"): -2 * K - tau * (D * P + P * D),
        ("K", "D"): 0,
    }


def uiso21_brackets(order: int) -> dict:
    w = order + 1
    g = AlgebraSpec("free", GENERATORS, w).free()
    D, H, P, K, C1, C2 = (g[n] for n in GENERATORS)
    tau = D.one().mul_tau(1)
    e_m = (-(tau * H)).exp()
    e_p = (tau * H).exp()
    return {
        ("K", "H"): 0,
        ("K", "P"): (e_p - 1).div_tau(),
        ("H", "P"): 0,
        ("D", "H"): (1 - e_m).div_tau(),
        ("D", "C1"): -C1,
        ("H", "C1"): 0,
        ("D", "P"): P,
        ("D", "C2"): -C2,
        ("P", "C2"): 2 * D,
        ("K", "C1"): 0,
        ("K", "C2"): C1,
        ("C1", "C2"): 0,
        ("H", "C2"): 2 * e_m * K,
        ("P", "C1"): -2 * K,
        ("K", "D"): 0,
    }


def _restrict(brackets: dict, subset) -> dict:
    return {pair: v for pair, v in brackets.items() if set(pair) <= set(subset)}


def _r_exponents(spec: AlgebraSpec) -> tuple:
    H, D = spec.gen("H"), spec.gen("D")
    tau = spec.tau()
    return (tensor(tau * H, D), tensor(-tau * D, H))


def _primitive(spec: AlgebraSpec) -> dict:
    one = spec.one()
    return {n: tensor(one, spec.gen(n)) + tensor(spec.gen(n), one) for n in spec.generators}


def uso22_coproducts(spec: AlgebraSpec, contracted: bool = False) -> dict:
    g = spec.gens()
    one, tau = spec.one(), spec.tau()
    D, H, P, K, C1, C2 = (g[n] for n in GENERATORS)
    e_m = (-(tau * H)).exp()
    e_p = (tau * H).exp()
    e_2m = (-2 * (tau * H)).exp()
    cop = {
        "H": tensor(one, H) + tensor(H, one),
        "P": tensor(one, P) + tensor(P, e_p),
        "D": tensor(one, D) + tensor(D, e_m),
        "C1": tensor(one, C1) + tensor(C1, e_m),
        "K": tensor(one, K) + tensor(K, one) - tensor(tau * D, e_m * P),
        "C2": tensor(one, C2) + tensor(C2, e_m) + tensor(2 * tau * D, e_m * K)
        - tensor(tau * tau * D * (D + 1), e_2m * P),
    }
    if contracted:
        cop["K"] = tensor(one, K) + tensor(K, one)
        cop["C2"] = tensor(one, C2) + tensor(C2, e_m) + tensor(2 * tau * D, e_m * K)
    return cop


@lru_cache(maxsize=None)
def so22(order: int = DEFAULT_ORDER) -> HopfSpec:
    """Classical so(2,2), with primitive coproducts and trivial R."""
    spec = AlgebraSpec.from_brackets("so22", GENERATORS, so22_brackets(order), order)
    return HopfSpec(spec, _primitive(spec))


@lru_cache(maxsize=None)
def uso22(order: int = DEFAULT_ORDER) -> HopfSpec:
    spec = AlgebraSpec.from_brackets("uso22", GENERATORS, uso22_brackets(order), order)
    return HopfSpec(spec, uso22_coproducts(spec), r_exponents=_r_exponents(spec))


@lru_cache(maxsize=None)
def uiso21(order: int = DEFAULT_ORDER) -> HopfSpec:
    spec = AlgebraSpec.from_brackets("uiso21", GENERATORS, uiso21_brackets(order), order)
    return HopfSpec(spec, uso22_coproducts(spec, contracted=True), r_exponents=_r_exponents(spec))


@lru_cache(maxsize=None)
def usl2(order: int = DEFAULT_ORDER) -> HopfSpec:
    brackets = _restrict(uso22_brackets(order), SL2)
    free = AlgebraSpec("free", SL2, order + 1).free()
    # re-express the restricted words over the three-letter alphabet
    remap = {GENERATORS.index(n): SL2.index(n) for n in SL2}
    fixed = {}
    for pair, v in brackets.items():
        if isinstance(v, int):
            fixed[pair] = v
            continue
        data = {(tuple(remap[i] for i in w), k): c for (w, k), c in v.data.items()}
        fixed[pair] = type(free["D"])(SL2, data, v.order)
    spec = AlgebraSpec.from_brackets("usl2", SL2, fixed, order)
    g = spec.gens()
    one, tau = spec.one(), spec.tau()
    e_m = (-(tau * g["H"])).exp()
    cop = {
        "H": tensor(one, g["H"]) + tensor(g["H"], one),
        "D": tensor(one, g["D"]) + tensor(g["D"], e_m),
        "C1": tensor(one, g["C1"]) + tensor(g["C1"], e_m),
    }
    return HopfSpec(spec, cop, r_exponents=_r_exponents(spec))


@lru_cache(maxsize=None)
def uso22_swapped(order: int = DEFAULT_ORDER) -> HopfSpec:
    """``uso22`` with ``H <-> P`` and ``C1 <-> C2``: ``P`` becomes primitive."""
    src = uso22(order)
    base = relabel_generators(src.base, SWAP, name="uso22-swapped")
    return relabel_hopf(src, base)


_FACTORIES = {
    "so22": so22,
    "uso22": uso22,
    "uiso21": uiso21,
    "usl2": usl2,
    "uso22-swapped": uso22_swapped,
}


def builtin(name: str, order: int = DEFAULT_ORDER) -> HopfSpec:
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise KeyError(f"unknown built-in algebra {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    return factory(order)


def builtin_file_text(name: str) -> str:
    """Text of the shipped ``.qalg`` file for a built-in (not the swapped variant)."""
    return resources.files("qalg").joinpath("data", f"{name}.qalg").read_text(encoding="utf-8")


# The subalgebra statements attached to each built-in: (subset, kind) with kind
# "closed", "not-closed", "hopf", or "closed-not-hopf".
SUBALGEBRA_FACTS = {
    "so22": [
        (("H", "P", "K"), "closed"),
        (("D", "H", "C1"), "closed"),
        (("D", "P", "C2"), "closed"),
        (("H", "C1"), "not-closed"),
    ],
    "uso22": [
        (("D", "H", "C1"), "hopf"),
        (("H", "P", "K"), "closed-not-hopf"),
    ],
    "uiso21": [
        (("D", "H", "C1"), "hopf"),
    ],
    "usl2": [
        (("D", "H", "C1"), "hopf"),
    ],
    "uso22-swapped": [
        (("D", "P", "C2"), "hopf"),
    ],
}
