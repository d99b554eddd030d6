"""Tensor powers, coproducts, antipodes, and R-matrices over an AlgebraSpec."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .linear import TauLinear
from .ncalgebra import AlgebraElement, AlgebraSpec, commutator, format_monomial
from .report import Report
from .scalars import accumulate, join_term, join_terms


class HopfError(ValueError):
    pass


def _tau_factor(k):
    return [] if k == 0 else ["tau" if k == 1 else f"tau^{k}"]


class TensorElement(TauLinear):
    """Element of the 2- or 3-fold tensor power of an algebra.

    Keys are tuples of PBW monomials, one per slot.  Multiplication is
    slotwise (all generators are even, so there are no signs).
    """

    __slots__ = ("spec", "arity")

    def __init__(self, spec: AlgebraSpec, arity: int, data, order=None):
        if arity not in (2, 3):
            raise ValueError("tensor arity must be 2 or 3")
        super().__init__(data, spec.order if order is None else order)
        self.spec = spec
        self.arity = arity

    def _new(self, data, order):
        return TensorElement(self.spec, self.arity, data, order)

    def _check_compatible(self, other):
        if not isinstance(other, TensorElement):
            raise TypeError(f"cannot combine TensorElement with {type(other).__name__}")
        if other.arity != self.arity:
            raise ValueError(f"tensor arity mismatch: {self.arity} vs {other.arity}")
        if other.spec.generators != self.spec.generators:
            raise TypeError("tensors over different algebras")

    def _unit_key(self):
        return ((0,) * self.spec.n,) * self.arity

    def _mul_data(self, other, budget):
        spec = self.spec
        acc: dict = {}
        for (ms1, k1), c1 in self.data.items():
            for (ms2, k2), c2 in other.data.items():
                k0 = k1 + k2
                if k0 > budget:
                    continue
                partial = {((), k0): c1 * c2}
                for slot in range(self.arity):
                    nxt: dict = {}
                    a, b = ms1[slot], ms2[slot]
                    for (prefix, k), c in partial.items():
                        for (m, k3), c3 in spec._mono_mul(a, b, budget - k).items():
                            accumulate(nxt, (prefix + (m,), k + k3), c * c3)
                    partial = nxt
                for key, c in partial.items():
                    accumulate(acc, key, c)
        return acc

    @classmethod
    def pure(cls, *factors: AlgebraElement) -> TensorElement:
        """Outer product ``a (x) b [(x) c]``."""
        spec = factors[0].spec
        order = min(f.order for f in factors)
        data: dict = {((), 0): Fraction(1)}
        for f in factors:
            nxt: dict = {}
            for (ms, k), c in data.items():
                for (m, k2), c2 in f.data.items():
                    if k + k2 <= order:
                        accumulate(nxt, (ms + (m,), k + k2), c * c2)
            data = nxt
        return cls(spec, len(factors), data, order)

    def flip(self) -> TensorElement:
        if self.arity != 2:
            raise ValueError("flip is defined on 2-tensors")
        return self._new({((b, a), k): c for ((a, b), k), c in self.data.items()}, self.order)

    def embed(self, slots: tuple[int, int]) -> TensorElement:
        """Place a 2-tensor into two slots of a 3-tensor (e.g. R_13)."""
        unit = (0,) * self.spec.n
        data = {}
        for ((a, b), k), c in self.data.items():
            key = [unit, unit, unit]
            key[slots[0]], key[slots[1]] = a, b
            data[(tuple(key), k)] = c
        return TensorElement(self.spec, 3, data, self.order)

    def slot_support(self, slot: int) -> set[str]:
        names = set()
        for ms, _ in self.data:
            names.update(n for n, e in zip(self.spec.generators, ms[slot]) if e)
        return names

    def support(self) -> set[str]:
        names = set()
        for s in range(self.arity):
            names |= self.slot_support(s)
        return names

    def format(self, sep=" ", tensor=" (x) ") -> str:
        def key(item):
            (ms, k), _ = item
            return (k, tuple(sum(m) for m in ms), tuple(tuple(-e for e in m) for m in ms))

        parts = []
        for (ms, k), c in sorted(self.data.items(), key=key):
            slots = []
            for m in ms:
                f = format_monomial(m, self.spec.generators)
                slots.append(sep.join(f) if f else "1")
            body = tensor.join(slots)
            tau = _tau_factor(k)
            parts.append(join_term(c, tau + [body], sep=sep))
        return join_terms(parts)

    def __str__(self):
        return self.format()

    __repr__ = __str__

    def to_dsl(self) -> str:
        return self.format(sep="*")


def tensor(*factors: AlgebraElement) -> TensorElement:
    return TensorElement.pure(*factors)


@dataclass
class HopfSpec:
    """Coproduct table (plus counit and R-matrix exponents) over an algebra.

    ``r_exponents`` lists 2-tensors ``X_1, X_2, ...`` with
    ``R = exp(X_1) exp(X_2) ...``; an empty tuple means ``R = 1 (x) 1``.
    """

    base: AlgebraSpec
    coproducts: dict
    counit: dict = field(default_factory=dict)
    r_exponents: tuple = ()
    _delta_cache: dict = field(default_factory=dict, repr=False)
    _antipode: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        missing = set(self.base.generators) - set(self.coproducts)
        if missing:
            raise HopfError(f"coproduct table missing {sorted(missing)}")
        for g in self.base.generators:
            self.counit.setdefault(g, Fraction(0))

    @property
    def name(self):
        return self.base.name

    @property
    def order(self):
        return self.base.order

    def canonical(self) -> tuple:
        rows = tuple(
            (g, tuple(sorted(self.coproducts[g].data.items()))) for g in self.base.generators
        )
        rs = tuple(tuple(sorted(x.data.items())) for x in self.r_exponents)
        return (self.base.canonical(), rows, rs)

    @property
    def antipode(self) -> dict:
        if self._antipode is None:
            self._antipode = derive_antipode(self)
        return self._antipode


# -- structure maps ------------------------------------------------------------
def _delta_monomial(hs: HopfSpec, mono) -> TensorElement:
    cached = hs._delta_cache.get(mono)
    if cached is not None:
        return cached
    spec = hs.base
    last = next((i for i in range(spec.n - 1, -1, -1) if mono[i]), -1)
    if last < 0:
        result = tensor(spec.one(), spec.one())
    else:
        head = list(mono)
        head[last] -= 1
        result = _delta_monomial(hs, tuple(head)) * hs.coproducts[spec.generators[last]]
    hs._delta_cache[mono] = result
    return result


def coproduct(hs: HopfSpec, a: AlgebraElement) -> TensorElement:
    """Extend the generator table to ``a`` as an algebra morphism."""
    spec = hs.base
    acc: dict = {}
    order = min(a.order, spec.order)
    for (mono, k), c in a.data.items():
        for (ms, k2), c2 in _delta_monomial(hs, mono).data.items():
            if k + k2 <= order:
                accumulate(acc, (ms, k + k2), c * c2)
    return TensorElement(spec, 2, acc, order)


def counit_value(hs: HopfSpec, mono) -> Fraction:
    value = Fraction(1)
    for g, e in zip(hs.base.generators, mono):
        if e:
            value *= hs.counit[g] ** e
    return value


def apply_counit(hs: HopfSpec, t: TensorElement, slot: int) -> AlgebraElement:
    """Contract one slot of a 2-tensor with the counit."""
    acc: dict = {}
    keep = 1 - slot
    for (ms, k), c in t.data.items():
        v = counit_value(hs, ms[slot])
        if v:
            accumulate(acc, (ms[keep], k), c * v)
    return AlgebraElement(hs.base, acc, t.order)


def multiply_slots(t: TensorElement) -> AlgebraElement:
    """The multiplication map ``m(a (x) b) = a b``."""
    spec = t.spec
    acc: dict = {}
    for ((a, b), k), c in t.data.items():
        for (m, k2), c2 in spec._mono_mul(a, b, t.order - k).items():
            accumulate(acc, (m, k + k2), c * c2)
    return AlgebraElement(spec, acc, t.order)


def delta_left(hs: HopfSpec, t: TensorElement) -> TensorElement:
    """``(Delta (x) id)`` on a 2-tensor."""
    acc: dict = {}
    for ((a, b), k), c in t.data.items():
        for ((x, y), k2), c2 in _delta_monomial(hs, a).data.items():
            if k + k2 <= t.order:
                accumulate(acc, ((x, y, b), k + k2), c * c2)
    return TensorElement(t.spec, 3, acc, t.order)


def delta_right(hs: HopfSpec, t: TensorElement) -> TensorElement:
    """``(id (x) Delta)`` on a 2-tensor."""
    acc: dict = {}
    for ((a, b), k), c in t.data.items():
        for ((x, y), k2), c2 in _delta_monomial(hs, b).data.items():
            if k + k2 <= t.order:
                accumulate(acc, ((a, x, y), k + k2), c * c2)
    return TensorElement(t.spec, 3, acc, t.order)


def _generator_tensor(hs: HopfSpec, name: str) -> TensorElement:
    return coproduct(hs, hs.base.gen(name))


# -- antipode ------------------------------------------------------------------
def antipode_of(hs: HopfSpec, a: AlgebraElement, table: dict | None = None) -> AlgebraElement:
    """Apply the antipode (an anti-homomorphism) to an element."""
    spec = hs.base
    table = hs.antipode if table is None else table
    result = spec.zero()
    for (mono, k), c in a.data.items():
        value = spec.one()
        for g, e in zip(spec.generators, mono):
            for _ in range(e):
                value = table[g] * value
        result = result + value.mul_tau(k).truncate(spec.order) * c
    return result


def _apply_left_antipode(hs, t: TensorElement, table) -> AlgebraElement:
    spec = hs.base
    result = spec.zero()
    for ((a, b), k), c in t.data.items():
        sa = antipode_of(hs, AlgebraElement(spec, {(a, 0): Fraction(1)}), table)
        result = result + (sa * AlgebraElement(spec, {(b, 0): Fraction(1)})).mul_tau(k).truncate(spec.order) * c
    return result


def _apply_right_antipode(hs, t: TensorElement, table) -> AlgebraElement:
    spec = hs.base
    result = spec.zero()
    for ((a, b), k), c in t.data.items():
        sb = antipode_of(hs, AlgebraElement(spec, {(b, 0): Fraction(1)}), table)
        result = result + (AlgebraElement(spec, {(a, 0): Fraction(1)}) * sb).mul_tau(k).truncate(spec.order) * c
    return result


def _inverse(x: AlgebraElement) -> AlgebraElement:
    """Inverse of ``1 + u`` with ``u`` of positive tau-order."""
    u = x - 1
    if u.min_tau_order() == 0:
        raise HopfError(f"element {x} is not invertible in the truncated algebra")
    result = x.one()
    power = x.one()
    for _ in range(x.order):
        power = power * (-u)
        result = result + power
    return result


def derive_antipode(hs: HopfSpec) -> dict:
    """Solve ``m (S (x) id) Delta(X) = eps(X) 1`` for ``S(X)``, order by order.

    Writing ``Delta(X) = X (x) B + sum_{a != X} a (x) b`` with ``B`` invertible,
    ``S(X) = (eps(X) - sum S(a) b) B^-1``.  Iterating from ``S(X) = -X`` gains
    (at least) one tau-order per sweep.
    """
    spec = hs.base
    S = {g: -spec.gen(g) for g in spec.generators}
    parts = {}
    for g in spec.generators:
        delta = _generator_tensor(hs, g)
        mono = tuple(int(i == spec.index(g)) for i in range(spec.n))
        lead, rest = {}, {}
        for ((a, b), k), c in delta.data.items():
            if a == mono:
                accumulate(lead, (b, k), c)
            else:
                accumulate(rest, ((a, b), k), c)
        B = AlgebraElement(spec, lead)
        if B.tau_to_zero() != 1:
            raise HopfError(f"cannot isolate S({g}): coefficient of {g} (x) . is {B}")
        parts[g] = (_inverse(B), TensorElement(spec, 2, rest))
    for _ in range(spec.order + 2):
        new = {}
        for g in spec.generators:
            binv, rest = parts[g]
            new[g] = (spec.one() * hs.counit[g] - _apply_left_antipode(hs, rest, S)) * binv
        if all(new[g] == S[g] for g in spec.generators):
            break
        S = new
    else:
        raise HopfError("antipode iteration did not stabilise")
    for g in spec.generators:
        left = _apply_left_antipode(hs, _generator_tensor(hs, g), S)
        right = _apply_right_antipode(hs, _generator_tensor(hs, g), S)
        target = spec.one() * hs.counit[g]
        if left != target or right != target:
            raise HopfError(f"antipode axiom fails for {g}")
    return S


# -- R-matrix ------------------------------------------------------------------
def rmatrix(hs: HopfSpec) -> TensorElement:
    """``R = exp(X_1) exp(X_2) ...`` expanded to the truncation order."""
    spec = hs.base
    R = tensor(spec.one(), spec.one())
    for x in hs.r_exponents:
        R = R * x.exp()
    return R


# -- checks --------------------------------------------------------------------
def _timed(report, check, subject, fn):
    t0 = time.perf_counter()
    diff = fn()
    ok = diff.is_zero()
    report.add(check, subject, ok, residual=None if ok else str(diff), seconds=time.perf_counter() - t0)


def check_coproduct_homomorphism(hs: HopfSpec) -> Report:
    spec = hs.base
    report = Report(f"coproduct homomorphism {spec.name}")
    g = spec.gens()
    deltas = {name: _generator_tensor(hs, name) for name in spec.generators}
    for b, a in itertools.combinations(spec.generators, 2):
        def diff(a=a, b=b):
            lhs = coproduct(hs, commutator(spec, g[a], g[b]))
            rhs = deltas[a] * deltas[b] - deltas[b] * deltas[a]
            return lhs - rhs
        _timed(report, "homomorphism", f"({a},{b})", diff)
    return report


def check_coassociativity(hs: HopfSpec) -> Report:
    report = Report(f"coassociativity {hs.name}")
    for name in hs.base.generators:
        d = _generator_tensor(hs, name)
        _timed(report, "coassociativity", name, lambda d=d: delta_left(hs, d) - delta_right(hs, d))
    return report


def check_counit(hs: HopfSpec) -> Report:
    report = Report(f"counit {hs.name}")
    for name in hs.base.generators:
        d = _generator_tensor(hs, name)
        x = hs.base.gen(name)
        _timed(report, "counit-left", name, lambda d=d, x=x: apply_counit(hs, d, 0) - x)
        _timed(report, "counit-right", name, lambda d=d, x=x: apply_counit(hs, d, 1) - x)
    return report


def check_antipode(hs: HopfSpec) -> Report:
    report = Report(f"antipode {hs.name}")
    spec = hs.base
    try:
        S = hs.antipode
    except HopfError as exc:
        report.add("antipode", "derive", False, detail=str(exc))
        return report
    for name in spec.generators:
        d = _generator_tensor(hs, name)
        target = spec.one() * hs.counit[name]
        _timed(report, "antipode-left", name, lambda d=d: _apply_left_antipode(hs, d, S) - target)
        _timed(report, "antipode-right", name, lambda d=d: _apply_right_antipode(hs, d, S) - target)
    return report


def check_intertwining(hs: HopfSpec) -> Report:
    report = Report(f"R-matrix intertwining {hs.name}")
    R = rmatrix(hs)
    for name in hs.base.generators:
        d = _generator_tensor(hs, name)
        _timed(report, "intertwining", name, lambda d=d: R * d - d.flip() * R)
    return report


def check_qybe(hs: HopfSpec) -> Report:
    report = Report(f"quantum Yang-Baxter {hs.name} (order {hs.order})")
    R = rmatrix(hs)
    r12, r13, r23 = R.embed((0, 1)), R.embed((0, 2)), R.embed((1, 2))
    _timed(report, "qybe", "R12 R13 R23 = R23 R13 R12", lambda: r12 * r13 * r23 - r23 * r13 * r12)
    return report


def check_not_hopf_subalgebra(hs: HopfSpec, subset) -> Report:
    """Passes when some coproduct of a subset generator leaves the subset.

    The witness (all offending tensor terms of that coproduct) is recorded in
    the item's ``residual`` field.
    """
    subset = set(subset)
    report = Report(f"not a Hopf subalgebra {{{','.join(sorted(subset, key=hs.base.index))}}} in {hs.name}")
    witnesses = hopf_subalgebra_witnesses(hs, subset)
    if witnesses:
        for name, w in witnesses.items():
            report.add("hopf-witness", f"Delta({name})", True, residual=str(w), detail="term outside subset")
    else:
        report.add("hopf-witness", "all", False, detail="every coproduct stays inside the subset")
    return report


def hopf_subalgebra_witnesses(hs: HopfSpec, subset) -> dict:
    """For each subset generator, the part of its coproduct leaving the subset."""
    spec = hs.base
    allowed = set(subset)
    out = {}
    for name in sorted(allowed, key=spec.index):
        d = _generator_tensor(hs, name)
        bad = {}
        for (ms, k), c in d.data.items():
            used = {n for m in ms for n, e in zip(spec.generators, m) if e}
            if used - allowed:
                bad[(ms, k)] = c
        if bad:
            out[name] = TensorElement(spec, 2, bad, d.order)
    return out


def check_hopf_subalgebra(hs: HopfSpec, subset) -> Report:
    """Closure under brackets, coproduct, and antipode."""
    from .ncalgebra import subalgebra_closure

    spec = hs.base
    subset = sorted(set(subset), key=spec.index)
    report = subalgebra_closure(spec, subset)
    report.title = f"Hopf subalgebra {{{','.join(subset)}}} in {hs.name}"
    witnesses = hopf_subalgebra_witnesses(hs, subset)
    for name in subset:
        w = witnesses.get(name)
        report.add("coproduct-support", f"Delta({name})", w is None, residual=None if w is None else str(w))
    for name in subset:
        s = hs.antipode[name]
        outside = s.support() - set(subset)
        report.add("antipode-support", f"S({name})", not outside, residual=None if not outside else str(s))
    return report


def classical_r(spec: AlgebraSpec, r_exponents) -> TensorElement:
    """First-order part ``r`` of ``R = 1 + tau r + ...`` as a tau-free tensor."""
    hs_r = tensor(spec.one(), spec.one())
    for x in r_exponents:
        hs_r = hs_r + x
    return (hs_r - tensor(spec.one(), spec.one())).tau_part(1)


def check_cocommutator(hs: HopfSpec, classical: AlgebraSpec) -> Report:
    """``tau``-linear part of ``Delta - Delta^op`` equals ``[X (x) 1 + 1 (x) X, r]``.

    Brackets on the right are taken in ``classical`` (the undeformed algebra).
    """
    spec = hs.base
    report = Report(f"cocommutator {hs.name}")
    lifted = [x.tau_part(1) for x in hs.r_exponents]
    r = {}
    for x in lifted:
        for key, c in x.data.items():
            accumulate(r, key, c)
    r_cl = TensorElement(classical, 2, r, classical.order)
    one = classical.one()
    for name in spec.generators:
        d = _generator_tensor(hs, name)
        lhs = (d - d.flip()).tau_part(1)
        lhs = TensorElement(classical, 2, lhs.data, classical.order)
        x = classical.gen(name)
        xs = tensor(x, one) + tensor(one, x)
        rhs = xs * r_cl - r_cl * xs
        _timed(report, "cocommutator", name, lambda lhs=lhs, rhs=rhs: lhs - rhs)
    return report


def hopf_suite(hs: HopfSpec) -> Report:
    report = Report(f"Hopf axioms {hs.name}")
    for part in (check_coproduct_homomorphism, check_coassociativity, check_counit, check_antipode):
        report.extend(part(hs))
    return report


def relabel_hopf(hs: HopfSpec, new_base: AlgebraSpec) -> HopfSpec:
    """Carry a Hopf structure over to a relabelled copy of its algebra."""
    rename = dict(zip(hs.base.generators, new_base.generators))
    cop = {rename[g]: TensorElement(new_base, 2, t.data, t.order) for g, t in hs.coproducts.items()}
    rs = tuple(TensorElement(new_base, 2, x.data, x.order) for x in hs.r_exponents)
    counit = {rename[g]: v for g, v in hs.counit.items()}
    return HopfSpec(new_base, cop, counit, rs)

