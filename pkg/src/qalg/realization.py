"""Differential(-difference) operators in ``(x, t)`` and their action.

Operators are normal-ordered as ``x^a t^b dx^c dt^d`` with
``[dx, x] = [dt, t] = 1``.  Finite shifts ``exp(s*tau*dt)`` are expanded in
tau like every other exponential.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

from .linear import TauLinear
from .ncalgebra import AlgebraElement, AlgebraSpec
from .report import Report
from .scalars import DEFAULT_ORDER, accumulate, join_term, join_terms

GENERATORS = ("D", "H", "P", "K", "C1", "C2")
_VARS = ("x", "t", "dx", "dt")


def _falling(n: int, k: int) -> int:
    return factorial(n) // factorial(n - k) if k <= n else 0


def _weyl_1d(c: int, a: int):
    """``d^c x^a = sum_k C(c,k) a!/(a-k)! x^(a-k) d^(c-k)``."""
    return [(a - k, c - k, comb(c, k) * _falling(a, k)) for k in range(min(a, c) + 1)]


def _tau_factor(k):
    return [] if k == 0 else ["tau" if k == 1 else f"tau^{k}"]


def _format_key(key, names):
    out = []
    for name, e in zip(names, key):
        if e == 1:
            out.append(name)
        elif e > 1:
            out.append(f"{name}^{e}")
    return out


class PhaseSpaceOperator(TauLinear):
    __slots__ = ()

    def _unit_key(self):
        return (0, 0, 0, 0)

    def _mul_data(self, other, budget):
        acc: dict = {}
        for ((a, b, c, d), k1), c1 in self.data.items():
            for ((a2, b2, c2, d2), k2), v2 in other.data.items():
                if k1 + k2 > budget:
                    continue
                coef = c1 * v2
                for ax, cx, nx in _weyl_1d(c, a2):
                    for bt, dt, nt in _weyl_1d(d, b2):
                        key = ((a + ax, b + bt, cx + c2, dt + d2), k1 + k2)
                        accumulate(acc, key, coef * nx * nt)
        return acc

    @classmethod
    def monomial(cls, x=0, t=0, dx=0, dt=0, coeff=1, tau=0, order=DEFAULT_ORDER):
        return cls({((x, t, dx, dt), tau): Fraction(coeff)}, order)

    def __str__(self):
        parts = []
        for (key, k), c in sorted(self.data.items(), key=lambda it: (it[0][1], sum(it[0][0]), it[0][0])):
            parts.append(join_term(c, _tau_factor(k) + _format_key(key, _VARS)))
        return join_terms(parts)

    __repr__ = __str__

    def to_dsl(self) -> str:
        parts = []
        for (key, k), c in sorted(self.data.items(), key=lambda it: (it[0][1], sum(it[0][0]), it[0][0])):
            parts.append(join_term(c, _tau_factor(k) + _format_key(key, _VARS), sep="*"))
        return join_terms(parts)


class PolynomialFunction(TauLinear):
    """Polynomial in ``x, t`` with tau-series coefficients."""

    __slots__ = ()

    def _unit_key(self):
        return (0, 0)

    def _mul_data(self, other, budget):
        acc: dict = {}
        for ((i, j), k1), c1 in self.data.items():
            for ((i2, j2), k2), c2 in other.data.items():
                if k1 + k2 <= budget:
                    accumulate(acc, ((i + i2, j + j2), k1 + k2), c1 * c2)
        return acc

    @classmethod
    def monomial(cls, x=0, t=0, coeff=1, order=DEFAULT_ORDER):
        return cls({((x, t), 0): Fraction(coeff)}, order)

    @property
    def t_degree(self) -> int:
        return max((j for ((_, j), _k) in self.data), default=0)

    def __str__(self):
        parts = []
        for ((i, j), k), c in sorted(self.data.items(), key=lambda it: (-sum(it[0][0]), it[0][0], it[0][1])):
            parts.append(join_term(c, _tau_factor(k) + _format_key((i, j), ("x", "t"))))
        return join_terms(parts)

    __repr__ = __str__


class TruncationError(ValueError):
    """The truncation order is too low for an exact action on a polynomial."""


def op_multiply(a: PhaseSpaceOperator, b: PhaseSpaceOperator) -> PhaseSpaceOperator:
    return a * b


def op_commutator(a: PhaseSpaceOperator, b: PhaseSpaceOperator) -> PhaseSpaceOperator:
    return a * b - b * a


def apply(op: PhaseSpaceOperator, f: PolynomialFunction) -> PolynomialFunction:
    """Act with an operator on a polynomial.

    A dropped term ``tau^k dt^d`` (k > N) only matters when d <= t-degree.
    For coefficient-times-shift-series operators (every realized generator
    and both Casimirs) the excess ``k - d`` of dropped terms is bounded by
    that of the kept ones, so the action is exact once
    ``N >= t-degree + max(k - d)``; coarser truncations are rejected.
    """
    order = min(op.order, f.order)
    excess = max((k - key[3] for key, k in op.data), default=0)
    need = f.t_degree + max(excess, 0)
    if need > order:
        raise TruncationError(
            f"truncation too coarse for exact action: order {order} < {need} "
            f"(t-degree {f.t_degree} plus tau excess {max(excess, 0)})"
        )
    acc: dict = {}
    for ((a, b, c, d), k1), c1 in op.data.items():
        for ((i, j), k2), c2 in f.data.items():
            if c > i or d > j or k1 + k2 > order:
                continue
            n = _falling(i, c) * _falling(j, d)
            accumulate(acc, ((i - c + a, j - d + b), k1 + k2), c1 * c2 * n)
    return PolynomialFunction(acc, order)


# -- building blocks --------------------------------------------------------
def _x(order):
    return PhaseSpaceOperator.monomial(x=1, order=order)


def _t(order):
    return PhaseSpaceOperator.monomial(t=1, order=order)


def _dx(order):
    return PhaseSpaceOperator.monomial(dx=1, order=order)


def _dt(order):
    return PhaseSpaceOperator.monomial(dt=1, order=order)


def shift(scale, order: int) -> PhaseSpaceOperator:
    """``exp(scale * tau * dt)``."""
    return (_dt(order).mul_tau(1) * Fraction(scale)).exp()


def forward_difference(order: int) -> PhaseSpaceOperator:
    """``(exp(tau dt) - 1) / tau``, exact through ``tau^order``."""
    return (shift(1, order + 1) - 1).div_tau()


def backward_difference(order: int) -> PhaseSpaceOperator:
    """``(1 - exp(-tau dt)) / tau``, exact through ``tau^order``."""
    return (1 - shift(-1, order + 1)).div_tau()


def classical_realization(gen: str, order: int = DEFAULT_ORDER) -> PhaseSpaceOperator:
    """Vector fields of the conformal algebra of (1+1) Minkowski space."""
    x, t, dx, dt = _x(order), _t(order), _dx(order), _dt(order)
    table = {
        "H": lambda: dt,
        "P": lambda: dx,
        "K": lambda: -(t * dx) - x * dt,
        "D": lambda: -(x * dx) - t * dt,
        "C1": lambda: (x * x + t * t) * dt + 2 * x * t * dx,
        "C2": lambda: -((x * x + t * t) * dx) - 2 * x * t * dt,
    }
    try:
        return table[gen]()
    except KeyError:
        raise KeyError(f"unknown generator {gen!r}") from None


def deformed_realization(gen: str, order: int = DEFAULT_ORDER) -> PhaseSpaceOperator:
    """Differential-difference operators: continuous in x, lattice step tau in t."""
    x, t, dx, dt = _x(order), _t(order), _dx(order), _dt(order)
    tau = x.one().mul_tau(1)

    def k():
        return -(x * forward_difference(order)) - t * shift(-1, order) * dx

    def d():
        return -(x * dx) - t * backward_difference(order)

    def c1():
        return ((x * x + t * t * shift(-1, order)) * forward_difference(order)
                + 2 * x * t * dx + tau * x * dx + tau * x * x * dx * dx)

    def c2():
        return (-((x * x + t * t * shift(-2, order)) * dx)
                - 2 * x * t * backward_difference(order)
                + tau * t * shift(-2, order) * dx)

    table = {"H": lambda: dt, "P": lambda: dx, "K": k, "D": d, "C1": c1, "C2": c2}
    try:
        return table[gen]()
    except KeyError:
        raise KeyError(f"unknown generator {gen!r}") from None


def realization_table(kind: str, order: int = DEFAULT_ORDER, generators=GENERATORS) -> dict:
    build = {"classical": classical_realization, "deformed": deformed_realization}[kind]
    return {g: build(g, order) for g in generators}


def realize(element: AlgebraElement, table: dict) -> PhaseSpaceOperator:
    """Image of an algebra element under the homomorphism fixed by ``table``."""
    spec = element.spec
    some = next(iter(table.values()))
    order = min(element.order, some.order)
    powers: dict = {}

    def power(g, e):
        if (g, e) not in powers:
            powers[(g, e)] = table[g] ** e
        return powers[(g, e)]

    result = some.zero(order)
    for (mono, k), c in element.data.items():
        if k > order:
            continue
        op = some.one(order)
        for g, e in zip(spec.generators, mono):
            if e:
                op = op * power(g, e)
        result = result + op.mul_tau(k).truncate(order) * c
    return result


def check_realization(spec: AlgebraSpec, table: dict) -> Report:
    """Realized commutators reproduce the bracket table, pair by pair."""
    report = Report(f"realization of {spec.name}")
    for i, j in itertools.combinations(range(spec.n), 2):
        a, b = spec.generators[j], spec.generators[i]
        lhs = op_commutator(table[a], table[b])
        rhs = realize(spec.table_entry(a, b), table)
        diff = lhs - rhs
        report.add("realization", f"[{a},{b}]", diff.is_zero(), residual=None if diff.is_zero() else str(diff))
    return report


def casimir(kind: str, order: int = DEFAULT_ORDER) -> PhaseSpaceOperator:
    """``P^2 - H^2`` (classical) or ``P^2 - ((exp(tau H) - 1)/tau)^2`` (deformed)."""
    dx = _dx(order)
    if kind == "classical":
        dt = _dt(order)
        return dx * dx - dt * dt
    if kind == "deformed":
        fd = forward_difference(order)
        return dx * dx - fd * fd
    raise ValueError(f"unknown kind {kind!r}")


def symmetry_cofactor(kind: str, gen: str, order: int = DEFAULT_ORDER) -> PhaseSpaceOperator:
    """``L`` in ``[E, O] = L E`` for each realized generator."""
    x, t, dx = _x(order), _t(order), _dx(order)
    zero = x.zero()
    if gen in ("H", "P", "K"):
        return zero
    if gen == "D":
        return x.one() * -2
    if gen == "C2":
        return x * -4
    if gen == "C1":
        if kind == "classical":
            return t * 4
        tau = x.one().mul_tau(1)
        return (t + tau + tau * x * dx) * 4
    raise KeyError(f"unknown generator {gen!r}")


def check_symmetry(kind: str, generator: str, order: int = DEFAULT_ORDER) -> Report:
    """``[E, O] - L E = 0`` as an operator identity (equivalently ``E O = (O + L) E``)."""
    E = casimir(kind, order)
    O = (classical_realization if kind == "classical" else deformed_realization)(generator, order)
    L = symmetry_cofactor(kind, generator, order)
    diff = op_commutator(E, O) - L * E
    report = Report(f"{kind} wave-equation symmetry {generator}")
    report.add("symmetry", f"{kind}:{generator}", diff.is_zero(),
               residual=None if diff.is_zero() else str(diff), detail=f"[E,{generator}] = ({L}) E")
    return report


def wave_residual(kind: str, f: PolynomialFunction) -> PolynomialFunction:
    return apply(casimir(kind, f.order), f)


def check_solution_preservation(kind: str, generator: str, f: PolynomialFunction) -> Report:
    report = Report(f"{kind} solution preservation by {generator}")
    if not wave_residual(kind, f).is_zero():
        report.add("preservation", f"{generator}({f})", False, detail="input not a solution")
        return report
    build = classical_realization if kind == "classical" else deformed_realization
    image = apply(build(generator, f.order), f)
    residual = wave_residual(kind, image)
    report.add("preservation", f"{generator}({f})", residual.is_zero(),
               residual=None if residual.is_zero() else str(residual), detail=f"image {image}")
    return report


def solution_set(order: int = DEFAULT_ORDER) -> list[PolynomialFunction]:
    """``1, x, t, xt, x^2 + t^2``: solutions of both the continuous and discrete equations."""
    m = PolynomialFunction.monomial
    return [
        m(order=order),
        m(x=1, order=order),
        m(t=1, order=order),
        m(x=1, t=1, order=order),
        m(x=2, order=order) + m(t=2, order=order),
    ]
