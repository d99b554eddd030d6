"""Inonu-Wigner contraction of Hopf data, plus the classical Yang-Baxter check.

A contraction map rescales ``g_old = eps^(-a_g) g_new`` and
``tau_old = eps^p tau_new``.  Since this is an algebra automorphism over
Laurent polynomials in eps, a normal-ordered source expression stays
normal-ordered after substitution: each term ``c tau^k g^e`` just picks up
``eps^(p k - sum a_g e_g)``.  The eps -> 0 limit is then taken termwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .hopf import HopfSpec, TensorElement, rmatrix
from .ncalgebra import AlgebraElement, AlgebraSpec, format_monomial
from .report import DIVERGED, Report
from .scalars import ScalarSeries, join_term, join_terms


@dataclass(frozen=True)
class ContractionMap:
    """``generator_scale[g] = a`` means ``g -> eps^a g``; ``tau -> tau / eps^p``."""

    generator_scale: dict
    tau_exponent: int = 1
    name: str = "custom"

    def exponent(self, names, mono) -> int:
        return sum(self.generator_scale.get(g, 0) * e for g, e in zip(names, mono))

    def without_param_rescale(self) -> ContractionMap:
        return ContractionMap(dict(self.generator_scale), 0, f"{self.name} (no tau rescale)")


POINCARE_MAP = ContractionMap({"H": 1, "P": 0, "K": 1, "C1": 1, "C2": 0, "D": 0}, 1, "poincare")
IDENTITY_MAP = ContractionMap({}, 0, "identity")
CLASSICAL_LIMIT_MAP = ContractionMap({}, 1, "classical limit")


@dataclass
class Contracted:
    """Result of one contraction item: a value, or the terms that blow up."""

    value: object = None
    divergent: list = field(default_factory=list)

    @property
    def diverges(self) -> bool:
        return bool(self.divergent)


def _limit(data: dict, names, cmap: ContractionMap, prefactor: int, slot_count: int):
    """Termwise eps-limit of ``{(key, k): c}``; keys are monomials or tuples of them."""
    grouped: dict = {}
    for (key, k), c in data.items():
        monos = key if slot_count else (key,)
        e = prefactor + cmap.tau_exponent * k - sum(cmap.exponent(names, m) for m in monos)
        grouped.setdefault(key, {})[(k, e)] = c
    out: dict = {}
    divergent = []
    for key, coeffs in grouped.items():
        lim = ScalarSeries(coeffs, max(k for k, _ in coeffs)).eps_limit()
        if lim.diverges:
            divergent.append((key, lim.divergent))
            continue
        for (k, _), c in lim.value.coefficients.items():
            out[(key, k)] = c
    return out, divergent


def _describe(divergent, names, slot_count) -> list[str]:
    lines = []
    for key, terms in divergent:
        monos = key if slot_count else (key,)
        body = " (x) ".join(" ".join(format_monomial(m, names)) or "1" for m in monos)
        for (k, e), c in sorted(terms.items()):
            lines.append(f"{c} tau^{k} eps^{e} * {body}")
    return lines


def contract_relation(cmap: ContractionMap, source: AlgebraSpec, pair, target: AlgebraSpec | None = None) -> Contracted:
    """eps-limit of the rescaled relation ``[X, Y]``, as an element of ``target``."""
    x, y = pair
    target = target or source
    rhs = source.table_entry(x, y)
    pre = cmap.generator_scale.get(x, 0) + cmap.generator_scale.get(y, 0)
    data, divergent = _limit(rhs.data, source.generators, cmap, pre, 0)
    if divergent:
        return Contracted(None, _describe(divergent, source.generators, 0))
    return Contracted(AlgebraElement(target, data, min(rhs.order, target.order)))


def _contract_tensor(cmap, t: TensorElement, prefactor, target: AlgebraSpec) -> Contracted:
    data, divergent = _limit(t.data, t.spec.generators, cmap, prefactor, t.arity)
    if divergent:
        return Contracted(None, _describe(divergent, t.spec.generators, t.arity))
    return Contracted(TensorElement(target, t.arity, data, min(t.order, target.order)))


def contract_coproduct(cmap: ContractionMap, source: HopfSpec, gen: str, target: AlgebraSpec | None = None) -> Contracted:
    target = target or source.base
    return _contract_tensor(cmap, source.coproducts[gen], cmap.generator_scale.get(gen, 0), target)


def contract_rmatrix(cmap: ContractionMap, source: HopfSpec, target: AlgebraSpec | None = None) -> Contracted:
    target = target or source.base
    return _contract_tensor(cmap, rmatrix(source), 0, target)


def contract_full(cmap: ContractionMap, source: HopfSpec, target: HopfSpec | None = None) -> Report:
    """Contract all relations, coproducts, and R; compare with ``target``.

    Without a target the limits are only reported (status pass when the
    limit exists).
    """
    title = f"contraction {source.name} -> {target.name if target else '(no target)'} [{cmap.name}]"
    report = Report(title)
    spec = source.base
    tbase = target.base if target else None
    if tbase is not None and tbase.generators != spec.generators:
        raise ValueError("source and target must share generator names")

    def record(check, subject, result, expected):
        if result.diverges:
            report.add(check, subject, DIVERGED, residual="; ".join(result.divergent), detail="eps -> 0 diverges")
            return
        if expected is None:
            report.add(check, subject, True, detail=str(result.value))
            return
        diff = result.value - expected
        report.add(check, subject, diff.is_zero(), residual=None if diff.is_zero() else str(diff),
                   detail=f"limit {result.value}; target {expected}")

    for i, j in itertools.combinations(range(spec.n), 2):
        a, b = spec.generators[j], spec.generators[i]
        res = contract_relation(cmap, spec, (a, b), tbase or spec)
        record("relation", f"[{a},{b}]", res, tbase.table_entry(a, b) if tbase else None)
    for g in spec.generators:
        res = contract_coproduct(cmap, source, g, tbase or spec)
        record("coproduct", f"Delta({g})", res, target.coproducts[g] if target else None)
    res = contract_rmatrix(cmap, source, tbase or spec)
    record("rmatrix", "R", res, rmatrix(target) if target else None)
    return report


# -- classical Yang-Baxter ---------------------------------------------------
def structure_constants(spec: AlgebraSpec) -> dict:
    """``{(i, j): {k: c}}`` with ``[g_i, g_j] = sum_k c g_k`` for a Lie algebra table."""
    out = {}
    for i, j in itertools.product(range(spec.n), repeat=2):
        value = spec.table_entry(spec.generators[i], spec.generators[j])
        row = {}
        for (mono, k), c in value.data.items():
            if k != 0 or sum(mono) != 1:
                raise ValueError(f"[{spec.generators[i]},{spec.generators[j]}] is not linear in the generators")
            row[mono.index(1)] = c
        out[(i, j)] = row
    return out


def wedge(spec: AlgebraSpec, a: str, b: str, coeff=1) -> dict:
    """``coeff * (a (x) b - b (x) a)`` as ``{(i, j): c}``."""
    i, j = spec.index(a), spec.index(b)
    c = Fraction(coeff)
    return {(i, j): c, (j, i): -c}


def schouten(spec: AlgebraSpec, r: dict) -> dict:
    """``[[r, r]] = [r12, r13] + [r12, r23] + [r13, r23]`` in components."""
    f = structure_constants(spec)
    out: dict = {}

    def add(key, c):
        v = out.get(key, 0) + c
        if v:
            out[key] = v
        else:
            out.pop(key, None)

    for (a, b), c1 in r.items():
        for (c, d), c2 in r.items():
            w = c1 * c2
            for k, s in f[(a, c)].items():  # [r12, r13]: [a,c] (x) b (x) d
                add((k, b, d), w * s)
            for k, s in f[(b, c)].items():  # [r12, r23]: a (x) [b,c] (x) d
                add((a, k, d), w * s)
            for k, s in f[(b, d)].items():  # [r13, r23]: a (x) c (x) [b,d]
                add((a, c, k), w * s)
    return out


def check_cybe(spec: AlgebraSpec, r: dict, label: str = "r") -> Report:
    """Schouten bracket of ``r`` (a tau-free 2-tensor) must vanish."""
    report = Report(f"classical Yang-Baxter {label} over {spec.name}")
    value = schouten(spec, r)
    names = spec.generators
    residual = join_terms([join_term(c, [f"{names[i]} (x) {names[j]} (x) {names[k]}"]) for (i, j, k), c in sorted(value.items())])
    report.add("cybe", label, not value, residual=residual if value else None)
    return report


def tensor_components(t: TensorElement) -> dict:
    """``{(i, j): c}`` for a tau-free tensor that is linear in each slot."""
    out = {}
    for ((m1, m2), k), c in t.data.items():
        if k != 0 or sum(m1) != 1 or sum(m2) != 1:
            raise ValueError("tensor is not a tau-free sum of generator pairs")
        out[(m1.index(1), m2.index(1))] = c
    return out
