"""Non-commutative polynomial algebras with PBW normal ordering.

An :class:`AlgebraSpec` fixes an ordered list of generators ``g_0 < ... <
g_{n-1}`` and, for every pair ``i < j``, the normal-ordered value of the
commutator ``[g_j, g_i]``.  Products are straightened with the rewrite

    g_j g_i  ->  g_i g_j + [g_j, g_i]        (j > i)

and coefficients are truncated above ``tau^N``.  Degree-raising terms in a
deformed table always carry a positive power of tau, so rewriting under a
tau budget terminates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linear import TauLinear
from .report import Report
from .scalars import DEFAULT_ORDER, accumulate, join_term, join_terms

MAX_REWRITE_STEPS = 10**6

Monomial = tuple  # exponent vector over the generators


class RewriteLimitError(RuntimeError):
    """The rewriting engine exceeded its step cap (a malformed table)."""


class SpecDefinitionError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSymbol:
    name: str
    pbw_rank: int


def mono_word(mono: Monomial) -> tuple:
    return tuple(i for i, e in enumerate(mono) for _ in range(e))


def word_mono(word, n: int) -> Monomial:
    exps = [0] * n
    for i in word:
        exps[i] += 1
    return tuple(exps)


def is_ordered(word) -> bool:
    return all(a <= b for a, b in zip(word, word[1:]))


def format_monomial(mono: Monomial, names, sep=" ") -> list[str]:
    out = []
    for name, e in zip(names, mono):
        if e == 1:
            out.append(name)
        elif e > 1:
            out.append(f"{name}^{e}")
    return out


def _tau_factor(k: int) -> list[str]:
    if k == 0:
        return []
    return ["tau" if k == 1 else f"tau^{k}"]


def _sort_key(item):
    (mono, k), _ = item
    return (k, sum(mono), tuple(-e for e in mono))


class FreeElement(TauLinear):
    """Linear combination of unordered words (the free algebra)."""

    __slots__ = ("generators",)

    def __init__(self, generators, data, order):
        super().__init__(data, order)
        self.generators = tuple(generators)

    def _new(self, data, order):
        return FreeElement(self.generators, data, order)

    def _check_compatible(self, other):
        if not isinstance(other, FreeElement) or other.generators != self.generators:
            raise TypeError("words over different generator sets")

    def _unit_key(self):
        return ()

    def _mul_data(self, other, budget):
        acc: dict = {}
        for (w1, k1), c1 in self.data.items():
            for (w2, k2), c2 in other.data.items():
                if k1 + k2 <= budget:
                    accumulate(acc, (w1 + w2, k1 + k2), c1 * c2)
        return acc

    @classmethod
    def generator(cls, generators, name, order=DEFAULT_ORDER):
        return cls(generators, {((list(generators).index(name),), 0): Fraction(1)}, order)

    @classmethod
    def scalar(cls, generators, value, order=DEFAULT_ORDER):
        return cls(generators, {((), 0): Fraction(value)}, order)

    def __str__(self):
        parts = []
        for (w, k), c in sorted(self.data.items(), key=lambda it: (it[0][1], len(it[0][0]), it[0][0])):
            parts.append(join_term(c, _tau_factor(k) + [self.generators[i] for i in w]))
        return join_terms(parts)

    __repr__ = __str__


class AlgebraElement(TauLinear):
    """Linear combination of PBW monomials with tau-series coefficients."""

    __slots__ = ("spec",)

    def __init__(self, spec: AlgebraSpec, data, order=None):
        super().__init__(data, spec.order if order is None else order)
        self.spec = spec

    def _new(self, data, order):
        return AlgebraElement(self.spec, data, order)

    def _check_compatible(self, other):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"cannot combine AlgebraElement with {type(other).__name__}")
        if other.spec is not self.spec and other.spec.generators != self.spec.generators:
            raise TypeError("elements of algebras with different generators")

    def _unit_key(self):
        return (0,) * self.spec.n

    def _mul_data(self, other, budget):
        return self.spec._mul_data(self.data, other.data, budget)

    @property
    def monomials(self) -> set:
        return self.keys()

    def support(self) -> set[str]:
        """Names of the generators appearing in any term."""
        names = set()
        for mono, _ in self.data:
            names.update(n for n, e in zip(self.spec.generators, mono) if e)
        return names

    def __str__(self):
        return self.format()

    __repr__ = __str__

    def format(self, show_order=False) -> str:
        parts = [
            join_term(c, _tau_factor(k) + format_monomial(mono, self.spec.generators))
            for (mono, k), c in sorted(self.data.items(), key=_sort_key)
        ]
        text = join_terms(parts)
        if show_order:
            nxt = self.order + 1
            text += " + O(tau)" if nxt == 1 else f" + O(tau^{nxt})"
        return text

    def to_dsl(self) -> str:
        """Render in the plain-text expression grammar."""
        parts = [
            join_term(c, _tau_factor(k) + format_monomial(mono, self.spec.generators), sep="*")
            for (mono, k), c in sorted(self.data.items(), key=_sort_key)
        ]
        return join_terms(parts)


class AlgebraSpec:
    """Generators, PBW order, and commutator table at a fixed truncation order.

    ``table[(i, j)]`` (``i < j``) holds the normal-ordered data of
    ``[g_j, g_i]`` as ``{(monomial, tau_power): Fraction}``.
    """

    def __init__(self, name: str, generators, order: int = DEFAULT_ORDER, table=None):
        generators = tuple(generators)
        if len(set(generators)) != len(generators):
            raise SpecDefinitionError("duplicate generator names")
        self.name = name
        self.generators = generators
        self.n = len(generators)
        self.order = order
        self._index = {g: i for i, g in enumerate(generators)}
        self._table: dict = {}
        self._raw: dict = {}
        self._in_progress: set = set()
        self._gen_cache: dict = {}
        self._mono_cache: dict = {}
        self._steps = 0
        for (i, j), data in (table or {}).items():
            if not i < j:
                raise SpecDefinitionError("table keys must satisfy i < j")
            self._table[(i, j)] = dict(data)

    # -- construction ------------------------------------------------------
    @classmethod
    def from_brackets(cls, name, generators, brackets: dict, order: int = DEFAULT_ORDER):
        """Build a spec from unordered bracket values ``{(A, B): [A, B]}``.

        Values may be :class:`FreeElement` (words, normal-ordered here using
        the table itself, lazily) or anything with a ``data`` dict of words.
        Missing pairs are zero.
        """
        spec = cls(name, generators, order)
        seen = set()
        for (a, b), value in brackets.items():
            i, j = spec.index(a), spec.index(b)
            if i == j:
                raise SpecDefinitionError(f"bracket [{a},{a}] must not be specified")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise SpecDefinitionError(f"bracket [{a},{b}] specified twice")
            seen.add(key)
            if isinstance(value, (int, Fraction)):
                value = FreeElement.scalar(generators, value, order)
            sign = 1 if i > j else -1  # stored value is [g_max, g_min]
            spec._raw[key] = {(w, k): sign * c for (w, k), c in value.data.items() if k <= order}
        for key in list(spec._raw):
            spec._bracket(*key)
        for i, j in itertools.combinations(range(spec.n), 2):
            spec._table.setdefault((i, j), {})
        return spec

    def _bracket(self, i: int, j: int) -> dict:
        """Normal-ordered ``[g_j, g_i]`` for ``i < j``."""
        data = self._table.get((i, j))
        if data is not None:
            return data
        raw = self._raw.get((i, j))
        if raw is None:
            return {}
        if (i, j) in self._in_progress:
            raise SpecDefinitionError(
                f"cyclic bracket definition involving [{self.generators[j]},{self.generators[i]}]"
            )
        self._in_progress.add((i, j))
        acc: dict = {}
        for (w, k), c in raw.items():
            for (m, k2), c2 in self._word_data(w, self.order - k).items():
                accumulate(acc, (m, k + k2), c * c2)
        self._in_progress.discard((i, j))
        self._table[(i, j)] = acc
        return acc

    # -- basic accessors ---------------------------------------------------
    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r} in {self.name}") from None

    @property
    def symbols(self) -> list[GeneratorSymbol]:
        return [GeneratorSymbol(g, i) for i, g in enumerate(self.generators)]

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, {((0,) * self.n, 0): Fraction(1)})

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def tau(self) -> AlgebraElement:
        return AlgebraElement(self, {((0,) * self.n, 1): Fraction(1)})

    def gen(self, name: str) -> AlgebraElement:
        mono = [0] * self.n
        mono[self.index(name)] = 1
        return AlgebraElement(self, {(tuple(mono), 0): Fraction(1)})

    def gens(self) -> dict[str, AlgebraElement]:
        return {g: self.gen(g) for g in self.generators}

    def monomial(self, **exps) -> AlgebraElement:
        mono = [0] * self.n
        for name, e in exps.items():
            mono[self.index(name)] = e
        return AlgebraElement(self, {(tuple(mono), 0): Fraction(1)})

    def free(self) -> dict[str, FreeElement]:
        return {g: FreeElement.generator(self.generators, g, self.order) for g in self.generators}

    def table_entry(self, a: str, b: str) -> AlgebraElement:
        """The stored value of ``[a, b]``."""
        i, j = self.index(a), self.index(b)
        if i == j:
            return self.zero()
        if i > j:
            return AlgebraElement(self, self._bracket(j, i))
        return -AlgebraElement(self, self._bracket(i, j))

    @property
    def commutators(self) -> dict:
        return {
            (self.generators[j], self.generators[i]): AlgebraElement(self, self._bracket(i, j))
            for i, j in itertools.combinations(range(self.n), 2)
        }

    def canonical(self) -> tuple:
        """Hashable summary used to compare specs built by different routes."""
        rows = []
        for i, j in itertools.combinations(range(self.n), 2):
            rows.append(((i, j), tuple(sorted(self._bracket(i, j).items()))))
        return (self.generators, self.order, tuple(rows))

    def at_order(self, order: int) -> AlgebraSpec:
        table = {key: {(m, k): c for (m, k), c in self._bracket(*key).items() if k <= order}
                 for key in itertools.combinations(range(self.n), 2)}
        return AlgebraSpec(self.name, self.generators, order, table)

    def element(self, data) -> AlgebraElement:
        return AlgebraElement(self, data)

    def __repr__(self):
        return f"AlgebraSpec({self.name!r}, {self.generators}, order={self.order})"

    # -- rewriting engine --------------------------------------------------
    def _step(self):
        self._steps += 1
        if self._steps > MAX_REWRITE_STEPS:
            self._steps = 0
            raise RewriteLimitError(f"rewrite step cap exceeded in {self.name}")

    def _gen_mul(self, i: int, b: Monomial, budget: int) -> dict:
        """``g_i * b`` for a PBW monomial ``b``, truncated at ``tau^budget``."""
        j = next((idx for idx, e in enumerate(b) if e), self.n)
        if i <= j:
            m = list(b)
            m[i] += 1
            return {(tuple(m), 0): Fraction(1)}
        key = (i, b, budget)
        cached = self._gen_cache.get(key)
        if cached is not None:
            return cached
        self._step()
        rest = list(b)
        rest[j] -= 1
        rest = tuple(rest)
        acc: dict = {}
        # g_j (g_i rest)
        for (m, k), c in self._gen_mul(i, rest, budget).items():
            for (m2, k2), c2 in self._gen_mul(j, m, budget - k).items():
                accumulate(acc, (m2, k + k2), c * c2)
        # [g_i, g_j] rest
        for (m, k), c in self._bracket(j, i).items():
            if k > budget:
                continue
            for (m2, k2), c2 in self._mono_mul(m, rest, budget - k).items():
                accumulate(acc, (m2, k + k2), c * c2)
        self._gen_cache[key] = acc
        return acc

    def _mono_mul(self, a: Monomial, b: Monomial, budget: int) -> dict:
        last = next((idx for idx in range(self.n - 1, -1, -1) if a[idx]), -1)
        if last < 0:
            return {(b, 0): Fraction(1)}
        first = next((idx for idx, e in enumerate(b) if e), self.n)
        if last <= first:
            return {(tuple(x + y for x, y in zip(a, b)), 0): Fraction(1)}
        key = (a, b, budget)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        head = list(a)
        head[last] -= 1
        head = tuple(head)
        acc: dict = {}
        for (m, k), c in self._gen_mul(last, b, budget).items():
            for (m2, k2), c2 in self._mono_mul(head, m, budget - k).items():
                accumulate(acc, (m2, k + k2), c * c2)
        self._mono_cache[key] = acc
        return acc

    def _mul_data(self, a: dict, b: dict, budget: int) -> dict:
        acc: dict = {}
        for (m1, k1), c1 in a.items():
            if k1 > budget:
                continue
            for (m2, k2), c2 in b.items():
                if k1 + k2 > budget:
                    continue
                c = c1 * c2
                for (m, k), c3 in self._mono_mul(m1, m2, budget - k1 - k2).items():
                    accumulate(acc, (m, k1 + k2 + k), c * c3)
        return acc

    def _word_data(self, word, budget: int) -> dict:
        cur = {((0,) * self.n, 0): Fraction(1)}
        for g in word:
            nxt: dict = {}
            unit = [0] * self.n
            unit[g] = 1
            gm = tuple(unit)
            for (m, k), c in cur.items():
                for (m2, k2), c2 in self._mono_mul(m, gm, budget - k).items():
                    accumulate(nxt, (m2, k + k2), c * c2)
            cur = nxt
        return cur

    def normal_form(self, value) -> AlgebraElement:
        """Normal-order a :class:`FreeElement` (or pass an element through)."""
        if isinstance(value, AlgebraElement):
            return value
        if isinstance(value, (int, Fraction)):
            return self.one() * value
        self._steps = 0
        order = min(value.order, self.order)
        acc: dict = {}
        for (w, k), c in value.data.items():
            if k > order:
                continue
            for (m, k2), c2 in self._word_data(w, order - k).items():
                accumulate(acc, (m, k + k2), c * c2)
        return AlgebraElement(self, acc, order)


# -- operations --------------------------------------------------------------
def multiply(spec: AlgebraSpec, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    spec._steps = 0
    return a * b


def commutator(spec: AlgebraSpec, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return multiply(spec, a, b) - multiply(spec, b, a)


def normal_order(spec: AlgebraSpec, word, coeff=None, strategy: str = "engine") -> AlgebraElement:
    """Straighten a word (sequence of generator names or indices).

    ``strategy`` is ``"engine"`` (memoised PBW multiplication), or
    ``"leftmost"`` / ``"rightmost"`` for literal adjacent-pair rewriting at
    the first/last inversion.  All strategies must agree.
    """
    word = tuple(spec.index(g) if isinstance(g, str) else g for g in word)
    coeff_elem = spec.one() if coeff is None else spec.one() * coeff
    if strategy == "engine":
        spec._steps = 0
        return AlgebraElement(spec, spec._word_data(word, spec.order)) * coeff_elem
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    order = spec.order
    pending: dict = {(word, 0): Fraction(1)}
    done: dict = {}
    steps = 0
    while pending:
        (w, k), c = pending.popitem()
        inversions = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
        if not inversions:
            accumulate(done, (word_mono(w, spec.n), k), c)
            continue
        steps += 1
        if steps > MAX_REWRITE_STEPS:
            raise RewriteLimitError("rewrite step cap exceeded")
        p = inversions[0] if strategy == "leftmost" else inversions[-1]
        hi, lo = w[p], w[p + 1]
        head, tail = w[:p], w[p + 2:]
        accumulate(pending, (head + (lo, hi) + tail, k), c)
        for (m, k2), c2 in spec._bracket(lo, hi).items():
            if k + k2 <= order:
                accumulate(pending, (head + mono_word(m) + tail, k + k2), c * c2)
    return AlgebraElement(spec, done) * coeff_elem


def exp_element(spec: AlgebraSpec, a: AlgebraElement) -> AlgebraElement:
    return a.exp()


def check_jacobi(spec: AlgebraSpec) -> Report:
    """Cyclic Jacobi sum on every generator triple, mod tau^(N+1)."""
    report = Report(f"jacobi {spec.name}")
    g = spec.gens()
    for x, y, z in itertools.combinations(spec.generators, 3):
        X, Y, Z = g[x], g[y], g[z]
        total = (
            commutator(spec, commutator(spec, X, Y), Z)
            + commutator(spec, commutator(spec, Z, X), Y)
            + commutator(spec, commutator(spec, Y, Z), X)
        )
        report.add("jacobi", f"({x},{y},{z})", total.is_zero(), residual=None if total.is_zero() else str(total))
    return report


def relabel_generators(spec: AlgebraSpec, permutation: dict, name: str | None = None) -> AlgebraSpec:
    """Rename generators by a bijection; PBW positions and tables are kept."""
    unknown = set(permutation) - set(spec.generators)
    if unknown:
        raise KeyError(f"unknown generators in relabeling: {sorted(unknown)}")
    full = {g: permutation.get(g, g) for g in spec.generators}
    if len(set(full.values())) != spec.n:
        raise ValueError("relabeling is not a bijection")
    table = {key: spec._bracket(*key) for key in itertools.combinations(range(spec.n), 2)}
    return AlgebraSpec(name or spec.name, [full[g] for g in spec.generators], spec.order, table)


def subalgebra_closure(spec: AlgebraSpec, subset) -> Report:
    """Check that brackets of subset generators stay inside the subset's span."""
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    for s in subset:
        spec.index(s)
    allowed = set(subset)
    report = Report(f"closure {{{','.join(subset)}}} in {spec.name}")
    g = spec.gens()
    ordered = sorted(subset, key=spec.index)
    for a, b in itertools.combinations(ordered, 2):
        value = commutator(spec, g[b], g[a])
        outside = value.support() - allowed
        report.add(
            "closure",
            f"[{b},{a}]",
            not outside,
            residual=None if not outside else str(value),
            detail=None if not outside else f"leaves subset via {sorted(outside)}",
        )
    return report


def specialize_tau_zero(spec: AlgebraSpec, name: str | None = None) -> AlgebraSpec:
    """Drop every positive tau power from the table (the classical limit)."""
    table = {
        key: {(m, k): c for (m, k), c in spec._bracket(*key).items() if k == 0}
        for key in itertools.combinations(range(spec.n), 2)
    }
    return AlgebraSpec(name or f"{spec.name}|tau=0", spec.generators, spec.order, table)
