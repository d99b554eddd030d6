"""Exact coefficient arithmetic.

Coefficients are :class:`fractions.Fraction`.  A :class:`ScalarSeries` is a
polynomial in the deformation parameter ``tau`` truncated above a fixed
order ``N``, with integer (Laurent) exponents in the contraction parameter
``eps``.  The symbol ``z`` used for the deformation parameter in older
literature is the same object as ``tau`` here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

Rational = Fraction

DEFAULT_ORDER = 6


class SeriesError(ValueError):
    """Raised on an invalid operation on truncated series."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def accumulate(acc: dict, key, value: Fraction) -> None:
    """Add ``value`` into ``acc[key]``, dropping the entry when it cancels."""
    total = acc.get(key, 0) + value
    if total:
        acc[key] = total
    else:
        acc.pop(key, None)


class ScalarSeries:
    """Truncated series in ``tau`` (exponents 0..order) and Laurent in ``eps``.

    Coefficients are keyed by ``(tau_exponent, eps_exponent)``.  Instances are
    immutable; all arithmetic returns new objects.
    """

    __slots__ = ("_coeffs", "_order")

    def __init__(self, coeffs=None, order: int = DEFAULT_ORDER):
        if order < 0:
            raise SeriesError("truncation order must be non-negative")
        clean = {}
        for (k, e), c in (coeffs or {}).items():
            c = as_rational(c)
            if k < 0:
                raise SeriesError("tau exponents must be non-negative")
            if c and k <= order:
                clean[(int(k), int(e))] = c
        self._coeffs = clean
        self._order = order

    # -- construction -------------------------------------------------
    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER) -> ScalarSeries:
        return cls({(0, 0): value}, order)

    @classmethod
    def tau(cls, power: int = 1, order: int = DEFAULT_ORDER) -> ScalarSeries:
        return cls({(power, 0): 1}, order)

    @classmethod
    def eps(cls, power: int = 1, order: int = DEFAULT_ORDER) -> ScalarSeries:
        return cls({(0, power): 1}, order)

    @classmethod
    def from_tau_coefficients(cls, coeffs: dict, order: int) -> ScalarSeries:
        return cls({(k, 0): c for k, c in coeffs.items()}, order)

    # -- inspection ---------------------------------------------------
    @property
    def order(self) -> int:
        return self._order

    @property
    def coefficients(self) -> dict:
        return dict(self._coeffs)

    def __getitem__(self, key) -> Fraction:
        if isinstance(key, int):
            key = (key, 0)
        return self._coeffs.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def min_tau_order(self) -> int | None:
        if not self._coeffs:
            return None
        return min(k for k, _ in self._coeffs)

    def constant_term(self) -> Fraction:
        return sum((c for (k, _), c in self._coeffs.items() if k == 0), Fraction(0))

    def truncate(self, order: int) -> ScalarSeries:
        return ScalarSeries(self._coeffs, min(order, self._order))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ScalarSeries.constant(other, self._order)
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        return self._order == other._order and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self._order, frozenset(self._coeffs.items())))

    # -- ring operations ----------------------------------------------
    def _coerce(self, other) -> ScalarSeries:
        if isinstance(other, ScalarSeries):
            if other._order != self._order:
                raise SeriesError(
                    f"truncation order mismatch: {self._order} vs {other._order}"
                )
            return other
        return ScalarSeries.constant(as_rational(other), self._order)

    def __add__(self, other) -> ScalarSeries:
        other = self._coerce(other)
        acc = dict(self._coeffs)
        for key, c in other._coeffs.items():
            accumulate(acc, key, c)
        return ScalarSeries(acc, self._order)

    __radd__ = __add__

    def __neg__(self) -> ScalarSeries:
        return ScalarSeries({key: -c for key, c in self._coeffs.items()}, self._order)

    def __sub__(self, other) -> ScalarSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> ScalarSeries:
        return self._coerce(other) - self

    def __mul__(self, other) -> ScalarSeries:
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            return ScalarSeries({key: c * v for key, v in self._coeffs.items()}, self._order)
        other = self._coerce(other)
        acc: dict = {}
        n = self._order
        for (k1, e1), c1 in self._coeffs.items():
            for (k2, e2), c2 in other._coeffs.items():
                if k1 + k2 <= n:
                    accumulate(acc, (k1 + k2, e1 + e2), c1 * c2)
        return ScalarSeries(acc, n)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> ScalarSeries:
        if power < 0:
            raise SeriesError("negative powers are not defined")
        result = ScalarSeries.constant(1, self._order)
        for _ in range(power):
            result = result * self
        return result

    # -- transcendental / structural ----------------------------------
    def exp(self) -> ScalarSeries:
        """Truncated exponential; requires a vanishing tau^0 part."""
        if any(k == 0 for k, _ in self._coeffs):
            raise SeriesError("exp argument has a nonzero constant tau term")
        result = ScalarSeries.constant(1, self._order)
        term = ScalarSeries.constant(1, self._order)
        for j in range(1, self._order + 1):
            term = term * self * Fraction(1, j)
            if term.is_zero():
                break
            result = result + term
        return result

    def div_tau(self) -> ScalarSeries:
        if self._order == 0:
            raise SeriesError("cannot divide an order-0 series by tau")
        if any(k == 0 for k, _ in self._coeffs):
            raise SeriesError("not divisible by tau")
        return ScalarSeries(
            {(k - 1, e): c for (k, e), c in self._coeffs.items()}, self._order - 1
        )

    def tau_to_zero(self) -> ScalarSeries:
        return ScalarSeries({key: c for key, c in self._coeffs.items() if key[0] == 0}, self._order)

    def eps_limit(self) -> EpsLimit:
        divergent = {key: c for key, c in self._coeffs.items() if key[1] < 0}
        if divergent:
            return EpsLimit(None, divergent)
        finite = {key: c for key, c in self._coeffs.items() if key[1] == 0}
        return EpsLimit(ScalarSeries(finite, self._order), {})

    # -- display --------------------------------------------------------
    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for (k, e), c in sorted(self._coeffs.items()):
            factors = []
            if k:
                factors.append("tau" if k == 1 else f"tau^{k}")
            if e:
                factors.append("eps" if e == 1 else f"eps^{e}")
            parts.append(join_term(c, factors))
        return join_terms(parts)

    def __repr__(self) -> str:
        return f"ScalarSeries({self}, order={self._order})"


@dataclass(frozen=True)
class EpsLimit:
    """Outcome of ``eps -> 0``: either a finite value or the divergent terms."""

    value: ScalarSeries | None
    divergent: dict = field(default_factory=dict)

    @property
    def diverges(self) -> bool:
        return bool(self.divergent)


def series_add(a: ScalarSeries, b: ScalarSeries) -> ScalarSeries:
    return a + b


def series_mul(a: ScalarSeries, b: ScalarSeries) -> ScalarSeries:
    return a * b


def series_exp(a: ScalarSeries) -> ScalarSeries:
    return a.exp()


def series_div_tau(a: ScalarSeries) -> ScalarSeries:
    return a.div_tau()


def eps_limit(a: ScalarSeries) -> EpsLimit:
    return a.eps_limit()


def exp_coefficients(order: int, scale: Fraction = Fraction(1)) -> list[Fraction]:
    """Taylor coefficients ``scale^k / k!`` for ``k = 0..order``."""
    return [Fraction(scale) ** k / factorial(k) for k in range(order + 1)]


# -- shared text rendering --------------------------------------------------
def join_term(coeff: Fraction, factors: list[str], sep: str = " ") -> str:
    """Render ``coeff * factors`` with the sign kept in front."""
    sign = "-" if coeff < 0 else ""
    mag = abs(coeff)
    if not factors:
        return sign + format_rational(mag)
    if mag == 1:
        return sign + sep.join(factors)
    return sign + format_rational(mag) + sep + sep.join(factors)


def join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out
