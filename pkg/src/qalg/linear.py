"""Sparse linear combinations with coefficients truncated in ``tau``.

Every concrete structure in the package (algebra elements, words, tensors,
operators, polynomials) stores ``{(basis_key, tau_exponent): Fraction}`` and
tracks the order up to which it is exact.  Subclasses supply the product.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ScalarSeries, SeriesError, accumulate, as_rational


class TauLinear:
    __slots__ = ("data", "order")

    def __init__(self, data: dict, order: int):
        self.data = {key: c for key, c in data.items() if c and key[1] <= order}
        self.order = order

    # subclasses override ------------------------------------------------
    def _new(self, data: dict, order: int):
        return type(self)(data, order)

    def _check_compatible(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def _unit_key(self):
        raise NotImplementedError

    def _mul_data(self, other, budget: int) -> dict:
        raise NotImplementedError

    # construction helpers ----------------------------------------------
    def one(self, order: int | None = None):
        return self._new({(self._unit_key(), 0): Fraction(1)}, self.order if order is None else order)

    def zero(self, order: int | None = None):
        return self._new({}, self.order if order is None else order)

    # inspection ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.data

    def __bool__(self) -> bool:
        return bool(self.data)

    def __len__(self) -> int:
        return len(self.data)

    def min_tau_order(self) -> int | None:
        return min((k for _, k in self.data), default=None)

    def keys(self) -> set:
        return {b for b, _ in self.data}

    @property
    def terms(self) -> dict:
        """Coefficients grouped per basis key as :class:`ScalarSeries`."""
        grouped: dict = {}
        for (b, k), c in self.data.items():
            grouped.setdefault(b, {})[k] = c
        return {b: ScalarSeries.from_tau_coefficients(cs, self.order) for b, cs in grouped.items()}

    def coefficient(self, key) -> ScalarSeries:
        return ScalarSeries.from_tau_coefficients(
            {k: c for (b, k), c in self.data.items() if b == key}, self.order
        )

    def tau_part(self, k: int):
        """The coefficient of ``tau^k`` as an element with no tau dependence."""
        return self._new({(b, 0): c for (b, j), c in self.data.items() if j == k}, self.order)

    def tau_to_zero(self):
        return self.tau_part(0)

    def truncate(self, order: int):
        return self._new(self.data, min(order, self.order))

    def with_order(self, order: int):
        """Re-tag the precision (only valid when the data is exact to ``order``)."""
        return self._new(self.data, order)

    # linear structure ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return self.one() * as_rational(other)
        if isinstance(other, ScalarSeries):
            return self.one(min(self.order, other.order)) * other
        self._check_compatible(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        acc = {key: c for key, c in self.data.items() if key[1] <= order}
        for key, c in other.data.items():
            if key[1] <= order:
                accumulate(acc, key, c)
        return self._new(acc, order)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return self._new({key: -c for key, c in self.data.items()}, self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def _scale_series(self, s: ScalarSeries):
        if any(e for _, e in s.coefficients):
            raise SeriesError("eps-dependent scalars cannot multiply algebra data")
        order = min(self.order, s.order)
        acc: dict = {}
        for (k2, _), c2 in s.coefficients.items():
            for (b, k), c in self.data.items():
                if k + k2 <= order:
                    accumulate(acc, (b, k + k2), c * c2)
        return self._new(acc, order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            return self._new({key: c * v for key, v in self.data.items()}, self.order)
        if isinstance(other, ScalarSeries):
            return self._scale_series(other)
        self._check_compatible(other)
        budget = min(self.order, other.order)
        return self._new(self._mul_data(other, budget), budget)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ScalarSeries)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / as_rational(other))
        return NotImplemented

    def __pow__(self, power: int):
        if power < 0:
            raise ValueError("negative powers are not defined")
        result = self.one()
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    def mul_tau(self, power: int = 1):
        return self._new({(b, k + power): c for (b, k), c in self.data.items()}, self.order)

    def div_tau(self):
        """Divide by tau; needs a vanishing tau^0 part and costs one order."""
        if self.order == 0:
            raise SeriesError("cannot divide an order-0 quantity by tau")
        if any(k == 0 for _, k in self.data):
            raise SeriesError("not divisible by tau")
        return self._new({(b, k - 1): c for (b, k), c in self.data.items()}, self.order - 1)

    def exp(self):
        """Truncated exponential series; requires every term to carry tau."""
        if any(k == 0 for _, k in self.data):
            raise SeriesError("exp argument has a term of tau-order 0")
        result = self.one()
        term = self.one()
        for j in range(1, self.order + 1):
            term = (term * self) * Fraction(1, j)
            if term.is_zero():
                break
            result = result + term
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if type(other) is not type(self):
            return NotImplemented
        try:
            self._check_compatible(other)
        except TypeError:
            return False
        order = min(self.order, other.order)
        return self.truncate(order).data == other.truncate(order).data

    __hash__ = None
