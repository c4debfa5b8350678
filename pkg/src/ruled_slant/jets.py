"""Forward-mode Taylor arithmetic on univariate derivative jets.

A :class:`Jet` holds the value and the first few derivatives of a scalar
quantity with respect to one real parameter, evaluated at a single point.
Entries are derivative *values* (not Taylor coefficients); the ``i!``
conversion lives inside the arithmetic.  :class:`VecJet` bundles three jets
into a 3-vector quantity and adds the usual vector algebra (dot, cross,
norm, normalization), all propagated through the truncated series.

Binary operations truncate to the shorter operand, so mixed-order
expressions degrade gracefully instead of fabricating derivatives.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

# Highest derivative order carried by any jet.  Third arc-length derivatives
# of frame fields that already embed two director derivatives need five
# parameter derivatives, so the cap is 5.
MAX_ORDER = 5

_FACT = tuple(float(math.factorial(i)) for i in range(MAX_ORDER + 1))


class JetDomainError(ValueError):
    """Evaluation left the domain of an elementary operation."""


def _check_order(order: int) -> None:
    if not isinstance(order, int) or order < 0 or order > MAX_ORDER:
        raise ValueError(f"jet order must be an integer in [0, {MAX_ORDER}], got {order!r}")


class Jet:
    """Value plus derivatives: ``d[i]`` is the i-th derivative at the point."""

    __slots__ = ("d",)

    def __init__(self, d: Iterable[float]):
        vals = tuple(float(x) for x in d)
        if not vals:
            raise ValueError("jet needs at least the value entry")
        if len(vals) - 1 > MAX_ORDER:
            raise ValueError(f"jet order {len(vals) - 1} exceeds maximum {MAX_ORDER}")
        for x in vals:
            if not math.isfinite(x):
                raise JetDomainError("non-finite jet entry")
        self.d = vals

    @classmethod
    def constant(cls, value: float, order: int) -> "Jet":
        _check_order(order)
        return cls((float(value),) + (0.0,) * order)

    @classmethod
    def variable(cls, value: float, order: int) -> "Jet":
        """Jet of the identity map t -> t at ``value``."""
        _check_order(order)
        d = [float(value)] + [0.0] * order
        if order >= 1:
            d[1] = 1.0
        return cls(d)

    @property
    def order(self) -> int:
        return len(self.d) - 1

    @property
    def value(self) -> float:
        return self.d[0]

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.d[: order + 1])

    def shift(self) -> "Jet":
        """Jet of the derivative: drops one order."""
        if self.order < 1:
            raise ValueError("cannot shift an order-0 jet")
        return Jet(self.d[1:])

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(float(other), self.order)

    def __add__(self, other) -> "Jet":
        o = self._coerce(other)
        n = min(self.order, o.order)
        return Jet(tuple(self.d[i] + o.d[i] for i in range(n + 1)))

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        o = self._coerce(other)
        n = min(self.order, o.order)
        return Jet(tuple(self.d[i] - o.d[i] for i in range(n + 1)))

    def __rsub__(self, other) -> "Jet":
        return self._coerce(other) - self

    def __neg__(self) -> "Jet":
        return Jet(tuple(-x for x in self.d))

    def __mul__(self, other) -> "Jet":
        o = self._coerce(other)
        n = min(self.order, o.order)
        a = _taylor(self.d, n)
        b = _taylor(o.d, n)
        c = [math.fsum(a[j] * b[k - j] for j in range(k + 1)) for k in range(n + 1)]
        return Jet(_derivs(c))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        o = self._coerce(other)
        n = min(self.order, o.order)
        a = _taylor(self.d, n)
        b = _taylor(o.d, n)
        if b[0] == 0.0:
            raise JetDomainError("division by a jet with zero value")
        c = [0.0] * (n + 1)
        for k in range(n + 1):
            acc = a[k] - math.fsum(c[j] * b[k - j] for j in range(k))
            c[k] = acc / b[0]
        return Jet(_derivs(c))

    def __rtruediv__(self, other) -> "Jet":
        return self._coerce(other) / self

    def __pow__(self, exponent) -> "Jet":
        if isinstance(exponent, int) or (isinstance(exponent, float) and exponent.is_integer()):
            return _pow_int(self, int(exponent))
        if self.d[0] <= 0.0:
            raise JetDomainError("non-integer power of a non-positive base")
        return exp(log(self) * float(exponent))

    def __repr__(self) -> str:
        return f"Jet({list(self.d)!r})"


def _taylor(d: Sequence[float], n: int) -> list:
    return [d[i] / _FACT[i] for i in range(n + 1)]


def _derivs(c: Sequence[float]) -> list:
    return [c[i] * _FACT[i] for i in range(len(c))]


def _pow_int(x: Jet, n: int) -> Jet:
    if n < 0:
        return Jet.constant(1.0, x.order) / _pow_int(x, -n)
    result = Jet.constant(1.0, x.order)
    base = x
    while n:
        if n & 1:
            result = result * base
        base = base * base if n > 1 else base
        n >>= 1
    return result


# -- elementary functions (standard truncated-series recurrences) ----------


def exp(x: Jet) -> Jet:
    n = x.order
    a = _taylor(x.d, n)
    e = [math.exp(a[0])] + [0.0] * n
    for k in range(1, n + 1):
        e[k] = math.fsum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
    return Jet(_derivs(e))


def log(x: Jet) -> Jet:
    if x.d[0] <= 0.0:
        raise JetDomainError("log of a non-positive value")
    n = x.order
    a = _taylor(x.d, n)
    l = [math.log(a[0])] + [0.0] * n
    for k in range(1, n + 1):
        acc = a[k] - math.fsum(j * l[j] * a[k - j] for j in range(1, k)) / k
        l[k] = acc / a[0]
    return Jet(_derivs(l))


def sqrt(x: Jet) -> Jet:
    if x.d[0] < 0.0:
        raise JetDomainError("sqrt of a negative value")
    n = x.order
    if x.d[0] == 0.0:
        if n == 0:
            return Jet((0.0,))
        raise JetDomainError("sqrt is not differentiable at zero")
    a = _taylor(x.d, n)
    s = [math.sqrt(a[0])] + [0.0] * n
    for k in range(1, n + 1):
        acc = a[k] - math.fsum(s[j] * s[k - j] for j in range(1, k))
        s[k] = acc / (2.0 * s[0])
    return Jet(_derivs(s))


def _sin_cos(x: Jet) -> tuple:
    n = x.order
    a = _taylor(x.d, n)
    s = [math.sin(a[0])] + [0.0] * n
    c = [math.cos(a[0])] + [0.0] * n
    for k in range(1, n + 1):
        s[k] = math.fsum(j * a[j] * c[k - j] for j in range(1, k + 1)) / k
        c[k] = -math.fsum(j * a[j] * s[k - j] for j in range(1, k + 1)) / k
    return Jet(_derivs(s)), Jet(_derivs(c))


def sin(x: Jet) -> Jet:
    return _sin_cos(x)[0]


def cos(x: Jet) -> Jet:
    return _sin_cos(x)[1]


def tan(x: Jet) -> Jet:
    s, c = _sin_cos(x)
    if c.d[0] == 0.0:
        raise JetDomainError("tan at a pole of the tangent")
    return s / c


# Below this the sign of the value is ambiguous at derivative order >= 1.
ABS_KINK_EPS = 1e-14


def absolute(x: Jet) -> Jet:
    if x.order >= 1 and abs(x.d[0]) < ABS_KINK_EPS:
        raise JetDomainError("abs is not differentiable at zero")
    if x.d[0] < 0.0:
        return -x
    return Jet(tuple(abs(v) if i == 0 else v for i, v in enumerate(x.d)))


class VecJet:
    """Three equal-order jets for the coordinates of a 3-vector quantity."""

    __slots__ = ("x", "y", "z")

    def __init__(self, x: Jet, y: Jet, z: Jet):
        n = min(x.order, y.order, z.order)
        self.x = x.truncate(n)
        self.y = y.truncate(n)
        self.z = z.truncate(n)

    @classmethod
    def constant(cls, vec, order: int) -> "VecJet":
        return cls(*(Jet.constant(v, order) for v in vec))

    @property
    def order(self) -> int:
        return self.x.order

    @property
    def value(self) -> np.ndarray:
        return np.array([self.x.d[0], self.y.d[0], self.z.d[0]])

    def deriv(self, i: int) -> np.ndarray:
        """i-th derivative of each coordinate as a plain vector."""
        return np.array([self.x.d[i], self.y.d[i], self.z.d[i]])

    def components(self) -> tuple:
        return (self.x, self.y, self.z)

    def truncate(self, order: int) -> "VecJet":
        return VecJet(self.x.truncate(order), self.y.truncate(order), self.z.truncate(order))

    def shift(self) -> "VecJet":
        return VecJet(self.x.shift(), self.y.shift(), self.z.shift())

    def __add__(self, other: "VecJet") -> "VecJet":
        return VecJet(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "VecJet") -> "VecJet":
        return VecJet(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "VecJet":
        return VecJet(-self.x, -self.y, -self.z)

    def __mul__(self, scalar) -> "VecJet":
        return VecJet(self.x * scalar, self.y * scalar, self.z * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "VecJet":
        return VecJet(self.x / scalar, self.y / scalar, self.z / scalar)

    def dot(self, other: "VecJet") -> Jet:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "VecJet") -> "VecJet":
        return VecJet(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> Jet:
        return sqrt(self.dot(self))

    def normalized(self) -> "VecJet":
        return self / self.norm()

    def __repr__(self) -> str:
        return f"VecJet({self.x!r}, {self.y!r}, {self.z!r})"
