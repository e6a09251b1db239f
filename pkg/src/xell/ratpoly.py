"""Exact dense univariate polynomials over Q or over nested polynomial rings.

Coefficients are ``gmpy2.mpq`` rationals or, for symbolic parameters,
polynomials in an *inner* variable.  Which variable is inner is decided by a
fixed rank table: the main variables (``x``, ``eta``, ``u``, ...) are outermost,
then ``alpha``/``g``, then ``beta``/``h``.  A polynomial in ``x`` whose
coefficients are polynomials in ``alpha`` whose coefficients are polynomials
in ``beta`` is an element of Q[beta][alpha][x].

All objects are immutable.  Coefficients are kept canonical: an inner
polynomial of degree <= 0 is collapsed to its constant, so equality is plain
structural equality of the coefficient tuples.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "Poly",
    "Q",
    "ZERO_DEGREE",
    "symbol",
    "pochhammer",
    "factorial",
    "sturm_chain",
    "sturm_count_roots",
]

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)

#: Degree reported for the zero polynomial.
ZERO_DEGREE = -math.inf

_VAR_RANK = {"x": 0, "eta": 0, "s": 0, "t": 0, "u": 0, "y": 0, "alpha": 1, "g": 1, "beta": 2, "sigma": 2, "h": 2}
_DEFAULT_RANK = 5


def _rank(var: str) -> int:
    return _VAR_RANK.get(var, _DEFAULT_RANK)


def _canon(c):
    if isinstance(c, Poly):
        if len(c.coeffs) > 1:
            return c
        return c.coeffs[0] if c.coeffs else ZERO
    if type(c) is mpq:
        return c
    return mpq(c)


class Poly:
    """Dense polynomial ``sum(coeffs[k] * var**k)``.

    >>> x = symbol("x")
    >>> (x + 1) * (x - 1)
    Poly([-1, 0, 1], 'x')
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        cs = [_canon(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "var", var)

    @classmethod
    def _raw(cls, cs: list, var: str) -> "Poly":
        # cs must already hold canonical coefficients
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", tuple(cs))
        object.__setattr__(p, "var", var)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs, self.var))

    # ------------------------------------------------------------------ basics
    @property
    def degree(self):
        """Degree in the outer variable; ``ZERO_DEGREE`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def leading(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def __repr__(self) -> str:
        return f"Poly([{', '.join(_fmt(c) for c in self.coeffs)}], {self.var!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            cs = str(c) if not isinstance(c, Poly) else f"({c})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0]) if self.coeffs else hash(ZERO)
        return hash((self.var, self.coeffs))

    # ----------------------------------------------------------- coercion
    def _classify(self, other) -> str:
        """'same', 'scalar' or 'outer' relative to ``self``."""
        if type(other) is mpq:
            return "scalar"
        if isinstance(other, Poly):
            if other.var == self.var:
                return "same"
            ro, rs = _rank(other.var), _rank(self.var)
            if ro > rs:
                return "scalar"
            if ro < rs:
                return "outer"
            raise ValueError(f"variable mismatch: {self.var!r} vs {other.var!r}")
        return "scalar"

    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.var == self.var:
                return self.coeffs == other.coeffs
            if len(self.coeffs) > 1 or len(other.coeffs) > 1:
                return False
            return _canon(self) == _canon(other)
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            if len(self.coeffs) > 1:
                return False
            return (self.coeffs[0] if self.coeffs else ZERO) == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    # --------------------------------------------------------- arithmetic
    def __neg__(self) -> "Poly":
        return Poly._raw([-c for c in self.coeffs], self.var)

    def __pos__(self) -> "Poly":
        return self

    def __add__(self, other):
        kind = self._classify(other)
        if kind == "outer":
            return other.__add__(self)
        if kind == "scalar":
            other = _canon(other)
            if not other:
                return self
            cs = list(self.coeffs) or [ZERO]
            d = cs[0] + other
            if type(d) is not mpq and len(d.coeffs) <= 1:
                d = d.coeffs[0] if d.coeffs else ZERO
            cs[0] = d
            return Poly._raw(cs, self.var)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            d = cs[i] + c
            if type(d) is not mpq and len(d.coeffs) <= 1:
                d = d.coeffs[0] if d.coeffs else ZERO
            cs[i] = d
        return Poly._raw(cs, self.var)

    __radd__ = __add__

    def __sub__(self, other):
        if self._classify(other) == "outer":
            return (-other).__add__(self)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        kind = self._classify(other)
        if kind == "outer":
            return other.__mul__(self)
        if kind == "scalar":
            other = _canon(other)
            if not other:
                return Poly._raw([], self.var)
            if type(other) is mpq:
                if other == 1:
                    return self
                # nonzero rational times canonical coefficient stays canonical
                return Poly._raw([c * other for c in self.coeffs], self.var)
            return Poly._raw([_canon(c * other) for c in self.coeffs], self.var)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([], self.var)
        res = [ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    res[i + j] = res[i + j] + ai * bj
        for k, d in enumerate(res):
            if type(d) is not mpq and len(d.coeffs) <= 1:
                res[k] = d.coeffs[0] if d.coeffs else ZERO
        return Poly._raw(res, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational scalar."""
        if isinstance(other, Poly):
            if other.var == self.var or len(other.coeffs) > 1:
                raise TypeError("use exact_div or divmod for polynomial division")
            other = _canon(other)
        other = mpq(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        inv = 1 / other
        return Poly._raw([_canon(c * inv) for c in self.coeffs], self.var)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly([ONE], self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        """Euclidean division; the divisor's leading coefficient must be rational."""
        if not isinstance(other, Poly) or other.var != self.var:
            raise TypeError("divmod needs a polynomial in the same variable")
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        lc = other.coeffs[-1]
        if isinstance(lc, Poly):
            raise TypeError("leading coefficient of the divisor is not a scalar")
        inv = 1 / lc
        rem = list(self.coeffs)
        dv = len(other.coeffs) - 1
        if len(rem) - 1 < dv:
            return Poly._raw([], self.var), self
        quot = [ZERO] * (len(rem) - dv)
        for k in range(len(rem) - 1 - dv, -1, -1):
            c = _canon(rem[k + dv] * inv)
            quot[k] = c
            if c:
                for j, d in enumerate(other.coeffs):
                    rem[k + j] = _canon(rem[k + j] - c * d)
        return Poly._raw(quot, self.var), Poly._raw(rem[:dv], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises ArithmeticError on a remainder."""
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"division by {other} leaves remainder {r}")
        return q

    # --------------------------------------------------------- calculus etc
    def derivative(self) -> "Poly":
        return Poly._raw(
            [_canon(c * k) for k, c in enumerate(self.coeffs) if k], self.var
        )

    def compose_affine(self, scale, offset) -> "Poly":
        """Return ``p(scale*var + offset)`` expanded exactly."""
        lin = Poly([offset, scale], self.var)
        result = Poly._raw([], self.var)
        for c in reversed(self.coeffs):
            result = result * lin + c
        return result

    def compose(self, q: "Poly") -> "Poly":
        result = Poly._raw([], q.var)
        for c in reversed(self.coeffs):
            result = result * q + c
        return result

    def __call__(self, at):
        """Horner evaluation in the outer variable.

        Exact for rationals (and polynomials), IEEE double for floats and
        numpy arrays.  Float evaluation needs rational coefficients.
        """
        if isinstance(at, float) or type(at).__module__ == "numpy":
            cs = [float(c) for c in self.coeffs]
            acc = 0.0 * at
            for c in reversed(cs):
                acc = acc * at + c
            return acc
        if not isinstance(at, Poly):
            at = mpq(at)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * at + c
        return _canon(acc)

    def subs(self, var: str, value) -> "Poly":
        """Substitute ``value`` for variable ``var`` anywhere in the tower."""
        if var == self.var:
            r = self(value)
            return r if isinstance(r, Poly) else Poly([r], self.var)
        return Poly(
            [c.subs(var, value) if isinstance(c, Poly) else c for c in self.coeffs],
            self.var,
        )

    def map_coeffs(self, fn) -> "Poly":
        return Poly([fn(c) for c in self.coeffs], self.var)

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def is_rational(self) -> bool:
        return not any(isinstance(c, Poly) for c in self.coeffs)

    def primitive(self) -> "Poly":
        """Positive rational multiple with coprime integer coefficients."""
        if not self.coeffs or not self.is_rational():
            return self
        den = 1
        for c in self.coeffs:
            den = math.lcm(den, int(c.denominator))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return Poly._raw([mpq(v // g) for v in ints], self.var)

    def max_abs_coeff(self) -> float:
        """Largest |coefficient| over the whole tower, as a float."""
        m = 0.0
        for c in self.coeffs:
            m = max(m, c.max_abs_coeff() if isinstance(c, Poly) else abs(float(c)))
        return m

    def total_terms(self) -> int:
        return sum(c.total_terms() if isinstance(c, Poly) else 1 for c in self.coeffs if c)


def _fmt(c) -> str:
    return repr(c) if isinstance(c, Poly) else str(c)


def symbol(var: str) -> Poly:
    """The polynomial ``var`` itself."""
    return Poly([ZERO, ONE], var)


def factorial(n: int) -> mpq:
    return mpq(math.factorial(n))


def pochhammer(a, k: int):
    """Rising factorial ``a (a+1) ... (a+k-1)``; 1 for ``k == 0``."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0")
    result = ONE
    for i in range(k):
        result = result * (a + i)
    return _canon(result)


# ------------------------------------------------------------------ Sturm
def _sign(v) -> int:
    return (v > 0) - (v < 0)


def sturm_chain(p: Poly) -> list[Poly]:
    """Sturm sequence of ``p``, each member scaled to a primitive integer polynomial.

    Positive rescaling keeps every sign pattern intact.
    """
    if not p.is_rational():
        raise TypeError("Sturm chains need rational coefficients")
    chain = [p.primitive(), p.derivative().primitive()]
    while chain[-1]:
        r = chain[-2] % chain[-1]
        chain.append((-r).primitive())
    return chain[:-1] if not chain[-1] else chain


def _sign_at(q: Poly, at) -> int:
    if at == math.inf:
        return _sign(q.leading())
    if at == -math.inf:
        return _sign(q.leading()) * (-1 if q.degree % 2 else 1)
    return _sign(q(at))


def _variations(chain: Sequence[Poly], at) -> int:
    signs = [s for s in (_sign_at(q, at) for q in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count_roots(p: Poly, lo=-math.inf, hi=math.inf) -> int:
    """Number of distinct real roots of ``p`` in the open interval ``(lo, hi)``.

    Endpoints may be ``±math.inf``; finite endpoints are taken exactly (floats
    are converted to their exact binary value).
    """
    if not p:
        raise ValueError("the zero polynomial has no finite root count")
    if not p.is_rational():
        raise TypeError("root counting needs rational coefficients")
    lo = lo if math.isinf(lo) else mpq(lo)
    hi = hi if math.isinf(hi) else mpq(hi)
    if not lo < hi:
        return 0
    # deflate endpoint roots so the plain V(lo) - V(hi) count applies
    for end in (lo, hi):
        if not math.isinf(end):
            lin = Poly([-end, ONE], p.var)
            while p.degree > 0 and not p(end):
                p = p.exact_div(lin)
    if p.degree < 1:
        return 0
    chain = sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)
