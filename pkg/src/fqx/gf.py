"""Arithmetic in the finite field GF(p^e) with a canonical element indexing.

An element is a residue polynomial over GF(p) in the power basis
1, y, ..., y^(e-1), stored as a digit tuple ``(d_0, ..., d_{e-1})`` with
``0 <= d_i < p``.  Its index is the base-p value ``sum(d_i * p**i)``,
which makes index 0 the additive identity, index 1 the multiplicative
identity, and fixes a bijection between ``range(q)`` and the field.

For e > 1 the reducing modulus is chosen deterministically: scanning the
monic degree-e polynomials over GF(p) in index order, the first
irreducible one wins.  Field construction is therefore reproducible bit
for bit across runs and platforms.
"""

from __future__ import annotations

import functools

from .errors import FieldMismatchError

# Field orders stay machine-sized.  Exact densities downstream use big
# rationals, but element tables and enumeration assume q fits here.
MAX_FIELD_ORDER = 1 << 20


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test for machine-sized n."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, p prime, or raise ValueError."""
    q = int(q)
    if q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    e = 0
    rest = q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return p, e


# ---------------------------------------------------------------------------
# Dense coefficient vectors over GF(p), used only to pick and apply the
# reducing modulus.  Lists of ints, ascending powers, no trailing zeros.


def _ptrim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _psub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _ptrim(out)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    binv = pow(b[-1], p - 2, p)
    quot = [0] * max(len(r) - db, 0)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = (r[-1] * binv) % p
        quot[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = (r[i + shift] - c * y) % p
        _ptrim(r)
    return quot, r


def _digits(value: int, p: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        value, d = divmod(value, p)
        out.append(d)
    return tuple(out)


def _irreducible_over_prime_field(cs, p):
    """Trial-division irreducibility for a monic coefficient vector."""
    deg = len(cs) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        # monic divisors of degree d, in index order
        for t in range(p**d):
            cand = list(_digits(t, p, d)) + [1]
            if not _pdivmod(cs, cand, p)[1]:
                return False
    return True


def _canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    """First irreducible monic degree-e polynomial over GF(p), by index."""
    for t in range(p**e):
        cand = list(_digits(t, p, e)) + [1]
        if _irreducible_over_prime_field(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible of degree {e} over GF({p})")


# ---------------------------------------------------------------------------


class FieldSpec:
    """An immutable description of GF(p^e).

    Attributes: ``p`` (characteristic), ``e`` (extension degree),
    ``q = p**e`` (order) and ``modulus`` (monic degree-e digit tuple over
    GF(p), or None when e == 1).  Instances come from :func:`make_field`
    and are cached, so equal specs are the same object.
    """

    __slots__ = ("p", "e", "q", "modulus")

    def __init__(self, p: int, e: int):
        p = int(p)
        e = int(e)
        if not is_prime(p):
            raise ValueError("p not prime")
        if e < 1:
            raise ValueError(f"e must be at least 1, got {e}")
        q = p**e
        if q > MAX_FIELD_ORDER:
            raise ValueError(
                f"field order {p}**{e} = {q} exceeds the supported "
                f"maximum {MAX_FIELD_ORDER}"
            )
        self.p = p
        self.e = e
        self.q = q
        self.modulus = _canonical_modulus(p, e) if e > 1 else None

    def element(self, index: int) -> "FieldElement":
        return elem_from_index(self, index)

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.e)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.e - 1))

    def elements(self):
        """Iterate over the whole field in index order."""
        for i in range(self.q):
            yield elem_from_index(self, i)

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return self.p == other.p and self.e == other.e

    def __hash__(self):
        return hash((FieldSpec, self.p, self.e))

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (make_field, (self.p, self.e))


@functools.lru_cache(maxsize=None)
def _make_field_cached(p: int, e: int) -> FieldSpec:
    return FieldSpec(p, e)


def make_field(p: int, e: int = 1) -> FieldSpec:
    """Construct (or fetch the cached) GF(p^e); equal orders share one spec."""
    return _make_field_cached(int(p), int(e))


def field_from_order(q: int) -> FieldSpec:
    """GF(q) for a prime power q."""
    p, e = factor_prime_power(q)
    return make_field(p, e)


def _check_same_spec(a: "FieldElement", b: "FieldElement"):
    if a.spec is not b.spec and a.spec != b.spec:
        raise FieldMismatchError(
            f"elements of {a.spec!r} and {b.spec!r} cannot be combined"
        )


class FieldElement:
    """A single element of GF(p^e), stored as its digit tuple."""

    __slots__ = ("spec", "digits")

    def __init__(self, spec: FieldSpec, digits):
        digits = tuple(int(d) for d in digits)
        if len(digits) != spec.e:
            raise ValueError(
                f"expected {spec.e} digits for {spec!r}, got {len(digits)}"
            )
        p = spec.p
        for d in digits:
            if d < 0 or d >= p:
                raise ValueError(f"digit {d} out of range [0, {p})")
        self.spec = spec
        self.digits = digits

    @property
    def index(self) -> int:
        return elem_to_index(self)

    def __bool__(self):
        return any(self.digits)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.spec == other.spec and self.digits == other.digits

    def __hash__(self):
        return hash((self.spec.p, self.spec.e, self.digits))

    def __repr__(self):
        return f"F{self.spec.q}({self.index})"

    def __reduce__(self):
        return (elem_from_index, (self.spec, self.index))

    def __add__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        _check_same_spec(self, other)
        p = self.spec.p
        return FieldElement(
            self.spec, tuple((x + y) % p for x, y in zip(self.digits, other.digits))
        )

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        _check_same_spec(self, other)
        p = self.spec.p
        return FieldElement(
            self.spec, tuple((x - y) % p for x, y in zip(self.digits, other.digits))
        )

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-x) % p for x in self.digits))

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        _check_same_spec(self, other)
        spec = self.spec
        p = spec.p
        if spec.e == 1:
            return FieldElement(spec, ((self.digits[0] * other.digits[0]) % p,))
        prod = _pmul(list(self.digits), list(other.digits), p)
        _, rem = _pdivmod(prod, list(spec.modulus), p)
        rem = rem + [0] * (spec.e - len(rem))
        return FieldElement(spec, rem)

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroDivisionError("cannot invert the zero element")
        spec = self.spec
        p = spec.p
        if spec.e == 1:
            return FieldElement(spec, (pow(self.digits[0], p - 2, p),))
        # extended Euclid in GF(p)[y] against the modulus
        r0, r1 = list(spec.modulus), _ptrim(list(self.digits))
        s0, s1 = [], [1]
        while r1:
            quot, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(quot, s1, p), p)
        # r0 is a nonzero constant gcd; s0 * self == r0 (mod modulus)
        cinv = pow(r0[0], p - 2, p)
        inv = [(x * cinv) % p for x in s0]
        _, inv = _pdivmod(inv, list(spec.modulus), p)
        inv = inv + [0] * (spec.e - len(inv))
        return FieldElement(spec, inv)

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, exponent: int):
        exponent = int(exponent)
        base = self
        if exponent < 0:
            base = self.inverse()
            exponent = -exponent
        out = self.spec.one()
        while exponent:
            if exponent & 1:
                out = out * base
            base = base * base
            exponent >>= 1
        return out


def elem_from_index(spec: FieldSpec, index: int) -> FieldElement:
    """The element whose base-p digit expansion is ``index``."""
    index = int(index)
    if index < 0 or index >= spec.q:
        raise ValueError(f"element index {index} out of range [0, {spec.q})")
    return FieldElement(spec, _digits(index, spec.p, spec.e))


def elem_to_index(a: FieldElement) -> int:
    value = 0
    for d in reversed(a.digits):
        value = value * a.spec.p + d
    return value
