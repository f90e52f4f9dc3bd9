"""Index-level predicate evaluators for censuses and sampling.

Exhaustive censuses and Monte Carlo runs iterate over tuples of entry
indices (row-major); routing every tuple through PolyMatrix would
dominate the runtime.  The compiler here returns a closure that answers
the predicate directly on an index tuple, after per-space
precomputation: cached polynomial objects, residue tables modulo each
irreducible, multiplication tables for small quotient fields, and (for
q = 2) the identification of polynomial indices with bitmasks, where
gcd is a handful of shifts and xors.

Every specialized path is cross-checked against the matrix-route
predicate in the test suite; anything not specialized falls back to
that route entry by entry.
"""

from __future__ import annotations

from itertools import combinations

from .gf import FieldSpec
from .matrix import (
    IrreducibleSet,
    PolyMatrix,
    QuotientField,
    divides,
    is_coprime_to,
    is_unimodular,
    minors_gcd,
    rank_over_field,
)
from .poly import Poly, poly_from_index, poly_to_index

# Quotient fields up to this order get dense multiplication tables;
# larger ones fall back to object arithmetic.
_TABLE_ORDER_CAP = 512


def compile_index_predicate(
    spec: FieldSpec, k: int, n: int, max_index: int, kind: str, payload
):
    """Build ``tester(indices) -> bool`` for tuples of k*n entry indices.

    ``kind`` is one of "unimodular", "coprime" (payload: IrreducibleSet)
    or "divisible" (payload: a monic irreducible Poly); ``max_index``
    is the largest entry index that will ever be passed in.
    """
    if kind == "unimodular":
        return _compile_unimodular(spec, k, n, max_index)
    if kind == "coprime":
        return _compile_coprime(spec, k, n, max_index, payload)
    if kind == "divisible":
        return _compile_divisible(spec, k, n, max_index, payload)
    raise ValueError(f"unknown predicate kind {kind!r}")


# ---------------------------------------------------------------------------
# GF(2): a polynomial index *is* the bitmask of its coefficients.


def _gcd_bits(a: int, b: int) -> int:
    while b:
        la, lb = a.bit_length(), b.bit_length()
        while la >= lb and a:
            a ^= b << (la - lb)
            la = a.bit_length()
        a, b = b, a
    return a


def _mul_bits(a: int, b: int) -> int:
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def _unimodular_bits_one_row(n: int):
    def tester(indices):
        g = indices[0]
        for v in indices[1:]:
            g = _gcd_bits(g, v)
            if g == 1:
                return True
        return g == 1

    return tester


def _unimodular_bits_two_rows(n: int):
    pairs = tuple(combinations(range(n), 2))

    def tester(indices):
        top = indices[:n]
        bottom = indices[n:]
        g = 0
        for i, j in pairs:
            det = _mul_bits(top[i], bottom[j]) ^ _mul_bits(top[j], bottom[i])
            g = _gcd_bits(g, det)
            if g == 1:
                return True
        return g == 1

    return tester


# ---------------------------------------------------------------------------
# Prime q: polynomials as trimmed coefficient tuples mod p.


def _prime_rep_table(p: int, max_index: int):
    reps = []
    for value in range(max_index + 1):
        digits = []
        v = value
        while v:
            v, d = divmod(v, p)
            digits.append(d)
        reps.append(tuple(digits))
    return reps


def _mod_prime(a, b, p):
    # remainder of a by b, coefficient tuples, b nonzero
    r = list(a)
    db = len(b) - 1
    binv = pow(b[-1], p - 2, p)
    while len(r) - 1 >= db and r:
        if not r[-1]:
            r.pop()
            continue
        c = (r[-1] * binv) % p
        shift = len(r) - 1 - db
        for i, y in enumerate(b):
            if y:
                r[i + shift] = (r[i + shift] - c * y) % p
        r.pop()
    while r and not r[-1]:
        r.pop()
    return tuple(r)


def _gcd_prime(a, b, p):
    while b:
        a, b = b, _mod_prime(a, b, p)
    return a


def _mul_prime(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def _sub_prime(a, b, p):
    out = list(a) + [0] * max(len(b) - len(a), 0)
    for i, y in enumerate(b):
        out[i] = (out[i] - y) % p
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def _unimodular_prime_one_row(p: int, reps):
    def tester(indices):
        g = reps[indices[0]]
        for v in indices[1:]:
            g = _gcd_prime(g, reps[v], p)
            if len(g) == 1:
                return True
        return len(g) == 1

    return tester


def _unimodular_prime_two_rows(p: int, n: int, reps):
    pairs = tuple(combinations(range(n), 2))

    def tester(indices):
        top = [reps[v] for v in indices[:n]]
        bottom = [reps[v] for v in indices[n:]]
        g = ()
        for i, j in pairs:
            det = _sub_prime(
                _mul_prime(top[i], bottom[j], p), _mul_prime(top[j], bottom[i], p), p
            )
            g = _gcd_prime(g, det, p)
            if len(g) == 1:
                return True
        return len(g) == 1

    return tester


def _compile_unimodular(spec, k, n, max_index):
    if spec.q == 2:
        if k == 1:
            return _unimodular_bits_one_row(n)
        if k == 2:
            return _unimodular_bits_two_rows(n)
    if spec.e == 1:
        reps = _prime_rep_table(spec.p, max_index)
        if k == 1:
            return _unimodular_prime_one_row(spec.p, reps)
        if k == 2:
            return _unimodular_prime_two_rows(spec.p, n, reps)
    return _matrix_route(spec, k, n, max_index, "unimodular", None)


# ---------------------------------------------------------------------------
# Full rank modulo one irreducible, via residue and field tables.


def _full_rank_mod(spec, k, n, max_index, modulus: Poly):
    field = QuotientField(modulus)
    residue = [
        poly_to_index(poly_from_index(spec, value) % modulus)
        for value in range(max_index + 1)
    ]
    if k == 1:
        def tester(indices):
            return any(residue[v] for v in indices)

        return tester

    if field.order <= _TABLE_ORDER_CAP:
        elems = [field.from_index(i) for i in range(field.order)]
        mul = [
            [(x * y).index for y in elems] for x in elems
        ]
        if k == 2:
            pairs = tuple(combinations(range(n), 2))

            def tester(indices):
                top = [residue[v] for v in indices[:n]]
                bottom = [residue[v] for v in indices[n:]]
                for i, j in pairs:
                    if mul[top[i]][bottom[j]] != mul[top[j]][bottom[i]]:
                        return True
                return False

            return tester

        sub = [
            [(x - y).index for y in elems] for x in elems
        ]
        inv = [0] + [(elems[i].inverse()).index for i in range(1, field.order)]

        def tester(indices):
            rows = [
                [residue[v] for v in indices[r * n : (r + 1) * n]] for r in range(k)
            ]
            rank = 0
            for col in range(n):
                pivot = None
                for r in range(rank, k):
                    if rows[r][col]:
                        pivot = r
                        break
                if pivot is None:
                    continue
                rows[rank], rows[pivot] = rows[pivot], rows[rank]
                pinv = inv[rows[rank][col]]
                top_row = rows[rank]
                for r in range(rank + 1, k):
                    if rows[r][col]:
                        factor = mul[rows[r][col]][pinv]
                        frow = mul[factor]
                        rows[r] = [
                            sub[x][frow[y]] for x, y in zip(rows[r], top_row)
                        ]
                rank += 1
                if rank == k:
                    return True
            return False

        return tester

    # large quotient field: per-tuple object arithmetic
    residue_elems = [field.from_index(i) for i in residue]

    def tester(indices):
        rows = [
            [residue_elems[v] for v in indices[r * n : (r + 1) * n]]
            for r in range(k)
        ]
        return rank_over_field(rows) == k

    return tester


def _compile_coprime(spec, k, n, max_index, primes: IrreducibleSet):
    testers = [_full_rank_mod(spec, k, n, max_index, f) for f in primes]
    if not testers:
        # coprime to nothing still requires a nonzero minor gcd
        return _compile_unimodular_rank_only(spec, k, n, max_index)

    def tester(indices):
        for sub in testers:
            if not sub(indices):
                return False
        return True

    return tester


def _compile_unimodular_rank_only(spec, k, n, max_index):
    polys = [poly_from_index(spec, value) for value in range(max_index + 1)]

    def tester(indices):
        grid = [
            [polys[v] for v in indices[r * n : (r + 1) * n]] for r in range(k)
        ]
        return not minors_gcd(PolyMatrix(spec, grid)).is_zero

    return tester


def _compile_divisible(spec, k, n, max_index, modulus: Poly):
    full_rank = _full_rank_mod(spec, k, n, max_index, modulus)

    def tester(indices):
        return not full_rank(indices)

    return tester


# ---------------------------------------------------------------------------
# Fallback: build the matrix and ask the reference predicates.


def matrix_predicate(a: PolyMatrix, kind: str, payload) -> bool:
    """Reference evaluation of a predicate on a single matrix."""
    if kind == "unimodular":
        return is_unimodular(a)
    if kind == "coprime":
        return is_coprime_to(a, payload)
    if kind == "divisible":
        return divides(payload, minors_gcd(a))
    raise ValueError(f"unknown predicate kind {kind!r}")


def _matrix_route(spec, k, n, max_index, kind, payload):
    polys = [poly_from_index(spec, value) for value in range(max_index + 1)]

    def tester(indices):
        grid = [
            [polys[v] for v in indices[r * n : (r + 1) * n]] for r in range(k)
        ]
        return matrix_predicate(PolyMatrix(spec, grid), kind, payload)

    return tester
