"""Finite commutative local rings with canonical integer encodings.

Every ring element is an integer in ``range(ring.size)``.  The encoding is the
mixed-radix expansion of the coefficient vector, so ``0`` is zero and ``1`` is
the unit element for every kind of ring.  All enumerations derive from this
order.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .errors import MalformedSpec, NotIrreducible, NotLocal, TooLarge

DEFAULT_MAX_SIZE = 4096
TABLE_LIMIT = 256  # precompute full add/mul tables up to this many elements


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_power(n):
    """Return (p, k) with n = p**k, or None."""
    if n < 2:
        return None
    p = 2
    while p * p <= n and n % p:
        p += 1
    if n % p:
        p = n
    k, m = 0, n
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


class LocalRing:
    """Base class.  Subclasses provide ``_add``, ``_mul``, ``_neg`` and
    ``_residue`` on raw encodings plus the additive structure."""

    kind = "abstract"

    def __init__(self, spec, size, p):
        self.spec = spec
        self.size = size
        self.p = p  # residue characteristic
        self._add_table = None
        self._mul_table = None

    def __repr__(self):
        return f"LocalRing({self.spec!r})"

    def __eq__(self, other):
        return isinstance(other, LocalRing) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def _build_tables(self):
        if self.size <= TABLE_LIMIT:
            n = self.size
            self._add_table = [[self._add(x, y) for y in range(n)] for x in range(n)]
            self._mul_table = [[self._mul(x, y) for y in range(n)] for x in range(n)]

    # arithmetic -----------------------------------------------------------
    def add(self, x, y):
        if self._add_table is not None:
            return self._add_table[x][y]
        return self._add(x, y)

    def mul(self, x, y):
        if self._mul_table is not None:
            return self._mul_table[x][y]
        return self._mul(x, y)

    def neg(self, x):
        return self._neg(x)

    def sub(self, x, y):
        return self.add(x, self._neg(y))

    def from_int(self, n):
        """Image of the integer n under Z -> A."""
        term, acc, m = 1, 0, abs(n)
        # double-and-add keeps this cheap for large n
        while m:
            if m & 1:
                acc = self.add(acc, term)
            term = self.add(term, term)
            m >>= 1
        return self._neg(acc) if n < 0 else acc

    def pow(self, x, e):
        if e < 0:
            x, e = self.inv(x), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            e >>= 1
        return r

    # structure --------------------------------------------------------------
    def elements(self):
        return range(self.size)

    def residue(self, x):
        return self._residue(x)

    def is_unit(self, x):
        return self._residue(x) != 0

    @property
    def is_field(self):
        return self.residue_field.size == self.size

    @cached_property
    def units(self):
        return [x for x in range(self.size) if self.is_unit(x)]

    @cached_property
    def nonunits(self):
        return [x for x in range(self.size) if not self.is_unit(x)]

    @cached_property
    def unit_index(self):
        return {u: i for i, u in enumerate(self.units)}

    @cached_property
    def unit_group(self):
        return UnitGroup(self)

    def inv(self, x):
        ug = self.unit_group
        return ug.inverse[x]

    @cached_property
    def minus_one(self):
        return self._neg(1)

    @cached_property
    def residue_map(self):
        return ResidueMap(self)

    @cached_property
    def additive_generators(self):
        """Elements e_j whose coordinate vectors are the standard basis."""
        orders = self.additive_orders
        gens = []
        radix = 1
        for o in orders:
            gens.append(radix)
            radix *= o
        return gens

    def additive_coords(self, x):
        out = []
        for o in self.additive_orders:
            out.append(x % o)
            x //= o
        return tuple(out)

    @cached_property
    def maximal_ideal_generators(self):
        """A minimal-by-scan additive generating set of the maximal ideal."""
        span = {0}
        gens = []
        for x in self.nonunits:
            if x in span:
                continue
            gens.append(x)
            frontier = list(span)
            new = set(span)
            for y in frontier:
                z = y
                while True:
                    z = self.add(z, x)
                    if z in new:
                        break
                    new.add(z)
            span = new
        return gens

    def verify_local(self):
        """Exhaustive check that the non-units form an ideal and that the
        residue map is a surjective ring homomorphism with that kernel."""
        nu = set(self.nonunits)
        for x in nu:
            for y in nu:
                if self.add(x, y) not in nu:
                    return False
            for y in range(self.size):
                if self.mul(x, y) not in nu:
                    return False
        return self.residue_map.verify()


class ZMod(LocalRing):
    """Z/p^k; the prime field F_p is the case k = 1."""

    def __init__(self, p, k, spec=None):
        self.n = p**k
        self.k = k
        self.kind = "prime-field" if k == 1 else "integers-mod"
        super().__init__(spec or (f"F{p}" if k == 1 else f"Z/{p}^{k}"), self.n, p)
        self._build_tables()

    def _add(self, x, y):
        return (x + y) % self.n

    def _mul(self, x, y):
        return (x * y) % self.n

    def _neg(self, x):
        return (-x) % self.n

    def _residue(self, x):
        return x % self.p

    @cached_property
    def residue_field(self):
        return self if self.k == 1 else ZMod(self.p, 1)

    @property
    def additive_orders(self):
        return [self.n]

    def describe(self):
        return {"kind": self.kind, "p": self.p, "k": self.k}


def _poly_mod(a, m, p):
    """Remainder of a modulo the monic polynomial m, coefficients low-to-high."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = [c % p for c in a[:dm]]
    return a + [0] * (dm - len(a))


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(poly, p):
    """Brute-force test: no monic factor of degree 1..deg//2."""
    d = len(poly) - 1
    for k in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            f = list(tail) + [1]
            if not any(_poly_mod(poly, f, p)):
                return False
    return True


class GaloisField(LocalRing):
    kind = "galois-field"

    def __init__(self, p, d, poly, spec=None):
        # poly: coefficient list low-to-high, monic, degree d
        self.d = d
        self.poly = list(poly)
        super().__init__(spec or f"F{p}^{d}[{format_poly(poly)}]", p**d, p)
        q = self.size
        self._exp = [0] * (q - 1)
        self._log = [None] * q
        for g in range(2, q):
            exp, x, seen = [], 1, set()
            while x not in seen:
                seen.add(x)
                exp.append(x)
                x = self._slow_mul(x, g)
            if len(exp) == q - 1:
                self._exp = exp
                break
        else:
            # q = 2 has no candidate beyond 1
            self._exp = [1]
        for i, x in enumerate(self._exp):
            self._log[x] = i
        self._build_tables()

    def _digits(self, x):
        out = []
        for _ in range(self.d):
            out.append(x % self.p)
            x //= self.p
        return out

    def _encode(self, digits):
        x = 0
        for c in reversed(digits):
            x = x * self.p + c
        return x

    def _slow_mul(self, x, y):
        prod = _poly_mul(self._digits(x), self._digits(y), self.p)
        return self._encode(_poly_mod(prod, self.poly, self.p))

    def _add(self, x, y):
        a, b = self._digits(x), self._digits(y)
        return self._encode([(u + v) % self.p for u, v in zip(a, b)])

    def _neg(self, x):
        return self._encode([(-u) % self.p for u in self._digits(x)])

    def _mul(self, x, y):
        if x == 0 or y == 0:
            return 0
        return self._exp[(self._log[x] + self._log[y]) % (self.size - 1)]

    def _residue(self, x):
        return x

    @property
    def residue_field(self):
        return self

    @property
    def additive_orders(self):
        return [self.p] * self.d

    def describe(self):
        return {"kind": self.kind, "p": self.p, "d": self.d, "poly": format_poly(self.poly)}


class Truncation(LocalRing):
    """base[t]/t^e; element b_0 + b_1 t + ... encodes as sum b_i * |base|^i."""

    kind = "truncation"

    def __init__(self, base, e, spec=None):
        self.base = base
        self.e = e
        super().__init__(spec or f"{base.spec}[t]/t^{e}", base.size**e, base.p)
        self._build_tables()

    def _coeffs(self, x):
        out = []
        for _ in range(self.e):
            out.append(x % self.base.size)
            x //= self.base.size
        return out

    def _encode(self, cs):
        x = 0
        for c in reversed(cs):
            x = x * self.base.size + c
        return x

    def _add(self, x, y):
        b = self.base
        return self._encode([b.add(u, v) for u, v in zip(self._coeffs(x), self._coeffs(y))])

    def _neg(self, x):
        return self._encode([self.base.neg(u) for u in self._coeffs(x)])

    def _mul(self, x, y):
        b = self.base
        a, c = self._coeffs(x), self._coeffs(y)
        out = [0] * self.e
        for i, u in enumerate(a):
            if u:
                for j in range(self.e - i):
                    if c[j]:
                        out[i + j] = b.add(out[i + j], b.mul(u, c[j]))
        return self._encode(out)

    def _residue(self, x):
        return self.base.residue(x % self.base.size)

    @property
    def residue_field(self):
        return self.base.residue_field

    @property
    def additive_orders(self):
        return list(self.base.additive_orders) * self.e

    def describe(self):
        return {"kind": self.kind, "base": self.base.spec, "e": self.e}


class UnitGroup:
    """The unit group as an abstract finite abelian group.

    ``invariants`` is the invariant-factor list, ``generators`` the matching
    elements, and ``dlog[u]`` the exponent vector of the unit u.
    """

    def __init__(self, ring):
        from .linalg import smith_normal_form_dense

        self.ring = ring
        self.elements = list(ring.units)
        self.order = len(self.elements)
        # greedy generating set in canonical order
        span = {1: ()}
        gens = []
        for u in self.elements:
            if u in span:
                continue
            gens.append(u)
            span = self._closure(gens)
        ng = len(gens)
        vec = span  # element -> exponent vector in gens
        rows = []
        seen = set()
        for x, v in vec.items():
            for i, g in enumerate(gens):
                y = ring.mul(x, g)
                w = list(v)
                w[i] += 1
                diff = tuple(a - b for a, b in zip(w, vec[y]))
                if any(diff) and diff not in seen:
                    seen.add(diff)
                    rows.append(list(diff))
        rows = _hnf_rows(rows, ng)
        if ng == 0:
            S, V, Vinv = [], [], []
        else:
            S, _, V, Vinv = smith_normal_form_dense(rows if rows else [[0] * ng], want_inverse=True)
        diag = [abs(S[i][i]) if i < len(S) and i < ng else 0 for i in range(ng)]
        keep = [i for i in range(ng) if diag[i] != 1]
        self.invariants = [diag[i] for i in keep]
        assert all(d > 1 for d in self.invariants)
        self.generators = []
        for i in keep:
            x = 1
            for j, g in enumerate(gens):
                x = ring.mul(x, ring.pow(g, Vinv[i][j] % self.order))
            self.generators.append(x)
        self.dlog = {}
        for x, v in vec.items():
            coords = []
            for i, d in zip(keep, self.invariants):
                c = sum(v[j] * V[j][i] for j in range(ng))
                coords.append(c % d)
            self.dlog[x] = tuple(coords)
        self.from_dlog = {v: x for x, v in self.dlog.items()}
        self.inverse = {}
        for x, v in self.dlog.items():
            self.inverse[x] = self.from_dlog[tuple((-c) % d for c, d in zip(v, self.invariants))]

    def _closure(self, gens):
        ring = self.ring
        vec = {1: (0,) * len(gens)}
        frontier = [1]
        while frontier:
            nxt = []
            for x in frontier:
                for i, g in enumerate(gens):
                    y = ring.mul(x, g)
                    if y not in vec:
                        w = list(vec[x])
                        w[i] += 1
                        vec[y] = tuple(w)
                        nxt.append(y)
            frontier = nxt
        return vec

    @cached_property
    def mul_table(self):
        """Unit-index multiplication table as an int32 array."""
        ring = self.ring
        idx = ring.unit_index
        n = self.order
        t = np.zeros((n, n), dtype=np.int32)
        for i, a in enumerate(self.elements):
            for j in range(i, n):
                c = idx[ring.mul(a, self.elements[j])]
                t[i, j] = c
                t[j, i] = c
        return t

    def exponent(self):
        out = 1
        for d in self.invariants:
            out = out * d // _gcd(out, d)
        return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _hnf_rows(rows, ncols):
    """Small incremental row reduction; returns a basis of the row lattice."""
    basis = {}  # pivot col -> row
    for r in rows:
        r = list(r)
        for c in range(ncols):
            if r[c] == 0:
                continue
            if c not in basis:
                if r[c] < 0:
                    r = [-x for x in r]
                basis[c] = r
                break
            b = basis[c]
            # euclid between r and b on column c
            while r[c]:
                q = b[c] // r[c]
                b = [x - q * y for x, y in zip(b, r)]
                b, r = r, b
            if b[c] < 0:
                b = [-x for x in b]
            basis[c] = b
    return [basis[c] for c in sorted(basis)]


class ResidueMap:
    def __init__(self, ring):
        self.source = ring
        self.target = ring.residue_field
        self.table = [ring.residue(x) for x in range(ring.size)]

    def __call__(self, x):
        return self.table[x]

    def verify(self):
        A, k, t = self.source, self.target, self.table
        if set(t) != set(range(k.size)):
            return False
        for x in range(A.size):
            for y in range(A.size):
                if t[A.add(x, y)] != k.add(t[x], t[y]):
                    return False
                if t[A.mul(x, y)] != k.mul(t[x], t[y]):
                    return False
        kernel = {x for x in range(A.size) if t[x] == 0}
        return kernel == set(A.nonunits)


# parsing ---------------------------------------------------------------------


def format_poly(poly):
    terms = []
    for i in range(len(poly) - 1, -1, -1):
        c = poly[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


def _parse_poly(text, p, spec, offset):
    """Parse a polynomial in x with integer coefficients; returns low-to-high list."""
    coeffs = {}
    i, n = 0, len(text)
    if n == 0:
        raise MalformedSpec(spec, offset, "empty polynomial")
    while i < n:
        sign = 1
        if text[i] in "+-":
            sign = -1 if text[i] == "-" else 1
            i += 1
        elif i > 0:
            raise MalformedSpec(spec, offset + i, "expected '+' or '-'")
        start = i
        while i < n and text[i].isdigit():
            i += 1
        c = int(text[start:i]) if i > start else None
        if i < n and text[i] == "*":
            if c is None:
                raise MalformedSpec(spec, offset + i, "unexpected '*'")
            i += 1
            if i >= n or text[i] != "x":
                raise MalformedSpec(spec, offset + i, "expected 'x'")
        if i < n and text[i] == "x":
            i += 1
            e = 1
            if i < n and text[i] == "^":
                i += 1
                s = i
                while i < n and text[i].isdigit():
                    i += 1
                if i == s:
                    raise MalformedSpec(spec, offset + i, "expected exponent")
                e = int(text[s:i])
            c = 1 if c is None else c
        else:
            if c is None:
                raise MalformedSpec(spec, offset + i, "expected coefficient or 'x'")
            e = 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
    deg = max([e for e, c in coeffs.items() if c % p] or [0])
    poly = [coeffs.get(e, 0) % p for e in range(deg + 1)]
    return poly


def parse_ring_spec(spec, max_size=DEFAULT_MAX_SIZE):
    """Parse a ring spec such as ``F5``, ``F3^2[x^2+1]``, ``Z/9``, ``Z/5^2`` or
    ``F5[t]/t^2`` into a LocalRing."""
    if not isinstance(spec, str):
        raise MalformedSpec(str(spec), 0, "spec must be a string")
    s = spec.strip()
    pos = 0

    def digits():
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if pos == start:
            raise MalformedSpec(spec, pos, "expected digits")
        return int(s[start:pos])

    def check_size(n):
        if n > max_size:
            raise TooLarge("ring-size", n, max_size)

    if s.startswith("F"):
        pos = 1
        p = digits()
        if pos < len(s) and s[pos] == "^":
            pos += 1
            d = digits()
            if not _is_prime(p):
                raise MalformedSpec(spec, 1, f"{p} is not prime")
            if pos >= len(s) or s[pos] != "[":
                raise MalformedSpec(spec, pos, "expected '[' before polynomial")
            close = s.find("]", pos)
            if close < 0:
                raise MalformedSpec(spec, pos, "unclosed '['")
            poly = _parse_poly(s[pos + 1 : close], p, spec, pos + 1)
            if d < 1 or len(poly) - 1 != d:
                raise MalformedSpec(spec, pos + 1, f"polynomial degree {len(poly) - 1} does not match {d}")
            lead = poly[-1]
            inv = pow(lead, p - 2, p)
            poly = [(c * inv) % p for c in poly]
            check_size(p**d)
            if not is_irreducible(poly, p):
                raise NotIrreducible(f"{format_poly(poly)} factors over F{p}")
            pos = close + 1
            head = s[:pos]
            ring = ZMod(p, 1, head) if d == 1 else GaloisField(p, d, poly, head)
        else:
            if not _is_prime(p):
                raise MalformedSpec(spec, 1, f"{p} is not prime; use F<p>^<d>[poly]")
            check_size(p)
            ring = ZMod(p, 1, s[:pos])
    elif s.startswith("Z/"):
        pos = 2
        n = digits()
        if pos < len(s) and s[pos] == "^":
            pos += 1
            k = digits()
            if not _is_prime(n):
                raise MalformedSpec(spec, 2, f"{n} is not prime")
            pk = (n, k)
            if k < 1:
                raise MalformedSpec(spec, pos - 1, "exponent must be positive")
        else:
            pk = _prime_power(n)
            if pk is None:
                raise NotLocal(f"Z/{n} is not a local ring")
        check_size(pk[0] ** pk[1])
        ring = ZMod(pk[0], pk[1], s[:pos])
    else:
        raise MalformedSpec(spec, 0, "expected 'F' or 'Z/'")

    suffix = "[t]/t^"
    while pos < len(s):
        if not s.startswith(suffix, pos):
            raise MalformedSpec(spec, pos, f"expected '{suffix}<e>'")
        pos += len(suffix)
        e = digits()
        if e < 1:
            raise MalformedSpec(spec, pos - 1, "truncation exponent must be positive")
        check_size(ring.size**e)
        ring = Truncation(ring, e, s[:pos])
    return ring


def steinberg_pairs(ring):
    """All pairs (a, 1-a) of units, ordered by a."""
    return [(a, ring.sub(1, a)) for a in ring.units if ring.is_unit(ring.sub(1, a))]


def many_units_witnesses(ring, m):
    """Yield every non-decreasing tuple of m units (canonical order) whose
    non-empty partial sums are all units."""
    if m < 1:
        raise ValueError("m must be positive")
    units = ring.units
    chosen = []

    # sums holds X_J for all non-empty J among the chosen entries; a new X
    # must be a unit and X + X_J must be a unit for all J
    def rec(start, sums):
        if len(chosen) == m:
            yield list(chosen)
            return
        for idx in range(start, len(units)):
            x = units[idx]
            new = [ring.add(s, x) for s in sums]
            if all(ring.is_unit(s) for s in new):
                chosen.append(x)
                yield from rec(idx, sums + new + [x])
                chosen.pop()

    yield from rec(0, [])


def many_units_witness(ring, m):
    """First witness in canonical order, or None (exhaustive search)."""
    return next(many_units_witnesses(ring, m), None)
