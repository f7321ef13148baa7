"""The integral group ring Z[A*] of the unit group and its special elements."""

from __future__ import annotations

import itertools
from functools import cached_property

from .errors import BadWitness, RingMismatch
from .linalg import fp_group, preimage_lattice


class GroupRingElem:
    """Finite formal sum of units with integer coefficients.

    Keys are unit encodings.  ``[a]`` and the Pfister element are both stored
    as ``<a> - 1``; membership in the augmentation ideal is ``augment() == 0``.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs=None):
        self.ring = ring
        c = {}
        for u, v in (coeffs or {}).items():
            if v:
                if not ring.is_unit(u):
                    raise ValueError(f"{u} is not a unit")
                c[u] = c.get(u, 0) + v
        self.coeffs = {u: v for u, v in c.items() if v}

    # constructors
    @classmethod
    def zero(cls, ring):
        return cls(ring)

    @classmethod
    def one(cls, ring):
        return cls(ring, {1: 1})

    @classmethod
    def angle(cls, ring, a):
        return cls(ring, {a: 1})

    @classmethod
    def bracket(cls, ring, a):
        return cls(ring, {a: 1}) - cls(ring, {1: 1})

    pfister = bracket

    @classmethod
    def hyperbolic(cls, ring):
        return cls(ring, {1: 1}) + cls(ring, {ring.minus_one: 1})

    @classmethod
    def epsilon(cls, ring):
        return cls(ring, {ring.minus_one: -1})

    # arithmetic
    def _check(self, other):
        if not isinstance(other, GroupRingElem):
            return GroupRingElem(self.ring, {1: int(other)})
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring.spec} vs {other.ring.spec}")
        return other

    def __add__(self, other):
        other = self._check(other)
        c = dict(self.coeffs)
        for u, v in other.coeffs.items():
            c[u] = c.get(u, 0) + v
        return GroupRingElem(self.ring, c)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.ring, {u: -v for u, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElem(self.ring, {u: v * other for u, v in self.coeffs.items()})
        other = self._check(other)
        mul = self.ring.mul
        c = {}
        for u, v in self.coeffs.items():
            for w, x in other.coeffs.items():
                k = mul(u, w)
                c[k] = c.get(k, 0) + v * x
        return GroupRingElem(self.ring, c)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, e):
        out = GroupRingElem.one(self.ring)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = GroupRingElem(self.ring, {1: other})
        return isinstance(other, GroupRingElem) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring.spec, tuple(sorted(self.coeffs.items()))))

    def augment(self):
        return sum(self.coeffs.values())

    def in_augmentation_ideal(self):
        return self.augment() == 0

    def scalar_act(self, g):
        """Action of the unit g, i.e. multiplication by <g>."""
        return self * GroupRingElem.angle(self.ring, g)

    def bracket_coords(self):
        """Coordinates in the Z-basis {[a] : a != 1} of the augmentation ideal."""
        if self.augment():
            raise ValueError("element is not in the augmentation ideal")
        return {u: v for u, v in self.coeffs.items() if u != 1}

    def to_json(self):
        return {str(u): v for u, v in sorted(self.coeffs.items())}

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}<{u}>" for u, v in sorted(self.coeffs.items()))


def gr_arith(op, x, y=None):
    """Dispatch for add | multiply | augment | scalar-act."""
    if op == "add":
        return x + y
    if op == "multiply":
        return x * y
    if op == "augment":
        return x.augment()
    if op == "scalar-act":
        return x.scalar_act(y)
    raise ValueError(op)


def s_element(ring, m, t, witness):
    """s_{m,t} = -sum over non-empty J of (-1)^|J| <(X_J)^t>."""
    if len(witness) != m:
        raise BadWitness(f"witness has {len(witness)} entries, expected {m}")
    out = {}
    for size in range(1, m + 1):
        for J in itertools.combinations(range(m), size):
            x = 0
            for j in J:
                x = ring.add(x, witness[j])
            if not ring.is_unit(x):
                raise BadWitness(f"partial sum over {J} is not a unit")
            u = ring.pow(x, t)
            out[u] = out.get(u, 0) - (-1) ** size
    return GroupRingElem(ring, out)


class VkSpace:
    """Symmetric invariants of the k-fold tensor power of the additive group.

    The additive group is a sum of cyclic groups Z/o_j (one per digit of the
    canonical encoding); the tensor power has one cyclic summand per index
    tuple with order the gcd of the orders.
    """

    def __init__(self, ring, k, cap=512):
        from .errors import TooLarge

        self.ring = ring
        self.k = k
        self.orders1 = list(ring.additive_orders)
        d = len(self.orders1)
        if d**k > cap:
            raise TooLarge("tensor-dimension", d**k, cap)
        self.index = list(itertools.product(range(d), repeat=k))
        self.pos = {J: i for i, J in enumerate(self.index)}
        self.orders = []
        for J in self.index:
            g = 0
            for j in J:
                g = _gcd(g, self.orders1[j])
            self.orders.append(g)

    def reduce(self, v):
        return tuple(x % o for x, o in zip(v, self.orders))

    def pure_power(self, a):
        """Coordinates of a (x) ... (x) a."""
        c = self.ring.additive_coords(a)
        out = []
        for J, o in zip(self.index, self.orders):
            p = 1
            for j in J:
                p = p * c[j] % o
            out.append(p)
        return tuple(out)

    def permutation_generators(self):
        """Adjacent transpositions of the tensor slots, as index permutations."""
        gens = []
        for s in range(self.k - 1):
            perm = []
            for J in self.index:
                J2 = list(J)
                J2[s], J2[s + 1] = J2[s + 1], J2[s]
                perm.append(self.pos[tuple(J2)])
            gens.append(perm)
        return gens

    def is_invariant(self, v):
        for perm in self.permutation_generators():
            w = [0] * len(v)
            for i, x in enumerate(v):
                w[perm[i]] = x
            if self.reduce(w) != self.reduce(v):
                return False
        return True

    @cached_property
    def structure(self):
        """The invariant subgroup as an abstract group: kernel of the stacked
        maps (sigma - id) over adjacent transpositions."""
        n = len(self.index)
        perms = self.permutation_generators()
        # map Z^n -> (ambient)^{#perms}; x -> (sigma x - x)
        cols = n * len(perms)
        M = []
        for i in range(n):
            row = [0] * cols
            for s, perm in enumerate(perms):
                row[s * n + perm[i]] += 1
                row[s * n + i] -= 1
            M.append(row)
        rel = []
        for s in range(len(perms)):
            for i, o in enumerate(self.orders):
                row = [0] * cols
                row[s * n + i] = o
                rel.append(row)
        if not perms:
            inv = [[int(i == j) for j in range(n)] for i in range(n)]
        else:
            inv = preimage_lattice(M, rel, cols)
        # invariants modulo the ambient relations
        amb = [[o if i == j else 0 for j in range(n)] for i, o in enumerate(self.orders)]
        lat = preimage_lattice(inv, amb, n) if inv else []
        return fp_group(len(inv), lat)

    def identity(self):
        return self.pure_power(1)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def vk_image(space, x):
    """Image of x in V_k under <a> -> a (x) ... (x) a, in tensor coordinates."""
    if x.ring != space.ring:
        raise RingMismatch(f"{x.ring.spec} vs {space.ring.spec}")
    acc = [0] * len(space.index)
    for u, c in x.coeffs.items():
        for i, v in enumerate(space.pure_power(u)):
            acc[i] += c * v
    return space.reduce(acc)
