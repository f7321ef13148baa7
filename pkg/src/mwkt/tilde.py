"""Truncations of the eta-presentation of Milnor-Witt K-theory.

Degree n is generated by symbols [eta^m, u_1, ..., u_{n+m}] for m >= 0.  The
truncation keeps the symbols with m <= M and every defining relation whose
symbols all have m <= M:

1. [eta^m, ..., a, b, ...] = 0 whenever a + b = 1 (adjacent slots);
2. [eta^m, ..., ab, ...] = [eta^m, ..., a, ...] + [eta^m, ..., b, ...]
   + [eta^{m+1}, ..., a, b, ...];
3. [eta^{m+2}, ..., -1, ...] + 2 [eta^{m+1}, ...] = 0 (the -1 removed).

The comparison map sends [eta^m, u] to <<u_1>>...<<u_m>> [u_{m+1}, ..., u_{m+n}]
in the tensor model.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import TooLarge
from .kmw import _reduce_array, _ud, mw_algebra
from .linalg import FpHom, fp_group

MAX_ETA = 4
GENERATOR_CAP = 2 * 10**5


class TruncatedEta:
    def __init__(self, ring, n, M):
        if n < 0:
            raise ValueError("negative degrees are not modeled")
        if M < 0 or M > MAX_ETA:
            raise TooLarge("max-eta", M, MAX_ETA)
        self.ring = ring
        self.n = n
        self.M = M
        ud = self.ud = _ud(ring)
        U = ud.U
        self.offsets = []
        total = 0
        for m in range(M + 1):
            self.offsets.append(total)
            total += U ** (n + m)
        if total > GENERATOR_CAP:
            raise TooLarge("eta-generators", total, GENERATOR_CAP)
        self.ngens = total
        self.structure = fp_group(total, self._relations(), keep_relations=True)

    def index(self, m, iword):
        j = 0
        for x in iword:
            j = j * self.ud.U + x
        return self.offsets[m] + j

    def symbol(self, m, iword):
        return tuple(self.structure.gen_coords(self.index(m, iword)))

    def _relations(self):
        ud, n, M, U = self.ud, self.n, self.M, self.ud.U
        rows = []
        for m in range(M + 1):
            L = n + m
            for i in range(L - 1):
                for ctx in itertools.product(range(U), repeat=L - 2):
                    for a, b in ud.pairs:
                        rows.append({self.index(m, ctx[:i] + (a, b) + ctx[i:]): 1})
            if m + 1 <= M:
                for i in range(L):
                    for ctx in itertools.product(range(U), repeat=L - 1):
                        pre, post = ctx[:i], ctx[i:]
                        for a in range(U):
                            for b in range(U):
                                row = {}
                                terms = (
                                    (self.index(m, pre + (int(ud.mul[a, b]),) + post), 1),
                                    (self.index(m, pre + (a,) + post), -1),
                                    (self.index(m, pre + (b,) + post), -1),
                                    (self.index(m + 1, pre + (a, b) + post), -1),
                                )
                                for j, c in terms:
                                    row[j] = row.get(j, 0) + c
                                rows.append(row)
            if m + 2 <= M:
                L2 = n + m + 2
                for i in range(L2):
                    for ctx in itertools.product(range(U), repeat=L2 - 1):
                        row = {}
                        for j, c in (
                            (self.index(m + 2, ctx[:i] + (ud.minus_one,) + ctx[i:]), 1),
                            (self.index(m + 1, ctx), 2),
                        ):
                            row[j] = row.get(j, 0) + c
                        rows.append(row)
        return rows

    def generator_word(self, j):
        """Inverse of ``index``: (m, iword)."""
        m = max(k for k in range(self.M + 1) if self.offsets[k] <= j)
        r = j - self.offsets[m]
        w = []
        for _ in range(self.n + m):
            r, x = divmod(r, self.ud.U)
            w.append(x)
        return m, tuple(reversed(w))

    def comparison(self):
        """Certified map to the tensor model in degree n."""
        target = mw_algebra(self.ring).piece(self.n)
        mul = self.ud.mul

        def image(j):
            m, w = self.generator_word(j)
            pf, rest = w[:m], w[m:]
            acc = np.zeros(target.rank, dtype=np.int64)
            for S in itertools.product((0, 1), repeat=m):
                g = 0
                for take, u in zip(S, pf):
                    if take:
                        g = int(mul[g, u])
                sign = (-1) ** (m - sum(S))
                acc += sign * target.word(rest, g)
            return _reduce_array(acc, target.orders)

        # target ambient = normal-form coordinates, so coords() is the identity
        h = FpHom.from_ambient(self.structure, _IdentityCoords(target.structure), image)
        h.target = target.structure
        return h


class _IdentityCoords:
    """Adapter letting FpHom.from_ambient accept normal-form target vectors."""

    def __init__(self, st):
        self.st = st
        self.rank = st.rank

    def coords(self, v):
        return self.st.reduce([int(x) for x in v])

    def reduce(self, v):
        return self.st.reduce(v)


def tilde_kmw_truncated(ring, n, M):
    t = TruncatedEta(ring, n, M)
    return t, t.comparison()


def eta_generator_count(ring, n, M):
    U = len(ring.units)
    return sum(U ** (n + m) for m in range(M + 1))
