"""Presented groups and graded algebras built from the unit group.

GW(A), V(A), Milnor K-theory, the hat algebra Tens_{Z[A*]} I[A*] / Steinberg
and the model Tens_{GW} V / Steinberg of Milnor-Witt K-theory.

Degree n of a tensor algebra is built from degree n-1 by tensoring with the
degree-one module over the base ring and dividing out the Steinberg words
coming from degree n-2.  By right exactness of the tensor product this is the
same group as the n-fold tensor power modulo the two-sided Steinberg ideal.

Internally words are tuples of unit *indices* (positions in ``ring.units``);
``ring.units[0]`` is always 1.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .errors import IllFormedHom, TooLarge
from .groupring import GroupRingElem
from .linalg import FpHom, fp_group
from .rings import steinberg_pairs

MILNOR_CAP = 10**6
WORD_TABLE_CAP = 2 * 10**6


def _reduce_array(arr, orders):
    """Reduce the last axis of an int64 array modulo the normal-form orders."""
    if arr.shape[-1] == 0:
        return arr
    out = arr.copy()
    for k, d in enumerate(orders):
        if d:
            out[..., k] %= d
    return out


class UnitData:
    """Index-level view of the unit group shared by all presentations."""

    def __init__(self, ring):
        self.ring = ring
        self.units = ring.units
        self.U = len(self.units)
        self.idx = ring.unit_index
        self.mul = ring.unit_group.mul_table  # index x index -> index
        self.one = 0
        self.minus_one = self.idx[ring.minus_one]
        self.gen_idx = [self.idx[g] for g in ring.unit_group.generators]
        self.pairs = [(self.idx[a], self.idx[b]) for a, b in steinberg_pairs(ring)]
        self.inv = [self.idx[ring.inv(u)] for u in self.units]


def _ud(ring):
    cache = ring.__dict__.setdefault("_mwkt_unitdata", None)
    if cache is None:
        cache = UnitData(ring)
        ring.__dict__["_mwkt_unitdata"] = cache
    return cache


def _gr_row(ring, elem):
    """Z[A*] element -> {unit index: coef}."""
    idx = ring.unit_index
    return {idx[u]: c for u, c in elem.coeffs.items()}


def _i_row(ring, elem):
    """Augmentation-ideal element -> {I-basis index: coef}; [a] has index idx(a)-1."""
    idx = ring.unit_index
    return {idx[u] - 1: c for u, c in elem.bracket_coords().items()}


class Piece:
    """One graded piece: structure, unit action, word table and lifts."""

    def __init__(self, algebra, n, structure, action, table, lifts):
        self.algebra = algebra
        self.n = n
        self.structure = structure
        self.action = action  # int64 array (U, r, r): row i = <g> * gen_i
        self.table = table  # int64 array (U,)*n + (r,) of word coordinates
        self.lifts = lifts  # list of {(g_idx, iword): coef}

    @property
    def rank(self):
        return self.structure.rank

    @property
    def orders(self):
        return self.structure.orders

    def reduce(self, arr):
        return _reduce_array(np.asarray(arr, dtype=np.int64), self.orders)

    def word(self, iword, g=0):
        v = self.table[tuple(iword)] if self.n else self.table
        if g:
            v = v @ self.action[g]
        return self.reduce(v)

    def combo(self, terms):
        """Coordinates of sum coef * <g>[word] over {(g_idx, iword): coef}."""
        acc = np.zeros(self.rank, dtype=np.int64)
        for (g, w), c in terms.items():
            if c:
                v = self.table[tuple(w)] if self.n else self.table
                if g:
                    v = v @ self.action[g]
                acc += c * v
        return tuple(int(x) for x in self.reduce(acc))

    def act(self, vec, g):
        return tuple(int(x) for x in self.reduce(np.asarray(vec, dtype=np.int64) @ self.action[g]))

    def is_zero(self, vec):
        return not np.any(self.reduce(vec))

    def to_json(self):
        return self.structure.to_json()


def _base_piece(algebra, structure):
    """Degree-0 piece for a quotient of Z[A*] given on the unit-index basis."""
    ud = algebra.ud
    U = ud.U
    r = structure.rank
    action = np.zeros((U, r, r), dtype=np.int64)
    for g in range(U):
        for t in range(r):
            acc = {}
            for j, c in structure.lift(t).items():
                k = int(ud.mul[g, j])
                acc[k] = acc.get(k, 0) + c
            action[g, t] = structure.coords(acc)
    table = np.array(structure.coords({0: 1}), dtype=np.int64)
    lifts = [{(j, ()): c for j, c in structure.lift(t).items()} for t in range(r)]
    return Piece(algebra, 0, structure, action, table, lifts)


def _slot_piece(algebra, structure):
    """Degree-1 piece for a quotient of I[A*] on the basis [a], a != 1."""
    ud = algebra.ud
    U = ud.U
    r = structure.rank
    action = np.zeros((U, r, r), dtype=np.int64)
    for g in range(U):
        for t in range(r):
            acc = {}
            for j, c in structure.lift(t).items():
                # <g>[a] = [ga] - [g]
                a = j + 1
                ga = int(ud.mul[g, a])
                if ga:
                    acc[ga - 1] = acc.get(ga - 1, 0) + c
                if g:
                    acc[g - 1] = acc.get(g - 1, 0) - c
            action[g, t] = structure.coords(acc)
    table = np.zeros((U, r), dtype=np.int64)
    for a in range(1, U):
        table[a] = structure.coords({a - 1: 1})
    lifts = [{(0, (j + 1,)): c for j, c in structure.lift(t).items()} for t in range(r)]
    return Piece(algebra, 1, structure, action, table, lifts)


class TensorAlgebra:
    """Graded algebra Tens_R(M) / Steinberg, built degree by degree."""

    name = "tensor"

    def __init__(self, ring, steinberg=True):
        self.ring = ring
        self.ud = _ud(ring)
        self.steinberg = steinberg
        self._pieces = {}

    def base_structure(self):
        raise NotImplementedError

    def slot_structure(self):
        raise NotImplementedError

    def piece(self, n):
        if n < 0:
            raise ValueError("negative degrees are not modeled")
        if n not in self._pieces:
            if n == 0:
                p = _base_piece(self, self.base_structure())
            elif n == 1:
                p = _slot_piece(self, self.slot_structure())
            else:
                p = self._tensor_step(n)
            self._pieces[n] = p
        return self._pieces[n]

    def _tensor_step(self, n):
        ud = self.ud
        U = ud.U
        if U**n * 1 > WORD_TABLE_CAP:
            raise TooLarge("word-table", U**n, WORD_TABLE_CAP)
        prev = self.piece(n - 1)
        prev2 = self.piece(n - 2)
        slot = self.piece(1)
        r1, s = prev.rank, slot.rank

        def gid(i, j):
            return i * s + j

        rows = []
        for i, d in enumerate(prev.orders):
            if d:
                for j in range(s):
                    rows.append({gid(i, j): d})
        for j, e in enumerate(slot.orders):
            if e:
                for i in range(r1):
                    rows.append({gid(i, j): e})
        for g in ud.gen_idx:
            A = prev.action[g]
            B = slot.action[g]
            for i in range(r1):
                for j in range(s):
                    row = {}
                    for k in range(r1):
                        if A[i, k]:
                            row[gid(k, j)] = row.get(gid(k, j), 0) + int(A[i, k])
                    for l in range(s):
                        if B[j, l]:
                            row[gid(i, l)] = row.get(gid(i, l), 0) - int(B[j, l])
                    rows.append(row)
        # Steinberg words x [a] [1-a] with x a generator of degree n-2
        for x in range(prev2.rank if self.steinberg else 0):
            ex = np.zeros(prev2.rank, dtype=np.int64)
            ex[x] = 1
            for a, b in ud.pairs:
                c = self._tensor_coords(n - 1, ex, slot.table[a])
                sb = slot.table[b]
                row = {}
                for i in range(r1):
                    if c[i]:
                        for j in range(s):
                            if sb[j]:
                                row[gid(i, j)] = row.get(gid(i, j), 0) + int(c[i] * sb[j])
                rows.append(row)
        st = fp_group(r1 * s, rows)
        r = st.rank
        E = np.zeros((r1, s, r), dtype=np.int64)
        for i in range(r1):
            for j in range(s):
                E[i, j] = st.gen_coords(gid(i, j))
        action = np.zeros((U, r, r), dtype=np.int64)
        for t in range(r):
            lift = st.lift(t)
            for g in range(U):
                acc = np.zeros(r, dtype=np.int64)
                for gij, c in lift.items():
                    i, j = divmod(gij, s)
                    acc += c * (prev.action[g, i] @ E[:, j, :])
                action[g, t] = acc
        action = _reduce_array(action, st.orders)
        table = np.einsum("...i,aj,ijk->...ak", prev.table, slot.table, E) if r else np.zeros(
            (U,) * n + (0,), dtype=np.int64
        )
        table = _reduce_array(table, st.orders)
        lifts = []
        for t in range(r):
            terms = {}
            for gij, c in st.lift(t).items():
                i, j = divmod(gij, s)
                for (g, w), c1 in prev.lifts[i].items():
                    for (_, w2), c2 in slot.lifts[j].items():
                        key = (g, w + w2)
                        terms[key] = terms.get(key, 0) + c * c1 * c2
            lifts.append({k: v for k, v in terms.items() if v})
        p = Piece(self, n, st, action, table, lifts)
        p._E = E
        return p

    def _tensor_coords(self, n, x, y):
        """Coordinates in degree n of x (degree n-1 coords) times y (slot coords)."""
        p = self.piece(n)
        if n == 1:
            base = self.piece(0)
            slot = self.piece(1)
            acc = np.zeros(slot.rank, dtype=np.int64)
            for i, xi in enumerate(x):
                if xi:
                    for (g, _), c in base.lifts[i].items():
                        acc += xi * c * (np.asarray(y) @ slot.action[g])
            return p.reduce(acc)
        return p.reduce(np.einsum("i,j,ijk->k", np.asarray(x), np.asarray(y), p._E))

    # public helpers on unit encodings ------------------------------------------
    def word_coords(self, word, g=1):
        idx = self.ring.unit_index
        return tuple(int(x) for x in self.piece(len(word)).word([idx[a] for a in word], idx[g]))

    def element_coords(self, n, terms):
        """terms: {(g, (a_1..a_n)): coef} with unit encodings."""
        idx = self.ring.unit_index
        return self.piece(n).combo({(idx[g], tuple(idx[a] for a in w)): c for (g, w), c in terms.items()})


def gw_structure(ring, closed=True):
    """GW(A): Z[A*] modulo <<a>>h and <<a>><<1-a>>.

    With ``closed`` the Steinberg rows are multiplied by every unit, giving the
    ideal they generate; otherwise only the listed rows are used."""
    G = GroupRingElem
    h = G.hyperbolic(ring)
    rows = []
    for a in ring.units:
        rows.append(_gr_row(ring, G.pfister(ring, a) * h))
    for a, b in steinberg_pairs(ring):
        st = G.pfister(ring, a) * G.pfister(ring, b)
        for g in ring.units if closed else (1,):
            rows.append(_gr_row(ring, st.scalar_act(g)))
    return fp_group(len(ring.units), rows, keep_relations=True)


def v_structure(ring, closed=True):
    """V(A): I[A*] modulo <<a>> h [b] and <<a>>[1-a] (submodule closure if ``closed``)."""
    G = GroupRingElem
    h = G.hyperbolic(ring)
    rows = []
    for a in ring.units:
        ah = G.pfister(ring, a) * h
        for b in ring.units:
            rows.append(_i_row(ring, ah * G.bracket(ring, b)))
    for a, b in steinberg_pairs(ring):
        st = G.pfister(ring, a) * G.bracket(ring, b)
        for g in ring.units if closed else (1,):
            rows.append(_i_row(ring, st.scalar_act(g)))
    return fp_group(len(ring.units) - 1, rows, keep_relations=True)


class HatAlgebra(TensorAlgebra):
    """Tens_{Z[A*]} I[A*] modulo the Steinberg ideal."""

    name = "KHAT"

    def base_structure(self):
        return fp_group(self.ud.U, [])

    def slot_structure(self):
        return fp_group(self.ud.U - 1, [])


class MWAlgebra(TensorAlgebra):
    """Tens_{GW} V modulo the Steinberg ideal."""

    name = "KMW"

    def base_structure(self):
        return gw_structure(self.ring)

    def slot_structure(self):
        return v_structure(self.ring)


def hat_algebra(ring):
    a = ring.__dict__.get("_mwkt_khat")
    if a is None:
        a = ring.__dict__["_mwkt_khat"] = HatAlgebra(ring)
    return a


def mw_algebra(ring):
    a = ring.__dict__.get("_mwkt_kmw")
    if a is None:
        a = ring.__dict__["_mwkt_kmw"] = MWAlgebra(ring)
    return a


def khat(ring, n):
    return hat_algebra(ring).piece(n)


def kmw(ring, n):
    return mw_algebra(ring).piece(n)


class PresentedRing:
    """GW(A) with its multiplication on normal-form generators."""

    def __init__(self, ring):
        self.ring = ring
        self.piece = mw_algebra(ring).piece(0)
        self.structure = self.piece.structure

    def coords_of(self, elem):
        return self.structure.coords(_gr_row(self.ring, elem))

    def angle(self, a):
        return self.coords_of(GroupRingElem.angle(self.ring, a))

    def lift(self, i):
        idx = self.ring.units
        return GroupRingElem(self.ring, {idx[j]: c for j, c in self.structure.lift(i).items()})

    def multiply(self, x, y):
        """Product of two elements given in normal-form coordinates."""
        ex = self.element(x)
        ey = self.element(y)
        return self.coords_of(ex * ey)

    def element(self, x):
        out = GroupRingElem.zero(self.ring)
        for i, c in enumerate(x):
            if c:
                out = out + self.lift(i) * int(c)
        return out

    @cached_property
    def multiplication_table(self):
        r = self.structure.rank
        basis = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        return [[self.multiply(a, b) for b in basis] for a in basis]

    def certificate(self):
        """Products of relation rows with every unit reduce to zero."""
        st = self.structure
        idx = self.ring.unit_index
        ud = _ud(self.ring)
        bad = 0
        for row in st.relations:
            for g in range(ud.U):
                moved = {}
                for j, c in row.items():
                    k = int(ud.mul[g, j])
                    moved[k] = moved.get(k, 0) + c
                if any(st.coords(moved)):
                    bad += 1
        return {"relations": len(st.relations), "ideal_violations": bad, "unit": st.coords({idx[1]: 1})}


def gw_ring(ring):
    return PresentedRing(ring)


def v_module(ring):
    return mw_algebra(ring).piece(1)


def word_ambient_structure(ring, n, model="KHAT"):
    """Reference construction on the full word ambient <g>[a_1]...[a_n].

    Generators are all (g, a_1, ..., a_n); relations move units between the
    coefficient and each slot, kill [1], impose Steinberg in adjacent slots
    and, for the tensor model, the GW and V relations.  Exponential in n;
    meant for cross-checking the iterated construction on small rings.
    Returns (structure, index function on unit-index tuples).
    """
    ud = _ud(ring)
    U = ud.U
    if U ** (n + 1) > 20000:
        raise TooLarge("word-ambient", U ** (n + 1), 20000)

    def gid(t):
        j = 0
        for x in t:
            j = j * U + x
        return j

    rows = []
    words = list(itertools.product(range(U), repeat=n))
    for g in range(U):
        for w in words:
            for i, a in enumerate(w):
                if a == 0:
                    rows.append({gid((g,) + w): 1})
                    break
    for g in range(U):
        for h in range(U):
            gh = int(ud.mul[g, h])
            for w in words:
                for i in range(n):
                    r = {}
                    for key, c in (
                        ((gh,) + w, 1),
                        ((g,) + w[:i] + (int(ud.mul[h, w[i]]),) + w[i + 1 :], -1),
                        ((g,) + w[:i] + (h,) + w[i + 1 :], 1),
                    ):
                        r[gid(key)] = r.get(gid(key), 0) + c
                    rows.append(r)
    for g in range(U):
        for w in itertools.product(range(U), repeat=max(n - 2, 0)):
            for i in range(n - 1):
                for a, b in ud.pairs:
                    rows.append({gid((g,) + w[:i] + (a, b) + w[i:]): 1})
    if model == "KMW":
        gw = gw_structure(ring)
        for rel in gw.relations:
            for w in words:
                rows.append({gid((j,) + w): c for j, c in rel.items()})
        if n:
            vs = v_structure(ring)
            for rel in vs.relations:
                for g in range(U):
                    for w in itertools.product(range(U), repeat=n - 1):
                        for i in range(n):
                            r = {}
                            for j, c in rel.items():
                                k = gid((g,) + w[:i] + (j + 1,) + w[i:])
                                r[k] = r.get(k, 0) + c
                            rows.append(r)
    return fp_group(U ** (n + 1), rows), gid


# Milnor K-theory ---------------------------------------------------------------


class MilnorK:
    """K^M_n on symbols {u_1,...,u_n}: multiplicativity in each slot and
    Steinberg.  Multiplicativity is imposed for b among the unit-group
    generators, which generates the full set of relations."""

    def __init__(self, ring, n, cap=MILNOR_CAP):
        self.ring = ring
        self.n = n
        ud = self.ud = _ud(ring)
        U = ud.U
        if U**n > cap:
            raise TooLarge("milnor-symbols", U**n, cap)
        self.ngens = U**n
        rows = []
        if n >= 1:
            for slot in range(n):
                for ctx in itertools.product(range(U), repeat=n - 1):
                    for a in range(U):
                        for b in ud.gen_idx or [0]:
                            ab = int(ud.mul[a, b])
                            r = {}
                            for val, c in ((ab, 1), (a, -1), (b, -1)):
                                j = self._index(ctx[:slot] + (val,) + ctx[slot:])
                                r[j] = r.get(j, 0) + c
                            rows.append(r)
            for slot in range(n - 1):
                for ctx in itertools.product(range(U), repeat=n - 2):
                    for a, b in ud.pairs:
                        rows.append({self._index(ctx[:slot] + (a, b) + ctx[slot:]): 1})
        self.structure = fp_group(self.ngens, rows, keep_relations=True)

    def _index(self, iword):
        j = 0
        for x in iword:
            j = j * self.ud.U + x
        return j

    def symbol_coords(self, word):
        """Coordinates of {u_1,...,u_n} (unit encodings)."""
        idx = self.ring.unit_index
        return self.structure.gen_coords(self._index([idx[a] for a in word]))

    def isymbol(self, iword):
        return self.structure.gen_coords(self._index(iword))


def milnor_k(ring, n):
    cache = ring.__dict__.setdefault("_mwkt_milnor", {})
    if n not in cache:
        cache[n] = MilnorK(ring, n)
    return cache[n]


# word-level homomorphisms -------------------------------------------------------


def word_hom(source, target, f, check_words=True):
    """Homomorphism of pieces defined on words.

    ``f(iword)`` returns the image of [iword] as a target coordinate vector;
    the map is extended Z[A*]-linearly, ``<g> w -> <g> f(w)``.  The resulting
    FpHom is certified: torsion orders respected, agreement with ``f`` on every
    word, and compatibility with the action of the unit-group generators.
    """
    ud = source.algebra.ud if hasattr(source, "algebra") else None
    tgt = target

    def img_terms(terms):
        acc = np.zeros(tgt.rank, dtype=np.int64)
        for (g, w), c in terms.items():
            v = np.asarray(f(w), dtype=np.int64)
            if g:
                v = v @ _action(tgt, g)
            acc += c * v
        return tuple(int(x) for x in _reduce_array(acc, tgt.orders))

    images = [img_terms(source.lifts[i]) for i in range(source.rank)]
    h = FpHom(source.structure, tgt.structure, images)
    h.check_orders()
    cert = {"orders_ok": True}
    if check_words:
        bad = 0
        count = 0
        U = ud.U
        for w in itertools.product(range(U), repeat=source.n):
            count += 1
            lhs = h.apply(source.word(w))
            rhs = tuple(int(x) for x in _reduce_array(np.asarray(f(w), dtype=np.int64), tgt.orders))
            if lhs != rhs:
                bad += 1
        cert["words_checked"] = count
        cert["word_mismatches"] = bad
        abad = 0
        for g in ud.gen_idx:
            for i in range(source.rank):
                lhs = h.apply(tuple(int(x) for x in source.action[g, i]))
                rhs = tuple(int(x) for x in _reduce_array(np.asarray(images[i]) @ _action(tgt, g), tgt.orders))
                if lhs != rhs:
                    abad += 1
        cert["action_mismatches"] = abad
        if bad or abad:
            raise IllFormedHom(f"word map not well defined ({bad} word, {abad} action mismatches)")
    h.certificate.update(cert)
    return h


def _action(piece, g):
    return piece.action[g]
