"""Witt ring tower, the fiber-product model of K^MW_n, the eta/h exact
sequence, and the rank-discriminant model of GW over odd finite fields."""

from __future__ import annotations

import numpy as np

from .errors import CharTwo
from .groupring import GroupRingElem
from .kmw import _reduce_array, gw_ring, milnor_k, mw_algebra, word_hom
from .linalg import FpHom, Lattice, fp_group, hermite_normal_form, is_isomorphism


def _same_subgroup(gens_a, gens_b, st):
    """Do two generating sets span the same subgroup of ``st`` (NF coordinates)?"""
    rel = st.relation_matrix()
    la = hermite_normal_form([list(g) for g in gens_a] + rel, st.rank)
    lb = hermite_normal_form([list(g) for g in gens_b] + rel, st.rank)
    return la == lb


class ActedGroup:
    """A presented group with a unit action, usable as a word_hom target."""

    def __init__(self, structure, action):
        self.structure = structure
        self.action = action

    @property
    def rank(self):
        return self.structure.rank

    @property
    def orders(self):
        return self.structure.orders


def trivial_action(structure, U):
    r = structure.rank
    return ActedGroup(structure, np.broadcast_to(np.eye(r, dtype=np.int64), (U, r, r)).copy())


class WittTower:
    """W = GW/(h) and the powers I^n of its fundamental ideal.

    Each I^n is kept as a lattice L_n in the normal-form coordinates of W that
    contains the relations of W; I^n = L_n / R_W and I^n/I^{n+1} = L_n / L_{n+1}.
    """

    def __init__(self, ring, n_max):
        self.ring = ring
        self.gw = gw_ring(ring)
        gst = self.gw.structure
        h = self.gw.coords_of(GroupRingElem.hyperbolic(ring))
        self.W = fp_group(gst.rank, gst.relation_matrix() + [list(h)])
        w = self.W.rank
        self.rel = self.W.relation_matrix()
        self._pf = {a: self.from_gw(self.gw.coords_of(GroupRingElem.pfister(ring, a))) for a in ring.units}
        basis = [[int(i == j) for j in range(w)] for i in range(w)]
        self.bases = [hermite_normal_form(basis + self.rel, w)]
        for _ in range(n_max):
            prev = self.bases[-1]
            gens = []
            for a in ring.units[1:]:
                for y in prev:
                    gens.append(list(self.mul(self._pf[a], y)))
            self.bases.append(hermite_normal_form(gens + self.rel, w))
        self.n_max = n_max

    def from_gw(self, v):
        return self.W.coords(list(v))

    def to_gw(self, x):
        acc = [0] * self.gw.structure.rank
        for i, c in enumerate(x):
            if c:
                for j, d in self.W.lift(i).items():
                    acc[j] += c * d
        return self.gw.structure.reduce(acc)

    def mul(self, x, y):
        return self.from_gw(self.gw.multiply(self.to_gw(x), self.to_gw(y)))

    def pfister_product(self, word):
        x = self.from_gw(self.gw.angle(1))
        for a in word:
            x = self.mul(x, self._pf[a])
        return x

    def power_structure(self, n):
        """I^n as an abstract group (generators = HNF rows of L_n)."""
        B = self.bases[n]
        if not B:
            return fp_group(0, [])
        lat = Lattice(B, self.W.rank)
        return fp_group(len(B), [lat.solve(r) for r in self.rel])

    def quotient_structure(self, n):
        """I^n / I^{n+1}."""
        B = self.bases[n]
        if not B:
            return fp_group(0, [])
        lat = Lattice(B, self.W.rank)
        return fp_group(len(B), [lat.solve(r) for r in self.bases[n + 1]])

    def in_power(self, x, n):
        return Lattice(self.bases[n], self.W.rank).contains(list(x)) if self.bases[n] else not any(x)

    def stable_index(self):
        for n, B in enumerate(self.bases):
            if self.power_structure(n).is_trivial:
                return n
        return None

    def to_json(self):
        out = {"W": self.W.to_json(), "powers": [], "quotients": []}
        for n in range(self.n_max + 1):
            out["powers"].append(self.power_structure(n).to_json())
            if n < self.n_max:
                out["quotients"].append(self.quotient_structure(n).to_json())
        out["vanishes_from"] = self.stable_index()
        return out


def witt_tower(ring, n_max):
    return WittTower(ring, n_max)


class FiberModel:
    """Pullback of I^n -> I^n/I^{n+1} <- K^M_n and the comparison from K^MW_n."""

    def __init__(self, ring, n):
        if ring.p == 2:
            raise CharTwo(f"{ring.spec} has residue characteristic 2")
        self.ring = ring
        self.n = n
        self.tower = T = WittTower(ring, n + 1)
        self.km = milnor_k(ring, n)
        kst = self.km.structure
        B = T.bases[n]
        self.lat = Lattice(B, T.W.rank) if B else None
        nb = len(B)
        nk = kst.rank
        # source A = I^n (+) K^M_n, ambient generators: B rows then K^M NF gens
        rows = [self._in_basis(r) + [0] * nk for r in T.rel]
        for j, d in enumerate(kst.orders):
            if d:
                rows.append([0] * nb + [d if t == j else 0 for t in range(nk)])
        self.A = fp_group(nb + nk, rows)
        self.Q = T.quotient_structure(n)
        # phi(x, u) = class of x - milnor(u)
        images = []
        for t in range(self.A.rank):
            acc = [0] * self.Q.rank
            for j, c in self.A.lift(t).items():
                if j < nb:
                    v = self.Q.gen_coords(j)
                else:
                    v = [-x for x in self._milnor(j - nb)]
                for k in range(self.Q.rank):
                    acc[k] += c * v[k]
            images.append(self.Q.reduce(acc))
        self.phi = FpHom(self.A, self.Q, images)
        self.phi.check_orders()
        self.pullback, self.pullback_gens = self.phi.kernel()

    def _in_basis(self, x):
        if self.lat is None:
            return []
        return self.lat.solve(list(x))

    def _milnor(self, j):
        """Q-coordinates of the Milnor image of the j-th K^M normal-form generator."""
        acc = [0] * self.Q.rank
        U = len(self.ring.units)
        for sym, c in self.km.structure.lift(j).items():
            word = []
            for _ in range(self.n):
                sym, x = divmod(sym, U)
                word.append(self.ring.units[x])
            word.reverse()
            v = self.Q.coords(self._in_basis(self.tower.pfister_product(word)))
            for k in range(self.Q.rank):
                acc[k] += c * v[k]
        return self.Q.reduce(acc)

    def a_coords(self, x_w, u_km):
        """A-coordinates of (x in W-coordinates inside I^n, u in K^M NF coords)."""
        return self.A.coords(self._in_basis(x_w) + list(u_km))

    def comparison(self):
        """Certified word-level map K^MW_n -> A, its verdicts and data."""
        ring = self.ring
        src = mw_algebra(ring).piece(self.n)
        U = len(ring.units)
        T = self.tower
        # unit action on A: multiplication by <g> on I^n, trivial on K^M
        nb = len(T.bases[self.n])
        action = np.zeros((U, self.A.rank, self.A.rank), dtype=np.int64)
        for g in range(U):
            ang = T.from_gw(T.gw.angle(ring.units[g]))
            for t in range(self.A.rank):
                xw = [0] * T.W.rank
                u = [0] * self.km.structure.rank
                for j, c in self.A.lift(t).items():
                    if j < nb:
                        for k, y in enumerate(T.bases[self.n][j]):
                            xw[k] += c * y
                    else:
                        u[j - nb] += c
                xw = T.W.reduce(xw)
                action[g, t] = self.a_coords(T.mul(ang, xw), u)
        target = ActedGroup(self.A, action)

        def f(iword):
            word = [ring.units[i] for i in iword]
            return self.a_coords(T.pfister_product(word), self.km.isymbol(iword))

        h = word_hom(src, target, f)
        ker = h.kernel()[0] if src.structure.rank else fp_group(0, [])
        lands = all(not any(self.phi.apply(v)) for v in h.images)
        onto = _same_subgroup(h.images, self.pullback_gens, self.A)
        return h, {
            "well_defined": True,
            "lands_in_pullback": lands,
            "injective": ker.is_trivial,
            "onto_pullback": onto and lands,
            "isomorphism": ker.is_trivial and onto and lands,
        }

    def to_json(self):
        return {
            "degree": self.n,
            "pullback": self.pullback.to_json(),
            "I^n": self.tower.power_structure(self.n).to_json(),
            "K^M_n": self.km.structure.to_json(),
        }


def fiber_model(ring, n):
    return FiberModel(ring, n)


# eta / h exact sequence -----------------------------------------------------------


def _subgroup_image(h):
    return [list(v) for v in h.images]


def eta_map(ring, n):
    """eta_n : K^MW_n -> K^MW_{n-1}, [u_1..u_n] -> <<u_n>>[u_1..u_{n-1}]."""
    alg = mw_algebra(ring)
    src, tgt = alg.piece(n), alg.piece(n - 1)

    def f(iword):
        head, last = iword[:-1], iword[-1]
        return _reduce_array(tgt.word(head, last) - tgt.word(head), tgt.orders)

    return word_hom(src, tgt, f)


def h_map(ring, n):
    """Multiplication by h = 1 + <-1> on K^MW_n."""
    p = mw_algebra(ring).piece(n)
    m1 = p.algebra.ud.minus_one
    mat = np.eye(p.rank, dtype=np.int64) + p.action[m1]
    images = [tuple(int(x) for x in p.reduce(row)) for row in mat]
    h = FpHom(p.structure, p.structure, images)
    h.check_orders()
    return h


def forget_map(ring, n):
    """K^MW_n -> K^M_n, [u] -> {u}, <g> -> 1."""
    src = mw_algebra(ring).piece(n)
    km = milnor_k(ring, n)
    tgt = trivial_action(km.structure, len(ring.units))
    return word_hom(src, tgt, lambda w: km.isymbol(w))


def _exact_at(incoming, outgoing, st):
    """im(incoming) == ker(outgoing) inside ``st``."""
    comp = all(not any(outgoing.apply(v)) for v in incoming.images)
    ker_gens = outgoing.kernel()[1] if st.rank else []
    return comp and _same_subgroup(incoming.images, ker_gens, st)


def eta_h_sequence(ring, n):
    """Exactness of K^MW_n -h-> K^MW_n -eta-> K^MW_{n-1} -> K^M_{n-1} -> 0."""
    if ring.p == 2:
        raise CharTwo(f"{ring.spec} has residue characteristic 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    alg = mw_algebra(ring)
    hm = h_map(ring, n)
    em = eta_map(ring, n)
    pm = forget_map(ring, n - 1)
    kn = alg.piece(n).structure
    kn1 = alg.piece(n - 1).structure
    surj = pm.cokernel().is_trivial
    return {
        "exact_at_source": _exact_at(hm, em, kn),
        "exact_at_middle": _exact_at(em, pm, kn1),
        "surjective": surj,
        "structures": {
            "K^MW_n": kn.to_json(),
            "K^MW_n-1": kn1.to_json(),
            "K^M_n-1": milnor_k(ring, n - 1).structure.to_json(),
        },
    }


# rank-discriminant oracle ------------------------------------------------------------


class GWOracle:
    """GW of an odd finite field as Z (+) Z/2, <a> -> (1, [a is a non-square])."""

    def __init__(self, ring):
        if ring.p == 2 or not ring.is_field:
            raise CharTwo(f"oracle needs an odd finite field, got {ring.spec}")
        self.ring = ring
        self.squares = {ring.mul(u, u) for u in ring.units}

    def angle(self, a):
        return (1, 0 if a in self.squares else 1)

    def of_element(self, elem):
        r = d = 0
        for u, c in elem.coeffs.items():
            r += c
            d += c * self.angle(u)[1]
        return (r, d % 2)

    @staticmethod
    def mul(x, y):
        return (x[0] * y[0], (x[0] * y[1] + x[1] * y[0]) % 2)


def gw_oracle_check(ring):
    """Compare gw_ring with the oracle: group iso and multiplication table."""
    gw = gw_ring(ring)
    orc = GWOracle(ring)
    st = gw.structure
    target = fp_group(2, [[0, 2]])
    images = [target.coords(list(orc.of_element(gw.lift(i)))) for i in range(st.rank)]
    h = FpHom(st, target, images)
    iso, cert = is_isomorphism(h)
    table = gw.multiplication_table
    bad = 0
    for i in range(st.rank):
        for j in range(st.rank):
            lhs = orc.of_element(gw.element(table[i][j]))
            rhs = orc.mul(orc.of_element(gw.lift(i)), orc.of_element(gw.lift(j)))
            if (lhs[0], lhs[1] % 2) != (rhs[0], rhs[1] % 2):
                bad += 1
    gen_bad = 0
    for a in ring.units:
        for b in ring.units:
            lhs = orc.of_element(gw.element(gw.multiply(gw.angle(a), gw.angle(b))))
            if lhs != orc.mul(orc.angle(a), orc.angle(b)):
                gen_bad += 1
    return {
        "isomorphism": iso,
        "structure": st.to_json(),
        "table_mismatches": bad,
        "angle_product_mismatches": gen_bad,
        "certificate": cert,
    }
