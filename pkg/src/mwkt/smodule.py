"""The coinvariant module S_n(A) of top cycles of the frame complex.

S_n is the group of n-cycles of C(A^n) modulo g z - z for g in SL_n(A).
Cycles are carried as {frame: coef} dicts; classes as normal-form
coordinate tuples.  S_0 is Z[A*] itself and is handled separately.
"""

from __future__ import annotations

import itertools

import numpy as np

from .complexes import act, build_complex, determinant, standard_basis
from .errors import BadLambda, RingMismatch, TooLarge, TransversalNotFound
from .groupring import GroupRingElem
from .kmw import hat_algebra
from .linalg import FpHom, Lattice, fp_group, kernel_basis, preimage_lattice

DEFAULT_MAX_N = 2


def elementary(ring, n, i, j, lam):
    """Identity plus lam at row i, column j (as a tuple of columns)."""
    cols = [list(c) for c in standard_basis(n)]
    cols[j][i] = ring.add(cols[j][i], lam)
    return tuple(tuple(c) for c in cols)


def diagonal(ring, n, u):
    cols = [list(c) for c in standard_basis(n)]
    cols[0][0] = u
    return tuple(tuple(c) for c in cols)


def sl_generators(ring, n):
    """Elementary matrices e_ij(x) for x in the additive basis, the unit-group
    generators and the maximal-ideal generators."""
    vals = []
    for x in list(ring.additive_generators) + list(ring.unit_group.generators) + list(ring.maximal_ideal_generators):
        if x and x not in vals:
            vals.append(x)
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                for x in vals:
                    out.append(elementary(ring, n, i, j, x))
    return out


def symbol_cycle(ring, a):
    """d_{n+1}(e_1, ..., e_n, a) as a chain of frames."""
    n = len(a)
    seq = standard_basis(n) + (tuple(a),)
    out = {}
    for i in range(n + 1):
        f = seq[:i] + seq[i + 1 :]
        out[f] = out.get(f, 0) + (-1) ** i
    return out


def block_sum(x, y):
    """Block-diagonal juxtaposition of two chains of square frames."""
    out = {}
    for a, c in x.items():
        m = len(a)
        for b, d in y.items():
            n = len(b)
            cols = tuple(tuple(col) + (0,) * n for col in a) + tuple((0,) * m + tuple(col) for col in b)
            out[cols] = out.get(cols, 0) + c * d
    return {f: c for f, c in out.items() if c}


class SnModule:
    def __init__(self, ring, n, heavy=False):
        if n < 1:
            raise ValueError("use group_ring for S_0")
        if n > DEFAULT_MAX_N and not heavy:
            raise TooLarge("s-module-degree", n, DEFAULT_MAX_N)
        self.ring = ring
        self.n = n
        self.cx = build_complex(ring, n, "U", r_max=n, strict=True)
        self.basis = self.cx.bases[n]
        self.kb = kernel_basis(self.cx.differential_rows(n), len(self.basis))
        self.gens = sl_generators(ring, n)
        rows = []
        for g in self.gens:
            perm = self._perm(g)
            for z in self.kb.basis:
                diff = {}
                for j, c in z.items():
                    k = perm[j]
                    diff[k] = diff.get(k, 0) + c
                    diff[j] = diff.get(j, 0) - c
                coords = self.kb.coords({k: v for k, v in diff.items() if v})
                rows.append({k: v for k, v in enumerate(coords) if v})
        self.structure = fp_group(len(self.kb), rows)
        self._twist = {}

    def _perm(self, g):
        idx = self.basis.index
        return [idx[act(self.ring, g, f)] for f in self.basis.frames]

    # cycles and classes -------------------------------------------------------------
    def chain_vector(self, chain):
        idx = self.basis.index
        return {idx[f]: c for f, c in chain.items() if c}

    def is_cycle(self, chain):
        return not self.cx.boundary(self.n, chain)

    def class_of(self, chain):
        if not self.is_cycle(chain):
            raise ValueError("chain is not a cycle")
        return self.structure.coords(self.kb.coords(self.chain_vector(chain)))

    def lift(self, t):
        """A cycle representing the t-th normal-form generator."""
        out = {}
        for k, c in self.structure.lift(t).items():
            for j, v in self.kb.basis[k].items():
                f = self.basis.frames[j]
                out[f] = out.get(f, 0) + c * v
        return {f: c for f, c in out.items() if c}

    def element_cycle(self, x):
        out = {}
        for t, c in enumerate(x):
            if c:
                for f, v in self.lift(t).items():
                    out[f] = out.get(f, 0) + c * v
        return {f: c for f, c in out.items() if c}

    def act_chain(self, g, chain):
        return {act(self.ring, g, f): c for f, c in chain.items()}

    def twist_chain(self, u, chain):
        return self.act_chain(diagonal(self.ring, self.n, u), chain)

    def action_matrix(self, u):
        """Rows: <u> times each normal-form generator."""
        if u not in self._twist:
            self._twist[u] = [self.class_of(self.twist_chain(u, self.lift(t))) for t in range(self.structure.rank)]
        return self._twist[u]

    def act(self, u, x):
        acc = [0] * self.structure.rank
        for c, row in zip(x, self.action_matrix(u)):
            if c:
                for k, v in enumerate(row):
                    acc[k] += c * v
        return self.structure.reduce(acc)

    def symbol(self, a, g=1):
        """Class of <g>[a_1, ..., a_n]."""
        x = self.class_of(symbol_cycle(self.ring, a))
        return x if g == 1 else self.act(g, x)

    def combo(self, terms):
        """Class of sum coef <g>[a] over {(g, a): coef}."""
        acc = [0] * self.structure.rank
        for (g, a), c in terms.items():
            if c:
                for k, v in enumerate(self.symbol(a, g)):
                    acc[k] += c * v
        return self.structure.reduce(acc)

    def det_chain(self, chain):
        out = {}
        for f, c in chain.items():
            d = determinant(self.ring, f)
            out[d] = out.get(d, 0) + c
        return GroupRingElem(self.ring, out)

    def det(self, x):
        return self.det_chain(self.element_cycle(x))

    def lift_independence(self, u, samples=3):
        """The twist by <u> agrees for several matrices of determinant u."""
        base = self.action_matrix(u)
        lifts = [act(self.ring, diagonal(self.ring, self.n, u), s) for s in self.gens[:samples]]
        lifts += [tuple(act(self.ring, s, diagonal(self.ring, self.n, u))) for s in self.gens[:samples]]
        for g in lifts:
            for t in range(self.structure.rank):
                if self.class_of(self.act_chain(g, self.lift(t))) != base[t]:
                    return False
        return True

    def to_json(self):
        return self.structure.to_json()


def s_module(ring, n, heavy=False):
    cache = ring.__dict__.setdefault("_mwkt_smod", {})
    if n not in cache:
        cache[n] = SnModule(ring, n, heavy=heavy)
    return cache[n]


def symbol_det_formula(ring, a):
    """Expected det of [a_1..a_n]: (-1)^n <1> + sum (-1)^(i+1) <(-1)^(n+i) a_i>."""
    n = len(a)
    out = GroupRingElem(ring, {1: (-1) ** n})
    for i, x in enumerate(a, start=1):
        v = x if (n + i) % 2 == 0 else ring.neg(x)
        out = out + GroupRingElem(ring, {v: (-1) ** (i + 1)})
    return out


def product_of_generators_formula(ring, a):
    """[a_1]...[a_n] = sum over J of (-1)^|J| <prod_J a> [a with J set to 1]."""
    terms = {}
    n = len(a)
    for size in range(n + 1):
        for J in itertools.combinations(range(n), size):
            g = 1
            for j in J:
                g = ring.mul(g, a[j])
            w = tuple(1 if i in J else a[i] for i in range(n))
            terms[(g, w)] = terms.get((g, w), 0) + (-1) ** size
    return terms


def sn_product(mod_x, x_chain, mod_y, y_chain):
    """Chain of the product of two cycles (block sum); the caller picks S_{m+n}."""
    if mod_x.ring != mod_y.ring:
        raise RingMismatch(f"{mod_x.ring.spec} vs {mod_y.ring.spec}")
    return block_sum(x_chain, y_chain)


def presentation_relation(ring, a, lam):
    """Both sides of the symbol relation for (a, lambda) as {(g, word): coef}.

    [lam_1 a_1, ..., lam_n a_n] - [a_1, ..., a_n]
        = sum_i eps^(i+n) <a_i> [(lam_1 - lam_i) a_1, ..., omit i, ..., lam_i]
    with eps = -<-1>.  Returns lhs - rhs.
    """
    n = len(a)
    m1 = ring.minus_one
    terms = {}

    def add(g, w, c):
        terms[(g, w)] = terms.get((g, w), 0) + c

    add(1, tuple(ring.mul(l, x) for l, x in zip(lam, a)), 1)
    add(1, tuple(a), -1)
    for i in range(1, n + 1):
        e = i + n
        # eps^e = (-1)^e <(-1)^e>
        sign = (-1) ** e
        g = ring.mul(a[i - 1], m1 if e % 2 else 1)
        w = tuple(ring.mul(ring.sub(lam[j], lam[i - 1]), a[j]) for j in range(n) if j != i - 1) + (lam[i - 1],)
        add(g, w, -sign)
    return {k: v for k, v in terms.items() if v}


def distinct_residue_tuples(ring, n):
    units = ring.units
    for lam in itertools.product(units, repeat=n):
        res = [ring.residue(x) for x in lam]
        if len(set(res)) == n:
            yield lam


def transversal(mod, chain):
    """First v (canonical order) with alpha^{-1} v all-unit for every frame."""
    ring = mod.ring
    n = mod.n
    frames = list(chain)
    for v in itertools.product(range(ring.size), repeat=n):
        ok = True
        for f in frames:
            for i in range(n):
                cols = f[:i] + (v,) + f[i + 1 :]
                if not ring.is_unit(determinant(ring, cols)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return v
    return None


def reduce_to_symbols(mod, chain):
    """Rewrite a cycle as (-1)^n sum n_i <det alpha_i> [alpha_i^{-1} v]."""
    ring = mod.ring
    n = mod.n
    v = transversal(mod, chain)
    if v is None:
        covered = sorted({tuple(f[:i] + f[i + 1 :]) for f in chain for i in range(n)})
        raise TransversalNotFound(
            f"every vector is in the span of n-1 columns of some frame ({len(covered)} spans covered)", covered
        )
    terms = {}
    for f, c in chain.items():
        d = determinant(ring, f)
        dinv = ring.inv(d)
        x = tuple(ring.mul(determinant(ring, f[:i] + (v,) + f[i + 1 :]), dinv) for i in range(n))
        key = (d, x)
        terms[key] = terms.get(key, 0) + (-1) ** n * c
    return {k: c for k, c in terms.items() if c}, v


class TMap:
    """T : S_n -> K^_n, <g>[a] -> <g>[a_1]...[a_n], certified on the symbol span.

    The ambient module is free on pairs (g, a).  T is well defined exactly when
    every ambient relation among symbol classes in S_n maps to zero in the hat
    algebra; it is defined on all of S_n when the symbols generate.
    """

    def __init__(self, ring, n, heavy=False):
        self.ring = ring
        self.n = n
        self.smod = s_module(ring, n, heavy=heavy)
        self.khat = hat_algebra(ring).piece(n)
        st = self.smod.structure
        units = ring.units
        self.ambient = [(g, w) for g in units for w in itertools.product(units, repeat=n)]
        idx = ring.unit_index
        phi = [list(self.smod.symbol(w, g)) for g, w in self.ambient]
        psi = [
            tuple(int(x) for x in self.khat.word([idx[a] for a in w], idx[g])) for g, w in self.ambient
        ]
        self.phi, self.psi = phi, psi
        rel = st.relation_matrix()
        kern = preimage_lattice(phi, rel, st.rank) if st.rank else [
            [int(i == j) for j in range(len(phi))] for i in range(len(phi))
        ]
        bad = 0
        for row in kern:
            acc = np.zeros(self.khat.rank, dtype=np.int64)
            for c, v in zip(row, psi):
                if c:
                    acc += c * np.asarray(v, dtype=np.int64)
            if not self.khat.is_zero(acc):
                bad += 1
        self.kernel_rank = len(kern)
        self.violations = bad
        span = fp_group(st.rank, rel + phi)
        self.symbols_generate = span.is_trivial
        self.hom = None
        if self.symbols_generate and not bad:
            lat = Lattice(phi + rel, st.rank)
            images = []
            for t in range(st.rank):
                e = [int(t == k) for k in range(st.rank)]
                c = lat.solve(e)[: len(phi)]
                acc = np.zeros(self.khat.rank, dtype=np.int64)
                for ci, v in zip(c, psi):
                    if ci:
                        acc += ci * np.asarray(v, dtype=np.int64)
                images.append(tuple(int(x) for x in self.khat.reduce(acc)))
            self.hom = FpHom(st, self.khat.structure, images)
            self.hom.check_orders()

    @property
    def well_defined(self):
        return self.violations == 0

    def apply_symbols(self, terms):
        """T of sum coef <g>[a] given on symbols."""
        idx = self.ring.unit_index
        return self.khat.combo({(idx[g], tuple(idx[a] for a in w)): c for (g, w), c in terms.items()})

    def apply(self, x):
        if self.hom is None:
            raise ValueError("T is only certified on the symbol span")
        return self.hom.apply(x)

    def certificate(self):
        return {
            "ambient_symbols": len(self.ambient),
            "relation_lattice_rank": self.kernel_rank,
            "violations": self.violations,
            "symbols_generate": self.symbols_generate,
        }


def t_map(ring, n, heavy=False):
    return TMap(ring, n, heavy=heavy)


def beta_terms(ring, lam):
    """The six-term symbol combination beta_lambda in degree 3."""
    if not ring.is_unit(lam) or not ring.is_unit(ring.sub(1, lam)) or ring.residue(lam) == ring.residue(1):
        raise BadLambda(f"{lam} is not admissible")
    one = 1
    oml = ring.sub(1, lam)
    ml = ring.neg(lam)
    words = [
        ((one, oml, lam), 1),
        ((one, oml, one), -1),
        ((one, ml, one), 1),
        ((oml, lam, one), -1),
        ((oml, one, one), 1),
        ((ml, one, one), -1),
    ]
    terms = {}
    for w, c in words:
        terms[(1, w)] = terms.get((1, w), 0) + c
    return terms


def beta(ring, lam, heavy=True):
    mod = s_module(ring, 3, heavy=heavy)
    return mod.combo(beta_terms(ring, lam))
