"""Exhaustive identity checks inside the hat algebra and the tensor model.

Every identity is evaluated for all unit tuples at once: a tuple grid of unit
indices is pushed through the numpy word tables and the unit action arrays,
and the number of tuples where the difference is non-zero is reported.
"""

from __future__ import annotations

import numpy as np

from .kmw import gw_ring, hat_algebra, mw_algebra
from .smodule import distinct_residue_tuples, presentation_relation


def _grid(U, k):
    if k == 0:
        return np.zeros((0, 1), dtype=np.int64)
    return np.indices((U,) * k).reshape(k, -1).astype(np.int64)


class Evaluator:
    """Vectorized evaluation of <g>[w] over a batch of N tuples."""

    def __init__(self, algebra):
        self.alg = algebra
        ud = self.ud = algebra.ud
        self.mul = np.asarray(ud.mul, dtype=np.int64)
        self.inv = np.asarray(ud.inv, dtype=np.int64)
        self.m1 = ud.minus_one

    def piece(self, n):
        return self.alg.piece(n)

    def word(self, ws, g=None, N=None):
        """Coordinates of <g>[ws] for index arrays ws (length n list) and g."""
        n = len(ws)
        p = self.piece(n)
        if N is None:
            N = len(ws[0]) if n else (len(g) if g is not None and np.ndim(g) else 1)
        if n:
            X = p.table[tuple(ws)]
        else:
            X = np.broadcast_to(p.table, (N, p.rank))
        if g is not None:
            if np.ndim(g) == 0:
                X = X @ p.action[int(g)]
            else:
                X = np.einsum("nr,nrs->ns", X, p.action[g])
        return np.asarray(X, dtype=np.int64)

    def pf(self, a, ws, N=None):
        """<<a>>[ws] = <a>[ws] - [ws]."""
        return self.word(ws, a, N) - self.word(ws, None, N)

    def h(self, ws, N=None):
        return self.word(ws, None, N) + self.word(ws, self.m1, N)

    def violations(self, n, X):
        if X.shape[-1] == 0:
            return 0
        R = self.piece(n).reduce(X)
        return int(np.count_nonzero(np.any(R != 0, axis=-1)))

    def times(self, a, b):
        return self.mul[a, b]

    def neg(self, a):
        return self.mul[self.m1, a]


def _item(name, tuples, bad, note=None):
    out = {"item": name, "tuples": int(tuples), "violations": int(bad)}
    if note:
        out["note"] = note
    return out


def _pairs(ev):
    P = np.asarray(ev.ud.pairs, dtype=np.int64).reshape(-1, 2)
    return P[:, 0], P[:, 1]


def _expand(arrs, k, U):
    """Cartesian product of a batch (arrays of length N) with a k-tuple grid."""
    G = _grid(U, k)
    N = len(arrs[0]) if arrs else 1
    M = G.shape[1] if k else 1
    out = [np.repeat(a, M) for a in arrs]
    out += [np.tile(G[i], N) for i in range(k)]
    return out


def _degree_zero_items(ev):
    """<1> = 1, [1] = 0 and <ab> = <a><b> on every piece up to degree 3."""
    items = []
    U = ev.ud.U
    p1 = ev.piece(1)
    bad = int(np.any(p1.reduce(p1.table[0]) != 0))
    items.append(_item("[1] = 0", 1, bad))
    p0 = ev.piece(0)
    bad = 0 if np.array_equal(p0.reduce(p0.action[0]), p0.reduce(np.eye(p0.rank, dtype=np.int64))) else 1
    items.append(_item("<1> = 1", 1, bad))
    bad = 0
    total = 0
    for n in range(0, 4):
        p = ev.piece(n)
        for a in range(U):
            for b in range(U):
                total += 1
                lhs = p.reduce(p.action[int(ev.mul[a, b])])
                rhs = p.reduce(p.action[a] @ p.action[b])
                if not np.array_equal(lhs, rhs):
                    bad += 1
    items.append(_item("<ab> = <a><b> (all degrees <= 3)", total, bad))
    # centrality: <a>[b,c] = [b] <a> [c] = [b, ac] - [b, a]
    a, b, c = _grid(U, 3)
    X = ev.word([b, c], a) - ev.word([b, ev.mul[a, c]]) + ev.word([b, a])
    items.append(_item("<a> central: <a>[b,c] = [b]<a>[c]", a.size, ev.violations(2, X)))
    return items


def basic_hat_identities(ring):
    ev = Evaluator(hat_algebra(ring))
    U = ev.ud.U
    items = []
    a, b = _grid(U, 2)
    X = ev.word([ev.mul[a, b]]) - ev.word([a]) - ev.word([b], a)
    items.append(_item("[ab] = [a] + <a>[b]", a.size, ev.violations(1, X)))
    items.extend(_degree_zero_items(ev))
    binv = ev.inv[b]
    adivb = ev.mul[a, binv]
    X = ev.word([adivb]) - ev.word([a]) + ev.word([b], adivb)
    items.append(_item("[a/b] = [a] - <a/b>[b]", a.size, ev.violations(1, X)))
    (bb,) = _grid(U, 1)
    X = ev.word([ev.inv[bb]]) + ev.word([bb], ev.inv[bb])
    items.append(_item("[b^-1] = -<b^-1>[b]", bb.size, ev.violations(1, X)))
    X = ev.pf(a, [b]) - ev.pf(b, [a])
    items.append(_item("<<a>>[b] = <<b>>[a]", a.size, ev.violations(1, X)))
    pa, pb = _pairs(ev)
    if len(pa):
        A, B, C = _expand([pa, pb], 1, U)
        X = ev.pf(A, [B, C])
        items.append(_item("a+b=1 => <<a>>[b,c] = 0", A.size, ev.violations(2, X)))
        A, B, C, D = _expand([pa, pb], 2, U)
        ab = ev.mul[A, B]
        X = ev.word([C, D], ab) - ev.word([C, D], A) - ev.word([C, D], B) + ev.word([C, D])
        items.append(_item("a+b=1 => <<a>><<b>>[c,d] = 0", A.size, ev.violations(2, X)))
    else:
        items.append(_item("a+b=1 => <<a>>[b,c] = 0", 0, 0, "no Steinberg pairs"))
        items.append(_item("a+b=1 => <<a>><<b>>[c,d] = 0", 0, 0, "no Steinberg pairs"))
    a, b, c = _grid(U, 3)
    X = ev.pf(a, [b, c]) - ev.pf(a, [c, b])
    items.append(_item("<<a>>[b,c] = <<a>>[c,b]", a.size, ev.violations(2, X)))
    return items


def field_hat_identities(ring):
    ev = Evaluator(hat_algebra(ring))
    U = ev.ud.U
    m1 = np.int64(ev.m1)
    items = []
    (a,) = _grid(U, 1)
    X = ev.word([a, ev.neg(a)])
    items.append(_item("[a][-a] = 0", a.size, ev.violations(2, X)))
    M1 = np.full_like(a, m1)
    X1 = ev.word([a, a]) - ev.word([a, M1])
    X2 = ev.word([a, M1]) - ev.word([M1, a])
    bad = int(np.count_nonzero(np.any(ev.piece(2).reduce(X1) != 0, axis=-1) | np.any(ev.piece(2).reduce(X2) != 0, axis=-1))) if X1.shape[-1] else 0
    items.append(_item("[a][a] = [a][-1] = [-1][a]", a.size, bad))
    a, b = _grid(U, 2)
    # eps = -<-1>
    X = ev.word([a, b]) + ev.word([b, a], m1)
    items.append(_item("[a][b] = eps [b][a]", a.size, ev.violations(2, X)))
    a, b, c = _grid(U, 3)
    X = ev.pf(a, [b, c]) + ev.pf(ev.mul[m1, a], [b, c]) - ev.pf(np.full_like(a, m1), [b, c])
    # <<a>> h = <a> + <-a> - 1 - <-1> = <<a>> + <<-a>> - <<-1>>
    items.append(_item("<<a>> h [b,c] = 0", a.size, ev.violations(2, X)))
    a, b = _grid(U, 2)
    X = ev.word([ev.mul[a, a], b]) - ev.h([a, b])
    items.append(_item("[a^2, b] = h [a, b]", a.size, ev.violations(2, X)))
    a, b, c = _grid(U, 3)
    X = ev.pf(ev.mul[a, a], [b, c])
    items.append(_item("<<a^2>>[b,c] = 0", a.size, ev.violations(2, X)))
    return items


def kmw_identities(ring):
    ev = Evaluator(mw_algebra(ring))
    U = ev.ud.U
    items = []
    a, b = _grid(U, 2)
    X = ev.word([ev.mul[a, b]]) - ev.word([a]) - ev.word([b], a)
    items.append(_item("[ab] = [a] + <a>[b]", a.size, ev.violations(1, X)))
    items.extend(_degree_zero_items(ev))
    adivb = ev.mul[a, ev.inv[b]]
    X = ev.word([adivb]) - ev.word([a]) + ev.word([b], adivb)
    items.append(_item("[a/b] = [a] - <a/b>[b]", a.size, ev.violations(1, X)))
    # Z[A*] -> K^MW_0 is a surjective ring map
    gw = gw_ring(ring)
    st = gw.structure
    from .linalg import fp_group

    images = [list(st.gen_coords(j)) for j in range(U)]
    cok = fp_group(st.rank, st.relation_matrix() + images)
    bad = 0 if cok.is_trivial else 1
    for x in range(U):
        for y in range(U):
            if gw.multiply(st.gen_coords(x), st.gen_coords(y)) != st.gen_coords(int(ev.mul[x, y])):
                bad += 1
    if st.gen_coords(0) != st.coords({0: 1}) or gw.multiply(st.gen_coords(0), st.gen_coords(0)) != st.gen_coords(0):
        bad += 1
    items.append(_item("Z[A*] -> K^MW_0 surjective ring map", U * U + 1, bad))
    (a,) = _grid(U, 1)
    for n in (0, 1):
        ws = [] if n == 0 else None
        if n == 0:
            X = ev.pf(a, [], N=a.size) + ev.pf(ev.neg(a), [], N=a.size) - ev.pf(np.full_like(a, ev.m1), [], N=a.size)
            items.append(_item("<<a>> h = 0", a.size, ev.violations(0, X)))
        else:
            A, B = _grid(U, 2)
            X = ev.pf(A, [B]) + ev.pf(ev.neg(A), [B]) - ev.pf(np.full_like(A, ev.m1), [B])
            items.append(_item("<<a>> h [b] = 0", A.size, ev.violations(1, X)))
        del ws
    pa, pb = _pairs(ev)
    X = ev.pf(pa, [pb]) if len(pa) else np.zeros((0, ev.piece(1).rank), dtype=np.int64)
    items.append(_item("a+b=1 => <<a>>[b] = 0", len(pa), ev.violations(1, X) if len(pa) else 0))
    return items


def some_v_relations(ring):
    ev = Evaluator(mw_algebra(ring))
    U = ev.ud.U
    a, b = _grid(U, 2)
    items = []
    X = ev.pf(a, [b]) - ev.pf(b, [a])
    items.append(_item("<<a>>[b] = <<b>>[a] in V", a.size, ev.violations(1, X)))
    (b,) = _grid(U, 1)
    M1 = np.full_like(b, ev.m1)
    X = ev.h([b]) - 2 * ev.word([b]) - ev.pf(b, [M1])
    items.append(_item("h[b] = 2[b] + <<b>>[-1] in V", b.size, ev.violations(1, X)))
    return items


def symbol_relation(ring, max_n=3, algebra=None):
    """The symbol relation of the S_n presentation, evaluated in the hat algebra."""
    alg = algebra or hat_algebra(ring)
    ev = Evaluator(alg)
    U = ev.ud.U
    idx = ring.unit_index
    items = []
    for n in range(1, max_n + 1):
        lams = list(distinct_residue_tuples(ring, n))
        p = ev.piece(n)
        total = len(lams) * U**n
        if p.rank == 0:
            items.append(_item(f"symbol relation, n={n}", total, 0, f"degree-{n} group is zero"))
            continue
        bad = 0
        A = _grid(U, n)
        for lam in lams:
            li = [idx[x] for x in lam]
            X = np.zeros((A.shape[1], p.rank), dtype=np.int64)
            X += ev.word([ev.mul[li[i], A[i]] for i in range(n)])
            X -= ev.word([A[i] for i in range(n)])
            for i in range(n):
                e = i + 1 + n
                sign = (-1) ** e
                g = A[i] if e % 2 == 0 else ev.mul[ev.m1, A[i]]
                ws = []
                for j in range(n):
                    if j != i:
                        d = idx[ring.sub(lam[j], lam[i])]
                        ws.append(ev.mul[d, A[j]])
                ws.append(np.full(A.shape[1], li[i], dtype=np.int64))
                X -= sign * ev.word(ws, g)
            bad += ev.violations(n, X)
        items.append(_item(f"symbol relation, n={n}", total, bad))
    return items


def symbol_relation_reference(ring, n, alg=None):
    """Slow per-tuple version used to cross-check the vectorized evaluator."""
    import itertools

    alg = alg or hat_algebra(ring)
    bad = 0
    for a in itertools.product(ring.units, repeat=n):
        for lam in distinct_residue_tuples(ring, n):
            terms = presentation_relation(ring, a, lam)
            if any(alg.element_coords(n, {(g, w): c for (g, w), c in terms.items()})):
                bad += 1
    return bad
