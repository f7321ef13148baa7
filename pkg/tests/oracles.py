"""Brute-force reference computations for the test suite.

Nothing here imports the package's linear algebra or presentations: groups
are written down straight from their defining generators and relations and
handed to sympy's Smith normal form.  Only ring arithmetic is shared, and the
rings have their own naive cross-checks in test_rings.py.
"""

import itertools

from sympy import QQ, ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors


def structure(ncols, rows):
    """(free_rank, invariant_factors) of Z^ncols / span(rows)."""
    ncols, rows = _strip_unit_pivots(ncols, rows)
    rows = [r for r in rows if any(r)]
    if not rows:
        return ncols, []
    f = [abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ)]
    nonzero = [d for d in f if d]
    return ncols - len(nonzero), sorted(d for d in nonzero if d > 1)


def _strip_unit_pivots(ncols, rows):
    """Eliminate generators that some relation expresses with coefficient +-1.

    If a relation has a unit in column c, e_c is redundant: clear column c
    from the other relations and drop both. Leaves a smaller dense problem.
    """
    live = {i: {j: int(v) for j, v in enumerate(r) if v} for i, r in enumerate(rows)}
    live = {i: r for i, r in live.items() if r}
    bycol = {}
    for i, r in live.items():
        for j in r:
            bycol.setdefault(j, set()).add(i)
    dropped = set()
    progress = True
    while progress:
        progress = False
        for i in sorted(live, key=lambda k: len(live[k])):
            r = live[i]
            c = next((j for j, v in r.items() if abs(v) == 1), None)
            if c is None:
                continue
            u = r[c]
            for k in list(bycol.get(c, ())):
                if k == i:
                    continue
                other = live[k]
                f = other[c] * u
                for j, v in r.items():
                    nv = other.get(j, 0) - f * v
                    if nv:
                        if j not in other:
                            bycol.setdefault(j, set()).add(k)
                        other[j] = nv
                    else:
                        other.pop(j, None)
                        bycol[j].discard(k)
                if not other:
                    del live[k]
            for j in r:
                bycol[j].discard(i)
            del live[i]
            dropped.add(c)
            progress = True
            break
    keep = [j for j in range(ncols) if j not in dropped]
    where = {j: n for n, j in enumerate(keep)}
    out = []
    for r in live.values():
        row = [0] * len(keep)
        for j, v in r.items():
            row[where[j]] = v
        out.append(row)
    return len(keep), out


def as_json(st):
    return {"free_rank": st[0], "invariant_factors": st[1]}


def units(ring):
    return [x for x in range(ring.size) if any(ring.mul(x, y) == 1 for y in range(ring.size))]


# group ring elements as {unit: coef}


def gmul(ring, x, y):
    out = {}
    for a, c in x.items():
        for b, d in y.items():
            k = ring.mul(a, b)
            out[k] = out.get(k, 0) + c * d
    return {k: v for k, v in out.items() if v}


def gadd(*xs):
    out = {}
    for x in xs:
        for k, v in x.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def angle(a):
    return {a: 1}


def pf(a):
    return gadd({a: 1}, {1: -1})


def hyp(ring):
    return gadd({1: 1}, {ring.sub(0, 1): 1})


def gw_oracle(ring):
    """Z[A*] modulo the ideal generated by <<a>>h and <<a>><<1-a>>."""
    U = units(ring)
    pos = {u: i for i, u in enumerate(U)}
    rows = []
    gens = [gmul(ring, pf(a), hyp(ring)) for a in U]
    gens += [gmul(ring, pf(a), pf(ring.sub(1, a))) for a in U if ring.sub(1, a) in pos]
    for r in gens:
        for g in U:
            v = [0] * len(U)
            for k, c in gmul(ring, r, angle(g)).items():
                v[pos[k]] += c
            rows.append(v)
    return structure(len(U), rows)


def milnor_oracle(ring, n):
    """Symbols {a_1..a_n}, multiplicative in every slot, Steinberg on adjacent slots."""
    U = units(ring)
    words = list(itertools.product(U, repeat=n))
    pos = {w: i for i, w in enumerate(words)}
    rows = []
    for w in words:
        for i in range(n):
            for b in U:
                v = [0] * len(words)
                v[pos[w[:i] + (ring.mul(w[i], b),) + w[i + 1 :]]] += 1
                v[pos[w]] -= 1
                v[pos[w[:i] + (b,) + w[i + 1 :]]] -= 1
                rows.append(v)
            if i + 1 < n and ring.add(w[i], w[i + 1]) == 1:
                v = [0] * len(words)
                v[pos[w]] += 1
                rows.append(v)
    return structure(len(words), rows)


def tensor_oracle(ring, n, gw=True, steinberg=True):
    """Z[A*]-span of words [a_1]..[a_n] modulo slot additivity, Steinberg and,
    when ``gw``, the relations making each slot a GW-module V.

    Generators are pairs (g, word); every relation is imposed together with
    all of its <g>-translates.
    """
    U = units(ring)
    unit_set = set(U)
    keys = [(g, w) for g in U for w in itertools.product(U, repeat=n)]
    pos = {k: i for i, k in enumerate(keys)}

    def vec(terms):
        v = [0] * len(keys)
        for (g, w), c in terms:
            v[pos[(g, w)]] += c
        return v

    base = []  # relations as lists of ((g, word), coef) with g = 1
    for w in itertools.product(U, repeat=n):
        for i in range(n):
            if w[i] == 1:
                base.append([((1, w), 1)])
            for b in U:
                ab = w[:i] + (ring.mul(w[i], b),) + w[i + 1 :]
                wb = w[:i] + (b,) + w[i + 1 :]
                base.append([((1, ab), 1), ((1, w), -1), ((w[i], wb), -1)])
            if steinberg and i + 1 < n and ring.add(w[i], w[i + 1]) == 1:
                base.append([((1, w), 1)])
        if not gw:
            continue
        # GW acts through Z[A*]/(<<a>>h, <<a>><<1-a>>); each slot is a quotient V of I
        for a in U:
            for c in [gmul(ring, pf(a), hyp(ring))] + (
                [gmul(ring, pf(a), pf(ring.sub(1, a)))] if steinberg and ring.sub(1, a) in unit_set else []
            ):
                base.append([((g, w), k) for g, k in c.items()])
        for i in range(n):
            a = ring.sub(1, w[i])
            if steinberg and a in unit_set:
                base.append([((a, w), 1), ((1, w), -1)])
    rows = []
    for rel in base:
        for h in U:
            rows.append(vec([((ring.mul(h, g), w), c) for (g, w), c in rel]))
    return structure(len(keys), rows)


# frame complexes and S_2 over a prime field F_p, written out by hand


def rank_mod_p(vectors, p):
    rows = [list(v) for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def frames(p, n, r):
    vecs = list(itertools.product(range(p), repeat=n))
    out = [()]
    for k in range(r):
        out = [f + (v,) for f in out for v in vecs if rank_mod_p(list(f) + [v], p) == k + 1]
    return out


def boundary_matrix(p, n, r):
    """d_r : C_r -> C_{r-1} as a dense matrix (rows = targets)."""
    src, tgt = frames(p, n, r), frames(p, n, r - 1)
    pos = {f: i for i, f in enumerate(tgt)}
    M = [[0] * len(src) for _ in tgt]
    for j, f in enumerate(src):
        for i in range(r):
            M[pos[f[:i] + f[i + 1 :]]][j] += (-1) ** i
    return M


def _kernel_with_coords(M):
    """Z-basis K of ker M plus a map giving coordinates of kernel vectors in K."""
    from sympy.polys.matrices import DomainMatrix
    from sympy.polys.matrices.normalforms import smith_normal_decomp

    D = DomainMatrix([[ZZ(x) for x in row] for row in M], (len(M), len(M[0])), ZZ)
    S, _, V = smith_normal_decomp(D)
    diag = [S[i, i].element for i in range(min(S.shape))]
    zero = [j for j in range(V.shape[1]) if j >= len(diag) or diag[j] == 0]
    Vl = V.to_list()
    K = [[int(Vl[i][j]) for i in range(len(Vl))] for j in zero]
    Vinv = V.convert_to(QQ).inv().to_list()
    rows = [[int(x) for x in Vinv[j]] for j in zero]

    def coords(x):
        return [sum(r[i] * x[i] for i in range(len(x)) if x[i]) for r in rows]

    return K, coords


def integral_kernel(M):
    """Z-basis of {x : M x = 0} as a list of column vectors."""
    return _kernel_with_coords(M)[0]


def chain_homology(p, n, i):
    """H_i of the frame complex on F_p^n (needs C_{i+1})."""
    dim = len(frames(p, n, i))
    incoming = boundary_matrix(p, n, i + 1)
    if i == 0:
        return structure(dim, [list(col) for col in zip(*incoming)])
    K, coords = _kernel_with_coords(boundary_matrix(p, n, i))
    return structure(len(K), [coords(list(col)) for col in zip(*incoming)])


def _matvec(g, v, p):
    return tuple(sum(g[i][j] * v[j] for j in range(len(v))) % p for i in range(len(g)))


def _cycle_basis(F):
    """Fundamental cycles of the graph whose edges are 2-frames (v1 -> v2).

    d_2 of the 2-frame complex is this graph's incidence matrix, so the
    cycles form a Z-basis of ker d_2 and a kernel vector's coordinates are its
    entries on the non-tree edges.
    """
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            v = parent[v]
        return v

    adj, nontree = {}, []
    for j, (a, b) in enumerate(F):
        ra, rb = find(a), find(b)
        if ra == rb:
            nontree.append(j)
        else:
            parent[ra] = rb
            adj.setdefault(a, []).append((b, j, 1))
            adj.setdefault(b, []).append((a, j, -1))

    def path(src, dst):
        # signed tree edges along the unique tree path src -> dst
        stack, seen = [(src, [])], {src}
        while stack:
            v, acc = stack.pop()
            if v == dst:
                return acc
            for w, j, sgn in adj.get(v, []):
                if w not in seen:
                    seen.add(w)
                    stack.append((w, acc + [(j, sgn)]))
        raise AssertionError("graph not connected")

    K = []
    for j in nontree:
        a, b = F[j]
        z = [0] * len(F)
        z[j] = 1
        for e, sgn in path(b, a):
            z[e] += sgn
        K.append(z)
    return K, nontree


def s2_oracle(p, generators_only=False):
    """S_2(F_p): SL_2-coinvariants of ker d_2 on C_2 = Z[frames of F_p^2]."""
    F = frames(p, 2, 2)
    pos = {f: i for i, f in enumerate(F)}
    K, nontree = _cycle_basis(F)
    if generators_only:
        # elementary matrices generate SL_2 of a prime field
        sl2 = [((1, 1), (0, 1)), ((1, 0), (1, 1))]
    else:
        sl2 = [
            ((a, b), (c, d))
            for a, b, c, d in itertools.product(range(p), repeat=4)
            if (a * d - b * c) % p == 1
        ]
    rows = []
    for g in sl2:
        for z in K:
            gz = [0] * len(F)
            for j, c in enumerate(z):
                if c:
                    f = F[j]
                    gz[pos[(_matvec(g, f[0], p), _matvec(g, f[1], p))]] += c
            rows.append([gz[j] - z[j] for j in nontree])
    return structure(len(K), rows)
