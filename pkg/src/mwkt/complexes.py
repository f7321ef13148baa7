"""Frame complexes C(A^n) and general-position complexes over a local ring.

A frame of rank r is a tuple of r column vectors (each a tuple of n ring
elements) whose residues are linearly independent; over a local ring this is
the same as the n x r matrix being left invertible.  The differential drops
one column at a time with alternating signs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import TooLarge
from .linalg import fp_group, kernel_basis

COLUMN_CAP = 2 * 10**4


def residue_rank(ring, vectors):
    """Rank of the residues of ``vectors`` over the residue field."""
    k = ring.residue_field
    rows = [[ring.residue(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = k.inv(rows[rank][c])
        rows[rank] = [k.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [k.sub(x, k.mul(f, y)) for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def all_vectors(ring, n):
    return list(itertools.product(range(ring.size), repeat=n))


def standard_basis(n):
    return tuple(tuple(int(i == j) for i in range(n)) for j in range(n))


def mat_vec(ring, g, v):
    """g (tuple of columns) times the column vector v."""
    n = len(v)
    out = [0] * len(g[0]) if g else []
    for j in range(n):
        if v[j]:
            col = g[j]
            for i in range(len(out)):
                out[i] = ring.add(out[i], ring.mul(col[i], v[j]))
    return tuple(out)


def act(ring, g, frame):
    """Left multiplication of every column by the matrix g."""
    return tuple(mat_vec(ring, g, v) for v in frame)


def determinant(ring, cols):
    n = len(cols)
    if n == 0:
        return 1
    if n == 1:
        return cols[0][0]
    total = 0
    for i in range(n):
        minor = tuple(tuple(c[k] for k in range(n) if k != i) for c in cols[1:])
        term = ring.mul(cols[0][i], determinant(ring, minor))
        total = ring.add(total, term) if i % 2 == 0 else ring.sub(total, term)
    return total


def complete_frame(ring, frame, n):
    """Extend a frame to an invertible n x n matrix with standard basis vectors."""
    cols = list(frame)
    for e in standard_basis(n):
        if len(cols) == n:
            break
        if residue_rank(ring, cols + [e]) == len(cols) + 1:
            cols.append(e)
    return tuple(cols) if len(cols) == n else None


class FrameBasis:
    """Rank-r sequences in canonical (lexicographic) order with an index map."""

    def __init__(self, ring, n, r, frames):
        self.ring = ring
        self.n = n
        self.r = r
        self.frames = frames
        self.index = {f: i for i, f in enumerate(frames)}

    def __len__(self):
        return len(self.frames)


def _extend(ring, n, prev, variant, cap):
    vecs = all_vectors(ring, n)
    out = []
    for f in prev:
        r = len(f)
        for v in vecs:
            new = f + (v,)
            if variant == "U" or r + 1 <= n:
                ok = residue_rank(ring, list(new)) == r + 1
            else:
                ok = all(
                    residue_rank(ring, [f[i] for i in S] + [v]) == n
                    for S in itertools.combinations(range(r), n - 1)
                )
            if ok:
                out.append(new)
                if len(out) > cap:
                    raise TooLarge("frame-basis", len(out), cap)
    return out


def frame_count_formula(q, n, r):
    out = 1
    for i in range(r):
        out *= q**n - q**i
    return out


@dataclass
class FrameComplex:
    ring: object
    n: int
    variant: str
    bases: list
    skipped: dict = field(default_factory=dict)
    completion_failures: int = 0

    def differential_rows(self, r):
        """Rows of d_r : C_r -> C_{r-1} indexed by targets, as {source: coef}."""
        src, tgt = self.bases[r], self.bases[r - 1]
        rows = [dict() for _ in range(len(tgt))]
        for j, f in enumerate(src.frames):
            for i in range(r):
                t = tgt.index[f[:i] + f[i + 1 :]]
                rows[t][j] = rows[t].get(j, 0) + (-1) ** i
        return rows

    def boundary(self, r, chain):
        """d_r of a chain {frame: coef}."""
        out = {}
        for f, c in chain.items():
            for i in range(r):
                g = f[:i] + f[i + 1 :]
                out[g] = out.get(g, 0) + (-1) ** i * c
        return {g: c for g, c in out.items() if c}

    def check_dd(self):
        """d_{r-1} d_r = 0 on every basis element."""
        bad = 0
        for r in range(2, len(self.bases)):
            for f in self.bases[r].frames:
                if self.boundary(r - 1, self.boundary(r, {f: 1})):
                    bad += 1
        return bad == 0

    @property
    def dims(self):
        return [len(b) for b in self.bases]


def build_complex(ring, n, variant="U", r_max=None, cap=COLUMN_CAP, strict=False):
    """Build C_0..C_{r_max}; degrees over the cap are recorded as skipped
    (or raise TooLarge when ``strict``)."""
    if variant not in ("U", "GP"):
        raise ValueError("variant must be U or GP")
    if r_max is None:
        r_max = n if variant == "U" else n + 1
    if variant == "U":
        r_max = min(r_max, n)
    bases = [FrameBasis(ring, n, 0, [()])]
    skipped = {}
    for r in range(1, r_max + 1):
        try:
            frames = _extend(ring, n, bases[-1].frames, variant, cap)
        except TooLarge as e:
            if strict:
                raise
            skipped[r] = f"over cap: more than {e.limit} sequences"
            break
        bases.append(FrameBasis(ring, n, r, frames))
    cx = FrameComplex(ring, n, variant, bases, skipped)
    if variant == "U":
        cx.completion_failures = sum(
            1 for b in bases for f in b.frames if complete_frame(ring, f, n) is None
        )
    return cx


def complex_homology(cx, i):
    """H_i = ker d_i / im d_{i+1}; needs C_{i+1} built (None otherwise)."""
    if i + 1 >= len(cx.bases):
        return None
    dim = len(cx.bases[i])
    if i == 0:
        kb = None
        nker = dim
    else:
        kb = kernel_basis(cx.differential_rows(i), dim)
        nker = len(kb)
    rel = []
    for f in cx.bases[i + 1].frames:
        b = cx.boundary(i + 1, {f: 1})
        vec = {cx.bases[i].index[g]: c for g, c in b.items()}
        rel.append(vec if kb is None else {k: v for k, v in enumerate(kb.coords(vec)) if v})
    return fp_group(nker, rel)
