"""Integer Smith normal form, sparse and dense, plus mod-m nullspaces.

The sparse routine is tuned for the matrices this package actually meets:
abelianised Reidemeister-Schreier relators and regular-representation
blocks, which are large (hundreds of rows) but overwhelmingly filled with
0 and +-1.  Pivoting prefers unit entries with minimal fill, so the usual
coefficient explosion of naive SNF rarely gets a chance to start.

Everything returns plain ints; no floats anywhere.
"""

from __future__ import annotations

from math import gcd

__all__ = [
    "sparse_invariants",
    "abelian_invariants",
    "smith_with_transforms",
    "nullspace_mod",
    "normalize_divisor_chain",
]


def sparse_invariants(rows, ncols: int):
    """Diagonalise a sparse integer matrix by row/column operations.

    Args:
        rows: iterable of ``{col: value}`` dicts (zero values allowed).
        ncols: number of columns of the ambient matrix.

    Returns:
        ``(rank, divisors)`` where ``divisors`` are the nontrivial (> 1)
        elementary divisors in a normalized divisibility chain.  The
        cokernel of the matrix is ``Z^(ncols - rank) + sum Z/d``.
    """
    mat = {}
    colidx: dict = {}
    for i, r in enumerate(rows):
        if not isinstance(r, dict):
            r = {j: v for j, v in enumerate(r)}
        clean = {j: v for j, v in r.items() if v}
        if clean:
            mat[i] = clean
            for j in clean:
                colidx.setdefault(j, set()).add(i)

    def set_entry(i, j, v):
        if v:
            mat[i][j] = v
            colidx.setdefault(j, set()).add(i)
        else:
            mat[i].pop(j, None)
            s = colidx.get(j)
            if s:
                s.discard(i)
                if not s:
                    colidx.pop(j, None)

    def row_op(dst, src, q):
        # row dst -= q * row src
        if not q:
            return
        for j, v in list(mat[src].items()):
            set_entry(dst, j, mat[dst].get(j, 0) - q * v)
        if not mat[dst]:
            del mat[dst]

    divisors = []
    while mat:
        # pivot choice: smallest |value|, then least fill
        best = None
        for i, r in mat.items():
            for j, v in r.items():
                key = (abs(v), (len(r) - 1) * (len(colidx[j]) - 1))
                if best is None or key < best[0]:
                    best = (key, i, j)
                    if key[0] == 1 and key[1] == 0:
                        break
            else:
                continue
            break
        _, pi, pj = best

        while True:
            # clear the pivot column with row operations
            pv = mat[pi][pj]
            moved = False
            for i in list(colidx.get(pj, ())):
                if i == pi or i not in mat:
                    continue
                v = mat[i].get(pj, 0)
                if not v:
                    continue
                q = v // pv  # floor division: |remainder| < |pv|
                row_op(i, pi, q)
                rem = mat.get(i, {}).get(pj, 0)
                if rem:
                    # smaller remainder becomes the new pivot (Euclid step)
                    pi = i
                    moved = True
                    break
            if moved:
                continue
            # column is clear except the pivot; clear the pivot row with
            # column operations, which now touch only row pi
            pv = mat[pi][pj]
            stuck = False
            for j, v in list(mat[pi].items()):
                if j == pj:
                    continue
                q, r = divmod(v, pv)
                set_entry(pi, j, r)
                if r:
                    # switch pivot to the smaller entry in the same row
                    pj = j
                    stuck = True
                    break
            if stuck:
                continue
            break

        divisors.append(abs(mat[pi][pj]))
        for j in list(mat[pi]):
            set_entry(pi, j, 0)
        mat.pop(pi, None)

    rank = len(divisors)
    chain = normalize_divisor_chain([d for d in divisors if d != 1])
    return rank, chain


def normalize_divisor_chain(ds):
    """Rewrite a multiset of moduli so each divides the next."""
    ds = [d for d in ds if d not in (0, 1)]
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                g = gcd(a, b)
                l = a * b // g
                if (g, l) != (a, b) and (g, l) != (b, a):
                    ds[i], ds[j] = g, l
                    changed = True
        ds = [d for d in ds if d != 1]
    return sorted(ds)


def abelian_invariants(rows, ncols: int):
    """Cokernel invariants ``(free_rank, torsion_chain)`` of an integer matrix."""
    rank, torsion = sparse_invariants(rows, ncols)
    return ncols - rank, torsion


def smith_with_transforms(a):
    """Dense SNF with unimodular transforms: returns (d, s, t), s*a*t = d.

    Suitable for small matrices only (cubic, dense).  ``d`` is diagonal as
    a list of lists with a proper divisibility chain.
    """
    m = [list(row) for row in a]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    s = [[int(i == j) for j in range(nr)] for i in range(nr)]
    t = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i, k, q):
        for j in range(nc):
            m[i][j] -= q * m[k][j]
        for j in range(nr):
            s[i][j] -= q * s[k][j]

    def col_op(j, k, q):
        for i in range(nr):
            m[i][j] -= q * m[i][k]
        for i in range(nc):
            t[i][j] -= q * t[i][k]

    def swap_rows(i, k):
        m[i], m[k] = m[k], m[i]
        s[i], s[k] = s[k], s[i]

    def swap_cols(j, k):
        for row in m:
            row[j], row[k] = row[k], row[j]
        for row in t:
            row[j], row[k] = row[k], row[j]

    def find_pivot(start):
        best = None
        for i in range(start, nr):
            for j in range(start, nc):
                if m[i][j]:
                    if best is None or abs(m[i][j]) < abs(m[best[0]][best[1]]):
                        best = (i, j)
        return best

    p = 0
    while True:
        loc = find_pivot(p)
        if loc is None:
            break
        swap_rows(p, loc[0])
        swap_cols(p, loc[1])
        while True:
            done = True
            for i in range(p + 1, nr):
                if m[i][p]:
                    q = m[i][p] // m[p][p]
                    row_op(i, p, q)
                    if m[i][p]:
                        swap_rows(p, i)
                        done = False
            for j in range(p + 1, nc):
                if m[p][j]:
                    q = m[p][j] // m[p][p]
                    col_op(j, p, q)
                    if m[p][j]:
                        swap_cols(p, j)
                        done = False
            if done:
                break
        p += 1

    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(min(nr, nc) - 1):
            a_, b_ = m[i][i], m[i + 1][i + 1]
            if b_ and a_ and b_ % a_ != 0:
                # standard 2x2 fixup: add col i+1 to col i, then reduce
                col_op(i, i + 1, -1)
                while True:
                    if m[i + 1][i]:
                        q = m[i + 1][i] // m[i][i]
                        row_op(i + 1, i, q)
                        if m[i + 1][i]:
                            swap_rows(i, i + 1)
                            continue
                    if m[i][i + 1]:
                        q = m[i][i + 1] // m[i][i]
                        col_op(i + 1, i, q)
                        if m[i][i + 1]:
                            swap_cols(i, i + 1)
                            continue
                    break
                changed = True
    for i in range(min(nr, nc)):
        if m[i][i] < 0:
            for j in range(nc):
                t[j][i] = -t[j][i]
            m[i][i] = -m[i][i]
    return m, s, t


def nullspace_mod(a, m: int, ncols: int | None = None):
    """Generators of ``{x in (Z/m)^nc : a @ x = 0 mod m}``.

    Returns a list of generator vectors (tuples of ints mod m) for the
    solution subgroup, derived from the Smith form of ``a``.  ``ncols``
    is required when ``a`` has no rows.
    """
    nr = len(a)
    nc = len(a[0]) if nr else ncols
    if nc is None:
        raise ValueError("ncols required for an empty matrix")
    if nc == 0 or m == 1:
        return []
    if nr == 0:
        return [tuple(int(i == j) for i in range(nc)) for j in range(nc)]
    d, _, t = smith_with_transforms(a)
    gens = []
    for j in range(nc):
        dj = d[j][j] if j < min(nr, nc) else 0
        # constraint on z_j is dj * z_j == 0 mod m
        step = 1 if dj == 0 else m // gcd(dj, m)
        if step % m == 0:
            continue  # only z_j = 0 works
        col = tuple(t[i][j] * step % m for i in range(nc))
        if any(col):
            gens.append(col)
    return gens
