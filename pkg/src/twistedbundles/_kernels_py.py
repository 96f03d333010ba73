"""Pure-Python elimination kernels.

Same call signatures as the compiled ``_kernels`` module.  Matrices are dense
lists of rows of Python ints and are never mutated.
"""


def smith_invariants(rows):
    """Nonzero invariant factors of an integer matrix, in divisibility order."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    t = 0
    while t < m and t < n:
        # pivot of least absolute value in the trailing block
        best = None
        for i in range(t, m):
            ri = a[i]
            for j in range(t, n):
                v = ri[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for r in a:
                r[t], r[pj] = r[pj], r[t]
        while True:
            p = a[t][t]
            dirty = False
            rt = a[t]
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    q = v // p
                    ri = a[i]
                    for j in range(t, n):
                        if rt[j]:
                            ri[j] -= q * rt[j]
                    if ri[t]:
                        dirty = True
            for j in range(t + 1, n):
                v = rt[j]
                if v:
                    q = v // p
                    for r in a:
                        if r[t]:
                            r[j] -= q * r[t]
                    if rt[j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t + 1, m):
                    v = a[i][t]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, t)
                for j in range(t + 1, n):
                    v = rt[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), t, j)
                _, bi, bj = best
                if bi != t:
                    a[t], a[bi] = a[bi], a[t]
                else:
                    for r in a:
                        r[t], r[bj] = r[bj], r[t]
                continue
            # divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            ri = a[bad]
            for j in range(t, n):
                rt[j] += ri[j]
        out.append(abs(a[t][t]))
        t += 1
    return out


def rank_mod_p(rows, p):
    return len(rref_mod_p(rows, p)[1])


def rref_mod_p(rows, p):
    """Reduced row echelon form over Z/p; returns (rows, pivot_columns)."""
    a = [[v % p for v in r] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        row = [(v * inv) % p for v in a[r]]
        a[r] = row
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                ai = a[i]
                for j in range(c, n):
                    if row[j]:
                        ai[j] = (ai[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
    return a, pivots
