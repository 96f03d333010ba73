# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels (int64 with overflow detection).

``smith_invariants`` raises OverflowError as soon as an intermediate leaves
the int64 range; the caller then retries with arbitrary precision.
"""
from libc.stdlib cimport malloc, free

cdef extern from *:
    bint mul_ovf "__builtin_mul_overflow" (long long a, long long b, long long *res) nogil
    bint sub_ovf "__builtin_sub_overflow" (long long a, long long b, long long *res) nogil
    bint add_ovf "__builtin_add_overflow" (long long a, long long b, long long *res) nogil


cdef inline long long llabs_(long long v) nogil:
    return -v if v < 0 else v


cdef inline long long floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef long long* _load(rows, Py_ssize_t m, Py_ssize_t n) except NULL:
    cdef long long* a = <long long*> malloc(max(m * n, 1) * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    try:
        for i in range(m):
            r = rows[i]
            for j in range(n):
                a[i * n + j] = r[j]
    except OverflowError:
        free(a)
        raise
    return a


cdef int _swap_rows(long long* a, Py_ssize_t n, Py_ssize_t i, Py_ssize_t k) nogil:
    cdef Py_ssize_t j
    cdef long long tmp
    if i == k:
        return 0
    for j in range(n):
        tmp = a[i * n + j]
        a[i * n + j] = a[k * n + j]
        a[k * n + j] = tmp
    return 0


cdef int _swap_cols(long long* a, Py_ssize_t m, Py_ssize_t n, Py_ssize_t i, Py_ssize_t k) nogil:
    cdef Py_ssize_t r
    cdef long long tmp
    if i == k:
        return 0
    for r in range(m):
        tmp = a[r * n + i]
        a[r * n + i] = a[r * n + k]
        a[r * n + k] = tmp
    return 0


# returns 1 on overflow
cdef int _snf(long long* a, Py_ssize_t m, Py_ssize_t n, long long* diag, Py_ssize_t* count) nogil:
    cdef Py_ssize_t t = 0, i, j, bi, bj, bad
    cdef long long best, v, p, q, prod
    cdef bint dirty, found
    count[0] = 0
    while t < m and t < n:
        best = 0
        bi = -1
        bj = -1
        found = False
        for i in range(t, m):
            for j in range(t, n):
                v = llabs_(a[i * n + j])
                if v != 0 and (best == 0 or v < best):
                    best = v
                    bi = i
                    bj = j
                    if v == 1:
                        found = True
                        break
            if found:
                break
        if bi < 0:
            break
        _swap_rows(a, n, t, bi)
        _swap_cols(a, m, n, t, bj)
        while True:
            p = a[t * n + t]
            dirty = False
            for i in range(t + 1, m):
                v = a[i * n + t]
                if v != 0:
                    q = floordiv(v, p)
                    for j in range(t, n):
                        if a[t * n + j] != 0:
                            if mul_ovf(q, a[t * n + j], &prod):
                                return 1
                            if sub_ovf(a[i * n + j], prod, &a[i * n + j]):
                                return 1
                    if a[i * n + t] != 0:
                        dirty = True
            for j in range(t + 1, n):
                v = a[t * n + j]
                if v != 0:
                    q = floordiv(v, p)
                    for i in range(m):
                        if a[i * n + t] != 0:
                            if mul_ovf(q, a[i * n + t], &prod):
                                return 1
                            if sub_ovf(a[i * n + j], prod, &a[i * n + j]):
                                return 1
                    if a[t * n + j] != 0:
                        dirty = True
            if dirty:
                best = 0
                bi = -1
                bj = -1
                for i in range(t + 1, m):
                    v = llabs_(a[i * n + t])
                    if v != 0 and (best == 0 or v < best):
                        best = v
                        bi = i
                        bj = t
                for j in range(t + 1, n):
                    v = llabs_(a[t * n + j])
                    if v != 0 and (best == 0 or v < best):
                        best = v
                        bi = t
                        bj = j
                if bi != t:
                    _swap_rows(a, n, t, bi)
                else:
                    _swap_cols(a, m, n, t, bj)
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i * n + j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            for j in range(t, n):
                if add_ovf(a[t * n + j], a[bad * n + j], &a[t * n + j]):
                    return 1
        diag[count[0]] = llabs_(a[t * n + t])
        count[0] += 1
        t += 1
    return 0


def smith_invariants(rows):
    """Nonzero invariant factors of an integer matrix, in divisibility order."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        return []
    cdef long long* a = _load(rows, m, n)
    cdef long long* diag = <long long*> malloc(min(m, n) * sizeof(long long))
    cdef Py_ssize_t count = 0
    cdef int ovf
    if diag == NULL:
        free(a)
        raise MemoryError()
    with nogil:
        ovf = _snf(a, m, n, diag, &count)
    try:
        if ovf:
            raise OverflowError("int64 overflow during Smith elimination")
        return [diag[i] for i in range(count)]
    finally:
        free(a)
        free(diag)


cdef Py_ssize_t _rref(long long* a, Py_ssize_t m, Py_ssize_t n, long long p, Py_ssize_t* piv) nogil:
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef long long inv, f, b, x, y, t
    for c in range(n):
        if r == m:
            break
        k = -1
        for i in range(r, m):
            if a[i * n + c] != 0:
                k = i
                break
        if k < 0:
            continue
        _swap_rows(a, n, r, k)
        # modular inverse by extended Euclid
        b = a[r * n + c]
        x = 1
        y = 0
        t = p
        f = b
        while t != 0:
            k = f / t
            f, t = t, f - k * t
            x, y = y, x - k * y
        inv = x % p
        if inv < 0:
            inv += p
        for j in range(c, n):
            a[r * n + j] = (a[r * n + j] * inv) % p
        for i in range(m):
            if i != r and a[i * n + c] != 0:
                f = a[i * n + c]
                for j in range(c, n):
                    if a[r * n + j] != 0:
                        a[i * n + j] = (a[i * n + j] - f * a[r * n + j]) % p
                        if a[i * n + j] < 0:
                            a[i * n + j] += p
        piv[r] = c
        r += 1
    return r


def rref_mod_p(rows, p):
    """Reduced row echelon form over Z/p; returns (rows, pivot_columns)."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0]) if m else 0
    cdef long long pp = p
    if p >= (1 << 31):
        raise OverflowError("modulus too large for the compiled kernel")
    if m == 0 or n == 0:
        return [list(r) for r in rows], []
    reduced = [[v % p for v in r] for r in rows]
    cdef long long* a = _load(reduced, m, n)
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc(max(min(m, n), 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t rank, i, j
    if piv == NULL:
        free(a)
        raise MemoryError()
    with nogil:
        rank = _rref(a, m, n, pp, piv)
    try:
        out = [[a[i * n + j] for j in range(n)] for i in range(m)]
        return out, [piv[i] for i in range(rank)]
    finally:
        free(a)
        free(piv)


def rank_mod_p(rows, p):
    return len(rref_mod_p(rows, p)[1])
