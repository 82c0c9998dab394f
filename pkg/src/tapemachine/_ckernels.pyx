# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled execution kernels; must match tapemachine._pykernels exactly."""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memmove


cdef struct Runs:
    int* sym
    long long* cnt
    Py_ssize_t n
    Py_ssize_t cap


cdef int runs_init(Runs* r) except -1:
    r.n = 0
    r.cap = 16
    r.sym = <int*> malloc(r.cap * sizeof(int))
    r.cnt = <long long*> malloc(r.cap * sizeof(long long))
    if r.sym == NULL or r.cnt == NULL:
        raise MemoryError()
    return 0


cdef void runs_free(Runs* r) noexcept:
    free(r.sym)
    free(r.cnt)
    r.sym = NULL
    r.cnt = NULL


cdef int runs_push(Runs* r, int s, long long k, int blank) except -1:
    cdef int* ns
    cdef long long* nc
    if r.n > 0:
        if r.sym[r.n - 1] == s:
            r.cnt[r.n - 1] += k
            return 0
    elif s == blank:
        return 0
    if r.n == r.cap:
        ns = <int*> realloc(r.sym, 2 * r.cap * sizeof(int))
        if ns == NULL:
            raise MemoryError()
        r.sym = ns
        nc = <long long*> realloc(r.cnt, 2 * r.cap * sizeof(long long))
        if nc == NULL:
            raise MemoryError()
        r.cnt = nc
        r.cap *= 2
    r.sym[r.n] = s
    r.cnt[r.n] = k
    r.n += 1
    return 0


cdef inline int runs_pop_one(Runs* r, int blank) noexcept:
    cdef int s
    if r.n == 0:
        return blank
    s = r.sym[r.n - 1]
    r.cnt[r.n - 1] -= 1
    if r.cnt[r.n - 1] == 0:
        r.n -= 1
    return s


cdef list runs_to_list(Runs* r):
    cdef Py_ssize_t i
    return [(r.sym[i], r.cnt[i]) for i in range(r.n - 1, -1, -1)]


def naive_run(const int[::1] dispatch, const int[::1] next_state,
              const int[::1] write, const int[::1] move,
              const signed char[::1] is_final,
              int num_states, int num_symbols, int blank, int state,
              list symbols, long long max_steps):
    cdef Py_ssize_t nrules = next_state.shape[0]
    cdef Py_ssize_t n = len(symbols)
    cdef Py_ssize_t cap = max(2 * n + 64, 256)
    cdef Py_ssize_t origin = cap // 4
    cdef Py_ssize_t idx, i, grow
    cdef long long head = 0, lo = 0, hi = 0, steps = 0
    cdef int r, w
    cdef int kind = 0
    cdef int* buf = <int*> malloc(cap * sizeof(int))
    cdef int* nb
    cdef long long* firings = <long long*> malloc((nrules + 1) * sizeof(long long))
    cdef long long* visits = <long long*> malloc((num_states + 1) * sizeof(long long))
    if buf == NULL or firings == NULL or visits == NULL:
        free(buf)
        free(firings)
        free(visits)
        raise MemoryError()
    try:
        for i in range(cap):
            buf[i] = blank
        for i in range(n):
            buf[origin + i] = <int> symbols[i]
        for i in range(nrules):
            firings[i] = 0
        for i in range(num_states):
            visits[i] = 0
        idx = origin
        with nogil:
            while True:
                if is_final[state]:
                    kind = 0
                    break
                r = dispatch[state * num_symbols + buf[idx]]
                if r < 0:
                    kind = 1
                    break
                if steps >= max_steps:
                    kind = 2
                    break
                buf[idx] = write[r]
                firings[r] += 1
                visits[state] += 1
                state = next_state[r]
                head += move[r]
                idx += move[r]
                steps += 1
                if head < lo:
                    lo = head
                elif head > hi:
                    hi = head
                if idx < 0:
                    grow = cap
                    nb = <int*> realloc(buf, 2 * cap * sizeof(int))
                    if nb == NULL:
                        kind = -1
                        break
                    buf = nb
                    memmove(buf + grow, buf, cap * sizeof(int))
                    for i in range(grow):
                        buf[i] = blank
                    cap *= 2
                    origin += grow
                    idx += grow
                elif idx >= cap:
                    nb = <int*> realloc(buf, 2 * cap * sizeof(int))
                    if nb == NULL:
                        kind = -1
                        break
                    buf = nb
                    for i in range(cap, 2 * cap):
                        buf[i] = blank
                    cap *= 2
        if kind < 0:
            raise MemoryError()
        cells = {}
        for i in range(cap):
            if buf[i] != blank:
                cells[i - origin] = buf[i]
        return (kind, state, head, cells, steps, lo, hi,
                [firings[i] for i in range(nrules)],
                [visits[i] for i in range(num_states)])
    finally:
        free(buf)
        free(firings)
        free(visits)


def rle_run(const int[::1] dispatch, const int[::1] next_state,
            const int[::1] write, const int[::1] move,
            const signed char[::1] is_final,
            int num_states, int num_symbols, int blank, int state,
            list symbols, long long max_steps):
    cdef Py_ssize_t nrules = next_state.shape[0]
    cdef Py_ssize_t n = len(symbols)
    cdef Py_ssize_t i
    cdef long long head = 0, lo = 0, hi = 0, steps = 0, dispatches = 0, k
    cdef int r, w, m, nxt, current
    cdef int kind = 0
    cdef Runs left, right
    cdef Runs* near
    cdef Runs* far
    cdef long long* firings = <long long*> malloc((nrules + 1) * sizeof(long long))
    cdef long long* visits = <long long*> malloc((num_states + 1) * sizeof(long long))
    left.sym = NULL
    left.cnt = NULL
    right.sym = NULL
    right.cnt = NULL
    if firings == NULL or visits == NULL:
        free(firings)
        free(visits)
        raise MemoryError()
    try:
        runs_init(&left)
        runs_init(&right)
        for i in range(nrules):
            firings[i] = 0
        for i in range(num_states):
            visits[i] = 0
        current = <int> symbols[0] if n else blank
        for i in range(n - 1, 0, -1):
            runs_push(&right, <int> symbols[i], 1, blank)
        while True:
            if is_final[state]:
                kind = 0
                break
            r = dispatch[state * num_symbols + current]
            if r < 0:
                kind = 1
                break
            if steps >= max_steps:
                kind = 2
                break
            dispatches += 1
            w = write[r]
            m = move[r]
            nxt = next_state[r]
            k = 1
            if m == 0:
                current = w
            else:
                if m > 0:
                    near = &left
                    far = &right
                else:
                    near = &right
                    far = &left
                if nxt == state:
                    if far.n > 0:
                        if far.sym[far.n - 1] == current:
                            k = 1 + far.cnt[far.n - 1]
                            if k > max_steps - steps:
                                k = max_steps - steps
                            far.cnt[far.n - 1] -= k - 1
                            if far.cnt[far.n - 1] == 0:
                                far.n -= 1
                    elif current == blank:
                        k = max_steps - steps
                runs_push(near, w, k, blank)
                current = runs_pop_one(far, blank)
                head += m * k
                if head < lo:
                    lo = head
                elif head > hi:
                    hi = head
            firings[r] += k
            visits[state] += k
            steps += k
            state = nxt
        return (kind, state, head, current, runs_to_list(&left), runs_to_list(&right),
                steps, lo, hi,
                [firings[i] for i in range(nrules)],
                [visits[i] for i in range(num_states)],
                dispatches)
    finally:
        runs_free(&left)
        runs_free(&right)
        free(firings)
        free(visits)
