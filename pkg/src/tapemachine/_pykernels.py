"""Pure-Python execution kernels.

Fallback for :mod:`tapemachine._ckernels`; both modules expose the same
two functions with the same signatures and return tuples, and must agree
exactly. Outcome codes: 0 halted, 1 stuck, 2 step limit.
"""


def naive_run(dispatch, next_state, write, move, is_final,
              num_states, num_symbols, blank, state, symbols, max_steps):
    """One rule application per iteration over a sparse offset -> symbol map.

    Returns ``(kind, state, head, cells, steps, min_offset, max_offset,
    firings, visits)`` where ``firings`` is indexed by rule position.
    """
    cells = {i: s for i, s in enumerate(symbols) if s != blank}
    firings = [0] * len(next_state)
    visits = [0] * num_states
    head = lo = hi = steps = 0
    get = cells.get
    while True:
        if is_final[state]:
            kind = 0
            break
        r = dispatch[state * num_symbols + get(head, blank)]
        if r < 0:
            kind = 1
            break
        if steps >= max_steps:
            kind = 2
            break
        w = write[r]
        if w == blank:
            cells.pop(head, None)
        else:
            cells[head] = w
        firings[r] += 1
        visits[state] += 1
        state = next_state[r]
        head += move[r]
        steps += 1
        if head < lo:
            lo = head
        elif head > hi:
            hi = head
    return kind, state, head, cells, steps, lo, hi, firings, visits


def _push(syms, cnts, s, k, blank):
    # Runs are stacks with the top nearest the head; blanks never sit at the bottom.
    if syms:
        if syms[-1] == s:
            cnts[-1] += k
            return
    elif s == blank:
        return
    syms.append(s)
    cnts.append(k)


def rle_run(dispatch, next_state, write, move, is_final,
            num_states, num_symbols, blank, state, symbols, max_steps):
    """Run-length-encoded tape with macro-steps over directional self-loops.

    Returns ``(kind, state, head, current, left, right, steps, min_offset,
    max_offset, firings, visits, dispatches)``; ``left`` and ``right`` are
    lists of ``(symbol, count)`` runs ordered nearest-to-head first.
    """
    lsym, lcnt, rsym, rcnt = [], [], [], []
    current = symbols[0] if symbols else blank
    for s in reversed(symbols[1:]):
        _push(rsym, rcnt, s, 1, blank)
    firings = [0] * len(next_state)
    visits = [0] * num_states
    head = lo = hi = steps = dispatches = 0
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
                nsym, ncnt, fsym, fcnt = lsym, lcnt, rsym, rcnt
            else:
                nsym, ncnt, fsym, fcnt = rsym, rcnt, lsym, lcnt
            if nxt == state:
                if fsym:
                    if fsym[-1] == current:
                        k = min(1 + fcnt[-1], max_steps - steps)
                        fcnt[-1] -= k - 1
                        if fcnt[-1] == 0:
                            fsym.pop()
                            fcnt.pop()
                elif current == blank:
                    # Sweeping into the infinite blank fringe.
                    k = max_steps - steps
            _push(nsym, ncnt, w, k, blank)
            if fsym:
                current = fsym[-1]
                fcnt[-1] -= 1
                if fcnt[-1] == 0:
                    fsym.pop()
                    fcnt.pop()
            else:
                current = blank
            head += m * k
            if head < lo:
                lo = head
            elif head > hi:
                hi = head
        firings[r] += k
        visits[state] += k
        steps += k
        state = nxt
    left = list(zip(reversed(lsym), reversed(lcnt)))
    right = list(zip(reversed(rsym), reversed(rcnt)))
    return kind, state, head, current, left, right, steps, lo, hi, firings, visits, dispatches
