"""Hot search kernels, written njit-compatible and wrapped by `_backend`.

Everything here sticks to numpy arrays and scalar control flow so the same
source runs jitted or as plain Python.  The DPLL kernel is resumable: all
state lives in caller-owned arrays, and each call explores at most `chunk`
nodes before yielding control back with status PAUSED.

Clause model: one variable per host edge, value 1 = red.  A clause is a
copy of a forbidden monochromatic structure; its satisfying value `sv` is
0 for red copies (some edge must be blue) and 1 for blue copies.  Counter
state per clause: how many members are assigned, how many satisfy.

State vector `st` layout: 0 TLEN, 1 NLEV, 2 QHEAD, 3 NODES, 4 PROPS, 5 HINT.
Status codes: 1 SAT, 2 UNSAT, 3 PAUSED.
"""

import numpy as np

ST_TLEN = 0
ST_NLEV = 1
ST_QHEAD = 2
ST_NODES = 3
ST_PROPS = 4
ST_HINT = 5

SAT = 1
UNSAT = 2
PAUSED = 3


def dpll_step(assign, trail, dvar, dflip, dtrail,
              sat_cnt, ass_cnt, sv, lits, cptr,
              occ_ptr, occ_cl, perm, use_sym, phase_first, st, chunk):
    """Run the chronological-backtracking search for up to `chunk` nodes.

    A node is a decision or a phase flip.  Counters reflect exactly the
    trail entries below QHEAD; entries at or beyond it are enqueued but not
    yet propagated, so undo only rolls counters back below QHEAD.
    """
    E = assign.shape[0]
    n_gen = perm.shape[0]
    nodes_here = 0

    while True:
        # ---- propagate to fixpoint or conflict -------------------------
        conflict = False
        while st[ST_QHEAD] < st[ST_TLEN] and not conflict:
            v = trail[st[ST_QHEAD]]
            st[ST_QHEAD] += 1
            val = assign[v]
            for j in range(occ_ptr[v], occ_ptr[v + 1]):
                ci = occ_cl[j]
                ass_cnt[ci] += 1
                if val == sv[ci]:
                    sat_cnt[ci] += 1
                elif sat_cnt[ci] == 0:
                    length = cptr[ci + 1] - cptr[ci]
                    rem = length - ass_cnt[ci]
                    if rem == 0:
                        conflict = True  # keep updating v's counters
                    elif rem == 1:
                        u = -1
                        for p in range(cptr[ci], cptr[ci + 1]):
                            if assign[lits[p]] < 0:
                                u = lits[p]
                                break
                        # u may be enqueued-but-unpropagated: resolved later
                        if u >= 0:
                            assign[u] = sv[ci]
                            trail[st[ST_TLEN]] = u
                            st[ST_TLEN] += 1
                            st[ST_PROPS] += 1

        # ---- symmetry leader check (red precedes blue) ------------------
        if not conflict and use_sym == 1:
            for g in range(n_gen):
                p = 0
                while p < E:
                    q = perm[g, p]
                    if q != p:
                        a = assign[p]
                        b = assign[q]
                        if a < 0 or b < 0:
                            break
                        if a != b:
                            if a == 0:
                                conflict = True
                            break
                    p += 1
                if conflict:
                    break

        if conflict:
            # ---- backtrack: undo to the deepest unflipped decision ------
            flipped = False
            while st[ST_NLEV] > 0:
                lev = st[ST_NLEV] - 1
                target = dtrail[lev]
                t = st[ST_TLEN] - 1
                while t >= target:
                    w = trail[t]
                    if t < st[ST_QHEAD]:
                        wv = assign[w]
                        for j in range(occ_ptr[w], occ_ptr[w + 1]):
                            ci = occ_cl[j]
                            ass_cnt[ci] -= 1
                            if wv == sv[ci]:
                                sat_cnt[ci] -= 1
                    assign[w] = -1
                    if w < st[ST_HINT]:
                        st[ST_HINT] = w
                    t -= 1
                st[ST_TLEN] = target
                if st[ST_QHEAD] > target:
                    st[ST_QHEAD] = target
                if dflip[lev] == 1:
                    st[ST_NLEV] -= 1
                    continue
                dflip[lev] = 1
                v = dvar[lev]
                assign[v] = 1 - phase_first
                trail[st[ST_TLEN]] = v
                st[ST_TLEN] += 1
                st[ST_NODES] += 1
                nodes_here += 1
                flipped = True
                break
            if not flipped:
                return UNSAT
            if nodes_here >= chunk:
                return PAUSED
            continue

        # ---- decide ------------------------------------------------------
        v = st[ST_HINT]
        while v < E and assign[v] >= 0:
            v += 1
        if v == E:
            return SAT
        st[ST_HINT] = v
        lev = st[ST_NLEV]
        dvar[lev] = v
        dflip[lev] = 0
        dtrail[lev] = st[ST_TLEN]
        st[ST_NLEV] += 1
        assign[v] = phase_first
        trail[st[ST_TLEN]] = v
        st[ST_TLEN] += 1
        st[ST_NODES] += 1
        nodes_here += 1
        if nodes_here >= chunk:
            return PAUSED


def sweep_colorings(red_masks, blue_masks, start, stop):
    """Scan coloring bitmasks in [start, stop); return first admissible or -1.

    A coloring x is admissible when no red mask is fully inside x and no
    blue mask is fully outside it.  Early-exit scalar loop; the numpy
    backend replaces this with the chunked vectorized sweep below.
    """
    for x in range(start, stop):
        ok = True
        for i in range(red_masks.shape[0]):
            m = red_masks[i]
            if x & m == m:
                ok = False
                break
        if ok:
            for i in range(blue_masks.shape[0]):
                if x & blue_masks[i] == 0:
                    ok = False
                    break
        if ok:
            return x
    return -1


def sweep_colorings_numpy(red_masks, blue_masks, start, stop, chunk=1 << 16):
    """Vectorized equivalent of sweep_colorings for the numpy backend."""
    # callers pass int64 or uint64 masks; mixing either with the uint64
    # chunk below is an unsafe cast numpy refuses, so normalize here
    red_masks = np.asarray(red_masks, dtype=np.uint64)
    blue_masks = np.asarray(blue_masks, dtype=np.uint64)
    lo = start
    while lo < stop:
        hi = min(lo + chunk, stop)
        xs = np.arange(lo, hi, dtype=np.uint64)
        good = np.ones(xs.shape[0], dtype=bool)
        for m in red_masks:
            good &= (xs & m) != m
            if not good.any():
                break
        if good.any():
            for m in blue_masks:
                good &= (xs & m) != 0
                if not good.any():
                    break
        idx = np.flatnonzero(good)
        if idx.size:
            return int(xs[idx[0]])
        lo = hi
    return -1
