"""Pair-replacement grammar construction.

repair_build repeatedly replaces the most frequent adjacent symbol pair with
a fresh nonterminal until no pair occurs twice, yielding a straight-line
program: binary rules plus one top-level rule for the residual sequence.

Pair frequency uses non-overlapping left-to-right counting ("aaaa" holds two
occurrences of (a,a)), and the replacement order is fully deterministic:
highest count, then leftmost first occurrence, then lexicographic pair.  The
engine keeps per-pair occurrence lists threaded through the sequence and a
lazy max-heap, so counts only ever decrease between rounds (every adjacency
created by a replacement involves the fresh symbol) and stale heap entries
can simply be re-validated on pop.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import njit

NIL = -1


@dataclass
class Grammar:
    """Binary SLP: rule i derives (rules[i,0], rules[i,1]); nonterminal id is
    num_terminals + i.  top holds the initial rule's symbols.  Rules must be
    acyclic but may reference higher or lower rule ids."""

    num_terminals: int
    rules: np.ndarray
    top: np.ndarray

    def __post_init__(self) -> None:
        self.rules = np.ascontiguousarray(self.rules, dtype=np.int64).reshape(-1, 2)
        self.top = np.ascontiguousarray(self.top, dtype=np.int64)

    @property
    def r(self) -> int:
        return len(self.rules)

    @property
    def c(self) -> int:
        return len(self.top)

    def rule(self, i: int) -> tuple[int, int]:
        return int(self.rules[i, 0]), int(self.rules[i, 1])


# ---------------------------------------------------------------------------
# occurrence-list primitives (doubly linked through slot arrays)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _occ_append(rec, slot, rec_head, rec_tail, opr, onx):
    t = rec_tail[rec]
    opr[slot] = t
    onx[slot] = NIL
    if t == NIL:
        rec_head[rec] = slot
    else:
        onx[t] = slot
    rec_tail[rec] = slot


@njit(cache=True)
def _occ_insert_after(rec, slot, after, rec_head, rec_tail, opr, onx):
    if after == NIL:
        h = rec_head[rec]
        opr[slot] = NIL
        onx[slot] = h
        if h == NIL:
            rec_tail[rec] = slot
        else:
            opr[h] = slot
        rec_head[rec] = slot
    else:
        nx = onx[after]
        opr[slot] = after
        onx[slot] = nx
        onx[after] = slot
        if nx == NIL:
            rec_tail[rec] = slot
        else:
            opr[nx] = slot


@njit(cache=True)
def _occ_remove(rec, slot, rec_head, rec_tail, opr, onx):
    p = opr[slot]
    nx = onx[slot]
    if p == NIL:
        rec_head[rec] = nx
    else:
        onx[p] = nx
    if nx == NIL:
        rec_tail[rec] = p
    else:
        opr[nx] = p


# ---------------------------------------------------------------------------
# lazy max-heap over (count desc, head asc, left asc, right asc)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _hp_less(hc, hh, ha, hb, i, j):
    if hc[i] != hc[j]:
        return hc[i] > hc[j]
    if hh[i] != hh[j]:
        return hh[i] < hh[j]
    if ha[i] != ha[j]:
        return ha[i] < ha[j]
    return hb[i] < hb[j]


@njit(cache=True)
def _hp_swap(hc, hh, ha, hb, hr, i, j):
    hc[i], hc[j] = hc[j], hc[i]
    hh[i], hh[j] = hh[j], hh[i]
    ha[i], ha[j] = ha[j], ha[i]
    hb[i], hb[j] = hb[j], hb[i]
    hr[i], hr[j] = hr[j], hr[i]


@njit(cache=True)
def _hp_up(hc, hh, ha, hb, hr, i):
    while i > 0:
        par = (i - 1) // 2
        if _hp_less(hc, hh, ha, hb, i, par):
            _hp_swap(hc, hh, ha, hb, hr, i, par)
            i = par
        else:
            break


@njit(cache=True)
def _hp_down(hc, hh, ha, hb, hr, n):
    i = 0
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and _hp_less(hc, hh, ha, hb, c + 1, c):
            c += 1
        if _hp_less(hc, hh, ha, hb, c, i):
            _hp_swap(hc, hh, ha, hb, hr, i, c)
            i = c
        else:
            break


@njit(cache=True)
def _grow_i32(a):
    b = np.empty(2 * a.shape[0], np.int32)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _grow_i64(a):
    b = np.empty(2 * a.shape[0], np.int64)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _pack(a, b):
    return (np.int64(a) << np.int64(32)) | np.int64(b)


@njit(cache=True)
def _probe(tkey, key):
    mask = np.int64(tkey.shape[0] - 1)
    h = (key * np.int64(-7046029254386353131)) & mask  # 0x9E3779B97F4A7C15
    while True:
        k = tkey[h]
        if k == key or k == NIL:
            return h
        h = (h + 1) & mask


@njit(cache=True)
def _repair_core(sym, num_terminals):
    n = sym.shape[0]
    nxt = np.empty(n, np.int32)
    prv = np.empty(n, np.int32)
    for i in range(n):
        nxt[i] = i + 1
        prv[i] = i - 1
    nxt[n - 1] = NIL
    thr = np.zeros(n, np.uint8)
    opr = np.full(n, NIL, np.int32)
    onx = np.full(n, NIL, np.int32)

    rcap = 1024
    rec_cnt = np.zeros(rcap, np.int64)
    rec_head = np.full(rcap, NIL, np.int32)
    rec_tail = np.full(rcap, NIL, np.int32)
    rec_a = np.zeros(rcap, np.int32)
    rec_b = np.zeros(rcap, np.int32)
    rn = 0

    tcap = 4096
    tkey = np.full(tcap, np.int64(NIL), np.int64)
    tval = np.zeros(tcap, np.int32)

    hcap = 1024
    hc = np.zeros(hcap, np.int64)
    hh = np.zeros(hcap, np.int32)
    ha = np.zeros(hcap, np.int32)
    hb = np.zeros(hcap, np.int32)
    hr = np.zeros(hcap, np.int32)
    hn = 0

    lcap = 256
    cre = np.zeros(lcap, np.int32)  # records created or count-incremented this round
    cn = 0

    # --- initial scan: greedy non-overlapping pair counting -----------------
    i = 0
    while i != NIL and nxt[i] != NIL:
        a = sym[i]
        b = sym[nxt[i]]
        skip = False
        if a == b:
            pp = prv[i]
            if pp != NIL and thr[pp] == 1 and sym[pp] == a:
                skip = True
        if not skip:
            key = _pack(a, b)
            slot = _probe(tkey, key)
            if tkey[slot] == NIL:
                if rn == rcap:
                    rec_cnt = _grow_i64(rec_cnt)
                    rec_head = _grow_i32(rec_head)
                    rec_tail = _grow_i32(rec_tail)
                    rec_a = _grow_i32(rec_a)
                    rec_b = _grow_i32(rec_b)
                    rec_cnt[rn:] = 0
                    rec_head[rn:] = NIL
                    rec_tail[rn:] = NIL
                    rcap *= 2
                rec = rn
                rn += 1
                rec_cnt[rec] = 0
                rec_head[rec] = NIL
                rec_tail[rec] = NIL
                rec_a[rec] = a
                rec_b[rec] = b
                tkey[slot] = key
                tval[slot] = rec
                if rn * 5 > tcap * 3:  # rebuild at 60% load
                    tcap *= 2
                    tkey = np.full(tcap, np.int64(NIL), np.int64)
                    tval = np.zeros(tcap, np.int32)
                    for k in range(rn):
                        s2 = _probe(tkey, _pack(rec_a[k], rec_b[k]))
                        tkey[s2] = _pack(rec_a[k], rec_b[k])
                        tval[s2] = k
            else:
                rec = tval[slot]
            _occ_append(rec, i, rec_head, rec_tail, opr, onx)
            thr[i] = 1
            rec_cnt[rec] += 1
        i = nxt[i]

    for k in range(rn):
        if rec_cnt[k] >= 2:
            if hn == hcap:
                hc = _grow_i64(hc)
                hh = _grow_i32(hh)
                ha = _grow_i32(ha)
                hb = _grow_i32(hb)
                hr = _grow_i32(hr)
                hcap *= 2
            hc[hn] = rec_cnt[k]
            hh[hn] = rec_head[k]
            ha[hn] = rec_a[k]
            hb[hn] = rec_b[k]
            hr[hn] = k
            hn += 1
            _hp_up(hc, hh, ha, hb, hr, hn - 1)

    # --- replacement rounds --------------------------------------------------
    rulecap = 1024
    rul_l = np.zeros(rulecap, np.int32)
    rul_r = np.zeros(rulecap, np.int32)
    nrules = 0

    while hn > 0:
        cnt = hc[0]
        head = hh[0]
        a = ha[0]
        b = hb[0]
        rec = hr[0]
        hn -= 1
        _hp_swap(hc, hh, ha, hb, hr, 0, hn)
        _hp_down(hc, hh, ha, hb, hr, hn)

        if rec_cnt[rec] != cnt or rec_head[rec] != head:
            # stale entry: refresh if the pair is still worth replacing
            if rec_cnt[rec] >= 2:
                if hn == hcap:
                    hc = _grow_i64(hc)
                    hh = _grow_i32(hh)
                    ha = _grow_i32(ha)
                    hb = _grow_i32(hb)
                    hr = _grow_i32(hr)
                    hcap *= 2
                hc[hn] = rec_cnt[rec]
                hh[hn] = rec_head[rec]
                ha[hn] = a
                hb[hn] = b
                hr[hn] = rec
                hn += 1
                _hp_up(hc, hh, ha, hb, hr, hn - 1)
            continue
        if cnt < 2:
            continue

        if nrules == rulecap:
            rul_l = _grow_i32(rul_l)
            rul_r = _grow_i32(rul_r)
            rulecap *= 2
        big_a = np.int32(num_terminals + nrules)
        rul_l[nrules] = a
        rul_r[nrules] = b
        nrules += 1

        cn = 0
        q = rec_head[rec]
        while q != NIL:
            nq = onx[q]
            # defensive validity: the walk's own surgery never invalidates
            # later list members, but a cheap check keeps corruption local.
            if thr[q] == 0 or sym[q] != a:
                q = nq
                continue
            j = nxt[q]
            if j == NIL or sym[j] != b:
                q = nq
                continue

            _occ_remove(rec, q, rec_head, rec_tail, opr, onx)
            thr[q] = 0
            rec_cnt[rec] -= 1

            l = prv[q]
            r2 = nxt[j]

            if l != NIL and thr[l] == 1:
                lkey = _pack(sym[l], a)
                lrec = tval[_probe(tkey, lkey)]
                _occ_remove(lrec, l, rec_head, rec_tail, opr, onx)
                thr[l] = 0
                rec_cnt[lrec] -= 1

            pred_seg = np.int32(NIL)
            renorm = r2 != NIL and a != b and sym[r2] == b
            if r2 != NIL and thr[j] == 1:
                rkey = _pack(b, sym[r2])
                rrec = tval[_probe(tkey, rkey)]
                if renorm:
                    pred_seg = opr[j]
                _occ_remove(rrec, j, rec_head, rec_tail, opr, onx)
                thr[j] = 0
                rec_cnt[rrec] -= 1

            # splice: drop j, rewrite q to the fresh symbol
            sym[q] = big_a
            nxt[q] = r2
            if r2 != NIL:
                prv[r2] = q
            sym[j] = NIL
            nxt[j] = NIL
            prv[j] = NIL
            thr[j] = 0

            if renorm:
                # j was the front of a (b,b) run; re-normalize greedy
                # threading from the new front r2 and fix the count.
                bkey = _pack(b, b)
                bslot = _probe(tkey, bkey)
                if tkey[bslot] != NIL:
                    brec = tval[bslot]
                    # Remove the run's surviving (b,b) members.  Only slots
                    # whose successor is also b belong to this record: the
                    # run's last slot pairs with whatever follows the run
                    # and is threaded (if at all) under that other pair.
                    t = r2
                    while t != NIL and sym[t] == b:
                        tn = nxt[t]
                        if tn == NIL or sym[tn] != b:
                            break
                        if thr[t] == 1:
                            _occ_remove(brec, t, rec_head, rec_tail, opr, onx)
                            thr[t] = 0
                            rec_cnt[brec] -= 1
                        t = tn
                    # rethread greedily from r2, inserting in list order
                    t = r2
                    last = pred_seg
                    while t != NIL and sym[t] == b:
                        tn2 = nxt[t]
                        if tn2 != NIL and sym[tn2] == b:
                            _occ_insert_after(
                                brec, t, last, rec_head, rec_tail, opr, onx
                            )
                            thr[t] = 1
                            rec_cnt[brec] += 1
                            last = t
                            t = nxt[tn2]  # skip the overlapped member
                        else:
                            t = tn2
                    if cn == lcap:
                        cre = _grow_i32(cre)
                        lcap *= 2
                    cre[cn] = brec
                    cn += 1

            # new pair on the left: (sym[l], A) at slot l
            if l != NIL:
                x = sym[l]
                okl = True
                if x == big_a:
                    pp = prv[l]
                    if pp != NIL and thr[pp] == 1 and sym[pp] == x:
                        okl = False
                if okl:
                    key2 = _pack(x, big_a)
                    slot2 = _probe(tkey, key2)
                    if tkey[slot2] == NIL:
                        if rn == rcap:
                            rec_cnt = _grow_i64(rec_cnt)
                            rec_head = _grow_i32(rec_head)
                            rec_tail = _grow_i32(rec_tail)
                            rec_a = _grow_i32(rec_a)
                            rec_b = _grow_i32(rec_b)
                            rec_cnt[rn:] = 0
                            rec_head[rn:] = NIL
                            rec_tail[rn:] = NIL
                            rcap *= 2
                        rec2 = rn
                        rn += 1
                        rec_cnt[rec2] = 0
                        rec_head[rec2] = NIL
                        rec_tail[rec2] = NIL
                        rec_a[rec2] = x
                        rec_b[rec2] = big_a
                        tkey[slot2] = key2
                        tval[slot2] = rec2
                        if rn * 5 > tcap * 3:
                            tcap *= 2
                            tkey = np.full(tcap, np.int64(NIL), np.int64)
                            tval = np.zeros(tcap, np.int32)
                            for k in range(rn):
                                kk = _pack(rec_a[k], rec_b[k])
                                s2 = _probe(tkey, kk)
                                tkey[s2] = kk
                                tval[s2] = k
                        if cn == lcap:
                            cre = _grow_i32(cre)
                            lcap *= 2
                        cre[cn] = rec2
                        cn += 1
                    else:
                        rec2 = tval[slot2]
                    _occ_append(rec2, l, rec_head, rec_tail, opr, onx)
                    thr[l] = 1
                    rec_cnt[rec2] += 1

            # new pair on the right: (A, sym[r2]) at slot q
            if r2 != NIL:
                y = sym[r2]
                okr = True
                if y == big_a:
                    pp = prv[q]
                    if pp != NIL and thr[pp] == 1 and sym[pp] == big_a:
                        okr = False
                if okr:
                    key3 = _pack(big_a, y)
                    slot3 = _probe(tkey, key3)
                    if tkey[slot3] == NIL:
                        if rn == rcap:
                            rec_cnt = _grow_i64(rec_cnt)
                            rec_head = _grow_i32(rec_head)
                            rec_tail = _grow_i32(rec_tail)
                            rec_a = _grow_i32(rec_a)
                            rec_b = _grow_i32(rec_b)
                            rec_cnt[rn:] = 0
                            rec_head[rn:] = NIL
                            rec_tail[rn:] = NIL
                            rcap *= 2
                        rec3 = rn
                        rn += 1
                        rec_cnt[rec3] = 0
                        rec_head[rec3] = NIL
                        rec_tail[rec3] = NIL
                        rec_a[rec3] = big_a
                        rec_b[rec3] = y
                        tkey[slot3] = key3
                        tval[slot3] = rec3
                        if rn * 5 > tcap * 3:
                            tcap *= 2
                            tkey = np.full(tcap, np.int64(NIL), np.int64)
                            tval = np.zeros(tcap, np.int32)
                            for k in range(rn):
                                kk = _pack(rec_a[k], rec_b[k])
                                s2 = _probe(tkey, kk)
                                tkey[s2] = kk
                                tval[s2] = k
                        if cn == lcap:
                            cre = _grow_i32(cre)
                            lcap *= 2
                        cre[cn] = rec3
                        cn += 1
                    else:
                        rec3 = tval[slot3]
                    _occ_append(rec3, q, rec_head, rec_tail, opr, onx)
                    thr[q] = 1
                    rec_cnt[rec3] += 1

            q = nq

        # round end: queue every record this round created or re-grew
        for k in range(cn):
            rec4 = cre[k]
            if rec_cnt[rec4] >= 2:
                if hn == hcap:
                    hc = _grow_i64(hc)
                    hh = _grow_i32(hh)
                    ha = _grow_i32(ha)
                    hb = _grow_i32(hb)
                    hr = _grow_i32(hr)
                    hcap *= 2
                hc[hn] = rec_cnt[rec4]
                hh[hn] = rec_head[rec4]
                ha[hn] = rec_a[rec4]
                hb[hn] = rec_b[rec4]
                hr[hn] = rec4
                hn += 1
                _hp_up(hc, hh, ha, hb, hr, hn - 1)

    # --- collect the residual sequence --------------------------------------
    count = 0
    i = 0
    while i != NIL:
        count += 1
        i = nxt[i]
    top = np.empty(count, np.int64)
    i = 0
    k = 0
    while i != NIL:
        top[k] = sym[i]
        k += 1
        i = nxt[i]
    return rul_l[:nrules].astype(np.int64), rul_r[:nrules].astype(np.int64), top


def repair_build(seq, num_terminals: int | None = None) -> Grammar:
    """Build a pair-replacement SLP over seq.

    seq may be bytes or any non-negative integer sequence; every symbol must
    be < num_terminals (default 256 for bytes, max+1 otherwise).
    """
    if isinstance(seq, (bytes, bytearray)):
        # stay in uint8 here; the core takes int32 and the int64 detour would
        # double the footprint on large inputs
        arr = np.frombuffer(bytes(seq), dtype=np.uint8)
        if num_terminals is None:
            num_terminals = 256
    else:
        arr = np.ascontiguousarray(seq, dtype=np.int64)
        if num_terminals is None:
            num_terminals = int(arr.max()) + 1 if len(arr) else 1
    if len(arr) == 0:
        raise ValueError("sequence must be non-empty")
    if len(arr) >= (1 << 31) - num_terminals:
        raise ValueError("sequence too long for 32-bit slots")
    if num_terminals < 1:
        raise ValueError("num_terminals must be >= 1")
    lo = int(arr.min())
    hi = int(arr.max())
    if lo < 0 or hi >= num_terminals:
        raise ValueError("symbols must lie in [0, num_terminals)")
    if len(arr) == 1:
        return Grammar(num_terminals, np.empty((0, 2), np.int64), arr.astype(np.int64))
    rl, rr, top = _repair_core(arr.astype(np.int32), num_terminals)
    return Grammar(num_terminals, np.stack([rl, rr], axis=1), top)


# ---------------------------------------------------------------------------
# expansion
# ---------------------------------------------------------------------------


@njit(cache=True)
def _lengths_kernel(rl, rr, nt):
    r = rl.shape[0]
    ln = np.zeros(r, np.int64)
    stack = np.empty(2 * r + 4, np.int32)
    for i in range(r):
        if ln[i] != 0:
            continue
        top = 0
        stack[0] = i
        while top >= 0:
            u = stack[top]
            lc = rl[u]
            rc = rr[u]
            lready = lc < nt or ln[lc - nt] != 0
            rready = rc < nt or ln[rc - nt] != 0
            if lready and rready:
                ll = 1 if lc < nt else ln[lc - nt]
                rr_ = 1 if rc < nt else ln[rc - nt]
                ln[u] = ll + rr_
                top -= 1
            else:
                if not lready:
                    top += 1
                    stack[top] = lc - nt
                if not rready:
                    top += 1
                    stack[top] = rc - nt
    return ln


@njit(cache=True)
def _expand_kernel(rl, rr, nt, syms, out):
    pos = 0
    r = rl.shape[0]
    stack = np.empty(r + 2, np.int64)
    for t in range(syms.shape[0]):
        sp = 0
        stack[0] = syms[t]
        while sp >= 0:
            s = stack[sp]
            sp -= 1
            while s >= nt:
                stack[sp + 1] = rr[s - nt]
                sp += 1
                s = rl[s - nt]
            out[pos] = s
            pos += 1
    return pos


@njit(cache=True)
def _expand_u8_kernel(rl, rr, nt, syms, out):
    pos = 0
    r = rl.shape[0]
    stack = np.empty(r + 2, np.int64)
    for t in range(syms.shape[0]):
        sp = 0
        stack[0] = syms[t]
        while sp >= 0:
            s = stack[sp]
            sp -= 1
            while s >= nt:
                stack[sp + 1] = rr[s - nt]
                sp += 1
                s = rl[s - nt]
            out[pos] = np.uint8(s)
            pos += 1
    return pos


@njit(cache=True)
def _expand_stream_kernel(rl, rr, nt, syms, stack, state, out):
    """Resumable expansion: state = [stack_top, next_top_index]."""
    sp = state[0]
    ti = state[1]
    pos = 0
    cap = out.shape[0]
    while pos < cap:
        if sp < 0:
            if ti >= syms.shape[0]:
                break
            sp = 0
            stack[0] = syms[ti]
            ti += 1
        s = stack[sp]
        sp -= 1
        while s >= nt:
            stack[sp + 1] = rr[s - nt]
            sp += 1
            s = rl[s - nt]
        out[pos] = np.uint8(s)
        pos += 1
    state[0] = sp
    state[1] = ti
    return pos


def expansion_lengths(grammar: Grammar) -> np.ndarray:
    """Expansion length of every rule's nonterminal."""
    return _lengths_kernel(
        np.ascontiguousarray(grammar.rules[:, 0]),
        np.ascontiguousarray(grammar.rules[:, 1]),
        grammar.num_terminals,
    )


def expand(grammar: Grammar, symbol: int | None = None) -> np.ndarray:
    """Expand the whole grammar (or one symbol) to its terminal sequence."""
    nt = grammar.num_terminals
    if symbol is None:
        syms = grammar.top
    else:
        symbol = int(symbol)
        if symbol < 0 or symbol >= nt + grammar.r:
            raise ValueError("symbol out of range")
        syms = np.array([symbol], dtype=np.int64)
    if len(syms) == 0:
        return np.empty(0, dtype=np.int64)
    lens = expansion_lengths(grammar)
    total = int(sum(1 if s < nt else lens[s - nt] for s in syms.tolist()))
    out = np.empty(total, dtype=np.int64)
    rl = np.ascontiguousarray(grammar.rules[:, 0])
    rr = np.ascontiguousarray(grammar.rules[:, 1])
    wrote = _expand_kernel(rl, rr, nt, syms, out)
    assert wrote == total
    return out


def expand_bytes(grammar: Grammar, total: int | None = None) -> bytes:
    """Expand a byte-terminal grammar straight into a bytes object."""
    nt = grammar.num_terminals
    if nt > 256:
        raise ValueError("grammar terminals exceed byte range")
    if total is None:
        lens = expansion_lengths(grammar)
        total = int(
            sum(1 if s < nt else int(lens[s - nt]) for s in grammar.top.tolist())
        )
    out = np.empty(total, dtype=np.uint8)
    rl = np.ascontiguousarray(grammar.rules[:, 0])
    rr = np.ascontiguousarray(grammar.rules[:, 1])
    wrote = _expand_u8_kernel(rl, rr, nt, grammar.top, out)
    if wrote != total:
        raise ValueError("expansion length mismatch")
    return out.tobytes()


def expand_stream(grammar: Grammar, chunk_size: int = 1 << 20):
    """Yield the expansion as byte chunks using O(r) state, not O(output)."""
    nt = grammar.num_terminals
    if nt > 256:
        raise ValueError("grammar terminals exceed byte range")
    rl = np.ascontiguousarray(grammar.rules[:, 0])
    rr = np.ascontiguousarray(grammar.rules[:, 1])
    stack = np.empty(grammar.r + 2, dtype=np.int64)
    state = np.array([-1, 0], dtype=np.int64)
    out = np.empty(chunk_size, dtype=np.uint8)
    while True:
        wrote = _expand_stream_kernel(rl, rr, nt, grammar.top, stack, state, out)
        if wrote == 0:
            break
        yield out[:wrote].tobytes()
