"""Compiled counting kernels.

Sign arrays use +1/-1 for known signs and 0 for hidden ones. Count arrays
carry a trailing axis of 2: index 0 positive, 1 negative. Predictor indices
follow the catalog (0-2 wedges, 3-8 paths).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

QUAD_CODE = np.array([3, 4, 5, 6, 4, 7, 6, 8], dtype=np.int64)


@njit(cache=True, inline="always")
def _tri(s1, s2):
    return (s1 < 0) + (s2 < 0)


@njit(cache=True, inline="always")
def _quad(code_tab, s1, s2, s3):
    return code_tab[(s1 < 0) * 4 + (s2 < 0) * 2 + (s3 < 0)]


@njit(cache=True, inline="always")
def _sidx(s):
    return 0 if s > 0 else 1


@njit(cache=True, nogil=True)
def _adjacent(indptr, indices, x, y):
    lo, hi = indptr[x], indptr[x + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        v = indices[mid]
        if v == y:
            return True
        if v < y:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit(cache=True, nogil=True)
def view_totals(indptr, indices, link_ids, signs, induced):
    """Entity totals and coverage flags over every instance in the view.

    Returns ``tri_tot[n, 3, 2]`` (per apex node), ``quad_tot[m, 6, 2]`` (per
    entity link), ``covered[m, 9]`` (link sits in the target role of some
    instance with known context) and the number of 4-cycles visited.
    """
    code_tab = QUAD_CODE
    n = indptr.shape[0] - 1
    m = signs.shape[0]
    tri_tot = np.zeros((n, 3, 2), dtype=np.int64)
    quad_tot = np.zeros((m, 6, 2), dtype=np.int64)
    covered = np.zeros((m, 9), dtype=np.bool_)

    deg = indptr[1:] - indptr[:-1]
    order = np.argsort(deg * np.int64(n) + np.arange(n), kind="mergesort")
    rank = np.empty(n, dtype=np.int64)
    for i in range(n):
        rank[order[i]] = i

    # triangles: v lowest rank, u and w above it
    mark = np.full(n, -1, dtype=np.int64)
    for v in range(n):
        for j in range(indptr[v], indptr[v + 1]):
            mark[indices[j]] = link_ids[j]
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if rank[u] <= rank[v]:
                continue
            l_vu = link_ids[j]
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if rank[w] <= rank[u] or mark[w] < 0:
                    continue
                l_uw = link_ids[k]
                l_vw = mark[w]
                # roles: (target link, apex-side context a, context b, apex node)
                for r in range(3):
                    if r == 0:
                        lt, l1, l2, apex = l_vu, l_vw, l_uw, w
                    elif r == 1:
                        lt, l1, l2, apex = l_uw, l_vu, l_vw, v
                    else:
                        lt, l1, l2, apex = l_vw, l_vu, l_uw, u
                    s1, s2 = signs[l1], signs[l2]
                    if s1 == 0 or s2 == 0:
                        continue
                    p = _tri(s1, s2)
                    covered[lt, p] = True
                    st = signs[lt]
                    if st != 0:
                        tri_tot[apex, p, _sidx(st)] += 1
        for j in range(indptr[v], indptr[v + 1]):
            mark[indices[j]] = -1

    # 4-cycles v-u1-w-u2 with v of highest rank and w opposite v
    head = np.full(n, -1, dtype=np.int64)
    cap = 2 * m + 1
    nxt = np.empty(cap, dtype=np.int64)
    e_u = np.empty(cap, dtype=np.int64)
    e_lvu = np.empty(cap, dtype=np.int64)
    e_luw = np.empty(cap, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    cyc_l = np.empty(4, dtype=np.int64)
    n_cycles = 0
    for v in range(n):
        n_e = 0
        n_t = 0
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            if rank[u] >= rank[v]:
                continue
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if rank[w] >= rank[v]:
                    continue
                if head[w] < 0:
                    touched[n_t] = w
                    n_t += 1
                e_u[n_e] = u
                e_lvu[n_e] = link_ids[j]
                e_luw[n_e] = link_ids[k]
                nxt[n_e] = head[w]
                head[w] = n_e
                n_e += 1
        for t in range(n_t):
            w = touched[t]
            i = head[w]
            while i >= 0:
                jj = nxt[i]
                while jj >= 0:
                    n_cycles += 1
                    if induced and (_adjacent(indptr, indices, v, w)
                                    or _adjacent(indptr, indices, e_u[i], e_u[jj])):
                        jj = nxt[jj]
                        continue
                    cyc_l[0] = e_lvu[i]
                    cyc_l[1] = e_luw[i]
                    cyc_l[2] = e_luw[jj]
                    cyc_l[3] = e_lvu[jj]
                    for r in range(4):
                        s1 = signs[cyc_l[(r + 1) & 3]]
                        s2 = signs[cyc_l[(r + 2) & 3]]
                        s3 = signs[cyc_l[(r + 3) & 3]]
                        if s1 == 0 or s2 == 0 or s3 == 0:
                            continue
                        p = _quad(code_tab, s1, s2, s3)
                        lt = cyc_l[r]
                        covered[lt, p] = True
                        st = signs[lt]
                        if st != 0:
                            quad_tot[cyc_l[(r + 2) & 3], p - 3, _sidx(st)] += 1
                    jj = nxt[jj]
                i = nxt[i]
            head[w] = -1
    return tri_tot, quad_tot, covered, n_cycles


@njit(cache=True, inline="always")
def _acc(p, pp, pn, cp, cn, n_ent, s_plain, s_cl, s_cn, rec, n_rec, e0, e1):
    n_ent[p] += 1
    s_plain[p] += math.log(pp + 1.0) - math.log(pn + 1.0)
    s_cl[p] += math.log(cp + 1.0) - math.log(cn + 1.0)
    s_cn[p] += math.log(pp - cp + 1.0) - math.log(pn - cn + 1.0)
    if rec.shape[0] > 0:
        i = n_rec[0]
        rec[i, 0] = p
        rec[i, 1] = e0
        rec[i, 2] = e1
        rec[i, 3] = pp
        rec[i, 4] = pn
        rec[i, 5] = cp
        rec[i, 6] = cn
        n_rec[0] = i + 1


@njit(cache=True, inline="always")
def _induced_connectors(x, y, a, b, iy, ix, indptr, indices, link_ids, signs, mark_a, mark_b, cnt):
    """Chord-free instances a-x-y-Q and P-x-y-b (the target orientation is already chord-free)."""
    for k in range(indptr[y], indptr[y + 1]):
        q = indices[k]
        s_yq = signs[link_ids[k]]
        sa = mark_a[q]
        if q == x or q == b or s_yq == 0 or _sidx(s_yq) != iy or (sa != 1 and sa != -1):
            continue
        if _adjacent(indptr, indices, x, q):
            continue
        cnt[_sidx(sa)] += 1
    for k in range(indptr[x], indptr[x + 1]):
        pq = indices[k]
        s_xp = signs[link_ids[k]]
        sb = mark_b[pq]
        if pq == y or pq == a or s_xp == 0 or _sidx(s_xp) != ix or (sb != 1 and sb != -1):
            continue
        if _adjacent(indptr, indices, pq, y):
            continue
        cnt[_sidx(sb)] += 1


@njit(cache=True, nogil=True)
def _one_target(a, b, indptr, indices, link_ids, signs, tri_tot, quad_tot, induced,
                mark_a, mark_b, w_a, w_b, n_ent, s_plain, s_cl, s_cn, rec, n_rec):
    """Evidence for target pair (a, b); scratch arrays must be clean on entry and are left clean."""
    code_tab = QUAD_CODE
    for j in range(indptr[a], indptr[a + 1]):
        s = signs[link_ids[j]]
        mark_a[indices[j]] = s if s != 0 else 2
    for j in range(indptr[b], indptr[b + 1]):
        s = signs[link_ids[j]]
        mark_b[indices[j]] = s if s != 0 else 2
    s_ab = mark_a[b]
    self_known = s_ab == 1 or s_ab == -1
    self_idx = _sidx(s_ab)
    cnt = np.zeros(2, dtype=np.int64)

    # wedges a-M-b
    for j in range(indptr[a], indptr[a + 1]):
        mm = indices[j]
        s_am = mark_a[mm]
        s_bm = mark_b[mm]
        if mm == b or (s_am != 1 and s_am != -1) or (s_bm != 1 and s_bm != -1):
            continue
        p = _tri(s_am, s_bm)
        pp = tri_tot[mm, p, 0]
        pn = tri_tot[mm, p, 1]
        if self_known:
            if self_idx == 0:
                pp -= 1
            else:
                pn -= 1
        cnt[0] = 0
        cnt[1] = 0
        for k in range(indptr[mm], indptr[mm + 1]):
            y = indices[k]
            if y == a or y == b:
                continue
            s_my = signs[link_ids[k]]
            if s_my == 0:
                continue
            sy = mark_a[y]
            if (sy == 1 or sy == -1) and _tri(s_am, s_my) == p:
                cnt[_sidx(sy)] += 1
            sy = mark_b[y]
            if (sy == 1 or sy == -1) and _tri(s_bm, s_my) == p:
                cnt[_sidx(sy)] += 1
        _acc(p, pp, pn, cnt[0], cnt[1], n_ent, s_plain, s_cl, s_cn, rec, n_rec, mm, -1)

    # W tables: w_b[c, s_cP, s_bP] over P in N(c) & N(b); w_a[d, s_dQ, s_aQ] over Q in N(d) & N(a)
    for j in range(indptr[a], indptr[a + 1]):
        c = indices[j]
        if c == b or (mark_a[c] != 1 and mark_a[c] != -1):
            continue
        for k in range(indptr[c], indptr[c + 1]):
            x = indices[k]
            s_cx = signs[link_ids[k]]
            sb = mark_b[x]
            if s_cx != 0 and (sb == 1 or sb == -1):
                w_b[c, _sidx(s_cx), _sidx(sb)] += 1
    for j in range(indptr[b], indptr[b + 1]):
        d = indices[j]
        if d == a or (mark_b[d] != 1 and mark_b[d] != -1):
            continue
        for k in range(indptr[d], indptr[d + 1]):
            x = indices[k]
            s_dx = signs[link_ids[k]]
            sa = mark_a[x]
            if s_dx != 0 and (sa == 1 or sa == -1):
                w_a[d, _sidx(s_dx), _sidx(sa)] += 1

    # paths a-c-d-b; entity (c, d)
    for j in range(indptr[a], indptr[a + 1]):
        c = indices[j]
        s_ac = mark_a[c]
        if c == b or (s_ac != 1 and s_ac != -1):
            continue
        for k in range(indptr[c], indptr[c + 1]):
            d = indices[k]
            if d == a or d == b:
                continue
            s_cd = signs[link_ids[k]]
            s_db = mark_b[d]
            if s_cd == 0 or (s_db != 1 and s_db != -1):
                continue
            if induced and (mark_a[d] != 0 or mark_b[c] != 0):
                continue
            s_ad = mark_a[d]
            s_cb = mark_b[c]
            rev = (s_ad == 1 or s_ad == -1) and (s_cb == 1 or s_cb == -1)
            if rev and c > d:
                continue
            l_cd = link_ids[k]
            p1 = _quad(code_tab, s_ac, s_cd, s_db)
            p2 = _quad(code_tab, s_ad, s_cd, s_cb) if rev else -1
            for which in range(2):
                p = p1 if which == 0 else p2
                if p < 0 or (which == 1 and p2 == p1):
                    continue
                n_match = 0
                cnt[0] = 0
                cnt[1] = 0
                for o in range(2):
                    if o == 0:
                        x, y, s_ax, s_yb, po = c, d, s_ac, s_db, p1
                    else:
                        if not rev:
                            continue
                        x, y, s_ax, s_yb, po = d, c, s_ad, s_cb, p2
                    if po != p:
                        continue
                    n_match += 1
                    # a hangs off x; partner Q off y needs sign(y, Q) == sign(y, b)
                    # b hangs off y; partner P off x needs sign(x, P) == sign(x, a)
                    iy = _sidx(s_yb)
                    ix = _sidx(s_ax)
                    if induced:
                        _induced_connectors(x, y, a, b, iy, ix, indptr, indices, link_ids, signs,
                                            mark_a, mark_b, cnt)
                        continue
                    for si in range(2):
                        cnt[si] += w_a[y, iy, si] + w_b[x, ix, si]
                    if _sidx(s_cd) == iy:
                        cnt[_sidx(s_ax)] -= 1  # Q == x
                    if _sidx(s_cd) == ix:
                        cnt[_sidx(s_yb)] -= 1  # P == y
                    if self_known:
                        cnt[self_idx] -= 2  # Q == b and P == a
                pp = quad_tot[l_cd, p - 3, 0]
                pn = quad_tot[l_cd, p - 3, 1]
                if self_known:
                    if self_idx == 0:
                        pp -= n_match
                    else:
                        pn -= n_match
                _acc(p, pp, pn, cnt[0], cnt[1], n_ent, s_plain, s_cl, s_cn, rec, n_rec, c, d)

    # leave scratch clean
    for j in range(indptr[a], indptr[a + 1]):
        c = indices[j]
        mark_a[c] = 0
        for si in range(2):
            for sj in range(2):
                w_b[c, si, sj] = 0
    for j in range(indptr[b], indptr[b + 1]):
        d = indices[j]
        mark_b[d] = 0
        for si in range(2):
            for sj in range(2):
                w_a[d, si, sj] = 0


@njit(cache=True, nogil=True)
def batch_evidence(ta, tb, indptr, indices, link_ids, signs, tri_tot, quad_tot, induced):
    """Per-target entity counts and log-ratio sums for every predictor.

    Returns ``n_ent, s_plain, s_cl, s_cn``, each of shape ``(len(ta), 9)``;
    the ``s_*`` arrays hold sums over entities of ln((pos+1)/(neg+1)).
    """
    n = indptr.shape[0] - 1
    t = ta.shape[0]
    n_ent = np.zeros((t, 9), dtype=np.int64)
    s_plain = np.zeros((t, 9))
    s_cl = np.zeros((t, 9))
    s_cn = np.zeros((t, 9))
    mark_a = np.zeros(n, dtype=np.int8)
    mark_b = np.zeros(n, dtype=np.int8)
    w_a = np.zeros((n, 2, 2), dtype=np.int64)
    w_b = np.zeros((n, 2, 2), dtype=np.int64)
    rec = np.zeros((0, 7), dtype=np.int64)
    n_rec = np.zeros(1, dtype=np.int64)
    for i in range(t):
        _one_target(ta[i], tb[i], indptr, indices, link_ids, signs, tri_tot, quad_tot, induced,
                    mark_a, mark_b, w_a, w_b, n_ent[i], s_plain[i], s_cl[i], s_cn[i], rec, n_rec)
    return n_ent, s_plain, s_cl, s_cn


@njit(cache=True, nogil=True)
def target_records(a, b, indptr, indices, link_ids, signs, tri_tot, quad_tot, induced):
    """Per-entity rows ``(predictor, e0, e1, plain+, plain-, cl+, cl-)`` for one target."""
    n = indptr.shape[0] - 1
    cap = 1
    for j in range(indptr[a], indptr[a + 1]):
        c = indices[j]
        cap += 1 + 2 * (indptr[c + 1] - indptr[c])
    rec = np.zeros((cap, 7), dtype=np.int64)
    n_rec = np.zeros(1, dtype=np.int64)
    mark_a = np.zeros(n, dtype=np.int8)
    mark_b = np.zeros(n, dtype=np.int8)
    w_a = np.zeros((n, 2, 2), dtype=np.int64)
    w_b = np.zeros((n, 2, 2), dtype=np.int64)
    n_ent = np.zeros(9, dtype=np.int64)
    s_plain = np.zeros(9)
    s_cl = np.zeros(9)
    s_cn = np.zeros(9)
    _one_target(a, b, indptr, indices, link_ids, signs, tri_tot, quad_tot, induced,
                mark_a, mark_b, w_a, w_b, n_ent, s_plain, s_cl, s_cn, rec, n_rec)
    return rec[:n_rec[0]]
