"""Compiled kernels for splitting the unit square by many random cuts.

One kernel call processes a whole chunk of samples: each sample starts from
the unit square and is split by its cuts' supporting lines, maintaining
convex regions in fixed-size buffers.  Per-sample aggregates (region count,
areas, triangle count) come back as arrays.  The pure-Python
``squares.split_regions`` path implements the same algorithm and the two are
cross-checked in the test suite.
"""

from __future__ import annotations

import numpy as np
from numba import njit

SNAP = 1e-10        # vertices this close to a cut line are treated as on it
FLAG_BAND = 1e-8    # unsnapped vertices this close mark the sample suspect
MIN_AREA = 1e-14    # produced parts thinner than this are dropped (counted)
COLLINEAR = 1e-9    # turn-angle tolerance when merging collinear vertices


@njit(cache=True, nogil=True)
def _poly_area(xs, ys, m):
    acc = 0.0
    for j in range(m):
        jn = j + 1 if j + 1 < m else 0
        acc += xs[j] * ys[jn] - xs[jn] * ys[j]
    return abs(acc) * 0.5


@njit(cache=True, nogil=True)
def _effective_vertices(xs, ys, m):
    count = 0
    for j in range(m):
        jp = j - 1 if j > 0 else m - 1
        jn = j + 1 if j + 1 < m else 0
        ax = xs[j] - xs[jp]
        ay = ys[j] - ys[jp]
        bx = xs[jn] - xs[j]
        by = ys[jn] - ys[j]
        la = (ax * ax + ay * ay) ** 0.5
        lb = (bx * bx + by * by) ** 0.5
        if la <= 0.0 or lb <= 0.0:
            continue
        if abs(ax * by - ay * bx) > COLLINEAR * la * lb:
            count += 1
    return count


@njit(cache=True, nogil=True)
def run_square_cuts(x1, y1, x2, y2, active):
    """Split the unit square by each sample's cuts; return per-sample stats.

    Inputs are (samples, cuts) arrays of cut endpoints plus an activity mask
    (inactive cuts are skipped).  Returns region count, total area, max
    region area, triangle count, summed triangle area, dropped-sliver count,
    and a near-degeneracy flag per sample.
    """
    n_samples, n_cuts = x1.shape
    maxr = 2 + n_cuts + (n_cuts * (n_cuts - 1)) // 2 + 4
    maxv = n_cuts + 8

    out_nreg = np.zeros(n_samples, np.int64)
    out_total = np.zeros(n_samples)
    out_max = np.zeros(n_samples)
    out_ntri = np.zeros(n_samples, np.int64)
    out_trisum = np.zeros(n_samples)
    out_disc = np.zeros(n_samples, np.int64)
    out_flag = np.zeros(n_samples, np.uint8)

    vx = np.empty((maxr, maxv))
    vy = np.empty((maxr, maxv))
    cnt = np.empty(maxr, np.int64)
    dbuf = np.empty(maxv)
    px = np.empty(maxv)
    py = np.empty(maxv)
    qx = np.empty(maxv)
    qy = np.empty(maxv)

    for i in range(n_samples):
        vx[0, 0] = 0.0; vy[0, 0] = 0.0
        vx[0, 1] = 1.0; vy[0, 1] = 0.0
        vx[0, 2] = 1.0; vy[0, 2] = 1.0
        vx[0, 3] = 0.0; vy[0, 3] = 1.0
        cnt[0] = 4
        nreg = 1
        disc = 0
        flag = False

        for li in range(n_cuts):
            if not active[i, li]:
                continue
            ax = x1[i, li]; ay = y1[i, li]
            dx = x2[i, li] - ax; dy = y2[i, li] - ay
            norm = (dx * dx + dy * dy) ** 0.5
            if norm < 1e-15:
                flag = True
                continue
            nx = dy / norm; ny = -dx / norm
            c = nx * ax + ny * ay

            nbefore = nreg
            for r in range(nbefore):
                m = cnt[r]
                haspos = False
                hasneg = False
                for j in range(m):
                    d = nx * vx[r, j] + ny * vy[r, j] - c
                    ad = abs(d)
                    if ad <= SNAP:
                        d = 0.0
                    elif ad <= FLAG_BAND:
                        flag = True
                    dbuf[j] = d
                    if d > 0.0:
                        haspos = True
                    elif d < 0.0:
                        hasneg = True
                if not (haspos and hasneg):
                    continue
                if nreg >= maxr or m + 2 > maxv:
                    flag = True
                    continue

                npos = 0
                nneg = 0
                for j in range(m):
                    jn = j + 1 if j + 1 < m else 0
                    dj = dbuf[j]
                    djn = dbuf[jn]
                    xj = vx[r, j]; yj = vy[r, j]
                    if dj >= 0.0:
                        if npos == 0 or px[npos - 1] != xj or py[npos - 1] != yj:
                            px[npos] = xj; py[npos] = yj
                            npos += 1
                    if dj <= 0.0:
                        if nneg == 0 or qx[nneg - 1] != xj or qy[nneg - 1] != yj:
                            qx[nneg] = xj; qy[nneg] = yj
                            nneg += 1
                    if (dj > 0.0 and djn < 0.0) or (dj < 0.0 and djn > 0.0):
                        t = dj / (dj - djn)
                        ix = xj + t * (vx[r, jn] - xj)
                        iy = yj + t * (vy[r, jn] - yj)
                        px[npos] = ix; py[npos] = iy
                        npos += 1
                        qx[nneg] = ix; qy[nneg] = iy
                        nneg += 1
                if npos > 1 and px[0] == px[npos - 1] and py[0] == py[npos - 1]:
                    npos -= 1
                if nneg > 1 and qx[0] == qx[nneg - 1] and qy[0] == qy[nneg - 1]:
                    nneg -= 1

                apos = _poly_area(px, py, npos) if npos >= 3 else 0.0
                aneg = _poly_area(qx, qy, nneg) if nneg >= 3 else 0.0
                okpos = apos >= MIN_AREA
                okneg = aneg >= MIN_AREA
                if okpos and okneg:
                    for j in range(npos):
                        vx[r, j] = px[j]; vy[r, j] = py[j]
                    cnt[r] = npos
                    for j in range(nneg):
                        vx[nreg, j] = qx[j]; vy[nreg, j] = qy[j]
                    cnt[nreg] = nneg
                    nreg += 1
                elif okpos:
                    # crossed, but one part is a sliver: drop it, flag the
                    # sample (the combinatorial count check excludes it)
                    for j in range(npos):
                        vx[r, j] = px[j]; vy[r, j] = py[j]
                    cnt[r] = npos
                    disc += 1
                    flag = True
                elif okneg:
                    for j in range(nneg):
                        vx[r, j] = qx[j]; vy[r, j] = qy[j]
                    cnt[r] = nneg
                    disc += 1
                    flag = True
                else:
                    flag = True

        total = 0.0
        amax = 0.0
        ntri = 0
        trisum = 0.0
        for r in range(nreg):
            a = _poly_area(vx[r], vy[r], cnt[r])
            total += a
            if a > amax:
                amax = a
            if _effective_vertices(vx[r], vy[r], cnt[r]) == 3:
                ntri += 1
                trisum += a

        out_nreg[i] = nreg
        out_total[i] = total
        out_max[i] = amax
        out_ntri[i] = ntri
        out_trisum[i] = trisum
        out_disc[i] = disc
        out_flag[i] = 1 if flag else 0

    return out_nreg, out_total, out_max, out_ntri, out_trisum, out_disc, out_flag
