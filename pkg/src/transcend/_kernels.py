"""Float screening kernels for the exhaustive polynomial scan.

Every integer coefficient vector c in [-H, H]^p with first nonzero entry
positive is visited. The vector is split into a prefix (all but the last
entry, one "row" per prefix) and the last entry. For each record the float
value of sum c_i v_i comes with an a-priori error bound, giving an interval
[lower, upper] that contains |P(omega)|.

Two backends compute identical floats in identical order: numba (default) and
plain numpy, selected with TRANSCEND_NUMBA=0.
"""

from __future__ import annotations

import os

import numpy as np

ERR_INFLATE = 1.0 + 2.0 ** -40
ERR_FLOOR = 1e-300

_use_numba = os.environ.get("TRANSCEND_NUMBA", "1") not in ("0", "false", "no")
try:
    if not _use_numba:
        raise ImportError
    import numba
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    from numba import njit, prange
except ImportError:
    numba = None


def backend() -> str:
    return "numba" if numba is not None else "numpy"


def set_threads(n: int | None = None):
    if numba is None:
        return
    if n is None:
        env = os.environ.get("TRANSCEND_THREADS")
        n = int(env) if env else None
    if n:
        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


def _row_prefix(r, base, H, digits):
    for i in range(digits.shape[0] - 1, -1, -1):
        digits[i] = r % base - H
        r //= base


if numba is not None:
    _row_prefix_nb = njit(cache=True)(_row_prefix)

    @njit(cache=True)
    def _prefix_sums(digits, re, im, eb, deg):
        """(sign state, re, im, err, height, degree) for a coefficient prefix."""
        first = 0
        pre_re = 0.0
        pre_im = 0.0
        pre_e = 0.0
        pre_h = 0
        pre_d = -1
        for i in range(digits.shape[0]):
            c = digits[i]
            if c != 0:
                if first == 0:
                    first = 1 if c > 0 else -1
                pre_re = pre_re + c * re[i]
                pre_im = pre_im + c * im[i]
                a = abs(c)
                pre_e = pre_e + a * eb[i]
                if a > pre_h:
                    pre_h = a
                if deg[i] > pre_d:
                    pre_d = deg[i]
        return first, pre_re, pre_im, pre_e, pre_h, pre_d

    @njit(parallel=True, cache=True)
    def _pass_extrema_nb(re, im, eb, deg, H, nthreads):
        p = re.shape[0]
        base = 2 * H + 1
        nrows = base ** (p - 1)
        D = deg.max()
        minup = np.full((nthreads, H + 1, D + 1), np.inf)
        maxlow = np.full((nthreads, H + 1, D + 1), -np.inf)
        rl, il, el, dl = re[p - 1], im[p - 1], eb[p - 1], deg[p - 1]
        for r in prange(nrows):
            tid = numba.get_thread_id()
            digits = np.empty(p - 1, dtype=np.int64)
            _row_prefix_nb(r, base, H, digits)
            first, pre_re, pre_im, pre_e, pre_h, pre_d = _prefix_sums(digits, re, im, eb, deg)
            if first < 0:
                continue
            lo = 1 if first == 0 else -H
            for c in range(lo, H + 1):
                x = pre_re + c * rl
                y = pre_im + c * il
                e = (pre_e + abs(c) * el) * ERR_INFLATE + ERR_FLOOR
                mag = np.sqrt(x * x + y * y)
                h = max(pre_h, abs(c))
                dg = pre_d if c == 0 else max(pre_d, dl)
                up = mag + e
                low = mag - e
                if up < minup[tid, h, dg]:
                    minup[tid, h, dg] = up
                if low > maxlow[tid, h, dg]:
                    maxlow[tid, h, dg] = low
        out_min = minup[0].copy()
        out_max = maxlow[0].copy()
        for t in range(1, nthreads):
            out_min = np.minimum(out_min, minup[t])
            out_max = np.maximum(out_max, maxlow[t])
        return out_min, out_max

    @njit(cache=True)
    def _is_candidate(low, up, h, dg, minup, maxlow):
        return low <= minup[h, dg] or up >= maxlow[h, dg]

    @njit(parallel=True, cache=True)
    def _pass_select_nb(re, im, eb, deg, H, minup, maxlow, fill, offsets, out):
        """Count candidates per row (fill=False) or write them at offsets (fill=True)."""
        p = re.shape[0]
        base = 2 * H + 1
        nrows = base ** (p - 1)
        counts = np.zeros(nrows, dtype=np.int64)
        rl, il, el, dl = re[p - 1], im[p - 1], eb[p - 1], deg[p - 1]
        for r in prange(nrows):
            digits = np.empty(p - 1, dtype=np.int64)
            _row_prefix_nb(r, base, H, digits)
            first, pre_re, pre_im, pre_e, pre_h, pre_d = _prefix_sums(digits, re, im, eb, deg)
            if first < 0:
                continue
            lo = 1 if first == 0 else -H
            k = 0
            for c in range(lo, H + 1):
                x = pre_re + c * rl
                y = pre_im + c * il
                e = (pre_e + abs(c) * el) * ERR_INFLATE + ERR_FLOOR
                mag = np.sqrt(x * x + y * y)
                h = max(pre_h, abs(c))
                dg = pre_d if c == 0 else max(pre_d, dl)
                if _is_candidate(mag - e, mag + e, h, dg, minup, maxlow):
                    if fill:
                        row = offsets[r] + k
                        for i in range(p - 1):
                            out[row, i] = digits[i]
                        out[row, p - 1] = c
                    k += 1
            counts[r] = k
        return counts


def _prefix_sums_py(digits, re, im, eb, deg):
    first = 0
    pre_re = pre_im = pre_e = 0.0
    pre_h = 0
    pre_d = -1
    for i, c in enumerate(digits):
        c = int(c)
        if c:
            if not first:
                first = 1 if c > 0 else -1
            pre_re = pre_re + c * float(re[i])
            pre_im = pre_im + c * float(im[i])
            pre_e = pre_e + abs(c) * float(eb[i])
            pre_h = max(pre_h, abs(c))
            pre_d = max(pre_d, int(deg[i]))
    return first, pre_re, pre_im, pre_e, pre_h, pre_d


def _rows_np(re, im, eb, deg, H):
    """Yield (row, digits, c, low, up, h, dg) with numpy vectors over the last entry."""
    p = re.shape[0]
    base = 2 * H + 1
    digits = np.empty(p - 1, dtype=np.int64)
    rl, il, el, dl = float(re[-1]), float(im[-1]), float(eb[-1]), int(deg[-1])
    for r in range(base ** (p - 1)):
        _row_prefix(r, base, H, digits)
        first, pre_re, pre_im, pre_e, pre_h, pre_d = _prefix_sums_py(digits, re, im, eb, deg)
        if first < 0:
            continue
        lo = 1 if first == 0 else -H
        c = np.arange(lo, H + 1, dtype=np.int64)
        cf = c.astype(np.float64)
        x = pre_re + cf * rl
        y = pre_im + cf * il
        e = (pre_e + np.abs(cf) * el) * ERR_INFLATE + ERR_FLOOR
        mag = np.sqrt(x * x + y * y)
        h = np.maximum(pre_h, np.abs(c))
        dg = np.where(c == 0, pre_d, max(pre_d, dl))
        yield r, digits, c, mag - e, mag + e, h, dg


def _pass_extrema_np(re, im, eb, deg, H):
    D = int(deg.max())
    minup = np.full((H + 1, D + 1), np.inf)
    maxlow = np.full((H + 1, D + 1), -np.inf)
    for _, _, _, low, up, h, dg in _rows_np(re, im, eb, deg, H):
        np.minimum.at(minup, (h, dg), up)
        np.maximum.at(maxlow, (h, dg), low)
    return minup, maxlow


def _select_np(re, im, eb, deg, H, minup, maxlow):
    p = re.shape[0]
    chunks = []
    for _, digits, c, low, up, h, dg in _rows_np(re, im, eb, deg, H):
        mask = (low <= minup[h, dg]) | (up >= maxlow[h, dg])
        if mask.any():
            sel = c[mask]
            block = np.empty((sel.shape[0], p), dtype=np.int64)
            block[:, :p - 1] = digits
            block[:, p - 1] = sel
            chunks.append(block)
    if not chunks:
        return np.empty((0, p), dtype=np.int64)
    return np.concatenate(chunks)


def screen(re, im, eb, deg, H: int):
    """Candidate coefficient vectors, plus the per-(height, degree) float extrema.

    A record is a candidate when its interval could hold the least |P| or the
    largest |P| among records of the same height and degree; records whose
    interval reaches 0 are always candidates.
    """
    re = np.ascontiguousarray(re, dtype=np.float64)
    im = np.ascontiguousarray(im, dtype=np.float64)
    eb = np.ascontiguousarray(eb, dtype=np.float64)
    deg = np.ascontiguousarray(deg, dtype=np.int64)
    p = re.shape[0]
    if p < 2:
        raise ValueError("screen needs at least two coefficients")
    if numba is None:
        minup, maxlow = _pass_extrema_np(re, im, eb, deg, H)
        cands = _select_np(re, im, eb, deg, H, minup, maxlow)
        return cands, minup, maxlow
    set_threads()
    nthreads = numba.get_num_threads()
    minup, maxlow = _pass_extrema_nb(re, im, eb, deg, H, nthreads)
    dummy = np.empty((0, p), dtype=np.int64)
    zero = np.zeros(1, dtype=np.int64)
    counts = _pass_select_nb(re, im, eb, deg, H, minup, maxlow, False, zero, dummy)
    offsets = np.zeros(counts.shape[0], dtype=np.int64)
    np.cumsum(counts[:-1], out=offsets[1:])
    out = np.empty((int(counts.sum()), p), dtype=np.int64)
    _pass_select_nb(re, im, eb, deg, H, minup, maxlow, True, offsets, out)
    return out, minup, maxlow
