# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled record-scan kernels (see ``_fallback`` for the reference versions)."""

from libc.stdint cimport int64_t, uint64_t, uint8_t

MAX_ODOMETER_WINDOW = 39


def odometer_scan(x, int W, bint ones_tail, int64_t N):
    if W > MAX_ODOMETER_WINDOW:
        raise OverflowError("window too wide for int64 accumulation")
    cdef uint8_t y[64]
    cdef int64_t w3[64]
    cdef int64_t acc = 0, a, best = -1, n
    cdef int k
    cdef bint wrapped = False
    cdef int64_t p = 1
    for k in range(W):
        y[k] = x[k]
    for k in range(W - 1, -1, -1):
        w3[k] = p
        p *= 3
    out = []
    for n in range(1, N + 1):
        k = 0
        while k < W and y[k] == 1:
            y[k] = 0
            acc -= 2 * w3[k]
            k += 1
        if k < W:
            y[k] = 1
            acc += 2 * w3[k]
        elif ones_tail and not wrapped:
            wrapped = True
            acc -= 1
        else:
            raise OverflowError("carry left the working window")
        a = acc if acc >= 0 else -acc
        if best < 0 or a < best:
            best = a
            out.append((n, a))
            if a == 0:
                break
    return out


def rotation_scan(F, int bits, int64_t N):
    if bits != 64:
        raise OverflowError("compiled rotation scan is 64-bit only")
    cdef uint64_t f = F
    cdef uint64_t m = 0, c, best = 0, best_n = 0
    cdef uint64_t half = (<uint64_t>1) << 63
    cdef bint have = False
    cdef int64_t n
    out = []
    for n in range(1, N + 1):
        m += f
        c = m if m <= half else (<uint64_t>0) - m
        if not have:
            have = True
            best = c
            best_n = n
            out.append((n, c))
            continue
        # c + n < best - best_n, written without unsigned underflow
        if best > best_n and c + <uint64_t>n < best - best_n:
            best = c
            best_n = n
            out.append((n, c))
        elif c > <uint64_t>n and c - <uint64_t>n > best + best_n:
            continue
        else:
            return out, n
    return out, 0


cdef inline uint64_t _window(const uint8_t[:] bits, int64_t D, int64_t n):
    cdef uint64_t w = 0
    cdef int64_t j
    for j in range(n, n + 64):
        w = (w << 1) | (bits[j] if j < D else 0)
    return w


cdef inline uint64_t _circ(uint64_t a, uint64_t b):
    cdef uint64_t r = a - b
    return r if r <= (((<uint64_t>1) << 63) - 1) else (<uint64_t>0) - r


def doubling_scan(const uint8_t[:] bits, int64_t D, int64_t start, int64_t N, int64_t best_n):
    cdef uint64_t w0 = _window(bits, D, 0)
    cdef uint64_t w = _window(bits, D, start)
    cdef uint64_t c, best = 0
    cdef bint have = best_n > 0
    cdef int64_t n, j
    if have:
        best = _circ(_window(bits, D, best_n), w0)
    out = []
    for n in range(start, N + 1):
        if n > start:
            j = n + 63
            w = (w << 1) | (bits[j] if j < D else 0)
        c = _circ(w, w0)
        if not have:
            have = True
            best = c
            out.append(n)
        elif best > 2 and c + 1 < best - 1:
            best = c
            out.append(n)
        elif c > 1 and c - 1 > best + 1:
            continue
        else:
            return out, n
    return out, 0
