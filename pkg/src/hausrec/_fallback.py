"""Pure-Python record-scan kernels.

Same signatures and results as the compiled ``_kernels`` module.  Python
integers are unbounded, so these also serve inputs that overflow the
compiled versions (more than 39 ternary digits, more than 64 fixed-point
bits).
"""

MASK64 = (1 << 64) - 1


def odometer_scan(x, W, ones_tail, N):
    """Closest returns of ``x`` under the adding machine for ``n = 1..N``.

    ``x`` holds the first ``W`` digits.  The running integer ``acc`` equals
    ``3**W * (T^n x - x)``, so a record ``(n, a)`` means distance ``a / 3**W``.
    Digits beyond ``W`` are never touched by a carry unless the tail is all
    ones, in which case the carry runs off to infinity exactly once and
    shifts ``acc`` by ``-1``.
    """
    y = list(x)
    w3 = [3 ** (W - 1 - k) for k in range(W)]
    acc = 0
    wrapped = False
    best = -1
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


def rotation_scan(F, bits, N):
    """Fixed-point closest-return scan of ``||n*theta||`` with ``theta*2**bits in (F, F+1)``.

    Returns ``(records, failed_n)``; ``records`` holds ``(n, dist)`` in units of
    ``2**-bits`` and ``failed_n`` is the first index whose comparison with the
    current record could not be certified (0 when none).
    """
    mod = 1 << bits
    half = mod >> 1
    m = 0
    best = -1
    best_n = 0
    out = []
    for n in range(1, N + 1):
        m += F
        if m >= mod:
            m -= mod
        c = m if m <= half else mod - m
        if best < 0:
            best, best_n = c, n
            out.append((n, c))
            continue
        if c + n < best - best_n:
            best, best_n = c, n
            out.append((n, c))
        elif c - n > best + best_n:
            continue
        else:
            return out, n
    return out, 0


def _window(bits, D, n):
    w = 0
    for j in range(n, n + 64):
        w = (w << 1) | (bits[j] if j < D else 0)
    return w


def _circ(a, b):
    r = (a - b) & MASK64
    return r if r <= (MASK64 >> 1) else (1 << 64) - r


def doubling_scan(bits, D, start, N, best_n):
    """Windowed scan of ``d(2^n x mod 1, x)`` for ``n = start..N``.

    ``bits`` are the binary digits of ``x`` (most significant first).  Each
    distance is known from 64-bit windows to within one unit of ``2**-64``.
    Returns ``(record_ns, ambiguous_n)``; the caller settles an ambiguous
    comparison exactly and resumes after it.
    """
    bits = bits.tolist() if hasattr(bits, "tolist") else list(bits)
    w0 = _window(bits, D, 0)
    best = _circ(_window(bits, D, best_n), w0) if best_n else -1
    w = _window(bits, D, start)
    out = []
    for n in range(start, N + 1):
        if n > start:
            j = n + 63
            w = ((w << 1) & MASK64) | (bits[j] if j < D else 0)
        c = _circ(w, w0)
        if best < 0:
            best = c
            out.append(n)
        elif c + 1 < best - 1:
            best = c
            out.append(n)
        elif c - 1 > best + 1:
            continue
        else:
            return out, n
    return out, 0
