"""
Hot inner loops.

Field elements inside the kernels are carried in *log form*: an element
``g**k`` is stored as ``k`` in ``[0, order)`` and zero is stored as the
sentinel ``order`` (``order = q - 1``). Multiplication is addition of logs,
addition goes through the Zech table ``zech[k] = log(1 + g**k)``.

Every kernel exists twice: a numba-compiled version and a numpy version that
shares no code with it. ``BACKEND`` picks the default; both can be called
explicitly, which is what the tests and ``benchmarks/`` do.
"""

import numpy as np

from ._jit import HAS_NUMBA, njit

BACKEND = "numba" if HAS_NUMBA else "numpy"

NUMPY_CHUNK = 1 << 18


# ---------------------------------------------------------------------------
# exp table construction


@njit(cache=True)
def _exp_table_loop(p, a, modulus, gen, q):
    out = np.empty(q - 1, dtype=np.int64)
    cur = np.zeros(a, dtype=np.int64)
    prod = np.zeros(2 * a, dtype=np.int64)
    cur[0] = 1
    for j in range(q - 1):
        code = 0
        w = 1
        for i in range(a):
            code += cur[i] * w
            w *= p
        out[j] = code
        for i in range(2 * a):
            prod[i] = 0
        for i in range(a):
            if cur[i] == 0:
                continue
            for k in range(a):
                prod[i + k] = (prod[i + k] + cur[i] * gen[k]) % p
        # modulus is monic of degree a: x^a = -sum(modulus[i] x^i)
        for top in range(2 * a - 2, a - 1, -1):
            c = prod[top]
            if c == 0:
                continue
            prod[top] = 0
            for i in range(a):
                prod[top - a + i] = (prod[top - a + i] - c * modulus[i]) % p
        for i in range(a):
            cur[i] = prod[i]
    return out


def exp_table(p, a, modulus, gen_digits):
    """Powers ``g**0 .. g**(q-2)`` as element codes.

    ``modulus`` holds the ``a + 1`` coefficients of the monic modulus (low
    degree first) and ``gen_digits`` the ``a`` base-p digits of ``g``.
    """
    q = p ** a
    return _exp_table_loop(
        p, a, np.asarray(modulus, dtype=np.int64), np.asarray(gen_digits, dtype=np.int64), q
    )


# ---------------------------------------------------------------------------
# character-sum histogram


@njit(cache=True, nogil=True)
def _charsum_hist_numba(x0, V, mult, log_of_code, zech, order, q, start, stop, hist_len):
    n = x0.shape[0]
    d = V.shape[0]
    zero = order
    hist = np.zeros(hist_len, dtype=np.int64)
    tlog = np.empty(max(d, 1), dtype=np.int64)
    for idx in range(start, stop):
        rem = idx
        for j in range(d - 1, -1, -1):
            tlog[j] = log_of_code[rem % q]
            rem //= q
        s = 0
        alive = True
        for i in range(n):
            acc = x0[i]
            for j in range(d):
                v = V[j, i]
                t = tlog[j]
                if v == zero or t == zero:
                    continue
                term = v + t
                if term >= order:
                    term -= order
                if acc == zero:
                    acc = term
                else:
                    diff = term - acc
                    if diff < 0:
                        diff += order
                    z = zech[diff]
                    if z == zero:
                        acc = zero
                    else:
                        acc += z
                        if acc >= order:
                            acc -= order
            if acc == zero:
                alive = False
                break
            s = (s + mult[i] * acc) % hist_len
        if alive:
            hist[s] += 1
    return hist


def _zech_add_vec(u, v, zech, order):
    zero = order
    out = np.where(u == zero, v, u)
    both = (u != zero) & (v != zero)
    if both.any():
        uu = u[both]
        z = zech[(v[both] - uu) % order]
        out[both] = np.where(z == zero, zero, (uu + z) % order)
    return out


def _charsum_hist_numpy(x0, V, mult, log_of_code, zech, order, q, start, stop, hist_len):
    n = x0.shape[0]
    d = V.shape[0]
    zero = order
    hist = np.zeros(hist_len, dtype=np.int64)
    for lo in range(start, stop, NUMPY_CHUNK):
        idx = np.arange(lo, min(stop, lo + NUMPY_CHUNK), dtype=np.int64)
        tlogs = []
        rem = idx.copy()
        for _ in range(d):
            tlogs.append(log_of_code[rem % q])
            rem //= q
        tlogs.reverse()
        s = np.zeros(idx.shape[0], dtype=np.int64)
        alive = np.ones(idx.shape[0], dtype=bool)
        for i in range(n):
            acc = np.full(idx.shape[0], x0[i], dtype=np.int64)
            for j in range(d):
                if V[j, i] == zero:
                    continue
                t = tlogs[j]
                term = np.where(t == zero, zero, (t + V[j, i]) % order)
                acc = _zech_add_vec(acc, term, zech, order)
            alive &= acc != zero
            s = (s + mult[i] * np.where(acc == zero, 0, acc)) % hist_len
        hist += np.bincount(s[alive], minlength=hist_len)
    return hist


def charsum_hist(x0, V, mult, log_of_code, zech, order, q, start, stop, hist_len, backend=None):
    """Histogram of character exponents over the points ``x0 + sum_j t_j V[j]``.

    Points are indexed by ``idx`` in ``[start, stop)``; the free coordinates
    ``t`` are the base-``q`` digits of ``idx`` (most significant first), each
    digit an element code. ``x0`` and ``V`` are in log form. A point with some
    zero coordinate is dropped; every other point adds one to bin
    ``sum_i mult[i] * log(x_i) mod hist_len``.
    """
    backend = backend or BACKEND
    args = (
        np.ascontiguousarray(x0, dtype=np.int64),
        np.ascontiguousarray(V, dtype=np.int64).reshape(-1, len(x0)),
        np.ascontiguousarray(mult, dtype=np.int64),
        log_of_code,
        zech,
        int(order),
        int(q),
        int(start),
        int(stop),
        int(hist_len),
    )
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but JIT is disabled")
        return _charsum_hist_numba(*args)
    if backend == "numpy":
        return _charsum_hist_numpy(*args)
    raise ValueError(f"unknown backend {backend!r}")
