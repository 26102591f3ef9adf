"""High-precision reference values frozen into the Rust test suites.

Each growth-rate root is computed through the z-parametrisation of the curve
(alpha = f(z), G = G(f(z))) so no inversion of f is involved.
Run: python3 mp_oracles.py
"""
from mpmath import mp, mpf, log, sqrt, binomial, findroot

mp.dps = 50


def spc(s):
    return [binomial(s, u) if u % 2 == 0 else 0 for u in range(s + 1)]


def hamming(s):
    # exhaustive enumeration of the code spanned by the null space of the
    # binary-representation parity matrix
    m = (s + 1).bit_length() - 1
    cols = list(range(1, s + 1))
    counts = [0] * (s + 1)
    # brute force over the dual (simplex) then MacWilliams in exact ints
    dual = [0] * (s + 1)
    for msg in range(1 << m):
        w = sum(1 for c in cols if bin(c & msg).count("1") % 2)
        dual[w] += 1
    for u in range(s + 1):
        acc = 0
        for w, b in enumerate(dual):
            if b == 0:
                continue
            # coefficient of z^u in (1-z)^w (1+z)^(s-w)
            c = 0
            for i in range(0, min(u, w) + 1):
                c += (-1) ** i * int(binomial(w, i)) * int(binomial(s - w, u - i))
            acc += b * c
        assert acc % (1 << m) == 0
        counts[u] = acc // (1 << m)
    return counts


def A(c, z):
    return sum(mpf(a) * z**u for u, a in enumerate(c))


def dA(c, z):
    return sum(u * mpf(a) * z ** (u - 1) for u, a in enumerate(c) if u > 0)


def curve(types, q):
    """types: list of (coeffs, s, rho)"""

    def f(z):
        return sum(mpf(rho) / s * z * dA(c, z) / A(c, z) for c, s, rho in types)

    def G(z):
        a = f(z)
        h = -a * log(a) - (1 - a) * log(1 - a)
        return (1 - q) * h - q * a * log(z) + q * sum(
            mpf(rho) / s * log(A(c, z)) for c, s, rho in types
        )

    return f, G


def root(types, q, zlo, zhi):
    f, G = curve(types, q)
    # bisection on z over a bracket verified by the caller
    glo, ghi = G(mpf(zlo)), G(mpf(zhi))
    assert glo < 0 < ghi, (glo, ghi)
    lo, hi = mpf(zlo), mpf(zhi)
    for _ in range(200):
        mid = (lo + hi) / 2
        if G(mid) < 0:
            lo = mid
        else:
            hi = mid
    return f(lo)


def first_sign_change(types, q, zmin=1e-6, zmax=1e3, steps=4000):
    f, G = curve(types, q)
    prev = None
    for i in range(steps + 1):
        z = mpf(zmin) * (mpf(zmax) / zmin) ** (mpf(i) / steps)
        g = G(z)
        if prev is not None and prev[1] < 0 <= g:
            return root(types, q, prev[0], z)
        prev = (z, g)
    return None


if __name__ == "__main__":
    print("log(301) =", mp.nstr(log(301), 20))
    print("bound(0.04) =", mp.nstr(1 / sqrt(1 - mpf("0.04")) - 1, 20))
    print("1-exp(-1) =", mp.nstr(1 - mp.e ** -1, 20))
    d = findroot(lambda x: 1 + x * log(x, 2) + (1 - x) * log(1 - x, 2) - mpf("0.5"), 0.11)
    print("delta_gv(0.5) =", mp.nstr(d, 20))
    print("gallager(3,6) alpha* =", mp.nstr(first_sign_change([(spc(6), 6, 1)], 3), 20))
    print("gallager(3,4) alpha* =", mp.nstr(first_sign_change([(spc(4), 4, 1)], 3), 20))
    print("gallager(4,8) alpha* =", mp.nstr(first_sign_change([(spc(8), 8, 1)], 4), 20))
    for s in (7, 15, 31, 63):
        c = hamming(s)
        print(f"hamming({s}) =", c[:8], "...")
    for s in (7, 15, 31, 63):
        print(f"hamming({s}) q=2 alpha* =", mp.nstr(first_sign_change([(hamming(s), s, 1)], 2), 20))
    print("hamming(7) q=3 alpha* =", mp.nstr(first_sign_change([(hamming(7), 7, 1)], 3), 20))
    mix = [(spc(3), 3, mpf(1) / 5), (hamming(7), 7, mpf(4) / 5)]
    print("spc3(0.2)+ham7(0.8) q=2 alpha* =", mp.nstr(first_sign_change(mix, 2), 20))


def finite_n_log_bound(c, s, q, n, d0):
    """max_d [N G(d/N) + ln(d0 (8 N a (1-a))^((q-1)/2))] for one SPC-like type."""
    types = [(c, s, 1)]
    f, G = curve(types, q)
    best = None
    for d in range(1, d0 + 1):
        a = mpf(d) / n
        lo, hi = mpf("1e-30"), mpf(10) ** 6
        for _ in range(400):
            mid = sqrt(lo * hi)
            if f(mid) < a:
                lo = mid
            else:
                hi = mid
        z = sqrt(lo * hi)
        h = -a * log(a) - (1 - a) * log(1 - a)
        g = (1 - q) * h - q * a * log(z) + q * sum(mpf(rho) / s_ * log(A(c_, z)) for c_, s_, rho in types)
        val = n * g + log(d0 * (8 * n * a * (1 - a)) ** (mpf(q - 1) / 2))
        if best is None or val > best[0]:
            best = (val, d)
    return best


if __name__ == "__main__":
    v, d = finite_n_log_bound(spc(6), 6, 3, 6000, 60)
    print("finite-N spc(6) q=3 N=6000 d0=60 log bound =", mp.nstr(v, 20), "argmax", d)
