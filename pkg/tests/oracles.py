"""Independent brute-force oracles used by the tests.

These deliberately avoid the vectorized kernels: sums are evaluated with
scalar field arithmetic (add/mul/inv/pow on packed indices), term by term,
so they form an independent route to the same values.
"""

from hypexp.cyclo import RouCounts


def brute_trace_H(K, P, t, psi_mult=1):
    counts = [0] * K.p
    for x in K.elements():
        xD = K.pow_el(x, P.D)
        for y in K.units():
            term = K.add(
                K.mul(t, K.mul(xD, K.inv(K.pow_el(y, P.N)))),
                K.add(K.mul(K.from_int(-P.D), x), K.mul(K.from_int(P.N), y)),
            )
            counts[(psi_mult * K.trace(term)) % K.p] += 1
    return RouCounts(K.p, counts)


def brute_trace_F(K, P, u, psi_mult=1):
    counts = [0] * K.p
    for x in K.elements():
        xD = K.pow_el(x, P.D)
        for y in K.units():
            term = K.add(
                K.mul(xD, K.inv(K.pow_el(y, P.N))),
                K.add(K.mul(K.from_int(-P.D), x),
                      K.mul(u, K.mul(K.from_int(P.N), y))),
            )
            counts[(psi_mult * K.trace(term)) % K.p] += 1
    return RouCounts(K.p, counts)


def brute_gauss_sum_embed(K, e, conjugate=False):
    """Complex Gauss sum by direct summation (float route)."""
    import cmath
    total = 0j
    q = K.q
    for x in K.units():
        a = K.trace(x) * (-1 if conjugate else 1)
        b = e * K.dlog(x)
        total += cmath.exp(2j * cmath.pi * (a / K.p + b / (q - 1)))
    return total
