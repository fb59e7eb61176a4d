"""High-precision reference values for the closed-form solver tests.

Evaluates every formula with mpmath at 50 digits, independently of the C++
implementation. Run: python3 tests/oracles/closed_form_oracle.py
"""
from mpmath import mp, mpf, sqrt, exp, log, findroot

mp.dps = 50

MU, SIGMA, R, Q = mpf("0.1"), mpf("0.1"), mpf("0.02"), mpf("0.1")


def gammas(rho, mu=MU, sigma=SIGMA):
    s = sqrt(mu**2 / sigma**4 + 2 * rho / sigma**2)
    m = mu / sigma**2
    return s - m, -s - m


def barrier(rho):
    g1, g2 = gammas(rho)
    return log(g2**2 / g1**2) / (g1 - g2)


def classical_value(rho, x):
    g1, g2 = gammas(rho)
    b = barrier(rho)
    n = g1 * exp(g1 * b) - g2 * exp(g2 * b)
    if x < b:
        return (exp(g1 * x) - exp(g2 * x)) / n
    return (exp(g1 * b) - exp(g2 * b)) / n + x - b


def delta(y):
    g1, g2 = gammas(R + Q)
    return exp(g1 * y) - exp(g2 * y), g1 * exp(g1 * y) - g2 * exp(g2 * y)


def gap(y):
    g1, g2 = gammas(R)
    d, dp = delta(y)
    return log((dp - g1 * d) * g2**2 / ((dp - g2 * d) * g1**2)) / (g1 - g2)


def f_of_y(y):
    g1, g2 = gammas(R)
    d, dp = delta(y)
    base = g2**2 / g1**2 * (dp - g1 * d) / (dp - g2 * d)
    return (-g1 / g2 * dp + g1 * d) * base ** (g1 / (g1 - g2)) - delta(barrier(R + Q))[1]


def e_coeffs(b, y):
    a1, a2 = gammas(R + Q)
    c1, c2 = gammas(R)
    v = classical_value(R + Q, b)
    wq = (a1 - a2) * exp((a1 + a2) * b)
    e1 = (exp(a2 * b) - a2 * exp(a2 * b) * v) / wq
    e2 = (a1 * exp(a1 * b) * v - exp(a1 * b)) / wq
    wr = (c1 - c2) * exp((c1 + c2) * y)
    psr, phr = exp(c1 * y), exp(c2 * y)
    psq, phq = exp(a1 * y), exp(a2 * y)
    e3 = (e1 * (phr * a1 * psq - c2 * phr * psq) + e2 * (phr * a2 * phq - c2 * phr * phq)) / wr
    e4 = (e1 * (c1 * psr * psq - psr * a1 * psq) + e2 * (c1 * psr * phq - psr * a2 * phq)) / wr
    return e1, e2, e3, e4


def H(b, y):
    g1, g2 = gammas(R)
    _, _, e3, e4 = e_coeffs(b, y)
    k = g1 - g2
    return k * (-g2 / g1) ** ((g1 + g2) / k) * e3 ** (-g2 / k) * (-e4) ** (g1 / k)


def upper_free(b, y):
    g1, g2 = gammas(R)
    _, _, e3, e4 = e_coeffs(b, y)
    return log(-(g2**2) * e4 / (g1**2 * e3)) / (g1 - g2)


def bisect(fn, lo, hi, iters=200):
    flo = fn(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        fm = fn(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


if __name__ == "__main__":
    g1, g2 = gammas(mpf("0.12"))
    print("gamma(0.12)", g1, g2)
    print("psi(0.12, x=1)", exp(g1))
    c1, c2 = gammas(R)
    eta = c1 * exp(c1 * 2) * exp(c2 * 1) - c2 * exp(c2 * 2) * exp(c1 * 1)
    deta = c1 * exp(c1 * 2) * c2 * exp(c2 * 1) - c2 * exp(c2 * 2) * c1 * exp(c1 * 1)
    print("eta(y=1;b=2) r=0.02", eta, "d/dy", deta)
    brq, br = barrier(R + Q), barrier(R)
    yu = brq + MU / R - MU / (R + Q)
    print("b*_{r+q}", brq, "b*_r", br, "y_u", yu)
    yl = bisect(f_of_y, brq + mpf("1e-9"), yu - mpf("1e-9"))
    print("y_l", yl)
    ys = mpf("0.9") * yl
    print("y_sub", ys, "b*(y_sub)", ys + gap(ys))
    print("b*(y_l)", yl + gap(yl))
    yc = mpf("0.9") * yl + mpf("0.1") * yu
    blow = bisect(lambda b: H(b, yc) - 1, brq + mpf("1e-9"), yc - mpf("1e-9"))
    print("y_crit", yc, "b_low", blow, "b_up", upper_free(blow, yc))
    e1, e2, e3, e4 = e_coeffs(mpf(2), mpf(2))
    print("e3(2,2)", e3, "e4(2,2)", e4)
    # Sign change count of f on a fine grid.
    n = 1000
    signs = [f_of_y(brq + (yu - brq) * (i + mpf("0.5")) / n) > 0 for i in range(n)]
    print("f sign changes", sum(1 for a, b in zip(signs, signs[1:]) if a != b))
    for k in (3, 4, 5):
        eps = mpf(10) ** (-k)
        y = yl + eps
        bl = bisect(lambda b: H(b, y) - 1, brq + mpf("1e-12"), y - mpf("1e-12"))
        print("near y_l eps", eps, bl, upper_free(bl, y))
        y = yu - eps
        bl = bisect(lambda b: H(b, y) - 1, brq + mpf("1e-12"), y - mpf("1e-12"))
        print("near y_u eps", eps, bl - y, upper_free(bl, y) - y)
