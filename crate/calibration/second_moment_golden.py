"""High-precision reference values for the second-moment ratio.

Evaluates sum_a F(a) G(a) with mpmath at 60 significant digits using exact
integer binomials and falling factorials. The Rust acceptance suite freezes
the printed values as golden constants.

Run: python3 calibration/second_moment_golden.py
"""
from mpmath import mp, mpf, binomial, log, exp

mp.dps = 60


def ff(a, b):
    out = mpf(1)
    for j in range(b):
        out *= (a - j)
    return out


def phi(n, k):
    return mpf(2) ** k * ff(n // 2, k) / ff(n, k)


def ratio(n, k, m):
    nk = ff(n, k)
    half = ff(n // 2, k) / nk
    den = (1 - 2 * half) ** 2
    cnn = binomial(n, n // 2)
    total = mpf(0)
    for a in range(n // 2 + 1):
        f = binomial(n // 2, a) ** 2 / cnn
        num = 1 - 4 * half + 2 * ff(a, k) / nk + 2 * ff(n // 2 - a, k) / nk
        total += f * exp(m * (log(num) - log(den)))
    return total


def even_half_square(k):
    n = round(k * k / 2)
    return n if n % 2 == 0 else n + 1


if __name__ == "__main__":
    print("k,n,m,ratio,excess")
    for k in (10, 14, 18, 22, 26, 30):
        n = even_half_square(k)
        c = mpf("0.8") * log(2) / phi(n, k)
        m = c * n * mpf(2) ** (k - 1)
        r = ratio(n, k, m)
        print(f"{k},{n},{mp.nstr(m, 20)},{mp.nstr(r, 20)},{mp.nstr(r - 1, 17)}")
