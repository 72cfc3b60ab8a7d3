"""Independent exact-arithmetic oracle for the hand-computed values frozen in the C++ tests."""
import math
import sys
from fractions import Fraction as F


def half(x):
    return x / 2


def main():
    failures = []

    def expect(name, got, want, tol=0):
        if abs(got - want) > tol:
            failures.append(f"{name}: got {got}, want {want}")

    # one step of each scheme: psi0 = 1, T_i(x) = {x/2}, zero forward/backward parts
    psi, a, mu, beta, theta, g = F(1), F(1, 2), F(2, 5), F(3, 4), F(3, 4), F(1, 2)
    delta = psi
    pi = beta * delta + (1 - beta) * half(delta)
    ph = theta * pi + (1 - theta) * half(pi)
    xi = g * ph + (1 - g) * half(ph)
    expect("pi", pi, F(7, 8))
    expect("phi", ph, F(49, 64))
    expect("xi", xi, F(147, 256))
    expect("main", mu * xi + (1 - mu) * (psi - a * psi), F(339, 640))  # 0.5296875
    expect("sow", pi - a * pi, F(7, 16))  # 0.4375
    expect("fc", xi - a * xi, F(147, 512))  # 0.287109375

    # oscillating map at (2/pi, 2/(3 pi)), k = 1
    p, q = 2 / math.pi, 2 / (3 * math.pi)
    T = lambda x: (2 / 3) * x * math.sin(1 / x)
    expect("H^2", (T(p) - T(q)) ** 2, 256 / (81 * math.pi**2), 1e-15)
    expect("rhs", (p - q) ** 2 + ((p - T(p)) - (q - T(q))) ** 2, 160 / (81 * math.pi**2), 1e-15)

    # bounded radius with f(x) = x/2 + 0.3, gamma = 0.25, tau = 0.5, b = 0.5, mu = 0.4
    expect("radius", F(1, 4) * F(3, 10) / (F(1, 2) - F(1, 8) - F(1, 2) * F(2, 5)), F(3, 7))

    # second Hilbert identity at x = (2,0), y = 0, l = 1/4
    l = F(1, 4)
    expect("identity", l * l * 4, l * 4 - l * (1 - l) * 4)

    for f in failures:
        print("FAIL", f)
    print("oracle values:", "ok" if not failures else f"{len(failures)} mismatches")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
