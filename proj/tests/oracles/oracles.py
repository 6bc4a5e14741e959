"""Reference values frozen into the unit tests.

Every quantity is computed here in extended precision with mpmath, from the
defining integrals or sums, independently of the C++ code paths.
Run: python3 tests/oracles/oracles.py
"""
import mpmath as mp

mp.mp.dps = 40
pi = mp.pi


def chi(s, xi0=1):
    a = abs(s)
    inner, outer = mp.mpf(xi0) / 4, mp.mpf(xi0) / 2
    if a <= inner:
        return mp.mpf(1)
    if a >= outer:
        return mp.mpf(0)
    t = (outer - a) / (outer - inner)
    f = lambda u: mp.e ** (-1 / u) if u > 0 else mp.mpf(0)
    return f(t) / (f(t) + f(1 - t))


def fhat(xi, h, t=0, alpha=mp.mpf(1) / 2, z=mp.expjpi(mp.mpf(1) / 4), xi0=1):
    return (pi * h) ** (-mp.mpf(1) / 4) * chi(xi - xi0, xi0) * mp.exp(
        -(xi - xi0) ** 2 / (2 * h) - t * mp.conj(z) * abs(xi) ** alpha / h ** alpha)


def g_line(x, h, t=0, **kw):
    pts = [mp.mpf(1) / 2, mp.mpf(3) / 4, 1, mp.mpf(5) / 4, mp.mpf(3) / 2]
    return (2 * pi * h) ** (-mp.mpf(1) / 2) * mp.quad(lambda xi: fhat(xi, h, t, **kw) * mp.expj(x * xi / h), pts)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


# Gaussian transform at xi = xi0, h = 1.
phi = lambda x: pi ** (-mp.mpf(1) / 4) * mp.expj(x) * mp.exp(-x * x / 2)
show("F_1(phi)(1)", (2 * pi) ** -0.5 * mp.quad(lambda x: phi(x) * mp.expj(-x), [-mp.inf, 0, mp.inf]))

# Band-limited state and its evolution at x = 0.
show("g0(h=0.1, x=0)", g_line(0, mp.mpf("0.1")))
show("g(h=0.1, t=1, x=0)", g_line(0, mp.mpf("0.1"), t=1))
show("g(h=0.1, t=1, x=0.7)", g_line(mp.mpf("0.7"), mp.mpf("0.1"), t=1))
show("chi(3/8)", chi(mp.mpf(3) / 8))

# Time integral of e^{-2t}.
show("sqrt((1-e^-2)/2)", mp.sqrt((1 - mp.e ** -2) / 2))
show("sum exp(-4 pi^2 k^2)", mp.nsum(lambda k: mp.exp(-4 * pi ** 2 * k ** 2), [-mp.inf, mp.inf]))

# Saddle oracles.
for h, a in [("0.01", 1), ("0.02", 1)]:
    h = mp.mpf(h)
    show(f"int_-{a}^{a} exp(-x^2/2h), h={h}", mp.quad(lambda x: mp.exp(-x * x / (2 * h)), [-a, 0, a]))
zb = mp.expjpi(-mp.mpf(1) / 4)
for h in ["0.1", "0.05", "0.02"]:
    h = mp.mpf(h)
    r = lambda s: -zb * mp.sqrt(s + 1)
    show(f"coherent-phase oracle h={h}", mp.quad(lambda s: mp.exp(-s * s / (2 * h) + r(s) / mp.sqrt(h)), [-0.9, 0, 0.9]))


# Bounded-v eigenvalue from the series at 40 digits.
def bval(xi, rho):
    c, s, n = mp.mpf(1), mp.mpf(1), 0
    while True:
        c = c * (2 * n * xi - rho) / ((n + 1) * (n + 2))
        s += c
        n += 2
        if n > 4 * abs(xi) + 20 and abs(c) < mp.mpf(10) ** -35:
            return s


for xi in [5, 10, 20]:
    seed = 4 / mp.sqrt(pi) * mp.mpf(xi) ** 1.5 * mp.exp(-xi)
    show(f"rho({xi})", mp.findroot(lambda r: bval(xi, r), seed))
xi = 10 * mp.expjpi(-mp.mpf(1) / 4)
show("rho(10 e^{-i pi/4})", mp.findroot(lambda r: bval(xi, r), 4 / mp.sqrt(pi) * xi ** 1.5 * mp.exp(-xi)))


# Product delta(z) = Gamma(1+z+mu) / (Gamma(1+mu) Gamma(1+z)).
def delta(mu, z):
    return mp.gamma(1 + z + mu) / (mp.gamma(1 + mu) * mp.gamma(1 + z))


for mu, z in [(mp.mpf("0.3"), mp.mpf(7)), (mp.mpf("0.3"), mp.mpc(2, 5)), (mp.mpc("0.2", "-0.1"), mp.mpc(40, -300))]:
    show(f"delta(mu={mu}, z={z})", delta(mu, z))
