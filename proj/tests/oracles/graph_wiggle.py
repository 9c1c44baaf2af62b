"""E_{2,1} of the graph homotopy (u, v + gamma(v) sin(2 pi j u)).

W = (1, 2 pi j gamma cos), V = (0, 1 + gamma' sin), so the integrand
|pi_{W perp} V|^2 |W| reduces to (1 + gamma' sin)^2 / |W|. The u-integral
covers one wiggle period after substituting x = j u.
"""
import numpy as np
from scipy import integrate


def energy(j):
    if j == 0:
        return 1.0

    def inner(v):
        g, gp = (v, 1.0) if v <= 0.5 else (1.0 - v, -1.0)
        f = lambda x: (1 + gp * np.sin(2 * np.pi * x)) ** 2 / np.sqrt(1 + (2 * np.pi * j * g * np.cos(2 * np.pi * x)) ** 2)
        return integrate.quad(f, 0.0, 1.0, limit=200, epsabs=1e-12)[0]

    a = integrate.quad(inner, 0.0, 0.5, limit=400, epsabs=1e-11, points=[0.0])[0]
    b = integrate.quad(inner, 0.5, 1.0, limit=400, epsabs=1e-11, points=[1.0])[0]
    return a + b


def slice_length(j, v, n=20001):
    g = v if v <= 0.5 else 1.0 - v
    u = np.linspace(0.0, 1.0, n)
    return integrate.trapezoid(np.sqrt(1 + (2 * np.pi * j * g * np.cos(2 * np.pi * j * u)) ** 2), u)


if __name__ == "__main__":
    for j in (0, 1, 2, 4, 8, 16, 64, 128, 256):
        print(f"j={j:3d} E21={energy(j):.8f}")
    print(f"len(j=1, v=1/2) = {slice_length(1, 0.5):.8f}")
