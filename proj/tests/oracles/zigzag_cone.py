"""Phase energies of the zigzag cone from the origin to the unit circle.

Slices are c1(t) * rho(t, v) with |c1| = |c1'| = 1, so the normal-energy
integrand is rho_v^2 rho^2 / sqrt(rho^2 + rho_t^2). Each of the 2k sawtooth
cells contributes the same amount, so one cell is integrated adaptively.
"""
import numpy as np
from scipy import integrate


def phase_energies(k):
    eps = np.pi / k

    def phase1(t, v):
        z = t
        rho, rv, rt = 2 * v * z / eps, 2 * z / eps, 2 * v / eps
        return rv**2 * rho**2 / np.sqrt(rho**2 + rt**2)

    def phase2(t, v):
        z = eps - t
        rho, rv, rt = 1 - 2 * (1 - v) * z / eps, 2 * z / eps, 2 * (1 - v) / eps
        return rv**2 * rho**2 / np.sqrt(rho**2 + rt**2)

    opts = dict(epsabs=1e-12, epsrel=1e-10)
    e1, _ = integrate.dblquad(lambda t, v: phase1(t, v), 0.0, 0.5, 0.0, eps, **opts)
    e2, _ = integrate.dblquad(lambda t, v: phase2(t, v), 0.5, 1.0, 0.0, eps, **opts)
    closed1 = 2 * k / eps**3 * integrate.quad(lambda t: t**4 / np.sqrt(1 + t * t), 0, eps)[0]
    return 2 * k * e1, 2 * k * e2, closed1


if __name__ == "__main__":
    for k in (4, 8, 16, 32, 64):
        e1, e2, c1 = phase_energies(k)
        print(f"k={k:3d} phase1={e1:.10f} (closed {c1:.10f}, bound {0.8 * np.pi**2 / k:.6f}) "
              f"phase2={e2:.10f} total={e1 + e2:.10f}")
