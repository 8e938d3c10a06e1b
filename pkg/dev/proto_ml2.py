"""Prototype 2: tanh-sinh + Gauss-Legendre quadrature of the wedge-collapsed
spectral representation of E_{alpha,beta}(z) for z<0, 0<alpha<1, beta<1+alpha."""
import numpy as np
from scipy.special import gamma as sgamma, rgamma
import mpmath

def ml_ref(alpha, beta, z):
    with mpmath.workdps(150):
        a = mpmath.mpf(alpha); b = mpmath.mpf(beta); zz = mpmath.mpf(z)
        s = mpmath.mpf(0)
        k = 0
        while True:
            t = zz**k / mpmath.gamma(a*k + b)
            s += t
            if k > 10 and abs(t) < mpmath.mpf(10)**(-60) * (abs(s) + mpmath.mpf(10)**(-60)):
                break
            k += 1
            if k > 5000:
                raise RuntimeError("no conv")
        return float(s)

# ---- fixed quadrature rules ----
def tanh_sinh_nodes(n=60, half=3.1):
    # nodes for integral over (0,1): x = 1/2 + 1/2*tanh(pi/2 sinh(u)), u in (-half, half)
    u = np.linspace(-half, half, n)
    h = u[1] - u[0]
    sh = np.sinh(u)
    x = 0.5 * (1.0 + np.tanh(0.5 * np.pi * sh))
    w = h * 0.25 * np.pi * np.cosh(u) / np.cosh(0.5 * np.pi * sh) ** 2
    return x, w

def gauss_panels(a, b, n_per=40, n_panels=4):
    xs, ws = np.polynomial.legendre.leggauss(n_per)
    # geometric panels between a and b
    edges = np.geomspace(a, b, n_panels + 1)
    X, W = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        X.append(0.5*(hi-lo)*xs + 0.5*(hi+lo))
        W.append(0.5*(hi-lo)*ws)
    return np.concatenate(X), np.concatenate(W)

TS_X, TS_W = tanh_sinh_nodes(80, 3.2)
GL_X, GL_W = gauss_panels(1.0, 60.0, 48, 5)
S_NODES = np.concatenate([TS_X, GL_X])
S_WEIGHTS = np.concatenate([TS_W, GL_W])

def ml_integral(alpha, beta, z):
    # E_{a,b}(z) = int_0^inf K(s) ds,  z<0, beta < 1+alpha
    # K(s) = (1/pi) s^{alpha-beta} e^{-s} [ s^alpha sin(pi(1-beta)) - z sin(pi(1-beta+alpha)) ]
    #        / (s^{2 alpha} - 2 s^alpha z cos(pi alpha) + z^2)
    s = S_NODES; w = S_WEIGHTS
    sa = s ** alpha
    A = np.sin(np.pi * (1.0 - beta))
    B = np.sin(np.pi * (1.0 - beta + alpha))
    num = sa * A - z * B
    den = sa * sa - 2.0 * sa * z * np.cos(np.pi * alpha) + z * z
    K = (1.0/np.pi) * s**(alpha-beta) * np.exp(-s) * num / den
    return float(np.sum(w * K))

def ml_reduce(alpha, beta, z, f):
    if beta < 1.0 + alpha - 1e-8:
        return f(alpha, beta, z)
    return (ml_reduce(alpha, beta - alpha, z, f) - rgamma(beta - alpha)) / z

def ml_asymp(alpha, beta, z, rtol=1e-14):
    s = 0.0
    prev = np.inf
    zi = 1.0/z
    p = 1.0
    for k in range(1, 200):
        p *= zi
        t = -p * rgamma(beta - alpha*k)
        if abs(t) > prev:
            return s, prev  # optimally truncated; prev ~ error bound
        s += t
        prev = abs(t)
    return s, prev

cases = [(0.5,1,-1.0),(0.8,1,-5.0),(0.9,1,-10.0),(0.9,1,-20.0),(0.9,1,-30.0),
         (0.3,1,-2.0),(0.5,2.0,-10.0),(0.46,1.92,-3.0),(0.9,2.8,-50.0),(0.99,1,-8.0),
         (0.5,1.49,-1.0),(0.7,2.4,-100.0),(0.35,1.7,-1.0),(0.99,2.98,-25.0),
         (0.6,1,-1.0),(0.6,2.2,-3.3),(0.05,1,-2.0),(0.95,1,-9999.0),(0.2,1.2,-44.4)]
print(f"{'a':>5} {'b':>5} {'z':>9}  {'ref':>23}  {'int rel':>9}  {'asym rel':>9} {'asym est':>9}")
for (a,b,z) in cases:
    ref = ml_ref(a,b,z)
    vi = ml_reduce(a,b,z, ml_integral)
    va, est = ml_asymp(a,b,z)
    ri = abs(vi-ref)/abs(ref)
    ra = abs(va-ref)/abs(ref)
    print(f"{a:5} {b:5} {z:9}  {ref:23.16e}  {ri:9.2e}  {ra:9.2e} {est/abs(ref) if ref else 0:9.2e}")
