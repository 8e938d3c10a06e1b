"""Prototype: Mittag-Leffler on the negative axis via Taylor / spectral integral / asymptotics."""
import numpy as np
from scipy.special import gamma as sgamma
import mpmath

mpmath.mp.dps = 60

def ml_ref(alpha, beta, z):
    # mpmath high-precision Taylor (entire function, safe for |z| <~ 200 at 60 dps)
    with mpmath.workdps(120):
        s = mpmath.mpf(0)
        term_index = 0
        zz = mpmath.mpf(z)
        while True:
            t = zz**term_index / mpmath.gamma(alpha*term_index + beta)
            s += t
            if term_index > 20 and abs(t) < mpmath.mpf(10)**(-70) * (abs(s)+1):
                break
            term_index += 1
            if term_index > 3000: break
        return float(s)

def ml_taylor(alpha, beta, z, tol=1e-16, max_terms=200):
    s = 0.0; term = 1.0/sgamma(beta)
    for l in range(max_terms):
        s += term if l == 0 else 0.0
        if l > 0: pass
    # simple version
    s = 0.0
    for l in range(max_terms):
        t = z**l / sgamma(alpha*l + beta)
        s += t
        if abs(t) < tol*abs(s) and l > 3:
            break
    return s

def ml_integral(alpha, beta, z, n=2000):
    # valid for 0<alpha<1, beta < 1+alpha, z<0. Kernel in s = r^{1/alpha}.
    # E = int_0^inf (1/pi) s^{1-beta} e^{-s} [ s^a sin(pi(1-beta)) - z sin(pi(1-beta+alpha)) ]
    #        * s^{alpha-1} / (s^{2a} - 2 s^a z cos(pi a) + z^2) ds
    from numpy.polynomial.laguerre import laggauss
    x, w = laggauss(n if n<=300 else 300)
    s = x
    sa = s**alpha
    num = sa*np.sin(np.pi*(1-beta)) - z*np.sin(np.pi*(1-beta+alpha))
    den = sa*sa - 2*sa*z*np.cos(np.pi*alpha) + z*z
    integ = (1/np.pi) * s**(1-beta) * num * s**(alpha-1) / den
    return float(np.sum(w*integ))

def ml_asymp(alpha, beta, z, kmax=60):
    # E ~ -sum_{k>=1} z^-k / Gamma(beta - alpha k), optimal truncation
    s = 0.0
    best = None
    prev = np.inf
    from scipy.special import rgamma
    for k in range(1, kmax):
        t = -(z**(-k)) * rgamma(beta - alpha*k)
        if abs(t) > prev:
            break
        s += t; prev = abs(t)
    return s, prev

for (a,b,z) in [(0.5,1,-1.0),(0.8,1,-5.0),(0.9,1,-10.0),(0.9,1,-20.0),(0.9,1,-30.0),
                (0.3,1,-2.0),(0.5,2.0,-10.0),(0.46,1.92,-3.0),(0.9,2.8,-50.0),(0.99,1,-8.0),
                (0.5, 1.49, -1.0), (0.7, 2.4, -100.0)]:
    ref = ml_ref(a,b,z)
    # integral with beta reduction: E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z  -> upward we need downward:
    # E_{a, b}(z) with b >= 1+a - 0.05: use E_{a,b}(z) = (E_{a,b-a}(z) - 1/G(b-a))/z
    def ml_int_rec(a,b,z):
        if b < 1 + a - 0.05:
            return ml_integral(a,b,z)
        return (ml_int_rec(a, b-a, z) - 1.0/sgamma(b-a)) / z
    vi = ml_int_rec(a,b,z)
    va, lastterm = ml_asymp(a,b,z)
    print(f"a={a} b={b} z={z}: ref={ref:.15e} int_rel={abs(vi-ref)/abs(ref):.2e} "
          f"asym_rel={abs(va-ref)/abs(ref):.2e} (last {lastterm:.1e})")
