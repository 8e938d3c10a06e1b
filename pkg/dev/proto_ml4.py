import numpy as np
from scipy.special import rgamma
import scipy.special as ss
import mpmath

def ml_ref(alpha, beta, z, dps_cap=2500):
    ks = np.arange(1, 300000, 37)
    lt = ks*np.log(max(abs(z),1e-300)) - ss.gammaln(alpha*ks + beta)
    dps = int(60 + max(0.0, lt.max())/np.log(10))
    if dps > dps_cap: return None
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha); b = mpmath.mpf(beta); zz = mpmath.mpf(z)
        s = mpmath.mpf(0); k = 0
        while True:
            t = zz**k / mpmath.gamma(a*k + b)
            s += t
            if k > 10 and abs(t) < mpmath.mpf(10)**(-50)*abs(s) + mpmath.mpf(10)**(-dps):
                break
            k += 1
            if k > 800000: raise RuntimeError("no conv")
        return float(s)

def tanh_sinh_nodes(n=130, half=4.3):
    u = np.linspace(-half, half, n)
    h = u[1]-u[0]
    y = np.pi*np.sinh(u)
    x = 1.0/(1.0+np.exp(-y))
    w = h*np.pi*np.cosh(u)*x*(1.0-x)
    return x, w

def gauss_panels(a,b,n_per=48,n_panels=6):
    xs, ws = np.polynomial.legendre.leggauss(n_per)
    edges = np.geomspace(a,b,n_panels+1)
    X=[];W=[]
    for lo,hi in zip(edges[:-1],edges[1:]):
        X.append(0.5*(hi-lo)*xs+0.5*(hi+lo)); W.append(0.5*(hi-lo)*ws)
    return np.concatenate(X), np.concatenate(W)

TS_X,TS_W = tanh_sinh_nodes()
GL_X,GL_W = gauss_panels(1.0,70.0)
S_NODES = np.concatenate([TS_X,GL_X]); S_WEIGHTS = np.concatenate([TS_W,GL_W])

def ml_integral(alpha,beta,z):
    s=S_NODES; w=S_WEIGHTS
    sa = s**alpha
    A = np.sin(np.pi*(1.0-beta)); B = np.sin(np.pi*(1.0-beta+alpha))
    num = sa*A - z*B
    den = sa*sa - 2.0*sa*z*np.cos(np.pi*alpha) + z*z
    with np.errstate(over='ignore', under='ignore'):
        K = (1.0/np.pi)*s**(alpha-beta)*np.exp(-s)*num/den
    return float(np.sum(w*K))

def ml_reduce(alpha,beta,z,f,margin=0.35):
    if beta < 1.0 + alpha - margin:
        return f(alpha,beta,z)
    return (ml_reduce(alpha,beta-alpha,z,f,margin) - rgamma(beta-alpha))/z

def ml_asymp(alpha,beta,z,kcap=180):
    ks = np.arange(1,kcap)
    terms = -(z**(-ks.astype(float)))*rgamma(beta-alpha*ks)
    mags = np.abs(terms)
    idx = np.where(mags>0)[0]
    stop = len(terms); last=np.inf
    for i in idx:
        if mags[i] > last: stop=i; break
        last = mags[i]
    est = mags[idx[idx>=stop][0]] if np.any(idx>=stop) else mags[idx[-1]]
    return float(np.sum(terms[:stop])), float(est)

rng = np.random.default_rng(7)
cases = [(0.5,1,-1.0),(0.8,1,-5.0),(0.9,1,-10.0),(0.9,1,-20.0),(0.3,1,-2.0),
         (0.5,2.0,-10.0),(0.46,1.92,-3.0),(0.99,1,-8.0),(0.5,1.49,-1.0),
         (0.35,1.7,-1.0),(0.6,1,-1.0),(0.6,2.2,-3.3),(0.25,1,-1.0),
         (0.8,2.6,-7.0),(0.9,1,-21.0),(0.7,1,-3.0),(0.45,1.9,-2.0),
         (0.62,2.24,-1.0),(0.99,2.98,-1.0),(0.2,1.4,-9.9),(0.15,1,-5.0),
         (0.99,1,-20.0),(0.95,2.9,-15.0),(0.33,1.66,-8.25)]
worst=0; worst_case=None
for (a,b,z) in cases:
    ref = ml_ref(a,b,z)
    vi = ml_reduce(a,b,z,ml_integral)
    va,est = ml_asymp(a,b,z)
    thr = max(10.0, 30.0**a)
    use = va if abs(z)>thr else vi
    if ref is None:
        print(f"{a:5} {b:5} {z:9}  ref-skip  int vs asym: {abs(vi-va)/abs(va):.2e}")
        continue
    r = abs(use-ref)/abs(ref)
    if r>worst: worst=r; worst_case=(a,b,z)
    print(f"{a:5} {b:5} {z:9}  {ref:23.16e}  used={'A' if abs(z)>thr else 'I'}  rel={r:9.2e}")
# random sweep in the integral band
print("--- random sweep (integral regime) ---")
worst2=0; wc=None
for _ in range(60):
    a = rng.uniform(0.15,0.995); b = rng.uniform(0.4,3.0)
    thr = max(10.0,30.0**a)
    z = -rng.uniform(1.0,thr)
    ref = ml_ref(a,b,z)
    if ref is None: continue
    vi = ml_reduce(a,b,z,ml_integral)
    r = abs(vi-ref)/abs(ref)
    if r>worst2: worst2=r; wc=(a,b,z)
print("worst named-case:", worst, worst_case)
print("worst random integral-regime:", worst2, wc)
