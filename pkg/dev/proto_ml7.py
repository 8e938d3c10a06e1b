import numpy as np
from scipy.special import rgamma
import scipy.special as ss
import mpmath

def ml_ref(alpha, beta, z, dps_cap=4000):
    ks = np.arange(1, 1000000, 97)
    lt = ks*np.log(abs(z)) - ss.gammaln(alpha*ks + beta)
    dps = int(60 + max(0.0, lt.max())/np.log(10))
    print(f"   [ref dps={dps}]", end=" ")
    if dps > dps_cap: print("SKIP"); return None
    with mpmath.workdps(dps):
        a=mpmath.mpf(alpha); b=mpmath.mpf(beta); zz=mpmath.mpf(z)
        s=mpmath.mpf(0); k=0
        while True:
            t = zz**k/mpmath.gamma(a*k+b)
            s += t
            if k>10 and abs(t) < mpmath.mpf(10)**(-50)*abs(s)+mpmath.mpf(10)**(-dps):
                break
            k+=1
            if k>2000000: raise RuntimeError
        return float(s)

def tanh_sinh_nodes(n,half):
    u=np.linspace(-half,half,n); h=u[1]-u[0]
    y=np.pi*np.sinh(u); x=1.0/(1.0+np.exp(-y))
    return x, h*np.pi*np.cosh(u)*x*(1.0-x)

def gauss_panels(a,b,n_per,n_panels):
    xs,ws=np.polynomial.legendre.leggauss(n_per)
    edges=np.geomspace(a,b,n_panels+1); X=[];W=[]
    for lo,hi in zip(edges[:-1],edges[1:]):
        X.append(0.5*(hi-lo)*xs+0.5*(hi+lo)); W.append(0.5*(hi-lo)*ws)
    return np.concatenate(X),np.concatenate(W)

TS=tanh_sinh_nodes(130,4.3); GL=gauss_panels(1.0,70.0,48,6)
NODES=(np.concatenate([TS[0],GL[0]]),np.concatenate([TS[1],GL[1]]))

def ml_integral(alpha,beta,z):
    s,w=NODES
    sa=s**alpha
    A=np.sin(np.pi*(1.0-beta)); B=np.sin(np.pi*(1.0-beta+alpha))
    num=sa*A - z*B
    den=sa*sa - 2.0*sa*z*np.cos(np.pi*alpha) + z*z
    with np.errstate(over='ignore',under='ignore'):
        K=(1.0/np.pi)*s**(alpha-beta)*np.exp(-s)*num/den
    return float(np.sum(w*K))

def ml_asymp(alpha,beta,z,kcap=500):
    ks=np.arange(1,kcap)
    with np.errstate(over='ignore'):
        terms=-(z**(-ks.astype(float)))*rgamma(beta-alpha*ks)
    mags=np.abs(terms); idx=np.where(mags>0)[0]
    stop=len(terms); last=np.inf
    for i in idx:
        if mags[i]>last: stop=i; break
        last=mags[i]
    return float(np.sum(terms[:stop]))

for (a,b,z) in [(0.4,0.5,-12.0),(0.3,0.5,-11.0),(0.4,0.6,-12.0),(0.45,0.5,-6.0),(0.4,1.3,-12.0)]:
    print(f"a={a} b={b} z={z}:")
    ref=ml_ref(a,b,z)
    vi=ml_integral(a,b,z); va=ml_asymp(a,b,z)
    if ref is not None:
        print(f"   ref={ref:.15e}  int_rel={abs(vi-ref)/abs(ref):.2e}  asym_rel={abs(va-ref)/abs(ref):.2e}")
    else:
        print(f"   int={vi:.15e} asym={va:.15e} diff={abs(vi-va)/abs(va):.2e}")
