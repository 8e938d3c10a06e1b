import numpy as np
from scipy.special import rgamma
import scipy.integrate as si

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
S=np.concatenate([TS[0],GL[0]]); W=np.concatenate([TS[1],GL[1]])

def kernel(s, alpha, beta, z):
    sa=s**alpha
    A=np.sin(np.pi*(1.0-beta)); B=np.sin(np.pi*(1.0-beta+alpha))
    num=sa*A - z*B
    den=sa*sa - 2.0*sa*z*np.cos(np.pi*alpha) + z*z
    with np.errstate(over='ignore',under='ignore'):
        return (1.0/np.pi)*s**(alpha-beta)*np.exp(-s)*num/den

def ml_integral(alpha,beta,z):
    return float(np.sum(W*kernel(S,alpha,beta,z)))

def ml_quad(alpha,beta,z):
    # adaptive scalar route for alpha>0.95 mid-band; split at the kernel peak
    speak = (abs(z)*abs(np.cos(np.pi*alpha)))**(1.0/alpha)
    pts = sorted(set([1e-8, 1.0, max(0.5, 0.7*speak), speak, 1.5*speak, 70.0]))
    total = 0.0
    for lo,hi in zip(pts[:-1],pts[1:]):
        v,_ = si.quad(kernel, lo, hi, args=(alpha,beta,z), limit=200, epsabs=1e-15, epsrel=1e-13)
        total += v
    return total

def ml_asymp(alpha,beta,z,kcap=500):
    ks=np.arange(1,kcap)
    with np.errstate(over='ignore', invalid='ignore'):
        terms=-(z**(-ks.astype(float)))*rgamma(beta-alpha*ks)
    terms=np.nan_to_num(terms, nan=0.0)
    mags=np.abs(terms); idx=np.where(mags>0)[0]
    stop=len(terms); last=np.inf
    for i in idx:
        if mags[i]>last: stop=i; break
        last=mags[i]
    return float(np.sum(terms[:stop]))

def ml_reduce(alpha,beta,z,f,margin=0.35):
    if beta < 1.0+alpha-margin: return f(alpha,beta,z)
    return (ml_reduce(alpha,beta-alpha,z,f,margin)-rgamma(beta-alpha))/z

rng=np.random.default_rng(1)
# 1. integral vs asym for alpha<=0.95, |z| in [30, 1e5] (asym reliable there?)
print("— integral vs asymptotic, alpha<=0.95, far field —")
worst=0; wc=None
for _ in range(300):
    a=rng.uniform(0.3,0.95); b=rng.uniform(0.4,3.2); z=-10**rng.uniform(np.log10(30)/np.log10(10),5)
    z=-10**rng.uniform(1.5,5)
    vi=ml_reduce(a,b,z,ml_integral); va=ml_reduce(a,b,z,ml_asymp) if False else None
    va=ml_asymp(a,b,z)
    r=abs(vi-va)/max(abs(va),1e-300)
    if r>worst: worst, wc = r, (a,b,z)
print("worst:", worst, wc)

# 2. alpha>0.95 mid-band: quad vs asym at threshold
print("— alpha>0.95: quad(mid) vs asym at |z|=30^alpha..100 —")
worst=0; wc=None
for _ in range(40):
    a=rng.uniform(0.951,0.999); b=rng.uniform(0.4,3.2)
    z=-10**rng.uniform(np.log10(30.0**a), 2)
    vq=ml_reduce(a,b,z,ml_quad); va=ml_asymp(a,b,z)
    r=abs(vq-va)/abs(va)
    if r>worst: worst, wc=r,(a,b,z)
print("worst:", worst, wc)

# 3. alpha>0.95 mid-band below threshold: quad vs integral-grid (which may underresolve peak)
print("— alpha>0.95, 1<=|z|<30^alpha: fixed-grid integral vs adaptive quad —")
worst=0; wc=None
for _ in range(40):
    a=rng.uniform(0.951,0.999); b=rng.uniform(0.4,3.2)
    z=-10**rng.uniform(0.0, np.log10(30.0**a))
    vq=ml_reduce(a,b,z,ml_quad); vi=ml_reduce(a,b,z,ml_integral)
    r=abs(vq-vi)/abs(vq)
    if r>worst: worst, wc=r,(a,b,z)
print("worst fixed-grid error:", worst, wc)

# 4. Taylor-integral continuity at |z|=1
print("— continuity across |z|=1 —")
def ml_taylor(alpha,beta,z,nmax=250):
    from scipy.special import gamma as G
    s=0.0
    for l in range(nmax):
        t=z**l*rgamma(alpha*l+beta)
        s+=t
        if l>4 and abs(t)<1e-17*abs(s): break
    return s
worst=0
for _ in range(200):
    a=rng.uniform(0.15,0.95); b=rng.uniform(0.4,3.2)
    for z in (-0.999999, -1.000001):
        vt=ml_taylor(a,b,z); vi=ml_reduce(a,b,z,ml_integral)
        r=abs(vt-vi)/abs(vt)
        worst=max(worst,r)
print("worst taylor-vs-integral near |z|=1:", worst)
