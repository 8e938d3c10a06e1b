import numpy as np
from scipy.special import rgamma
import scipy.integrate as si
import scipy.special as ss
import mpmath

def ml_ref(alpha,beta,z):
    ks=np.arange(1,100000,11)
    lt=ks*np.log(abs(z))-ss.gammaln(alpha*ks+beta)
    dps=int(60+max(0.0,lt.max())/np.log(10))
    with mpmath.workdps(dps):
        a=mpmath.mpf(alpha); b=mpmath.mpf(beta); zz=mpmath.mpf(z)
        s=mpmath.mpf(0);k=0
        while True:
            t=zz**k/mpmath.gamma(a*k+b)
            s+=t
            if k>10 and abs(t)<mpmath.mpf(10)**(-50)*abs(s)+mpmath.mpf(10)**(-dps): break
            k+=1
        return float(s)

def kernel(s,alpha,beta,z):
    sa=s**alpha
    A=np.sin(np.pi*(1.0-beta)); B=np.sin(np.pi*(1.0-beta+alpha))
    num=sa*A-z*B
    den=sa*sa-2.0*sa*z*np.cos(np.pi*alpha)+z*z
    with np.errstate(over='ignore',under='ignore'):
        return (1.0/np.pi)*s**(alpha-beta)*np.exp(-s)*num/den

def ml_quad2(alpha,beta,z):
    # peak-aware split + generous upper bound
    cos_a = np.cos(np.pi*alpha)
    pts=[0.0, 1.0]
    if cos_a < 0.0:   # peak exists on the positive axis only if z*cos>0 i.e. cos<0
        speak=(abs(z)*(-cos_a))**(1.0/alpha)
        w=max(abs(z)*np.sin(np.pi*alpha)/alpha/max(speak**(alpha-1.0),1e-12),1e-3)
        for c in (speak-8*w, speak-2*w, speak, speak+2*w, speak+8*w):
            if c>1.0: pts.append(c)
    hi=max(80.0, (pts[-1] if pts else 0)+60.0)
    pts=[p for p in pts if p<hi]+[hi]
    pts=sorted(set(pts))
    total=0.0
    for lo,hip in zip(pts[:-1],pts[1:]):
        v,_=si.quad(kernel,lo,hip,args=(alpha,beta,z),limit=300,epsabs=1e-16,epsrel=1e-14)
        total+=v
    return total

def ml_asymp(alpha,beta,z,kcap=500):
    ks=np.arange(1,kcap)
    with np.errstate(over='ignore',invalid='ignore'):
        terms=-(z**(-ks.astype(float)))*rgamma(beta-alpha*ks)
    terms=np.nan_to_num(terms,nan=0.0)
    mags=np.abs(terms);idx=np.where(mags>0)[0]
    stop=len(terms);last=np.inf
    for i in idx:
        if mags[i]>last: stop=i;break
        last=mags[i]
    return float(np.sum(terms[:stop]))

import sys
a,b,z = 0.9871267009625009, 1.4558085273078398, -85.56133253769808
ref=ml_ref(a,b,z)
print("ref  =",repr(ref))
print("asym =",repr(ml_asymp(a,b,z)), "rel", abs(ml_asymp(a,b,z)-ref)/abs(ref))
print("quad2=",repr(ml_quad2(a,b,z)), "rel", abs(ml_quad2(a,b,z)-ref)/abs(ref))

# revalidate band alpha>0.95 |z|>=30^alpha with quad2
rng=np.random.default_rng(3)
worst=0;wc=None
for _ in range(25):
    aa=rng.uniform(0.951,0.999); bb=rng.uniform(0.4,3.2)
    zz=-10**rng.uniform(np.log10(30.0**aa),2)
    va=ml_asymp(aa,bb,zz); vq=ml_quad2(aa,bb,zz)
    r=abs(va-vq)/abs(va)
    if r>worst: worst,wc=r,(aa,bb,zz)
print("alpha>0.95 far: worst asym-vs-quad2:",worst,wc)
worst=0;wc=None
for _ in range(25):
    aa=rng.uniform(0.951,0.999); bb=rng.uniform(0.4,3.2)
    zz=-10**rng.uniform(0.0,np.log10(30.0**aa))
    vq=ml_quad2(aa,bb,zz)
    rr=ml_ref(aa,bb,zz)
    r=abs(vq-rr)/abs(rr)
    if r>worst: worst,wc=r,(aa,bb,zz)
print("alpha>0.95 mid: worst quad2-vs-ref:",worst,wc)

def ml_reduce(alpha,beta,z,f,margin=0.35):
    if beta < 1.0+alpha-margin: return f(alpha,beta,z)
    return (ml_reduce(alpha,beta-alpha,z,f,margin)-rgamma(beta-alpha))/z

print("=== with reduction ===")
worst=0;wc=None
for _ in range(25):
    aa=rng.uniform(0.951,0.999); bb=rng.uniform(0.4,3.2)
    zz=-10**rng.uniform(np.log10(30.0**aa),2)
    va=ml_asymp(aa,bb,zz); vq=ml_reduce(aa,bb,zz,ml_quad2)
    r=abs(va-vq)/abs(va)
    if r>worst: worst,wc=r,(aa,bb,zz)
print("alpha>0.95 far: worst asym-vs-quad2:",worst,wc)
worst=0;wc=None
for _ in range(25):
    aa=rng.uniform(0.951,0.999); bb=rng.uniform(0.4,3.2)
    zz=-10**rng.uniform(0.0,np.log10(30.0**aa))
    vq=ml_reduce(aa,bb,zz,ml_quad2); rr=ml_ref(aa,bb,zz)
    r=abs(vq-rr)/abs(rr)
    if r>worst: worst,wc=r,(aa,bb,zz)
print("alpha>0.95 mid: worst quad2-vs-ref:",worst,wc)
