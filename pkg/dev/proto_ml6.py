import numpy as np
from scipy.special import rgamma

def ml_hankel_parabola(alpha, beta, z, N=400, mu=30.0):
    # E = (1/2 pi i) int e^zeta zeta^{alpha-beta} / (zeta^alpha - z) dzeta
    # parabola: zeta(v) = mu (1 + i v)^2, v in (-inf, inf); dzeta = 2 i mu (1+iv) dv
    vmax = np.sqrt(1.0 + 60.0/mu)
    v = np.linspace(-vmax, vmax, 2*N+1)
    h = v[1]-v[0]
    zeta = mu*(1.0+1j*v)**2
    dzeta = 2j*mu*(1.0+1j*v)
    f = np.exp(zeta)*zeta**(alpha-beta)/(zeta**alpha - z)*dzeta
    return float(np.real(np.sum(f)*h/(2j*np.pi)))

def tanh_sinh_nodes(n,half):
    u = np.linspace(-half,half,n); h=u[1]-u[0]
    y = np.pi*np.sinh(u); x = 1.0/(1.0+np.exp(-y))
    w = h*np.pi*np.cosh(u)*x*(1.0-x)
    return x,w

def gauss_panels(a,b,n_per,n_panels):
    xs,ws = np.polynomial.legendre.leggauss(n_per)
    edges = np.geomspace(a,b,n_panels+1); X=[];W=[]
    for lo,hi in zip(edges[:-1],edges[1:]):
        X.append(0.5*(hi-lo)*xs+0.5*(hi+lo)); W.append(0.5*(hi-lo)*ws)
    return np.concatenate(X),np.concatenate(W)

TS=tanh_sinh_nodes(130,4.3); GL=gauss_panels(1.0,70.0,48,6)
NODES=(np.concatenate([TS[0],GL[0]]),np.concatenate([TS[1],GL[1]]))

def ml_integral(alpha,beta,z):
    s,w = NODES
    sa = s**alpha
    A=np.sin(np.pi*(1.0-beta)); B=np.sin(np.pi*(1.0-beta+alpha))
    num = sa*A - z*B
    den = sa*sa - 2.0*sa*z*np.cos(np.pi*alpha) + z*z
    with np.errstate(over='ignore',under='ignore'):
        K = (1.0/np.pi)*s**(alpha-beta)*np.exp(-s)*num/den
    return float(np.sum(w*K))

def ml_asymp(alpha,beta,z,kcap=500):
    ks = np.arange(1,kcap)
    with np.errstate(over='ignore'):
        terms = -(z**(-ks.astype(float)))*rgamma(beta-alpha*ks)
    mags=np.abs(terms); idx=np.where(mags>0)[0]
    stop=len(terms); last=np.inf
    for i in idx:
        if mags[i]>last: stop=i; break
        last=mags[i]
    return float(np.sum(terms[:stop]))

for (a,b,z) in [(0.2,0.6,-9.9),(0.15,0.9,-9.0),(0.2,0.8,-9.9),(0.2,1.4,-9.9),(0.3,0.5,-7.0),(0.4,0.5,-3.0),(0.25,0.7,-20.0)]:
    vi=ml_integral(a,b,z); va=ml_asymp(a,b,z); vh=ml_hankel_parabola(a,b,z)
    print(f"a={a} b={b} z={z}:  int={vi:.12e}  asym={va:.12e}  hankel={vh:.12e}")
    print(f"   int-vs-hankel={abs(vi-vh)/abs(vh):.2e}  asym-vs-hankel={abs(va-vh)/abs(vh):.2e}")
