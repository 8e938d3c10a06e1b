import numpy as np
from scipy.special import rgamma

def tanh_sinh_nodes(n, half):
    u = np.linspace(-half, half, n)
    h = u[1]-u[0]
    y = np.pi*np.sinh(u)
    x = 1.0/(1.0+np.exp(-y))
    w = h*np.pi*np.cosh(u)*x*(1.0-x)
    return x, w

def gauss_panels(a,b,n_per,n_panels):
    xs, ws = np.polynomial.legendre.leggauss(n_per)
    edges = np.geomspace(a,b,n_panels+1)
    X=[];W=[]
    for lo,hi in zip(edges[:-1],edges[1:]):
        X.append(0.5*(hi-lo)*xs+0.5*(hi+lo)); W.append(0.5*(hi-lo)*ws)
    return np.concatenate(X), np.concatenate(W)

def ml_integral(alpha,beta,z, nodes):
    s,w = nodes
    sa = s**alpha
    A = np.sin(np.pi*(1.0-beta)); B = np.sin(np.pi*(1.0-beta+alpha))
    num = sa*A - z*B
    den = sa*sa - 2.0*sa*z*np.cos(np.pi*alpha) + z*z
    with np.errstate(over='ignore', under='ignore'):
        K = (1.0/np.pi)*s**(alpha-beta)*np.exp(-s)*num/den
    return float(np.sum(w*K))

def ml_asymp(alpha,beta,z,kcap=500):
    ks = np.arange(1,kcap)
    with np.errstate(over='ignore'):
        terms = -(z**(-ks.astype(float)))*rgamma(beta-alpha*ks)
    mags = np.abs(terms)
    idx = np.where(mags>0)[0]
    stop = len(terms); last=np.inf
    for i in idx:
        if mags[i] > last: stop=i; break
        last = mags[i]
    return float(np.sum(terms[:stop]))

for (a,b,z) in [(0.2,0.8,-9.9),(0.2,0.8,-5.0),(0.3,1.0,-8.0),(0.15,0.9,-9.0),(0.2,0.6,-9.9)]:
    va = ml_asymp(a,b,z)
    for (nts,half,ngl,npan,smax) in [(130,4.3,48,6,70),(260,4.3,48,6,70),(130,5.0,48,6,70),
                                      (130,4.3,64,12,70),(130,4.3,48,6,120),(400,5.0,64,16,120)]:
        TS = tanh_sinh_nodes(nts,half); GL = gauss_panels(1.0,smax,ngl,npan)
        nodes = (np.concatenate([TS[0],GL[0]]), np.concatenate([TS[1],GL[1]]))
        vi = ml_integral(a,b,z,nodes)
        print(f"a={a} b={b} z={z} nts={nts} half={half} ngl={ngl}x{npan} smax={smax}: rel={abs(vi-va)/abs(va):.2e}")
    print()
