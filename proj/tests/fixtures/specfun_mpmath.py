# Regenerates specfun_mpmath.txt: "k Re(z) Im(z) Re(f) Im(f)", k = E1, Ei, Ci, Si, Shi.
import mpmath as mp, random
mp.mp.dps=30
random.seed(1)
pts=[]
for r in [0.1,1,2,2.5,5,7.9,8.1,12,20,39,41,60,100]:
    for a in [0,0.3,0.7,1.2,1.5707963267948966,1.9,2.3,2.4,2.6,3.0,3.1,3.14159,3.141592653589793]:
        for s in [1,-1]:
            pts.append(mp.mpc(r*mp.cos(a), s*r*mp.sin(a)))
for a in [1/0.9,2.0,1/0.3]:
    for tau in [0.01,0.5,3,30,299.7,600,3000,20000]:
        for z in [a*(1-1j*tau),a*(1+1j*tau),a*(1j*tau-1),-a*(1+1j*tau),(tau-1j*(1+1/0.2))/0.5,(tau+1j*3)/0.7]:
            pts.append(mp.mpc(z))
with open('specfun_mpmath.txt','w') as f:
    for z in pts:
        if abs(z.imag)<1e-20: z=mp.mpc(z.real,0)
        for k,fn in enumerate((mp.e1,mp.ei,mp.ci,mp.si,mp.shi)):
            v=fn(z)
            if abs(v)>1e250: continue
            f.write(' '.join([str(k)]+[mp.nstr(u,20) for u in (z.real,z.imag,mp.re(v),mp.im(v))])+'\n')
