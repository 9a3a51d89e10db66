# Independent high-precision oracle for the 2-D polar: normal-shock root from the
# mass-flux identity and the detachment angle by golden search on the deflection.
# Values printed here are frozen in tests/test_shock_polar.cpp.
from mpmath import mp, mpf, findroot, atan, sqrt, diff
mp.dps=30
def rho(g,q2): return (1-(g-1)/2*q2)**(1/(g-1))
def v2_of(g,q0,v1):
    rm=rho(g,q0**2)
    f=lambda v2: rm*(q0**2-q0*v1)-rho(g,v1**2+v2**2)*(q0*v1-v1**2-v2**2)
    # bisection
    lo,hi=mpf(0),sqrt(2/(g-1)-v1**2)*0.999
    # find sign change lo..hi, choose root with v2 >0 smallest nontrivial
    import mpmath
    N=2000
    prev=f(mpf('1e-20'))
    a=mpf('1e-20')
    for k in range(1,N+1):
        b=hi*k/N
        fb=f(b)
        if prev*fb<0: return mpmath.findroot(f,(a,b),solver='bisect' if False else 'anderson')
        a,prev=b,fb
    return None
for g in [mpf('1.2'),mpf('1.4'),mpf(5)/3]:
  for q0 in [mpf('1.1'),mpf('1.3'),mpf('1.6')]:
    rm=rho(g,q0**2)
    v1n=findroot(lambda v: rho(g,v*v)*v-rm*q0, mpf('0.3') if q0>1.5 else mpf('0.6'))
    if g>1.6 and q0>1.5: v1n=findroot(lambda v: rho(g,v*v)*v-rm*q0, mpf('0.09'))
    th=lambda v1: atan(v2_of(g,q0,v1)/v1)
    # golden search
    a,b=v1n*1.0001,q0*0.9999
    import mpmath
    for it in range(80):
        c=b-(b-a)*0.618033988749895; d=a+(b-a)*0.618033988749895
        if th(c)>th(d): b=d
        else: a=c
    print(float(g),float(q0),mpmath.nstr(v1n,17),mpmath.nstr(th((a+b)/2),17))
