#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
"""Independent reference values for the C++ unit tests.

Everything here is derived symbolically (sympy) or with high-precision
numerics (mpmath) straight from the mathematical definitions, without using
any code from src/.  The printed values are frozen into tests/ as oracle
constants; re-run this script to regenerate them.

Conventions (matching the library):
  * cubic B-spline phi on [0,1]:  2/3 - 4t^2 + 4t^3 on [0,1/2],
    (4/3)(1-t)^3 on [1/2,1]
  * inverse-distance kernel profile rho(t) = 3/(2 pi t) on (0,1]
  * scaled kernel rho_delta(r) = delta^-(d+2) rho(r/delta)
  * plane-strain material: lambda = E nu/((1+nu)(1-2 nu)), mu = E/(2(1+nu))
  * manufactured displacement u(x) = (x1^2(1-x1)^2 + x2^2(1-x2)^2, 0)
"""

import itertools

import mpmath as mp
import sympy as sp

mp.mp.dps = 25

x, t, w, r, u, d1, d2 = sp.symbols("x t w r u d1 d2", real=True)
x1, x2, s1, s2, phi_a, delta, h = sp.symbols(
    "x1 x2 s1 s2 phi_a delta h", real=True, positive=False
)


def section(title):
    print()
    print("=" * 72)
    print(title)
    print("=" * 72)


# ----------------------------------------------------------------------
section("A. cubic B-spline phi and derived constants")

phi_lo = sp.Rational(2, 3) - 4 * t**2 + 4 * t**3
phi_hi = sp.Rational(4, 3) * (1 - t) ** 3


def phi_expr(val):
    v = sp.Rational(val)
    return (phi_lo if v < sp.Rational(1, 2) else phi_hi).subs(t, v)


for v in [0, sp.Rational(1, 4), sp.Rational(1, 2), sp.Rational(3, 4), 1]:
    print(f"phi({v}) = {sp.nsimplify(phi_expr(v))} = {float(phi_expr(v)):.17g}")

dlo, dhi = sp.diff(phi_lo, t), sp.diff(phi_hi, t)
d2lo, d2hi = sp.diff(dlo, t), sp.diff(dhi, t)
print("phi'(1/2-) =", dlo.subs(t, sp.Rational(1, 2)),
      " phi'(1/2+) =", dhi.subs(t, sp.Rational(1, 2)))
print("phi''(1/2-) =", d2lo.subs(t, sp.Rational(1, 2)),
      " phi''(1/2+) =", d2hi.subs(t, sp.Rational(1, 2)))
print("phi'(1/4) =", dlo.subs(t, sp.Rational(1, 4)),
      "=", float(dlo.subs(t, sp.Rational(1, 4))))
print("phi''(1/4) =", d2lo.subs(t, sp.Rational(1, 4)))
print("phi''(0) =", d2lo.subs(t, 0), "  phi''(1) =", d2hi.subs(t, 1))

int_phi2 = sp.integrate(phi_lo**2, (t, 0, sp.Rational(1, 2))) + sp.integrate(
    phi_hi**2, (t, sp.Rational(1, 2), 1)
)
print("int_0^1 phi^2 dt =", int_phi2, "=", float(int_phi2))
# 1D basis Psi_k(x) = phi(|x - k h|/(2h)); ||Psi||^2 = 2h * 2 * int phi^2
print("int_R phi(|x|/(2h))^2 dx = (151/315) h :", sp.nsimplify(4 * int_phi2))

# partition of unity at x = h/2 (nodes k = -1,0,1,2)
pu = sum(phi_expr(sp.Rational(abs(sp.Rational(1, 2) - k), 2)) for k in range(-1, 3))
print("PU at x=h/2:", sp.nsimplify(pu))

# 1D interpolant of data f_k = (k h)^2 evaluated at x = 0
interp0 = sum((k * h) ** 2 * phi_expr(sp.Rational(abs(k), 2)) for k in range(-2, 3))
print("sum (kh)^2 phi(|k|/2) =", sp.simplify(interp0))

# tensor-product values in 2D
print("2D shape at its node:", sp.nsimplify(phi_expr(0) ** 2))
print("2D shape at node + (h1/2, 0):", sp.nsimplify(phi_expr(sp.Rational(1, 4)) * phi_expr(0)))

# ----------------------------------------------------------------------
section("B. kernel moments, inverse-distance profile, d=2")

rho = 3 / (2 * sp.pi * t)  # unit profile on (0,1]
m_unit = sp.integrate(rho * t**2 * t, (t, 0, 1)) * 2 * sp.pi  # int rho |s|^2 ds
print("m = int_B1 rho |s|^2 ds =", sp.simplify(m_unit))

phi_ang = sp.symbols("phi_ang", real=True)
c4 = sp.integrate(sp.cos(phi_ang) ** 4, (phi_ang, 0, 2 * sp.pi))
c22 = sp.integrate(
    sp.cos(phi_ang) ** 2 * sp.sin(phi_ang) ** 2, (phi_ang, 0, 2 * sp.pi)
)
I3 = sp.integrate(rho * t**3, (t, 0, 1))
print("M4[11] = M4[22] =", sp.simplify(I3 * c4))
print("M4[12] =", sp.simplify(I3 * c22))
I5 = sp.integrate(rho * t**5, (t, 0, 1))
print("M6_unit = 2 pi int rho t^5 dt =", sp.simplify(2 * sp.pi * I5), " (M6 = that * delta^2)")
print("int_B1 rho s1^2/|s|^2 ds =", sp.simplify(sp.integrate(rho * t, (t, 0, 1)) * sp.pi))

# d=3 angular factors (any radial profile): M4[ii]/m, M4[ij]/m
th, ph2 = sp.symbols("th ph2", real=True)
sphere = sp.sin(th)
z4 = sp.integrate(sp.integrate(sp.cos(th) ** 4 * sphere, (th, 0, sp.pi)), (ph2, 0, 2 * sp.pi))
tot = sp.integrate(sp.integrate(sphere, (th, 0, sp.pi)), (ph2, 0, 2 * sp.pi))
x2y2 = sp.integrate(
    sp.integrate((sp.sin(th) ** 2 * sp.cos(ph2) * sp.sin(ph2)) ** 2 * sphere, (th, 0, sp.pi)),
    (ph2, 0, 2 * sp.pi),
)
print("d=3: <z^4> =", sp.simplify(z4 / tot), "  <x^2 y^2> =", sp.simplify(x2y2 / tot))

# ----------------------------------------------------------------------
section("C. material constants (plane strain), E=1, nu=0.4")

E, nu = sp.Integer(1), sp.Rational(2, 5)
lam = E * nu / ((1 + nu) * (1 - 2 * nu))
mu = E / (2 * (1 + nu))
print("lambda =", lam, "=", float(lam))
print("mu =", mu, "=", float(mu))
print("2 mu + lambda =", lam + 2 * mu, "=", float(lam + 2 * mu))
print("18 lambda/5 =", sp.nsimplify(18 * lam / 5), "=", float(18 * lam / 5))
for dd in [sp.Rational(1, 5), sp.Rational(1, 10), sp.Rational(1, 20)]:
    print(f"  18 lambda delta^2/5 at delta={dd} = {float(18*lam*dd**2/5):.17g}")

# ----------------------------------------------------------------------
section("D. manufactured solution and local RHS")

u1 = x1**2 * (1 - x1) ** 2 + x2**2 * (1 - x2) ** 2
u2 = sp.Integer(0)
print("u1(1/2,1/2) =", u1.subs({x1: sp.Rational(1, 2), x2: sp.Rational(1, 2)}))

lap_u1 = sp.diff(u1, x1, 2) + sp.diff(u1, x2, 2)
div_u = sp.diff(u1, x1) + sp.diff(u2, x2)
L0_1 = mu * lap_u1 + (mu + lam) * sp.diff(div_u, x1)
L0_2 = mu * (sp.diff(u2, x1, 2) + sp.diff(u2, x2, 2)) + (mu + lam) * sp.diff(div_u, x2)
f0_1 = sp.expand(-L0_1)
f0_2 = sp.expand(-L0_2)
print("f0_1 =", f0_1)
ref = sp.expand(
    -(2 * lam * (1 - 6 * x1 + 6 * x1**2) + 6 * mu * (1 - 4 * x1 + 4 * x1**2 - 2 * x2 + 2 * x2**2))
)
print("matches corrected closed form:", sp.simplify(f0_1 - ref) == 0)
print("f0_2 =", f0_2)
print("f0(0,0) =", (f0_1.subs({x1: 0, x2: 0}), f0_2))
print("f0(0.3,0.7) =", float(f0_1.subs({x1: sp.Rational(3, 10), x2: sp.Rational(7, 10)})))

# ----------------------------------------------------------------------
section("E. exact nonlocal shift  L^S_delta u - L^S_0 u  (quartic, d=2)")

# bond:      (C_a mu / m)   int rho_d(|s|) (s s^T/|s|^2) (u(x+s)-u(x)) ds
# state:     (C_b d (lam-mu)/m^2) G_d(D_d u),  theta = (d/m) D u
# C_a=16, C_b=2, d=2.  rho_d(r) = r^-4 rho(r/delta) => rho_d(|s|)= 3/(2 pi delta^3 |s|)
rr, ang = sp.symbols("rr ang", real=True, positive=True)
sv = (rr * sp.cos(ang), rr * sp.sin(ang))
rho_d = 3 / (2 * sp.pi * delta**3 * rr)
u1s = u1.subs({x1: x1 + sv[0], x2: x2 + sv[1]})
du = sp.expand(u1s - u1)

# bond integrand: rho_d * (s_i s_1/|s|^2) * du * Jacobian rr
bond = []
for i, si in enumerate(sv):
    integ = sp.expand_trig(sp.expand(rho_d * si * sv[0] / rr**2 * du * rr))
    val = sp.integrate(sp.integrate(integ, (ang, 0, 2 * sp.pi)), (rr, 0, delta))
    bond.append(sp.simplify(val))
m_val = sp.Integer(1)
bond_term = [sp.simplify(16 * mu / m_val * b) for b in bond]

# D u at generic point (y1,y2): int rho_d s.(u(y+s)-u(y)) ds
y1, y2 = sp.symbols("y1 y2", real=True)
u1y = u1.subs({x1: y1 + sv[0], x2: y2 + sv[1]})
u1y0 = u1.subs({x1: y1, x2: y2})
Dint = sp.expand_trig(sp.expand(rho_d * (sv[0] * (u1y - u1y0)) * rr))
Du = sp.simplify(sp.integrate(sp.integrate(Dint, (ang, 0, 2 * sp.pi)), (rr, 0, delta)))
print("D_delta u (at y) =", sp.expand(Du))

# G of Du: int rho_d s (Du(x+s)-Du(x)) ds
Dux = Du.subs({y1: x1, y2: x2})
Duxs = Du.subs({y1: x1 + sv[0], y2: x2 + sv[1]})
G = []
for i, si in enumerate(sv):
    integ = sp.expand_trig(sp.expand(rho_d * si * (Duxs - Dux) * rr))
    G.append(sp.simplify(sp.integrate(sp.integrate(integ, (ang, 0, 2 * sp.pi)), (rr, 0, delta))))
state_term = [sp.simplify(2 * 2 * (lam - mu) / m_val**2 * g) for g in G]

LS = [sp.expand(b + s_) for b, s_ in zip(bond_term, state_term)]
shift = [sp.simplify(LS[0] - L0_1), sp.simplify(LS[1] - L0_2)]
print("L^S_delta u - L^S_0 u =", shift)
print("expected (+18 lam delta^2/5, 0):", sp.nsimplify(18 * lam * delta**2 / 5))
print("=> rhs shift f_delta - f0 = -(18 lam delta^2/5, 0)")
print("bond-only shift coefficient/delta^2:",
      sp.simplify((sp.simplify(bond_term[0] - sp.expand((16*mu/m_val) * 0 - 0)) - 0)))

# ----------------------------------------------------------------------
section("F. scalar symbols: small-r limits and chord-density values")

# p1(r) = int_B1 rho (s1^2/|s|^2)(1-cos(r s2)) ds, q1 with s2^2, b1 = int rho s2 sin(r s2)
# chord closed forms for rho = 3/(2 pi t), c = 3/(2 pi), L = sqrt(1-w^2):
#   P(w) = 2c( ln((1+L)/|w|) - L ),  Q(w) = 2c L,  R(w) = 2c ln((1+L)/|w|)
c_chord = 3 / (2 * sp.pi)
Lw = sp.sqrt(1 - w**2)
Pw = 2 * c_chord * (sp.log((1 + Lw) / sp.Abs(w)) - Lw)
Qw = 2 * c_chord * Lw
Rw = 2 * c_chord * sp.log((1 + Lw) / sp.Abs(w))

# verify chord densities against direct 1D chord integrals at w = 0.3
wv = sp.Rational(3, 10)
Lv = sp.sqrt(1 - wv**2)
P_direct = sp.integrate(
    (3 / (2 * sp.pi * sp.sqrt(wv**2 + x**2))) * x**2 / (wv**2 + x**2), (x, -Lv, Lv)
)
print("P(0.3) closed:", float(Pw.subs(w, wv)), " direct:", float(P_direct))
Q_direct = sp.integrate(
    (3 / (2 * sp.pi * sp.sqrt(wv**2 + x**2))) * wv**2 / (wv**2 + x**2), (x, -Lv, Lv)
)
print("Q(0.3) closed:", float(Qw.subs(w, wv)), " direct:", float(Q_direct))

# small-r limits via series: 1-cos(rw) ~ r^2 w^2/2; sin ~ rw
# (integrands even in w; smooth log-singular integrals done in mpmath)
cq = 3 / (2 * mp.pi)


def chord_P(wv):
    L = mp.sqrt(1 - wv**2)
    return 2 * cq * (mp.log((1 + L) / abs(wv)) - L)


def chord_Q(wv):
    return 2 * cq * mp.sqrt(1 - wv**2)


def chord_R(wv):
    L = mp.sqrt(1 - wv**2)
    return 2 * cq * mp.log((1 + L) / abs(wv))


p_lim = 2 * mp.quad(lambda wv: wv**2 / 2 * chord_P(wv), [0, 1])
q_lim = 2 * mp.quad(lambda wv: wv**2 / 2 * chord_Q(wv), [0, 1])
b_lim = 2 * mp.quad(lambda wv: wv**2 * chord_R(wv), [0, 1])
print("p1/r^2 -> ", mp.nstr(p_lim, 17), " (1/16 =", mp.nstr(mp.mpf(1) / 16, 17), ")")
print("q1/r^2 -> ", mp.nstr(q_lim, 17), " (3/16 =", mp.nstr(mp.mpf(3) / 16, 17), ")")
print("b1/r  -> ", mp.nstr(b_lim, 17), " (1/2)")


def osc_points(rv):
    # subdivision at the oscillation scale; 0 is always a breakpoint so no
    # quadrature node lands exactly on the log singularity of the density
    nseg = max(2, int(mp.ceil(rv / mp.pi)))
    half = [mp.mpf(k) / nseg for k in range(nseg + 1)]
    return [-v for v in reversed(half)] + half[1:]


def scalars_chord(rv):
    pts = osc_points(rv)
    p = mp.quad(lambda wv: (1 - mp.cos(rv * wv)) * chord_P(wv), pts)
    q = mp.quad(lambda wv: (1 - mp.cos(rv * wv)) * chord_Q(wv), pts)
    b = mp.quad(lambda wv: wv * mp.sin(rv * wv) * chord_R(wv), pts)
    return p, q, b


def scalars_polar(rv):
    def pf(tv, av):
        return (3 / (2 * mp.pi * tv)) * (mp.cos(av) ** 2) * (1 - mp.cos(rv * tv * mp.sin(av))) * tv

    def qf(tv, av):
        return (3 / (2 * mp.pi * tv)) * (mp.sin(av) ** 2) * (1 - mp.cos(rv * tv * mp.sin(av))) * tv

    def bf(tv, av):
        return (3 / (2 * mp.pi * tv)) * (tv * mp.sin(av)) * mp.sin(rv * tv * mp.sin(av)) * tv

    opts = dict(maxdegree=8)
    p = mp.quad(pf, [0, 1], [0, mp.pi, 2 * mp.pi], **opts)
    q = mp.quad(qf, [0, 1], [0, mp.pi, 2 * mp.pi], **opts)
    b = mp.quad(bf, [0, 1], [0, mp.pi, 2 * mp.pi], **opts)
    return p, q, b


for rv in [mp.mpf("0.5"), mp.mpf("3.7")]:
    pc, qc, bc = scalars_chord(rv)
    pp, qq, bb = scalars_polar(rv)
    print(f"r={float(rv)}: chord p={mp.nstr(pc,17)} q={mp.nstr(qc,17)} b={mp.nstr(bc,17)}")
    print(f"         polar p={mp.nstr(pp,17)} q={mp.nstr(qq,17)} b={mp.nstr(bb,17)}")

# larger arguments: chord route only (validated above), for the table oracle
for rv in [mp.mpf("12.0"), mp.mpf("80.0"), mp.mpf("300.0")]:
    pc, qc, bc = scalars_chord(rv)
    print(f"r={float(rv)}: chord p={mp.nstr(pc,17)} q={mp.nstr(qc,17)} b={mp.nstr(bc,17)}")
print("p_inf = q_inf =", mp.nstr(mp.mpf(3) / 2, 17))

# ----------------------------------------------------------------------
section("G. continuous Navier symbol at xi=(1.3,-0.7), delta=1/4 (direct 2D)")

dv = mp.mpf(1) / 4
xi = (mp.mpf("1.3"), mp.mpf("-0.7"))
lam_n, mu_n = mp.mpf(10) / 7, mp.mpf(5) / 14


def bond_entry(i, j):
    def f(tv, av):
        s = (dv * tv * mp.cos(av), dv * tv * mp.sin(av))
        rho_d = 3 / (2 * mp.pi * dv**3 * (dv * tv))
        si, sj = s[i], s[j]
        r2 = s[0] ** 2 + s[1] ** 2
        return rho_d * si * sj / r2 * (1 - mp.cos(s[0] * xi[0] + s[1] * xi[1])) * (dv**2 * tv)

    return mp.quad(f, [0, 1], [0, 2 * mp.pi], maxdegree=10)


def bvec_entry(i):
    def f(tv, av):
        s = (dv * tv * mp.cos(av), dv * tv * mp.sin(av))
        rho_d = 3 / (2 * mp.pi * dv**3 * (dv * tv))
        return rho_d * s[i] * mp.sin(s[0] * xi[0] + s[1] * xi[1]) * (dv**2 * tv)

    return mp.quad(f, [0, 1], [0, 2 * mp.pi], maxdegree=10)


B = [[bond_entry(0, 0), bond_entry(0, 1)], [bond_entry(1, 0), bond_entry(1, 1)]]
bv = [bvec_entry(0), bvec_entry(1)]
ca, cb, dd, m_ = 16, 2, 2, 1
M = [[ca * mu_n / m_ * B[i][j] + cb * dd * (lam_n - mu_n) / m_**2 * bv[i] * bv[j]
      for j in range(2)] for i in range(2)]
for i in range(2):
    print("  [", mp.nstr(M[i][0], 17), ",", mp.nstr(M[i][1], 17), "]")
tr = M[0][0] + M[1][1]
det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
lam1 = (tr - mp.sqrt(tr**2 - 4 * det)) / 2
lam2 = (tr + mp.sqrt(tr**2 - 4 * det)) / 2
print("eigs:", mp.nstr(lam1, 17), mp.nstr(lam2, 17))
print("local-limit eigs (mu, 2mu+lambda):", float(mu_n), float(2 * mu_n + lam_n))

# ----------------------------------------------------------------------
section("H. quasi-discrete point sets and moment-matched weights")


def point_set(eps1):
    n = int(mp.floor(1 / eps1))
    pts = []
    for k1 in range(-n, n + 1):
        for k2 in range(-n, n + 1):
            if k1 == 0 and k2 == 0:
                continue
            if (eps1 * k1) ** 2 + (eps1 * k2) ** 2 <= 1 + 1e-15:
                pts.append((k1, k2))
    return sorted(pts)


def orbits_signflip(pts):
    seen, orbs = set(), []
    for p in pts:
        if p in seen:
            continue
        orb = sorted({(a * p[0], b * p[1]) for a in (1, -1) for b in (1, -1)})
        for q in orb:
            seen.add(q)
        orbs.append(orb)
    return orbs


import numpy as np

for eps1 in [0.25, 0.5]:
    pts = point_set(eps1)
    orbs = orbits_signflip(pts)
    print(f"eps1={eps1}: {len(pts)} points, {len(orbs)} sign-flip orbits")
    # constraints: sum_p w_p rho(|p|) p_i^2 p_j^2 / |p|^2 = M4 targets (3/8,1/8,3/8)
    A = np.zeros((3, len(orbs)))
    for g, orb in enumerate(orbs):
        for (k1, k2) in orb:
            p1v, p2v = eps1 * k1, eps1 * k2
            rr2 = p1v**2 + p2v**2
            rho_v = 3 / (2 * np.pi * np.sqrt(rr2))
            A[0, g] += rho_v * p1v**4 / rr2
            A[1, g] += rho_v * p1v**2 * p2v**2 / rr2
            A[2, g] += rho_v * p2v**4 / rr2
    b = np.array([3 / 8, 1 / 8, 3 / 8])
    nsz = np.array([float(len(o)) for o in orbs])
    w0 = np.full(len(orbs), eps1**2)
    # KKT: min sum_g n_g (w_g - w0)^2  s.t.  A w = b
    Dinv = 1.0 / nsz
    S = A @ np.diag(Dinv) @ A.T
    nu_v = np.linalg.solve(S, b - A @ w0)
    wgt = w0 + Dinv * (A.T @ nu_v)
    resid = A @ wgt - b
    print("  constraint residual:", np.abs(resid).max())
    print("  min orbit weight:", wgt.min(), " max:", wgt.max())
    print("  sum over points of w:", float((wgt * nsz).sum()))
    if eps1 == 0.5:
        for orb, wg in zip(orbs, wgt):
            print(f"    orbit rep {orb[-1]}: w = {wg:.17g}")
    else:
        reps = [orb[-1] for orb in orbs]
        for want in [(1, 0), (1, 1), (3, 2), (4, 0)]:
            if want in reps:
                print(f"    orbit rep {want}: w = {wgt[reps.index(want)]:.17g}")
    # second moments implied: sum w rho p_i p_j vs continuous m/2
    s11 = sum(
        wg * (3 / (2 * np.pi * np.sqrt((eps1 * k1) ** 2 + (eps1 * k2) ** 2)))
        * (eps1 * k1) ** 2
        for orb, wg in zip(orbs, wgt)
        for (k1, k2) in orb
    )
    print("  sum w rho p1^2 =", s11, " (continuous m/2 = 0.5)")

# ----------------------------------------------------------------------
section("I. grid sizes for the worked examples")

for (hmax, hhat, lbl) in [
    (0.25, (1.0, 0.5), "h_max=1/4, h_hat=(1,1/2)"),
    (0.125, (1.0, 0.5), "h_max=1/8, h_hat=(1,1/2)"),
]:
    hvec = (hmax * hhat[0], hmax * hhat[1])
    n1 = round(1 / hvec[0]) - 1
    n2 = round(1 / hvec[1]) - 1
    print(f"{lbl}: interior nodes {n1}x{n2} = {n1*n2}, dofs = {2*n1*n2}")

# ----------------------------------------------------------------------
section("J. norm_h constant checks")

print("sqrt(151*0.1/315) =", mp.nstr(mp.sqrt(mp.mpf(151) * mp.mpf("0.1") / 315), 17))
print("1D unit-coeff norm^2 per node factor 151/315 =", float(sp.Rational(151, 315)))
