"""Scratch validation of the ArcQuadrature engine against brute-force quad."""
import numpy as np
from scipy.integrate import quad
from mcsle.geometry import Slit
from mcsle._chebarc import ArcQuadrature, composite_panels

rng = np.random.default_rng(0)
slit = Slit(m=0.5, theta_start=0.3, arc_length=1.9)
arc = ArcQuadrature(slit, n_basis=8, n_quad=96)
J = arc.jac
print("J =", J, "near_radius =", arc.near_radius)


def brute_log_col(w, p):
    def f(phi):
        z = slit.point(np.cos(phi))
        ker = np.log(abs(w - z)) - np.log(abs(1 - np.conj(z) * w))
        return np.cos(p * phi) * ker
    val, _ = quad(f, 0, np.pi, limit=400, epsabs=1e-13, epsrel=1e-13)
    return J * val


def brute_cauchy_col(w, p):
    def fre(phi):
        z = slit.point(np.cos(phi))
        ker = 1 / (w - z) + np.conj(z) / (1 - np.conj(z) * w)
        return np.cos(p * phi) * ker.real
    def fim(phi):
        z = slit.point(np.cos(phi))
        ker = 1 / (w - z) + np.conj(z) / (1 - np.conj(z) * w)
        return np.cos(p * phi) * ker.imag
    vr, _ = quad(fre, 0, np.pi, limit=400, epsabs=1e-13)
    vi, _ = quad(fim, 0, np.pi, limit=400, epsabs=1e-13)
    return J * (vr + 1j * vi)


# --- far target
for w in [0.1 + 0.2j, -0.7 + 0.1j, 0.9j]:
    cols = arc.log_columns([w])[0]
    cc = arc.cauchy_columns([w])[0]
    for p in [0, 1, 5]:
        bl = brute_log_col(w, p)
        bc = brute_cauchy_col(w, p)
        print(f"far w={w} p={p}: log err {abs(cols[p]-bl):.2e} cauchy err {abs(cc[p]-bc):.2e}")

# --- near target (close to the arc)
zmid = slit.point(0.2)
for eps in [3e-2, 1e-3]:
    w = zmid * (1 + eps)  # radially offset
    cols = arc.log_columns([w])[0]
    cc = arc.cauchy_columns([w])[0]
    for p in [0, 3]:
        bl = brute_log_col(w, p)
        bc = brute_cauchy_col(w, p)
        print(f"near eps={eps} p={p}: log err {abs(cols[p]-bl):.2e} cauchy err {abs(cc[p]-bc):.2e}")

# --- on-circle target (inside span and beyond tip)
for x in [0.37, 1.12]:
    beta = slit.theta_center + 0.5 * slit.arc_length * x
    w = slit.m * np.exp(1j * beta)
    cols = arc.log_columns([w])[0]
    for p in [0, 1, 4]:
        bl = brute_log_col(w, p)
        print(f"circle x={x} p={p}: err {abs(cols[p]-bl):.2e} (val {cols[p]:.6f})")

# --- completion: check d/dw completion == cauchy and Re completion == log value
d = rng.normal(size=8)
for w in [0.15 + 0.3j, zmid * (1 + 2e-3)]:
    val = arc.completion_values([w], d, branch="principal")[0]
    re_direct = arc.real_values([w], d)[0]
    print(f"completion Re check w={w}: {abs(val.real - re_direct):.2e}")
    h = 1e-6
    fd = (arc.completion_values([w + h], d, branch='principal')[0]
          - arc.completion_values([w - h], d, branch='principal')[0]) / (2 * h)
    dv = arc.derivative_values([w], d)[0]
    print(f"completion derivative check: {abs(fd - dv):.2e}")

# --- mass/period: integral of density
mass_direct = J * quad(lambda phi: arc.density_at(np.array([phi]), d)[0], 0, np.pi, limit=200)[0]
print("mass table vs direct:", arc.tables(d).mass, mass_direct)

# --- winding of completion around the slit: continuation residual should be ~2*pi*mass
loop_r = [slit.m - 0.1, slit.m + 0.1]
th = np.linspace(0, 2 * np.pi, 800, endpoint=False)
# stadium-ish loop: circle of radius slightly bigger through angular gap... use circle radius m+0.1 minus a detour: simplest: integrate derivative around circle radius m+0.1 (encloses slit AND origin; series absent here so fine: layer only)
zs = (slit.m + 0.12) * np.exp(1j * th)
dz = np.gradient(zs)
deriv = arc.derivative_values(zs, d)
winding = np.sum(deriv * dz) / (2j * np.pi)
print("loop integral/(2 pi i) =", winding, "expected ~ mass/(...)", arc.tables(d).mass)
