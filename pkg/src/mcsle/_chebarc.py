"""Quadrature engine for single-layer log potentials on circular arc slits.

A density on the arc |z| = m, beta in [theta_s, theta_s + arc] is expanded in
the endpoint-weighted Chebyshev basis T_p(s)/sqrt(1-s^2), s in [-1,1] the
affine arc parameter.  The layer kernel is the disk-Green modified log

    ln|w - zeta(s)| - ln|1 - conj(zeta(s)) w|

which vanishes identically for |w| = 1, so circle collocation rows never see
the layers.  Everything reduces to three kernel shapes (log, Cauchy, and the
integrated-by-parts completion kernel) integrated in the angle variable
phi = arccos(s), where the Chebyshev weight disappears.

Evaluation dispatch:
  * far targets: Gauss-Legendre in phi (spectral for analytic integrands),
  * near targets: composite Gauss-Legendre panels geometrically refined
    toward the parameter of nearest approach,
  * targets on the slit's own circle: exact Chebyshev log integrals
    (the classical -pi*T_p(x)/p formulas) plus a smooth correction.

Analytic completions are returned through the integrated-by-parts form
mass * Log(w - end_tip) + single-valued integral, so each layer's whole
branch structure is one principal logarithm at the end tip.  The "radial"
branch (continuous continuation along the segment from 0) adds an exactly
computed winding correction to that single term.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import NumericalError
from .geometry import Slit

PI = math.pi


@lru_cache(maxsize=32)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _gl_on(a: float, b: float, n: int):
    """Gauss-Legendre nodes/weights on [a, b]."""
    x, w = _leggauss(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def composite_panels(phi_star: float, dphi: float, n_per: int = 12):
    """Panel quadrature on [0, pi] geometrically refined toward phi_star.

    dphi is the parametric distance from the integration path to the
    nearest singularity; panels at distance d from phi_star have width ~d,
    keeping per-panel Gauss-Legendre accuracy uniform.
    """
    dphi = float(np.clip(dphi, 1e-6, 0.5 * PI))
    phi_star = float(np.clip(phi_star, 0.0, PI))
    breaks = {0.0, PI}
    d = dphi
    while True:
        lo, hi = phi_star - d, phi_star + d
        if lo > 0.0:
            breaks.add(lo)
        if hi < PI:
            breaks.add(hi)
        if lo <= 0.0 and hi >= PI:
            break
        d *= 2.0
    if 0.0 < phi_star < PI:
        breaks.add(phi_star)
    pts = sorted(breaks)
    nodes, weights = [], []
    for a, b in zip(pts, pts[1:]):
        xn, wn = _gl_on(a, b, n_per)
        nodes.append(xn)
        weights.append(wn)
    return np.concatenate(nodes), np.concatenate(weights)


def radial_winding(w, c):
    """Winding correction nu so that arg_princ(w-c) + 2*pi*nu continues
    arg(z-c) continuously along the straight segment from 0 to w."""
    w = np.asarray(w, dtype=complex)
    im_w, re_w = w.imag, w.real
    im_c, re_c = c.imag, c.real
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(im_w != 0.0, im_c / im_w, np.inf)
    crosses = (t > 0.0) & (t < 1.0) & (t * re_w < re_c)
    up = crosses & (im_w > im_c)
    down = crosses & (im_w < im_c)
    return down.astype(float) - up.astype(float)


class DensityTables:
    """Precomputed far-field evaluation tables for one slit's solved density."""

    __slots__ = ("zq", "zq_conj", "w_real", "c_ibp", "mass", "tip", "arc", "coeffs")

    def __init__(self, arc: "ArcQuadrature", coeffs: np.ndarray):
        d = np.asarray(coeffs, dtype=float)
        self.arc = arc
        self.coeffs = d
        self.zq = arc.zeta_g
        self.zq_conj = np.conj(arc.zeta_g)
        dens = arc.cos_table @ d  # density polynomial D(phi_g)
        self.w_real = arc.jac * arc.wgl * dens
        cum = arc.jac * (arc.cum_table @ d)  # U(cos phi_g), includes jac
        self.c_ibp = arc.wgl * cum * (0.5j * arc.slit.arc_length) * arc.zeta_g * arc.sin_g
        self.mass = arc.jac * PI * d[0]
        self.tip = arc.tip_end


class ArcQuadrature:
    """All quadrature machinery for one slit's layer basis (P coefficients)."""

    def __init__(self, slit: Slit, n_basis: int, n_quad: int, near_mult: float = 8.0):
        self.slit = slit
        self.P = int(n_basis)
        self.Q = int(n_quad)
        self.jac = slit.m * 0.5 * slit.arc_length  # |d zeta/d s|
        self.tip_start, self.tip_end = slit.tips()
        self.near_radius = near_mult * PI * self.jac / self.Q
        # image (reflected) arc lies at radius 1/m with the same angular span
        self.img_radius = 1.0 / slit.m

        phi, wgl = _gl_on(0.0, PI, self.Q)
        self.phi_g = phi
        self.wgl = wgl
        self.sin_g = np.sin(phi)
        self.s_g = np.cos(phi)
        self.zeta_g = slit.point(self.s_g)
        p = np.arange(self.P)
        self.cos_table = np.cos(np.outer(phi, p))  # (Q, P)
        self.cum_table = self._cumulative_table(phi)  # (Q, P)
        self.w_cos = wgl[:, None] * self.cos_table  # (Q, P): weights folded in

    # ----- basis tables -------------------------------------------------

    def _cumulative_table(self, phi: np.ndarray) -> np.ndarray:
        """S_p(phi) = integral of T_p/sqrt(1-s^2) from s=-1 to s=cos(phi)."""
        out = np.empty((phi.size, self.P))
        out[:, 0] = PI - phi
        for p in range(1, self.P):
            out[:, p] = -np.sin(p * phi) / p
        return out

    def density_at(self, phi, coeffs):
        d = np.asarray(coeffs, dtype=float)
        return np.cos(np.outer(phi, np.arange(self.P))) @ d

    def cumulative_at(self, phi, coeffs):
        d = np.asarray(coeffs, dtype=float)
        out = d[0] * (PI - phi)
        for p in range(1, self.P):
            out -= d[p] * np.sin(p * phi) / p
        return self.jac * out

    # ----- geometry helpers ---------------------------------------------

    def _angular_param(self, w):
        """Relative arc parameter x of the angular projection of w (wrapped)."""
        rel = np.angle(np.asarray(w, dtype=complex) * np.exp(-1j * self.slit.theta_center))
        return rel / (0.5 * self.slit.arc_length)

    def _img_distance(self, w):
        w = np.asarray(w, dtype=complex)
        x = self._angular_param(w)
        inside = np.abs(x) <= 1.0
        radial = np.abs(np.abs(w) - self.img_radius)
        t0 = self.tip_start * self.img_radius / self.slit.m**2  # reflected tips
        t1 = self.tip_end * self.img_radius / self.slit.m**2
        tip = np.minimum(np.abs(w - t0), np.abs(w - t1))
        return np.where(inside, radial, tip)

    def _near_params(self, w):
        """(phi_star, dphi) for a single near target."""
        x = float(np.clip(self._angular_param(w), -1.0, 1.0))
        phi_star = math.acos(x)
        zs = self.slit.point(x)
        dist = abs(complex(w) - zs)
        dist_img = float(self._img_distance(w))
        dphi = self._dphi(dist, phi_star)
        dphi = min(dphi, self._dphi(dist_img * self.slit.m**2, phi_star))
        return phi_star, dphi

    def _dphi(self, dist: float, phi_star: float) -> float:
        if dist <= 0.0:
            return 1e-6
        cand = math.sqrt(2.0 * dist / self.jac)
        s = math.sin(phi_star)
        if s > 1e-12:
            cand = min(cand, dist / (self.jac * s))
        return cand

    def classify(self, targets):
        """Split target indices into (far, near, on_circle)."""
        w = np.atleast_1d(np.asarray(targets, dtype=complex))
        dist = self.slit.distance(w)
        on_circ = np.abs(np.abs(w) - self.slit.m) < 1e-11
        dist_img = self._img_distance(w)
        near = (~on_circ) & ((dist < self.near_radius) | (dist_img < self.near_radius))
        far = ~(near | on_circ)
        return w, np.nonzero(far)[0], np.nonzero(near)[0], np.nonzero(on_circ)[0]

    # ----- exact same-circle log integrals --------------------------------

    def _exact_log_base(self, x):
        """I_p(x) = int T_p(s) ln|x-s| / sqrt(1-s^2) ds for real x (any)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty((x.size, self.P))
        inside = np.abs(x) <= 1.0
        xi = np.clip(x[inside], -1.0, 1.0)
        theta = np.arccos(xi)
        out[inside, 0] = -PI * math.log(2.0)
        for p in range(1, self.P):
            out[inside, p] = -(PI / p) * np.cos(p * theta)
        xo = x[~inside]
        if xo.size:
            ax = np.abs(xo)
            rho = ax + np.sqrt(ax * ax - 1.0)
            sgn = np.sign(xo)
            out[~inside, 0] = PI * np.log(0.5 * rho)
            for p in range(1, self.P):
                out[~inside, p] = -(PI / p) * rho ** (-p) * sgn**p
        return out

    def circle_log_columns(self, x):
        """Modified-kernel log columns for targets on the slit's own circle.

        x is the real arc parameter of the target angle (may lie outside
        [-1,1]); valid for any wrapped x since Delta*(|x-s|)/4 < pi.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        m, delta = self.slit.m, self.slit.arc_length
        cols = self._exact_log_base(x)
        # smooth chord/parameter correction S(x,s)
        diff = x[:, None] - self.s_g[None, :]
        ad = np.abs(diff)
        with np.errstate(divide="ignore", invalid="ignore"):
            s_corr = np.where(
                ad < 1e-14,
                math.log(m * 0.5 * delta),
                np.log(2.0 * m * np.sin(0.25 * delta * ad)) - np.log(ad),
            )
        cols = cols + s_corr @ self.w_cos
        # image kernel ln|1 - m^2 e^{i delta (x-s)/2}|, smooth scale 1-m^2
        if self.img_radius - m < self.near_radius:
            img = np.empty_like(cols)
            for i, xi in enumerate(x):
                phi_star = math.acos(float(np.clip(xi, -1.0, 1.0)))
                dphi = self._dphi((self.img_radius - m) * m, phi_star)
                nodes, wts = composite_panels(phi_star, dphi)
                kern = np.log(np.abs(1.0 - m * m * np.exp(0.5j * delta * (xi - np.cos(nodes)))))
                img[i] = (wts * kern) @ np.cos(np.outer(nodes, np.arange(self.P)))
        else:
            kern = np.log(np.abs(1.0 - m * m * np.exp(0.5j * delta * diff)))
            img = kern @ self.w_cos
        return self.jac * (cols - img)

    # ----- collocation matrix columns -------------------------------------

    def log_columns(self, targets):
        """(n_targets, P) real columns of the modified log kernel."""
        w, far, near, circ = self.classify(targets)
        out = np.empty((w.size, self.P))
        if far.size:
            wf = w[far][:, None]
            kern = np.log(np.abs(wf - self.zeta_g)) - np.log(
                np.abs(1.0 - np.conj(self.zeta_g) * wf)
            )
            out[far] = self.jac * (kern @ self.w_cos)
        for i in near:
            phi_star, dphi = self._near_params(w[i])
            nodes, wts = composite_panels(phi_star, dphi)
            zc = self.slit.point(np.cos(nodes))
            kern = np.log(np.abs(w[i] - zc)) - np.log(np.abs(1.0 - np.conj(zc) * w[i]))
            out[i] = self.jac * (
                (wts * kern) @ np.cos(np.outer(nodes, np.arange(self.P)))
            )
        if circ.size:
            out[circ] = self.circle_log_columns(self._angular_param(w[circ]))
        return out

    def cauchy_columns(self, targets):
        """(n_targets, P) complex columns of d/dw of the layer completion."""
        w, far, near, circ = self.classify(targets)
        if circ.size:
            raise NumericalError("cauchy_columns: target on the slit circle")
        out = np.empty((w.size, self.P), dtype=complex)
        if far.size:
            wf = w[far][:, None]
            kern = 1.0 / (wf - self.zeta_g) + np.conj(self.zeta_g) / (
                1.0 - np.conj(self.zeta_g) * wf
            )
            out[far] = self.jac * (kern @ self.w_cos.astype(complex))
        for i in near:
            phi_star, dphi = self._near_params(w[i])
            nodes, wts = composite_panels(phi_star, dphi)
            zc = self.slit.point(np.cos(nodes))
            kern = 1.0 / (w[i] - zc) + np.conj(zc) / (1.0 - np.conj(zc) * w[i])
            out[i] = self.jac * (
                (wts * kern) @ np.cos(np.outer(nodes, np.arange(self.P)))
            )
        return out

    # ----- density evaluations --------------------------------------------

    def tables(self, coeffs) -> DensityTables:
        return DensityTables(self, coeffs)

    def real_values(self, targets, coeffs):
        """Harmonic value of the layer for one solved density."""
        cols = self.log_columns(targets)
        return cols @ np.asarray(coeffs, dtype=float)

    def derivative_values(self, targets, coeffs):
        cols = self.cauchy_columns(targets)
        return cols @ np.asarray(coeffs, dtype=float)

    def completion_values(self, targets, coeffs, branch: str = "radial"):
        """Analytic completion of the layer potential for one solved density.

        The multivaluedness sits entirely in mass*Log(w - end_tip); with
        branch="radial" that term is continued along the segment from 0,
        with branch="principal" the principal cut is kept.
        """
        w, far, near, circ = self.classify(targets)
        if circ.size:
            raise NumericalError("completion_values: target on the slit circle")
        d = np.asarray(coeffs, dtype=float)
        out = np.empty(w.size, dtype=complex)
        tb = self.tables(d)
        if far.size:
            wf = w[far][:, None]
            ibp = np.sum(tb.c_ibp / (wf - self.zeta_g), axis=1)
            img = np.sum(tb.w_real * np.log(1.0 - np.conj(self.zeta_g) * wf), axis=1)
            out[far] = ibp - img
        for i in near:
            phi_star, dphi = self._near_params(w[i])
            nodes, wts = composite_panels(phi_star, dphi)
            sc = np.cos(nodes)
            zc = self.slit.point(sc)
            cum = self.cumulative_at(nodes, d)
            dens = self.density_at(nodes, d)
            ibp = np.sum(
                wts * cum * (0.5j * self.slit.arc_length) * zc * np.sin(nodes) / (w[i] - zc)
            )
            img = np.sum(wts * self.jac * dens * np.log(1.0 - np.conj(zc) * w[i]))
            out[i] = ibp - img
        logterm = np.log(w - tb.tip)
        if branch == "radial":
            logterm = logterm + 2j * PI * radial_winding(w, tb.tip)
        elif branch != "principal":
            raise ValueError(f"unknown branch {branch!r}")
        return tb.mass * logterm + out


def tables_real_far(tables: list[DensityTables], w):
    """Sum of layer harmonic values over slits, far-field fast path."""
    w = np.asarray(w, dtype=complex)[..., None]
    out = 0.0
    for tb in tables:
        kern = np.log(np.abs(w - tb.zq)) - np.log(np.abs(1.0 - tb.zq_conj * w))
        out = out + kern @ tb.w_real
    return out


def tables_completion_far(tables: list[DensityTables], w, branch: str = "radial"):
    """Sum of layer completions over slits, far-field fast path."""
    w = np.asarray(w, dtype=complex)
    wcol = w[..., None]
    out = np.zeros(w.shape, dtype=complex)
    for tb in tables:
        ibp = np.sum(tb.c_ibp / (wcol - tb.zq), axis=-1)
        img = (np.log(1.0 - tb.zq_conj * wcol)) @ tb.w_real.astype(complex)
        logterm = np.log(w - tb.tip)
        if branch == "radial":
            logterm = logterm + 2j * PI * radial_winding(w, tb.tip)
        out = out + tb.mass * logterm + ibp - img
    return out


def tables_derivative_far(tables: list[DensityTables], w):
    """Sum of layer completion derivatives over slits, far-field fast path."""
    w = np.asarray(w, dtype=complex)[..., None]
    out = 0.0
    for tb in tables:
        kern = 1.0 / (w - tb.zq) + tb.zq_conj / (1.0 - tb.zq_conj * w)
        out = out + kern @ tb.w_real.astype(complex)
    return out
