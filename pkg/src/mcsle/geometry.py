"""Circular slit disks, moduli states, and boundary meshes.

The standard domain is the unit disk cut along n-1 concentric circular arc
slits.  Each slit is described by its radius m in (0,1), the angle of its
starting tip, and its angular arc length.  The full state of an evolution
adds time and a marked boundary angle theta (the driving point exp(i*theta)
on the unit circle).

All values here are immutable after construction and safe to share between
concurrent tasks.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadArcLength,
    LengthMismatch,
    RadiiTooClose,
    RadiusOutOfRange,
    ResolutionTooLow,
)

TWO_PI = 2.0 * math.pi

#: minimal admissible separation between slit radii
RADIUS_SEPARATION = 1e-3


def _norm_angle(theta: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod rounding at the seam
        t -= TWO_PI
    return t


@dataclass(frozen=True)
class Slit:
    """One concentric circular arc slit: |z| = m, angles [theta_start, theta_start+arc_length]."""

    m: float
    theta_start: float
    arc_length: float

    def __post_init__(self):
        if not (0.0 < self.m < 1.0) or not math.isfinite(self.m):
            raise RadiusOutOfRange(f"slit radius must lie in (0,1), got {self.m}")
        if not (0.0 < self.arc_length < TWO_PI) or not math.isfinite(self.arc_length):
            raise BadArcLength(f"arc length must lie in (0, 2*pi), got {self.arc_length}")
        object.__setattr__(self, "theta_start", _norm_angle(self.theta_start))

    @property
    def theta_end(self) -> float:
        return self.theta_start + self.arc_length

    @property
    def theta_center(self) -> float:
        return self.theta_start + 0.5 * self.arc_length

    def point(self, s):
        """Arc point at Chebyshev parameter s in [-1, 1] (s=-1 start tip, s=+1 end tip)."""
        beta = self.theta_center + 0.5 * self.arc_length * np.asarray(s)
        return self.m * np.exp(1j * beta)

    def tips(self):
        return self.point(-1.0), self.point(1.0)

    def contains_angle(self, phi) -> np.ndarray:
        """Whether angle(s) phi fall within the arc's angular span (mod 2*pi)."""
        rel = np.mod(np.asarray(phi, dtype=float) - self.theta_start, TWO_PI)
        return rel <= self.arc_length

    def distance(self, w) -> np.ndarray:
        """Euclidean distance from complex point(s) w to the arc."""
        w = np.asarray(w, dtype=complex)
        inside = self.contains_angle(np.angle(w))
        radial = np.abs(np.abs(w) - self.m)
        t0, t1 = self.tips()
        tip = np.minimum(np.abs(w - t0), np.abs(w - t1))
        return np.where(inside, radial, tip)


@dataclass(frozen=True)
class CircularSlitDisk:
    """Unit disk with concentric circular arc slits; connectivity n = 1 + #slits."""

    slits: tuple[Slit, ...] = ()

    def __post_init__(self):
        slits = tuple(self.slits)
        object.__setattr__(self, "slits", slits)
        radii = sorted(s.m for s in slits)
        for a, b in zip(radii, radii[1:]):
            if b - a < RADIUS_SEPARATION:
                raise RadiiTooClose(
                    f"slit radii {a} and {b} closer than {RADIUS_SEPARATION}"
                )

    @property
    def n(self) -> int:
        """Connectivity: number of boundary components."""
        return 1 + len(self.slits)

    def distance_to_slits(self, w) -> np.ndarray:
        """Distance from point(s) to the nearest slit (inf if no slits)."""
        w = np.asarray(w, dtype=complex)
        if not self.slits:
            return np.full(w.shape, np.inf)
        return np.min([s.distance(w) for s in self.slits], axis=0)

    def to_json(self) -> str:
        return json.dumps(
            {
                "slits": [
                    {"m": s.m, "theta_start": s.theta_start, "arc_length": s.arc_length}
                    for s in self.slits
                ]
            }
        )

    @staticmethod
    def from_json(text: str) -> "CircularSlitDisk":
        obj = json.loads(text)
        return make_domain(
            [(s["m"], s["theta_start"], s["arc_length"]) for s in obj["slits"]]
        )


def make_domain(slits) -> CircularSlitDisk:
    """Build a validated circular slit disk from (m, theta_start, arc_length) triples."""
    return CircularSlitDisk(tuple(Slit(m, ts, al) for (m, ts, al) in slits))


@dataclass(frozen=True)
class ModuliState:
    """Evolution state: time, driving angle theta, and the slit parameters."""

    t: float
    gamma_angle: float
    domain: CircularSlitDisk

    @property
    def gamma(self) -> complex:
        """Marked boundary point exp(i*theta) on the unit circle."""
        return complex(math.cos(self.gamma_angle), math.sin(self.gamma_angle))

    @property
    def n(self) -> int:
        return self.domain.n

    def state_hash(self) -> str:
        return hashlib.sha256(pack_moduli(self).tobytes()).hexdigest()[:16]


def pack_moduli(state: ModuliState) -> np.ndarray:
    """Flatten a state to [t, theta, m_1, theta_start_1, arc_1, m_2, ...]."""
    out = [state.t, state.gamma_angle]
    for s in state.domain.slits:
        out.extend([s.m, s.theta_start, s.arc_length])
    return np.asarray(out, dtype=float)


def unpack_moduli(vector, n: int) -> ModuliState:
    """Inverse of pack_moduli for a domain of connectivity n."""
    vec = np.asarray(vector, dtype=float)
    expected = 2 + 3 * (n - 1)
    if vec.ndim != 1 or vec.size != expected:
        raise LengthMismatch(
            f"moduli vector for n={n} must have length {expected}, got {vec.size}"
        )
    slits = [
        (vec[2 + 3 * j], vec[3 + 3 * j], vec[4 + 3 * j]) for j in range(n - 1)
    ]
    return ModuliState(t=vec[0], gamma_angle=vec[1], domain=make_domain(slits))


@dataclass(frozen=True)
class BoundaryMesh:
    """Collocation nodes, quadrature weights, and inner normals on the boundary.

    Circle nodes are equispaced with trapezoid weights.  Slit nodes sit at
    Chebyshev parameters (tips excluded) with the endpoint-weighted
    Gauss-Chebyshev arc-length weights.  Slits carry one node set; all
    Dirichlet data used here coincides on both prime-end sides.
    """

    domain: CircularSlitDisk
    n_circle: int
    n_slit: int
    circle_nodes: np.ndarray = field(repr=False)
    circle_weights: np.ndarray = field(repr=False)
    circle_normals: np.ndarray = field(repr=False)
    slit_params: tuple[np.ndarray, ...] = field(repr=False)
    slit_nodes: tuple[np.ndarray, ...] = field(repr=False)
    slit_weights: tuple[np.ndarray, ...] = field(repr=False)
    slit_normals: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def all_nodes(self) -> np.ndarray:
        return np.concatenate([self.circle_nodes, *self.slit_nodes]) if self.slit_nodes \
            else self.circle_nodes

    def node_counts(self):
        """(n_circle, per-slit node count) for indexing into stacked arrays."""
        return self.n_circle, [len(p) for p in self.slit_params]


def discretize(domain: CircularSlitDisk, n_circle: int, n_slit: int) -> BoundaryMesh:
    """Build the boundary mesh; deterministic for identical inputs."""
    if n_circle < 32 or n_circle % 4 != 0:
        raise ResolutionTooLow(f"n_circle must be >= 32 and a multiple of 4, got {n_circle}")
    if n_slit < 16:
        raise ResolutionTooLow(f"n_slit must be >= 16, got {n_slit}")

    angles = TWO_PI * np.arange(n_circle) / n_circle
    circle_nodes = np.exp(1j * angles)
    circle_weights = np.full(n_circle, TWO_PI / n_circle)
    circle_normals = -circle_nodes  # inner normal points toward 0

    params, nodes, weights, normals = [], [], [], []
    for s in domain.slits:
        q = np.arange(1, n_slit + 1)
        sq = np.cos((2 * q - 1) * math.pi / (2 * n_slit))[::-1]  # increasing in s
        half = 0.5 * s.arc_length
        jac = s.m * half  # |d zeta / d s|
        params.append(sq)
        nodes.append(s.point(sq))
        weights.append(jac * (math.pi / n_slit) * np.sqrt(1.0 - sq**2))
        normals.append(np.exp(1j * (s.theta_center + half * sq)))  # +radial side

    for arr in (circle_nodes, circle_weights, circle_normals, *params, *nodes, *weights, *normals):
        arr.setflags(write=False)

    return BoundaryMesh(
        domain=domain,
        n_circle=n_circle,
        n_slit=n_slit,
        circle_nodes=circle_nodes,
        circle_weights=circle_weights,
        circle_normals=circle_normals,
        slit_params=tuple(params),
        slit_nodes=tuple(nodes),
        slit_weights=tuple(weights),
        slit_normals=tuple(normals),
    )
