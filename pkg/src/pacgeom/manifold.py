"""Manifolds: coordinate-chart boxes and homogeneous (left-invariant) frames.

Both backends expose the same two primitives used by every differential
operator: component partial derivatives and anholonomy (bracket) coefficients.
On a chart, partials come from the exact forward-mode engine and brackets of
basis fields vanish; on a homogeneous frame, invariant components have zero
derivative and brackets come from the structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ad
from .errors import DomainError, UsageError

CHART = "chart"
FRAME = "frame"


@dataclass(frozen=True)
class Manifold:
    name: str
    dim: int
    backend: str
    chart_box: tuple | None = None
    structure_constants: np.ndarray | None = None  # c[k,i,j]: [e_i,e_j] = c^k_ij e_k
    _c: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.dim < 3 or self.dim % 2 == 0:
            raise UsageError(f"dimension must be odd and >= 3, got {self.dim}")
        if self.backend == CHART:
            if self.chart_box is None:
                raise UsageError("chart backend needs a chart_box")
            box = np.asarray(self.chart_box, dtype=float)
            if box.shape != (self.dim, 2) or not np.all(box[:, 1] > box[:, 0]):
                raise UsageError("chart_box must be dim intervals with interior")
            object.__setattr__(self, "chart_box", tuple(map(tuple, box)))
            c = np.zeros((self.dim, self.dim, self.dim))
        elif self.backend == FRAME:
            if self.structure_constants is None:
                raise UsageError("frame backend needs structure constants")
            c = np.asarray(self.structure_constants, dtype=float)
            if c.shape != (self.dim,) * 3:
                raise UsageError("structure constants must have shape (d,d,d)")
            if np.max(np.abs(c + np.swapaxes(c, 1, 2))) > 1e-14:
                raise UsageError("structure constants must be antisymmetric")
            jac = np.einsum("mij,lmk->lijk", c, c)
            cyc = jac + np.einsum("lijk->ljki", jac) + np.einsum("lijk->lkij", jac)
            if np.max(np.abs(cyc)) > 1e-12:
                raise UsageError("structure constants violate the Jacobi identity")
            object.__setattr__(self, "structure_constants", c)
        else:
            raise UsageError(f"unknown backend {self.backend!r}")
        object.__setattr__(self, "_c", c)

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    @property
    def anholonomy(self) -> np.ndarray:
        return self._c

    # -- points ----------------------------------------------------------

    def basepoint(self) -> "Point":
        return Point(self, np.zeros(self.dim))

    def point(self, coords) -> "Point":
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.dim,):
            raise UsageError("wrong coordinate length")
        if not self.contains(coords):
            raise DomainError(f"{coords} outside chart box of {self.name}")
        return Point(self, coords)

    def contains(self, coords) -> bool:
        if self.backend == FRAME:
            return True
        box = np.asarray(self.chart_box)
        return bool(np.all(coords >= box[:, 0]) and np.all(coords <= box[:, 1]))

    def sample_points(self, count: int, rng, shrink: float = 0.05) -> np.ndarray:
        """Seeded uniform draws from the chart box shrunk per side.

        Frame backends return the basepoint (all invariant fields agree there).
        """
        if self.backend == FRAME:
            return np.zeros((count, self.dim))
        box = np.asarray(self.chart_box)
        lo = box[:, 0] + shrink * (box[:, 1] - box[:, 0])
        hi = box[:, 1] - shrink * (box[:, 1] - box[:, 0])
        return lo + rng.random((count, self.dim)) * (hi - lo)

    # -- differentiation primitives ---------------------------------------

    def partials(self, fn, x):
        """d(components)/d(direction); derivative axis first."""
        if self.backend == FRAME:
            out = np.asarray(fn(x))
            return np.zeros((self.dim,) + out.shape)
        return ad.jacobian(fn, x)


@dataclass(frozen=True)
class Point:
    manifold: Manifold
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=float))


def coords_of(p) -> np.ndarray:
    """Accept a Point or a bare coordinate vector."""
    if isinstance(p, Point):
        return p.coords
    return np.asarray(p, dtype=float)


def same_manifold(*fields):
    base = fields[0].manifold
    for f in fields[1:]:
        if f.manifold is not base:
            raise UsageError("fields live on different manifolds/backends")
    return base
