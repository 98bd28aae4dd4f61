"""Registry of concrete example structures with declared expected flags.

Frame-backend entries make every identity exact algebra (left-invariant
fields have constant components), which isolates floating-point behaviour
from the coordinate backend.  ``heis-para`` is registered under both
backends; the frame twin carries the moving-frame matrix used by the
backend-equivalence checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ad
from .errors import UsageError
from .fields import DOWN, UP, TensorField, constant_field
from .manifold import CHART, FRAME, Manifold
from .paracontact import PacStructure

BOX3 = ((-1.0, 1.0),) * 3
BOX5 = ((-1.0, 1.0),) * 5


@dataclass
class ZooEntry:
    id: str
    manifold: Manifold
    structure: PacStructure
    expected: dict
    notes: str
    twin: str | None = None
    frame_map: object = None  # x -> matrix whose columns are the frame fields


_REGISTRY: dict[str, ZooEntry] = {}


def list_entries():
    return sorted(_REGISTRY)


def get_entry(entry_id: str) -> ZooEntry:
    try:
        return _REGISTRY[entry_id]
    except KeyError:
        raise UsageError(f"unknown zoo entry {entry_id!r}; "
                         f"known: {', '.join(list_entries())}") from None


def _register(entry: ZooEntry):
    _REGISTRY[entry.id] = entry
    return entry


def _expected(almost, paracontact, K, integrable, normal, sasakian):
    return {"almost_pac_metric": almost, "paracontact": paracontact,
            "K_paracontact": K, "integrable": integrable, "normal": normal,
            "paraSasakian": sasakian}


# -- flat model ---------------------------------------------------------------

def _flat_pac():
    man = Manifold("flat-pac", 3, CHART, chart_box=BOX3)
    phi = constant_field(man, (UP, DOWN),
                         [[0, 1, 0], [1, 0, 0], [0, 0, 0]], "phi")
    xi = constant_field(man, (UP,), [0, 0, 1], "xi")
    eta = constant_field(man, (DOWN,), [0, 0, 1], "eta")
    g = constant_field(man, (DOWN, DOWN), np.diag([1.0, -1.0, 1.0]), "g")
    s = PacStructure(phi, xi, eta, g, "flat-pac")
    return ZooEntry("flat-pac", man, s,
                    _expected(True, False, False, True, True, False),
                    "Flat chart model: d(eta)=0, so F != d(eta); normal.")


# -- 3-dim nilpotent group, coordinate chart ---------------------------------

def _heis_para():
    man = Manifold("heis-para", 3, CHART, chart_box=BOX3)

    def phi_fn(x):
        y = x[1]
        out = np.zeros((3, 3), dtype=object)
        out[0, 1] = 1.0
        out[1, 0] = 1.0
        out[2, 1] = y
        return out

    def eta_fn(x):
        return ad.asarray([-x[1], 0.0, 1.0])

    def g_fn(x):
        y = x[1]
        out = np.zeros((3, 3), dtype=object)
        out[0, 0] = 0.5 + y * y
        out[1, 1] = -0.5
        out[2, 2] = 1.0
        out[0, 2] = out[2, 0] = -y
        return out

    phi = TensorField(man, (UP, DOWN), phi_fn, "phi")
    xi = constant_field(man, (UP,), [0, 0, 1], "xi")
    eta = TensorField(man, (DOWN,), eta_fn, "eta")
    g = TensorField(man, (DOWN, DOWN), g_fn, "g")
    s = PacStructure(phi, xi, eta, g, "heis-para")

    def frame_map(x):
        return np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, x[1], 0.0]])

    return ZooEntry("heis-para", man, s,
                    _expected(True, True, True, True, True, True),
                    "Nilpotent 3-dim group chart; metric solves F = d(eta).",
                    twin="heis-para-frame", frame_map=frame_map)


def _heis_para_frame():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[0, 2, 1] = -1.0, 1.0  # [e1, e2] = -xi
    man = Manifold("heis-para-frame", 3, FRAME, structure_constants=c)
    phi = constant_field(man, (UP, DOWN),
                         [[0, 0, 0], [0, 0, 1], [0, 1, 0]], "phi")
    xi = constant_field(man, (UP,), [1, 0, 0], "xi")
    eta = constant_field(man, (DOWN,), [1, 0, 0], "eta")
    g = constant_field(man, (DOWN, DOWN), np.diag([1.0, 0.5, -0.5]), "g")
    s = PacStructure(phi, xi, eta, g, "heis-para-frame")
    return ZooEntry("heis-para-frame", man, s,
                    _expected(True, True, True, True, True, True),
                    "Left-invariant frame twin of heis-para.",
                    twin="heis-para")


# -- 3-dim solvable group, homogeneous frame ---------------------------------

def _solv_para():
    c = np.zeros((3, 3, 3))
    c[1, 0, 1], c[1, 1, 0] = 1.0, -1.0    # [xi, e1] = e1
    c[2, 0, 2], c[2, 2, 0] = -1.0, 1.0    # [xi, e2] = -e2
    c[0, 1, 2], c[0, 2, 1] = -2.0, 2.0    # [e1, e2] = -2 xi
    man = Manifold("solv-para", 3, FRAME, structure_constants=c)
    phi = constant_field(man, (UP, DOWN),
                         [[0, 0, 0], [0, 0, 1], [0, 1, 0]], "phi")
    xi = constant_field(man, (UP,), [1, 0, 0], "xi")
    eta = constant_field(man, (DOWN,), [1, 0, 0], "eta")
    g = constant_field(man, (DOWN, DOWN), np.diag([1.0, 1.0, -1.0]), "g")
    s = PacStructure(phi, xi, eta, g, "solv-para")
    return ZooEntry("solv-para", man, s,
                    _expected(True, True, False, True, False, False),
                    "Solvable 3-dim group; paracontact with h != 0 "
                    "(Reeb field not Killing).")


# -- 3-dim group with scal != 2n (admits the Einstein deformation) ------------

def _sl2_para():
    c = np.zeros((3, 3, 3))
    c[2, 0, 1], c[2, 1, 0] = 1.0, -1.0    # [xi, e1] = e2
    c[1, 0, 2], c[1, 2, 0] = 1.0, -1.0    # [xi, e2] = e1
    c[0, 1, 2], c[0, 2, 1] = -1.0, 1.0    # [e1, e2] = -xi
    man = Manifold("sl2-para", 3, FRAME, structure_constants=c)
    phi = constant_field(man, (UP, DOWN),
                         [[0, 0, 0], [0, 0, 1], [0, 1, 0]], "phi")
    xi = constant_field(man, (UP,), [1, 0, 0], "xi")
    eta = constant_field(man, (DOWN,), [1, 0, 0], "eta")
    g = constant_field(man, (DOWN, DOWN), np.diag([1.0, 0.5, -0.5]), "g")
    s = PacStructure(phi, xi, eta, g, "sl2-para")
    return ZooEntry("sl2-para", man, s,
                    _expected(True, True, True, True, True, True),
                    "Semisimple 3-dim group; eta-Einstein with scal = -2, "
                    "so the Einstein-izing deformation applies.")


# -- 5-dim nilpotent group ----------------------------------------------------

def _heis_para_5():
    man = Manifold("heis-para-5", 5, CHART, chart_box=BOX5)

    def phi_fn(x):
        y1, y2 = x[1], x[3]
        out = np.zeros((5, 5), dtype=object)
        out[1, 0] = 1.0            # phi dx1 = dy1-direction
        out[0, 1] = 1.0
        out[4, 1] = y1             # phi dy1 = dx1 + y1 dz
        out[3, 2] = 1.0
        out[2, 3] = 1.0
        out[4, 3] = y2
        return out

    def eta_fn(x):
        return ad.asarray([-x[1], 0.0, -x[3], 0.0, 1.0])

    def g_fn(x):
        y1, y2 = x[1], x[3]
        out = np.zeros((5, 5), dtype=object)
        out[0, 0] = 0.5 + y1 * y1
        out[2, 2] = 0.5 + y2 * y2
        out[0, 2] = out[2, 0] = y1 * y2
        out[1, 1] = -0.5
        out[3, 3] = -0.5
        out[4, 4] = 1.0
        out[0, 4] = out[4, 0] = -y1
        out[2, 4] = out[4, 2] = -y2
        return out

    phi = TensorField(man, (UP, DOWN), phi_fn, "phi")
    xi = constant_field(man, (UP,), [0, 0, 0, 0, 1], "xi")
    eta = TensorField(man, (DOWN,), eta_fn, "eta")
    g = TensorField(man, (DOWN, DOWN), g_fn, "g")
    s = PacStructure(phi, xi, eta, g, "heis-para-5")
    return ZooEntry("heis-para-5", man, s,
                    _expected(True, True, True, True, True, True),
                    "5-dim analogue (n = 2) of heis-para; exercises the "
                    "n-dependent constants.")


# -- 5-dim twisted model: compatible but non-integrable -----------------------

def _twisted_pac():
    man = Manifold("twisted-pac", 5, CHART, chart_box=BOX5)

    def basis_at(x):
        """Columns (u1, u2, v1, v2, xi) of the twisted eigenframe."""
        t = x[1]
        ch, sh = ad.cosh(t), ad.sinh(t)
        B = np.zeros((5, 5), dtype=object)
        B[0, 0] = 1.0
        B[1, 0] = 1.0                    # u1 = dx1 + dy1
        B[0, 1], B[1, 1] = sh, -sh       # u2 = ch (dx2+dy2) + sh (dx1-dy1)
        B[2, 1], B[3, 1] = ch, ch
        B[0, 2], B[1, 2] = 1.0, -1.0     # v1 = dx1 - dy1
        B[2, 3], B[3, 3] = 1.0, -1.0     # v2 = dx2 - dy2
        B[4, 4] = 1.0                    # xi = dz
        return B

    signs = np.diag([1.0, 1.0, -1.0, -1.0, 0.0])

    def phi_fn(x):
        B = basis_at(x)
        return B @ signs @ ad.inv(B)

    def g_fn(x):
        B = basis_at(x)
        Binv = ad.inv(B)
        gx = np.zeros((5, 5), dtype=object)
        for a in range(2):
            alpha, beta = Binv[a], Binv[2 + a]
            gx = gx + np.multiply.outer(alpha, beta) \
                + np.multiply.outer(beta, alpha)
        eta = np.zeros(5, dtype=object)
        eta[4] = 1.0
        return gx + np.multiply.outer(eta, eta)

    phi = TensorField(man, (UP, DOWN), phi_fn, "phi")
    xi = constant_field(man, (UP,), [0, 0, 0, 0, 1], "xi")
    eta = constant_field(man, (DOWN,), [0, 0, 0, 0, 1], "eta")
    g = TensorField(man, (DOWN, DOWN), g_fn, "g")
    s = PacStructure(phi, xi, eta, g, "twisted-pac")
    return ZooEntry("twisted-pac", man, s,
                    _expected(True, False, False, False, False, False),
                    "Flat model with the (+1)-eigenplane boosted by cosh/sinh "
                    "of y1; phi^2 = id on the horizontal distribution but the "
                    "eigen-distributions are non-integrable.")


for _builder in (_flat_pac, _heis_para, _heis_para_frame, _solv_para,
                 _sl2_para, _heis_para_5, _twisted_pac):
    _register(_builder())
