"""Charts on CP^n, the Fubini-Study metric and numerical Chern curvature.

Everything lives in the affine chart U_0 = {W_0 != 0} with coordinates
z^i = W_i / W_0.  Metrics are chart-local fields z -> positive Hermitian
r x r matrix.  Curvature components are stored indices-down,

    R_{i jbar alpha betabar} = -d^2 h_{alpha betabar} / dz^i dzbar^j
        + h^{gamma deltabar} (dh_{alpha deltabar}/dz^i)
          (dh_{gamma betabar}/dzbar^j),

with the normalization fixed so that the curvature of the built-in O(1)
metric h = (1 + |z|^2)^{-1} equals the stored Fubini-Study matrix exactly.
Differentiation is 4th-order central differencing in the 2n real
coordinates, with d/dz = (d/dx - i d/dy)/2.
"""

from __future__ import annotations

import dataclasses
from typing import Callable

import numpy as np

from .errors import SingularMetricError, StencilOutOfChartError

HERMITIAN_ATOL = 1e-12

# 4th-order central first-derivative stencil.
_STENCIL_COEF = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
_STENCIL_OFFS = (-2, -1, 1, 2)


def as_point(z, n: int) -> np.ndarray:
    """Coerce ``z`` to a length-``n`` complex chart point."""
    p = np.atleast_1d(np.asarray(z, dtype=complex))
    if p.shape != (n,):
        raise ValueError(f"chart point must have {n} coordinates, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("chart point has non-finite coordinates")
    return p


def check_hermitian(a: np.ndarray, atol: float = HERMITIAN_ATOL) -> None:
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.conj().T)) > atol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")


@dataclasses.dataclass(frozen=True)
class HermitianForm:
    """An r x r Hermitian matrix, e.g. a metric value h_{alpha betabar}."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("HermitianForm entries must be square")
        check_hermitian(a)
        object.__setattr__(self, "entries", a)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def is_positive_definite(self) -> bool:
        return bool(np.min(self.eigenvalues()) > 0)


@dataclasses.dataclass(frozen=True)
class MetricField:
    """Chart-local Hermitian metric field of rank ``rank`` over CP^n.

    ``evaluate`` maps a chart point (complex length-n array) to an (r, r)
    complex Hermitian positive matrix.  ``domain_radius``, when set, declares
    the validity region |z| < domain_radius; finite-difference stencils that
    leave it raise StencilOutOfChartError.
    """

    rank: int
    base_dim: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    label: str = ""
    domain_radius: float | None = None

    def __call__(self, z) -> np.ndarray:
        p = as_point(z, self.base_dim)
        if self.domain_radius is not None and np.linalg.norm(p) >= self.domain_radius:
            raise StencilOutOfChartError(
                f"point |z|={np.linalg.norm(p):.6g} outside declared domain "
                f"|z| < {self.domain_radius} of metric {self.label!r}"
            )
        h = np.asarray(self.evaluate(p), dtype=complex)
        if h.shape != (self.rank, self.rank):
            raise ValueError(f"metric {self.label!r} returned shape {h.shape}")
        return h

    def form_at(self, z) -> HermitianForm:
        return HermitianForm(self(z))


@dataclasses.dataclass
class CurvatureTensor:
    """Pointwise Chern curvature, values[i, j, alpha, beta] = R_{i jbar alpha betabar}.

    ``normalized`` flags tensors expressed in a frame with h(p) = Id (and,
    when produced by normalize_at_point with a polarization, coordinates
    with g(p) = Id); the positivity and symmetric-power routines require it.
    """

    values: np.ndarray
    normalized: bool = False

    @property
    def base_dim(self) -> int:
        return self.values.shape[0]

    @property
    def rank(self) -> int:
        return self.values.shape[2]

    def hermitian_defect(self) -> float:
        v = self.values
        return float(np.max(np.abs(v - v.transpose(1, 0, 3, 2).conj())))

    def check_symmetry(self, rtol: float = 1e-9) -> None:
        scale = max(1.0, float(np.max(np.abs(self.values))))
        if self.hermitian_defect() > rtol * scale:
            raise ValueError("curvature tensor violates Hermitian symmetry")


def fubini_study(n: int, z) -> np.ndarray:
    """Fubini-Study metric g_{i jbar}(z) = d_i dbar_j log(1 + |z|^2) on U_0.

    In this normalization g equals the curvature form of the built-in O(1)
    metric, and at the origin g = Id.
    """
    if n < 1:
        raise ValueError("base dimension must be >= 1")
    p = as_point(z, n)
    s = 1.0 + float(np.vdot(p, p).real)
    return np.eye(n, dtype=complex) / s - np.outer(p.conj(), p) / s**2


def fubini_study_form(n: int, z) -> HermitianForm:
    return HermitianForm(fubini_study(n, z))


def _d_dir(f, z: np.ndarray, direction: np.ndarray, step: float) -> np.ndarray:
    """4th-order directional derivative of f along a real direction."""
    acc = None
    for c, o in zip(_STENCIL_COEF, _STENCIL_OFFS):
        val = c * f(z + (o * step) * direction)
        acc = val if acc is None else acc + val
    return acc / step


def _d_z(f, z: np.ndarray, i: int, step: float) -> np.ndarray:
    """Wirtinger derivative d/dz^i of a matrix-valued function."""
    e = np.zeros(len(z), dtype=complex)
    e[i] = 1.0
    dx = _d_dir(f, z, e, step)
    dy = _d_dir(f, z, 1j * e, step)
    return 0.5 * (dx - 1j * dy)


def _d_zbar(f, z: np.ndarray, j: int, step: float) -> np.ndarray:
    e = np.zeros(len(z), dtype=complex)
    e[j] = 1.0
    dx = _d_dir(f, z, e, step)
    dy = _d_dir(f, z, 1j * e, step)
    return 0.5 * (dx + 1j * dy)


def chern_curvature(h: MetricField, p, step: float = 1e-3) -> CurvatureTensor:
    """Finite-difference Chern curvature of (E, h) at ``p``, in the frame of h.

    Raises SingularMetricError when h(p) is not invertible to working
    precision, StencilOutOfChartError when a stencil point leaves the
    declared domain of a user metric.
    """
    n = h.base_dim
    r = h.rank
    z0 = as_point(p, n)

    H = h(z0)
    ev = np.linalg.eigvalsh(H)
    if np.min(np.abs(ev)) <= 1e-12 * max(1.0, np.max(np.abs(ev))):
        raise SingularMetricError(f"metric {h.label!r} singular at the evaluation point")
    Hinv = np.linalg.inv(H)

    def f(z):
        return h(z)

    dh = [_d_z(f, z0, i, step) for i in range(n)]
    R = np.empty((n, n, r, r), dtype=complex)
    for j in range(n):
        def dbar_j(z, j=j):
            return _d_zbar(f, z, j, step)

        dhbar_j = dh[j].conj().T
        for i in range(n):
            dd = _d_z(dbar_j, z0, i, step)
            R[i, j] = -dd + dh[i] @ Hinv @ dhbar_j
    return CurvatureTensor(R, normalized=False)


def _orthonormalizer(a: np.ndarray) -> np.ndarray:
    """Matrix P with P^T a conj(P) = Id for Hermitian positive ``a``.

    This is the change making the indices-down pairing sum a_{i jbar} u^i
    conj(u^j) the standard norm in the new components.
    """
    try:
        L = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise SingularMetricError("matrix not positive definite") from exc
    return np.linalg.inv(L).T


def normalize_at_point(
    h: MetricField,
    g: MetricField | np.ndarray | None,
    p,
    step: float = 1e-3,
) -> tuple[CurvatureTensor, np.ndarray, np.ndarray]:
    """Curvature of h at p in g-orthonormal coordinates and h-orthonormal frame.

    ``g`` is the polarization metric on the base (a MetricField of rank n, a
    plain n x n matrix value, or None for the identity).  Returns the
    normalized tensor and the coordinate / frame change matrices (P, Q):
    new tangent vectors are columns of P, new frame vectors columns of Q.
    """
    n = h.base_dim
    z0 = as_point(p, n)
    R = chern_curvature(h, z0, step=step)

    if g is None:
        gp = np.eye(n, dtype=complex)
    elif isinstance(g, MetricField):
        gp = g(z0)
    else:
        gp = np.asarray(g, dtype=complex)
    hp = h(z0)
    P = _orthonormalizer(gp)
    Q = _orthonormalizer(hp)
    vals = np.einsum("ijab,ix,jy,au,bv->xyuv", R.values, P, P.conj(), Q, Q.conj())
    return CurvatureTensor(vals, normalized=True), P, Q


def sample_points(n: int, count: int, seed: int = 0, radius: float = 2.0) -> list[np.ndarray]:
    """Origin plus radial-uniform points with |z| <= radius, deterministic."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    pts = [np.zeros(n, dtype=complex)]
    while len(pts) < count:
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        norm = np.linalg.norm(v)
        if norm < 1e-12:
            continue
        pts.append(v / norm * (radius * rng.random()))
    return pts
