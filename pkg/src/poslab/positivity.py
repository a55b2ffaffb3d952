"""Positivity certification and the Bochner curvature term.

All routines act on normalized-frame curvature tensors (h(p) = Id, and for
quantities measured against a polarization, g(p) = Id as well).  Symmetric
power blocks come with a diagonal Gram matrix; eigenvalue computations then
solve the corresponding generalized problem.

Griffiths minimization is a non-convex biquadratic problem; we use
alternating smallest-eigenvector iteration with random restarts.  A
nonpositive minimum is a certificate (the witness reproduces it); a positive
minimum is heuristic and labeled as such.
"""

from __future__ import annotations

import dataclasses
from bisect import bisect_left
from itertools import combinations

import numpy as np
import scipy.linalg

from .errors import (
    BidegreeError,
    FrameNotNormalizedError,
    NonpositivePolarizationError,
)
from .geometry import CurvatureTensor, MetricField, as_point, chern_curvature, normalize_at_point, sample_points
from .symbundle import SymCurvature, induced_sym_det_curvature, twist_by_line


def _values_and_gram(R, gram=None):
    if isinstance(R, SymCurvature):
        if not R.normalized:
            raise FrameNotNormalizedError("positivity checks need a normalized-frame tensor")
        return R.values.astype(complex), np.asarray(R.gram, dtype=float)
    if isinstance(R, CurvatureTensor):
        if not R.normalized:
            raise FrameNotNormalizedError("positivity checks need a normalized-frame tensor")
        g = np.ones(R.rank) if gram is None else np.asarray(gram, dtype=float)
        return R.values.astype(complex), g
    raise TypeError("expected CurvatureTensor or SymCurvature")


@dataclasses.dataclass
class PositivityReport:
    mode: str
    min_value: float
    witness: dict
    points: list
    certified_sign: str

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "min_value": self.min_value,
            "witness": self.witness,
            "points": self.points,
            "certified_sign": self.certified_sign,
        }


@dataclasses.dataclass
class BoundednessCertificate:
    eps1: float
    eps2: float
    strict_low: bool
    strict_high: bool
    witness_low: dict
    witness_high: dict
    points: list

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def _cvec(v):
    return [[float(x.real), float(x.imag)] for x in v]


def griffiths_value(R, u, v, gram=None) -> float:
    """Q(u, v) = sum R_{i jbar A Bbar} u^i conj(u^j) v^A conj(v^B)."""
    V, _ = _values_and_gram(R, gram)
    val = np.einsum("ijab,i,j,a,b->", V, u, np.conj(u), v, np.conj(v))
    return float(val.real)


def _griffiths_extremum(V, g, restarts, tol, seed, maximize):
    n = V.shape[0]
    F = V.shape[2]
    rng = np.random.Generator(np.random.Philox(key=seed))
    sqg = np.sqrt(g)
    pick = -1 if maximize else 0
    better = (lambda a, b: a > b) if maximize else (lambda a, b: a < b)
    best_val, best_u, best_v = None, None, None
    for _ in range(max(1, restarts)):
        x = rng.standard_normal(F) + 1j * rng.standard_normal(F)
        x /= np.sqrt(np.sum(g * np.abs(x) ** 2))
        v = x
        prev = None
        for _ in range(200):
            # fix v, extremize over unit u
            Wu = np.einsum("ijab,a,b->ij", V, v, np.conj(v))
            Wu = 0.5 * (Wu + Wu.conj().T)
            ew, evec = np.linalg.eigh(Wu)
            u = evec[:, pick].conj()
            # fix u, extremize over v with <v, v>_G = 1
            Mv = np.einsum("ijab,i,j->ab", V, u, np.conj(u))
            Mv = 0.5 * (Mv + Mv.conj().T)
            B = Mv / np.outer(sqg, sqg)
            ew2, evec2 = np.linalg.eigh(B)
            v = (evec2[:, pick] / sqg).conj()
            val = float(ew2[pick])
            if prev is not None and abs(val - prev) < tol * (1.0 + abs(val)):
                break
            prev = val
        if best_val is None or better(val, best_val):
            best_val, best_u, best_v = val, u, v
    return best_val, best_u, best_v


def griffiths_min(R, restarts: int = 32, tol: float = 1e-10, seed: int = 0,
                  gram=None, maximize: bool = False) -> PositivityReport:
    """Extremize the Griffiths biquadratic over unit u, unit v (multi-start).

    For ``maximize=False`` a nonpositive minimum is certified by its witness;
    a positive result is heuristic (finitely many restarts).
    """
    V, g = _values_and_gram(R, gram)
    val, u, v = _griffiths_extremum(V, g, restarts, tol, seed, maximize)
    if maximize:
        sign = "positive" if val > 0 else "nonpositive_found"
    else:
        sign = "nonpositive_found" if val <= 0 else "positive"
    return PositivityReport(
        mode="griffiths_max" if maximize else "griffiths",
        min_value=val,
        witness={"u": _cvec(u), "v": _cvec(v)},
        points=[],
        certified_sign=sign,
    )


def _pair_matrix(V, dual: bool) -> np.ndarray:
    n, _, F, _ = V.shape
    if dual:
        V = V.transpose(0, 1, 3, 2)
    return V.transpose(0, 2, 1, 3).reshape(n * F, n * F)


def _eig_report(V, g, dual: bool, mode: str) -> PositivityReport:
    n, F = V.shape[0], V.shape[2]
    M = _pair_matrix(V, dual)
    M = 0.5 * (M + M.conj().T)
    Wg = np.kron(np.eye(n), np.diag(g))
    ew, evec = scipy.linalg.eigh(M, Wg)
    val = float(ew[0])
    u = evec[:, 0].conj().reshape(n, F)
    return PositivityReport(
        mode=mode,
        min_value=val,
        witness={"u": [_cvec(row) for row in u]},
        points=[],
        certified_sign="positive" if val > 0 else "nonpositive_found",
    )


def nakano_min(R, gram=None) -> PositivityReport:
    """Smallest eigenvalue of M_{(iA),(jB)} = R_{i jbar A Bbar} (vs the Gram)."""
    V, g = _values_and_gram(R, gram)
    return _eig_report(V, g, dual=False, mode="nakano")


def dual_nakano_min(R, gram=None) -> PositivityReport:
    """Smallest eigenvalue of N_{(iA),(jB)} = R_{i jbar B Abar} (vs the Gram)."""
    V, g = _values_and_gram(R, gram)
    return _eig_report(V, g, dual=True, mode="dual_nakano")


def polarization_form(L: MetricField, p, step: float = 1e-3) -> np.ndarray:
    """omega_L at p as an n x n matrix: frame-normalized curvature of L."""
    z0 = as_point(p, L.base_dim)
    R = chern_curvature(L, z0, step=step)
    hL = L(z0)[0, 0].real
    gmat = R.values[:, :, 0, 0] / hL
    if np.min(np.linalg.eigvalsh(0.5 * (gmat + gmat.conj().T))) <= 0:
        raise NonpositivePolarizationError(
            f"curvature of {L.label!r} is not positive at the sampled point"
        )
    return gmat


def boundedness_scan(E: MetricField, L: MetricField, points=None,
                     n_points: int = 50, seed: int = 0, restarts: int = 8,
                     tol: float = 1e-10, step: float = 1e-3) -> BoundednessCertificate:
    """Scan sample points for the extremal Griffiths values of E against omega_L.

    eps1 / eps2 are the global min / max of the normalized biquadratic
    Q(u, v) / omega_L(u, ubar) over the samples; strictness flags record
    whether the opposite bound witnesses a strictly different value, i.e.
    whether Theta - eps * omega_L x Id is not identically zero on the scan.
    """
    if points is None:
        points = sample_points(E.base_dim, n_points, seed=seed)
    eps1 = np.inf
    eps2 = -np.inf
    wit_low: dict = {}
    wit_high: dict = {}
    pts_json = []
    for p in points:
        g = polarization_form(L, p, step=step)
        Rn, _, _ = normalize_at_point(E, g, p, step=step)
        lo = griffiths_min(Rn, restarts=restarts, tol=tol, seed=seed)
        hi = griffiths_min(Rn, restarts=restarts, tol=tol, seed=seed, maximize=True)
        pts_json.append(_cvec(p))
        if lo.min_value < eps1:
            eps1 = lo.min_value
            wit_low = {"point": _cvec(p), **lo.witness, "value": lo.min_value}
        if hi.min_value > eps2:
            eps2 = hi.min_value
            wit_high = {"point": _cvec(p), **hi.witness, "value": hi.min_value}
    strict = eps2 - eps1 > 1e-9
    return BoundednessCertificate(
        eps1=float(eps1),
        eps2=float(eps2),
        strict_low=strict,
        strict_high=strict,
        witness_low=wit_low,
        witness_high=wit_high,
        points=pts_json,
    )


def sym_twisted_curvature_at(E: MetricField, L: MetricField, p, k: int, m,
                             l, step: float = 1e-3) -> SymCurvature:
    """Normalized curvature block of S^k E (det E)^m L^l at a point.

    Coordinates are orthonormalized against omega_L, so the line-bundle twist
    contributes l * Id exactly.
    """
    z0 = as_point(p, E.base_dim)
    g = polarization_form(L, z0, step=step)
    Rn, _, _ = normalize_at_point(E, g, z0, step=step)
    Rsym = induced_sym_det_curvature(Rn, k, m)
    if l != 0:
        n = E.base_dim
        eye = CurvatureTensor(np.eye(n, dtype=complex).reshape(n, n, 1, 1),
                              normalized=True)
        Rsym = twist_by_line(Rsym, eye, l)
    return Rsym


# --- (p,q)-forms and the Bochner curvature term -------------------------------


@dataclasses.dataclass
class Form:
    """A (p, q)-form with values in a rank-F bundle, canonical representative.

    coeffs[x, y, A] is the coefficient on dz^I wedge dzbar^J tensor e_A for
    I = I_list[x], J = J_list[y]; index sets are strictly increasing tuples
    of 0-based tangent indices.
    """

    n: int
    p: int
    q: int
    fiber_rank: int
    coeffs: np.ndarray

    def __post_init__(self):
        if not (0 <= self.p <= self.n and 0 <= self.q <= self.n):
            raise BidegreeError(f"bidegree ({self.p},{self.q}) out of range for n={self.n}")
        self.I_list = list(combinations(range(self.n), self.p))
        self.J_list = list(combinations(range(self.n), self.q))
        self.I_pos = {I: x for x, I in enumerate(self.I_list)}
        self.J_pos = {J: y for y, J in enumerate(self.J_list)}
        expect = (len(self.I_list), len(self.J_list), self.fiber_rank)
        if self.coeffs.shape != expect:
            raise ValueError(f"coefficient array must have shape {expect}")

    @classmethod
    def zero(cls, n, p, q, fiber_rank=1):
        from math import comb
        return cls(n, p, q, fiber_rank,
                   np.zeros((comb(n, p), comb(n, q), fiber_rank), dtype=complex))

    @classmethod
    def random(cls, n, p, q, fiber_rank=1, seed=0, normalize=True):
        rng = np.random.Generator(np.random.Philox(key=seed))
        u = cls.zero(n, p, q, fiber_rank)
        c = rng.standard_normal(u.coeffs.shape) + 1j * rng.standard_normal(u.coeffs.shape)
        if normalize:
            c /= np.linalg.norm(c)
        u.coeffs = c
        return u

    def norm_sq(self, gram=None) -> float:
        w = np.ones(self.fiber_rank) if gram is None else np.asarray(gram, dtype=float)
        return float(np.sum(np.abs(self.coeffs) ** 2 * w))


def _insert(i: int, S: tuple) -> tuple | None:
    """Insert index i into strictly increasing S; (sign, sorted tuple) or None."""
    if i in S:
        return None
    pos = bisect_left(S, i)
    sign = -1 if pos % 2 else 1
    return sign, S[:pos] + (i,) + S[pos:]


def curvature_term(R, u: Form) -> float:
    """Bochner curvature term T(u, u) = <[R, Lambda] u, u> at a normalized point.

    Three-sum expansion with antisymmetric sign bookkeeping; the result is
    real up to roundoff.
    """
    V, _ = _values_and_gram(R)
    n = V.shape[0]
    if u.n != n:
        raise ValueError("form and curvature base dimensions differ")
    if u.fiber_rank != V.shape[2]:
        raise ValueError("form fiber rank does not match curvature")
    p, q = u.p, u.q
    c = u.coeffs

    total = 0.0 + 0.0j
    # term 1: contract one barred index of u against R
    if q >= 1:
        for S in combinations(range(n), q - 1):
            ins = [(_insert(i, S), i) for i in range(n)]
            ins = [(sg, J, i) for (res, i) in ins if res for sg, J in [res]]
            for sg_i, J_i, i in ins:
                yi = u.J_pos[J_i]
                for sg_j, J_j, j in ins:
                    yj = u.J_pos[J_j]
                    total += sg_i * sg_j * np.einsum(
                        "ab,xa,xb->", V[i, j], c[:, yi, :], c[:, yj, :].conj())
    # term 2: contract one unbarred index
    if p >= 1:
        for Rm in combinations(range(n), p - 1):
            ins = [(_insert(i, Rm), i) for i in range(n)]
            ins = [(sg, I, i) for (res, i) in ins if res for sg, I in [res]]
            for sg_j, I_j, j in ins:
                xj = u.I_pos[I_j]
                for sg_i, I_i, i in ins:
                    xi = u.I_pos[I_i]
                    total += sg_j * sg_i * np.einsum(
                        "ab,ya,yb->", V[i, j], c[xj, :, :], c[xi, :, :].conj())
    # term 3: fiber trace part
    tr = V[np.arange(n), np.arange(n)]  # (n, F, F)
    total -= np.einsum("iab,xya,xyb->", tr, c, c.conj())

    scale = max(1.0, float(np.max(np.abs(c))) ** 2 * float(np.max(np.abs(V))))
    if abs(total.imag) > 1e-8 * scale:
        raise ValueError(f"curvature term has non-real value {total}")
    return float(total.real)


def line_curvature_tensor(phi) -> CurvatureTensor:
    """Wrap an n x n Hermitian matrix as a normalized rank-1 curvature."""
    phi = np.asarray(phi, dtype=complex)
    n = phi.shape[0]
    return CurvatureTensor(phi.reshape(n, n, 1, 1), normalized=True)


def eigenvalue_bound(phi, p: int, q: int) -> float:
    """max{p l1 - (n-q) ln, q l1 - (n-p) ln} for the eigenvalues of phi."""
    lam = np.linalg.eigvalsh(np.asarray(phi, dtype=complex))
    n = len(lam)
    l1, ln = float(lam[0]), float(lam[-1])
    return max(p * l1 - (n - q) * ln, q * l1 - (n - p) * ln)


def estimate_check(phi, p: int, q: int, trials: int = 1000, seed: int = 0) -> dict:
    """Randomized check of T(u,u) >= bound * |u|^2 for the rank-1 case."""
    phi = np.asarray(phi, dtype=complex)
    n = phi.shape[0]
    if not (0 <= p <= n and 0 <= q <= n):
        raise BidegreeError(f"bidegree ({p},{q}) out of range for n={n}")
    R = line_curvature_tensor(phi)
    bound = eigenvalue_bound(phi, p, q)
    worst = np.inf
    for t in range(trials):
        u = Form.random(n, p, q, 1, seed=(seed, t))
        slack = curvature_term(R, u) - bound * u.norm_sq()
        worst = min(worst, slack)
    return {"n": n, "p": p, "q": q, "bound": bound, "trials": trials,
            "worst_slack": float(worst)}
