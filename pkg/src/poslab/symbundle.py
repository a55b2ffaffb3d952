"""Multi-index algebra for symmetric powers S^k E (det E)^m.

Multi-indices are nondecreasing tuples of 1-based frame indices; the monomial
basis e_A of S^k E is *not* orthonormal when indices repeat: its Gram matrix
is the generalized Kronecker delta, diagonal with delta_AA = product of
multiplicity factorials.  All curvature blocks produced here are indices-down
components in that basis, so downstream eigenvalue computations must solve
generalized eigenproblems against the Gram matrix.

All algebra is dtype-agnostic (plain Python loops), so exact Fraction-valued
tensors pass through without rounding.
"""

from __future__ import annotations

import dataclasses
from collections import Counter
from itertools import combinations_with_replacement, permutations
from math import factorial, prod

import numpy as np

from .errors import DimMismatchError, FrameNotNormalizedError, LengthMismatchError
from .geometry import CurvatureTensor, MetricField

MultiIndex = tuple[int, ...]


def sym_basis(r: int, k: int) -> list[MultiIndex]:
    """Lexicographic monomial basis labels of S^k E for rank r."""
    if r < 1 or k < 0:
        raise ValueError("need r >= 1, k >= 0")
    return list(combinations_with_replacement(range(1, r + 1), k))


def generalized_delta(A: MultiIndex, B: MultiIndex) -> int:
    """Permanent of the 0/1 matching matrix M_{jl} = [A_j == B_l].

    Zero unless A and B agree as multisets, in which case it equals the
    product of the multiplicity factorials.
    """
    if len(A) != len(B):
        raise LengthMismatchError(f"multi-index lengths differ: {len(A)} vs {len(B)}")
    ca = Counter(A)
    if ca != Counter(B):
        return 0
    return prod(factorial(m) for m in ca.values())


def gram_diagonal(r: int, k: int) -> list[int]:
    """delta_AA over sym_basis(r, k); the (diagonal) Gram matrix of {e_A}."""
    return [generalized_delta(A, A) for A in sym_basis(r, k)]


def _permanent(M):
    k = len(M)
    if k == 0:
        return 1
    total = 0
    for sigma in permutations(range(k)):
        term = M[sigma[0]][0]
        for j in range(1, k):
            term = term * M[sigma[j]][j]
        total = total + term
    return total


def sym_metric(h, k: int):
    """Induced metric on S^k E: (S^k h)_{A Bbar} = permanent of h[A_j, B_l].

    For h = Id this reduces exactly to the generalized delta Gram matrix.
    Accepts any square array-like (complex or exact object entries).
    """
    h = np.asarray(h)
    basis = sym_basis(h.shape[0], k)
    F = len(basis)
    out = np.empty((F, F), dtype=h.dtype if h.dtype == object else complex)
    for a, A in enumerate(basis):
        for b, B in enumerate(basis):
            out[a, b] = _permanent([[h[x - 1, y - 1] for y in B] for x in A])
    return out


@dataclasses.dataclass
class SymCurvature:
    """Curvature block of S^k E (det E)^m, values[i, j, A, B] indices-down.

    ``basis`` orders the multi-indices, ``gram`` is the diagonal of the basis
    Gram matrix (needed by generalized-eigenvalue positivity checks).
    """

    values: np.ndarray
    basis: list[MultiIndex]
    gram: list[int]
    normalized: bool = True

    @property
    def base_dim(self) -> int:
        return self.values.shape[0]

    @property
    def sym_rank(self) -> int:
        return len(self.basis)

    def hermitian_defect(self) -> float:
        v = self.values.astype(complex)
        return float(np.max(np.abs(v - v.transpose(1, 0, 3, 2).conj())))

    def to_json(self) -> dict:
        v = self.values.astype(complex)
        return {
            "basis": [list(A) for A in self.basis],
            "gram": list(self.gram),
            "values": [[[[ [x.real, x.imag] for x in row] for row in v[i, j]]
                        for j in range(v.shape[1])] for i in range(v.shape[0])],
        }


def _zeros_like_dtype(shape, dtype):
    if dtype == object:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out
    return np.zeros(shape, dtype=complex)


def induced_sym_det_curvature(R: CurvatureTensor, k: int, m) -> SymCurvature:
    """Curvature of S^k E (det E)^m from R by the derivation rule.

    Requires R in a frame with h(p) = Id.  The S^k part is
    <R e_A, e_B> = sum_t sum_gamma R_{i jbar A_t gammabar} * delta_{A', B}
    with A' = A with slot t replaced by gamma; the determinant part adds
    m * delta_AB * tr_fiber R.
    """
    if not R.normalized:
        raise FrameNotNormalizedError("induced_sym_det_curvature needs a normalized-frame tensor")
    V = R.values
    n, r = R.base_dim, R.rank
    basis = sym_basis(r, k)
    index = {A: a for a, A in enumerate(basis)}
    gram = [generalized_delta(A, A) for A in basis]
    F = len(basis)

    out = _zeros_like_dtype((n, n, F, F), V.dtype)
    for a, A in enumerate(basis):
        for t in range(k):
            for gamma in range(1, r + 1):
                nA = tuple(sorted(A[:t] + (gamma,) + A[t + 1:]))
                b = index[nA]
                out[:, :, a, b] = out[:, :, a, b] + V[:, :, A[t] - 1, gamma - 1] * gram[b]
    if m != 0:
        tr = V[:, :, 0, 0]
        for d in range(1, r):
            tr = tr + V[:, :, d, d]
        for a in range(F):
            out[:, :, a, a] = out[:, :, a, a] + m * gram[a] * tr
    return SymCurvature(out, basis=basis, gram=gram, normalized=True)


def twist_by_line(Rsym: SymCurvature, Rline: CurvatureTensor, t) -> SymCurvature:
    """Tensor by L^t: add t * R^L_{i jbar} * delta_AB to every block."""
    if Rline.rank != 1:
        raise DimMismatchError("twist_by_line needs a rank-1 curvature")
    if Rline.base_dim != Rsym.base_dim:
        raise DimMismatchError("base dimensions differ")
    out = Rsym.values.copy()
    line = Rline.values[:, :, 0, 0]
    if t != 0:
        for a, g in enumerate(Rsym.gram):
            out[:, :, a, a] = out[:, :, a, a] + t * g * line
    return SymCurvature(out, basis=list(Rsym.basis), gram=list(Rsym.gram),
                        normalized=Rsym.normalized)


def sym_power_field(E: MetricField, k: int, m) -> MetricField:
    """Explicit metric field z -> S^k h(z) (det h(z))^m on the monomial basis."""
    F = len(sym_basis(E.rank, k))

    def ev(z):
        h = E(z)
        s = sym_metric(h, k)
        if m != 0:
            s = s * np.linalg.det(h).real ** m
        return s

    return MetricField(
        rank=F, base_dim=E.base_dim, evaluate=ev,
        label=f"sym{k}det{m}({E.label})", domain_radius=E.domain_radius,
    )
