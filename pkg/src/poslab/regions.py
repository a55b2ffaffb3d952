"""Exact vanishing-region computation: lambda_0 ratios, quadrilaterals, strips.

Everything here is exact rational arithmetic (fractions.Fraction); floating
point is deliberately banned so that boundary pairs, which the theorems
include, are decided reproducibly with <= comparisons.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

from .errors import ParamDomainError

THEOREMS = ("main1", "globally_generated", "ample_nef", "griffiths")

_ALIASES = {
    "main1": "main1",
    "gg": "globally_generated",
    "globally_generated": "globally_generated",
    "ample": "ample_nef",
    "ample_nef": "ample_nef",
    "griffiths": "griffiths",
}


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclasses.dataclass(frozen=True)
class TheoremParams:
    n: int
    r: int
    k: int
    m: int
    theorem: str
    eps1: Fraction | None = None
    eps2: Fraction | None = None

    def __post_init__(self):
        t = _ALIASES.get(self.theorem)
        if t is None:
            raise ParamDomainError(f"unknown theorem {self.theorem!r}")
        object.__setattr__(self, "theorem", t)
        if self.n < 1 or self.r < 1 or self.k < 1:
            raise ParamDomainError("need n >= 1, r >= 1, k >= 1")
        if t == "main1":
            if self.eps1 is None or self.eps2 is None:
                raise ParamDomainError("main1 requires eps1 and eps2")
            e1, e2 = _rat(self.eps1), _rat(self.eps2)
            object.__setattr__(self, "eps1", e1)
            object.__setattr__(self, "eps2", e2)
            if e1 > e2:
                raise ParamDomainError("eps1 <= eps2 must hold")
            if self.m + (self.r + self.k) * e1 <= 0:
                raise ParamDomainError("m+(r+k)*eps1 must be > 0 (positivity of the twist)")
        elif t in ("globally_generated", "griffiths"):
            if self.m < 1:
                raise ParamDomainError("m >= 1 required for a globally generated/Griffiths bound")
        elif t == "ample_nef":
            if self.m < self.k + self.r + 1:
                raise ParamDomainError("m >= k+r+1 required for the ample/nef bound")


def lambda0(params: TheoremParams) -> Fraction:
    """The exact ratio lambda_0 in [0, 1] selecting the vanishing region."""
    t = params.theorem
    rk = params.r + params.k
    if t == "main1":
        num = params.m + rk * params.eps1
        den = params.m + rk * params.eps2
        lam = _rat(num) / _rat(den)
    elif t in ("globally_generated", "griffiths"):
        lam = Fraction(params.m - 1, params.m - 1 + rk)
    else:  # ample_nef
        lam = Fraction((params.m - 1) - rk, (params.m - 1) + params.r * rk)
    if not 0 <= lam <= 1:
        raise ParamDomainError(f"lambda0 = {lam} outside [0, 1]")
    return lam


@dataclasses.dataclass(frozen=True)
class VanishingRegion:
    n: int
    lambda0: Fraction
    members: frozenset
    c0: Fraction

    @property
    def vertices(self) -> dict:
        return {
            "A0": (0, self.n),
            "A1": (self.n, self.n),
            "A2": (self.n, 0),
            "A3": (self.c0, self.c0),
        }

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "lambda0": str(self.lambda0),
            "members": sorted([p, q] for (p, q) in self.members),
            "vertices": {
                "A0": [0, self.n],
                "A1": [self.n, self.n],
                "A2": [self.n, 0],
                "A3": [str(self.c0), str(self.c0)],
            },
        }


def region(n: int, lam) -> VanishingRegion:
    """Pairs 1 <= p,q <= n with min{(n-q)/p, (n-p)/q} <= lambda0, exactly."""
    lam = _rat(lam)
    if not 0 <= lam <= 1:
        raise ParamDomainError(f"lambda0 = {lam} outside [0, 1]")
    members = set()
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            if min(Fraction(n - q, p), Fraction(n - p, q)) <= lam:
                members.add((p, q))
    return VanishingRegion(n=n, lambda0=lam, members=frozenset(members),
                           c0=Fraction(n, 1) / (1 + lam))


def theorem_region(params: TheoremParams) -> VanishingRegion:
    """Region for a theorem instance, with the m = 1 degenerate branch.

    For the globally-generated and Griffiths flavors with m = 1 the only
    vanishing pair is (n, n); lambda0 = 0 would wrongly include the whole
    p = n and q = n edges there.
    """
    lam = lambda0(params)
    if params.theorem in ("globally_generated", "griffiths") and params.m == 1:
        return VanishingRegion(n=params.n, lambda0=lam,
                               members=frozenset({(params.n, params.n)}),
                               c0=Fraction(params.n, 1) / (1 + lam))
    return region(params.n, lam)


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def strip_threshold(n: int, r: int, k: int, s: int, flavor: str) -> int:
    """Minimal twist power m making the strip p+q >= n+s vanish.

    Globally generated: m >= [(n-s)/2] (r+k) / s + 1 (clamped to m >= 1);
    ample/nef: m >= [(n-s)/2] (r+k)(r+1) / s + (r+1) + k (clamped to
    m >= r+k+1, the flavor's own precondition).
    """
    fl = _ALIASES.get(flavor)
    if fl not in ("globally_generated", "ample_nef"):
        raise ParamDomainError(f"unknown strip flavor {flavor!r}")
    if not 1 <= s <= n:
        raise ParamDomainError("need 1 <= s <= n")
    half = (n - s) // 2
    if fl == "globally_generated":
        bound = Fraction(half * (r + k), s) + 1
        return max(_ceil_frac(bound), 1)
    bound = Fraction(half * (r + k) * (r + 1), s) + (r + 1) + k
    return max(_ceil_frac(bound), r + k + 1)


def strip_width(n: int, lam) -> Fraction:
    """s0 with {p+q >= n+s0} contained in the region: s0 = 2n/(1+lambda0) - n."""
    lam = _rat(lam)
    if not 0 <= lam <= 1:
        raise ParamDomainError(f"lambda0 = {lam} outside [0, 1]")
    return Fraction(2 * n, 1) / (1 + lam) - n


def region_svg(reg: VanishingRegion, cell: int = 24) -> str:
    """Static SVG of the quadrilateral: shaded member cells, marked vertices."""
    n = reg.n
    pad = 40
    size = 2 * pad + n * cell

    def X(p):
        return pad + float(p) * cell

    def Y(q):
        return size - pad - float(q) * cell

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for (p, q) in sorted(reg.members):
        parts.append(
            f'<rect x="{X(p) - cell / 2:.1f}" y="{Y(q) - cell / 2:.1f}" '
            f'width="{cell}" height="{cell}" fill="#9ecae1" stroke="none"/>'
        )
    for t in range(n + 1):
        parts.append(f'<line x1="{X(0):.1f}" y1="{Y(t):.1f}" x2="{X(n):.1f}" y2="{Y(t):.1f}" '
                     f'stroke="#ddd" stroke-width="0.5"/>')
        parts.append(f'<line x1="{X(t):.1f}" y1="{Y(0):.1f}" x2="{X(t):.1f}" y2="{Y(n):.1f}" '
                     f'stroke="#ddd" stroke-width="0.5"/>')
    c0 = float(reg.c0)
    quad = [(0, n), (n, n), (n, 0), (c0, c0)]
    edges = [(quad[0], quad[3]), (quad[3], quad[2]), (quad[0], quad[1]), (quad[1], quad[2])]
    for (a, b) in edges:
        parts.append(f'<line x1="{X(a[0]):.1f}" y1="{Y(a[1]):.1f}" '
                     f'x2="{X(b[0]):.1f}" y2="{Y(b[1]):.1f}" stroke="black" stroke-width="2"/>')
    labels = {"A0": (0, n), "A1": (n, n), "A2": (n, 0), "A3": (c0, c0)}
    for name, (p, q) in labels.items():
        parts.append(f'<circle cx="{X(p):.1f}" cy="{Y(q):.1f}" r="3" fill="black"/>')
        parts.append(f'<text x="{X(p) + 5:.1f}" y="{Y(q) - 5:.1f}" font-size="12">{name}</text>')
    parts.append(f'<text x="{pad}" y="{size - 10}" font-size="11">'
                 f'n={n}, lambda0={reg.lambda0}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
