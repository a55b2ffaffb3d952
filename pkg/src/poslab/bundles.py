"""Built-in metric fields on CP^n and the declarative JSON metric loader.

Catalogue (string identifiers accepted by :func:`builtin`):

* ``o(l)``          -- the line bundle O(l) with h = (1 + |z|^2)^(-l)
* ``tpn``           -- the tangent bundle with the Fubini-Study metric
* ``tpn_twist(l)``  -- TP^n tensor O(l)
* ``dsum(a,b,...)`` -- the direct sum O(a) + O(b) + ...

User metrics load from a JSON object with keys ``rank``, ``base_dim``,
``entries`` (matrix of expression strings) and optional ``label`` and
``domain_radius``.  Expressions use variables ``z1 .. zn``, the functions
``conj(.)`` and ``abs2(.)``, the imaginary unit ``I``, numeric literals and
``+ - * / **`` with parentheses; nothing else parses.
"""

from __future__ import annotations

import ast
import json
import re

import numpy as np

from .geometry import MetricField, fubini_study


def _norm2(z: np.ndarray) -> float:
    return float(np.vdot(z, z).real)


def o_line(l: float, n: int) -> MetricField:
    """O(l) with the Fubini-Study-induced metric h = (1+|z|^2)^(-l)."""
    def ev(z, l=float(l)):
        return np.array([[(1.0 + _norm2(z)) ** (-l)]], dtype=complex)

    return MetricField(rank=1, base_dim=n, evaluate=ev, label=f"o({l:g})")


def tangent_pn(n: int) -> MetricField:
    """TP^n with the metric induced by the Fubini-Study form."""
    return MetricField(rank=n, base_dim=n, evaluate=lambda z: fubini_study(n, z), label="tpn")


def direct_sum(powers, n: int) -> MetricField:
    """O(a_1) + ... + O(a_r) with the product metric."""
    powers = [float(a) for a in powers]

    def ev(z):
        s = 1.0 + _norm2(z)
        return np.diag([s ** (-a) for a in powers]).astype(complex)

    label = "dsum(" + ",".join(f"{a:g}" for a in powers) + ")"
    return MetricField(rank=len(powers), base_dim=n, evaluate=ev, label=label)


def twist(E: MetricField, l: float) -> MetricField:
    """E tensor O(l): multiply the metric by (1+|z|^2)^(-l)."""
    def ev(z, l=float(l)):
        return E(z) * (1.0 + _norm2(z)) ** (-l)

    return MetricField(
        rank=E.rank,
        base_dim=E.base_dim,
        evaluate=ev,
        label=f"{E.label}*o({l:g})",
        domain_radius=E.domain_radius,
    )


def tangent_pn_twist(l: float, n: int) -> MetricField:
    f = twist(tangent_pn(n), l)
    return MetricField(rank=n, base_dim=n, evaluate=f.evaluate, label=f"tpn_twist({l:g})")


def det_field(E: MetricField) -> MetricField:
    """det E with the induced metric det(h)."""
    def ev(z):
        return np.array([[np.linalg.det(E(z)).real]], dtype=complex)

    return MetricField(
        rank=1, base_dim=E.base_dim, evaluate=ev,
        label=f"det({E.label})", domain_radius=E.domain_radius,
    )


def frame_normalized(E: MetricField, p) -> MetricField:
    """Conjugate E by a constant frame change so the metric at ``p`` is Id."""
    hp = E(p)
    L = np.linalg.cholesky(hp)
    # new frame vectors are the columns of Q; h~ = Q^T h conj(Q) is Id at p
    Q = np.linalg.inv(L).T

    def ev(z):
        return Q.T @ E(z) @ Q.conj()

    return MetricField(
        rank=E.rank, base_dim=E.base_dim, evaluate=ev,
        label=f"{E.label}@norm", domain_radius=E.domain_radius,
    )


_BUILTIN_RE = re.compile(r"^\s*(o|tpn_twist|dsum|tpn)\s*(?:\(([^()]*)\))?\s*$")


def builtin(ident: str, n: int) -> MetricField:
    """Resolve a catalogue identifier like ``o(2)`` or ``dsum(3,-1)``."""
    m = _BUILTIN_RE.match(ident.lower())
    if not m:
        raise KeyError(f"unknown bundle identifier {ident!r}")
    name, args = m.group(1), m.group(2)
    if name == "tpn" and args is None:
        return tangent_pn(n)
    if name == "o" and args is not None:
        return o_line(float(args), n)
    if name == "tpn_twist" and args is not None:
        return tangent_pn_twist(float(args), n)
    if name == "dsum" and args is not None:
        return direct_sum([float(a) for a in args.split(",")], n)
    raise KeyError(f"unknown bundle identifier {ident!r}")


# --- declarative JSON metrics -------------------------------------------------

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.UAdd, ast.USub)


def _compile_expr(src: str, n: int):
    """Compile one metric-entry expression to a callable of z (whitelisted AST)."""
    tree = ast.parse(src, mode="eval")

    names = {f"z{i + 1}": i for i in range(n)}

    def ev(node, z):
        if isinstance(node, ast.Expression):
            return ev(node.body, z)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return complex(node.value)
        if isinstance(node, ast.Name):
            if node.id == "I":
                return 1j
            if node.id in names:
                return z[names[node.id]]
            raise ValueError(f"unknown name {node.id!r} in metric expression")
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            a, b = ev(node.left, z), ev(node.right, z)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            return a ** b
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, _ALLOWED_UNARY):
            v = ev(node.operand, z)
            return v if isinstance(node.op, ast.UAdd) else -v
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            if node.func.id == "conj" and len(node.args) == 1:
                return np.conj(ev(node.args[0], z))
            if node.func.id == "abs2" and len(node.args) == 1:
                v = ev(node.args[0], z)
                return (v * np.conj(v)).real
            raise ValueError(f"unknown function {node.func.id!r} in metric expression")
        raise ValueError(f"disallowed syntax in metric expression: {ast.dump(node)}")

    # validate once against a dummy point so bad expressions fail at load time
    ev(tree, np.zeros(n, dtype=complex) + 0.1)
    return lambda z: ev(tree, z)


def load_metric_json(source) -> MetricField:
    """Build a MetricField from a JSON description (dict, JSON text, or path)."""
    if isinstance(source, dict):
        spec = source
    else:
        text = str(source)
        if text.lstrip().startswith("{"):
            spec = json.loads(text)
        else:
            with open(text) as fh:
                spec = json.load(fh)

    r = int(spec["rank"])
    n = int(spec["base_dim"])
    rows = spec["entries"]
    if len(rows) != r or any(len(row) != r for row in rows):
        raise ValueError("entries must be an r x r matrix of expressions")
    fns = [[_compile_expr(str(rows[a][b]), n) for b in range(r)] for a in range(r)]

    def ev(z):
        return np.array([[fns[a][b](z) for b in range(r)] for a in range(r)], dtype=complex)

    return MetricField(
        rank=r,
        base_dim=n,
        evaluate=ev,
        label=str(spec.get("label", "user")),
        domain_radius=spec.get("domain_radius"),
    )
