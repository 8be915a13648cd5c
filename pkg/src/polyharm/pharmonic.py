"""Construction of the two explicit p-harmonic families and exact certification.

Given a seed with finite tension tree {h^i_alpha} of degree r, the two families

    phi_p = h log(t)^(p-1)     + sum_{i<=r, alpha} h^i_alpha f^i_alpha(t, p)
    psi_p = h t^n log(t)^(p-1) + sum_{i<=r, alpha} h^i_alpha g^i_alpha(t, p)

are assembled from the branch coefficient functions f/g (rational combinations
of t-powers and log-powers indexed by integer compositions).  The phi family
requires 2 Lambda^k_alpha != n along every branch with a nonzero node; a
violation raises Resonance and callers fall back to psi, which is always
defined.

Certification never trusts the construction: `verify` iterates the operator
exactly and reports the least vanishing order, and `recurrence_check` tests
the two-step iteration identities the families satisfy.  For radial seeds the
nodes are treated as formal, linearly independent symbols and verification
reduces to t-only identities (`verify_formal`); the independence assumption is
checked against the actual node functions before any "nonzero" conclusion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

from .algebra import AlgebraSpec
from .errors import DependentNodes, KindMismatch, Resonance, ZeroCombination
from .expr import MixedExpr
from .laplacian import tau, tau_t
from .poly import Monomial, Polynomial
from .tension import MultiIndex, TensionTree


def compositions(j: int, i: int) -> list[tuple[int, ...]]:
    """All i-tuples of non-negative integers summing to j, lexicographic.

    The empty tuple is the unique composition of 0 into 0 parts; there is no
    composition of j > 0 into 0 parts.
    """
    if j < 0:
        return []
    if i == 0:
        return [()] if j == 0 else []
    if i == 1:
        return [(j,)]
    out = []
    for head in range(j + 1):
        for rest in compositions(j - head, i - 1):
            out.append((head,) + rest)
    return out


def prefix_sums(spec: AlgebraSpec, alpha: MultiIndex) -> list[Fraction]:
    """Lambda^k_alpha = lambda_{alpha_1} + ... + lambda_{alpha_k}, k = 1..len(alpha)."""
    sums: list[Fraction] = []
    acc = Fraction(0)
    for layer in alpha:
        acc += spec.lam(layer)
        sums.append(acc)
    return sums


@lru_cache(maxsize=None)
def _coeff_function(
    spec: AlgebraSpec, alpha: MultiIndex, p: int, family: str
) -> MixedExpr:
    i = len(alpha)
    n = spec.homogeneous_dim
    if i == 0:
        if family == "phi":
            return MixedExpr.log_t(p - 1)
        return MixedExpr.t_power(n, p - 1)
    lams = prefix_sums(spec, alpha)
    if family == "phi":
        denoms = [2 * lam - n for lam in lams]
        for k, d in enumerate(denoms, start=1):
            if d == 0:
                raise Resonance(alpha, k)
        exponent = 2 * lams[-1]
    else:
        denoms = [2 * lam + n for lam in lams]
        exponent = 2 * lams[-1] + n
    prefactor = Fraction(1)
    for lam in lams:
        prefactor /= lam
    sign_i = -1 if i % 2 else 1
    out: dict = {}
    falling = Fraction(1)  # (p-1)(p-2)...(p-j)
    for j in range(p):
        if j:
            falling *= p - j
        scale = sign_i * (-1 if j % 2 else 1) * Fraction(2) ** (j - i) * falling
        total = Fraction(0)
        for parts in compositions(j, i):
            denom = Fraction(1)
            for d, l in zip(denoms, parts):
                denom *= d ** (l + 1)
            total += 1 / denom
        coeff = prefactor * scale * total
        if coeff:
            out[(Monomial.one(), exponent, p - 1 - j)] = coeff
    return MixedExpr(out)


def f_coeff(spec: AlgebraSpec, alpha: MultiIndex, p: int) -> MixedExpr:
    """Branch coefficient of the log family; raises Resonance if 2 Lambda^k = n."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return _coeff_function(spec, tuple(alpha), p, "phi")


def g_coeff(spec: AlgebraSpec, alpha: MultiIndex, p: int) -> MixedExpr:
    """Branch coefficient of the t^n family; always defined."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return _coeff_function(spec, tuple(alpha), p, "psi")


# --- node-symbol expressions (formal mode for radial trees) ---

@dataclass(frozen=True)
class NodeSymbolExpr:
    """Linear combination of abstract node symbols with t-only coefficients.

    The empty multi-index denotes the seed itself.  Used when the nodes are
    treated as formal linearly independent generators, so that operator
    identities reduce to identities among the t-coefficients.
    """

    terms: Mapping[MultiIndex, MixedExpr]

    @classmethod
    def build(cls, terms: Mapping[MultiIndex, MixedExpr]) -> "NodeSymbolExpr":
        return cls({a: e for a, e in terms.items() if not e.is_zero()})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NodeSymbolExpr") -> "NodeSymbolExpr":
        out = dict(self.terms)
        for a, e in other.terms.items():
            out[a] = out.get(a, MixedExpr.zero()) + e
        return NodeSymbolExpr.build(out)

    def scale(self, c: Fraction) -> "NodeSymbolExpr":
        return NodeSymbolExpr.build({a: e * c for a, e in self.terms.items()})

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=lambda a: (len(a), a)):
            label = "h" if not alpha else "h^%d_(%s)" % (
                len(alpha),
                ",".join(map(str, alpha)),
            )
            parts.append(f"[{label}]*({self.terms[alpha].render()})")
        return " + ".join(parts)

    def latex(self, namer=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=lambda a: (len(a), a)):
            if alpha:
                label = ",".join(map(str, alpha))
                symbol = rf"h^{{{len(alpha)}}}_{{({label})}}"
            else:
                symbol = "h"
            parts.append(rf"{symbol} \left({self.terms[alpha].latex(namer)}\right)")
        return " + ".join(parts)


def formal_tau(spec: AlgebraSpec, tree: TensionTree, e: NodeSymbolExpr) -> NodeSymbolExpr:
    """Push the operator through node symbols:
    tau(s_alpha F) = sum_k s_(alpha,k) t^(2 lambda_k) F + s_alpha tau_t(F),
    dropping symbols whose actual node is zero (absent from the tree)."""
    n = spec.homogeneous_dim
    out: dict[MultiIndex, MixedExpr] = {}

    def add(alpha: MultiIndex, val: MixedExpr) -> None:
        out[alpha] = out.get(alpha, MixedExpr.zero()) + val

    for alpha, coeff in e.terms.items():
        add(alpha, tau_t(coeff, n))
        for k in range(1, spec.m + 1):
            child = alpha + (k,)
            if child in tree.nodes:
                add(child, coeff.mul_t_power(2 * spec.lam(k)))
    return NodeSymbolExpr.build(out)


# --- assembly ---

Built = Union[MixedExpr, NodeSymbolExpr]


def build_phi(spec: AlgebraSpec, tree: TensionTree, p: int) -> Built:
    """Assemble the log-family function of order p from a finite tree.

    Polynomial trees give a concrete MixedExpr; radial trees give the formal
    node-symbol form (their nodes are not polynomial).  Raises Resonance if a
    branch with a nonzero node violates the side condition.
    """
    return _build(spec, tree, p, "phi")


def build_psi(spec: AlgebraSpec, tree: TensionTree, p: int) -> Built:
    """Assemble the t^n-family function of order p; no side condition."""
    return _build(spec, tree, p, "psi")


def _build(spec: AlgebraSpec, tree: TensionTree, p: int, family: str) -> Built:
    if p < 1:
        raise ValueError("p must be >= 1")
    root_coeff = _coeff_function(spec, (), p, family)
    if tree.kind == "polynomial":
        out = MixedExpr.from_polynomial(tree.seed) * root_coeff
        for alpha in tree.branches():
            coeff = _coeff_function(spec, alpha, p, family)
            out = out + MixedExpr.from_polynomial(tree.nodes[alpha]) * coeff
        return out
    terms: dict[MultiIndex, MixedExpr] = {(): root_coeff}
    for alpha in tree.branches():
        terms[alpha] = _coeff_function(spec, alpha, p, family)
    return NodeSymbolExpr.build(terms)


def combine(a: Fraction, b: Fraction, phi: Built, psi: Built) -> Built:
    """a*phi + b*psi; (a, b) = (0, 0) is rejected."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 and b == 0:
        raise ZeroCombination("the zero combination is not a p-harmonic candidate")
    if isinstance(phi, MixedExpr) != isinstance(psi, MixedExpr):
        raise KindMismatch("cannot combine a concrete and a formal expression")
    if isinstance(phi, MixedExpr):
        return phi * a + psi * b
    return phi.scale(a) + psi.scale(b)


# --- certification ---

@dataclass(frozen=True)
class HarmonicCertificate:
    """Outcome of exact operator iteration on a candidate function.

    verified_order is the least q with tau^q = 0, or None when no q <= p
    vanishes ("exceeds p").  proper means exactly order p: tau^p = 0 and
    tau^(p-1) != 0.
    """

    kind: str
    p: int
    seed: str
    verified_order: int | None
    proper: bool
    residual_pminus1: Built
    residual_p: Built

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "seed": self.seed,
            "verified_order": (
                self.verified_order if self.verified_order is not None else "exceeds p"
            ),
            "proper": self.proper,
            "residual_pminus1_nonzero": not self.residual_pminus1.is_zero(),
        }


def verify(
    spec: AlgebraSpec,
    e: MixedExpr,
    p: int,
    kind: str = "expression",
    seed: str = "",
) -> HarmonicCertificate:
    """Apply the operator up to p times with exact zero tests."""
    if p < 1:
        raise ValueError("p must be >= 1")
    iterates = [e]
    for _ in range(p):
        if iterates[-1].is_zero():
            break
        iterates.append(tau(spec, iterates[-1]))
    verified_order: int | None = None
    for q, image in enumerate(iterates):
        if image.is_zero():
            verified_order = q
            break

    def power(q: int) -> MixedExpr:
        return iterates[q] if q < len(iterates) else MixedExpr.zero()

    return HarmonicCertificate(
        kind=kind,
        p=p,
        seed=seed,
        verified_order=verified_order,
        proper=verified_order == p,
        residual_pminus1=power(p - 1),
        residual_p=power(p),
    )


def _node_vectors(tree: TensionTree) -> list[dict]:
    """Seed and node functions as sparse coordinate vectors for the rank test."""
    vectors = []
    entries = [tree.seed] + [tree.nodes[a] for a in tree.branches()]
    for node in entries:
        if isinstance(node, Polynomial):
            vectors.append(dict(node.terms))
        else:
            vectors.append(dict(node.radial.terms))
    return vectors


def _linearly_independent(vectors: list[dict]) -> bool:
    """Exact Gaussian elimination over the rationals on sparse vectors."""
    pivots: list[tuple[object, dict]] = []
    for vec in vectors:
        vec = dict(vec)
        for key, pivot in pivots:
            if key in vec:
                factor = vec[key] / pivot[key]
                for k2, v2 in pivot.items():
                    acc = vec.get(k2, Fraction(0)) - factor * v2
                    if acc:
                        vec[k2] = acc
                    else:
                        vec.pop(k2, None)
        if not vec:
            return False
        key = next(iter(sorted(vec, key=repr)))
        pivots.append((key, vec))
    return True


def verify_formal(
    spec: AlgebraSpec,
    e: NodeSymbolExpr,
    tree: TensionTree,
    p: int,
    kind: str = "expression",
    seed: str = "",
) -> HarmonicCertificate:
    """Certify in node-symbol mode: iterate the formal operator and test the
    vanishing of every symbol coefficient.

    A vanishing formal iterate is sound unconditionally.  Concluding that a
    NONZERO formal iterate means a nonzero function additionally requires the
    actual node functions to be linearly independent; if they are not,
    DependentNodes is raised instead of returning a certificate that relies on
    the false assumption.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    valid = {()} | set(tree.nodes)
    e = NodeSymbolExpr.build({a: c for a, c in e.terms.items() if a in valid})
    iterates = [e]
    for _ in range(p):
        if iterates[-1].is_zero():
            break
        iterates.append(formal_tau(spec, tree, iterates[-1]))
    verified_order: int | None = None
    for q, image in enumerate(iterates):
        if image.is_zero():
            verified_order = q
            break
    relies_on_independence = verified_order is None or verified_order == p
    if relies_on_independence and not _linearly_independent(_node_vectors(tree)):
        raise DependentNodes(
            "tree nodes are linearly dependent; formal nonzero conclusions are unsound"
        )

    def power(q: int) -> NodeSymbolExpr:
        return iterates[q] if q < len(iterates) else NodeSymbolExpr.build({})

    return HarmonicCertificate(
        kind=kind,
        p=p,
        seed=seed,
        verified_order=verified_order,
        proper=verified_order == p,
        residual_pminus1=power(p - 1),
        residual_p=power(p),
    )


def certify_family(
    spec: AlgebraSpec, tree: TensionTree, p: int, family: str, seed: str = ""
) -> HarmonicCertificate:
    """Build one family member and certify it with the appropriate verifier."""
    builder = build_phi if family == "phi" else build_psi
    built = builder(spec, tree, p)
    if isinstance(built, MixedExpr):
        return verify(spec, built, p, kind=family, seed=seed)
    return verify_formal(spec, built, tree, p, kind=family, seed=seed)


def recurrence_check(spec: AlgebraSpec, tree: TensionTree, p: int) -> bool:
    """Exact two-step iteration identities for both families:

        tau(phi_p) = -n (p-1) phi_{p-1} + (p-1)(p-2) phi_{p-2}
        tau(psi_p) = +n (p-1) psi_{p-1} + (p-1)(p-2) psi_{p-2}

    For p = 2 the two-step term carries coefficient zero and is dropped; for
    p = 1 the identities reduce to tau = 0.  Branches blocked by Resonance
    skip the phi side (psi is always checked).
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    n = spec.homogeneous_dim

    def apply(e: Built) -> Built:
        if isinstance(e, MixedExpr):
            return tau(spec, e)
        return formal_tau(spec, tree, e)

    def scaled(e: Built, c: Fraction) -> Built:
        return e * c if isinstance(e, MixedExpr) else e.scale(c)

    ok = True
    for family, builder, sign in (("phi", build_phi, -1), ("psi", build_psi, 1)):
        try:
            current = builder(spec, tree, p)
        except Resonance:
            if family == "phi":
                continue
            raise
        image = apply(current)
        expected = scaled(builder(spec, tree, 1), Fraction(0))  # zero of right type
        if p >= 2:
            expected = expected + scaled(
                builder(spec, tree, p - 1), Fraction(sign * n * (p - 1))
            )
        if p >= 3:
            expected = expected + scaled(
                builder(spec, tree, p - 2), Fraction((p - 1) * (p - 2))
            )
        ok = ok and image == expected
    return ok
