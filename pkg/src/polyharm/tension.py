"""Tension trees: the recursive family h^i_alpha with

    tau(h^i_alpha) = sum_k h^{i+1}_{(alpha,k)} * t^(2 lambda_k).

Children are read off the operator image by matching t-powers, which is well
defined because the eigenvalues are distinct and nodes are t-independent.
Polynomial seeds always terminate; the radial x^1-power seeds of the
rho-span (times an affine function of the x^2 variables) produce single-branch
trees via the closed-form radial Laplacian and never touch the full operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Mapping, Union

from .algebra import AlgebraSpec, VarIndex
from .errors import (
    BadParams,
    DepthExceeded,
    InternalClosureError,
    KindMismatch,
    UnsupportedSpan,
)
from .expr import MixedExpr
from .laplacian import tau
from .poly import Polynomial
from .scalar import format_rational, parse_rational

MultiIndex = tuple[int, ...]


# --- radial node functions ---

class RadialFunction:
    """Finite combination of rho^a and rho^a log(rho), rho = |x^1|.

    Admissible span (closed under the flat x^1 Laplacian):
      n1 == 2:  rho^(2k) and rho^(2k) log rho,  k >= 0
      n1 != 2:  rho^(2k) and rho^(2k + 2 - n1), k >= 0  (no logs)
    """

    __slots__ = ("n1", "terms")

    def __init__(self, n1: int, terms: Mapping[tuple[int, bool], Fraction] | None = None):
        if n1 < 1:
            raise UnsupportedSpan(f"layer-1 dimension must be >= 1, got {n1}")
        self.n1 = n1
        clean: dict[tuple[int, bool], Fraction] = {}
        if terms:
            for (a, has_log), c in terms.items():
                c = Fraction(c)
                if c:
                    self._check_span(int(a), bool(has_log))
                    clean[(int(a), bool(has_log))] = c
        self.terms = clean

    def _check_span(self, a: int, has_log: bool) -> None:
        if self.n1 == 2:
            if a < 0 or a % 2:
                raise UnsupportedSpan(f"rho^{a} is outside the even-power span (n1 = 2)")
            return
        if has_log:
            raise UnsupportedSpan(f"log(rho) terms require n1 = 2, not n1 = {self.n1}")
        plain = a >= 0 and a % 2 == 0
        shifted = a >= 2 - self.n1 and (a - (2 - self.n1)) % 2 == 0
        if not (plain or shifted):
            raise UnsupportedSpan(
                f"rho^{a} is outside the span rho^(2k), rho^(2k+2-{self.n1})"
            )

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RadialFunction)
            and self.n1 == other.n1
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n1, frozenset(self.terms.items())))

    def __add__(self, other: "RadialFunction") -> "RadialFunction":
        if self.n1 != other.n1:
            raise KindMismatch("radial functions over different layer-1 dimensions")
        out = dict(self.terms)
        for key, c in other.terms.items():
            acc = out.get(key, Fraction(0)) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        result = RadialFunction.__new__(RadialFunction)
        result.n1, result.terms = self.n1, out
        return result

    def scale(self, c: Fraction) -> "RadialFunction":
        result = RadialFunction.__new__(RadialFunction)
        result.n1 = self.n1
        result.terms = {} if not c else {k: v * c for k, v in self.terms.items()}
        return result

    def laplacian(self) -> "RadialFunction":
        """Closed form: Lap(rho^a) = a(a+n1-2) rho^(a-2);
        Lap(rho^a log rho) = a(a+n1-2) rho^(a-2) log rho + (2a+n1-2) rho^(a-2)."""
        out: dict[tuple[int, bool], Fraction] = {}
        n1 = self.n1
        for (a, has_log), c in self.terms.items():
            main = Fraction(a * (a + n1 - 2))
            if main:
                key = (a - 2, has_log)
                acc = out.get(key, Fraction(0)) + c * main
                if acc:
                    out[key] = acc
                else:
                    out.pop(key, None)
            if has_log:
                extra = Fraction(2 * a + n1 - 2)
                if extra:
                    key = (a - 2, False)
                    acc = out.get(key, Fraction(0)) + c * extra
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
        result = RadialFunction.__new__(RadialFunction)
        result.n1, result.terms = n1, out
        return result

    def is_polynomial(self) -> bool:
        return all(a >= 0 and a % 2 == 0 and not has_log for a, has_log in self.terms)

    def to_polynomial(self, spec: AlgebraSpec) -> Polynomial:
        """Expand rho^(2k) = (x^1_1^2 + ... )^k; only for log-free even powers."""
        if not self.is_polynomial():
            raise UnsupportedSpan("only even log-free powers expand to polynomials")
        rho2 = Polynomial.zero()
        for j in range(1, spec.dim(1) + 1):
            rho2 = rho2 + Polynomial.variable(VarIndex(1, j), 2)
        out = Polynomial.zero()
        for (a, _), c in self.terms.items():
            out = out + rho2 ** (a // 2) * c
        return out

    def sorted_terms(self) -> list[tuple[tuple[int, bool], Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, has_log), c in self.sorted_terms():
            factors = []
            if a == 1:
                factors.append("rho")
            elif a:
                factors.append(f"rho^{a}" if a > 0 else f"rho^({a})")
            if has_log:
                factors.append("log(rho)")
            from .poly import format_term

            parts.append(format_term(c, factors, first=not parts))
        return "".join(parts)

    def __repr__(self) -> str:
        return f"RadialFunction(n1={self.n1}, {self.render()})"


@dataclass(frozen=True)
class AffinePart:
    """G(x^2) = c0 + sum_j c_j x^2_j."""

    constant: Fraction
    linear: tuple[tuple[int, Fraction], ...] = ()  # (slot, coefficient), sparse

    def is_zero(self) -> bool:
        return self.constant == 0 and all(c == 0 for _, c in self.linear)

    def is_constant(self) -> bool:
        return all(c == 0 for _, c in self.linear)

    def to_polynomial(self) -> Polynomial:
        out = Polynomial.constant(self.constant)
        for slot, c in self.linear:
            out = out + Polynomial.variable(VarIndex(2, slot)) * c
        return out

    def render(self, namer: Callable[[VarIndex], str] = str) -> str:
        return self.to_polynomial().render(namer)


@dataclass(frozen=True)
class RadialSeed:
    """H(|x^1|) * G(x^2) with H in the radial span and G affine."""

    radial: RadialFunction
    affine: AffinePart

    def is_zero(self) -> bool:
        return self.radial.is_zero() or self.affine.is_zero()

    def render(self, namer: Callable[[VarIndex], str] = str) -> str:
        h = self.radial.render()
        if self.affine.is_constant() and self.affine.constant == 1:
            return h
        return f"({h}) * ({self.affine.render(namer)})"

    def latex(self, namer: Callable[[VarIndex], str] | None = None) -> str:
        from .expr import MixedExpr

        parts = []
        for (a, has_log), c in self.radial.sorted_terms():
            factors = []
            if a == 1:
                factors.append(r"\rho")
            elif a:
                factors.append(rf"\rho^{{{a}}}")
            if has_log:
                factors.append(r"\log(\rho)")
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mag == 1 and factors:
                body = r" \, ".join(factors)
            else:
                mag_tex = (
                    str(mag.numerator)
                    if mag.denominator == 1
                    else rf"\frac{{{mag.numerator}}}{{{mag.denominator}}}"
                )
                body = r" \, ".join([mag_tex] + factors)
            parts.append(body if not parts and sign == "+" else
                         (f"-{body}" if not parts else f" {sign} {body}"))
        h = "".join(parts) if parts else "0"
        if self.affine.is_constant() and self.affine.constant == 1:
            return h
        g = MixedExpr.from_polynomial(self.affine.to_polynomial()).latex(namer)
        return rf"\left({h}\right) \left({g}\right)"


RadialNode = RadialSeed  # tree nodes share the representation (same affine part)

Node = Union[Polynomial, RadialSeed]


@dataclass(frozen=True)
class TensionTree:
    """Sparse tree: only nonzero nodes are stored, keyed by multi-index."""

    spec: AlgebraSpec
    kind: str  # "polynomial" | "radial"
    seed: Node
    nodes: dict[MultiIndex, Node]
    degree: int

    def branches(self) -> list[MultiIndex]:
        return sorted(self.nodes)

    def node_count(self) -> int:
        return len(self.nodes)

    @cached_property
    def _children(self) -> dict[MultiIndex, list[int]]:
        out: dict[MultiIndex, list[int]] = {}
        for alpha in self.nodes:
            out.setdefault(alpha[:-1], []).append(alpha[-1])
        return out

    def children(self, alpha: MultiIndex) -> list[int]:
        return sorted(self._children.get(alpha, []))


def _split_components(spec: AlgebraSpec, image: MixedExpr) -> dict[int, Polynomial]:
    """Read h^{i+1}_{(alpha,k)} off tau(node) as the coefficient of t^(2 lambda_k)."""
    shifts = {2 * spec.lam(k): k for k in range(1, spec.m + 1)}
    children: dict[int, Polynomial] = {}
    for (mu, logpow), poly in image.t_components().items():
        if logpow != 0 or mu not in shifts:
            raise InternalClosureError(
                f"operator image contains an unexpected t^({format_rational(mu)})"
                f"*log^{logpow} component; this is a bug, not a user error"
            )
        children[shifts[mu]] = poly
    return children


def tension_tree(spec: AlgebraSpec, h: Polynomial, max_depth: int = 64) -> TensionTree:
    """Full tree of a polynomial seed.  Terminates for every polynomial; the
    depth guard exists to catch operator bugs, not legitimate seeds."""
    for v_layer in h.layers_used():
        if not 1 <= v_layer <= spec.m:
            from .errors import IndexOutOfRange

            raise IndexOutOfRange(f"seed uses layer {v_layer}, algebra has m={spec.m}")
    nodes: dict[MultiIndex, Polynomial] = {}
    frontier: dict[MultiIndex, Polynomial] = {(): h}
    depth = 0
    while frontier:
        if depth > max_depth:
            raise DepthExceeded(f"tension tree exceeded max_depth={max_depth}")
        next_frontier: dict[MultiIndex, Polynomial] = {}
        for alpha, node in frontier.items():
            image = tau(spec, MixedExpr.from_polynomial(node))
            for k, child in _split_components(spec, image).items():
                if not child.is_zero():
                    child_alpha = alpha + (k,)
                    nodes[child_alpha] = child
                    next_frontier[child_alpha] = child
        frontier = next_frontier
        depth += 1
    degree = max((len(alpha) for alpha in nodes), default=0)
    return TensionTree(spec=spec, kind="polynomial", seed=h, nodes=nodes, degree=degree)


def tension_tree_radial(
    spec: AlgebraSpec, seed: RadialSeed, max_depth: int = 64
) -> TensionTree:
    """Single-branch tree of H(|x^1|) G(x^2): node i is Lap^i(H) * G.

    The layer-1/2 cross terms of the operator annihilate on radial x affine
    functions because the first-layer bracket constants are antisymmetric in
    the two layer-1 slots; the stored canonical orientation guarantees this,
    so it is asserted rather than recomputed.
    """
    if seed.radial.n1 != spec.dim(1):
        raise BadParams(
            f"seed declares n1={seed.radial.n1} but layer 1 of {spec.name!r} "
            f"has dimension {spec.dim(1)}"
        )
    if not seed.affine.is_constant():
        if spec.m < 2:
            raise UnsupportedSpan(
                "affine part uses x^2 variables but the algebra has a single layer"
            )
        for slot, _ in seed.affine.linear:
            spec.check_index(VarIndex(2, slot))
    assert all(
        spec.structure_constant(1, j, 1, j, 2, b) == 0
        for j in range(1, spec.dim(1) + 1)
        for b in range(1, (spec.dim(2) if spec.m >= 2 else 0) + 1)
    )
    nodes: dict[MultiIndex, RadialSeed] = {}
    current = seed.radial
    if not seed.is_zero():
        for depth in range(1, max_depth + 2):
            if depth > max_depth:
                raise DepthExceeded(f"radial tree exceeded max_depth={max_depth}")
            current = current.laplacian()
            if current.is_zero():
                break
            nodes[(1,) * depth] = RadialSeed(radial=current, affine=seed.affine)
    degree = max((len(alpha) for alpha in nodes), default=0)
    return TensionTree(spec=spec, kind="radial", seed=seed, nodes=nodes, degree=degree)


def sum_trees(t1: TensionTree, t2: TensionTree) -> TensionTree:
    """Nodewise sum; the tree map is linear in the seed."""
    if t1.spec != t2.spec or t1.kind != t2.kind:
        raise KindMismatch("trees over different algebras or node kinds")
    if t1.kind == "polynomial":
        seed = t1.seed + t2.seed
        nodes: dict[MultiIndex, Node] = {}
        for alpha in set(t1.nodes) | set(t2.nodes):
            zero = Polynomial.zero()
            total = t1.nodes.get(alpha, zero) + t2.nodes.get(alpha, zero)
            if not total.is_zero():
                nodes[alpha] = total
    else:
        if t1.seed.affine != t2.seed.affine:
            raise KindMismatch("radial trees with different affine parts do not sum")
        seed = RadialSeed(radial=t1.seed.radial + t2.seed.radial, affine=t1.seed.affine)
        nodes = {}
        for alpha in set(t1.nodes) | set(t2.nodes):
            zero = RadialFunction(t1.seed.radial.n1)
            total = (
                t1.nodes[alpha].radial if alpha in t1.nodes else zero
            ) + (t2.nodes[alpha].radial if alpha in t2.nodes else zero)
            if not total.is_zero():
                nodes[alpha] = RadialSeed(radial=total, affine=t1.seed.affine)
    degree = max((len(alpha) for alpha in nodes), default=0)
    return TensionTree(spec=t1.spec, kind=t1.kind, seed=seed, nodes=nodes, degree=degree)


# --- rendering ---

def _node_text(node: Node, namer: Callable[[VarIndex], str]) -> str:
    if isinstance(node, Polynomial):
        return node.render(namer)
    return node.render(namer)


def render_tree_text(tree: TensionTree, use_aliases: bool = True) -> str:
    """Indented branch layout: each node under its parent, root first."""
    namer = (lambda v: tree.spec.var_name(v)) if use_aliases else str
    lines = [f"h = {_node_text(tree.seed, namer)}"]

    def walk(alpha: MultiIndex, indent: int) -> None:
        for k in tree.children(alpha):
            child = alpha + (k,)
            label = ",".join(str(a) for a in child)
            lines.append(
                "  " * indent + f"h^{len(child)}_({label}) = "
                + _node_text(tree.nodes[child], namer)
            )
            walk(child, indent + 1)

    walk((), 1)
    lines.append(f"degree = {tree.degree}")
    return "\n".join(lines)


def render_tree_latex(tree: TensionTree) -> str:
    """One aligned line per node, paper-style labels h^{i}_{(alpha)}."""
    from .expr import MixedExpr

    namer = lambda v: tree.spec.var_name(v)

    def node_tex(node: Node) -> str:
        if isinstance(node, Polynomial):
            return MixedExpr.from_polynomial(node).latex(namer)
        return node.latex(namer)

    lines = [rf"h &= {node_tex(tree.seed)} \\"]
    for alpha in tree.branches():
        label = ",".join(str(a) for a in alpha)
        lines.append(rf"h^{{{len(alpha)}}}_{{({label})}} &= {node_tex(tree.nodes[alpha])} \\")
    return "\n".join(lines)


def _affine_to_json(g: AffinePart, n2: int) -> dict:
    dense = {slot: c for slot, c in g.linear}
    return {
        "c0": format_rational(g.constant),
        "c": [format_rational(dense.get(j, Fraction(0))) for j in range(1, n2 + 1)],
    }


def _affine_from_json(obj: Mapping) -> AffinePart:
    constant = parse_rational(obj.get("c0", "0"))
    linear = tuple(
        (j + 1, parse_rational(c))
        for j, c in enumerate(obj.get("c", []))
        if parse_rational(c) != 0
    )
    return AffinePart(constant=constant, linear=linear)


def _radial_to_json(r: RadialFunction) -> list[dict]:
    return [
        {"a": a, "log": has_log, "c": format_rational(c)}
        for (a, has_log), c in r.sorted_terms()
    ]


def _node_to_json(tree: TensionTree, node: Node) -> object:
    if isinstance(node, Polynomial):
        return node.render(lambda v: tree.spec.var_name(v))
    n2 = tree.spec.dim(2) if tree.spec.m >= 2 else 0
    return {
        "radial": _radial_to_json(node.radial),
        "affine": _affine_to_json(node.affine, n2),
    }


def tree_to_json(tree: TensionTree) -> dict:
    return {
        "algebra": tree.spec.name,
        "kind": tree.kind,
        "seed": _node_to_json(tree, tree.seed),
        "degree": tree.degree,
        "nodes": [
            {"alpha": list(alpha), "node": _node_to_json(tree, tree.nodes[alpha])}
            for alpha in tree.branches()
        ],
    }


def _node_from_json(spec: AlgebraSpec, obj: object, kind: str) -> Node:
    if kind == "polynomial":
        from .expr import parse_polynomial

        return parse_polynomial(obj, spec)
    n1 = spec.dim(1)
    radial = RadialFunction(
        n1,
        {
            (int(term["a"]), bool(term["log"])): parse_rational(term["c"])
            for term in obj["radial"]
        },
    )
    return RadialSeed(radial=radial, affine=_affine_from_json(obj["affine"]))


def tree_from_json(spec: AlgebraSpec, obj: Mapping) -> TensionTree:
    kind = obj["kind"]
    nodes = {
        tuple(entry["alpha"]): _node_from_json(spec, entry["node"], kind)
        for entry in obj["nodes"]
    }
    return TensionTree(
        spec=spec,
        kind=kind,
        seed=_node_from_json(spec, obj["seed"], kind),
        nodes=nodes,
        degree=int(obj["degree"]),
    )
