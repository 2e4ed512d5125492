"""Acceptance certificates: construction, verification, and transport.

A certificate at level k assigns to every k-tuple of instance vertices an
affine integer tensor over the template's vertex set, such that the family
commutes with tuple projection (k-tensoriality) and every instance edge is
explained by a single integer vector over the template's edges.  Hollow
shadowed crystals yield certificates by projection; certificates transport
along template homomorphisms (coordinatewise pushforward) and along the
line-digraph construction (regrouping vertex 2k-tuples into edge
k-tuples).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Optional

from .tensor_core import (
    Index,
    IntTensor,
    TensorError,
    dumps_st,
    is_affine,
    is_hollow,
    loads_st,
    project,
    total,
)
from .crystal_mill import BadDimension, NotACrystal, is_crystal
from .digraph_lab import Digraph, check_homomorphism, clique, line_digraph
from .relaxation_engine import integer_feasible, refines


class NotAffine(TensorError):
    pass


class NotHollowShadow(TensorError):
    pass


class TooFewDimensions(TensorError):
    pass


class DimensionMismatch(TensorError):
    pass


class NotAHomomorphism(TensorError):
    pass


class SupportConditionViolated(TensorError):
    pass


class EmptyLineTemplate(TensorError):
    pass


@dataclass(frozen=True)
class ZaffCertificate:
    k: int
    instance: Digraph
    template: Digraph
    zeta: Mapping[Index, IntTensor]
    template_clique: Optional[int] = None  # n when the template is K_n

    def __post_init__(self):
        n = self.template.vertex_count
        xs = list(itertools.product(range(1, self.instance.vertex_count + 1), repeat=self.k))
        zeta = dict(self.zeta)
        if set(zeta) != set(xs):
            raise DimensionMismatch("zeta must be total over instance vertex k-tuples")
        for x, t in zeta.items():
            if t.shape != (n,) * self.k:
                raise DimensionMismatch(
                    f"image at {x} has shape {t.shape}, expected {(n,) * self.k}"
                )
        object.__setattr__(self, "zeta", zeta)


def certificate_from_crystal(c: IntTensor, x_graph: Digraph, k: int) -> ZaffCertificate:
    """Project a hollow-shadowed affine k-crystal through vertex tuples.

    Modes of the crystal play the role of instance vertices (the crystal
    must have at least max(k+1, |V(X)|) modes; unused modes act as isolated
    vertices), so the image of x is just the projection of the crystal onto
    the selector x.  Tensoriality is then projection composition, for free.
    """
    if not x_graph.is_loopless():
        raise NotAHomomorphism("instance digraph must be loopless")
    q = c.dim
    if q < max(k + 1, x_graph.vertex_count):
        raise TooFewDimensions(
            f"crystal has {q} modes; needs at least {max(k + 1, x_graph.vertex_count)}"
        )
    if not is_affine(c):
        raise NotAffine("crystal entries must sum to 1")
    rep = is_crystal(c, k)
    if not rep.is_crystal:
        raise NotACrystal(f"not a {k}-crystal (mismatch at {rep.failing_pair})")
    if not is_hollow(rep.shadow):
        raise NotHollowShadow("the k-shadow has a tie")
    n = c.shape[0]
    zeta = {
        x: project(c, x)
        for x in itertools.product(range(1, x_graph.vertex_count + 1), repeat=k)
    }
    return ZaffCertificate(k, x_graph, clique(n), zeta, template_clique=n)


def _edge_vector_exists(cert: ZaffCertificate, y: tuple[int, int]) -> bool:
    """Integer vector over template edges whose every i-projection matches
    the certificate image of the projected edge tuple."""
    k = cert.k
    a_edges = cert.template.sorted_edges()
    equations = []
    equations.append(({("q", b): 1 for b in a_edges}, 1))
    for i in itertools.product((0, 1), repeat=k):
        yi = tuple(y[p] for p in i)
        img = cert.zeta[yi]
        by_a: dict[Index, dict] = {}
        for b in a_edges:
            a = tuple(b[p] for p in i)
            by_a.setdefault(a, {})[("q", b)] = 1
        for a in set(by_a) | set(img.entries):
            equations.append((dict(by_a.get(a, {})), img.entries.get(a, 0)))
    return integer_feasible(equations) is not None


def _check_common(cert: ZaffCertificate) -> Optional[str]:
    k = cert.k
    xs = list(itertools.product(range(1, cert.instance.vertex_count + 1), repeat=k))
    for x in xs:
        if not is_affine(cert.zeta[x]):
            return f"image at {x} is not affine (total {total(cert.zeta[x])})"
    for x in xs:
        t = cert.zeta[x]
        for i in itertools.product(range(k), repeat=k):
            xi = tuple(x[p] for p in i)
            if cert.zeta[xi] != project(t, tuple(p + 1 for p in i)):
                return f"tensoriality fails at x={x}, positions={tuple(p + 1 for p in i)}"
    for y in cert.instance.sorted_edges():
        if not _edge_vector_exists(cert, y):
            return f"no integer edge vector for instance edge {y}"
    return None


def verify_clique_certificate(cert: ZaffCertificate, x_graph: Digraph, n: int):
    """Full certificate check against the clique template K_n.

    Returns (ok, reason).  On top of the general checks, support indices
    must pattern-refine their vertex tuple (the hollowness condition).
    """
    if not 2 <= cert.k <= n:
        return False, f"need 2 <= k <= n, got k={cert.k}, n={n}"
    if not x_graph.is_loopless():
        return False, "instance digraph must be loopless"
    if cert.instance != x_graph or cert.template != clique(n):
        return False, "certificate instance/template mismatch"
    reason = _check_common(cert)
    if reason is not None:
        return False, reason
    for x, t in cert.zeta.items():
        for a in t.entries:
            if not refines(a, x):
                return False, f"nonzero entry at a={a} although a does not refine x={x}"
    return True, None


def verify_zaff_certificate_general(cert: ZaffCertificate, x_graph: Digraph, a_graph: Digraph):
    """Certificate check against an arbitrary template with E(A) nonempty."""
    if cert.k < 2:
        return False, f"need k >= 2, got k={cert.k}"
    if not a_graph.edges:
        return False, "template has no edges"
    if cert.instance != x_graph or cert.template != a_graph:
        return False, "certificate instance/template mismatch"
    reason = _check_common(cert)
    if reason is not None:
        return False, reason
    return True, None


@dataclass(frozen=True)
class QconvMap:
    k: int
    n: int
    xi: Mapping[Index, dict]  # x-tuple -> {a-tuple: positive Fraction}


def uniform_qconv_map(x_graph: Digraph, n: int, k: int) -> QconvMap:
    """The uniform relaxation witness: each image is the uniform
    distribution on the value tuples pattern-equivalent to its vertex
    tuple, with mass 1 / (n falling-factorial |x|)."""
    if k > n:
        raise BadDimension(f"need k <= n, got k={k}, n={n}")
    if not x_graph.is_loopless():
        raise NotAHomomorphism("instance digraph must be loopless")
    xi: dict[Index, dict] = {}
    for x in itertools.product(range(1, x_graph.vertex_count + 1), repeat=k):
        d = len(set(x))
        count = math.factorial(n) // math.factorial(n - d)
        mass = Fraction(1, count)
        img = {}
        for a in itertools.product(range(1, n + 1), repeat=k):
            if refines(x, a) and refines(a, x):
                img[a] = mass
        xi[x] = img
    return QconvMap(k, n, xi)


def check_refinement(zeta: ZaffCertificate, xi: QconvMap) -> bool:
    """Support inclusion supp(zeta(x)) <= supp(xi(x)) for every x."""
    if zeta.k != xi.k or zeta.template.vertex_count != xi.n:
        raise DimensionMismatch("certificate and rational map disagree on k or n")
    for x, t in zeta.zeta.items():
        pos = xi.xi[x]
        if any(a not in pos for a in t.entries):
            return False
    return True


def scatter(fn: Callable[[Index], Index], t: IntTensor, out_shape) -> IntTensor:
    """Push entries forward along an index map, summing over preimages."""
    out_shape = tuple(out_shape)
    out: dict[Index, int] = {}
    for idx, v in t.entries.items():
        key = tuple(fn(idx))
        s = out.get(key, 0) + v
        if s:
            out[key] = s
        else:
            del out[key]
    return IntTensor(out_shape, out)


def transform_certificate_homomorphism(
    cert: ZaffCertificate, f: Mapping[int, int], b_graph: Digraph
) -> ZaffCertificate:
    """Push a certificate along a template homomorphism f: A -> B,
    applying f coordinatewise to every image's indices."""
    fmap = {int(u): int(v) for u, v in f.items()}
    if not check_homomorphism(cert.template, b_graph, fmap):
        raise NotAHomomorphism("f is not a homomorphism between the templates")
    k = cert.k
    p = b_graph.vertex_count
    shape = (p,) * k

    def g(idx: Index) -> Index:
        return tuple(fmap[c] for c in idx)

    zeta = {x: scatter(g, t, shape) for x, t in cert.zeta.items()}
    is_cl = b_graph == clique(p)
    return ZaffCertificate(k, cert.instance, b_graph, zeta, template_clique=p if is_cl else None)


def transform_certificate_line_digraph(
    cert: ZaffCertificate, anchor: Optional[tuple] = None
) -> ZaffCertificate:
    """Lower a level-2k certificate for (X, A) to a level-k certificate
    for the line digraphs (dX, dA).

    The new images regroup the old index 2k-tuples into k consecutive
    pairs, each read as a template edge.  Requires the support condition:
    for every vertex tuple of dX, the corresponding old image is supported
    on tuples whose consecutive pairs are all template edges — then the
    anchor (an edge of dA, lexicographically smallest by default) only
    names the default edge used off-support and never receives mass.
    """
    if cert.k % 2 != 0 or cert.k < 2:
        raise BadDimension("certificate level must be even and >= 2")
    k = cert.k // 2
    a_graph = cert.template
    x_graph = cert.instance
    da, a_labels = line_digraph(a_graph)
    dx, x_labels = line_digraph(x_graph)
    if not da.edges:
        raise EmptyLineTemplate("the template's line digraph has no edges")
    if not x_graph.edges:
        raise EmptyLineTemplate("the instance's line digraph has no labelled vertices")
    if anchor is None:
        e1, e2 = min((a_labels[u - 1], a_labels[v - 1]) for u, v in da.edges)
    else:
        e1, e2 = anchor
        e1, e2 = tuple(e1), tuple(e2)
        pos = {e: i + 1 for i, e in enumerate(a_labels)}
        if e1 not in pos or e2 not in pos or (pos[e1], pos[e2]) not in da.edges:
            raise EmptyLineTemplate(f"anchor {(e1, e2)} is not an edge of the line template")
    default_edge = e1

    a_pos = {e: i + 1 for i, e in enumerate(a_labels)}
    a_edges = a_graph.edges
    m = da.vertex_count

    def beta(idx: Index) -> Index:
        out = []
        for ell in range(k):
            pair = (idx[2 * ell], idx[2 * ell + 1])
            out.append(a_pos[pair if pair in a_edges else default_edge])
        return tuple(out)

    nx = dx.vertex_count
    zeta: dict[Index, IntTensor] = {}
    for xbar in itertools.product(range(1, nx + 1), repeat=k):
        gam = tuple(c for v in xbar for c in x_labels[v - 1])
        old = cert.zeta[gam]
        for idx in old.entries:
            for ell in range(k):
                if (idx[2 * ell], idx[2 * ell + 1]) not in a_edges:
                    raise SupportConditionViolated(
                        f"image of {gam} has mass at {idx}, whose pair "
                        f"{(idx[2 * ell], idx[2 * ell + 1])} is not a template edge"
                    )
        zeta[xbar] = scatter(beta, old, (m,) * k)
    return ZaffCertificate(k, dx, da, zeta, template_clique=None)


# ---------------------------------------------------------------------------
# JSON interchange.
# ---------------------------------------------------------------------------


def certificate_to_json(cert: ZaffCertificate) -> str:
    from .digraph_lab import digraph_to_json

    if cert.template_clique is not None:
        template_doc = {"clique": cert.template_clique}
    else:
        template_doc = json.loads(digraph_to_json(cert.template))
    doc = {
        "k": cert.k,
        "instance": json.loads(digraph_to_json(cert.instance)),
        "template": template_doc,
        "zeta": [
            {"x": list(x), "tensor": dumps_st(cert.zeta[x])}
            for x in sorted(cert.zeta)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def certificate_from_json(text: str) -> ZaffCertificate:
    from .digraph_lab import digraph_from_json

    try:
        doc = json.loads(text)
        k = int(doc["k"])
        instance = digraph_from_json(json.dumps(doc["instance"]))
        tmpl = doc["template"]
        if isinstance(tmpl, dict) and set(tmpl) == {"clique"}:
            n = int(tmpl["clique"])
            template = clique(n)
            template_clique = n
        else:
            template = digraph_from_json(json.dumps(tmpl))
            template_clique = None
        zeta = {}
        for blob in doc["zeta"]:
            x = tuple(int(c) for c in blob["x"])
            zeta[x] = loads_st(blob["tensor"])
    except (KeyError, TypeError, ValueError) as exc:
        raise TensorError(f"bad certificate JSON: {exc}") from exc
    return ZaffCertificate(k, instance, template, zeta, template_clique=template_clique)
