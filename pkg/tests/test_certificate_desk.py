from fractions import Fraction

import pytest

from crystalforge.tensor_core import IntTensor, TensorError, project
from crystalforge.crystal_mill import mine_hollow_shadowed_crystal
from crystalforge.digraph_lab import Digraph, clique, line_digraph
from crystalforge.certificate_desk import (
    DimensionMismatch,
    EmptyLineTemplate,
    NotAffine,
    NotAHomomorphism,
    SupportConditionViolated,
    TooFewDimensions,
    ZaffCertificate,
    certificate_from_crystal,
    certificate_from_json,
    certificate_to_json,
    check_refinement,
    scatter,
    transform_certificate_homomorphism,
    transform_certificate_line_digraph,
    uniform_qconv_map,
    verify_clique_certificate,
    verify_zaff_certificate_general,
)


def cycle(n):
    return Digraph(n, frozenset((i, i % n + 1) for i in range(1, n + 1)))


def k4_cert():
    c = mine_hollow_shadowed_crystal(2, 4)
    return certificate_from_crystal(c, clique(4), 2)


# -- construction -----------------------------------------------------------


def test_from_crystal_and_verify():
    cert = k4_cert()
    assert cert.k == 2 and cert.template_clique == 3
    ok, why = verify_clique_certificate(cert, clique(4), 3)
    assert ok, why


def test_from_crystal_preconditions():
    c = mine_hollow_shadowed_crystal(2, 4)
    with pytest.raises(TooFewDimensions):
        certificate_from_crystal(mine_hollow_shadowed_crystal(2, 2), clique(4), 2)
    with pytest.raises(NotAffine):
        from crystalforge.tensor_core import scale

        certificate_from_crystal(scale(c, 2), clique(4), 2)
    with pytest.raises(NotAHomomorphism):
        certificate_from_crystal(c, Digraph(2, frozenset({(1, 1)})), 2)


def test_certificate_totality_enforced():
    cert = k4_cert()
    zeta = dict(cert.zeta)
    zeta.pop((1, 1))
    with pytest.raises(DimensionMismatch):
        ZaffCertificate(2, cert.instance, cert.template, zeta, cert.template_clique)


# -- verification failures --------------------------------------------------


def tamper(cert, x, tensor):
    zeta = dict(cert.zeta)
    zeta[x] = tensor
    return ZaffCertificate(cert.k, cert.instance, cert.template, zeta, cert.template_clique)


def test_verify_rejects_non_affine_image():
    cert = k4_cert()
    bad = tamper(cert, (1, 2), IntTensor((3, 3), {(1, 2): 2}))
    ok, why = verify_clique_certificate(bad, clique(4), 3)
    assert not ok and "affine" in why


def test_verify_rejects_tensoriality_break():
    cert = k4_cert()
    t = cert.zeta[(1, 2)]
    # swap the two modes of a single image; marginals stay affine
    bad = tamper(cert, (1, 2), project(t, (2, 1)))
    ok, why = verify_clique_certificate(bad, clique(4), 3)
    assert not ok and ("tensoriality" in why or "edge" in why)


def test_verify_rejects_tie_support():
    cert = k4_cert()
    t = cert.zeta[(1, 2)]
    spoiled = IntTensor((3, 3), dict(t.entries) | {(1, 1): 1, (2, 3): t[(2, 3)] - 1})
    bad = tamper(cert, (1, 2), spoiled)
    ok, why = verify_clique_certificate(bad, clique(4), 3)
    assert not ok


def test_verify_rejects_instance_mismatch():
    cert = k4_cert()
    ok, why = verify_clique_certificate(cert, clique(3), 3)
    assert not ok and "mismatch" in why


def test_verify_general_needs_edges():
    cert = k4_cert()
    ok, why = verify_zaff_certificate_general(cert, cert.instance, Digraph(3, frozenset()))
    assert not ok and "edge" in why


def test_verify_general_accepts_clique_certificates():
    cert = k4_cert()
    ok, why = verify_zaff_certificate_general(cert, clique(4), clique(3))
    assert ok, why


# -- rational maps and refinement -------------------------------------------


def test_uniform_qconv_map_masses():
    xi = uniform_qconv_map(clique(4), 3, 2)
    img = xi.xi[(1, 2)]
    # injective pairs: 6 of them, each with mass 1/6
    assert len(img) == 6 and all(m == Fraction(1, 6) for m in img.values())
    img = xi.xi[(1, 1)]
    assert len(img) == 3 and all(m == Fraction(1, 3) for m in img.values())
    assert sum(img.values()) == 1


def test_check_refinement():
    cert = k4_cert()
    xi = uniform_qconv_map(clique(4), 3, 2)
    assert check_refinement(cert, xi)
    # shrink one image's support below the certificate's
    xi.xi[(1, 2)].pop(next(iter(cert.zeta[(1, 2)].entries)))
    assert not check_refinement(cert, xi)


# -- scatter ----------------------------------------------------------------


def test_scatter_sums_preimages():
    t = IntTensor((3,), {(1,): 2, (2,): 3, (3,): -3})
    merged = scatter(lambda i: (1,) if i[0] < 3 else (2,), t, (2,))
    assert merged == IntTensor((2,), {(1,): 5, (2,): -3})


def test_scatter_composes():
    t = IntTensor((4, 4), {(1, 2): 1, (3, 4): -2, (2, 2): 5})
    f = lambda i: (i[0],)  # noqa: E731
    g = lambda i: ((i[0] + 1) // 2,)  # noqa: E731
    lhs = scatter(g, scatter(f, t, (4,)), (2,))
    rhs = scatter(lambda i: g(f(i)), t, (2,))
    assert lhs == rhs


# -- transports -------------------------------------------------------------


def test_homomorphism_transport_preserves_validity():
    cert = k4_cert()
    pushed = transform_certificate_homomorphism(cert, {1: 2, 2: 3, 3: 4}, clique(5))
    ok, why = verify_clique_certificate(pushed, clique(4), 5)
    assert ok, why
    with pytest.raises(NotAHomomorphism):
        transform_certificate_homomorphism(cert, {1: 1, 2: 1, 3: 3}, clique(5))


def test_line_digraph_transport():
    c = mine_hollow_shadowed_crystal(4, 5)
    cert4 = certificate_from_crystal(c, cycle(3), 4)
    cert2 = transform_certificate_line_digraph(cert4)
    dcyc, _ = line_digraph(cycle(3))
    dk10, _ = line_digraph(clique(10))
    assert cert2.k == 2
    assert cert2.instance == dcyc and cert2.template == dk10
    ok, why = verify_zaff_certificate_general(cert2, dcyc, dk10)
    assert ok, why


def test_line_digraph_transport_rejects_odd_level():
    cert = k4_cert()
    from crystalforge.crystal_mill import BadDimension

    bad = ZaffCertificate(
        1,
        cert.instance,
        cert.template,
        {(v,): project(cert.zeta[(v, v)], (1,)) for v in range(1, 5)},
    )
    with pytest.raises(BadDimension):
        transform_certificate_line_digraph(bad)


def test_line_digraph_transport_support_condition():
    # a level-2 certificate whose images put mass off the edge set of A
    # cannot be regrouped: every index pair must be a template edge
    import itertools

    from crystalforge.tensor_core import unit_tensor

    path = Digraph(3, frozenset({(1, 2), (2, 3)}))
    one_edge = Digraph(2, frozenset({(1, 2)}))
    zeta = {
        t: unit_tensor((3, 3), (1, 3))  # (1, 3) is not an edge of the path
        for t in itertools.product((1, 2), repeat=2)
    }
    cert = ZaffCertificate(2, one_edge, path, zeta)
    with pytest.raises(SupportConditionViolated):
        transform_certificate_line_digraph(cert)
    # moving the mass onto an actual edge makes the regrouping go through
    good = ZaffCertificate(
        2,
        one_edge,
        path,
        {t: unit_tensor((3, 3), (1, 2)) for t in itertools.product((1, 2), repeat=2)},
    )
    lowered = transform_certificate_line_digraph(good)
    assert lowered.k == 1
    assert lowered.zeta[(1,)] == unit_tensor((2,), (1,))


def test_line_digraph_transport_empty_template():
    import itertools

    from crystalforge.tensor_core import unit_tensor

    # the line digraph of a single edge has one vertex and no edges
    one_edge = Digraph(2, frozenset({(1, 2)}))
    zeta = {
        t: unit_tensor((2, 2), (1, 2)) for t in itertools.product((1, 2), repeat=2)
    }
    cert = ZaffCertificate(2, one_edge, one_edge, zeta)
    with pytest.raises(EmptyLineTemplate):
        transform_certificate_line_digraph(cert)


def test_line_digraph_transport_needs_instance_edges():
    import itertools

    from crystalforge.tensor_core import unit_tensor

    path = Digraph(3, frozenset({(1, 2), (2, 3)}))
    lonely = Digraph(1, frozenset())
    zeta = {(1, 1): unit_tensor((3, 3), (1, 2))}
    cert = ZaffCertificate(2, lonely, path, zeta)
    with pytest.raises(EmptyLineTemplate):
        transform_certificate_line_digraph(cert)


# -- JSON -------------------------------------------------------------------


def test_certificate_json_round_trip():
    cert = k4_cert()
    text = certificate_to_json(cert)
    back = certificate_from_json(text)
    assert back == cert
    assert certificate_to_json(back) == text


def test_certificate_json_general_template():
    c = mine_hollow_shadowed_crystal(4, 5)
    cert2 = transform_certificate_line_digraph(certificate_from_crystal(c, cycle(3), 4))
    back = certificate_from_json(certificate_to_json(cert2))
    assert back == cert2 and back.template_clique is None


def test_certificate_json_malformed():
    with pytest.raises(TensorError):
        certificate_from_json("{}")
    with pytest.raises(TensorError):
        certificate_from_json("[1, 2]")
