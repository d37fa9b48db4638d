import json

import pytest

from twistkoszul import GroupElt, NotInvariant, Poly, example_model, load_model, parse_poly, validate
from twistkoszul.lgmodel import GroupTooLarge, ModelError, box_minus, model_from_dict, nabla


def P(text, n=3):
    return parse_poly(text, n)


def test_example_model_sectors():
    M = example_model()
    assert len(M.elements) == 2
    rho = M.lookup("rho")
    sd = M.sector_data(rho)
    assert sd.moved == (1, 2) and sd.fixed == (3,)
    assert sd.w_fixed == Poly.zero(3)
    assert sd.jacobian == (Poly.zero(3),)
    one = M.sector_data(M.identity)
    assert one.w_fixed == M.W
    assert one.jacobian == (P("2*x1 + x2*x3"), P("2*x2 + x1*x3"), P("x1*x2"))


def test_not_invariant():
    with pytest.raises(NotInvariant) as info:
        validate(1, "x1", 2, [(1,)])
    assert "NotInvariant" in str(info.value)


def test_trivial_group():
    M = validate(2, "x1^3 + x2", 1, [])
    assert M.elements == (M.identity,)


def test_group_cap():
    with pytest.raises(GroupTooLarge):
        validate(3, "x1^5*x2^5*x3^5", 5, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], cap=100)


def test_group_elements():
    g = GroupElt(3, (1, 5, 0))
    assert g.exps == (1, 2, 0)
    assert (g * g * g).is_identity()
    assert g * g.inverse() == GroupElt.identity(3, 3)
    assert g.moved() == (1, 2) and g.fixed() == (3,)


def test_nabla_examples():
    M = example_model()
    assert nabla(M, 1) == P("y1 + x1 + x2*x3")
    assert nabla(M, 3) == P("y1*y2")


def test_nabla_classical_limit():
    M = validate(3, "x1^3*x2 + x2^2*x3^2 - x1*x3", 1, [])
    diag = {M.n + i: Poly.x(M.n, i + 1) for i in range(M.n)}
    for j in range(1, 4):
        assert M.nabla(j).substitute(diag) == M.W.partial(j - 1)


def test_box_minus():
    M = example_model()
    assert box_minus(M) == P("y1^2+y2^2+y1*y2*y3 - x1^2-x2^2-x1*x2*x3")
    assert box_minus(validate(1, "0", 1, [])) == Poly.zero(1)
    assert box_minus(validate(1, "x1", 1, [])) == parse_poly("y1 - x1", 1)


def test_telescoping():
    M = validate(2, "x1^4 + x1*x2^2 + 3*x2", 1, [])
    total = sum((M.nabla(j) * (M.y(j) - M.x(j)) for j in (1, 2)), Poly.zero(2))
    assert total == box_minus(M)


def test_fixed_locus_potential_is_invariant():
    M = validate(3, "x1^3 + x2^3 + x3^3 + x1*x2*x3", 3, [(1, 1, 1), (1, 2, 0)])
    for h in M.elements:
        wh = M.sector_data(h).w_fixed
        for g in M.elements:
            assert wh.scale_vars(g.x_action(3)) == wh


def test_model_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(example_model().canonical()))
    M = load_model(path)
    assert M.W == example_model().W
    assert M.lookup("rho") == GroupElt(2, (1, 1, 0))
    assert M.lookup("1,1,0") == M.lookup("rho")
    assert M.tag(M.lookup("rho")) == "rho"


def test_malformed_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"n": 3,\n "W": }')
    with pytest.raises(ModelError, match="line 2 column"):
        load_model(path)
    with pytest.raises(ModelError):
        model_from_dict({"W": "x1"})
