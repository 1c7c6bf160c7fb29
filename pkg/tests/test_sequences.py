import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from framekit import sequences as sq
from framekit.errors import InputError, ResourceError, ValidationError


def spec(**kw):
    return json.dumps(kw)


def test_explicit_spec_with_complex_coordinates():
    s = sq.loads_spec(spec(kind="explicit", space_dim=2, elements=[[1, [0, 2]], [0.5, 0]]))
    assert s.space_dim == 2 and len(s) == 2
    np.testing.assert_array_equal(s.element(1), [1, 2j])
    assert sq.spec_to_dict(s)["elements"][0] == [1.0, [0.0, 2.0]]


@pytest.mark.parametrize(
    "text, code",
    [
        (spec(kind="explicit", space_dim=2, elements=[[1, 0], [1]]), "dimension mismatch"),
        (spec(kind="explicit", space_dim=2, elements=[]), "empty sequence"),
        (spec(kind="explicit", space_dim=2), "missing field"),
        (spec(kind="explicit", space_dim=0, elements=[[1]]), "invalid parameter"),
        (spec(kind="spiral"), "unsupported family"),
        (spec(kind="weighted_onb", sigma={"map": "zigzag"}, weights={"form": "const"}), "unsupported family"),
        (spec(kind="weighted_onb", sigma={"map": "interleave", "anchor": 0}, weights={"form": "const"}),
         "invalid parameter"),
        (spec(kind="weighted_onb", sigma={"map": "identity"}, weights={"form": "exp", "a": 1}), "missing field"),
        ('{"kind": "explicit",\n "space_dim": 2,\n "elements": [[1, 0], ', "parse error"),
    ],
)
def test_validation_codes(text, code):
    with pytest.raises(ValidationError) as info:
        sq.loads_spec(text)
    assert info.value.code == code
    assert str(info.value).startswith(code)


def test_non_finite_entry_rejected():
    with pytest.raises(ValidationError) as info:
        sq.FiniteSequence(np.array([[1.0, np.nan]]))
    assert info.value.code == "non-finite entry"
    with pytest.raises(ValidationError):
        sq.loads_spec('{"kind": "explicit", "space_dim": 1, "elements": [[NaN]]}')


def test_diagnostics_carry_line_and_field():
    text = '{\n  "kind": "explicit",\n  "space_dim": 2,\n  "elements": [[1, 0], [1]]\n}\n'
    with pytest.raises(ValidationError) as info:
        sq.loads_spec(text)
    assert info.value.field == "elements[1]"
    assert info.value.line == 4
    with pytest.raises(ValidationError) as info:
        sq.loads_spec('{\n"kind": "explicit",\n"space_dim": 2,\n')
    assert info.value.line is not None


def test_load_spec_roundtrip(tmp_path):
    d = {"kind": "weighted_onb", "sigma": {"map": "prefix", "prefix": [3, 3], "tail": {"map": "identity"}, "shift": 3},
         "weights": {"form": "prefix", "values": [2.0, [0.0, 1.0]], "tail": {"form": "exp", "a": 1.0, "r": 0.5}}}
    p = tmp_path / "s.json"
    p.write_text(json.dumps(d))
    s = sq.load_spec(p)
    assert sq.spec_to_dict(s) == d
    assert sq.spec_to_dict(sq.parse_spec(sq.spec_to_dict(s))) == d


def test_validate_accepts_objects_and_lists():
    assert len(sq.validate([[1, 0], [0, 1]])) == 2
    w = sq.WeightedONB(sq.IdentityMap(), sq.ConstWeight(1))
    assert sq.validate(w) is w
    with pytest.raises(ValidationError):
        sq.validate(sq.AnchoredONB(0))
    with pytest.raises(ValidationError):
        sq.validate(object())


def test_finite_sequence_operations():
    s = sq.FiniteSequence.from_vectors([[1, 0], [0, 1], [1, 1]])
    assert len(s.without(2)) == 2
    np.testing.assert_array_equal(s.without(2).element(2), [1, 1])
    assert s.embed(4).space_dim == 4
    np.testing.assert_array_equal(s.scaled(2).element(3), [2, 2])
    with pytest.raises(InputError):
        s.embed(1)
    with pytest.raises(ValidationError):
        sq.FiniteSequence.from_vectors([[1, 0]]).without(1)
    p = sq.project_onto(s, {2})
    np.testing.assert_array_equal(p.element(3), [0, 1])


def test_index_maps_against_listings():
    assert [sq.InterleaveMap(1)(i) for i in range(1, 9)] == [1, 2, 1, 3, 1, 4, 1, 5]
    assert [sq.InterleaveMap(2)(i) for i in range(1, 7)] == [2, 1, 2, 3, 2, 4]
    assert [sq.TriangularMap()(i) for i in range(1, 11)] == [1, 1, 2, 1, 2, 3, 1, 2, 3, 4]
    assert [sq.PeriodicMap((2, 1, 2))(i) for i in range(1, 7)] == [2, 1, 2, 2, 1, 2]
    pm = sq.PrefixMap((5, 1), sq.IdentityMap(), 1)
    assert [pm(i) for i in range(1, 6)] == [5, 1, 2, 3, 4]


MAPS = [
    sq.IdentityMap(),
    sq.InterleaveMap(1),
    sq.InterleaveMap(3),
    sq.TriangularMap(),
    sq.PeriodicMap((2, 1, 2)),
    sq.PrefixMap((4, 4), sq.IdentityMap(), 2),
    sq.PrefixMap((1,), sq.TriangularMap(), 2),
    sq.PrefixMap((), sq.InterleaveMap(2), 1),
]


def _enumerate_preimage(pre, limit):
    out = {i for i in pre.finite if i <= limit}
    for start, step in pre.progressions:
        out.update(range(start, limit + 1, step))
    for offset, j in pre.triangular:
        b = j
        while offset + sq._tri(b) + j <= limit:
            out.add(offset + sq._tri(b) + j)
            b += 1
    return out


@pytest.mark.parametrize("m", MAPS, ids=lambda m: repr(m))
def test_preimages_match_brute_force(m):
    limit = 200
    for k in range(1, 12):
        brute = {i for i in range(1, limit + 1) if m(i) == k}
        assert _enumerate_preimage(m.preimage(k), limit) == brute


@pytest.mark.parametrize("m", MAPS, ids=lambda m: repr(m))
def test_eventual_law_matches_preimages(m):
    law = m.eventual_law()
    for k in range(law.k0, law.k0 + 6):
        got = _enumerate_preimage(m.preimage(k), 400)
        if isinstance(law, sq.SingleLaw):
            assert got == {law.alpha * k + law.beta}
        elif isinstance(law, sq.EmptyLaw):
            assert got == set()
        else:
            j = k - law.shift
            expected = set()
            b = j
            while law.offset + sq._tri(b) + j <= 400:
                expected.add(law.offset + sq._tri(b) + j)
                b += 1
            assert got == expected


def test_injectivity():
    assert sq.IdentityMap().is_injective()
    assert not sq.InterleaveMap(1).is_injective()
    assert sq.PrefixMap((1,), sq.IdentityMap(), 5).is_injective()
    assert not sq.PrefixMap((7,), sq.IdentityMap(), 5).is_injective()
    assert not sq.PrefixMap((1, 1), sq.IdentityMap(), 5).is_injective()


def test_weight_forms():
    assert sq.PolyWeight(1, 1, 1)(3) == 4
    assert sq.ExpWeight(2, 0.5)(2) == 0.5
    pw = sq.PrefixWeight((9,), sq.PolyWeight(1, 1, 0))
    assert pw(1) == 9 and pw(5) == 5  # tail evaluated at the absolute position
    assert pw.prefix_len() == 1 and pw.base().kind == "poly"


def test_structured_elements_and_truncation():
    a = sq.AnchoredONB(2)
    np.testing.assert_array_equal(a.element(2, 3), [0, 2, 0])
    np.testing.assert_array_equal(a.element(3, 3), [0, 1, 1])
    rr = sq.WeightedONB(sq.InterleaveMap(1), sq.ConstWeight(1))
    seq = sq.truncate(rr, 5)
    assert seq.space_dim == 3 and len(seq) == 5
    assert sq.truncate(rr, 5, space_dim=6).space_dim == 6
    with pytest.raises(InputError):
        sq.truncate(rr, 5, space_dim=2)


def test_truncation_resource_limit(monkeypatch):
    w = sq.WeightedONB()
    with pytest.raises(ResourceError, match="N=20"):
        sq.truncate(w, 20, max_dim=10)
    monkeypatch.setenv("FRAMEKIT_MAX_DIM", "8")
    with pytest.raises(ResourceError):
        sq.truncate(w, 9)
    monkeypatch.setenv("FRAMEKIT_MAX_DIM", "lots")
    with pytest.raises(ValidationError):
        sq.max_dim_from_env()


def test_truncation_plan_validation():
    assert sq.TruncationPlan([4, 8]).sizes == (4, 8)
    for bad in ([], [0, 4], [8, 4], [4, 4]):
        with pytest.raises(ValidationError):
            sq.TruncationPlan(bad)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
                         min_size=3, max_size=3), min_size=1, max_size=5))
def test_spec_dict_roundtrip(vectors):
    s = sq.FiniteSequence.from_vectors(vectors)
    back = sq.parse_spec(json.loads(json.dumps(sq.spec_to_dict(s))))
    np.testing.assert_array_equal(back.matrix, s.matrix)
