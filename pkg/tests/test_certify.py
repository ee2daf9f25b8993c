import json

import pytest

from novikov_probe.certify import FREE_SUBGROUP_PRESENT
from novikov_probe.certify import INCONCLUSIVE
from novikov_probe.certify import amenability_consistency
from novikov_probe.certify import certify
from novikov_probe.certify import certify_scan
from novikov_probe.certify import replay_certificate
from novikov_probe.certify import scan_classes
from novikov_probe.errors import InputError
from novikov_probe.errors import NoClass
from novikov_probe.fox import assemble_presentation_complex
from novikov_probe.novikov import compute_numbers
from novikov_probe.options import EngineOptions
from novikov_probe.presentation import parse_presentation
from novikov_probe.presentation import validate_character

FREE2 = "<a,b | >"
Z2 = "<a,b | a b a^-1 b^-1>"
KLEIN = "<a,b | a b a b^-1>"
BS12 = "<a,b | a b a^-1 = b^2>"
GENUS2 = "<a1, b1, a2, b2 | a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1>"


def _certificate(text: str, row: list[int], options: EngineOptions | None = None):
    pres = parse_presentation(text)
    xi = validate_character(pres, [row])
    numbers = compute_numbers(assemble_presentation_complex(pres, xi), options)
    return certify(pres, xi, numbers)


def test_free_group_fires_three_routes() -> None:
    cert = _certificate(FREE2, [1, 0])

    assert cert.verdict == FREE_SUBGROUP_PRESENT
    assert cert.route_names == ["novikov-b1", "euler-2complex", "deficiency"]
    assert cert.routes[0].witness["b1"] == 1
    assert cert.routes[1].witness == {"chi": -1}
    assert cert.routes[2].witness["deficiency"] == 2
    assert len(cert.bns_implications) == 3


def test_baumslag_solitar_is_inconclusive() -> None:
    cert = _certificate(BS12, [1, 0], EngineOptions(torsion=True))

    assert cert.verdict == INCONCLUSIVE
    assert cert.routes == ()
    assert cert.bns_implications == ()
    assert cert.torsion_note is not None
    assert cert.torsion_note["torsion_minus"] == [0, 1, 0]


def test_genus_two_certificate_and_bns_statement() -> None:
    cert = _certificate(GENUS2, [1, 0, 0, 0])

    assert cert.verdict == FREE_SUBGROUP_PRESENT
    assert cert.routes[0].witness["b1"] == 2
    assert "a1=1" in cert.bns_implications[0]
    assert cert.bns_implications[1].startswith("-xi is not in Sigma")


def test_amenability_consistency() -> None:
    z2 = parse_presentation(Z2)
    bs = parse_presentation(BS12)
    free = parse_presentation(FREE2)

    z2_scan = [entry.xi for entry in scan_classes(z2, 10, 0)]
    passed = amenability_consistency(z2, True, z2_scan)
    bs_passed = amenability_consistency(bs, True, [validate_character(bs, [[1, 0]])])
    failed = amenability_consistency(free, True, [validate_character(free, [[1, 0]])])

    assert passed.status == "PASS"
    assert passed.checked == 10
    assert bs_passed.passed
    assert failed.status == "FAIL"
    assert failed.violations[0]["label"] == "a=1,b=0"
    assert failed.violations[0]["b1"] == 1
    with pytest.raises(InputError):
        amenability_consistency(z2, False, z2_scan)


def test_scan_classes() -> None:
    free = scan_classes(parse_presentation(FREE2), 10, 0)
    z2 = scan_classes(parse_presentation(Z2), 10, 0)

    assert free[0].numbers.b1 > 0
    assert len(z2) == 10
    assert all(entry.numbers.b1 == 0 for entry in z2)
    assert len({entry.xi.primitive_rows for entry in z2}) == 10
    with pytest.raises(NoClass):
        scan_classes(parse_presentation("<a,b | a^2 = b^3, a b>"), 10, 0)


def test_scan_is_deterministic_and_warns_when_short() -> None:
    klein = parse_presentation(KLEIN)

    with pytest.warns(UserWarning):
        first = scan_classes(klein, 10, 3)
    with pytest.warns(UserWarning):
        second = scan_classes(klein, 10, 3)

    assert [e.xi.primitive_rows for e in first] == [e.xi.primitive_rows for e in second]
    assert all(entry.numbers.b1 == 0 for entry in first)


def test_certify_scan_picks_a_firing_class() -> None:
    pres = parse_presentation(FREE2)

    cert = certify_scan(pres, scan_classes(pres, 4, 0))

    assert cert.verdict == FREE_SUBGROUP_PRESENT
    assert "novikov-b1" in cert.route_names


def test_replay_reproduces_the_verdict() -> None:
    for text, row in ((FREE2, [1, 0]), (GENUS2, [1, 0, 0, 0]), (BS12, [1, 0])):
        cert = _certificate(text, row)
        document = json.loads(json.dumps(cert.as_json()))

        replayed = replay_certificate(document)

        assert replayed.verdict == cert.verdict
        assert replayed.route_names == cert.route_names


def test_replay_rejects_malformed_documents() -> None:
    with pytest.raises(InputError):
        replay_certificate({"routes": []})
    with pytest.raises(InputError):
        replay_certificate(
            {
                "presentation": FREE2,
                "routes": [{"name": "novikov-b1", "witness": {"b1": 1}}],
            }
        )
