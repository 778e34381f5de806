import json
from fractions import Fraction

import pytest

from agiwelfare.errors import FileSyntaxError, InputError
from agiwelfare.io import emit_economy, parse_economy, parse_economy_file
from agiwelfare.scenarios import SCENARIOS, scenario


def _text(name):
    e, c, exp = scenario(name)
    return emit_economy(e, c, exp.extra.get("lindahl"))


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_round_trip_is_identity(name):
    e, c, exp = scenario(name)
    p = parse_economy(_text(name))
    assert p.economy == e and p.candidate == c
    assert emit_economy(p.economy, p.candidate, p.lindahl) == _text(name)


def test_canonical_e0_file(tmp_path):
    f = tmp_path / "e0.json"
    f.write_text(_text("classical_e0"))
    p = parse_economy_file(f)
    assert p.economy.ids == ("h1", "h2", "a")


def test_missing_sigma_names_entity():
    d = json.loads(_text("example1"))
    del d["sigma"]["k"]
    with pytest.raises(InputError, match="'k'"):
        parse_economy(json.dumps(d))


def test_malformed_number_has_location():
    d = json.loads(_text("classical_e0"))
    d["candidate"]["prices"] = ["1", "one"]
    text = json.dumps(d, indent=1)
    with pytest.raises(FileSyntaxError) as info:
        parse_economy(text)
    line = text.splitlines()[info.value.line - 1]
    assert '"one"' in line


def test_broken_json_reports_line_and_column():
    with pytest.raises(FileSyntaxError) as info:
        parse_economy('{\n  "entities": [,]\n}')
    assert info.value.line == 2


def test_rational_strings_and_exact_mode():
    d = json.loads(_text("classical_e0"))
    d["candidate"]["prices"] = ["1/2", "1/2"]
    p = parse_economy(json.dumps(d), exact=True)
    assert p.candidate.prices == (Fraction(1, 2), Fraction(1, 2))
    assert p.economy.exact and p.economy.tol == 0
    assert parse_economy(json.dumps(d)).candidate.prices == (0.5, 0.5)


def test_unknown_section_rejected():
    d = json.loads(_text("classical_e0"))
    d["bogus"] = 1
    with pytest.raises(InputError):
        parse_economy(json.dumps(d))


def test_missing_file():
    with pytest.raises(InputError):
        parse_economy_file("/nonexistent/economy.json")
