import json

import pytest

jsonschema = pytest.importorskip("jsonschema")

from importlib import resources

from valsem.errors import UsageError, VerificationError
from valsem.exact import Dyadic
from valsem.genseq import SeqFamily, ValuationDef, gamma
from valsem.wild import (
    Certificate,
    WildParams,
    block_index,
    make_wild_valuation,
    parse_bound,
    required_index,
    require_valid,
    wild_certificate,
)

NEG_SQ = lambda n: -(n**2)
POS_SQ = lambda n: n**2

PARAM_GRID = [
    WildParams(),
    WildParams(a=Dyadic(3, 1), c=2),
    WildParams(a=Dyadic(5, 2), c=3),
]


def build(kind, params, N=512):
    v = make_wild_valuation(kind, f=NEG_SQ, g=POS_SQ, N=N, params=params)
    return wild_certificate(kind, v, params, f=NEG_SQ, g=POS_SQ, N=N)


class TestParams:
    def test_validation(self):
        with pytest.raises(UsageError):
            WildParams(a=0)
        with pytest.raises(UsageError):
            WildParams(a=-1)
        with pytest.raises(UsageError):
            WildParams(c=0)
        with pytest.raises(UsageError):
            WildParams(a2=Dyadic(-1, 1))
        p = WildParams(a=Dyadic(3, 1))
        assert p.a_value() == Dyadic(3, 1)
        assert p.a2_value() == Dyadic(3, 1)  # defaults to a


class TestIndices:
    def test_required_index(self):
        # largest i with e * 2^(i+2) <= N
        assert required_index(1, 8) == 1
        assert required_index(1, 4096) == 10
        assert required_index(2, 4096) == 9
        with pytest.raises(UsageError):
            required_index(1, 7)

    def test_block_index_brackets_n(self):
        for e in (1, 2, 3):
            for n in range(e << 3, 600):
                i = block_index(e, n)
                assert e << (i + 2) <= n < e << (i + 3)


class TestCertificates:
    @pytest.mark.parametrize("kind", ["decreasing", "increasing", "both"])
    @pytest.mark.parametrize("params", PARAM_GRID)
    def test_valid_over_range(self, kind, params):
        cert = build(kind, params)
        assert cert.valid
        assert cert.first_bad() is None
        require_valid(cert)  # should not raise
        # rows cover every n in [n0, N], once per chain
        per_n = 2 if kind == "both" else 1
        ns = sorted({r.n for r in cert.rows})
        assert ns == list(range(ns[0], 513))
        assert len(cert.rows) == per_n * len(ns)

    def test_tilde_cross_check_present(self):
        cert = build("decreasing", WildParams())
        low = [r for r in cert.rows if r.i <= 4]
        assert low and all(r.tilde_second is not None for r in low)
        high = [r for r in cert.rows if r.i > 4]
        assert high and all(r.tilde_second is None for r in high)

    def test_negative_control(self):
        params = WildParams()
        v = make_wild_valuation("decreasing", f=NEG_SQ, N=512, params=params)
        # crush one weight down to 1: gamma stops decreasing fast enough
        bad = SeqFamily("P", {i: (1 if i == 2 else v.p.weight(i)) for i in range(1, v.p.max_index + 1)})
        vbad = ValuationDef("P3", p=bad)
        assert gamma(bad, 2) >= NEG_SQ(2 << 5)
        cert = wild_certificate("decreasing", vbad, params, f=NEG_SQ, N=512)
        assert not cert.valid
        row = cert.first_bad()
        assert row is not None and row.i == 2
        with pytest.raises(VerificationError, match="n="):
            require_valid(cert)

    def test_increasing_negative_control(self):
        params = WildParams()
        v = make_wild_valuation("increasing", g=POS_SQ, N=512, params=params)
        bad = SeqFamily("Q", {i: (1 if i == 2 else v.q.weight(i)) for i in range(1, v.q.max_index + 1)})
        vbad = ValuationDef("Q3", q=bad)
        cert = wild_certificate("increasing", vbad, params, g=POS_SQ, N=512)
        assert not cert.valid

    def test_range_validation(self):
        v = make_wild_valuation("decreasing", f=NEG_SQ, N=512)
        with pytest.raises(UsageError):
            wild_certificate("decreasing", v, WildParams(), f=NEG_SQ, N=4)
        with pytest.raises(UsageError):
            wild_certificate("sideways", v, WildParams(), f=NEG_SQ)
        with pytest.raises(UsageError):
            wild_certificate("decreasing", v, WildParams())  # missing f

    def test_missing_family_rejected(self):
        v = ValuationDef.q3([1, 3, 5])
        with pytest.raises(UsageError):
            wild_certificate("decreasing", v, WildParams(), f=NEG_SQ, N=64)

    def test_weight_exhaustion_named(self):
        v = make_wild_valuation("decreasing", f=NEG_SQ, N=64)
        with pytest.raises(UsageError, match="index"):
            wild_certificate("decreasing", v, WildParams(), f=NEG_SQ, N=4096)


class TestJson:
    def test_schema(self):
        schema = json.loads(
            resources.files("valsem.schemas").joinpath("certificate.json").read_text()
        )
        for kind in ("decreasing", "both"):
            cert = build(kind, WildParams(), N=64)
            payload = cert.to_json()
            jsonschema.validate(payload, schema)
            assert payload["valid"] is True
            # round-trips through json text
            assert json.loads(json.dumps(payload)) == payload

    def test_row_fields(self):
        cert = build("both", WildParams(), N=64)
        row = cert.to_json()["rows"][0]
        assert {"n", "i", "chain", "lambda", "witness", "lhs", "rhs", "ok"} <= set(row)


class TestParseBound:
    def test_named_forms(self):
        assert parse_bound("neg_linear")(7) == -7
        assert parse_bound("linear")(7) == 7
        assert parse_bound("neg_pow(2)")(5) == -25
        assert parse_bound("pow:3")(2) == 8

    def test_table(self, tmp_path):
        p = tmp_path / "bounds.txt"
        p.write_text("# comment\n8 -100\n9 -120\n\n10 -150  # inline\n")
        fn = parse_bound(f"table:{p}")
        assert fn(9) == -120
        with pytest.raises(UsageError, match="n=11"):
            fn(11)

    def test_errors(self, tmp_path):
        with pytest.raises(UsageError):
            parse_bound("mystery")
        with pytest.raises(UsageError):
            parse_bound("pow(x)")
        with pytest.raises(UsageError):
            parse_bound("pow(0)")
        with pytest.raises(UsageError):
            parse_bound("table:/nonexistent/file")
        bad = tmp_path / "bad.txt"
        bad.write_text("8 notanint\n")
        with pytest.raises(UsageError):
            parse_bound(f"table:{bad}")
