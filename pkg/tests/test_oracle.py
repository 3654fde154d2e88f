import pytest

from semtransfer.engine import transfer
from semtransfer.errors import OracleLimitError
from semtransfer.oracle import oracle_candidates, oracle_transfer
from semtransfer.terms import vit_alpha_equal

from support import CORE_SET, base_from_text, load_base, load_vit, vit


def provenances(base, positions):
    return {(base.rules[p].provenance.file.rsplit("/", 1)[-1], base.rules[p].provenance.line) for p in positions}


class TestOracleCandidates:
    def test_worked_example(self):
        base = load_base(*CORE_SET)
        got = provenances(base, oracle_candidates(base.rules, load_vit("bei.vit").conds))
        assert got == {("core.rules", 2), ("core.rules", 3), ("core.rules", 5), ("core.rules", 7)}

    def test_empty_input(self):
        assert oracle_candidates(load_base(*CORE_SET).rules, ()) == set()

    def test_single_rule(self):
        base = base_from_text("[L:a(X)] -> [L:b(X)].")
        assert oracle_candidates(base.rules, vit("l1:a(i1), l2:c(i1)").conds) == {0}


class TestOracleTransfer:
    def test_worked_example(self):
        base = load_base(*CORE_SET, "passen_default.rules")
        v = load_vit("bei.vit")
        result = oracle_transfer(v, base)
        out = transfer(v, base)
        assert any(vit_alpha_equal(out, o) for o in result.outputs)
        assert vit_alpha_equal(result.most_specific, out)
        # the general passen rule gives a second, less specific cover
        assert len(result.outputs) == 2

    def test_empty_base(self):
        v = load_vit("bei.vit")
        result = oracle_transfer(v, base_from_text(""))
        assert len(result.outputs) == 1 and result.outputs[0].conds == v.conds

    def test_tie(self):
        base = base_from_text("[L:a(X)] <-> [L:b(X)].\n[L:a(X)] <-> [L:c(X)].")
        assert len(oracle_transfer(vit("l1:a(i1)"), base).outputs) == 2

    def test_target_conditions_validated(self):
        base = base_from_text("[L:a(X)] -> [L:b(X)], [L1:c(X)].\n[L:a(X)] -> [L:d(X)].")
        result = oracle_transfer(vit("l1:a(i1)"), base)
        assert [d.valid for d in sorted(result.derivations, key=lambda d: d.signature)] == [False, True]
        assert [str(c) for c in result.most_specific.conds] == ["l1:d(i1)"]

    def test_backward_round_trip(self):
        fwd = transfer(load_vit("bei.vit"), load_base("core.rules"))
        back = load_base("core.rules", direction=("en", "de"), pair=("de", "en"))
        assert vit_alpha_equal(oracle_transfer(fwd, back).most_specific, load_vit("bei.vit"))

    def test_size_guard(self):
        many = ", ".join(f"l{k}:a(i{k})" for k in range(1, 20))
        with pytest.raises(OracleLimitError):
            oracle_transfer(vit(many), base_from_text("[L:a(X)] -> [L:b(X)]."))

    def test_externals_refused(self):
        base = base_from_text("[L:a(X)], [ext(X)] -> [L:b(X)].")
        with pytest.raises(OracleLimitError):
            oracle_transfer(vit("l1:a(i1)"), base)

    def test_derivations_are_maximal(self):
        base = base_from_text("[L:a(X)] -> [L:b(X)].")
        result = oracle_transfer(vit("l1:a(i1), l2:a(i2)"), base)
        assert [len(d.signature) for d in result.derivations] == [2]
