import pytest

from widemorita import corpus
from widemorita.bicat import AXIOMS, AxiomSamples, BimInstance, NotComposable, check_axioms
from widemorita.coring import REMInstance
from widemorita.report import ERROR, FAIL


class DoubledAssociator(BimInstance):
    name = "Bim with 2a"

    def associator(self, f, g, h):
        return super().associator(f, g, h).scale(2)


def test_bim_axioms_pass(fp):
    rep = check_axioms(corpus.BIM, corpus.bim_axiom_samples(3, 12, fp))
    assert rep.passed, rep.failures
    assert sorted(rep.names()) == sorted(AXIOMS)
    for name in AXIOMS:
        assert rep.get(name).info["evaluated"] > 0


def test_bim_axioms_over_rationals():
    rep = check_axioms(corpus.BIM, corpus.bim_axiom_samples(7, 3, corpus.QQ, max_dim=2))
    assert rep.passed, rep.failures


def test_doubled_associator_breaks_pentagon(fp):
    rep = check_axioms(DoubledAssociator(), corpus.bim_axiom_samples(1, 4, fp))
    pent = rep.get("pentagon")
    assert pent.status == FAIL
    assert {"row", "col", "lhs", "rhs"} <= set(pent.witness)


def test_non_composable_sample_is_an_error(fp):
    s = corpus.bim_axiom_samples(2, 1, fp)
    col = corpus.column_bimodule(2, fp)
    s.quadruples.append((col, col, col, col))
    rep = check_axioms(corpus.BIM, s)
    assert rep.get("pentagon").status == ERROR


def test_hcomp1_mismatch_raises(fp):
    col = corpus.column_bimodule(2, fp)
    with pytest.raises(NotComposable):
        corpus.BIM.hcomp1(col, col)


def test_rem_axioms_pass(fp):
    rep = check_axioms(REMInstance(), corpus.rem_axiom_samples(4, 4, fp))
    assert rep.passed, rep.failures


def test_w_axioms_pass(fp):
    from widemorita.wide import WInstance

    rep = check_axioms(WInstance(corpus.BIM), corpus.w_axiom_samples(5, 4, fp))
    assert rep.passed, rep.failures


def test_empty_samples_report_zero_evaluations(fp):
    rep = check_axioms(corpus.BIM, AxiomSamples())
    assert rep.get("pentagon").info["evaluated"] == 0
