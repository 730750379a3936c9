import pytest

from critpoly import PipelineConfig, compute_critical, load_curve
from critpoly.classpoly import hilbert_class_poly
from critpoly.pipeline import PipelineError, choose_algorithm, function_tag
from critpoly.eta import choose_yang_h


def test_choose_algorithm():
    assert choose_algorithm(load_curve("37a")).algorithm == "dense"
    assert choose_algorithm(load_curve("389a")).algorithm == "yang"
    assert choose_algorithm(load_curve("389a"), PipelineConfig(algorithm="yang")).reason.startswith("forced")
    with pytest.warns(RuntimeWarning):
        choose_algorithm(load_curve("389a"), PipelineConfig(algorithm="dense"))
    with pytest.raises(ValueError):
        choose_algorithm(load_curve("37a"), PipelineConfig(algorithm="magic"))


def test_function_tags():
    assert function_tag(choose_yang_h(37)).startswith("j(j-1728)*eta[")
    assert function_tag(choose_yang_h(89)).startswith("j^2(j-1728)*eta[")


@pytest.mark.slow
def test_seed_and_cache_do_not_change_F(critical):
    base = critical("37a").polynomial
    other = compute_critical(load_curve("37a"), PipelineConfig(seed=7, use_cache=False))
    assert other.polynomial == base
    assert other.bookkeeping["primes_used"] >= 2


@pytest.mark.slow
def test_bookkeeping_37b(critical):
    c = critical("37b")
    b = c.bookkeeping
    assert c.polynomial == hilbert_class_poly(-16) ** 2
    assert (b["T"], b["d_N"], b["c_N"], b["deg_u"]) == (0, 38, 2, 38)
    assert b["deg_r1"] == 36


@pytest.mark.slow
def test_cusp_degenerate_48a(critical):
    c = critical("48a")
    assert c.polynomial.degree == 0 and c.cusp_degenerate


def test_prime_budget_exhaustion():
    with pytest.raises(PipelineError):
        compute_critical(load_curve("37a"), PipelineConfig(max_primes=1, use_cache=False))


@pytest.mark.slow
def test_yang_route_agrees_with_dense_37a(critical):
    dense = critical("37a").polynomial
    yang = critical("37a", "yang")
    # F_{E, h~} has the same degree; its roots are h~-values of the same points
    assert yang.polynomial.degree == dense.degree == 2
    assert yang.algorithm == "yang"
    b = yang.bookkeeping
    assert (b["m"], b["n"]) == (75, 77)


@pytest.mark.slow
def test_full_shift_exponent_gives_same_F(critical):
    full = compute_critical(load_curve("37a"), PipelineConfig(t_exponent=None))
    assert full.bookkeeping["T"] == 2
    assert full.polynomial == critical("37a").polynomial
