import pytest

from app.lib.exceptions import PreconditionError
from app.lib.utils import parse_field
from app.ops.coxeter import get_group
from app.ops.verify import SUITE_ALIASES, SUITES, SuiteContext, run_suite, run_suites, suite_names

def test_suite_names():
    """Test that all expands in registry order and unknown names are refused"""
    assert suite_names(["all"]) == list(SUITES)
    assert suite_names(["gkm", "all"])[0] == "gkm"
    assert suite_names(["thm62", "thm62"]) == ["thm62"]
    assert suite_names(["rank-symmetry", "thm58", "rank-descent"]) == ["thm58", "thm62"]
    assert set(SUITE_ALIASES.values()) <= set(SUITES)
    with pytest.raises(PreconditionError):
        suite_names(["nope"])

def test_all_suites_pass_for_a2(a2, qq, f3):
    """Test every suite on A2 over Q and over F3"""
    for field in (qq, f3):
        report = run_suites(["all"], SuiteContext(a2, field))
        failures = [line for suite in report.suites for line in suite.failures]
        assert report.passed, failures
        assert report.type == "A2"
        assert report.field == field.label
        assert all(suite.theorem for suite in report.suites)

def test_suites_below_an_element(a3, qq):
    """Test the rank suites on the lower interval of s2s1s3s2"""
    context = SuiteContext(a3, qq, w=a3.element("2132"))
    for name in ("ranks-vs-kl", "thm58", "thm62", "gamma-div"):
        result = run_suite(name, context)
        assert result.passed, result.failures
        assert result.checked > 0

def test_parabolic_suite_with_given_J(a3, qq):
    """Test the parabolic suite for one chosen parabolic subgroup"""
    result = run_suite("parabolic", SuiteContext(a3, qq, J=frozenset({1, 3}), w=a3.element("2132")))
    assert result.passed, result.failures
    assert result.checked > 0

def test_gkm_suite_reports_g2_in_characteristic_three(g2, f3, qq):
    """Test that a non-GKM graph outside type A is a finding, not a failure"""
    result = run_suite("gkm", SuiteContext(g2, f3))
    assert result.passed
    assert len(result.findings) == 1
    assert run_suite("gkm", SuiteContext(g2, qq)).findings == []

def test_kl_identities_suite_b2(b2):
    """Test the KL identity suite on B2"""
    result = run_suite("kl-identities", SuiteContext(b2))
    assert result.passed, result.failures
    assert result.skipped == 0

def _assert_clean(result):
    assert result.passed, result.failures
    assert result.checked > 0

@pytest.mark.slow
@pytest.mark.parametrize("label", ["B2", "A3"])
def test_ranks_match_kl_on_whole_groups(label, qq):
    """Test graded ranks against KL polynomials for every pair of a whole group over Q"""
    result = run_suite("ranks-vs-kl", SuiteContext(get_group(label), qq))
    _assert_clean(result)
    assert result.findings == []

@pytest.mark.slow
def test_ranks_match_kl_in_b3_up_to_length_five(b3, qq):
    """Test graded ranks against KL polynomials for w of length at most 5 in B3"""
    context = SuiteContext(b3, qq, max_length=5)
    assert max(b3.length(w) for w in context.sweep()) == 5
    result = run_suite("ranks-vs-kl", context)
    _assert_clean(result)
    assert result.findings == []

@pytest.mark.slow
@pytest.mark.parametrize("field", ["Q", "F3"])
def test_inverse_and_right_multiplication_ranks_on_a3(a3, field):
    """Test rank invariance under inversion and right multiplication on all of A3"""
    _assert_clean(run_suite("thm58", SuiteContext(a3, parse_field(field))))

@pytest.mark.slow
@pytest.mark.parametrize("label, field", [
    ("A3", "Q"), ("A3", "F3"), ("A3", "F5"),
    ("B2", "Q"), ("B2", "F3"), ("B2", "F5"),
])
def test_rank_descent_identity(label, field):
    """Test rank of B_w at y equals rank at ys on whole groups"""
    _assert_clean(run_suite("thm62", SuiteContext(get_group(label), parse_field(field))))

@pytest.mark.slow
@pytest.mark.parametrize("label, field", [
    ("B2", "Q"), ("B2", "F3"), ("B2", "F5"),
    ("A3", "Q"), ("A3", "F3"), ("A3", "F5"),
])
def test_smoothness_of_the_longest_element(label, field):
    """Test that every stalk of B_w0 has rank 1"""
    group = get_group(label)
    result = run_suite("smoothness", SuiteContext(group, parse_field(field)))
    _assert_clean(result)
    assert result.checked == group.order

@pytest.mark.slow
def test_pullbacks_on_a3(a3, qq):
    """Test pullbacks along the inverse map and every right multiplication isomorphism of A3"""
    _assert_clean(run_suite("pullback", SuiteContext(a3, qq)))

@pytest.mark.slow
def test_gamma_divisibility_on_a3(a3, qq):
    """Test Hilbert series divisibility by 1+q for every admissible triple of A3"""
    result = run_suite("gamma-div", SuiteContext(a3, qq))
    _assert_clean(result)
    assert result.skipped == 0

@pytest.mark.slow
@pytest.mark.parametrize("label", ["B2", "A3"])
def test_combinatorial_lemmas(label, qq):
    """Test reflection sets, s-stable intervals, lifting and interval isomorphisms exhaustively"""
    _assert_clean(run_suite("lemmas", SuiteContext(get_group(label), qq)))

@pytest.mark.slow
def test_kl_identities_on_a3(a3):
    """Test the KL identity suite on all of A3"""
    _assert_clean(run_suite("kl-identities", SuiteContext(a3)))

@pytest.mark.slow
@pytest.mark.parametrize("J", [{1}, {3}, {1, 3}])
def test_parabolic_ranks_on_a3(a3, qq, J):
    """Test parabolic ranks against P^J for the parabolic subgroups of A3 over Q"""
    _assert_clean(run_suite("parabolic", SuiteContext(a3, qq, J=frozenset(J))))
