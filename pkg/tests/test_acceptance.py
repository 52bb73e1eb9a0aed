"""One test per numbered acceptance check, with a printed PASS/FAIL line."""

from critspde import acceptance


def _run(num):
    res = acceptance.CHECKS[num]()
    print(acceptance.format_result(num, res))
    assert res.passed, f"criterion {num}: {res.detail}"


def test_criterion_01_exponent_calculus():
    _run(1)


def test_criterion_02_critical_weight_formula():
    _run(2)


def test_criterion_03_identity_suites():
    _run(3)


def test_criterion_04_interpolation_estimate():
    _run(4)


def test_criterion_05_bootstrap_chain():
    _run(5)


def test_criterion_06_heat_exactness():
    _run(6)


def test_criterion_07_noise_calibration():
    _run(7)


def test_criterion_08_energy_bound():
    _run(8)


def test_criterion_09_drift_conservation():
    _run(9)


def test_criterion_10_regularity_bands():
    _run(10)


def test_criterion_11_determinism():
    _run(11)


def test_criterion_12_decision_table():
    _run(12)


def test_suites_cover_every_criterion():
    assert acceptance.SUITES["all"] == tuple(range(1, 13))
    named = set()
    for name, nums in acceptance.SUITES.items():
        if name != "all":
            named.update(nums)
    assert named == set(range(1, 13))


def test_failures_are_reported_not_raised():
    results = acceptance.run_checks([12])
    assert len(results) == 1 and results[0][0] == 12
    assert results[0][1].passed
