"""NodeB table model: lookup fidelity, closed-form consistency, transitions."""

import numpy as np
import pytest

from hybridcell import umts

THETA_KBPS = [572, 465, 405, 360, 322, 285, 242, 191, 144, 115, 96, 83, 73,
              65, 60, 55, 51, 47]


def test_builtin_table_shape(table):
    assert len(table) == 18
    assert list(table.n) == list(range(1, 19))
    assert list(table.theta_bps) == [v * 1e3 for v in THETA_KBPS]


def test_load_per_user_times_count_is_cell_load(table, umts_params):
    deviation = np.abs(table.eta * table.n - umts_params.eta_max)
    assert float(deviation.max()) <= 1e-3


def test_ebno_column_consistent_with_closed_form(table, umts_params):
    worst = 0.0
    for i in range(len(table)):
        derived = umts.ebno_from(table.theta_bps[i], table.sinr_db[i], umts_params)
        worst = max(worst, abs(derived - table.ebno_db[i]))
    assert worst <= 0.75
    table.check_consistency(umts_params)


def test_n_of_eta_examples(table):
    assert umts.n_of_eta(0.9, table) == 1
    assert umts.n_of_eta(0.45, table) == 2
    assert umts.n_of_eta(0.1, table) == 9


def test_n_of_eta_round_trip(table):
    for i in range(len(table)):
        assert umts.n_of_eta(float(table.eta[i]), table) == i + 1


def test_n_of_eta_domain(table):
    with pytest.raises(ValueError):
        umts.n_of_eta(0.95, table)
    with pytest.raises(ValueError):
        umts.n_of_eta(0.049, table)


def test_theta_lookup(table):
    assert umts.theta_3g(0.9, table) == 572e3
    assert umts.theta_3g(0.15, table) == 285e3
    assert umts.theta_3g(0.05, table) == 47e3


def test_theta_closed_form(umts_params):
    # the table deliberately deviates from the closed form; 572 kbps vs
    # ~536 kbps on the first row is expected
    v = umts.theta_3g_closed_form(0.9, 10 ** 0.90612, umts_params)
    assert v == pytest.approx(536e3, rel=0.01)
    assert abs(v - 572e3) / 572e3 < 0.1
    assert umts.theta_3g_closed_form(1.0, 2.0, umts_params) == pytest.approx(
        2 * umts.theta_3g_closed_form(0.5, 2.0, umts_params), rel=1e-12)
    low = umts.theta_3g_closed_form(0.05, 10 ** 0.73614, umts_params)
    assert low == pytest.approx(47e3, rel=0.2)


def test_ebno_from_examples(umts_params):
    assert umts.ebno_from(572e3, 0.8423, umts_params) == pytest.approx(9.11, abs=0.01)
    assert abs(umts.ebno_from(572e3, 0.8423, umts_params) - 9.0612) <= 0.75
    assert umts.ebno_from(umts_params.w, 0.0, umts_params) == pytest.approx(0.0, abs=1e-12)
    assert umts.ebno_from(47e3, -11.9231, umts_params) == pytest.approx(7.20, abs=0.01)
    with pytest.raises(ValueError):
        umts.ebno_from(0.0, 0.0, umts_params)


def test_pole_capacity(umts_params):
    assert umts.pole_capacity(umts_params, 10 ** 0.73614) == 17
    assert umts.pole_capacity(umts_params, 1.0) == 93
    # doubling the QoS floor halves the pre-floor value
    doubled = umts.UmtsParams(theta_min=2 * umts_params.theta_min)
    raw = (umts_params.eta_max * umts_params.w
           / (umts_params.theta_min * 1.0 * umts_params.interference_term))
    assert umts.pole_capacity(doubled, 1.0) == int(np.floor(raw / 2))


def test_delta_eta_moves_one_row(table):
    assert umts.delta_eta(0.9, umts.CONNECT, table) == 0.45
    assert umts.delta_eta(0.45, umts.CONNECT, table) == 0.3
    assert umts.delta_eta(0.45, umts.DEPART, table) == 0.9
    # clamps at both ends, matching the decision recursion
    assert umts.delta_eta(0.9, umts.DEPART, table) == 0.9
    assert umts.delta_eta(0.05, umts.CONNECT, table) == 0.05
    with pytest.raises(ValueError):
        umts.delta_eta(0.9, "leave", table)


def test_mu_3g(table, umts_params):
    assert umts.mu_3g(0.9, umts_params, table) == pytest.approx(0.572, rel=1e-12)
    assert umts.mu_3g(0.05, umts_params, table) == pytest.approx(0.047, rel=1e-12)
    mus = [umts.mu_3g(float(e), umts_params, table) for e in table.eta]
    assert min(mus) == mus[-1]


def test_aggregate_unimodal_with_peak_at_six(table):
    agg = table.n * table.theta_bps
    assert int(np.argmax(agg)) == 5  # N = 6
    assert agg[5] == 1710e3
    assert all(b > a for a, b in zip(agg[:6], agg[1:6]))
    assert all(b < a for a, b in zip(agg[5:], agg[6:]))
    assert agg[-1] == 846e3


def test_csv_round_trip(tmp_path, table, umts_params):
    path = tmp_path / "table.csv"
    lines = [",".join(umts.TABLE_CSV_HEADER)]
    for i in range(len(table)):
        lines.append(",".join(repr(float(v)) for v in [
            table.eta[i], table.log_eta[i], table.n[i],
            table.sinr_db[i], table.theta_bps[i] / 1e3, table.ebno_db[i]]))
    path.write_text("\n".join(lines) + "\n")
    loaded = umts.UmtsTable.from_csv(path, umts_params)
    assert np.array_equal(loaded.eta, table.eta)
    assert np.array_equal(loaded.theta_bps, table.theta_bps)


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("eta,N\n0.9,1\n")
    with pytest.raises(ValueError):
        umts.UmtsTable.from_csv(path)


def test_table_monotonicity_enforced():
    with pytest.raises(ValueError):
        umts.UmtsTable(eta=[0.9, 0.95], log_eta=[0, 0], n=[1, 2],
                       sinr_db=[0, 0], theta_bps=[572e3, 465e3],
                       ebno_db=[9, 7])
    with pytest.raises(ValueError):
        umts.UmtsTable(eta=[0.9, 0.45], log_eta=[0, 0], n=[1, 3],
                       sinr_db=[0, 0], theta_bps=[572e3, 465e3],
                       ebno_db=[9, 7])


def test_invalid_params_rejected():
    with pytest.raises(ValueError):
        umts.UmtsParams(eta_max=0.0)
    with pytest.raises(ValueError):
        umts.UmtsParams(alpha_bar=2.0, i_bar=0.5)
    with pytest.raises(ValueError):
        umts.UmtsParams(theta_min=-1.0)
