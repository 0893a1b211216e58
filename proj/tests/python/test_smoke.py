"""Smoke tests for the python bindings."""

import math

import pytest

import stopcal


def test_gbm_is_deterministic():
    a = stopcal.generate_gbm(7, 100.0, 0.05, 0.2, 1000)
    b = stopcal.generate_gbm(7, 100.0, 0.05, 0.2, 1000)
    assert len(a) == len(b) == 1000
    assert all(x.price == y.price for x, y in zip(a.bars, b.bars))
    assert all(bar.price > 0 for bar in a.bars)


def test_signal_run_and_drawdown():
    series = stopcal.generate_gbm(42, 100.0, 0.1, 0.4, 30 * 390)
    grid = stopcal.to_hourly_grid(series)
    sma = stopcal.compute_sma(grid, 20)
    run = stopcal.run_signal_only(series, sma, grid)
    assert run.trades, "volatile fixture should trade"
    compounded = 100000.0
    for trade in run.trades:
        assert trade.exit_time > trade.entry_time
        measured = stopcal.measure_max_drawdown(
            series, trade.entry_time, trade.exit_time
        )
        assert trade.max_drawdown == measured
        compounded *= 1.0 + trade.trade_return
    assert math.isclose(run.final_nlv, compounded, rel_tol=1e-9)


def test_backtest_modes_and_delta():
    series = stopcal.generate_gbm(9, 100.0, 0.0, 0.45, 30 * 390)
    config = stopcal.BacktestConfig()
    config.min_corpus = 8

    config.mode = stopcal.Mode.SIGNAL_ONLY
    signal = stopcal.run_backtest(series, config)

    config.mode = stopcal.Mode.T_METHOD
    stopped = stopcal.run_backtest(series, config)

    delta = stopcal.delta_nlv(stopped.final_nlv, signal.final_nlv)
    assert math.isfinite(delta)

    config.mode = stopcal.Mode.T_METHOD
    config.threshold_override = 1.0
    degenerate = stopcal.run_backtest(series, config)
    assert len(degenerate.trades) == len(signal.trades)
    assert math.isclose(degenerate.final_nlv, signal.final_nlv, rel_tol=1e-9)


def test_planted_calibration_recovers_threshold():
    spec = stopcal.PlantedSpec()
    planted = stopcal.generate_planted(3, spec)
    grid = stopcal.to_hourly_grid(planted.series)
    sma = stopcal.compute_sma(grid, spec.sma_period)
    run = stopcal.run_signal_only(planted.series, sma, grid)
    assert len(run.trades) == spec.n_trades
    report = stopcal.calibrate_trades(run.trades)
    assert abs(report.threshold - planted.known_threshold) <= report.width


def test_rolling_window_flags_underfull():
    series = stopcal.generate_gbm(11, 100.0, 0.05, 0.4, 20 * 390)
    grid = stopcal.to_hourly_grid(series)
    sma = stopcal.compute_sma(grid, 20)
    artificial = stopcal.generate_artificial_trades(
        series, grid, sma, 20, series.bars[-1].timestamp
    )
    assert artificial
    params = stopcal.RollingParams()
    params.window_m = 10 ** 6
    report = stopcal.calibrate_rolling(artificial, params, 8)
    assert report.underfull_window
    assert report.corpus_size == len(artificial)


def test_pearson_and_errors():
    x = [float(i) for i in range(10)]
    y = [2.0 * v + 1.0 for v in x]
    r = stopcal.pearson(x, y)
    assert math.isclose(r.rho, 1.0, abs_tol=1e-12)
    assert r.p_value <= 1e-12

    with pytest.raises(stopcal.StopcalError):
        stopcal.pearson([1.0, 2.0], [1.0])
    with pytest.raises(stopcal.StopcalError):
        stopcal.load_csv("/nonexistent/path.csv", "X")
