#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "stopcal/analytics.hpp"
#include "stopcal/backtester.hpp"
#include "stopcal/drawdown_stats.hpp"
#include "stopcal/errors.hpp"
#include "stopcal/market_data.hpp"
#include "stopcal/rolling_calibrator.hpp"
#include "stopcal/signal_engine.hpp"
#include "stopcal/time_utils.hpp"

namespace py = pybind11;
using namespace stopcal;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Trailing stop-loss calibration from drawdown distributions";

  py::register_exception<Error>(m, "StopcalError");

  m.def("parse_timestamp", [](const std::string& text) {
    const auto ts = parse_timestamp(text);
    if (!ts) raise(Errc::ParseError, "bad timestamp '" + text + "'");
    return *ts;
  });
  m.def("format_timestamp", &format_timestamp);

  py::class_<PriceBar>(m, "PriceBar")
      .def(py::init<Timestamp, double>(), py::arg("timestamp"),
           py::arg("price"))
      .def_readonly("timestamp", &PriceBar::timestamp)
      .def_readonly("price", &PriceBar::price)
      .def("__repr__", [](const PriceBar& b) {
        return "PriceBar(" + format_timestamp(b.timestamp) + ", " +
               std::to_string(b.price) + ")";
      });

  py::class_<BarSeries>(m, "BarSeries")
      .def_readonly("asset_id", &BarSeries::asset_id)
      .def_readonly("bars", &BarSeries::bars)
      .def("__len__", &BarSeries::size);

  py::class_<HourlyGridPoint>(m, "HourlyGridPoint")
      .def_readonly("timestamp", &HourlyGridPoint::timestamp)
      .def_readonly("price", &HourlyGridPoint::price)
      .def_readonly("bar_index", &HourlyGridPoint::bar_index);

  py::class_<HourlyGrid>(m, "HourlyGrid")
      .def_readonly("points", &HourlyGrid::points)
      .def("__len__", &HourlyGrid::size);

  py::class_<PlantedSpec>(m, "PlantedSpec")
      .def(py::init<>())
      .def_readwrite("d_star", &PlantedSpec::d_star)
      .def_readwrite("gain", &PlantedSpec::gain)
      .def_readwrite("loss", &PlantedSpec::loss)
      .def_readwrite("n_trades", &PlantedSpec::n_trades)
      .def_readwrite("win_fraction", &PlantedSpec::win_fraction)
      .def_readwrite("p0", &PlantedSpec::p0)
      .def_readwrite("sma_period", &PlantedSpec::sma_period);

  py::class_<PlantedResult>(m, "PlantedResult")
      .def_readonly("series", &PlantedResult::series)
      .def_readonly("known_threshold", &PlantedResult::known_threshold)
      .def_readonly("all_winners", &PlantedResult::all_winners);

  m.def("load_csv", &load_csv, py::arg("path"), py::arg("asset_id"));
  m.def("save_csv", &save_csv, py::arg("series"), py::arg("path"));
  m.def("to_hourly_grid", &to_hourly_grid);
  m.def("generate_gbm", &generate_gbm, py::arg("seed"), py::arg("p0"),
        py::arg("mu"), py::arg("sigma"), py::arg("n_minutes"),
        py::arg("asset_id") = "GBM");
  m.def("generate_planted", &generate_planted, py::arg("seed"),
        py::arg("spec"), py::arg("asset_id") = "PLANTED");

  py::enum_<TradeKind>(m, "TradeKind")
      .value("REAL", TradeKind::Real)
      .value("ARTIFICIAL", TradeKind::Artificial);
  py::enum_<Outcome>(m, "Outcome")
      .value("WIN", Outcome::Win)
      .value("LOSS", Outcome::Loss);
  py::enum_<ExitReason>(m, "ExitReason")
      .value("SIGNAL", ExitReason::Signal)
      .value("STOP", ExitReason::Stop)
      .value("FORCED", ExitReason::Forced)
      .value("HORIZON", ExitReason::Horizon);

  py::class_<TradeRecord>(m, "TradeRecord")
      .def_readonly("entry_time", &TradeRecord::entry_time)
      .def_readonly("exit_time", &TradeRecord::exit_time)
      .def_readonly("entry_price", &TradeRecord::entry_price)
      .def_readonly("exit_price", &TradeRecord::exit_price)
      .def_readonly("max_drawdown", &TradeRecord::max_drawdown)
      .def_readonly("trade_return", &TradeRecord::trade_return)
      .def_readonly("outcome", &TradeRecord::outcome)
      .def_readonly("kind", &TradeRecord::kind)
      .def_readonly("exit_reason", &TradeRecord::exit_reason)
      .def_readonly("stop_threshold", &TradeRecord::stop_threshold);

  py::class_<EquitySample>(m, "EquitySample")
      .def_readonly("timestamp", &EquitySample::timestamp)
      .def_readonly("nlv", &EquitySample::nlv);
  py::class_<EquityCurve>(m, "EquityCurve")
      .def_readonly("samples", &EquityCurve::samples);

  py::class_<SmaSeries>(m, "SmaSeries")
      .def_readonly("period", &SmaSeries::period)
      .def_readonly("first_index", &SmaSeries::first_index)
      .def_readonly("values", &SmaSeries::values);

  py::class_<SignalRunResult>(m, "SignalRunResult")
      .def_readonly("trades", &SignalRunResult::trades)
      .def_readonly("curve", &SignalRunResult::curve)
      .def_readonly("final_nlv", &SignalRunResult::final_nlv);

  m.def("compute_sma", &compute_sma, py::arg("grid"), py::arg("period"));
  m.def("run_signal_only", &run_signal_only, py::arg("series"),
        py::arg("sma"), py::arg("grid"), py::arg("initial_cash") = 100000.0);
  m.def("measure_max_drawdown", &measure_max_drawdown, py::arg("series"),
        py::arg("from_ts"), py::arg("to_ts"));

  py::class_<ThresholdReport>(m, "ThresholdReport")
      .def_readonly("n", &ThresholdReport::n)
      .def_readonly("width", &ThresholdReport::width)
      .def_readonly("upper_edges", &ThresholdReport::upper_edges)
      .def_readonly("e", &ThresholdReport::e)
      .def_readonly("p", &ThresholdReport::p)
      .def_readonly("v", &ThresholdReport::v)
      .def_readonly("k_star", &ThresholdReport::k_star)
      .def_readonly("threshold", &ThresholdReport::threshold)
      .def_readonly("corpus_size", &ThresholdReport::corpus_size)
      .def_readonly("expected_return_negative",
                    &ThresholdReport::expected_return_negative)
      .def_readonly("underfull_window", &ThresholdReport::underfull_window);

  m.def("default_bin_count", &default_bin_count);
  m.def("calibrate_trades",
        [](const std::vector<TradeRecord>& trades,
           std::optional<std::size_t> n_bins) {
          const std::size_t n =
              n_bins ? *n_bins : default_bin_count(trades.size());
          return calibrate_threshold(bin_trades(trades, n));
        },
        py::arg("trades"), py::arg("n_bins") = std::nullopt,
        "bin_trades + calibrate_threshold in one step");

  py::class_<RollingParams>(m, "RollingParams")
      .def(py::init<>())
      .def_readwrite("horizon_l", &RollingParams::horizon_l)
      .def_readwrite("window_m", &RollingParams::window_m);

  m.def("generate_artificial_trades", &generate_artificial_trades,
        py::arg("series"), py::arg("grid"), py::arg("sma"),
        py::arg("horizon_l"), py::arg("as_of"));
  m.def("calibrate_rolling",
        [](const std::vector<TradeRecord>& artificial,
           const RollingParams& params, std::size_t n_bins) {
          return calibrate_rolling(artificial, params, n_bins);
        },
        py::arg("artificial"), py::arg("params"), py::arg("n_bins"));

  py::enum_<Mode>(m, "Mode")
      .value("SIGNAL_ONLY", Mode::SignalOnly)
      .value("T_METHOD", Mode::TMethod)
      .value("R_METHOD", Mode::RMethod)
      .value("BUY_AND_HOLD", Mode::BuyAndHold);
  py::enum_<RecalibrationPolicy>(m, "RecalibrationPolicy")
      .value("PER_ENTRY", RecalibrationPolicy::PerEntry)
      .value("FIXED_INTERVAL", RecalibrationPolicy::FixedInterval);

  py::class_<BacktestConfig>(m, "BacktestConfig")
      .def(py::init<>())
      .def_readwrite("mode", &BacktestConfig::mode)
      .def_readwrite("initial_cash", &BacktestConfig::initial_cash)
      .def_readwrite("sma_period", &BacktestConfig::sma_period)
      .def_readwrite("fixed_bins", &BacktestConfig::fixed_bins)
      .def_readwrite("rolling", &BacktestConfig::rolling)
      .def_readwrite("recalibration", &BacktestConfig::recalibration)
      .def_readwrite("recalibration_interval_hours",
                     &BacktestConfig::recalibration_interval_hours)
      .def_readwrite("min_corpus", &BacktestConfig::min_corpus)
      .def_readwrite("include_forced_final_trade",
                     &BacktestConfig::include_forced_final_trade)
      .def_readwrite("threshold_override",
                     &BacktestConfig::threshold_override);

  py::class_<ThresholdEvent>(m, "ThresholdEvent")
      .def_readonly("timestamp", &ThresholdEvent::timestamp)
      .def_readonly("threshold", &ThresholdEvent::threshold);

  py::class_<BacktestResult>(m, "BacktestResult")
      .def_readonly("mode", &BacktestResult::mode)
      .def_readonly("trades", &BacktestResult::trades)
      .def_readonly("curve", &BacktestResult::curve)
      .def_readonly("final_nlv", &BacktestResult::final_nlv)
      .def_readonly("thresholds_used", &BacktestResult::thresholds_used)
      .def_readonly("calibration_unavailable",
                    &BacktestResult::calibration_unavailable);

  m.def("run_backtest", &run_backtest, py::arg("series"), py::arg("config"));

  py::class_<AggregateSummary>(m, "AggregateSummary")
      .def_readonly("n_assets", &AggregateSummary::n_assets)
      .def_readonly("win_fraction", &AggregateSummary::win_fraction)
      .def_readonly("mean_gain_winners", &AggregateSummary::mean_gain_winners)
      .def_readonly("mean_loss_losers", &AggregateSummary::mean_loss_losers)
      .def_readonly("expected_change", &AggregateSummary::expected_change);

  py::class_<CorrelationResult>(m, "CorrelationResult")
      .def_readonly("rho", &CorrelationResult::rho)
      .def_readonly("p_value", &CorrelationResult::p_value)
      .def_readonly("n", &CorrelationResult::n);

  m.def("delta_nlv", &delta_nlv, py::arg("nlv_variant"),
        py::arg("nlv_signal"));
  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          return pearson(x, y);
        });
  m.def("student_t_two_sided_p", &student_t_two_sided_p, py::arg("t"),
        py::arg("dof"));
}
