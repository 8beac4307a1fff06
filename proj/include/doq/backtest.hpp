#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "doq/calendar.hpp"
#include "doq/csv.hpp"
#include "doq/errors.hpp"
#include "doq/param_est.hpp"
#include "doq/pricing.hpp"

namespace doq {

/// Dated daily closes (assumed dividend-adjusted), strictly increasing dates.
struct PriceSeries {
    std::string symbol;
    std::vector<Date> dates;
    std::vector<double> closes;

    std::size_t size() const { return dates.size(); }
};

/// Reads a `date,close` CSV (header required, rows in any order), validates,
/// sorts by date. Duplicate dates, non-positive closes and malformed rows are
/// rejected with the offending line number.
inline PriceSeries load_price_series(const std::string& path, const std::string& symbol) {
    std::ifstream in(path);
    if (!in)
        throw domain_error("load_price_series: cannot open " + path);

    std::string line;
    if (!std::getline(in, line))
        throw domain_error("load_price_series: empty file " + path);

    std::vector<std::pair<Date, double>> rows;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw domain_error("load_price_series: expected 2 fields at line " +
                               std::to_string(line_no));
        const Date d = parse_iso_date(cells[0], line_no);
        const double close = parse_double_field(cells[1], "load_price_series", line_no);
        if (!(close > 0.0))
            throw domain_error("load_price_series: non-positive close at line " +
                               std::to_string(line_no));
        rows.emplace_back(d, close);
    }
    if (rows.empty())
        throw domain_error("load_price_series: no data rows in " + path);

    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw domain_error("load_price_series: duplicate date " + rows[i].first.to_string());

    PriceSeries series;
    series.symbol = symbol;
    series.dates.reserve(rows.size());
    series.closes.reserve(rows.size());
    for (const auto& [d, c] : rows) {
        series.dates.push_back(d);
        series.closes.push_back(c);
    }
    return series;
}

/// rolling_estimates over a PriceSeries (dates ignored; spacing is dt).
inline std::vector<EstimateResult> rolling_estimates(const PriceSeries& series, int window,
                                                     EstimationMethod method,
                                                     double dt = 1.0 / 252.0,
                                                     bool paper_literal = false) {
    return rolling_estimates(std::span<const double>(series.closes), window, method, dt,
                             paper_literal);
}

struct CallContract {
    double strike;
    Date expiry;
};

struct BacktestRow {
    Date date;
    double spot;
    double tau;            ///< trading-day year fraction to expiry
    double h_ergodic;
    double h_qv;
    double sigma_ergodic;
    double sigma_qv;
    double sigma_bs;
    double price_bs;
    double price_fbm;
    double price_do;
    std::optional<double> price_market;
};

/// Optional `date,price` quote CSV, joined to rows by date.
inline std::map<Date, double> load_quote_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw domain_error("load_quote_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw domain_error("load_quote_csv: empty file " + path);
    std::map<Date, double> quotes;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2)
            throw domain_error("load_quote_csv: expected 2 fields at line " +
                               std::to_string(line_no));
        quotes[parse_iso_date(cells[0], line_no)] =
            parse_double_field(cells[1], "load_quote_csv", line_no);
    }
    return quotes;
}

/// Rolling three-model comparison: for every day with a full window of
/// history (the window includes that day's close, so a series of exactly
/// `window` rows yields one backtest row dated at the last close), estimate
/// over the window (ergodic -> fBm inputs, QV ratio -> DO inputs, annualized
/// sample stddev -> BS input) and price the call at that day's spot.
/// Year fractions use an ACT/252 weekday count.
inline std::vector<BacktestRow> run_backtest(const PriceSeries& series,
                                             const CallContract& contract, double r,
                                             int window = 62,
                                             const std::map<Date, double>* market_quotes = nullptr,
                                             double dt = 1.0 / 252.0,
                                             bool paper_literal = false) {
    if (window < 8)
        throw domain_error("run_backtest: window must be >= 8");
    if (!(contract.strike > 0.0))
        throw domain_error("run_backtest: strike must be > 0");
    if (series.size() < static_cast<std::size_t>(window))
        throw domain_error("run_backtest: series too short for one window");
    if (!(series.dates.back() < contract.expiry))
        throw domain_error("run_backtest: expiry must fall after the last close");

    std::vector<BacktestRow> rows;
    rows.reserve(series.size() - static_cast<std::size_t>(window) + 1);
    const std::span<const double> closes(series.closes);

    for (std::size_t d = static_cast<std::size_t>(window) - 1; d < series.size(); ++d) {
        const auto win = closes.subspan(d + 1 - static_cast<std::size_t>(window),
                                        static_cast<std::size_t>(window));
        const EstimateResult erg = estimate_ergodic(win, dt, paper_literal);
        const EstimateResult qv = estimate_qv_ratio(win, dt, paper_literal);

        // BS input: annualized sample standard deviation of window log returns
        const std::vector<double> y = log_returns(win);
        double mean = 0.0;
        for (double v : y)
            mean += v;
        mean /= static_cast<double>(y.size());
        double ss = 0.0;
        for (double v : y)
            ss += (v - mean) * (v - mean);
        const double sigma_bs = std::sqrt(ss / static_cast<double>(y.size() - 1) / dt);

        BacktestRow row;
        row.date = series.dates[d];
        row.spot = series.closes[d];
        row.tau = static_cast<double>(trading_days_between(row.date, contract.expiry)) * dt;
        if (!(row.tau > 0.0))
            throw domain_error("run_backtest: expiry before valuation date " + row.date.to_string());
        row.h_ergodic = erg.h_hat;
        row.h_qv = qv.h_hat;
        row.sigma_ergodic = erg.sigma_hat;
        row.sigma_qv = qv.sigma_hat;
        row.sigma_bs = sigma_bs;
        row.price_bs = bs_call(row.spot, contract.strike, r, sigma_bs, 0.0, row.tau).value;
        row.price_fbm =
            fbm_call(row.spot, contract.strike, r, erg.sigma_hat, erg.h_hat, 0.0, row.tau).value;
        row.price_do =
            do_call(row.spot, contract.strike, r, qv.sigma_hat, qv.h_hat, 0.0, row.tau).value;
        if (market_quotes) {
            const auto it = market_quotes->find(row.date);
            if (it != market_quotes->end())
                row.price_market = it->second;
        }
        rows.push_back(row);
    }
    return rows;
}

namespace detail {

// Minimal self-contained SVG line chart: one panel per series group.
struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> y; // NaN = missing point
};

inline void svg_panel(std::ostream& os, double x_off, double y_off, double w, double h,
                      const std::string& title, const std::vector<SvgSeries>& series) {
    double lo = 1e300, hi = -1e300;
    std::size_t n = 0;
    for (const auto& s : series)
        for (double v : s.y)
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    for (const auto& s : series)
        n = std::max(n, s.y.size());
    if (n < 2 || hi <= lo) {
        hi = lo + 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const double plot_x = x_off + 46.0, plot_y = y_off + 24.0;
    const double plot_w = w - 58.0, plot_h = h - 46.0;
    auto sx = [&](std::size_t i) {
        if (n < 2)
            return plot_x + plot_w / 2.0;
        return plot_x + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    auto sy = [&](double v) { return plot_y + plot_h * (1.0 - (v - lo) / (hi - lo)); };

    os << "<rect x=\"" << plot_x << "\" y=\"" << plot_y << "\" width=\"" << plot_w
       << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<text x=\"" << x_off + w / 2 << "\" y=\"" << y_off + 14
       << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << title
       << "</text>\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", hi - pad);
    os << "<text x=\"" << plot_x - 4 << "\" y=\"" << sy(hi - pad) + 4
       << "\" text-anchor=\"end\" font-size=\"9\" font-family=\"sans-serif\">" << buf
       << "</text>\n";
    std::snprintf(buf, sizeof(buf), "%.4g", lo + pad);
    os << "<text x=\"" << plot_x - 4 << "\" y=\"" << sy(lo + pad) + 4
       << "\" text-anchor=\"end\" font-size=\"9\" font-family=\"sans-serif\">" << buf
       << "</text>\n";

    double legend_x = plot_x + 6.0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]))
                continue;
            os << (first ? "" : " ") << fmt17(sx(i)) << ',' << fmt17(sy(s.y[i]));
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << legend_x << "\" y=\"" << plot_y + 12
           << "\" font-size=\"10\" font-family=\"sans-serif\" fill=\"" << s.color << "\">"
           << s.label << "</text>\n";
        legend_x += 64.0;
    }
}

} // namespace detail

/// Writes backtest.csv, h_estimates.csv and charts.svg (rolling H panel plus
/// model-vs-market price panel; the market trace is omitted when absent).
/// Output is deterministic: same rows, same bytes. paper_literal stamps a
/// metadata comment line so reports from the two estimator modes are never
/// confused.
inline void emit_report(const std::vector<BacktestRow>& rows, const std::string& out_dir,
                        bool paper_literal = false) {
    if (rows.empty())
        throw domain_error("emit_report: no rows");
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    {
        std::ofstream os(dir / "backtest.csv");
        if (!os)
            throw domain_error("emit_report: cannot write to " + out_dir);
        if (paper_literal)
            os << "# paper_literal=1\n";
        os << "date,spot,tau,h_ergodic,h_qv,sigma_ergodic,sigma_qv,sigma_bs,"
              "price_bs,price_fbm,price_do,price_market\n";
        for (const auto& r : rows) {
            os << r.date.to_string() << ',' << fmt17(r.spot) << ',' << fmt17(r.tau) << ','
               << fmt17(r.h_ergodic) << ',' << fmt17(r.h_qv) << ',' << fmt17(r.sigma_ergodic)
               << ',' << fmt17(r.sigma_qv) << ',' << fmt17(r.sigma_bs) << ','
               << fmt17(r.price_bs) << ',' << fmt17(r.price_fbm) << ',' << fmt17(r.price_do)
               << ',' << (r.price_market ? fmt17(*r.price_market) : "") << '\n';
        }
    }
    {
        std::ofstream os(dir / "h_estimates.csv");
        if (paper_literal)
            os << "# paper_literal=1\n";
        os << "date,h_ergodic,h_qv\n";
        for (const auto& r : rows)
            os << r.date.to_string() << ',' << fmt17(r.h_ergodic) << ',' << fmt17(r.h_qv) << '\n';
    }
    {
        std::ofstream os(dir / "charts.svg");
        const double width = 720.0, panel_h = 240.0;
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
           << "\" height=\"" << 2 * panel_h << "\">\n";

        std::vector<detail::SvgSeries> h_series(2);
        h_series[0] = {"ergodic", "#1f77b4", {}};
        h_series[1] = {"qv", "#d62728", {}};
        for (const auto& r : rows) {
            h_series[0].y.push_back(r.h_ergodic);
            h_series[1].y.push_back(r.h_qv);
        }
        detail::svg_panel(os, 0, 0, width, panel_h, "rolling H estimates", h_series);

        std::vector<detail::SvgSeries> p_series;
        p_series.push_back({"bs", "#1f77b4", {}});
        p_series.push_back({"fbm", "#2ca02c", {}});
        p_series.push_back({"do", "#d62728", {}});
        bool any_market = false;
        for (const auto& r : rows)
            any_market = any_market || r.price_market.has_value();
        if (any_market)
            p_series.push_back({"market", "#7f7f7f", {}});
        for (const auto& r : rows) {
            p_series[0].y.push_back(r.price_bs);
            p_series[1].y.push_back(r.price_fbm);
            p_series[2].y.push_back(r.price_do);
            if (any_market)
                p_series[3].y.push_back(
                    r.price_market ? *r.price_market : std::nan(""));
        }
        detail::svg_panel(os, 0, panel_h, width, panel_h, "model call prices", p_series);
        os << "</svg>\n";
    }
}

} // namespace doq
