// doq: Dobric-Ojeda process toolkit CLI.
//
// Subcommands: simulate, qv-check, estimate, price, pde-price, backtest.
// Exit codes: 0 success, 1 validation error, 2 runtime/numerical error.
// DOQ_MAX_THREADS caps internal parallelism.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "doq/doq.hpp"

namespace {

using nlohmann::ordered_json;

doq::ModelKind parse_model(const std::string& name) {
    if (name == "bs") return doq::ModelKind::BlackScholes;
    if (name == "fbm") return doq::ModelKind::FractionalBM;
    if (name == "do") return doq::ModelKind::DobricOjeda;
    throw doq::domain_error("unknown model '" + name + "' (expected bs|fbm|do)");
}

struct SimulateArgs {
    std::string process = "do";
    double h = 0.7;
    double t0 = 0.0;
    double t_end = 1.0;
    int n = 256;
    double eps = 0.0;
    std::string scheme = "exact";
    std::string model = "do";
    double mu = 0.0, sigma = 0.2, s0 = 100.0, r = 0.0;
    std::string out;
};

int run_simulate(const SimulateArgs& a, std::uint64_t seed) {
    const doq::TimeGrid grid(a.t0, a.t_end, a.n);
    const doq::MScheme scheme =
        a.scheme == "euler" ? doq::MScheme::Euler : doq::MScheme::Exact;
    doq::SamplePath path = [&] {
        if (a.process == "m")
            return doq::simulate_martingale_path(grid, a.h, seed, scheme);
        if (a.process == "do")
            return doq::simulate_do_path(grid, a.h, seed, scheme);
        if (a.process == "veps")
            return doq::simulate_modified_do_path(grid, a.h, a.eps, seed);
        if (a.process == "bm") {
            auto p = doq::simulate_martingale_path(grid, 0.5, seed, scheme);
            p.kind = doq::ProcessKind::BrownianMotion;
            return p;
        }
        if (a.process == "fbm")
            return doq::simulate_fbm_path(grid, a.h, seed);
        if (a.process == "stock") {
            doq::ModelParams params;
            params.mu = a.mu;
            params.sigma = a.sigma;
            params.h = a.h;
            params.eps = a.eps;
            params.s0 = a.s0;
            params.r = a.r;
            params.model = parse_model(a.model);
            return doq::simulate_stock_path(params, grid, seed);
        }
        throw doq::domain_error("unknown process '" + a.process +
                                "' (expected m|do|veps|fbm|bm|stock)");
    }();
    if (a.out.empty())
        doq::write_path_csv(std::cout, path);
    else
        doq::write_path_csv(a.out, path);
    return 0;
}

std::vector<long long> parse_n_list(const std::string& csv) {
    std::vector<long long> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ','))
        out.push_back(std::stoll(tok));
    if (out.empty())
        throw doq::domain_error("empty n-list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dobric-Ojeda process toolkit: simulation, QV checks, estimation, pricing, "
                 "backtests. DOQ_MAX_THREADS caps parallelism; results do not depend on it."};
    app.require_subcommand(1);
    // --h is the Hurst index everywhere, so help lives on --help alone
    app.set_help_flag("--help", "print help and exit");

    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "RNG seed (default 42)")->capture_default_str();

    // ---- simulate ----
    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "simulate a process path to CSV");
    c_sim->add_option("--process", sim.process, "m|do|veps|fbm|bm|stock")->capture_default_str();
    c_sim->add_option("--h", sim.h, "Hurst index")->capture_default_str();
    c_sim->add_option("--t0", sim.t0, "grid start (years)")->capture_default_str();
    c_sim->add_option("--t-end", sim.t_end, "grid end (years)")->capture_default_str();
    c_sim->add_option("--n", sim.n, "number of steps")->capture_default_str();
    c_sim->add_option("--eps", sim.eps, "drift cut-on time (veps / DO stock)")->capture_default_str();
    c_sim->add_option("--scheme", sim.scheme, "exact|euler")->capture_default_str();
    c_sim->add_option("--model", sim.model, "stock model: bs|fbm|do")->capture_default_str();
    c_sim->add_option("--mu", sim.mu, "stock drift")->capture_default_str();
    c_sim->add_option("--sigma", sim.sigma, "stock volatility")->capture_default_str();
    c_sim->add_option("--s0", sim.s0, "initial price")->capture_default_str();
    c_sim->add_option("--r", sim.r, "risk-free rate")->capture_default_str();
    c_sim->add_option("--out", sim.out, "output CSV path (default stdout)");

    // ---- qv-check ----
    double qv_h = 0.7, qv_delta = 0.5, qv_t0 = 0.0, qv_tend = 1.0;
    int qv_seeds = 50;
    std::string qv_nlist = "64,256,1024";
    std::string qv_out;
    auto* c_qv = app.add_subcommand("qv-check", "quadratic-variation convergence report");
    c_qv->add_option("--h", qv_h, "Hurst index")->capture_default_str();
    c_qv->add_option("--delta", qv_delta, "sampling exponent excess (m = n^{1+delta})")
        ->capture_default_str();
    c_qv->add_option("--n-list", qv_nlist, "comma-separated increasing n values")
        ->capture_default_str();
    c_qv->add_option("--seeds", qv_seeds, "seeds per n")->capture_default_str();
    c_qv->add_option("--t0", qv_t0, "window start")->capture_default_str();
    c_qv->add_option("--t-end", qv_tend, "window end")->capture_default_str();
    c_qv->add_option("--out", qv_out, "output CSV path (default stdout)");

    // ---- estimate ----
    std::string est_csv, est_method = "qv", est_out, est_symbol = "SYM";
    int est_window = 62;
    double est_dt = 1.0 / 252.0;
    bool est_literal = false;
    auto* c_est = app.add_subcommand("estimate", "rolling parameter estimates from a close CSV");
    c_est->add_option("--csv", est_csv, "input CSV with header date,close")->required();
    c_est->add_option("--method", est_method, "ergodic|qv")->capture_default_str();
    c_est->add_option("--window", est_window, "rolling window length (closes)")
        ->capture_default_str();
    c_est->add_option("--dt", est_dt, "observation spacing in years")->capture_default_str();
    c_est->add_option("--symbol", est_symbol, "series label")->capture_default_str();
    c_est->add_flag("--paper-literal", est_literal,
                    "use the printed estimator formulas (sign/coefficient uncorrected)");
    c_est->add_option("--out", est_out, "output CSV path (default stdout)");

    // ---- price / pde-price ----
    std::string pr_model = "do";
    double pr_s = 100.0, pr_k = 100.0, pr_r = 0.05, pr_sigma = 0.2, pr_h = 0.5, pr_t = 0.0,
           pr_T = 1.0, pr_eps = 0.0;
    long pr_paths = 0;
    auto* c_price = app.add_subcommand("price", "closed-form or Monte Carlo call quote (JSON)");
    c_price->add_option("--model", pr_model, "bs|fbm|do")->capture_default_str();
    c_price->add_option("--s", pr_s, "spot")->capture_default_str();
    c_price->add_option("--k", pr_k, "strike")->capture_default_str();
    c_price->add_option("--r", pr_r, "risk-free rate")->capture_default_str();
    c_price->add_option("--sigma", pr_sigma, "volatility")->capture_default_str();
    c_price->add_option("--h", pr_h, "Hurst index")->capture_default_str();
    c_price->add_option("--t", pr_t, "valuation time")->capture_default_str();
    c_price->add_option("--T", pr_T, "expiry")->capture_default_str();
    c_price->add_option("--eps", pr_eps, "drift cut-on time (Monte Carlo gate)")
        ->capture_default_str();
    c_price->add_option("--paths", pr_paths, "Monte Carlo paths (0 = closed form)")
        ->capture_default_str();

    int pde_x = 400, pde_t = 400;
    std::string pde_model = "do";
    double pde_s = 100.0, pde_k = 100.0, pde_r = 0.05, pde_sigma = 0.2, pde_h = 0.5, pde_t0 = 0.0,
           pde_T = 1.0;
    auto* c_pde = app.add_subcommand("pde-price", "finite-difference call quote (JSON)");
    c_pde->add_option("--s", pde_s, "spot")->capture_default_str();
    c_pde->add_option("--k", pde_k, "strike")->capture_default_str();
    c_pde->add_option("--r", pde_r, "risk-free rate")->capture_default_str();
    c_pde->add_option("--sigma", pde_sigma, "volatility")->capture_default_str();
    c_pde->add_option("--h", pde_h, "Hurst index")->capture_default_str();
    c_pde->add_option("--t", pde_t0, "valuation time")->capture_default_str();
    c_pde->add_option("--T", pde_T, "expiry")->capture_default_str();
    c_pde->add_option("--x-nodes", pde_x, "log-price nodes")->capture_default_str();
    c_pde->add_option("--t-steps", pde_t, "time steps")->capture_default_str();
    c_pde->add_option("--model", pde_model, "only 'do' is supported")->capture_default_str();

    // ---- backtest ----
    std::string bt_csv, bt_symbol = "SYM", bt_expiry, bt_quotes, bt_outdir = "backtest_report";
    double bt_strike = 0.0, bt_r = 0.0, bt_dt = 1.0 / 252.0;
    int bt_window = 62;
    bool bt_literal = false;
    auto* c_bt = app.add_subcommand("backtest", "rolling three-model backtest report");
    c_bt->add_option("--csv", bt_csv, "input CSV with header date,close")->required();
    c_bt->add_option("--symbol", bt_symbol, "series label")->capture_default_str();
    c_bt->add_option("--strike", bt_strike, "call strike")->required();
    c_bt->add_option("--expiry", bt_expiry, "call expiry (ISO-8601)")->required();
    c_bt->add_option("--r", bt_r, "risk-free rate")->capture_default_str();
    c_bt->add_option("--window", bt_window, "rolling window length")->capture_default_str();
    c_bt->add_option("--quotes-csv", bt_quotes, "optional market quote CSV (date,price)");
    c_bt->add_option("--dt", bt_dt, "observation spacing in years")->capture_default_str();
    c_bt->add_flag("--paper-literal", bt_literal, "use the printed estimator formulas");
    c_bt->add_option("--out-dir", bt_outdir, "report directory")->capture_default_str();

    for (CLI::App* sub : {c_sim, c_qv, c_est, c_price, c_pde, c_bt})
        sub->set_help_flag("--help", "print help and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        if (rc == 0)
            return 0; // --help
        std::cerr << '\n' << app.help();
        return 1;
    }

    try {
        if (c_sim->parsed())
            return run_simulate(sim, seed);

        if (c_qv->parsed()) {
            const auto report = doq::qv_convergence_harness(qv_h, qv_t0, qv_tend,
                                                            parse_n_list(qv_nlist), qv_delta,
                                                            qv_seeds, seed);
            if (qv_out.empty())
                report.write_csv(std::cout);
            else
                report.write_csv(qv_out);
            return 0;
        }

        if (c_est->parsed()) {
            const doq::EstimationMethod method = est_method == "ergodic"
                                                     ? doq::EstimationMethod::ErgodicRatio
                                                     : doq::EstimationMethod::QVRatio;
            if (est_method != "ergodic" && est_method != "qv")
                throw doq::domain_error("unknown method '" + est_method + "' (expected ergodic|qv)");
            const doq::PriceSeries series = doq::load_price_series(est_csv, est_symbol);
            const auto results =
                doq::rolling_estimates(series, est_window, method, est_dt, est_literal);
            std::ofstream file;
            std::ostream* os = &std::cout;
            if (!est_out.empty()) {
                file.open(est_out);
                if (!file)
                    throw doq::domain_error("cannot open for writing: " + est_out);
                os = &file;
            }
            if (est_literal)
                *os << "# paper_literal=1\n";
            *os << "date,method,mu_hat,h_hat,sigma_hat,clamped\n";
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& e = results[i];
                const auto& date = series.dates[static_cast<std::size_t>(est_window) + i];
                *os << date.to_string() << ',' << doq::to_string(e.method) << ','
                    << (e.mu_hat ? doq::fmt17(*e.mu_hat) : "") << ',' << doq::fmt17(e.h_hat)
                    << ',' << doq::fmt17(e.sigma_hat) << ',' << (e.clamped ? 1 : 0) << '\n';
            }
            return 0;
        }

        if (c_price->parsed()) {
            const doq::ModelKind model = parse_model(pr_model);
            ordered_json out;
            out["model"] = pr_model;
            if (pr_paths > 0) {
                doq::ModelParams params;
                params.sigma = pr_sigma;
                params.h = model == doq::ModelKind::BlackScholes ? 0.5 : pr_h;
                params.eps = pr_eps;
                params.s0 = pr_s;
                params.r = pr_r;
                params.mu = pr_r;
                params.model = model;
                const auto q = doq::mc_call(params, doq::OptionSpec{pr_k, pr_T}, pr_t, pr_paths, seed);
                out["method"] = "monte_carlo";
                out["value"] = q.value;
                out["std_err"] = *q.std_err;
                out["paths"] = pr_paths;
                out["seed"] = seed;
            } else {
                const doq::PriceQuote q = [&] {
                    switch (model) {
                        case doq::ModelKind::BlackScholes:
                            return doq::bs_call(pr_s, pr_k, pr_r, pr_sigma, pr_t, pr_T);
                        case doq::ModelKind::FractionalBM:
                            return doq::fbm_call(pr_s, pr_k, pr_r, pr_sigma, pr_h, pr_t, pr_T);
                        case doq::ModelKind::DobricOjeda:
                        default:
                            return doq::do_call(pr_s, pr_k, pr_r, pr_sigma, pr_h, pr_t, pr_T);
                    }
                }();
                out["method"] = "closed_form";
                out["value"] = q.value;
                if (q.d1)
                    out["d1"] = *q.d1;
            }
            std::cout << out.dump(2) << '\n';
            return 0;
        }

        if (c_pde->parsed()) {
            if (pde_model != "do")
                throw doq::domain_error("pde-price: only the DO model PDE is implemented");
            const auto q =
                doq::do_call_pde(pde_s, pde_k, pde_r, pde_sigma, pde_h, pde_t0, pde_T, pde_x, pde_t);
            ordered_json out;
            out["model"] = "do";
            out["method"] = "pde";
            out["value"] = q.value;
            out["x_nodes"] = pde_x;
            out["t_steps"] = pde_t;
            std::cout << out.dump(2) << '\n';
            return 0;
        }

        if (c_bt->parsed()) {
            const doq::PriceSeries series = doq::load_price_series(bt_csv, bt_symbol);
            const doq::CallContract contract{bt_strike, doq::parse_iso_date(bt_expiry)};
            std::map<doq::Date, double> quotes;
            const std::map<doq::Date, double>* quotes_ptr = nullptr;
            if (!bt_quotes.empty()) {
                quotes = doq::load_quote_csv(bt_quotes);
                quotes_ptr = &quotes;
            }
            const auto rows =
                doq::run_backtest(series, contract, bt_r, bt_window, quotes_ptr, bt_dt, bt_literal);
            doq::emit_report(rows, bt_outdir, bt_literal);
            std::cout << "wrote " << rows.size() << " rows to " << bt_outdir << '\n';
            return 0;
        }
    } catch (const doq::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
