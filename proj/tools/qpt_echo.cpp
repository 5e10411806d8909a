// qpt-echo: survival-probability decay after sudden quenches near quantum
// critical points.  Subcommands cover the chain / Dicke / LMG models, the
// semiclassical estimators, fitting, sweeps, and the cross-check oracles.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qpt/fitscale.hpp"
#include "qpt/gaussian.hpp"
#include "qpt/io.hpp"
#include "qpt/kernel.hpp"
#include "qpt/pairprod.hpp"
#include "qpt/quench.hpp"
#include "qpt/semiclassics.hpp"
#include "qpt/series.hpp"
#include "qpt/smalled.hpp"
#include "qpt/spectra.hpp"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- INI config --------------------------------------------------------
// Sections [model], [quench], [grid], [sweep], [output]; "key = value" lines.
// Flags override file values.
std::map<std::string, std::string> load_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line, section;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw usage_error("config: expected key = value, got '" + line + "'");
        kv[section + "." + trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

// effective value resolution: flag > config file > default
struct OptionPool {
    CLI::App* cmd = nullptr;
    std::map<std::string, std::string> ini;

    bool flag_given(const std::string& flag) const { return cmd->count(flag) > 0; }

    template <class T>
    T resolve(const std::string& flag, const T& flag_value, const std::string& ini_key,
              const T& fallback) const {
        if (flag_given(flag)) return flag_value;
        const auto it = ini.find(ini_key);
        if (it == ini.end()) return fallback;
        if constexpr (std::is_same_v<T, std::string>) {
            return it->second;
        } else if constexpr (std::is_same_v<T, long long> || std::is_same_v<T, int>) {
            return static_cast<T>(std::stoll(it->second));
        } else {
            return static_cast<T>(std::stod(it->second));
        }
    }

    std::optional<double> resolve_opt(const std::string& flag, double flag_value,
                                      const std::string& ini_key) const {
        if (flag_given(flag)) return flag_value;
        const auto it = ini.find(ini_key);
        if (it == ini.end()) return std::nullopt;
        return std::stod(it->second);
    }
};

struct QuenchFlags {
    double lambda = 0.0, lambda_prime = 0.0, epsilon = 0.0, delta = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "pre-quench coupling");
        cmd->add_option("--lambda-prime", lambda_prime, "post-quench coupling");
        cmd->add_option("--epsilon", epsilon, "quench size lambda' - lambda");
        cmd->add_option("--delta", delta, "post-quench detuning lambda' - lambda_c");
    }

    qpt::QuenchSpec build(const OptionPool& pool, double lambda_c) const {
        const auto lam = pool.resolve_opt("--lambda", lambda, "quench.lambda");
        const auto lamp = pool.resolve_opt("--lambda-prime", lambda_prime, "quench.lambda_prime");
        const auto eps = pool.resolve_opt("--epsilon", epsilon, "quench.epsilon");
        const auto del = pool.resolve_opt("--delta", delta, "quench.delta");
        const bool by_lambda = lam.has_value() || lamp.has_value();
        const bool by_detuning = eps.has_value() || del.has_value();
        if (by_lambda == by_detuning)
            throw usage_error(
                "specify the quench either as --lambda/--lambda-prime or as --epsilon/--delta");
        if (by_lambda) {
            if (!lam || !lamp) throw usage_error("--lambda and --lambda-prime are both required");
            return qpt::QuenchSpec::from_lambdas(*lam, *lamp, lambda_c);
        }
        if (!eps || !del) throw usage_error("--epsilon and --delta are both required");
        return qpt::QuenchSpec::from_detuning(lambda_c, *eps, *del);
    }
};

qpt::fitscale::Window parse_window(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw usage_error("window: expected t_min:t_max, got '" + spec + "'");
    return {std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1))};
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

json quench_json(const qpt::QuenchSpec& q) {
    return json{{"lambda", q.lambda},       {"lambda_prime", q.lambda_prime},
                {"lambda_c", q.lambda_c},   {"epsilon", q.epsilon},
                {"delta", q.delta},         {"delta_lambda", q.delta_lambda},
                {"eta", std::isfinite(q.eta) ? json(q.eta) : json("inf")}};
}

// one JSON summary per run, with enough metadata to reproduce the CSV bytes
void write_summary(const std::string& path, const std::string& command, const json& config,
                   const std::vector<std::string>& outputs, const json& results, int workers,
                   std::size_t chunk) {
    json j;
    j["schema_version"] = 1;
    j["tool"] = {{"name", "qpt-echo"}, {"version", "0.1.0"}};
    j["command"] = command;
    j["config"] = config;
    j["config_hash"] = "fnv1a64:" + std::to_string(qpt::io::fnv1a64(config.dump()));
    j["workers"] = workers;
    j["chunk_size"] = chunk;
    j["kernel_backend"] = qpt::kernel::backend_name(qpt::kernel::active_backend());
    j["outputs"] = outputs;
    j["results"] = results;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

// band-limited fit window: the time span where M lies inside [m_lo, m_hi]
qpt::fitscale::Window band_window(const qpt::SurvivalSeries& s, double m_lo, double m_hi) {
    double t0 = 0.0, t1 = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        if (s.m_values[i] > m_hi || s.m_values[i] < m_lo) continue;
        if (!any) t0 = s.times[i];
        t1 = s.times[i];
        any = true;
    }
    if (!any) throw std::runtime_error("no points inside the requested M band");
    return {t0, t1};
}

std::optional<qpt::fitscale::Window> resolve_window(const std::string& spec,
                                                    const qpt::SurvivalSeries& series) {
    if (spec.empty()) return std::nullopt;
    if (spec.rfind("M:", 0) == 0) {
        const auto rest = spec.substr(2);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw usage_error("band window: expected M:lo:hi");
        return band_window(series, std::stod(rest.substr(0, colon)),
                           std::stod(rest.substr(colon + 1)));
    }
    return parse_window(spec);
}

json run_fits(const qpt::SurvivalSeries& series, const std::string& fit_kind,
              const std::optional<qpt::fitscale::Window>& window) {
    json results = json::array();
    if (fit_kind == "none") return results;
    const qpt::fitscale::Window w =
        window.value_or(qpt::fitscale::Window{series.times.front(), series.times.back()});
    std::cout << "fit window: [" << w.t_min << ", " << w.t_max << "]\n";
    qpt::fitscale::FitReport rep;
    if (fit_kind == "exp")
        rep = qpt::fitscale::fit_exponential(series, w);
    else if (fit_kind == "m1")
        rep = qpt::fitscale::fit_m1(series, w);
    else if (fit_kind == "envelope")
        rep = qpt::fitscale::loglog_envelope_slope(series, w);
    else
        throw usage_error("--fit must be one of none|exp|m1|envelope");
    results.push_back(json::parse(qpt::io::fit_report_json(rep)));
    std::cout << qpt::io::fit_report_json(rep) << "\n";
    return results;
}

// ---- chain subcommands ---------------------------------------------------

struct ChainArgs {
    long long n = 2000001;
    double gamma = 1.0, lambda_c = 1.0;
    QuenchFlags quench;
    std::string tgrid = "lin:0:1000:60";
    std::string fit = "none";
    std::string window_spec;
    std::string out = "qpt_series";
    int workers = 0;
    long long chunk = 1 << 16;
    bool materialized = false;
    std::string config_path;
};

void attach_chain(CLI::App* cmd, ChainArgs& a, bool xy) {
    cmd->add_option("--n", a.n, "number of sites (odd)");
    if (xy) {
        cmd->add_option("--gamma", a.gamma, "anisotropy");
        cmd->add_option("--lambda-c", a.lambda_c, "critical coupling branch (+1 or -1)");
    }
    a.quench.attach(cmd);
    cmd->add_option("--tgrid", a.tgrid, "time grid lin:t0:t1:count or log:t0:t1:count");
    cmd->add_option("--fit", a.fit, "none|exp|m1|envelope");
    cmd->add_option("--window", a.window_spec, "fit window t_min:t_max, or M band M:lo:hi");
    cmd->add_option("--out", a.out, "output path prefix");
    cmd->add_option("--workers", a.workers, "worker threads (default: QPT_ECHO_WORKERS or cores)");
    cmd->add_option("--chunk-size", a.chunk, "modes per reduction chunk");
    cmd->add_flag("--materialized", a.materialized, "materialize the mode table");
    cmd->add_option("--config", a.config_path, "INI config file");
}

int run_chain(CLI::App* cmd, ChainArgs& a, bool xy) {
    OptionPool pool{cmd, {}};
    if (cmd->count("--config")) pool.ini = load_ini(a.config_path);

    const long long n = pool.resolve<long long>("--n", a.n, "model.n", a.n);
    const double gamma = xy ? pool.resolve<double>("--gamma", a.gamma, "model.gamma", 1.0) : 1.0;
    const double lambda_c =
        xy ? pool.resolve<double>("--lambda-c", a.lambda_c, "model.lambda_c", 1.0) : 1.0;
    const std::string tgrid = pool.resolve<std::string>("--tgrid", a.tgrid, "grid.tgrid", a.tgrid);
    const std::string fit = pool.resolve<std::string>("--fit", a.fit, "output.fit", a.fit);
    const int workers = pool.resolve<int>("--workers", a.workers, "output.workers", a.workers);
    const long long chunk =
        pool.resolve<long long>("--chunk-size", a.chunk, "output.chunk_size", a.chunk);
    const std::string out = pool.resolve<std::string>("--out", a.out, "output.out", a.out);

    const qpt::QuenchSpec q = a.quench.build(pool, lambda_c);
    const qpt::TimeGrid grid = qpt::TimeGrid::parse(tgrid);
    const std::vector<double> times = grid.materialize();

    qpt::pairprod::RunOptions opt;
    opt.workers = workers;
    opt.chunk_size = static_cast<std::size_t>(chunk);

    qpt::XYParams params{n, q.lambda, gamma};
    qpt::SurvivalSeries series =
        a.materialized ? qpt::pairprod::survival_probability(params, q, times, opt)
                       : qpt::pairprod::survival_probability_streamed(params, q, times, opt);
    series.meta.grid_descriptor = grid.descriptor();

    const auto window = resolve_window(a.window_spec, series);
    const std::string csv_path = out + ".csv";
    qpt::io::write_series_csv_file(csv_path, series);
    const json results = run_fits(series, fit, window);

    json config{{"model", xy ? "xy" : "ising"},   {"n", n},
                {"gamma", gamma},                 {"quench", quench_json(q)},
                {"tgrid", grid.descriptor()},     {"fit", fit},
                {"materialized", a.materialized}, {"chunk_size", chunk}};
    write_summary(out + ".json", xy ? "xy" : "ising", config, {csv_path}, results,
                  qpt::pairprod::resolve_workers(workers), static_cast<std::size_t>(chunk));
    std::cout << "wrote " << csv_path << " and " << out << ".json\n";
    return 0;
}

// ---- dicke / lmg -----------------------------------------------------------

struct DickeArgs {
    double omega = 1.0, omega0 = 1.0;
    QuenchFlags quench;
    std::string tgrid = "log:1:30000:200";
    std::string fit = "none";
    std::string window_spec;
    std::string out = "qpt_dicke";
    std::string config_path;
};

void attach_dicke(CLI::App* cmd, DickeArgs& a) {
    cmd->add_option("--omega", a.omega, "field frequency");
    cmd->add_option("--omega0", a.omega0, "atomic splitting");
    a.quench.attach(cmd);
    cmd->add_option("--tgrid", a.tgrid, "time grid");
    cmd->add_option("--fit", a.fit, "none|exp|m1|envelope");
    cmd->add_option("--window", a.window_spec, "fit window t_min:t_max");
    cmd->add_option("--out", a.out, "output path prefix");
    cmd->add_option("--config", a.config_path, "INI config file");
}

int run_dicke(CLI::App* cmd, DickeArgs& a, bool two_mode) {
    OptionPool pool{cmd, {}};
    if (cmd->count("--config")) pool.ini = load_ini(a.config_path);
    const double omega = pool.resolve<double>("--omega", a.omega, "model.omega", a.omega);
    const double omega0 = pool.resolve<double>("--omega0", a.omega0, "model.omega0", a.omega0);
    const std::string tgrid = pool.resolve<std::string>("--tgrid", a.tgrid, "grid.tgrid", a.tgrid);
    const std::string fit = pool.resolve<std::string>("--fit", a.fit, "output.fit", a.fit);
    const std::string out = pool.resolve<std::string>("--out", a.out, "output.out", a.out);

    qpt::DickeParams params{omega, omega0, 0.0};
    const qpt::QuenchSpec q = a.quench.build(pool, params.lambda_c());
    params.lambda = q.lambda;

    const qpt::TimeGrid grid = qpt::TimeGrid::parse(tgrid);
    const std::vector<double> times = grid.materialize();
    qpt::SurvivalSeries series = two_mode ? qpt::gaussian::dicke_sp_two_mode(params, q, times)
                                          : qpt::gaussian::dicke_sp_effective(params, q, times);
    series.meta.grid_descriptor = grid.descriptor();

    const auto window = resolve_window(a.window_spec, series);
    const std::string csv_path = out + ".csv";
    qpt::io::write_series_csv_file(csv_path, series);
    const json results = run_fits(series, fit, window);

    const char* name = two_mode ? "dicke-two-mode" : "dicke-effective";
    json config{{"model", name},          {"omega", omega},
                {"omega0", omega0},       {"quench", quench_json(q)},
                {"tgrid", grid.descriptor()}, {"fit", fit}};
    write_summary(out + ".json", name, config, {csv_path}, results, 1, 0);
    std::cout << "wrote " << csv_path << " and " << out << ".json\n";
    return 0;
}

struct LmgArgs {
    long long n = 4096;
    double gamma = 0.5;
    QuenchFlags quench;
    std::string tgrid = "log:0.2:2000:1200";
    std::string fit = "none";
    std::string window_spec;
    std::string out = "qpt_lmg";
    std::string config_path;
};

int run_lmg(CLI::App* cmd, LmgArgs& a) {
    OptionPool pool{cmd, {}};
    if (cmd->count("--config")) pool.ini = load_ini(a.config_path);
    const long long n = pool.resolve<long long>("--n", a.n, "model.n", a.n);
    const double gamma = pool.resolve<double>("--gamma", a.gamma, "model.gamma", a.gamma);
    const std::string tgrid = pool.resolve<std::string>("--tgrid", a.tgrid, "grid.tgrid", a.tgrid);
    const std::string fit = pool.resolve<std::string>("--fit", a.fit, "output.fit", a.fit);
    const std::string out = pool.resolve<std::string>("--out", a.out, "output.out", a.out);

    const qpt::QuenchSpec q = a.quench.build(pool, 1.0);
    qpt::LMGParams params{n, q.lambda, gamma};
    const qpt::TimeGrid grid = qpt::TimeGrid::parse(tgrid);
    const std::vector<double> times = grid.materialize();
    qpt::SurvivalSeries series = qpt::smalled::lmg_survival_probability(params, q, times);
    series.meta.grid_descriptor = grid.descriptor();

    const auto window = resolve_window(a.window_spec, series);
    const std::string csv_path = out + ".csv";
    qpt::io::write_series_csv_file(csv_path, series);
    const json results = run_fits(series, fit, window);

    json config{{"model", "lmg"},         {"n", n},
                {"gamma", gamma},         {"quench", quench_json(q)},
                {"tgrid", grid.descriptor()}, {"fit", fit}};
    write_summary(out + ".json", "lmg", config, {csv_path}, results, 1, 0);
    std::cout << "wrote " << csv_path << " and " << out << ".json\n";
    return 0;
}

// ---- semiclassical -----------------------------------------------------------

struct SemiArgs {
    double omega = 1.0, omega0 = 1.0;
    QuenchFlags quench;
    std::string tgrid;
    std::string out = "qpt_semiclassical";
    bool with_msc = false;
    std::string config_path;
};

int run_semiclassical(CLI::App* cmd, SemiArgs& a) {
    OptionPool pool{cmd, {}};
    if (cmd->count("--config")) pool.ini = load_ini(a.config_path);
    qpt::DickeParams params{a.omega, a.omega0, 0.0};
    const qpt::QuenchSpec q = a.quench.build(pool, params.lambda_c());
    params.lambda = q.lambda;

    const auto spec = qpt::spectra::dicke_quasiparticle_energies(params);
    const double e = qpt::spectra::dicke_soft_energy(params, q.delta_lambda);
    const auto mode = qpt::semiclassics::ClassicalMode::oscillator_ground_packet(e);
    const auto v = qpt::semiclassics::dicke_effective_perturbation(spec.gap_coefficient, e);
    const auto est = qpt::semiclassics::semiclassical_estimates(mode, v, q.epsilon);

    json results{{"gamma", est.gamma},         {"xi", est.xi},
                 {"c0", est.c0},               {"period", est.period},
                 {"du_dp0", est.du_dp0},       {"d2u_dp02", est.d2u_dp02},
                 {"frequency", e},             {"gap_coefficient", spec.gap_coefficient},
                 {"packet_sigma", mode.sigma}, {"packet_w", mode.w}};
    std::cout << results.dump(2) << "\n";

    std::vector<std::string> outputs;
    if (a.with_msc) {
        if (a.tgrid.empty()) throw usage_error("--msc needs --tgrid");
        const qpt::TimeGrid grid = qpt::TimeGrid::parse(a.tgrid);
        qpt::SurvivalSeries series =
            qpt::semiclassics::msc(mode, v, q.epsilon, grid.materialize());
        series.meta.grid_descriptor = grid.descriptor();
        series.meta.quench = q;
        const std::string csv_path = a.out + ".csv";
        qpt::io::write_series_csv_file(csv_path, series);
        outputs.push_back(csv_path);
        std::cout << "wrote " << csv_path << "\n";
    }

    json config{{"model", "semiclassical"}, {"omega", a.omega}, {"omega0", a.omega0},
                {"quench", quench_json(q)}, {"tgrid", a.tgrid}};
    write_summary(a.out + ".json", "semiclassical", config, outputs, results, 1, 0);
    return 0;
}

// ---- fit ----------------------------------------------------------------------

struct FitArgs {
    std::string input;
    std::string form = "exp";
    std::string window_spec;
    std::string out;
};

int run_fit(FitArgs& a) {
    const qpt::SurvivalSeries series = qpt::io::read_series_csv_file(a.input);
    qpt::fitscale::Window w{series.times.front(), series.times.back()};
    if (const auto win = resolve_window(a.window_spec, series)) w = *win;
    std::cout << "fit window: [" << w.t_min << ", " << w.t_max << "]\n";
    qpt::fitscale::FitReport rep;
    if (a.form == "exp")
        rep = qpt::fitscale::fit_exponential(series, w);
    else if (a.form == "m1")
        rep = qpt::fitscale::fit_m1(series, w);
    else if (a.form == "envelope")
        rep = qpt::fitscale::loglog_envelope_slope(series, w);
    else
        throw usage_error("--form must be exp|m1|envelope");
    const std::string payload = qpt::io::fit_report_json(rep);
    std::cout << payload << "\n";
    if (!a.out.empty()) {
        std::ofstream out(a.out, std::ios::binary);
        out << payload << "\n";
    }
    return 0;
}

// ---- sweep ----------------------------------------------------------------------

struct SweepArgs {
    std::string model = "ising";
    long long n = 2000001;
    double omega = 1.0, omega0 = 1.0, gamma = 1.0;
    std::string epsilon_list, delta_list;
    double epsilon_fixed = 0.0, delta_fixed = 0.0;
    std::string tgrid = "lin:0:1000:60";
    std::string analysis = "none";
    double t_fix = 0.0;
    std::string window_spec;
    std::string out = "qpt_sweep";
    int workers = 0;
    std::string config_path;
};

int run_sweep(CLI::App* cmd, SweepArgs& a) {
    OptionPool pool{cmd, {}};
    if (cmd->count("--config")) pool.ini = load_ini(a.config_path);
    const std::string eps_list_s = pool.resolve<std::string>("--epsilon-list", a.epsilon_list,
                                                             "sweep.epsilon_list", a.epsilon_list);
    const std::string del_list_s = pool.resolve<std::string>("--delta-list", a.delta_list,
                                                             "sweep.delta_list", a.delta_list);

    std::vector<double> eps_axis, del_axis;
    if (!eps_list_s.empty()) eps_axis = parse_list(eps_list_s);
    if (!del_list_s.empty()) del_axis = parse_list(del_list_s);
    if (eps_axis.empty() && del_axis.empty())
        throw usage_error("sweep: at least one of --epsilon-list/--delta-list is required");
    if (eps_axis.empty())
        eps_axis = {pool.resolve<double>("--epsilon", a.epsilon_fixed, "quench.epsilon",
                                         a.epsilon_fixed)};
    if (del_axis.empty())
        del_axis = {
            pool.resolve<double>("--delta", a.delta_fixed, "quench.delta", a.delta_fixed)};

    const qpt::TimeGrid grid = qpt::TimeGrid::parse(a.tgrid);
    const std::vector<double> times = grid.materialize();

    std::vector<qpt::fitscale::Batch> batches;
    std::vector<std::string> outputs;
    int point = 0;
    for (double del : del_axis) {
        for (double eps : eps_axis) {
            qpt::SurvivalSeries series;
            qpt::QuenchSpec q;
            if (a.model == "ising" || a.model == "xy") {
                q = qpt::QuenchSpec::from_detuning(1.0, eps, del);
                qpt::XYParams params{a.n, q.lambda, a.model == "xy" ? a.gamma : 1.0};
                qpt::pairprod::RunOptions opt;
                opt.workers = a.workers;
                series = qpt::pairprod::survival_probability_streamed(params, q, times, opt);
            } else if (a.model == "dicke-effective") {
                qpt::DickeParams params{a.omega, a.omega0, 0.0};
                q = qpt::QuenchSpec::from_detuning(params.lambda_c(), eps, del);
                params.lambda = q.lambda;
                series = qpt::gaussian::dicke_sp_effective(params, q, times);
            } else {
                throw usage_error("sweep: model must be ising|xy|dicke-effective");
            }
            series.meta.grid_descriptor = grid.descriptor();
            std::ostringstream name;
            name << a.out << "_p" << point++ << ".csv";
            qpt::io::write_series_csv_file(name.str(), series);
            outputs.push_back(name.str());
            batches.push_back(qpt::fitscale::Batch{q, std::move(series)});
        }
    }

    json results;
    if (a.analysis == "epsilon-exponent") {
        if (a.t_fix <= 0.0) throw usage_error("epsilon-exponent needs --t-fix");
        const auto rep = qpt::fitscale::epsilon_exponent(batches, a.t_fix);
        results = json::parse(qpt::io::fit_report_json(rep));
        std::cout << "epsilon exponent slope = " << rep.param("slope") << "\n";
    } else if (a.analysis == "delta-trend") {
        if (a.t_fix <= 0.0) throw usage_error("delta-trend needs --t-fix");
        json rows = json::array();
        bool nondecreasing = true;
        double prev = -1.0;
        for (const auto& b : batches) {
            double m_at = 0.0;
            for (std::size_t i = 0; i < b.series.times.size(); ++i)
                if (b.series.times[i] <= a.t_fix) m_at = b.series.m_values[i];
            rows.push_back({{"delta", b.quench.delta}, {"M", m_at}});
            if (prev >= 0.0 && m_at < prev) nondecreasing = false;
            prev = m_at;
        }
        results = {{"delta_trend", rows}, {"nondecreasing_in_abs_delta", nondecreasing}};
        std::cout << "M nondecreasing in |delta|: " << (nondecreasing ? "yes" : "no") << "\n";
    } else if (a.analysis == "xi-overlay") {
        if (a.window_spec.empty()) throw usage_error("xi-overlay needs --window");
        const auto rep = qpt::fitscale::scaling_xi(batches, parse_window(a.window_spec));
        results = {{"vertical_spread", rep.vertical_spread}};
        std::cout << "xi overlay vertical spread = " << rep.vertical_spread << "\n";
    } else if (a.analysis == "gamma-collapse") {
        if (a.window_spec.empty()) throw usage_error("gamma-collapse needs --window");
        std::vector<qpt::fitscale::Window> windows(batches.size(), parse_window(a.window_spec));
        const auto rep = qpt::fitscale::scaling_gamma(batches, windows);
        json pts = json::array();
        for (const auto& p : rep.points)
            pts.push_back({{"eta", p.eta}, {"epsilon", p.epsilon}, {"value", p.value}});
        results = {{"points", pts}, {"max_rel_deviation", rep.max_rel_deviation}};
        std::cout << "gamma collapse max relative deviation = " << rep.max_rel_deviation << "\n";
    } else if (a.analysis != "none") {
        throw usage_error("unknown --analysis");
    }

    json config{{"model", a.model},           {"n", a.n},
                {"epsilon_axis", eps_axis},   {"delta_axis", del_axis},
                {"tgrid", grid.descriptor()}, {"analysis", a.analysis}};
    write_summary(a.out + ".json", "sweep", config, outputs, results,
                  qpt::pairprod::resolve_workers(a.workers), 1 << 16);
    std::cout << "wrote " << outputs.size() << " series and " << a.out << ".json\n";
    return 0;
}

// ---- oracle -----------------------------------------------------------------------

int run_oracle(const std::string& check) {
    int failures = 0;
    auto report = [&](const char* name, bool ok, double value) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "  (" << value << ")\n";
        if (!ok) ++failures;
    };

    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> uka(1e-6, M_PI - 1e-6);
    std::uniform_real_distribution<double> ulam(0.0, 2.0);
    std::uniform_real_distribution<double> ut(0.0, 1000.0);

    if (check == "all" || check == "pair") {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double ka = uka(rng), lam = ulam(rng), lamp = ulam(rng), t = ut(rng);
            const double f = qpt::pairprod::mode_factor(
                qpt::spectra::ising_bogoliubov_angle(ka, lam),
                qpt::spectra::ising_bogoliubov_angle(ka, lamp),
                qpt::spectra::ising_mode_energy(ka, lamp), t);
            worst = std::max(worst,
                             std::abs(f - qpt::smalled::pair_subspace_oracle(ka, lam, lamp, t)));
        }
        report("mode_factor vs pair-subspace oracle (1000 tuples, max |dF|)", worst <= 1e-12,
               worst);
    }
    if (check == "all" || check == "xy") {
        std::uniform_real_distribution<double> ug(0.0, 1.5);
        double worst = 0.0;
        for (int i = 0; i < 500; ++i) {
            const double ka = uka(rng), lam = ulam(rng), lamp = ulam(rng), t = ut(rng),
                         g = ug(rng);
            const double f = qpt::pairprod::mode_factor(
                qpt::spectra::xy_bogoliubov_angle(ka, lam, g),
                qpt::spectra::xy_bogoliubov_angle(ka, lamp, g),
                qpt::spectra::xy_mode_energy(ka, lamp, g), t);
            worst = std::max(
                worst, std::abs(f - qpt::smalled::xy_pair_subspace_oracle(ka, lam, lamp, g, t)));
        }
        report("xy mode_factor vs pair-subspace oracle (500 tuples, max |dF|)", worst <= 1e-12,
               worst);
    }
    if (check == "all" || check == "fock") {
        std::uniform_real_distribution<double> ue(0.5, 2.0);
        std::vector<double> times{0.0, 0.7, 2.3, 9.1};
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double e = ue(rng), ep = ue(rng);
            const auto ref = qpt::smalled::fock_truncation_sp(
                qpt::gaussian::oscillator_form(e), qpt::gaussian::oscillator_form(ep), 128, times);
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double g = qpt::gaussian::oscillator_quench_sp(e, ep, times[k]);
                worst = std::max(worst, std::abs(g - ref.m_values[k]));
            }
        }
        report("gaussian engine vs truncated-Fock SP (5 quenches, max |dM|)", worst <= 1e-8,
               worst);
    }
    if (check == "all" || check == "stream") {
        const qpt::QuenchSpec q = qpt::QuenchSpec::from_detuning(1.0, 8e-5, -4e-6);
        qpt::IsingParams p{100001, q.lambda};
        const std::vector<double> times{0.0, 12.5, 100.0, 750.0};
        const auto s1 = qpt::pairprod::survival_probability(p, q, times);
        const auto s2 = qpt::pairprod::survival_probability_streamed(p, q, times);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            worst = std::max(worst, std::abs(s1.log_m_values[i] - s2.log_m_values[i]));
        report("streamed vs materialized ln M (bitwise)", worst == 0.0, worst);
    }
    if (check == "all" || check == "chain") {
        qpt::TimeGrid grid{qpt::TimeGrid::Kind::linear, 0.0, 20.0, 201};
        const auto times = grid.materialize();
        const auto ed = qpt::smalled::small_chain_ed_sp(11, 1.2, 1.1, times);
        const qpt::QuenchSpec q = qpt::QuenchSpec::from_lambdas(1.2, 1.1, 1.0);
        qpt::IsingParams p{11, 1.2};
        const auto pp = qpt::pairprod::survival_probability(p, q, times);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            worst = std::max(worst, std::abs(ed.m_values[i] - pp.m_values[i]));
        report("whole-chain ED vs mode product at N=11 (max |dM| <= 0.10)", worst <= 0.10, worst);
    }
    if ((check == "all" || check == "kernel") && qpt::kernel::avx2_available()) {
        std::vector<double> a(10000), e(10000);
        std::uniform_real_distribution<double> ua(0.0, 1.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = ua(rng);
            e[i] = 4.0 * ua(rng);
        }
        bool equal = true;
        for (double t : {0.0, 3.7, 480.0})
            equal = equal &&
                    qpt::kernel::chunk_log_survival_scalar(a.data(), e.data(), a.size(), t) ==
                        qpt::kernel::chunk_log_survival_avx2(a.data(), e.data(), a.size(), t);
        report("scalar vs avx2 kernel (bitwise)", equal, equal ? 0.0 : 1.0);
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"survival probability decay near quantum critical points"};
    app.require_subcommand(1);

    ChainArgs ising_args, xy_args;
    DickeArgs de_args, d2_args;
    LmgArgs lmg_args;
    SemiArgs semi_args;
    FitArgs fit_args;
    SweepArgs sweep_args;
    std::string oracle_check = "all";

    CLI::App* c_ising = app.add_subcommand("ising", "transverse-field Ising chain mode product");
    attach_chain(c_ising, ising_args, false);
    CLI::App* c_xy = app.add_subcommand("xy", "anisotropic XY chain mode product");
    attach_chain(c_xy, xy_args, true);

    CLI::App* c_de = app.add_subcommand("dicke-effective", "Dicke soft-mode SP (d = 1)");
    attach_dicke(c_de, de_args);
    CLI::App* c_d2 = app.add_subcommand("dicke-two-mode", "Dicke two-mode normal-phase SP");
    attach_dicke(c_d2, d2_args);

    CLI::App* c_lmg = app.add_subcommand("lmg", "LMG collective-spin SP by banded ED");
    c_lmg->add_option("--n", lmg_args.n, "number of spins");
    c_lmg->add_option("--gamma", lmg_args.gamma, "anisotropy");
    lmg_args.quench.attach(c_lmg);
    c_lmg->add_option("--tgrid", lmg_args.tgrid, "time grid");
    c_lmg->add_option("--fit", lmg_args.fit, "none|exp|m1|envelope");
    c_lmg->add_option("--window", lmg_args.window_spec, "fit window t_min:t_max");
    c_lmg->add_option("--out", lmg_args.out, "output path prefix");
    c_lmg->add_option("--config", lmg_args.config_path, "INI config file");

    CLI::App* c_semi =
        app.add_subcommand("semiclassical", "semiclassical Gamma/xi estimates and |m_sc|^2");
    c_semi->add_option("--omega", semi_args.omega, "field frequency");
    c_semi->add_option("--omega0", semi_args.omega0, "atomic splitting");
    semi_args.quench.attach(c_semi);
    c_semi->add_option("--tgrid", semi_args.tgrid, "time grid for |m_sc|^2");
    c_semi->add_flag("--msc", semi_args.with_msc, "also evaluate the propagator average");
    c_semi->add_option("--out", semi_args.out, "output path prefix");
    c_semi->add_option("--config", semi_args.config_path, "INI config file");

    CLI::App* c_fit = app.add_subcommand("fit", "fit a stored series CSV");
    c_fit->add_option("--input", fit_args.input, "series CSV path")->required();
    c_fit->add_option("--form", fit_args.form, "exp|m1|envelope");
    c_fit->add_option("--window", fit_args.window_spec, "fit window t_min:t_max or M:lo:hi");
    c_fit->add_option("--out", fit_args.out, "write the report JSON here");

    CLI::App* c_sweep = app.add_subcommand("sweep", "axis sweeps with scaling analyses");
    c_sweep->add_option("--model", sweep_args.model, "ising|xy|dicke-effective");
    c_sweep->add_option("--n", sweep_args.n, "chain sites");
    c_sweep->add_option("--gamma", sweep_args.gamma, "xy anisotropy");
    c_sweep->add_option("--omega", sweep_args.omega, "dicke omega");
    c_sweep->add_option("--omega0", sweep_args.omega0, "dicke omega0");
    c_sweep->add_option("--epsilon-list", sweep_args.epsilon_list, "comma list of epsilon");
    c_sweep->add_option("--delta-list", sweep_args.delta_list, "comma list of delta");
    c_sweep->add_option("--epsilon", sweep_args.epsilon_fixed, "fixed epsilon");
    c_sweep->add_option("--delta", sweep_args.delta_fixed, "fixed delta");
    c_sweep->add_option("--tgrid", sweep_args.tgrid, "time grid");
    c_sweep->add_option("--analysis", sweep_args.analysis,
                        "none|epsilon-exponent|delta-trend|gamma-collapse|xi-overlay");
    c_sweep->add_option("--t-fix", sweep_args.t_fix, "fixed t for pointwise analyses");
    c_sweep->add_option("--window", sweep_args.window_spec, "analysis window t_min:t_max");
    c_sweep->add_option("--out", sweep_args.out, "output path prefix");
    c_sweep->add_option("--workers", sweep_args.workers, "worker threads");
    c_sweep->add_option("--config", sweep_args.config_path, "INI config file");

    CLI::App* c_oracle = app.add_subcommand("oracle", "run the cross-check oracles");
    c_oracle->add_option("--check", oracle_check, "all|pair|xy|fock|stream|chain|kernel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (c_ising->parsed()) return run_chain(c_ising, ising_args, false);
        if (c_xy->parsed()) return run_chain(c_xy, xy_args, true);
        if (c_de->parsed()) return run_dicke(c_de, de_args, false);
        if (c_d2->parsed()) return run_dicke(c_d2, d2_args, true);
        if (c_lmg->parsed()) return run_lmg(c_lmg, lmg_args);
        if (c_semi->parsed()) return run_semiclassical(c_semi, semi_args);
        if (c_fit->parsed()) return run_fit(fit_args);
        if (c_sweep->parsed()) return run_sweep(c_sweep, sweep_args);
        if (c_oracle->parsed()) return run_oracle(oracle_check);
    } catch (const usage_error& e) {
        std::cerr << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"error", {{"kind", "usage"}, {"message", e.what()}}}}.dump() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"kind", "numerical"}, {"message", e.what()}}}}.dump()
                  << "\n";
        return kExitNumerical;
    }
    return 0;
}
