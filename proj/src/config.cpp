#include "prandtl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace prandtl {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': malformed list entry '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

template <class T>
Setter num_setter(T RunConfig::* member) {
    return [member](RunConfig& c, const std::string& v) {
        try {
            size_t used = 0;
            if constexpr (std::is_same_v<T, int>) {
                c.*member = std::stoi(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
            } else if constexpr (std::is_same_v<T, std::uint64_t>) {
                c.*member = std::stoull(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
            } else {
                c.*member = std::stod(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
            }
        } catch (const std::exception&) {
            throw ConfigError("malformed numeric value '" + v + "'");
        }
    };
}

Setter str_setter(std::string RunConfig::* member) {
    return [member](RunConfig& c, const std::string& v) { c.*member = v; };
}

Setter bool_setter(bool RunConfig::* member, const char* key) {
    return [member, key](RunConfig& c, const std::string& v) {
        c.*member = parse_bool(v, key);
    };
}

const std::map<std::string, Setter>& registry() {
    static const std::map<std::string, Setter> reg = {
        {"nx", num_setter(&RunConfig::nx)},
        {"ny", num_setter(&RunConfig::ny)},
        {"y_max", num_setter(&RunConfig::y_max)},
        {"grading_c", num_setter(&RunConfig::grading_c)},
        {"x_period", num_setter(&RunConfig::x_period)},
        {"a0_mean", num_setter(&RunConfig::a0_mean)},
        {"a0_amp", num_setter(&RunConfig::a0_amp)},
        {"a0_mode", num_setter(&RunConfig::a0_mode)},
        {"sigma", num_setter(&RunConfig::sigma)},
        {"delta", num_setter(&RunConfig::delta)},
        {"gamma", num_setter(&RunConfig::gamma)},
        {"s", num_setter(&RunConfig::s)},
        {"monotone", bool_setter(&RunConfig::monotone, "monotone")},
        {"amplitude", num_setter(&RunConfig::amplitude)},
        {"epsilon", num_setter(&RunConfig::epsilon)},
        {"n_galerkin", num_setter(&RunConfig::n_galerkin)},
        {"dt", num_setter(&RunConfig::dt)},
        {"t_end", num_setter(&RunConfig::t_end)},
        {"sample_every", num_setter(&RunConfig::sample_every)},
        {"dealias", bool_setter(&RunConfig::dealias, "dealias")},
        {"tau0", num_setter(&RunConfig::tau0)},
        {"gevrey_m", num_setter(&RunConfig::gevrey_m)},
        {"p_corr", num_setter(&RunConfig::p_corr)},
        {"j_max", num_setter(&RunConfig::j_max)},
        {"alpha", num_setter(&RunConfig::alpha)},
        {"chi_r1", num_setter(&RunConfig::chi_r1)},
        {"chi_r2", num_setter(&RunConfig::chi_r2)},
        {"psi_edge", num_setter(&RunConfig::psi_edge)},
        {"y_split", num_setter(&RunConfig::y_split)},
        {"exclusion_band", num_setter(&RunConfig::exclusion_band)},
        {"profile", str_setter(&RunConfig::profile)},
        {"kx_list",
         [](RunConfig& c, const std::string& v) { c.kx_list = parse_list(v, "kx_list"); }},
        {"horizon", num_setter(&RunConfig::horizon)},
        {"n_seeds", num_setter(&RunConfig::n_seeds)},
        {"fit_window", num_setter(&RunConfig::fit_window)},
        {"lin_dt", num_setter(&RunConfig::lin_dt)},
        {"tau_min", num_setter(&RunConfig::tau_min)},
        {"eta", num_setter(&RunConfig::eta)},
        {"output_dir", str_setter(&RunConfig::output_dir)},
        {"seed", num_setter(&RunConfig::seed)},
        {"format", str_setter(&RunConfig::format)},
        {"snapshot", str_setter(&RunConfig::snapshot)},
    };
    return reg;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value,
             const std::string& where) {
    const auto& reg = registry();
    const auto it = reg.find(key);
    if (it == reg.end()) throw ConfigError(where + ": unknown key '" + key + "'");
    try {
        it->second(cfg, value);
    } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

} // namespace

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };

    if (nx < 4 || (nx & (nx - 1)) != 0) fail("nx must be a power of two >= 4");
    if (ny < 8) fail("ny must be >= 8");
    if (y_max <= 0.0) fail("y_max must be positive");
    if (grading_c <= 0.0) fail("grading_c must be positive");
    if (x_period <= 0.0) fail("x_period must be positive");

    if (sigma < gamma + 0.5)
        fail("sigma = " + std::to_string(sigma) +
             " violates the constraint sigma >= gamma + 1/2");
    if (gamma < 1.0) fail("gamma must be >= 1");
    if (s < 8 || s % 2 != 0) fail("s must be even and >= 8");
    if (delta <= 0.0) fail("delta must be positive");
    if (amplitude <= 0.0) fail("amplitude must be positive");
    if (!monotone) {
        if (a0_mean - std::abs(a0_amp) <= 0.0 || a0_mean + std::abs(a0_amp) >= 3.0)
            fail("critical curve range must stay inside (0, 3)");
    }

    if (epsilon < 0.0) fail("epsilon must be >= 0");
    if (n_galerkin < 0 || n_galerkin > nx / 2) fail("need 0 <= n_galerkin <= nx/2");
    if (dt <= 0.0) fail("dt must be positive");
    if (t_end < 0.0) fail("t_end must be >= 0");
    if (sample_every < 1) fail("sample_every must be >= 1");

    if (tau0 <= 0.0) fail("tau0 must be positive");
    if (gevrey_m < 1.0) fail("gevrey_m must be >= 1");
    if (p_corr <= 1.0) fail("p_corr must be > 1");
    if (j_max < 5) fail("j_max must be >= 5");

    if (alpha <= 0.0 || alpha > 1.0) fail("alpha must lie in (0, 1]");
    if (!(0.0 < chi_r1 && chi_r1 < chi_r2)) fail("need 0 < chi_r1 < chi_r2");
    if (chi_r2 >= 1.0) fail("chi_r2 must be < 1 so the band stays inside (0, 3)");
    if (psi_edge < y_split) fail("psi_edge must be >= y_split");
    if (y_split <= 0.0 || y_split >= y_max) fail("y_split must lie in (0, y_max)");
    if (exclusion_band <= 0.0 || exclusion_band >= chi_r2)
        fail("exclusion_band must lie in (0, chi_r2)");

    if (profile != "nonmonotone" && profile != "monotone")
        fail("profile must be 'nonmonotone' or 'monotone'");
    if (kx_list.size() < 1) fail("kx_list must not be empty");
    for (double k : kx_list)
        if (k <= 0.0) fail("kx_list entries must be positive");
    if (horizon <= 0.0) fail("horizon must be positive");
    if (n_seeds < 1) fail("n_seeds must be >= 1");
    if (fit_window <= 0.0 || fit_window >= 1.0) fail("fit_window must lie in (0, 1)");
    if (lin_dt < 0.0) fail("lin_dt must be >= 0");

    if (tau_min < 0.0 || tau_min > tau0) fail("need 0 <= tau_min <= tau0");
    if (eta != 0.0 && (eta < 1e-12 || eta > 1e-6))
        fail("eta must be 0 or in [1e-12, 1e-6]");

    if (format != "csv" && format != "json") fail("format must be 'csv' or 'json'");
}

std::string RunConfig::dump() const {
    std::ostringstream os;
    os.precision(17);
    os << "nx = " << nx << "\nny = " << ny << "\ny_max = " << y_max
       << "\ngrading_c = " << grading_c << "\nx_period = " << x_period
       << "\na0_mean = " << a0_mean << "\na0_amp = " << a0_amp
       << "\na0_mode = " << a0_mode << "\nsigma = " << sigma << "\ndelta = " << delta
       << "\ngamma = " << gamma << "\ns = " << s
       << "\nmonotone = " << (monotone ? "true" : "false")
       << "\namplitude = " << amplitude << "\nepsilon = " << epsilon
       << "\nn_galerkin = " << n_galerkin << "\ndt = " << dt << "\nt_end = " << t_end
       << "\nsample_every = " << sample_every
       << "\ndealias = " << (dealias ? "true" : "false") << "\ntau0 = " << tau0
       << "\ngevrey_m = " << gevrey_m << "\np_corr = " << p_corr
       << "\nj_max = " << j_max << "\nalpha = " << alpha << "\nchi_r1 = " << chi_r1
       << "\nchi_r2 = " << chi_r2 << "\npsi_edge = " << psi_edge
       << "\ny_split = " << y_split << "\nexclusion_band = " << exclusion_band
       << "\nprofile = " << profile << "\nkx_list = ";
    for (size_t i = 0; i < kx_list.size(); ++i)
        os << (i ? "," : "") << kx_list[i];
    os << "\nhorizon = " << horizon << "\nn_seeds = " << n_seeds
       << "\nfit_window = " << fit_window << "\nlin_dt = " << lin_dt
       << "\ntau_min = " << tau_min << "\neta = " << eta
       << "\noutput_dir = " << output_dir << "\nseed = " << seed
       << "\nformat = " << format;
    if (!snapshot.empty()) os << "\nsnapshot = " << snapshot;
    os << "\n";
    return os.str();
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    RunConfig cfg;
    cfg.config_path = path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        set_key(cfg, key, value, path + ":" + std::to_string(lineno));
    }
    return cfg;
}

RunConfig parse_cli(const std::vector<std::string>& args) {
    if (args.empty())
        throw ConfigError("usage: prandtl-gevrey <simulate|linstab|verify|diagnose|"
                          "divergence> [--config FILE] [--key value]...");
    RunConfig cfg;
    cfg.command = args[0];
    const std::vector<std::string> commands = {"simulate", "linstab", "verify",
                                               "diagnose", "divergence"};
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
        throw ConfigError("unknown command '" + cfg.command + "'");

    // first pass: a config file, when present, provides the base
    for (size_t i = 1; i + 1 < args.size(); i += 2) {
        if (args[i] == "--config") {
            cfg = parse_config_file(args[i + 1]);
            cfg.command = args[0];
        }
    }
    // second pass: flags override
    for (size_t i = 1; i < args.size(); i += 2) {
        const std::string& flag = args[i];
        if (flag.rfind("--", 0) != 0)
            throw ConfigError("expected a --flag, got '" + flag + "'");
        if (i + 1 >= args.size())
            throw ConfigError("flag '" + flag + "' is missing a value");
        if (flag == "--config") continue;
        set_key(cfg, flag.substr(2), args[i + 1], "flag " + flag);
    }
    cfg.validate();
    return cfg;
}

} // namespace prandtl
