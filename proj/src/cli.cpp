#include "modres/cli.hpp"

#include "modres/bessel.hpp"
#include "modres/coeffs.hpp"
#include "modres/dynamics.hpp"
#include "modres/error.hpp"
#include "modres/models.hpp"
#include "modres/resonance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

namespace modres::cli {

namespace {

const double nan = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::configuration, what); }

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void set_value(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& origin) {
    if (key == "command") config_error(origin + ": the command is given on the command line, not as key 'command'");
    if (!contains(known_keys(), key)) config_error(origin + ": unknown key '" + key + "'");
    if (value.empty()) config_error(origin + ": key '" + key + "' has an empty value");
    cfg.values[key] = value;
}

}  // namespace

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> c{"coeffs", "scan", "evolve", "compare", "tables"};
    return c;
}

const std::vector<std::string>& known_models() {
    static const std::vector<std::string> m{"rabi", "parosc", "nonlinear", "amplifier", "dicke", "two_atom", "single"};
    return m;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> k{
        "model",   "omega0",  "omega1",  "omega2",        "omega_a", "omega_b",  "omega_c",
        "nu",      "nu_min",  "nu_max",  "nu_step",       "g",       "g0",       "g1",
        "g2",      "gamma",   "epsilon_index", "spin",    "fock_a",  "fock_b",   "fock_c",
        "t_final", "steps_per_period", "kmax", "initial", "final",   "output",   "algebra",
        "intensity", "tolerance"};
    return k;
}

std::string RunConfig::text(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) config_error("missing required key '" + key + "'");
    return it->second;
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

double RunConfig::number(const std::string& key) const {
    const std::string s = text(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        config_error("key '" + key + "' is not a finite number: '" + s + "'");
    return v;
}

double RunConfig::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

int RunConfig::integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::round(v) || std::abs(v) > 1e9) config_error("key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

int RunConfig::integer_or(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) config_error(where + ": expected key=value");
        set_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
    return cfg;
}

RunConfig parse_args(const std::vector<std::string>& args) {
    if (args.empty()) config_error("missing command (one of coeffs, scan, evolve, compare, tables)");
    RunConfig flags;
    flags.command = args[0];
    if (!contains(known_commands(), flags.command)) config_error("unknown command '" + flags.command + "'");

    std::optional<std::string> config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0) config_error("unexpected argument '" + a + "'");
        std::string key = a.substr(2);
        std::string value;
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) config_error("flag --" + key + " needs a value");
            value = args[++i];
        }
        if (key == "config")
            config_path = value;
        else if (key == "dump-config")
            flags.dump_path = value;
        else
            set_value(flags, key, value, "--" + key);
    }

    RunConfig cfg;
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in) config_error("cannot read config file '" + *config_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_config_text(ss.str(), *config_path);
    }
    cfg.command = flags.command;
    cfg.dump_path = flags.dump_path;
    for (const auto& [k, v] : flags.values) cfg.values[k] = v;
    return cfg;
}

std::string dump_config(const RunConfig& cfg) {
    std::string s;
    for (const auto& [k, v] : cfg.values) s += k + "=" + v + "\n";
    return s;
}

std::string format_double(double v) {
    char buf[64];
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            out << csv_field(r[i]);
        }
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        if (r.size() != header.size()) fail(ErrorKind::parameter, "csv rows must match the header width");
        line(r);
    }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
    write_csv(out, header, rows);
    out.flush();
    if (!out) fail(ErrorKind::io, "failed writing '" + path + "'");
}

namespace {

using dynamics::Index;
using models::ModelSpec;

std::string short_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void require(const RunConfig& cfg, std::initializer_list<const char*> keys) {
    std::string missing;
    for (const char* k : keys)
        if (!cfg.has(k)) missing += std::string(missing.empty() ? "" : ", ") + k;
    if (!missing.empty()) config_error("missing required key(s): " + missing);
}

// Everything a command needs to know about one model family.
struct Setup {
    std::function<ModelSpec(double)> build;
    std::function<double(double)> gamma_at;           // modulation depth at nu (NaN if not used)
    std::function<double(double, double)> predicted;  // predicted resonance for a grid [lo, hi]
    std::function<double(double)> window;             // default t_final at nu
    std::function<Index(const ModelSpec&, const std::string&)> label;
    std::function<Eigen::MatrixXcd(const ModelSpec&)> observable;
    std::string observable_name;
    std::string initial, final_state;
};

liealg::AlgebraKind single_kind(const RunConfig& cfg, const std::string& fallback) {
    const std::string a = cfg.text_or("algebra", fallback);
    if (a == "su2") return liealg::AlgebraKind::su2(cfg.number_or("spin", 0.5));
    if (a == "su11") return liealg::AlgebraKind::su11_boson(cfg.integer_or("fock_a", 16));
    if (a == "h1") return liealg::AlgebraKind::h1(cfg.integer_or("fock_a", 16));
    config_error("key 'algebra' must be su2, su11 or h1, got '" + a + "'");
}

// gamma, or the model's dimensionless index converted with gamma = index * nu / scale
std::function<double(double)> modulation(const RunConfig& cfg, double scale, bool index_scales_with_nu) {
    const bool hg = cfg.has("gamma"), he = cfg.has("epsilon_index");
    if (hg && he) config_error("supply either 'gamma' or 'epsilon_index', not both");
    if (!hg && !he) config_error("missing required key 'gamma' or 'epsilon_index'");
    if (hg) {
        const double g = cfg.number("gamma");
        if (g < 0) config_error("key 'gamma' must be >= 0");
        return [g](double) { return g; };
    }
    const double e = cfg.number("epsilon_index");
    if (e < 0) config_error("key 'epsilon_index' must be >= 0");
    if (!index_scales_with_nu) return [e, scale](double) { return e * scale; };
    return [e, scale](double nu) { return e * nu / scale; };
}

Index spin_label(const ModelSpec& m, std::size_t factor, char c) {
    const Index d = m.space.factors[factor].dim;
    if (c == 'e') return 0;
    if (c == 'g') return d - 1;
    config_error("spin label must be g or e");
}

Index index_label(const ModelSpec& m, const std::string& s, const std::string& key) {
    static const std::regex digits("[0-9]+");
    if (!std::regex_match(s, digits)) config_error("key '" + key + "': cannot read basis label '" + s + "'");
    const Index i = std::stol(s);
    if (i >= m.dim()) config_error("key '" + key + "': basis index " + s + " outside the space");
    return i;
}

Eigen::MatrixXcd fock_number(const ModelSpec& m, std::size_t factor) {
    const auto& f = m.space.factors[factor];
    Eigen::MatrixXcd n = m.space.lifted[factor].x_zero;
    if (f.kind.family() == liealg::Family::su11_boson)
        n = 2.0 * n - 0.5 * Eigen::MatrixXcd::Identity(m.dim(), m.dim());
    return n;
}

Setup make_setup(const RunConfig& cfg) {
    const std::string model = cfg.text("model");
    if (!contains(known_models(), model)) config_error("key 'model': unknown model '" + model + "'");

    Setup s;
    s.gamma_at = [](double) { return nan; };
    s.predicted = [](double, double) { return nan; };
    s.window = [](double) { return nan; };
    s.observable = [](const ModelSpec& m) { return Eigen::MatrixXcd(m.space.lifted[0].x_zero); };
    s.observable_name = "x0";

    auto generic_label = [](const ModelSpec& m, const std::string& v) -> Index {
        if (m.space.factors[0].kind.family() == liealg::Family::su2 && (v == "g" || v == "e"))
            return spin_label(m, 0, v[0]);
        return index_label(m, v, "initial/final");
    };

    if (model == "rabi") {
        require(cfg, {"omega0", "g"});
        const double w = cfg.number("omega0"), g = cfg.number("g");
        const auto kind = liealg::AlgebraKind::su2(cfg.number_or("spin", 0.5));
        s.build = [=](double nu) {
            auto m = models::build_single_modulated(kind, w, nu, 0.0, g);
            m.label = "rabi";
            return m;
        };
        auto order = [=](double nu) { return std::max(1L, std::lround(w / nu)); };
        s.predicted = [=](double lo, double hi) {
            const long n = order(0.5 * (lo + hi));
            return n % 2 == 1 ? coeffs::rabi_resonance_nu(w, g, static_cast<int>(n)) : nan;
        };
        s.window = [=](double nu) {
            const long n = order(nu);
            if (n % 2 == 0 || n > coeffs::max_recursion_order) return nan;
            const auto t = coeffs::weak_recursion(1, w, nu, 0.0, g, static_cast<int>(n - 1));
            return 6.0 * std::numbers::pi / std::abs(g * t.eps[n - 1]);
        };
        s.label = generic_label;
        s.observable_name = "s_z";
        s.initial = "e";
        s.final_state = "g";
    } else if (model == "single") {
        require(cfg, {"omega0", "g0", "g1"});
        const double w = cfg.number("omega0"), g0 = cfg.number("g0"), g1 = cfg.number("g1");
        const auto kind = single_kind(cfg, "su2");
        if (kind.family() == liealg::Family::h1) config_error("key 'algebra': single model needs su2 or su11");
        s.build = [=](double nu) { return models::build_single_modulated(kind, w, nu, g0, g1); };
        s.label = generic_label;
        s.initial = kind.family() == liealg::Family::su2 ? "e" : "0";
        s.final_state = kind.family() == liealg::Family::su2 ? "g" : "2";
    } else if (model == "parosc") {
        require(cfg, {"omega0"});
        const double w = cfg.number("omega0");
        const int n = cfg.integer_or("fock_a", 16);
        // index g/omega with g = omega gamma / 2
        s.gamma_at = modulation(cfg, 2.0, false);
        s.build = [=, gamma = s.gamma_at](double nu) { return models::build_parametric_oscillator(w, nu, gamma(nu), n); };
        s.label = [](const ModelSpec& m, const std::string& v) { return index_label(m, v, "initial/final"); };
        s.observable = [](const ModelSpec& m) { return fock_number(m, 0); };
        s.observable_name = "n";
        s.initial = "0";
        s.final_state = "2";
    } else if (model == "nonlinear") {
        require(cfg, {"omega0", "g"});
        const double w = cfg.number("omega0"), g = cfg.number("g");
        const auto kind = single_kind(cfg, "su2");
        const std::string intensity = cfg.text_or("intensity", "one");
        models::DiagonalFunction f;
        if (intensity == "one")
            f = [](double) { return 1.0; };
        else if (intensity == "sqrt")
            f = [](double x) { return std::sqrt(std::max(0.0, x + 1.0)); };
        else
            config_error("key 'intensity' must be one or sqrt, got '" + intensity + "'");
        s.gamma_at = modulation(cfg, w, true);
        s.build = [=, gamma = s.gamma_at](double nu) { return models::build_nonlinear(kind, w, gamma(nu), nu, g, f); };
        s.label = generic_label;
        s.initial = kind.family() == liealg::Family::su2 ? "e" : "0";
        s.final_state = kind.family() == liealg::Family::su2 ? "g" : "1";
    } else if (model == "amplifier") {
        require(cfg, {"omega_a", "omega_b", "g"});
        const double wa = cfg.number("omega_a"), wb = cfg.number("omega_b"), g = cfg.number("g");
        const int na = cfg.integer_or("fock_a", 8), nb = cfg.integer_or("fock_b", 30);
        s.gamma_at = modulation(cfg, wa, true);
        auto index_at = [wa, gamma = s.gamma_at](double nu) { return wa * gamma(nu) / nu; };
        s.build = [=, gamma = s.gamma_at](double nu) { return models::build_amplifier(wa, wb, nu, gamma(nu), g, na, nb); };
        s.predicted = [=](double lo, double hi) {
            double nu = 0.5 * (lo + hi);
            for (int it = 0; it < 100; ++it) {
                const double next = coeffs::amplifier_constants(wa, wb, nu, g, index_at(nu)).nu_two_photon;
                if (std::abs(next - nu) <= 1e-15 * nu) return next;
                nu = next;
            }
            return nu;
        };
        // growth window: 2 |g_eff| t = 1
        s.window = [=](double nu) {
            return 1.0 / (2.0 * std::abs(coeffs::amplifier_constants(wa, wb, nu, g, index_at(nu)).g_eff));
        };
        s.label = [](const ModelSpec& m, const std::string& v) {
            static const std::regex re("([0-9]+)a([0-9]+)b");
            std::smatch mm;
            if (!std::regex_match(v, mm, re)) config_error("amplifier basis label must look like 0a2b, got '" + v + "'");
            return m.space.global_index({std::stol(mm[1]), std::stol(mm[2])});
        };
        s.observable = [](const ModelSpec& m) { return fock_number(m, 1); };
        s.observable_name = "nb";
        s.initial = "0a0b";
        s.final_state = "0a2b";
    } else if (model == "two_atom") {
        require(cfg, {"omega1", "omega2", "omega_c", "g0", "g1", "g2"});
        const double w1 = cfg.number("omega1"), w2 = cfg.number("omega2"), wc = cfg.number("omega_c");
        const double g0 = cfg.number("g0"), g1 = cfg.number("g1"), g2 = cfg.number("g2");
        const int nc = cfg.integer_or("fock_c", 6);
        s.build = [=](double nu) { return models::build_two_atom(w1, w2, wc, nu, g0, g1, g2, nc); };
        s.predicted = [=](double, double) { return coeffs::two_atom_constants(w1, w2, wc, 1.0, g0, g1, g2).nu_star; };
        s.window = [=](double nu) {
            return 6.0 * std::numbers::pi / std::abs(coeffs::two_atom_constants(w1, w2, wc, nu, g0, g1, g2).g_eff);
        };
        s.label = [](const ModelSpec& m, const std::string& v) {
            static const std::regex re("([ge])([ge])([0-9]+)");
            std::smatch mm;
            if (!std::regex_match(v, mm, re)) config_error("two-atom basis label must look like gg0, got '" + v + "'");
            return m.space.global_index(
                {spin_label(m, 0, mm.str(1)[0]), spin_label(m, 1, mm.str(2)[0]), static_cast<Index>(std::stol(mm[3]))});
        };
        s.observable = [](const ModelSpec& m) {
            const auto& a = m.space.lifted[0];
            const auto& b = m.space.lifted[1];
            return Eigen::MatrixXcd(a.x_plus * b.x_plus * b.x_minus * a.x_minus);
        };
        s.observable_name = "p_ee";
        s.initial = "gg0";
        s.final_state = "ee0";
    } else {  // dicke
        require(cfg, {"omega0", "omega1", "g"});
        const double w0 = cfg.number("omega0"), w1 = cfg.number("omega1"), g = cfg.number("g");
        const double spin = cfg.number_or("spin", 0.5);
        const int n = cfg.integer_or("fock_a", 16);
        s.gamma_at = modulation(cfg, w0, true);
        s.build = [=, gamma = s.gamma_at](double nu) {
            return models::build_dicke_modulated(spin, w0, w1, nu, gamma(nu), g, n);
        };
        s.window = [=, gamma = s.gamma_at](double nu) {
            const double j0 = bessel_j_sequence(w0 * gamma(nu) / nu, 0)[0];
            return 6.0 * std::numbers::pi / std::abs(g * j0);
        };
        s.label = [](const ModelSpec& m, const std::string& v) {
            static const std::regex re("([ge])([0-9]+)");
            std::smatch mm;
            if (!std::regex_match(v, mm, re)) return index_label(m, v, "initial/final");
            return m.space.global_index({spin_label(m, 0, mm.str(1)[0]), static_cast<Index>(std::stol(mm[2]))});
        };
        s.observable_name = "s_z";
        s.initial = "e0";
        s.final_state = "g1";
    }
    return s;
}

struct Summary {
    std::string head;
    std::vector<std::pair<std::string, std::string>> inputs, results;

    void in(const std::string& k, const std::string& v) { inputs.emplace_back(k, v); }
    void res(const std::string& k, double v) { results.emplace_back(k, short_num(v)); }
    void res(const std::string& k, const std::string& v) { results.emplace_back(k, v); }

    std::string line() const {
        std::string s = head;
        for (const auto& [k, v] : inputs) s += " " + k + "=" + v;
        s += " RESULT";
        for (const auto& [k, v] : results) s += " " + k + "=" + v;
        return s;
    }
};

Summary start_summary(const RunConfig& cfg) {
    Summary s;
    s.head = cfg.command + " " + cfg.text_or("model", "-");
    for (const auto& [k, v] : cfg.values)
        if (k != "model" && k != "output") s.in(k, v);
    return s;
}

// CSV goes to the output file, or ahead of the summary on stdout
void emit(const RunConfig& cfg, std::ostream& out, const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& rows) {
    if (cfg.has("output"))
        write_csv(cfg.text("output"), header, rows);
    else
        write_csv(out, header, rows);
}

dynamics::PropagatorConfig propagator(const RunConfig& cfg, const Setup& setup, double nu) {
    dynamics::PropagatorConfig p;
    p.steps_per_period = cfg.integer_or("steps_per_period", 64);
    if (cfg.has("t_final")) {
        p.t_final = cfg.number("t_final");
    } else {
        p.t_final = setup.window(nu);
        if (!std::isfinite(p.t_final)) config_error("missing required key 't_final' (no prediction to derive it from)");
    }
    return p;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
    require(cfg, {"model", "nu"});
    const std::string model = cfg.text("model");
    if (!contains(known_models(), model)) config_error("key 'model': unknown model '" + model + "'");
    const double nu = cfg.number("nu");
    const int kmax = cfg.integer_or("kmax", 6);
    Summary sum = start_summary(cfg);
    std::vector<std::vector<std::string>> rows;

    auto table_rows = [&](const coeffs::CoefficientTable& t, double prefactor) {
        for (int k = 0; k <= t.kmax; ++k)
            rows.push_back({std::to_string(k), format_double(t.h[k]), format_double(t.eps[k]),
                            format_double(prefactor * t.eps[k])});
        emit(cfg, out, {"k", "h_k", "eps_k", "g_eff_k"}, rows);
        sum.res("g_eff_" + std::to_string(t.kmax), prefactor * t.eps[t.kmax]);
    };

    if (model == "rabi") {
        require(cfg, {"omega0", "g"});
        table_rows(coeffs::weak_recursion(1, cfg.number("omega0"), nu, 0.0, cfg.number("g"), kmax), cfg.number("g"));
    } else if (model == "single") {
        require(cfg, {"omega0", "g0", "g1"});
        const auto kind = single_kind(cfg, "su2");
        if (kind.sign() == 0) config_error("key 'algebra': single model needs su2 or su11");
        table_rows(coeffs::weak_recursion(kind.sign(), cfg.number("omega0"), nu, cfg.number("g0"), cfg.number("g1"), kmax),
                   cfg.number("g1"));
    } else if (model == "parosc") {
        const Setup s = make_setup(cfg);
        const double w = cfg.number("omega0"), gamma = s.gamma_at(nu);
        const double g = w * gamma / 2.0;
        sum.in("gamma_used", short_num(gamma));
        table_rows(coeffs::weak_recursion(-1, 2.0 * w, nu, 2.0 * g, g, kmax), g / 2.0);
    } else if (model == "nonlinear" || model == "dicke") {
        const Setup s = make_setup(cfg);
        const double w = cfg.number("omega0"), g = cfg.number("g");
        const double eps = w * s.gamma_at(nu) / nu;
        const auto J = bessel_j_sequence(eps, std::max(kmax, 1));
        sum.in("epsilon_used", short_num(eps));
        for (int k = 0; k <= kmax; ++k) {
            const double coupling = g * ((k % 2 == 0) ? 1.0 : -1.0) * J[k];
            const double tilde = k >= 1 ? coeffs::tilde_I(w, nu, g, eps, k) : coeffs::nonlinear_I(w, nu, g, eps);
            rows.push_back({std::to_string(k), format_double(coupling), format_double(tilde)});
        }
        emit(cfg, out, {"k", "coupling_k", "shift_k"}, rows);
        sum.res("principal_coupling", g * J[0]);
        sum.res("I", coeffs::nonlinear_I(w, nu, g, eps));
    } else if (model == "amplifier") {
        const Setup s = make_setup(cfg);
        const double wa = cfg.number("omega_a"), wb = cfg.number("omega_b"), g = cfg.number("g");
        const double eps = wa * s.gamma_at(nu) / nu;
        const auto c = coeffs::amplifier_constants(wa, wb, nu, g, eps, std::max(kmax, 1));
        sum.in("epsilon_used", short_num(eps));
        rows = {{"g_eff", format_double(c.g_eff)},         {"I_a", format_double(c.I_a)},
                {"I_b", format_double(c.I_b)},             {"tilde_I_a", format_double(c.tilde_I_a)},
                {"tilde_I_b", format_double(c.tilde_I_b)}, {"nu_two_photon", format_double(c.nu_two_photon)}};
        for (std::size_t k = 1; k < c.eps1k.size(); ++k) {
            rows.push_back({"eps1_" + std::to_string(k), format_double(c.eps1k[k])});
            rows.push_back({"eps2_" + std::to_string(k), format_double(c.eps2k[k])});
        }
        emit(cfg, out, {"quantity", "value"}, rows);
        sum.res("g_eff", c.g_eff);
        sum.res("tilde_I_b", c.tilde_I_b);
        sum.res("nu_two_photon", c.nu_two_photon);
    } else if (model == "two_atom") {
        require(cfg, {"omega1", "omega2", "omega_c", "g0", "g1", "g2"});
        const auto c = coeffs::two_atom_constants(cfg.number("omega1"), cfg.number("omega2"), cfg.number("omega_c"), nu,
                                                  cfg.number("g0"), cfg.number("g1"), cfg.number("g2"));
        rows = {{"g_eff", format_double(c.g_eff)},
                {"omega_tilde_1", format_double(c.omega_tilde_1)},
                {"omega_tilde_2", format_double(c.omega_tilde_2)},
                {"nu_star", format_double(c.nu_star)},
                {"epsilon_index", format_double(c.epsilon)}};
        emit(cfg, out, {"quantity", "value"}, rows);
        sum.res("g_eff", c.g_eff);
        sum.res("nu_star", c.nu_star);
    }
    out << sum.line() << '\n';
    return exit_ok;
}

struct ScanRun {
    resonance::ScanResult result;
    Summary summary;
};

ScanRun do_scan(const RunConfig& cfg) {
    require(cfg, {"model", "nu_min", "nu_max", "nu_step"});
    const Setup s = make_setup(cfg);
    const auto grid = resonance::uniform_grid(cfg.number("nu_min"), cfg.number("nu_max"), cfg.number("nu_step"));
    const double predicted = s.predicted(grid.front(), grid.back());
    const double nu_ref = std::isfinite(predicted) ? predicted : 0.5 * (grid.front() + grid.back());
    const auto pcfg = propagator(cfg, s, nu_ref);

    const ModelSpec probe_model = s.build(nu_ref);
    const resonance::Probe probe{s.label(probe_model, cfg.text_or("initial", s.initial)),
                                 s.label(probe_model, cfg.text_or("final", s.final_state))};

    ScanRun run;
    run.result = resonance::scan_nu(s.build, grid, probe, pcfg, predicted);
    run.summary = start_summary(cfg);
    run.summary.in("t_final_used", short_num(pcfg.t_final));
    return run;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
    ScanRun run = do_scan(cfg);
    const auto& r = run.result;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.nu_grid.size(); ++i)
        rows.push_back({format_double(r.nu_grid[i]), format_double(r.p_avg[i])});
    emit(cfg, out, {"nu", "p_avg"}, rows);
    run.summary.res("peak_nu", r.peak_nu);
    run.summary.res("peak_value", r.peak_value);
    run.summary.res("predicted_nu", r.predicted_nu);
    run.summary.res("discrepancy", r.discrepancy);
    out << run.summary.line() << '\n';
    return exit_ok;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    ScanRun run = do_scan(cfg);
    const auto& r = run.result;
    if (std::isnan(r.predicted_nu)) config_error("key 'model': no closed-form resonance prediction to compare with");
    const double step = cfg.number("nu_step");
    const auto rep = resonance::compare(r, {cfg.number_or("tolerance", 2.0 * step), false});
    std::vector<std::vector<std::string>> rows{{format_double(rep.predicted), format_double(rep.measured),
                                                format_double(rep.abs_error), format_double(rep.rel_error),
                                                rep.pass ? "1" : "0", format_double(rep.tolerance.value)}};
    emit(cfg, out, {"predicted", "measured", "abs_error", "rel_error", "pass", "tolerance"}, rows);
    run.summary.res("predicted_nu", rep.predicted);
    run.summary.res("peak_nu", rep.measured);
    run.summary.res("abs_error", rep.abs_error);
    run.summary.res("tolerance", rep.tolerance.value);
    run.summary.res("pass", rep.pass ? "yes" : "no");
    out << run.summary.line() << '\n';
    return rep.pass ? exit_ok : exit_compare;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
    require(cfg, {"model", "nu"});
    const Setup s = make_setup(cfg);
    const double nu = cfg.number("nu");
    const ModelSpec m = s.build(nu);
    const auto pcfg = propagator(cfg, s, nu);
    const Index init = s.label(m, cfg.text_or("initial", s.initial));
    const auto traj = dynamics::expectation_trajectory(m, pcfg, dynamics::basis_state(m.dim(), init), s.observable(m));

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        rows.push_back({format_double(traj.times[i]), format_double(traj.values[i])});
    emit(cfg, out, {"t", "value"}, rows);

    Summary sum = start_summary(cfg);
    if (std::isfinite(s.gamma_at(nu))) sum.in("gamma_used", short_num(s.gamma_at(nu)));
    sum.in("t_final_used", short_num(pcfg.t_final));
    sum.res("observable", s.observable_name);
    sum.res("samples", static_cast<double>(traj.times.size()));
    sum.res("final", traj.values.back());
    sum.res("max", *std::max_element(traj.values.begin(), traj.values.end()));
    if (cfg.text("model") == "amplifier") {
        const double eps = cfg.number("omega_a") * s.gamma_at(nu) / nu;
        const double g_eff =
            coeffs::amplifier_constants(cfg.number("omega_a"), cfg.number("omega_b"), nu, cfg.number("g"), eps).g_eff;
        sum.res("g_eff", g_eff);
        sum.res("predicted_final", models::effective_amplifier_prediction(g_eff, traj.times.back()));
    } else {
        try {
            const auto fit = resonance::extract_rabi(traj);
            sum.res("omega_rabi", fit.omega_rabi);
            sum.res("amplitude", fit.amplitude);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::no_oscillation) throw;
            sum.res("omega_rabi", "none");
        }
    }
    out << sum.line() << '\n';
    return exit_ok;
}

int cmd_tables(const RunConfig& cfg, std::ostream& out) {
    // leading coefficients c in g_eff = c g (g/omega)^k at exact resonance
    const double w = cfg.number_or("omega0", 1.0);
    const double g = 1e-3 * w;
    const int rows_wanted = cfg.integer_or("kmax", 3);
    if (rows_wanted < 1 || 2 * (rows_wanted - 1) > coeffs::max_recursion_order)
        config_error("key 'kmax' must be between 1 and 13 for tables");
    const std::string model = cfg.text_or("model", "rabi");
    Summary sum = start_summary(cfg);
    std::vector<std::vector<std::string>> rows;

    if (model == "rabi") {
        for (int r = 0; r < rows_wanted; ++r) {
            const int k = 2 * r;
            const auto t = coeffs::weak_recursion(1, w, w / (k + 1), 0.0, g, k);
            const double c = t.eps[k] / std::pow(g / w, k);
            rows.push_back({std::to_string(k + 1), std::to_string(k), format_double(c)});
            sum.res("c" + std::to_string(k + 1), c);
        }
    } else if (model == "parosc") {
        for (int k = 0; k < rows_wanted; ++k) {
            // 2 omega = (k+1) nu, coefficient of a^2† relative to g (g/omega)^k
            const auto t = coeffs::weak_recursion(-1, 2.0 * w, 2.0 * w / (k + 1), 2.0 * g, g, k);
            const double c = t.eps[k] / (2.0 * std::pow(g / w, k));
            rows.push_back({std::to_string(k + 1), std::to_string(k), format_double(c)});
            sum.res("c" + std::to_string(k + 1), c);
        }
    } else {
        config_error("key 'model': tables are available for rabi and parosc");
    }
    emit(cfg, out, {"resonance", "power", "coefficient"}, rows);
    out << sum.line() << '\n';
    return exit_ok;
}

const char* usage =
    "usage: modres <coeffs|scan|evolve|compare|tables> [--key=value ...] [--config FILE] [--dump-config FILE]\n";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
        out << usage;
        return exit_ok;
    }
    try {
        const RunConfig cfg = parse_args(args);
        if (cfg.dump_path) {
            std::ofstream f(*cfg.dump_path, std::ios::binary);
            if (!f) fail(ErrorKind::io, "cannot open '" + *cfg.dump_path + "' for writing");
            f << dump_config(cfg);
        }
        if (cfg.command == "coeffs") return cmd_coeffs(cfg, out);
        if (cfg.command == "scan") return cmd_scan(cfg, out);
        if (cfg.command == "compare") return cmd_compare(cfg, out);
        if (cfg.command == "evolve") return cmd_evolve(cfg, out);
        return cmd_tables(cfg, out);
    } catch (const Error& e) {
        err << "modres: " << to_string(e.kind()) << ": " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::parameter:
            case ErrorKind::configuration:
            case ErrorKind::capacity:
                return exit_config;
            default:
                return exit_numeric;
        }
    } catch (const std::exception& e) {
        err << "modres: " << e.what() << '\n';
        return exit_numeric;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace modres::cli
