#include "hypx/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hypx {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigParse, "key '" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::fabs(d) > 2e9)
        throw Error(ErrorCode::ConfigParse, "key '" + key + "' expects an integer, got '" + v + "'");
    return static_cast<int>(d);
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
    return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& s : split_list(v)) out.push_back(to_int(key, s));
    return out;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(12);
    for (size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
    return os.str();
}

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    for (size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
    return os.str();
}

std::string num(double d) {
    std::ostringstream os;
    os.precision(12);
    os << d;
    return os.str();
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigParse, origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty()) throw Error(ErrorCode::ConfigParse, origin + ":" + std::to_string(lineno) + ": empty key");
        if (kv.values_.count(key))
            throw Error(ErrorCode::ConfigParse, origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv.values_[key] = value;
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigParse, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

ExperimentConfig ExperimentConfig::from(const KeyValueFile& kv) {
    ExperimentConfig c;
    for (const auto& [k, v] : kv.values()) {
        if (k == "phase") c.phase = v;
        else if (k == "phase_params") c.phase_params = to_doubles(k, v);
        else if (k == "order") c.order = to_int(k, v);
        else if (k == "K") c.K = to_int(k, v);
        else if (k == "mu") c.mu = to_double(k, v);
        else if (k == "eps") c.eps = to_double(k, v);
        else if (k == "eps_prime") c.eps_prime = to_double(k, v);
        else if (k == "alpha") c.alpha = v;
        else if (k == "R") c.R = to_double(k, v);
        else if (k == "R_list") c.R_list = to_doubles(k, v);
        else if (k == "p") c.p = to_double(k, v);
        else if (k == "grid_step") c.grid_step = to_double(k, v);
        else if (k == "grid_points") c.grid_points = to_int(k, v);
        else if (k == "quad_tol") c.quad_tol = to_double(k, v);
        else if (k == "field_order") c.field_order = to_int(k, v);
        else if (k == "panel_scale") c.panel_scale = to_double(k, v);
        else if (k == "C") c.C = to_double(k, v);
        else if (k == "C_prime") c.C_prime = to_double(k, v);
        else if (k == "big_cap_constant") c.big_cap_constant = to_double(k, v);
        else if (k == "amplitude") c.amplitude = v;
        else if (k == "amplitude_caps") c.amplitude_caps = to_ints(k, v);
        else if (k == "sublevel_function") c.sublevel_function = v;
        else if (k == "sublevel_lambda") c.sublevel_lambda = to_double(k, v);
        else if (k == "sublevel_r") c.sublevel_r = to_int(k, v);
        else if (k == "sublevel_a") c.sublevel_a = to_double(k, v);
        else if (k == "sublevel_b") c.sublevel_b = to_double(k, v);
        else if (k == "cover_F") c.cover_F = to_ints(k, v);
        else if (k == "cover_size") c.cover_size = to_int(k, v);
        else if (k == "rescale_strips") c.rescale_strips = to_int(k, v);
        else if (k == "rescale_xi") c.rescale_xi = to_int(k, v);
        else if (k == "delta") c.delta = to_double(k, v);
        else if (k == "wp_samples") c.wp_samples = to_int(k, v);
        else if (k == "wp_modes") c.wp_modes = to_int(k, v);
        else if (k == "wp_packets") c.wp_packets = to_int(k, v);
        else if (k == "wp_grid_step") c.wp_grid_step = to_double(k, v);
        else if (k == "seed") c.seed = static_cast<unsigned>(to_int(k, v));
        else if (k == "out") c.out = v;
        else if (k == "threads") c.threads = to_int(k, v);
        else throw Error(ErrorCode::ConfigParse, "unknown key '" + k + "'");
    }
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::ConfigParse, m); };
    if (K < 16 || (K & (K - 1)) != 0) bad("K must be a power of two >= 16");
    if (!(mu >= 1.0)) bad("mu must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) bad("eps must lie in (0, 1)");
    if (!(eps_prime > 0.0 && eps_prime <= 0.1)) bad("eps_prime must lie in (0, 0.1]");
    if (!(R > 0.0)) bad("R must be positive");
    for (size_t k = 0; k < R_list.size(); ++k)
        if (!(R_list[k] > 0.0) || (k && !(R_list[k] > R_list[k - 1]))) bad("R_list must be positive and increasing");
    if (!(p >= 1.0)) bad("p must be >= 1");
    if (!(grid_step > 0.0)) bad("grid_step must be positive");
    if (grid_points < 3) bad("grid_points must be >= 3");
    if (!(quad_tol > 0.0)) bad("quad_tol must be positive");
    if (field_order < 1 || field_order > 64) bad("field_order must lie in [1, 64]");
    if (!(panel_scale > 0.0)) bad("panel_scale must be positive");
    if (!(C > 34.0)) bad("C must exceed 34");
    if (!(C_prime > 0.0) || !(big_cap_constant > 0.0)) bad("C_prime and big_cap_constant must be positive");
    if (amplitude != "constant" && amplitude != "smooth-random") bad("amplitude must be constant or smooth-random");
    if (sublevel_r < 1) bad("sublevel_r must be >= 1");
    if (!(sublevel_lambda > 0.0) || !(sublevel_b > sublevel_a)) bad("sublevel interval or lambda invalid");
    if (cover_size < 1) bad("cover_size must be >= 1");
    if (rescale_strips < 1 || rescale_xi < 1) bad("rescale counts must be positive");
    if (!(delta > 0.0 && delta <= 0.25)) bad("delta must lie in (0, 0.25]");
    if (wp_packets < 1 || !(wp_grid_step > 0.0)) bad("wave packet settings invalid");
    if (threads < 0) bad("threads must be >= 0");
    if (alpha != "K^-eps") {
        const double a = to_double("alpha", alpha);
        if (!(a > 0.0)) bad("alpha must be positive");
    }
    (void)alpha_value();
}

double ExperimentConfig::alpha_value() const {
    if (alpha == "K^-eps") return std::pow(static_cast<double>(K), -eps);
    return to_double("alpha", alpha);
}

std::map<std::string, std::string> ExperimentConfig::as_map() const {
    return {{"phase", phase},
            {"phase_params", join(phase_params)},
            {"order", std::to_string(order)},
            {"K", std::to_string(K)},
            {"mu", num(mu)},
            {"eps", num(eps)},
            {"eps_prime", num(eps_prime)},
            {"alpha", alpha},
            {"R", num(R)},
            {"R_list", join(R_list)},
            {"p", num(p)},
            {"grid_step", num(grid_step)},
            {"grid_points", std::to_string(grid_points)},
            {"quad_tol", num(quad_tol)},
            {"field_order", std::to_string(field_order)},
            {"panel_scale", num(panel_scale)},
            {"C", num(C)},
            {"C_prime", num(C_prime)},
            {"big_cap_constant", num(big_cap_constant)},
            {"amplitude", amplitude},
            {"amplitude_caps", join(amplitude_caps)},
            {"sublevel_function", sublevel_function},
            {"sublevel_lambda", num(sublevel_lambda)},
            {"sublevel_r", std::to_string(sublevel_r)},
            {"sublevel_a", num(sublevel_a)},
            {"sublevel_b", num(sublevel_b)},
            {"cover_F", join(cover_F)},
            {"cover_size", std::to_string(cover_size)},
            {"rescale_strips", std::to_string(rescale_strips)},
            {"rescale_xi", std::to_string(rescale_xi)},
            {"delta", num(delta)},
            {"wp_samples", std::to_string(wp_samples)},
            {"wp_modes", std::to_string(wp_modes)},
            {"wp_packets", std::to_string(wp_packets)},
            {"wp_grid_step", num(wp_grid_step)},
            {"seed", std::to_string(seed)}};
}

PhaseFunction make_phase(const ExperimentConfig& c) { return builtin_family(c.phase, c.phase_params, c.order); }

Amplitude make_amplitude(const ExperimentConfig& c, std::shared_ptr<const CapGrid> caps) {
    Amplitude f = c.amplitude == "constant" ? constant_amplitude() : smooth_random_amplitude(c.seed);
    if (!caps) return f;
    if (c.amplitude_caps.empty()) return attach_grid(f, caps);
    return restrict(f, caps, c.amplitude_caps);
}

FamilyParams make_family_params(const ExperimentConfig& c) {
    FamilyParams p;
    p.K = c.K;
    p.mu = c.mu;
    p.eps_prime = c.eps_prime;
    p.C = c.C;
    p.C_prime = c.C_prime;
    p.big_cap_constant = c.big_cap_constant;
    return p;
}

ScalarFunction named_function(const std::string& name) {
    ScalarFunction g;
    g.label = name;
    if (name == "cos") {
        g.g = [](double t) { return std::cos(3.0 * t); };
        g.deriv = [](int m, double t) {
            const double s = std::pow(3.0, m);
            switch (m % 4) {
                case 0: return s * std::cos(3.0 * t);
                case 1: return -s * std::sin(3.0 * t);
                case 2: return -s * std::cos(3.0 * t);
                default: return s * std::sin(3.0 * t);
            }
        };
    } else if (name == "cubic") {
        g.g = [](double t) { return t * (t - 0.3) * (t + 0.5); };
        g.deriv = [](int m, double t) {
            switch (m) {
                case 0: return t * (t - 0.3) * (t + 0.5);
                case 1: return 3.0 * t * t + 0.4 * t - 0.15;
                case 2: return 6.0 * t + 0.4;
                case 3: return 6.0;
                default: return 0.0;
            }
        };
    } else if (name == "square") {
        g.g = [](double t) { return t * t; };
        g.deriv = [](int m, double t) { return m == 0 ? t * t : m == 1 ? 2.0 * t : m == 2 ? 2.0 : 0.0; };
    } else if (name == "sine-wave") {
        g.g = [](double t) { return 0.5 * std::sin(7.0 * t); };
    } else if (name == "gauss-bump") {
        g.g = [](double t) { return std::exp(-20.0 * (t - 0.2) * (t - 0.2)) - 0.5; };
    } else if (name == "linear") {
        g.g = [](double t) { return 0.8 * t - 0.1; };
        g.deriv = [](int m, double t) { return m == 0 ? 0.8 * t - 0.1 : m == 1 ? 0.8 : 0.0; };
    } else {
        throw Error(ErrorCode::UnknownName, "unknown test function '" + name + "'");
    }
    return g;
}

std::vector<std::string> named_functions() { return {"cos", "cubic", "square", "sine-wave", "gauss-bump", "linear"}; }

}  // namespace hypx
