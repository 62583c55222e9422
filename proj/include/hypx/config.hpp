#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hypx/caps.hpp"
#include "hypx/extension.hpp"
#include "hypx/phase.hpp"
#include "hypx/rects.hpp"

namespace hypx {

// Flat "key = value" text: one pair per line, '#' starts a comment, lists are
// comma separated. Unknown keys are rejected.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

private:
    std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
    // phase
    std::string phase = "saddle";
    std::vector<double> phase_params;
    int order = 8;
    // scales
    int K = 128;
    double mu = 1.0;
    double eps = 0.05;
    double eps_prime = 0.04;
    std::string alpha = "K^-eps";  // or a number
    double R = 32.0;
    std::vector<double> R_list{16.0, 32.0, 64.0};
    double p = 3.25;
    double grid_step = 1.0;  // frequency grid step h_xi
    int grid_points = 33;    // samples per axis for sweeps
    double quad_tol = 1e-8;
    int field_order = 8;
    double panel_scale = 1.0;
    // strip family
    double C = 40.0;
    double C_prime = 64.0;
    double big_cap_constant = 2.0;
    // amplitude
    std::string amplitude = "constant";  // constant | smooth-random
    std::vector<int> amplitude_caps;     // empty means all of Sigma
    // sublevel
    std::string sublevel_function = "cos";
    double sublevel_lambda = 1e-2;
    int sublevel_r = 2;
    double sublevel_a = -1.0, sublevel_b = 1.0;
    // cover
    std::vector<int> cover_F;  // empty means a generated family
    int cover_size = 12;
    // rescale
    int rescale_strips = 5;
    int rescale_xi = 20;
    // wave packets
    double delta = 0.1;
    int wp_samples = 192;
    int wp_modes = 48;
    int wp_packets = 8;
    double wp_grid_step = 4.0;
    // run
    unsigned seed = 1;
    std::string out = "out";
    int threads = 1;

    static ExperimentConfig from(const KeyValueFile& kv);
    void validate() const;
    double alpha_value() const;
    std::map<std::string, std::string> as_map() const;
};

PhaseFunction make_phase(const ExperimentConfig& c);
Amplitude make_amplitude(const ExperimentConfig& c, std::shared_ptr<const CapGrid> caps);
FamilyParams make_family_params(const ExperimentConfig& c);

// Named one-variable test functions for the sublevel tools.
ScalarFunction named_function(const std::string& name);
std::vector<std::string> named_functions();

}  // namespace hypx
