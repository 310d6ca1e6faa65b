#pragma once

#include <string>
#include <vector>

#include "wavetank/config.hpp"
#include "wavetank/galerkin.hpp"
#include "wavetank/wave_gen.hpp"

namespace wavetank {
namespace experiments {

// Worker-pool width: WAVETANK_THREADS caps the OpenMP pool (0 = library default).
int worker_threads();
void apply_thread_cap();

SystemParams params_from_config(const Config& cfg);
SystemParams params_for_system(const std::string& name);  // reg_nwogu | nwogu | bbm

struct ConvergenceRow {
    int n_elem;
    double e0_eta, rate0_eta, e0_u, rate0_u;
    double e1_eta, rate1_eta, e1_u, rate1_u;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double final_time = 1.0;
    double wall_seconds = 0.0;
    bool check_passed = true;
    std::vector<std::string> notes;
};

ConvergenceReport run_convergence(const Config& cfg, const std::string& out_dir, bool check);

struct ReflectionCase {
    std::string system;
    double amplitude = 0.0;   // requested
    double speed = 0.0;       // solitary speed c_s
    double runup = 0.0;       // max over time of eta(L, t)
    double post_amplitude = 0.0;
    double mass_drift = 0.0;  // relative eta-mass drift
    double energy_drift = 0.0;
    double T = 0.0;
};

struct ReflectionReport {
    std::vector<ReflectionCase> cases;
    double wall_seconds = 0.0;
    bool check_passed = true;
    std::vector<std::string> notes;
};

ReflectionReport run_reflection(const Config& cfg, const std::string& out_dir, bool check);

struct LinearCompareReport {
    std::vector<int> n_list;
    std::vector<double> disc_eta, disc_u;  // sup over the sample set
    double ut_tolerance = 0.0;
    double wall_seconds = 0.0;
    bool check_passed = true;
    std::vector<std::string> notes;
};

LinearCompareReport run_linear_compare(const Config& cfg, const std::string& out_dir, bool check);

struct PicardCompareReport {
    double T = 0.0;
    std::vector<double> contraction_ratios;
    std::vector<int> levels_m;
    std::vector<double> discrepancy;
    double wall_seconds = 0.0;
    bool check_passed = true;
    std::vector<std::string> notes;
};

PicardCompareReport run_picard_compare(const Config& cfg, const std::string& out_dir, bool check);

// Peak of a FEM eta field by fine sampling plus quadratic refinement.
struct Peak {
    double x;
    double height;
};
Peak find_peak(const SemidiscreteSystem& sys, const State& s);

}  // namespace experiments
}  // namespace wavetank
