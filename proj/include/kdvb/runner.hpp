#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kdvb/phase.hpp"
#include "kdvb/probe.hpp"
#include "kdvb/solver.hpp"

namespace kdvb {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Subcommand { simulate, sweep, verify_lemmas, probe, report, truncation };

const char* subcommand_name(Subcommand s);

struct InitialData {
    std::string kind = "cos";  // cos | sum-of-modes | random-sobolev
    double amplitude = 1.0;
    std::vector<std::pair<int, double>> modes;  // sum-of-modes: cos(k x) amplitudes
    double data_s = 1.0;                        // random-sobolev decay index
};

// Flat key = value experiment description; every field is validated against
// the module preconditions before any compute starts.
struct ExperimentConfig {
    Subcommand subcommand = Subcommand::simulate;
    std::string equation = "kdvb";  // kdvb | mkdvb
    double epsilon = 0.0;
    std::vector<double> epsilons;
    double s = 0.0;
    double T = 1.0;
    int K = 32;
    int dealias = -1;
    int N = 0;  // split parameter; 0 -> default rule
    int time_steps = 512;
    int save_nodes = 0;
    std::string method = "reference";  // reference | picard
    std::string quadrature = "simpson";
    std::uint64_t seed = 1;
    int threads = 1;
    InitialData initial_data;
    std::string output_dir = "runs/out";
    bool fit = true;                   // sweep: fit the rate
    std::vector<int> cutoffs;          // truncation
    // probe settings
    std::string probe_operator = "A2";
    double probe_s = 0.0;
    int probe_trials = 32;
    std::vector<int> probe_N_values = {8, 16, 32, 64};
    double probe_t = 0.25;
    double probe_epsilon = 0.5;
    // verify-lemmas settings
    ThresholdConvention convention;
    std::vector<double> lemma_epsilons = {0.0, 0.5, 1.0};

    SolverConfig solver_config() const;
    SpectralField build_initial_data() const;
    void validate() const;
    std::string fingerprint_text() const;
};

// Parses the documented key = value format; errors carry 1-based line numbers.
ExperimentConfig parse_config_text(const std::string& text, Subcommand subcommand);
ExperimentConfig parse_config_file(const std::filesystem::path& path, Subcommand subcommand);

struct CliOverrides {
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

struct ArtifactRecord {
    std::string path;  // relative to the run directory
    std::uint64_t bytes = 0;
    std::string fnv1a64_hex;
};

struct RunOutcome {
    int exit_code = 0;
    std::filesystem::path run_dir;
    std::vector<ArtifactRecord> artifacts;
    std::string message;
};

// Executes the subcommand: builds data, runs the computation on a bounded
// worker pool, writes CSV/JSON artifacts atomically (write-temp-rename) plus
// a manifest with content digests.  On compute failure a FAILED marker file
// is left in the run directory and the exit code is nonzero.
RunOutcome run_experiment(const ExperimentConfig& config, const CliOverrides& overrides);

// CSV numbers are emitted with 17 significant digits so that every value
// round-trips through parse at full 64-bit precision.
std::string format_full(double v);

}  // namespace kdvb
