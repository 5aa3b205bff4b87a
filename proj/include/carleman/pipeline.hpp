#pragma once

#include "carleman/errors.hpp"
#include "carleman/verification.hpp"

#include <memory>
#include <optional>
#include <string>

namespace carleman {

/**
 * One configuration drives every subcommand. File format is INI-like:
 * [family], [schedule], [grid], [verify] sections with key = value lines,
 * '#' or ';' comments. CLI flags override single values after parsing.
 */
struct RunConfig {
    FamilySpec family;

    // [schedule]
    double rule_target = 0.5;
    double geometric_target = 0.5;
    int orders = 4; // derivative budget I_max, capped at 6
    double e_cap_fraction = 0.25;
    int x_min_count = 8;
    double bell_sharpness = 1.0;
    int quadrature_nodes = 256;

    // [grid]
    double grid_extent = 12.0;
    double grid_step = 0.05;

    // [verify]
    int representation_samples = 5;
    double representation_tolerance = 1e-2;
    double margin_fraction = 0.1;
    int schwarz_samples = 200;

    std::uint64_t seed = 1;
    std::string out_dir = "out";

    void validate() const;
    std::vector<double> nested_extents() const; // extent/2, 2*extent/3, extent
};

RunConfig parse_config_file(const std::string& path);

struct AnalysisResult {
    OperatorFamily family;
    WitnessSequence witness;
    DecayProfile profile;
    ESelection selection;
};

AnalysisResult run_analyze(const RunConfig& cfg);

struct ConstructResult {
    AnalysisResult analysis;
    std::unique_ptr<MotherWavelet> mother;
    std::unique_ptr<Enumeration> enumeration;
    std::optional<BasisPartition> partition;
    FrameSet frames;
    SplitOperators split;
    DLedger dledger;
    XSelection xsel;
    int x_count_before_trim = 0;
    UnitaryPairing pairing;
    std::vector<SchmidtData> schmidt;         // per r
    std::vector<Eigen::MatrixXcd> quarter;    // A_r
    std::vector<SchwarzReport> schwarz;       // per r
    std::vector<NuclearityReport> nuclearity; // per r
    std::vector<AssembledKernel> kernels;     // per r
    SummabilityChains chains;
};

ConstructResult run_construct(const RunConfig& cfg);

VerificationReport run_verification(const ConstructResult& state, const RunConfig& cfg);

// Writers; every path lands under cfg.out_dir.
void write_analyze_outputs(const AnalysisResult& analysis, const RunConfig& cfg);
void write_construct_outputs(const ConstructResult& state, const RunConfig& cfg);
void write_verify_outputs(const VerificationReport& report, const RunConfig& cfg);
void write_wavelet_outputs(const RunConfig& cfg);

} // namespace carleman
