#pragma once

#include "carleman/decomposition.hpp"
#include "carleman/enumeration.hpp"
#include "carleman/kernel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace carleman {

enum class CheckStatus { Pass, Fail, Skip };

struct CheckEntry {
    std::string name;
    CheckStatus status = CheckStatus::Skip;
    double measured = 0.0;
    double tolerance = 0.0;
    double runtime_seconds = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckEntry> entries;

    void add(CheckEntry entry) { entries.push_back(std::move(entry)); }
    void sort_by_name();
    bool verdict() const; // pass iff no entry failed
    int failures() const;
};

// Quadrature Gram matrix of the first `count` enumerated children over a
// window sized from the measured wavelet decay; the workhorse behind the
// orthonormality checks.
Eigen::MatrixXcd wavelet_gram_matrix(const MotherWavelet& mother, const Enumeration& enumeration,
                                     int count);

/**
 * Representation fidelity: draws seeded random test functions supported by
 * the narrow paired wavelets, then compares grid quadrature of
 * Int K(s,t) f(t) dt against the coefficient-space image of T f on the whole
 * grid. Reports the worst relative L2 discrepancy.
 */
CheckEntry representation_check(const AssembledKernel& kernel, const SplitOperators& split,
                                int test_count, std::uint64_t seed, double tolerance = 1e-2);

// Finite-difference consistency between successive stored derivative fields
// (6th-order interior stencil) plus an adjacent-sample continuity proxy.
CheckEntry smoothness_check(const AssembledKernel& kernel, double tolerance = 1e-3);

/**
 * Vanishing at infinity: boundary-ring max against interior max for |K|,
 * every derivative field and the Carleman norm profile, plus monotone
 * decrease of the boundary max across nested sub-extents.
 */
std::vector<CheckEntry> vanishing_check(const AssembledKernel& kernel, double margin_fraction,
                                        const std::vector<double>& nested_extents);

struct StructuralInputs {
    const MotherWavelet* mother = nullptr;
    const Enumeration* enumeration = nullptr;
    const DecayProfile* profile = nullptr;
    const DLedger* dledger = nullptr;
    const SummabilityChains* chains = nullptr;
    const SplitOperators* split = nullptr;
    int gram_count = 32;
};

std::vector<CheckEntry> structural_suite(const StructuralInputs& inputs);

} // namespace carleman
