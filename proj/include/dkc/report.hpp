#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dkc/quantum_setup.hpp"

namespace dkc {

struct SpectrumRecord {
    ProblemParams inputs;
    int n = 1;
    double E_over_m = 0.0;
    double a = 0.0;
    double s = 0.0;
    double kappa = 0.0;
    bool valid = false;          ///< energy formula produced a level
    bool scale_resolved = false; ///< a > 0 is representable
    std::string error;           ///< diagnostic when !valid
};

struct VerificationReport {
    std::string check;
    double residual_max = 0.0;
    double residual_rms = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::map<std::string, std::string> context;

    /// Category is the part of the check name before the first '.'.
    std::string category() const { return check.substr(0, check.find('.')); }
};

/// Builds a report whose verdict is residual_max <= tolerance (NaN fails).
inline VerificationReport make_report(std::string check, double residual_max, double residual_rms,
                                      double tolerance, std::map<std::string, std::string> context = {}) {
    VerificationReport r;
    r.check = std::move(check);
    r.residual_max = residual_max;
    r.residual_rms = residual_rms;
    r.tolerance = tolerance;
    r.passed = residual_max <= tolerance;
    r.context = std::move(context);
    return r;
}

/// Pointwise residual statistics over a grid.
struct ResidualStats {
    double max = 0.0;
    double rms = 0.0;
    double worst_r = 0.0;
    int points = 0;

    void add(double residual, double r) {
        if (worse(residual, max)) {
            max = residual;
            worst_r = r;
        }
        sum_sq_ += residual * residual;
        ++points;
        rms = std::sqrt(sum_sq_ / points);
    }

    void merge(const ResidualStats& other) {
        if (worse(other.max, max)) {
            max = other.max;
            worst_r = other.worst_r;
        }
        sum_sq_ += other.sum_sq_;
        points += other.points;
        rms = points > 0 ? std::sqrt(sum_sq_ / points) : 0.0;
    }

private:
    // NaN is the worst possible residual and sticks once seen.
    static bool worse(double candidate, double current) {
        if (std::isnan(current)) return false;
        return std::isnan(candidate) || candidate > current;
    }

    double sum_sq_ = 0.0;
};

struct NormalizationComparison {
    double quadrature_constant = 0.0; ///< |A| fixed by quadrature
    double closed_form = 0.0;         ///< the gamma-function closed form, evaluated as written
    double ratio = 0.0;               ///< closed_form / quadrature_constant
    bool flagged = false;             ///< |ratio − 1| > 1e-6
};

inline NormalizationComparison compare_normalization(double quadrature_constant, double closed_form) {
    NormalizationComparison c;
    c.quadrature_constant = std::abs(quadrature_constant);
    c.closed_form = closed_form;
    c.ratio = closed_form / c.quadrature_constant;
    c.flagged = !(std::abs(c.ratio - 1.0) <= 1e-6);
    return c;
}

struct VerificationSummary {
    int total = 0;
    int passed = 0;
    int failed = 0;
    std::map<std::string, double> worst_residual; ///< per category
};

inline VerificationSummary summarize(const std::vector<VerificationReport>& reports) {
    VerificationSummary s;
    for (const auto& r : reports) {
        ++s.total;
        (r.passed ? s.passed : s.failed) += 1;
        auto [it, inserted] = s.worst_residual.try_emplace(r.category(), r.residual_max);
        if (!inserted) it->second = std::max(it->second, r.residual_max);
    }
    return s;
}

} // namespace dkc
