#pragma once

#include <cstdint>
#include <vector>

#include "commimmune/graph.hpp"
#include "commimmune/random.hpp"

namespace commimmune {

/// Discrete power law p(k) ~ k^-exponent on the integers up to `upper`,
/// with a possibly fractional lower cutoff: for lower = m + f (0 <= f < 1)
/// the integer m keeps weight (1 - f) of its power-law mass. The mean is
/// then continuous and increasing in `lower`, which lets it be tuned by
/// bisection.
class PowerLawSampler {
public:
    PowerLawSampler(double exponent, double lower, std::size_t upper);

    double mean() const noexcept { return mean_; }
    std::size_t first() const noexcept { return first_; }
    std::size_t sample(Rng& rng) const;

private:
    std::size_t first_;
    std::vector<double> cumulative_;
    double mean_ = 0.0;
};

/// i.i.d. samples from p(x) ~ x^-exponent on the integers [min, max].
std::vector<std::size_t> sample_truncated_power_law(double exponent, std::size_t min, std::size_t max,
                                                    std::size_t count, Rng& rng);

/// Fractional lower cutoff whose PowerLawSampler mean equals `target_mean`.
/// Throws FeasibilityError when the target is out of reach.
double power_law_cutoff_for_mean(double exponent, std::size_t upper, double target_mean);

struct LfrParams {
    std::size_t n = 15000;
    double avg_degree = 7.0;
    std::size_t max_degree = 122;
    double degree_exponent = 3.0;
    double community_exponent = 2.5;
    double mu = 0.1;
    std::size_t min_community = 100;
    std::size_t max_community = 500;
    std::uint64_t seed = 1;

    /// Domain checks; throws std::invalid_argument.
    void validate() const;
};

struct LfrGraph {
    Graph graph;
    Partition communities;
    /// Edge-fraction mixing of the result against its own communities.
    double mixing = 0.0;
    std::size_t attempts = 0;
};

/// Power-law degrees and community sizes with a target mixing parameter.
/// Retries up to 10 times until the realized mixing is within 0.05 of
/// params.mu; throws FeasibilityError otherwise or when the parameters
/// cannot be realized at all.
LfrGraph generate(const LfrParams& params);

}  // namespace commimmune
