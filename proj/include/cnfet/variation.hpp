#pragma once

// Monte Carlo model of CNT count and effective drive strength per aligned
// CNFET group.
//
// CNFETs sharing a CNT growth track see the same raw CNT count (full
// correlation along the growth direction); distinct tracks are independent.
// Every CNT is then classified metallic or semiconducting and may be removed
// by processing. A group's strength is the weakest of its critical-path
// stages.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cnfet/random.hpp"

namespace cnfet {

struct CntParams {
  double mu = 9.0;
  double sigma = 2.1;
  double p_metallic = 0.05;
  double p_remove_metallic = 0.999;
  double p_remove_semiconducting = 0.05;
  // Stored for completeness; not consumed by the sampler.
  double p_align = 0.05;
  std::uint64_t seed = 1;

  void validate() const;

  // Probability that a single CNT conducts after processing.
  double survival_probability() const {
    return p_metallic * (1.0 - p_remove_metallic) +
           (1.0 - p_metallic) * (1.0 - p_remove_semiconducting);
  }
};

struct GroupStrength {
  std::uint32_t group_index = 0;
  double effective_count = 0.0;
  bool failed = false;

  friend bool operator==(const GroupStrength&, const GroupStrength&) = default;
};

inline constexpr std::uint32_t kDefaultStagesPerGroup = 8;

// Normal(mu, sigma) rounded to nearest and clamped at zero.
std::uint32_t sample_cnfet_count(const CntParams& params, Rng& rng);

// Surviving conducting CNTs out of raw_count. Consumes exactly two uniforms
// per CNT (class, survival) regardless of parameter values, so runs that
// differ only in probabilities stay on the same random stream.
std::uint32_t effective_conducting_count(std::uint32_t raw_count, const CntParams& params,
                                         Rng& rng);

// One shared raw count per group, independent thinning per stage, group
// strength = min over stages. Throws ConfigError for zero groups or stages.
std::vector<GroupStrength> sample_group_strengths(const CntParams& params,
                                                  std::uint32_t num_groups,
                                                  std::uint32_t stages_per_group, Rng& rng);

// Convenience overload seeding from params.seed.
std::vector<GroupStrength> sample_group_strengths(const CntParams& params,
                                                  std::uint32_t num_groups,
                                                  std::uint32_t stages_per_group);

// Exact probability mass of a group's effective count (index = count),
// marginalising the discretised normal raw count and the binomial thinning
// of each stage. Used for calibration and analytic summaries.
std::vector<double> group_strength_pmf(const CntParams& params, std::uint32_t stages_per_group);

// `group_index,effective_count,failed` lines.
void write_strengths(std::ostream& out, std::span<const GroupStrength> strengths);
std::vector<GroupStrength> read_strengths(std::istream& in);

}  // namespace cnfet
