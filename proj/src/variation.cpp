#include "cnfet/variation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cnfet/errors.hpp"
#include "text_util.hpp"

namespace cnfet {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::uint32_t round_count(double x) {
  if (!(x > 0.0)) return 0;
  return static_cast<std::uint32_t>(std::lround(x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(Binomial(n, q) >= k) for k = 0..n+1.
std::vector<double> binomial_tail(std::uint32_t n, double q) {
  std::vector<double> pmf(n + 1, 0.0);
  for (std::uint32_t k = 0; k <= n; ++k) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double a = k == 0 ? 0.0 : k * std::log(q);
    const double b = (n - k) == 0 ? 0.0 : (n - k) * std::log1p(-q);
    pmf[k] = (q == 0.0) ? (k == 0 ? 1.0 : 0.0)
             : (q == 1.0) ? (k == n ? 1.0 : 0.0)
                          : std::exp(log_choose + a + b);
  }
  std::vector<double> tail(n + 2, 0.0);
  for (std::uint32_t k = n + 1; k-- > 0;) tail[k] = tail[k + 1] + pmf[k];
  return tail;
}

}  // namespace

void CntParams::validate() const {
  if (!(mu > 0.0)) throw ConfigError("cnt.mu must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("cnt.sigma must be non-negative");
  if (!is_probability(p_metallic) || !is_probability(p_remove_metallic) ||
      !is_probability(p_remove_semiconducting) || !is_probability(p_align)) {
    throw ConfigError("cnt probabilities must lie in [0, 1]");
  }
}

std::uint32_t sample_cnfet_count(const CntParams& params, Rng& rng) {
  if (params.sigma == 0.0) return round_count(params.mu);
  std::normal_distribution<double> normal(params.mu, params.sigma);
  return round_count(normal(rng));
}

std::uint32_t effective_conducting_count(std::uint32_t raw_count, const CntParams& params,
                                         Rng& rng) {
  std::uint32_t alive = 0;
  for (std::uint32_t i = 0; i < raw_count; ++i) {
    const bool metallic = uniform01(rng) < params.p_metallic;
    const double p_remove = metallic ? params.p_remove_metallic : params.p_remove_semiconducting;
    if (uniform01(rng) >= p_remove) ++alive;
  }
  return alive;
}

std::vector<GroupStrength> sample_group_strengths(const CntParams& params,
                                                  std::uint32_t num_groups,
                                                  std::uint32_t stages_per_group, Rng& rng) {
  if (num_groups == 0) throw ConfigError("num_groups must be at least 1");
  if (stages_per_group == 0) throw ConfigError("stages_per_group must be at least 1");
  params.validate();

  std::vector<GroupStrength> out;
  out.reserve(num_groups);
  for (std::uint32_t g = 0; g < num_groups; ++g) {
    const std::uint32_t raw = sample_cnfet_count(params, rng);
    std::uint32_t weakest = raw;
    for (std::uint32_t s = 0; s < stages_per_group; ++s) {
      weakest = std::min(weakest, effective_conducting_count(raw, params, rng));
    }
    out.push_back({g, static_cast<double>(weakest), weakest == 0});
  }
  return out;
}

std::vector<GroupStrength> sample_group_strengths(const CntParams& params,
                                                  std::uint32_t num_groups,
                                                  std::uint32_t stages_per_group) {
  Rng rng(params.seed);
  return sample_group_strengths(params, num_groups, stages_per_group, rng);
}

std::vector<double> group_strength_pmf(const CntParams& params, std::uint32_t stages_per_group) {
  params.validate();
  if (stages_per_group == 0) throw ConfigError("stages_per_group must be at least 1");

  // Raw count distribution.
  std::vector<double> raw;
  if (params.sigma == 0.0) {
    raw.assign(round_count(params.mu) + 1, 0.0);
    raw.back() = 1.0;
  } else {
    const auto upper = static_cast<std::uint32_t>(std::ceil(params.mu + 12.0 * params.sigma)) + 1;
    raw.assign(upper + 1, 0.0);
    for (std::uint32_t n = 0; n <= upper; ++n) {
      const double hi = normal_cdf((n + 0.5 - params.mu) / params.sigma);
      const double lo = n == 0 ? 0.0 : normal_cdf((n - 0.5 - params.mu) / params.sigma);
      raw[n] = hi - lo;
    }
  }

  const double q = params.survival_probability();
  std::vector<double> pmf(raw.size(), 0.0);
  for (std::uint32_t n = 0; n < raw.size(); ++n) {
    if (raw[n] == 0.0) continue;
    const auto tail = binomial_tail(n, q);
    for (std::uint32_t k = 0; k <= n; ++k) {
      // P(min over stages == k) = P(all >= k) - P(all >= k+1).
      const double p = std::pow(tail[k], stages_per_group) - std::pow(tail[k + 1], stages_per_group);
      pmf[k] += raw[n] * p;
    }
  }
  return pmf;
}

void write_strengths(std::ostream& out, std::span<const GroupStrength> strengths) {
  out << "# group_index,effective_count,failed\n";
  for (const auto& s : strengths) {
    fmt::print(out, "{},{},{}\n", s.group_index, s.effective_count, s.failed ? 1 : 0);
  }
}

std::vector<GroupStrength> read_strengths(std::istream& in) {
  std::vector<GroupStrength> out;
  text::for_each_data_line(in, [&](std::size_t line_no, std::string_view line) {
    const auto fields = text::split(line, ',');
    if (fields.size() != 3) throw ParseError(line_no, "expected group_index,effective_count,failed");
    GroupStrength s;
    s.group_index = text::require_uint<std::uint32_t>(fields[0], line_no, "group index");
    s.effective_count = text::require_double(fields[1], line_no, "effective count");
    const auto failed = text::require_uint<unsigned>(fields[2], line_no, "failed flag");
    if (failed > 1) throw ParseError(line_no, "failed flag must be 0 or 1");
    s.failed = failed == 1;
    if (s.effective_count < 0.0 || s.failed != (s.effective_count == 0.0)) {
      throw ParseError(line_no, "failed flag inconsistent with effective count");
    }
    out.push_back(s);
  });
  return out;
}

}  // namespace cnfet
