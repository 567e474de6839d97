#include "mhfseg/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "mhfseg/error.hpp"

namespace mhfseg {

MatchReport match_boundaries(std::span<const double> reference, std::span<const double> hypothesis,
                             double tolerance_frames) {
  struct Pair {
    double offset;
    double lo;  // min/max of the two positions: the ordering is symmetric in ref and hyp
    double hi;
    std::size_t ref;
    std::size_t hyp;
  };
  std::vector<Pair> pairs;
  for (std::size_t r = 0; r < reference.size(); ++r) {
    for (std::size_t h = 0; h < hypothesis.size(); ++h) {
      const double off = std::abs(reference[r] - hypothesis[h]);
      if (off <= tolerance_frames) {
        pairs.push_back({off, std::min(reference[r], hypothesis[h]), std::max(reference[r], hypothesis[h]), r, h});
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.offset, a.lo, a.hi) < std::tie(b.offset, b.lo, b.hi);
  });

  std::vector<bool> ref_used(reference.size(), false);
  std::vector<bool> hyp_used(hypothesis.size(), false);
  MatchReport rep;
  double offset_sum = 0.0;
  for (const auto& p : pairs) {
    if (ref_used[p.ref] || hyp_used[p.hyp]) continue;
    ref_used[p.ref] = hyp_used[p.hyp] = true;
    ++rep.hits;
    offset_sum += p.offset;
  }
  rep.misses = reference.size() - rep.hits;
  rep.false_alarms = hypothesis.size() - rep.hits;
  rep.precision = hypothesis.empty() ? 1.0 : static_cast<double>(rep.hits) / static_cast<double>(hypothesis.size());
  rep.recall = reference.empty() ? 1.0 : static_cast<double>(rep.hits) / static_cast<double>(reference.size());
  const double pr = rep.precision + rep.recall;
  rep.f1 = pr > 0.0 ? 2.0 * rep.precision * rep.recall / pr : 0.0;
  rep.mean_absolute_offset_frames = rep.hits > 0 ? offset_sum / static_cast<double>(rep.hits) : 0.0;
  return rep;
}

MatchReport match_boundaries(std::span<const std::size_t> reference, std::span<const std::size_t> hypothesis,
                             std::size_t tolerance_frames) {
  const std::vector<double> ref(reference.begin(), reference.end());
  const std::vector<double> hyp(hypothesis.begin(), hypothesis.end());
  return match_boundaries(ref, hyp, static_cast<double>(tolerance_frames));
}

std::vector<PeakWidth> peak_widths(std::span<const double> values, double rel_height) {
  if (!(rel_height > 0.0 && rel_height < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "rel_height must lie in (0, 1)");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<PeakWidth> out;
  const std::size_t n = values.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    const double left = i == 0 ? kNegInf : values[i - 1];
    const double right = j + 1 < n ? values[j + 1] : kNegInf;
    if (values[i] > 0.0 && values[i] > left && values[i] > right) {
      const double level = rel_height * values[i];
      std::size_t lo = i;
      std::size_t hi = i;
      while (lo > 0 && values[lo - 1] >= level) --lo;
      while (hi + 1 < n && values[hi + 1] >= level) ++hi;
      out.push_back({i, hi - lo + 1});
    }
    i = j + 1;
  }
  return out;
}

double mean_peak_width(std::span<const PeakWidth> widths) noexcept {
  if (widths.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& w : widths) sum += static_cast<double>(w.width);
  return sum / static_cast<double>(widths.size());
}

}  // namespace mhfseg
