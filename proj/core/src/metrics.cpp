#include "sshmt/metrics.hpp"

#include <algorithm>
#include <vector>

namespace sshmt {

void ContingencyTable::add(std::uint32_t s, std::uint32_t t, std::uint64_t count) {
  if (count == 0) return;
  joint_[{s, t}] += count;
  rows_[s] += count;
  cols_[t] += count;
  total_ += count;
}

RandScores ContingencyTable::scores() const {
  // Work on raw counts: the 1/N² normalization cancels in every ratio.
  auto sum_sq = [](const auto& m) {
    std::uint64_t acc = 0;
    for (const auto& [key, n] : m) acc += n * n;
    return acc;
  };
  const std::uint64_t a = sum_sq(joint_);
  const std::uint64_t b = sum_sq(rows_);
  const std::uint64_t c = sum_sq(cols_);
  if (b == 0 || c == 0) {
    const bool both_empty = b == 0 && c == 0;
    return {both_empty ? 0.0 : 1.0, both_empty ? 1.0 : 0.0, both_empty ? 1.0 : 0.0};
  }
  RandScores r;
  r.precision = static_cast<double>(static_cast<long double>(a) / b);
  r.recall = static_cast<double>(static_cast<long double>(a) / c);
  // 1 - 2PR/(P+R) == (Σs² + Σt² - 2Σp²) / (Σs² + Σt²)
  r.error = static_cast<double>(static_cast<long double>(b + c - 2 * a) / static_cast<long double>(b + c));
  return r;
}

RandScores adapted_rand(const LabelMap& seg, const LabelMap& gt, bool ignore_zero_gt) {
  require_same_dims(seg, gt, "adapted_rand_error");
  ContingencyTable table;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    if (ignore_zero_gt && gt[i] == 0) continue;
    table.add(seg[i], gt[i]);
  }
  return table.scores();
}

double jaccard(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::vector<std::size_t> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::vector<std::size_t> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  const std::size_t uni = sa.size() + sb.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(uni);
}

}  // namespace sshmt
