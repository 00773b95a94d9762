#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mfts {

// Prices on a regular base-period grid. Slots with no observation carry the
// last seen price forward and are marked in gap_mask.
struct PriceSeries {
  std::vector<int64_t> timestamps;  // epoch seconds, step == base_period
  std::vector<double> prices;       // all > 0
  std::vector<uint8_t> gap_mask;    // 1 = forward-filled slot
  int64_t base_period = 0;          // seconds

  size_t size() const { return prices.size(); }
  size_t filled_count() const;
};

// Log-returns sampled every sampling_period seconds. values[i] belongs to the
// timestamp start_time + i * sampling_period (the end of its interval).
struct ReturnSeries {
  std::vector<double> values;
  int64_t sampling_period = 0;
  double scale_factor = 1.0;
  bool normalized = false;
  int64_t start_time = 0;

  size_t size() const { return values.size(); }
  int64_t timestamp(size_t i) const {
    return start_time + static_cast<int64_t>(i) * sampling_period;
  }
};

struct PriceRecord {
  int64_t timestamp = 0;
  double price = 0.0;
};

// Parse a two-column (timestamp, price) file. Comma, tab or space delimited;
// '#' comments and an optional header row are skipped. Rejects non-positive
// prices (naming the offending line) and files without data rows.
std::vector<PriceRecord> read_price_records(const std::filesystem::path& file);

// Sort and deduplicate records, snap them onto the base-period grid anchored
// at the earliest timestamp, and forward-fill missing slots. When several
// observations land in one slot the latest wins; records that share a
// timestamp but disagree on price are rejected.
PriceSeries regularize_prices(std::vector<PriceRecord> records, int64_t base_period);

PriceSeries load_prices(const std::filesystem::path& file, int64_t base_period);

// Log-returns at sampling_period = k * base_period. Default mode subsamples at
// the close of each k-slot block and differences consecutive closes
// (non-overlapping strides); overlapping mode differences at lag k on the full
// grid instead.
ReturnSeries compute_returns(const PriceSeries& p, int64_t sampling_period, double scale,
                             bool normalize, bool overlapping = false);

// Extract [offset, offset + count) as a standalone series.
ReturnSeries slice_returns(const ReturnSeries& r, size_t offset, size_t count);

void write_return_series(const std::filesystem::path& file, const ReturnSeries& r,
                         std::span<const std::string> header_comments = {});

}  // namespace mfts
