#include "mfts/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "mfts/table.hpp"

namespace mfts {

size_t PriceSeries::filled_count() const {
  size_t n = 0;
  for (uint8_t g : gap_mask) n += g;
  return n;
}

namespace {

bool parse_field(const std::string& tok, double* out) {
  char* end = nullptr;
  *out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size() && std::isfinite(*out);
}

void split_line(const std::string& line, std::vector<std::string>* fields) {
  fields->clear();
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == '\t' || c == ' ') {
      if (!cur.empty()) fields->push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) fields->push_back(std::move(cur));
}

}  // namespace

std::vector<PriceRecord> read_price_records(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open price file: " + file.string());
  std::vector<PriceRecord> records;
  std::string line;
  std::vector<std::string> fields;
  long line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    split_line(line, &fields);
    if (fields.empty()) continue;
    double t_raw, price;
    const bool numeric = fields.size() >= 2 && parse_field(fields[0], &t_raw) &&
                         parse_field(fields[1], &price);
    if (!numeric) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      throw std::runtime_error("line " + std::to_string(line_no) + ": cannot parse record");
    }
    first_content = false;
    if (std::abs(t_raw - std::round(t_raw)) > 1e-6)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": timestamp is not an integer epoch second");
    if (!(price > 0.0))
      throw std::runtime_error("line " + std::to_string(line_no) + ": non-positive price");
    records.push_back({static_cast<int64_t>(std::llround(t_raw)), price});
  }
  if (records.empty()) throw std::runtime_error("no price records in " + file.string());
  return records;
}

PriceSeries regularize_prices(std::vector<PriceRecord> records, int64_t base_period) {
  if (records.empty()) throw std::invalid_argument("regularize_prices: empty input");
  if (base_period < 1) throw std::invalid_argument("regularize_prices: base period must be >= 1s");

  std::stable_sort(records.begin(), records.end(),
                   [](const PriceRecord& a, const PriceRecord& b) { return a.timestamp < b.timestamp; });
  records.erase(std::unique(records.begin(), records.end(),
                            [](const PriceRecord& a, const PriceRecord& b) {
                              return a.timestamp == b.timestamp && a.price == b.price;
                            }),
                records.end());
  for (size_t i = 1; i < records.size(); ++i) {
    if (records[i].timestamp == records[i - 1].timestamp)
      throw std::invalid_argument("regularize_prices: timestamp " +
                                  std::to_string(records[i].timestamp) +
                                  " occurs twice with different prices");
  }

  const int64_t t0 = records.front().timestamp;
  const size_t n_slots =
      static_cast<size_t>((records.back().timestamp - t0) / base_period) + 1;

  PriceSeries out;
  out.base_period = base_period;
  out.timestamps.resize(n_slots);
  out.prices.assign(n_slots, 0.0);
  out.gap_mask.assign(n_slots, 1);
  for (const PriceRecord& rec : records) {
    const size_t slot = static_cast<size_t>((rec.timestamp - t0) / base_period);
    out.prices[slot] = rec.price;  // latest observation in a slot wins
    out.gap_mask[slot] = 0;
  }
  double last = records.front().price;
  for (size_t i = 0; i < n_slots; ++i) {
    out.timestamps[i] = t0 + static_cast<int64_t>(i) * base_period;
    if (out.gap_mask[i])
      out.prices[i] = last;
    else
      last = out.prices[i];
  }
  return out;
}

PriceSeries load_prices(const std::filesystem::path& file, int64_t base_period) {
  return regularize_prices(read_price_records(file), base_period);
}

ReturnSeries compute_returns(const PriceSeries& p, int64_t sampling_period, double scale,
                             bool normalize, bool overlapping) {
  if (p.base_period < 1) throw std::invalid_argument("compute_returns: invalid base period");
  if (sampling_period < p.base_period || sampling_period % p.base_period != 0)
    throw std::invalid_argument("compute_returns: sampling period " +
                                std::to_string(sampling_period) +
                                "s is not a positive multiple of the base period");
  const size_t k = static_cast<size_t>(sampling_period / p.base_period);
  const size_t n = p.size();

  ReturnSeries r;
  r.sampling_period = sampling_period;
  r.scale_factor = scale;

  if (!overlapping) {
    const size_t m = n / k;  // complete blocks; subsample at block closes
    if (m < 2) throw std::invalid_argument("compute_returns: fewer than 2 usable points");
    r.values.resize(m - 1);
    for (size_t j = 0; j + 1 < m; ++j) {
      const size_t i0 = (j + 1) * k - 1;
      const size_t i1 = (j + 2) * k - 1;
      r.values[j] = scale * (std::log(p.prices[i1]) - std::log(p.prices[i0]));
    }
    r.start_time = p.timestamps[2 * k - 1];
  } else {
    if (n < k + 2) throw std::invalid_argument("compute_returns: fewer than 2 usable points");
    r.values.resize(n - k);
    for (size_t i = 0; i + k < n; ++i)
      r.values[i] = scale * (std::log(p.prices[i + k]) - std::log(p.prices[i]));
    r.start_time = p.timestamps[k];
  }

  if (normalize) {
    const size_t m = r.values.size();
    double mean = 0.0;
    for (double v : r.values) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : r.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(m);
    if (!(var > 0.0))
      throw std::invalid_argument("compute_returns: cannot normalize a zero-variance series");
    const double sd = std::sqrt(var);
    for (double& v : r.values) v = (v - mean) / sd;
    r.normalized = true;
  }
  return r;
}

ReturnSeries slice_returns(const ReturnSeries& r, size_t offset, size_t count) {
  if (offset + count > r.size()) throw std::invalid_argument("slice_returns: out of range");
  ReturnSeries out;
  out.values.assign(r.values.begin() + static_cast<ptrdiff_t>(offset),
                    r.values.begin() + static_cast<ptrdiff_t>(offset + count));
  out.sampling_period = r.sampling_period;
  out.scale_factor = r.scale_factor;
  out.normalized = r.normalized;
  out.start_time = r.timestamp(offset);
  return out;
}

void write_return_series(const std::filesystem::path& file, const ReturnSeries& r,
                         std::span<const std::string> header_comments) {
  TableWriter w(file);
  for (const std::string& c : header_comments) w.comment(c);
  w.comment("sampling_period_s = " + std::to_string(r.sampling_period) +
            ", scale = " + format_double(r.scale_factor) +
            ", normalized = " + (r.normalized ? std::string("1") : std::string("0")));
  const std::string cols[] = {"timestamp", "value"};
  w.header(cols);
  for (size_t i = 0; i < r.size(); ++i) w.row_mixed(r.timestamp(i), {&r.values[i], 1});
}

}  // namespace mfts
