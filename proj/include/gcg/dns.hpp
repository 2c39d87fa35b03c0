#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcg/types.hpp"

namespace gcg {

struct DnsRecord {
  double timestamp = 0.0;  // seconds
  std::string qname;
};

// Aggregated per (20-second window, second-level domain) group.
struct DnsWindowFeatures {
  std::int64_t window_id = 0;
  std::string sld;
  double total_length = 0.0;   // characters, dots included
  double total_entropy = 0.0;  // bits
  double special_count = 0.0;
};

// Character-frequency Shannon entropy in bits; empty string -> 0.
double shannon_entropy(const std::string& s);

struct DnsFeaturizeResult {
  std::vector<DnsWindowFeatures> rows;
  std::int64_t skipped_records = 0;  // malformed qnames (no dot)
};

// Groups records by (floor(timestamp/20), last two qname labels) and sums
// query length, per-query entropy, and special-symbol counts. Special
// symbols are characters outside [a-zA-Z0-9.-]; underscore counts as
// special. Order-independent: permuting records yields the same table.
DnsFeaturizeResult dns_featurize(const std::vector<DnsRecord>& records);

// Feature matrix (total_length, total_entropy, special_count), one row per
// window, rows ordered by (window_id, sld).
Sample dns_features_matrix(const std::vector<DnsWindowFeatures>& rows);

// Synthetic stand-in for a real query log's window features: log-normal
// total lengths, entropy proportional to length with noise, small Poisson
// special counts. With attacker_free == false a small fraction of windows
// mimics exfiltration bursts (long, high-entropy, special-heavy).
std::vector<DnsWindowFeatures> gen_dns_like(std::uint64_t seed, int num_benign_windows,
                                            bool attacker_free = true);

void save_dns_features_csv(const std::string& path, const std::vector<DnsWindowFeatures>& rows,
                           const std::string& config_hash = "");
std::vector<DnsRecord> load_dns_records_csv(const std::string& path);

}  // namespace gcg
