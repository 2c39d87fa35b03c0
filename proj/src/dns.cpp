#include "gcg/dns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gcg/common.hpp"
#include "gcg/rng.hpp"

namespace gcg {

double shannon_entropy(const std::string& s) {
  if (s.empty()) return 0.0;
  std::array<int, 256> counts{};
  for (unsigned char ch : s) ++counts[ch];
  const double n = static_cast<double>(s.size());
  double bits = 0.0;
  for (int c : counts) {
    if (c == 0) continue;
    double p = c / n;
    bits -= p * std::log2(p);
  }
  return bits;
}

namespace {

bool is_special_char(char c) {
  // hostname-legal characters are not special; underscore is
  bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (c >= '0' && c <= '9') || c == '.' || c == '-';
  return !plain;
}

// last two dot-separated labels, or empty for malformed names
std::string second_level_domain(const std::string& qname) {
  std::string name = qname;
  if (!name.empty() && name.back() == '.') name.pop_back();
  auto last = name.rfind('.');
  if (last == std::string::npos || last == 0 || last + 1 == name.size()) return {};
  auto second = name.rfind('.', last - 1);
  return second == std::string::npos ? name : name.substr(second + 1);
}

}  // namespace

DnsFeaturizeResult dns_featurize(const std::vector<DnsRecord>& records) {
  DnsFeaturizeResult out;
  std::map<std::pair<std::int64_t, std::string>, DnsWindowFeatures> groups;
  for (const auto& rec : records) {
    std::string sld = second_level_domain(rec.qname);
    if (sld.empty()) {
      ++out.skipped_records;
      continue;
    }
    auto window = static_cast<std::int64_t>(std::floor(rec.timestamp / 20.0));
    auto& row = groups[{window, sld}];
    row.window_id = window;
    row.sld = sld;
    row.total_length += static_cast<double>(rec.qname.size());
    row.total_entropy += shannon_entropy(rec.qname);
    for (char c : rec.qname) {
      if (is_special_char(c)) row.special_count += 1.0;
    }
  }
  out.rows.reserve(groups.size());
  for (auto& [key, row] : groups) out.rows.push_back(std::move(row));
  return out;
}

Sample dns_features_matrix(const std::vector<DnsWindowFeatures>& rows) {
  Sample out(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = rows[i].total_length;
    out(static_cast<Eigen::Index>(i), 1) = rows[i].total_entropy;
    out(static_cast<Eigen::Index>(i), 2) = rows[i].special_count;
  }
  return out;
}

std::vector<DnsWindowFeatures> gen_dns_like(std::uint64_t seed, int num_benign_windows,
                                            bool attacker_free) {
  if (num_benign_windows < 0) throw InvalidInput("window count must be non-negative");
  Rng rng(seed);
  std::vector<DnsWindowFeatures> rows;
  rows.reserve(static_cast<std::size_t>(num_benign_windows));
  for (int i = 0; i < num_benign_windows; ++i) {
    DnsWindowFeatures row;
    row.window_id = i;
    row.sld = "sld" + std::to_string(i % 97) + ".example";
    // window length totals follow a log-normal; entropy tracks length at
    // roughly 0.14 bits per character with multiplicative noise
    row.total_length = rng.lognormal(std::log(60.0), 0.5);
    double noise = 1.0 + 0.12 * rng.normal();
    row.total_entropy = std::max(0.0, 0.14 * row.total_length * noise);
    row.special_count = static_cast<double>(rng.poisson(0.3));
    rows.push_back(std::move(row));
  }
  if (!attacker_free) {
    // sprinkle exfiltration-like bursts: long, entropy-dense, special-heavy
    int extra = std::max(1, num_benign_windows / 100);
    for (int i = 0; i < extra; ++i) {
      DnsWindowFeatures row;
      row.window_id = num_benign_windows + i;
      row.sld = "exfil" + std::to_string(i) + ".example";
      row.total_length = 300.0 + rng.lognormal(std::log(120.0), 0.4);
      row.total_entropy = std::max(0.0, 0.35 * row.total_length * (1.0 + 0.05 * rng.normal()));
      row.special_count = static_cast<double>(rng.poisson(6.0));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void save_dns_features_csv(const std::string& path, const std::vector<DnsWindowFeatures>& rows,
                           const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << "\n";
  out << "window_id,sld,total_length,total_entropy,special_count\n";
  for (const auto& row : rows) {
    out << row.window_id << ',' << row.sld << ',' << format_double(row.total_length) << ','
        << format_double(row.total_entropy) << ',' << format_double(row.special_count) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

std::vector<DnsRecord> load_dns_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<DnsRecord> records;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("bad DNS record line: " + line);
    DnsRecord rec;
    try {
      rec.timestamp = std::stod(line.substr(0, comma));
    } catch (const std::exception&) {
      throw IoError("bad timestamp in: " + line);
    }
    rec.qname = line.substr(comma + 1);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace gcg
