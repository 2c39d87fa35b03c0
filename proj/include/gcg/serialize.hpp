#pragma once

#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "gcg/classifier.hpp"

namespace gcg {

// Classifier documents: {"variant": ..., "dim": n, ...payload}. Floating
// scalars are stored as base-16 float strings so round trips are bit-exact.
ClassifierPtr classifier_from_json(const nlohmann::json& doc);
ClassifierPtr load_classifier(const std::string& path);
void save_classifier(const std::string& path, const Classifier& c);

std::unique_ptr<AnomalyScorer> scorer_from_json(const nlohmann::json& doc);

// Canonical (sorted-key, compact) dump hashed with FNV-1a; embedded in
// output file headers so reruns are comparable.
std::string config_hash(const nlohmann::json& config);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& doc);

}  // namespace gcg
