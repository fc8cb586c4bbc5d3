#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gchain/kernels.hpp"
#include "gchain/sim.hpp"
#include "gchain/structure.hpp"

namespace gchain {

using json = nlohmann::json;

// {"kernel": <tag>, "params": {...}}; real parameters may be decimal strings.
KernelPtr kernel_from_json(const json& doc);
KernelPtr kernel_from_file(const std::string& path);

// Renewal rule from the same schema fragment, for classify-renewal runs.
kernels::QRule qrule_from_json(const json& q_doc, const json* q_inf);

// "tail^inf transient" with packed digits or comma-separated labels.
PastSpec parse_past(const std::string& text, const Alphabet& alph);
Word parse_word(const std::string& text, const Alphabet& alph);

json to_json(const BoolMatrix& m, int K, const Alphabet& alph);
json to_json(const EriReport& r, const Alphabet& alph);
json to_json(const AssumptionB& b, const Alphabet& alph);
json to_json(const AssumptionC& c, const Alphabet& alph);
json to_json(const DkSeries& s);
json to_json(const HittingReport& r);
json to_json(const TvEstimate& t);
json to_json(const kernels::RenewalClassification& c);
json to_json(const SimConfig& c);

std::string dk_series_csv(const DkSeries& s);
std::string hitting_csv(const HittingReport& r);

double parse_real(const json& v);  // number or decimal string

}  // namespace gchain
