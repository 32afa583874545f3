#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "eukit/report.hpp"
#include "eukit/types.hpp"

namespace eukit {

// nlohmann::ordered_json keeps insertion order, so serialized records are
// byte-stable across runs and thread counts.
using OrderedJson = nlohmann::ordered_json;

// Decimal string with 17 significant digits: enough to round-trip a double.
std::string format_double_17(double x);

OrderedJson vector_to_json_17(const Vector& v);

OrderedJson witness_to_json(const Witness& w);
OrderedJson report_to_json(const PropertyReport& r);

// One JSONL line (no trailing newline).
std::string to_jsonl_line(const OrderedJson& record);

}  // namespace eukit
