#include "eukit/jsonl.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace eukit {

std::string format_double_17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

OrderedJson vector_to_json_17(const Vector& v) {
  OrderedJson arr = OrderedJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(format_double_17(v[i]));
  return arr;
}

OrderedJson witness_to_json(const Witness& w) {
  OrderedJson j;
  j["point"] = vector_to_json_17(w.point);
  if (w.direction)
    j["direction"] = vector_to_json_17(*w.direction);
  else
    j["direction"] = nullptr;
  j["residual"] = w.residual;
  return j;
}

OrderedJson report_to_json(const PropertyReport& r) {
  OrderedJson j;
  j["property"] = to_string(r.property);
  j["target"] = to_string(r.target);
  j["verdict"] = to_string(r.verdict);
  OrderedJson witnesses = OrderedJson::array();
  for (const auto& w : r.witnesses) witnesses.push_back(witness_to_json(w));
  j["witnesses"] = witnesses;
  j["samples_used"] = r.samples_used;
  j["seed"] = r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string to_jsonl_line(const OrderedJson& record) { return record.dump(); }

}  // namespace eukit
