#include "trk/json_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "trk/errors.hpp"

namespace trk::io {

using algebra::Fp;
using algebra::PrimeField;
using algebra::SubspaceBasis;
using algebra::Tensor;

json tensor_to_json(const Tensor& t) {
  json j;
  j["p"] = t.field().p();
  j["axes"] = t.axes();
  json entries = json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Fp v = t.at_flat(i);
    if (v == 0) continue;
    json cell = json::array();
    for (int label : t.labels_of_flat(i)) cell.push_back(label);
    cell.push_back(v);
    entries.push_back(std::move(cell));
  }
  j["entries"] = std::move(entries);
  return j;
}

namespace {

// Nested dense arrays, innermost axis fastest.
void fill_dense(Tensor& t, const json& node, std::vector<int>& labels, int depth) {
  if (!node.is_array()) throw DomainError("dense tensor form must nest arrays");
  const auto& axis = t.axes()[static_cast<std::size_t>(depth)];
  if (node.size() != axis.size()) throw ShapeError("dense nesting does not match axis size");
  for (std::size_t i = 0; i < node.size(); ++i) {
    labels[static_cast<std::size_t>(depth)] = axis[i];
    if (depth + 1 == t.order()) {
      if (!node[i].is_number_integer()) throw DomainError("dense entries must be integers");
      t.set(labels, t.field().reduce(node[i].get<std::int64_t>()));
    } else {
      fill_dense(t, node[i], labels, depth + 1);
    }
  }
}

}  // namespace

Tensor tensor_from_json(const json& j) {
  if (!j.contains("p")) throw DomainError("tensor JSON needs field modulus 'p'");
  const PrimeField field(j.at("p").get<std::uint32_t>());
  if (!j.contains("axes")) throw DomainError("tensor JSON needs 'axes'");
  const Tensor::Axes axes = j.at("axes").get<Tensor::Axes>();
  Tensor t = Tensor::zeros(field, axes);

  if (j.contains("dense")) {
    if (t.order() > 3) throw DomainError("dense form accepted for order <= 3 only");
    std::vector<int> labels(static_cast<std::size_t>(t.order()));
    fill_dense(t, j.at("dense"), labels, 0);
    return t;
  }

  for (const auto& cell : j.value("entries", json::array())) {
    if (!cell.is_array() || cell.size() != axes.size() + 1) {
      throw DomainError("sparse entry must be [i_1, ..., i_d, value]");
    }
    std::vector<int> labels;
    labels.reserve(axes.size());
    for (std::size_t k = 0; k < axes.size(); ++k) labels.push_back(cell[k].get<int>());
    t.set(labels, field.reduce(cell[axes.size()].get<std::int64_t>()));
  }
  return t;
}

json basis_to_json(const SubspaceBasis& b) {
  json j;
  if (!b.tensors.empty()) j["p"] = b.tensors[0].field().p();
  json ts = json::array();
  for (const Tensor& t : b.tensors) ts.push_back(tensor_to_json(t));
  j["tensors"] = std::move(ts);
  return j;
}

SubspaceBasis basis_from_json(const json& j) {
  std::vector<Tensor> ts;
  for (const auto& tj : j.at("tensors")) {
    json merged = tj;
    if (!merged.contains("p") && j.contains("p")) merged["p"] = j.at("p");
    ts.push_back(tensor_from_json(merged));
  }
  return SubspaceBasis(std::move(ts));
}

json bias_to_json(const rank::BiasValue& b) {
  return json{{"num", b.num.str()}, {"p", b.p}, {"exp", b.exp}, {"arank", b.arank()}};
}

rank::BiasValue bias_from_json(const json& j) {
  return rank::BiasValue(rank::BigInt(j.at("num").get<std::string>()),
                         j.at("p").get<std::uint32_t>(), j.at("exp").get<std::uint32_t>());
}

json threshold_to_json(const rank::RankThreshold& t) {
  return json{{"base_num", t.base_num}, {"base_den", t.base_den}, {"power", t.power}};
}

rank::RankThreshold threshold_from_json(const json& j) {
  return {j.at("base_num").get<std::uint64_t>(), j.at("base_den").get<std::uint64_t>(),
          j.at("power").get<std::uint32_t>()};
}

json matching_to_json(const extract::MatchingId& m) {
  return json{{"zero_axis", m.zero_axis}, {"offsets", m.offsets}};
}

extract::MatchingId matching_from_json(const json& j) {
  return {j.at("zero_axis").get<int>(), j.at("offsets").get<std::vector<int>>()};
}

json certificate_to_json(const extract::ExtractionCertificate& c) {
  json j;
  j["params"] = {{"p", c.p}, {"d", c.d}, {"n", c.n}, {"t", c.t}, {"r", c.r}, {"s", c.s}};
  j["matching"] = matching_to_json(c.matching);
  j["f"] = c.f;
  j["selected"] = c.selected;
  json intervals = json::array();
  for (const auto& iv : c.intervals) {
    intervals.push_back(json{{"members", iv.members},
                             {"lambdas", iv.lambdas},
                             {"R_coeffs", iv.R_coeffs},
                             {"Tstar_coeffs", iv.Tstar_coeffs}});
  }
  j["intervals"] = std::move(intervals);
  j["threshold"] = threshold_to_json(c.threshold);
  json elems = json::array();
  for (const auto& eb : c.element_biases) {
    elems.push_back(json{{"coeffs", eb.coeffs}, {"bias", bias_to_json(eb.bias)}});
  }
  j["element_biases"] = std::move(elems);
  j["V_basis"] = basis_to_json(c.input_basis);
  j["W_basis"] = basis_to_json(c.W);
  return j;
}

extract::ExtractionCertificate certificate_from_json(const json& j) {
  extract::ExtractionCertificate c;
  const auto& params = j.at("params");
  c.p = params.at("p").get<std::uint32_t>();
  c.d = params.at("d").get<int>();
  c.n = params.at("n").get<int>();
  c.t = params.at("t").get<int>();
  c.r = params.at("r").get<int>();
  c.s = params.at("s").get<int>();
  c.matching = matching_from_json(j.at("matching"));
  c.f = j.at("f").get<std::vector<int>>();
  c.selected = j.at("selected").get<std::vector<std::size_t>>();
  for (const auto& ivj : j.at("intervals")) {
    extract::IntervalData iv;
    iv.members = ivj.at("members").get<std::vector<std::size_t>>();
    iv.lambdas = ivj.at("lambdas").get<std::vector<Fp>>();
    iv.R_coeffs = ivj.at("R_coeffs").get<std::vector<Fp>>();
    iv.Tstar_coeffs = ivj.at("Tstar_coeffs").get<std::vector<Fp>>();
    c.intervals.push_back(std::move(iv));
  }
  c.threshold = threshold_from_json(j.at("threshold"));
  for (const auto& ej : j.at("element_biases")) {
    c.element_biases.push_back({ej.at("coeffs").get<std::vector<Fp>>(), bias_from_json(ej.at("bias"))});
  }
  c.input_basis = basis_from_json(j.at("V_basis"));
  c.W = basis_from_json(j.at("W_basis"));
  return c;
}

json verify_report_to_json(const extract::VerifyReport& r) {
  json j;
  j["ok"] = r.ok;
  j["elements_checked"] = r.elements_checked;
  if (!r.ok) {
    j["failed_step"] = r.failed_step;
    j["detail"] = r.detail;
  }
  return j;
}

json sim_report_to_json(const szemeredi::SimReport& r, bool include_timing) {
  json j;
  j["params"] = {{"p", r.params.p},       {"k", r.params.k},         {"n", r.params.n},
                 {"samples", r.params.samples}, {"trials", r.params.trials}, {"seed", r.params.seed},
                 {"C_knob", r.params.C_knob}};
  j["generator"] = r.generator;
  j["monomial_dim"] = r.monomial_dim;
  j["derived_samples"] = r.derived_samples;
  j["independence_floor"] = r.independence_floor;
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back(json{{"independent", t.independent},
                          {"blocker_found", t.blocker_found},
                          {"ap_free", t.ap_free},
                          {"ap_mode", t.ap_mode},
                          {"set_size", t.set_size},
                          {"density", t.density},
                          {"set_enumerated", t.set_enumerated},
                          {"cw_applicable", t.cw_applicable},
                          {"cw_ok", t.cw_ok}});
  }
  j["trials"] = std::move(trials);
  j["aggregate"] = {{"independence_rate", r.independence_rate},
                    {"ap_free_rate", r.ap_free_rate},
                    {"mean_density", r.mean_density}};
  j["wall_ms"] = include_timing ? r.wall_ms : 0.0;
  return j;
}

json tail_report_to_json(const szemeredi::TailReport& r) {
  json j;
  j["ok"] = r.ok;
  j["dim"] = r.dim;
  j["mean_bias"] = {{"num", r.mean_bias_num}, {"exp_over_dim", r.mean_bias_exp}, {"value", r.mean_bias}};
  j["membership_prob"] = r.membership_prob;
  j["exact"] = r.exact;
  j["power_link_ok"] = r.power_link_ok;
  j["mean_link_ok"] = r.mean_link_ok;
  return j;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DomainError("JSON parse error in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace trk::io
