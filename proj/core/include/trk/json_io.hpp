#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "trk/basis.hpp"
#include "trk/bias.hpp"
#include "trk/coset.hpp"
#include "trk/extract.hpp"
#include "trk/szemeredi.hpp"
#include "trk/tensor.hpp"

namespace trk::io {

using json = nlohmann::json;

// Tensor wire format: {"p": int, "axes": [[labels...], ...],
// "entries": [[i_1, ..., i_d, value], ...]} with omitted coordinates
// zero. A dense nested-array "dense" form is accepted for order <= 3.
json tensor_to_json(const algebra::Tensor& t);
algebra::Tensor tensor_from_json(const json& j);

json basis_to_json(const algebra::SubspaceBasis& b);
algebra::SubspaceBasis basis_from_json(const json& j);

// {"num": decimal string, "p": int, "exp": int, "arank": float}
json bias_to_json(const rank::BiasValue& b);
rank::BiasValue bias_from_json(const json& j);

json threshold_to_json(const rank::RankThreshold& t);
rank::RankThreshold threshold_from_json(const json& j);

json matching_to_json(const extract::MatchingId& m);
extract::MatchingId matching_from_json(const json& j);

json certificate_to_json(const extract::ExtractionCertificate& c);
extract::ExtractionCertificate certificate_from_json(const json& j);

json verify_report_to_json(const extract::VerifyReport& r);

// include_timing=false zeroes wall-clock fields so byte comparison works.
json sim_report_to_json(const szemeredi::SimReport& r, bool include_timing = true);

json tail_report_to_json(const szemeredi::TailReport& r);

json load_file(const std::string& path);

}  // namespace trk::io
