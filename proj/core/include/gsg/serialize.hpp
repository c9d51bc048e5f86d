#ifndef GSG_SERIALIZE_HPP
#define GSG_SERIALIZE_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gsg/parisi.hpp"
#include "gsg/types.hpp"

namespace gsg {

// flat binary layout: n (u64 LE), seed (u64 LE), n*n row-major doubles
void write_disorder_binary(std::ostream& os, const DisorderSample& s);
DisorderSample read_disorder_binary(std::istream& is);

nlohmann::json disorder_to_json(const DisorderSample& s);
DisorderSample disorder_from_json(const nlohmann::json& j);

// {"q": [...], "m": [...]}; invariants re-validated on load
nlohmann::json order_parameter_to_json(const PiecewiseOrderParameter& x);
PiecewiseOrderParameter order_parameter_from_json(const nlohmann::json& j);

nlohmann::json params_to_json(const ModelParams& p);
nlohmann::json config_to_json(const McConfig& cfg);
nlohmann::json estimate_to_json(const McEstimate& e);

// persisted result record {params, cfg, estimates, git_describe, timestamp}
nlohmann::json make_run_record(const ModelParams& p, const McConfig& cfg,
                               const nlohmann::json& estimates);

const char* git_describe();

}  // namespace gsg

#endif
