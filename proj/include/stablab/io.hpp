#pragma once

#include <string>

#include <json.hpp>

#include "stablab/gtilde.hpp"
#include "stablab/limits.hpp"
#include "stablab/model.hpp"
#include "stablab/stability.hpp"
#include "stablab/tilting.hpp"

namespace stablab::io {

using json = nlohmann::json;

/// Reads a JSON file; syntax errors become Parse errors naming the file and
/// byte offset.
json read_json_file(const std::string& path);

CategoryModel parse_model(const json& j);
json model_to_json(const CategoryModel& model);
/// parse + finalize_model
ModelPtr load_model(const std::string& path);

/// [re_num, re_den, im_num, im_den] (exact) or [re, im] (floating).
ComplexValue parse_complex(const json& j);
json complex_to_json(const ComplexValue& z);

/// "H<k>" or "H<k>[s]": atlas heart k shifted by s.
std::string heart_name(const CategoryModel& model, const Heart& heart);
Heart parse_heart(const CategoryModel& model, const json& j);
json heart_to_json(const CategoryModel& model, const Heart& heart);

StabilityCondition parse_stability(const ModelPtr& model, const json& j);
StabilityCondition load_stability(const ModelPtr& model, const std::string& path);
json stability_to_json(const StabilityCondition& s);

GroupElement parse_group(const json& j);
GroupElement load_group(const std::string& path);
json group_to_json(const GroupElement& g);

/// The "model" path is resolved relative to the sequence file unless a
/// model is supplied.
StabilitySequence load_sequence(const std::string& path, ModelPtr model = nullptr);

json report_to_json(const Report& r);
json hn_to_json(const CategoryModel& model, const HNFiltration& hn);
json torsion_pair_to_json(const CategoryModel& model, const TorsionPair& p);
json atlas_to_json(const CategoryModel& model);

/// Sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace stablab::io
