#pragma once

#include <json.hpp>

#include "circlerev/dynamics.hpp"
#include "circlerev/eval_map.hpp"
#include "circlerev/factorization.hpp"
#include "circlerev/pl_map.hpp"
#include "circlerev/reversibility.hpp"

namespace circlerev {

using Json = nlohmann::ordered_json;

Json plmap_to_json(const PLMap& f);
PLMap plmap_from_json(const Json& j);

Json eval_map_to_json_obj(const EvalMap& m);
EvalMap eval_map_from_json_obj(const Json& j);

Json fixset_to_json(const FixSet& f);
Json word_to_json(const SignatureWord& w);
Json rotation_to_json(const RotationNumberResult& r);
Json verdict_to_json(const Verdict& v);
Json matching_to_json(const ComponentMatching& m);
Json verification_to_json(const VerificationReport& r);

Json witness_to_json(const Witness& w);
Witness witness_from_json(const Json& j);

// Stable content digest (FNV-1a over the canonical serialization).
std::string digest_hex(const std::string& content);

}  // namespace circlerev
