#pragma once

#include <string>

#include "circlerev/json_io.hpp"

namespace circlerev {

// CLI report: deterministic JSON keyed by command, input digest and seed.
// Timing is kept out of the JSON body so identical inputs and seeds produce
// byte-identical reports; the CLI prints timing to stderr instead.
struct Report {
    std::string command;
    std::string input_digest;
    std::uint64_t seed = 0;
    Json params = Json::object();
    Json results = Json::object();

    Json to_json() const;
    std::string dump() const { return to_json().dump(2) + "\n"; }
};

std::string render_word_human(const SignatureWord& w);

}  // namespace circlerev
