#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mckba/cpa.hpp"
#include "mckba/kpa.hpp"
#include "mckba/prob_analysis.hpp"

namespace mckba::cli {

// Parses argv (argv[0] is the program name), dispatches to the subcommand
// and returns the process exit status. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

Word parse_word(const std::string& text, unsigned n, const char* what);

nlohmann::ordered_json key_report(const EquivalentKey& key);
nlohmann::ordered_json merge_report(const MergeStats& stats);
nlohmann::ordered_json profile_report(const ConfirmationProfile& profile);

nlohmann::ordered_json tags_to_json(const std::vector<QueryTag>& tags, unsigned n, std::size_t width,
                                    std::size_t height, std::uint64_t seed);
std::vector<QueryTag> tags_from_json(const nlohmann::json& doc);

}  // namespace mckba::cli
